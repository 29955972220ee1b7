//! Seeded fluxes for all four pump/seed kind pairings at one spectral point.

use tripletforge::cli::throughput_table;
use tripletforge::io::{RunConfig, TablePoint};

fn main() -> tripletforge::Result<()> {
    let mut cfg = RunConfig::preset("degenerate")?;
    cfg.table.points = vec![TablePoint { label: "A".into(), pump_lambda_nm: 532.0, seeds_nm: vec![1596.0] }];
    let table = throughput_table(&cfg, None)?;
    for e in &table.entries {
        let pair = e.lambda2_nm.map_or(String::new(), |l| format!(", {l:.0}"));
        println!("{:<14} {} {:?}({:.0}{pair}) = {:.3e}/s", e.combination, e.point, e.quantity, e.lambda1_nm, e.flux_per_s);
    }
    Ok(())
}
