//! Seeded emission with two CW seeds on a CW pump: every single, self and
//! cross contribution, and the emitted spectrum of the total.

use tripletforge::io::RunConfig;
use tripletforge::jsa::{Source, SpectralKind};
use tripletforge::seeding::Seeder;

fn main() -> tripletforge::Result<()> {
    let cfg = RunConfig::preset("nondegenerate")?;
    let source = Source::build(cfg.source_config(Some(SpectralKind::Monochromatic), None)?)?;
    let seeder = Seeder::new(&source)?;
    let template = cfg.scan.seed.clone();
    let seeds = [cfg.seed_spec(&template, 1532.0)?, cfg.seed_spec(&template, 1664.0)?];
    let report = seeder.throughput(&seeds, true)?;

    println!("N0 = {:.3e}/s  N1 = {:.3e}/s  N2 = {:.3e}/s", report.n0_per_s, report.n1_per_s, report.n2_per_s);
    for c in &report.contributions {
        let theta = c.theta.map_or("-".to_string(), |t| format!("{t:.3e}"));
        println!("{:?} {:?}: {:.3e}/s (theta {theta})", c.kind, c.seeds, c.flux_per_s);
    }
    if let Some(s) = &report.n1_spectrum {
        let peak = s.per_nm.iter().cloned().fold(0.0, f64::max);
        println!("single-seed spectrum peak {peak:.3e} photons/s/nm over {} cells", s.per_nm.len());
    }
    for w in &report.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
