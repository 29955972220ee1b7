//! Sweep one CW seed across the phase-matched band, then scan two seeds
//! independently and classify the shape of the doubly seeded map.

use tripletforge::io::RunConfig;
use tripletforge::jsa::{Source, SpectralKind};
use tripletforge::seeding::{level_set_topology, Seeder};

fn main() -> tripletforge::Result<()> {
    let cfg = RunConfig::preset("nondegenerate")?;
    let source = Source::build(cfg.source_config(Some(SpectralKind::Monochromatic), None)?)?;
    let seeder = Seeder::new(&source)?;
    let template = cfg.seed_spec(&cfg.scan.seed, 1593.0)?;

    let lambdas: Vec<f64> = (0..31).map(|k| (1450.0 + 10.0 * k as f64) * 1e-9).collect();
    println!(" seed (nm)     N1 (/s)      N2 (/s)");
    for row in seeder.seed_scan(&template, &lambdas)? {
        println!("{:>9.1}  {:>10.3e}  {:>10.3e}", row.lambda_nm, row.n1_per_s, row.n2_per_s);
    }

    let grid: Vec<f64> = (0..101).map(|k| (1450.0 + 3.0 * k as f64) * 1e-9).collect();
    let map = seeder.double_seed_map(&template, &grid)?;
    let topo = level_set_topology(&map.n2_per_s, map.len(), 0.1)?;
    println!("\ndouble-seed map: {} component(s), centroid inside: {}, ring: {}", topo.components, topo.centroid_inside, topo.is_ring());
    Ok(())
}
