//! Stimulated-emission tomography: raster two narrow CW seeds under a
//! pulsed pump, reconstruct the joint intensity and score it against the
//! spontaneous marginal.

use tripletforge::io::RunConfig;
use tripletforge::jsa::{Source, SpectralKind};
use tripletforge::seeding::Seeder;
use tripletforge::tomography::{fidelity, reconstruct_jsi, simulate_set_scan, truth_plane, upsample_bilinear, SetScanConfig};

fn main() -> tripletforge::Result<()> {
    let cfg = RunConfig::preset("degenerate")?;
    let source = Source::build(cfg.source_config(Some(SpectralKind::Pulsed), None)?)?;
    let seeder = Seeder::new(&source)?;
    let truth_axis: Vec<f64> = {
        let probe = SetScanConfig::covering(&seeder, 2, 1e-3);
        let (lo, hi) = (probe.seed_i_lambda_m[0], probe.seed_i_lambda_m[1]);
        (0..96).map(|k| lo + (hi - lo) * k as f64 / 95.0).collect()
    };
    let truth = truth_plane(&seeder, &truth_axis, &truth_axis)?;
    let nm: Vec<f64> = truth_axis.iter().map(|l| l * 1e9).collect();

    for n in [12, 24, 48] {
        let scan = SetScanConfig::covering(&seeder, n, 1e-3);
        let raster = simulate_set_scan(&seeder, &scan)?;
        let recon = reconstruct_jsi(&raster)?;
        let up = upsample_bilinear(&recon.plane, &recon.lambda_i_nm, &recon.lambda_j_nm, &nm, &nm);
        println!(
            "{n:>3}x{n:<3} raster: fidelity {:.4}, recovered N0/2 = {:.4}/s (exact {:.4}/s)",
            fidelity(&up, &truth)?,
            recon.total(&raster),
            0.5 * raster.n0_per_s
        );
    }
    Ok(())
}
