//! The five commands behind the `tripletforge` binary. Each reads a
//! [`RunConfig`], writes its files into an output directory and returns
//! the run manifest.

mod table;

use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;

pub use table::{combination_name, throughput_table, Quantity, TableEntry, ThroughputTable, COMBINATIONS, TABLE_ZERO_FLOOR};

use crate::constants::{omega_from_wavelength, wavelength_from_omega};
use crate::error::{Error, Result};
use crate::io::svg::{heatmap, line_plot, write_svg, Series};
use crate::io::{
    build_source, jsi_csv_rows, write_csv, write_jsi_binary, DispersionCache, JsiCube, JsiFormat, RunConfig,
    RunManifest,
};
use crate::jsa::{grid_window, joint_amplitude, FrequencyGrid, Source, SpectralKind};
use crate::seeding::{level_set_topology, OutputGrid, Seeder};
use crate::tomography::{fidelity, reconstruct_jsi, simulate_set_scan, truth_plane, upsample_bilinear, SetScanConfig};

/// Options shared by every command.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    pub svg: bool,
    /// `None` disables the dispersion cache.
    pub cache: Option<DispersionCache>,
}

impl RunOptions {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self { out: out.into(), svg: true, cache: None }
    }

    pub fn with_cache(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache = Some(DispersionCache::new(dir));
        self
    }

    pub fn without_svg(mut self) -> Self {
        self.svg = false;
        self
    }
}

struct Run {
    manifest: RunManifest,
    out: PathBuf,
    svg: bool,
    started: Instant,
}

impl Run {
    fn start(command: &str, cfg: &RunConfig, opts: &RunOptions) -> Result<Self> {
        cfg.validate()?;
        std::fs::create_dir_all(&opts.out)?;
        Ok(Self { manifest: RunManifest::new(command, cfg), out: opts.out.clone(), svg: opts.svg, started: Instant::now() })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.manifest.outputs.push(name.to_string());
        self.out.join(name)
    }

    fn time(&mut self, label: &str, since: Instant) {
        self.manifest.timings_s.push((label.to_string(), since.elapsed().as_secs_f64()));
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
        let p = self.path(name);
        write_csv(&p, header, rows)
    }

    fn svg(&mut self, name: &str, doc: impl FnOnce() -> String) -> Result<()> {
        if self.svg {
            let p = self.path(name);
            write_svg(&p, &doc())?;
        }
        Ok(())
    }

    fn json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let p = self.path(name);
        std::fs::write(p, serde_json::to_string_pretty(value)?)?;
        Ok(())
    }

    fn finish(mut self) -> Result<RunManifest> {
        let total = self.started.elapsed().as_secs_f64();
        self.manifest.timings_s.push(("total".into(), total));
        let name = format!("{}-manifest.json", self.manifest.command);
        self.manifest.write(&self.out.join(&name))?;
        info!("{} finished in {total:.2} s; outputs in {}", self.manifest.command, self.out.display());
        Ok(self.manifest)
    }
}

fn source_for(run: &mut Run, cfg: &RunConfig, opts: &RunOptions, kind: Option<SpectralKind>) -> Result<Source> {
    let t = Instant::now();
    let (source, events) = build_source(cfg.source_config(kind, None)?, opts.cache.as_ref())?;
    run.manifest.cache.extend(events);
    run.time("dispersion", t);
    Ok(source)
}

fn seeder_for(run: &mut Run, cfg: &RunConfig, source: &Source) -> Result<Seeder> {
    let t = Instant::now();
    let window = grid_window(source)?;
    let seeder = Seeder::with_output(source, OutputGrid::from_window(window, cfg.output_cells)?)?;
    run.manifest.convergence.push((format!("spontaneous integral ({} pump)", source.pump().kind), seeder.spontaneous().integral.clone()));
    run.time("spontaneous rate", t);
    Ok(seeder)
}

/// Solve the pump and triplet mode curves and write them out (and to the cache).
pub fn cmd_dispersion(cfg: &RunConfig, opts: &RunOptions) -> Result<RunManifest> {
    let mut run = Run::start("dispersion", cfg, opts)?;
    let source = source_for(&mut run, cfg, opts, None)?;
    for (name, curve) in [("pump", source.pump_curve()), ("triplet", source.triplet_curve())] {
        let rows: Vec<Vec<f64>> = curve
            .omega_samples()
            .iter()
            .zip(curve.n_eff_samples())
            .map(|(&w, &n)| {
                let ng = crate::constants::SPEED_OF_LIGHT * curve.dk_domega(w).unwrap_or(f64::NAN);
                vec![wavelength_from_omega(w) * 1e9, w, n, ng]
            })
            .collect();
        run.csv(&format!("dispersion_{name}.csv"), &["lambda_nm", "omega_rad_per_s", "n_eff", "n_group"], &rows)?;
        let lam: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let n: Vec<f64> = rows.iter().map(|r| r[2]).collect();
        run.svg(&format!("dispersion_{name}.svg"), || {
            line_plot(&format!("{} effective index", curve.label()), "wavelength (nm)", "n_eff", &[Series { name: "n_eff", x: &lam, y: &n }], false)
        })?;
    }
    let summary = serde_json::json!({
        "pump_mode": source.pump_curve().label().to_string(),
        "triplet_mode": source.triplet_curve().label().to_string(),
        "n0": source.n0(),
        "gamma_per_W_m": source.gamma(),
        "phase_mismatch_at_degeneracy_per_m": crate::jsa::delta_k(&source, source.omega0() / 3.0, source.omega0() / 3.0, source.omega0() / 3.0).ok(),
    });
    run.json("dispersion_summary.json", &summary)?;
    run.finish()
}

/// Joint spectral intensity on a cubic grid, its marginals and figures.
pub fn cmd_jsi(cfg: &RunConfig, opts: &RunOptions) -> Result<RunManifest> {
    let mut run = Run::start("jsi", cfg, opts)?;
    let source = source_for(&mut run, cfg, opts, None)?;
    let t = Instant::now();
    let (lo, hi) = grid_window(&source)?;
    let grid = FrequencyGrid::plane_aligned(source.omega0(), lo, hi, cfg.jsi.nodes)?;
    let jsa = joint_amplitude(&source, &grid, cfg.jsi.normalized)?;
    run.time("joint amplitude", t);
    let cube = JsiCube::from_amplitude(&jsa);
    let hash = run.manifest.config_hash.clone();
    match cfg.jsi.format {
        JsiFormat::Binary => {
            run.manifest.outputs.extend(["jsi.json".to_string(), "jsi.f64".to_string()]);
            write_jsi_binary(&run.out, "jsi", &cube, &hash)?;
        }
        JsiFormat::Csv => run.csv("jsi.csv", &["lambda1_nm", "lambda2_nm", "lambda3_nm", "jsi"], &jsi_csv_rows(&cube))?,
    }
    let lam = cube.lambda_nm();
    let n = grid.count;
    let m = jsa.marginals();
    for (name, plane, (a, b)) in [("12", &m.plane_12, ("1", "2")), ("13", &m.plane_13, ("1", "3")), ("23", &m.plane_23, ("2", "3"))] {
        let rows: Vec<Vec<f64>> = (0..n * n).map(|p| vec![lam[p / n], lam[p % n], plane[p]]).collect();
        let (ha, hb) = (format!("lambda{a}_nm"), format!("lambda{b}_nm"));
        run.csv(&format!("marginal_{name}.csv"), &[&ha, &hb, "marginal"], &rows)?;
        // columns run along the second kept axis, rows along the first
        run.svg(&format!("marginal_{name}.svg"), || {
            heatmap(&format!("marginal over the other mode ({a},{b})"), &format!("lambda{b} (nm)"), &format!("lambda{a} (nm)"), &lam, &lam, plane)
        })?;
    }
    let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![lam[i], m.axis_1[i], m.axis_2[i], m.axis_3[i]]).collect();
    run.csv("marginal_axes.csv", &["lambda_nm", "axis1", "axis2", "axis3"], &rows)?;
    let (i, j, k) = jsa.argmax();
    let summary = serde_json::json!({
        "nodes": n,
        "window_nm": [wavelength_from_omega(grid.omega_max()) * 1e9, wavelength_from_omega(grid.omega_min) * 1e9],
        "argmax_nm": [lam[i], lam[j], lam[k]],
        "total": jsa.total(),
        "norm": jsa.norm,
        "degenerate_wavelength_nm": 3.0 * wavelength_from_omega(source.omega0()) * 1e9,
        "two_lobed_axis_marginal": m.two_lobed(grid.center_index()),
    });
    run.json("jsi_summary.json", &summary)?;
    run.finish()
}

fn scan_lambdas(seeder: &Seeder, lo_nm: Option<f64>, hi_nm: Option<f64>, points: usize) -> Vec<f64> {
    let (wlo, whi) = seeder.window();
    let lo = lo_nm.map_or(wavelength_from_omega(whi), |v| v * 1e-9);
    let hi = hi_nm.map_or(wavelength_from_omega(wlo), |v| v * 1e-9);
    (0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect()
}

/// Seed-wavelength scans: single-seed spectra, the 1-D N1/N2 curves and
/// the 2-D double-seed map, plus a throughput report for the listed seeds.
pub fn cmd_scan(cfg: &RunConfig, opts: &RunOptions) -> Result<RunManifest> {
    let mut run = Run::start("scan", cfg, opts)?;
    let source = source_for(&mut run, cfg, opts, Some(cfg.scan.pump_kind))?;
    let seeder = seeder_for(&mut run, cfg, &source)?;
    let template = cfg.seed_spec(&cfg.scan.seed, 3.0 * cfg.pump.lambda_nm)?;

    let t = Instant::now();
    let mut spectra: Vec<Vec<f64>> = Vec::new();
    let mut names = Vec::new();
    for &l in &cfg.scan.spectra_at_nm {
        let seed = template.at_omega(omega_from_wavelength(l * 1e-9));
        let report = seeder.throughput(std::slice::from_ref(&seed), true)?;
        let s = report.n1_spectrum.expect("spectra were requested");
        if spectra.is_empty() {
            spectra.push(s.lambda_nm.clone());
        }
        spectra.push(s.per_nm);
        names.push(format!("N1_per_s_per_nm_seed_{l}nm"));
    }
    if !names.is_empty() {
        let mut header = vec!["lambda_nm"];
        header.extend(names.iter().map(String::as_str));
        let rows: Vec<Vec<f64>> = (0..spectra[0].len()).map(|r| spectra.iter().map(|c| c[r]).collect()).collect();
        run.csv("scan_single_spectra.csv", &header, &rows)?;
        run.svg("scan_single_spectra.svg", || {
            let series: Vec<Series> =
                names.iter().enumerate().map(|(k, n)| Series { name: n, x: &spectra[0], y: &spectra[k + 1] }).collect();
            line_plot("singly seeded spectra", "wavelength (nm)", "photons/s/nm", &series, false)
        })?;
    }
    run.time("single-seed spectra", t);

    let t = Instant::now();
    let lambdas = scan_lambdas(&seeder, cfg.scan.lambda_min_nm, cfg.scan.lambda_max_nm, cfg.scan.points);
    let rows = seeder.seed_scan(&template, &lambdas)?;
    let table: Vec<Vec<f64>> = rows.iter().map(|r| vec![r.lambda_nm, r.n1_per_s, r.n2_per_s]).collect();
    run.csv("scan_1d.csv", &["lambda_nm", "N1_per_s", "N2_per_s"], &table)?;
    let (x, n1, n2): (Vec<f64>, Vec<f64>, Vec<f64>) = (
        rows.iter().map(|r| r.lambda_nm).collect(),
        rows.iter().map(|r| r.n1_per_s).collect(),
        rows.iter().map(|r| r.n2_per_s).collect(),
    );
    run.svg("scan_1d.svg", || {
        line_plot(
            "total seeded flux",
            "seed wavelength (nm)",
            "photons/s",
            &[Series { name: "single", x: &x, y: &n1 }, Series { name: "double (degenerate)", x: &x, y: &n2 }],
            true,
        )
    })?;
    run.time("1-D scan", t);

    let t = Instant::now();
    let map_l = scan_lambdas(&seeder, cfg.scan.lambda_min_nm, cfg.scan.lambda_max_nm, cfg.scan.map_points);
    let map = seeder.double_seed_map(&template, &map_l)?;
    let n = map.len();
    let rows: Vec<Vec<f64>> = (0..n * n).map(|p| vec![map.lambda_nm[p / n], map.lambda_nm[p % n], map.n2_per_s[p]]).collect();
    run.csv("scan_map.csv", &["lambda_seed1_nm", "lambda_seed2_nm", "N2_per_s"], &rows)?;
    run.svg("scan_map.svg", || {
        heatmap("doubly seeded flux", "seed 2 wavelength (nm)", "seed 1 wavelength (nm)", &map.lambda_nm, &map.lambda_nm, &map.n2_per_s)
    })?;
    let topo = level_set_topology(&map.n2_per_s, n, 0.1)?;
    run.json("scan_map_topology.json", &serde_json::json!({ "threshold_fraction": 0.1, "topology": topo, "ring": topo.is_ring() }))?;
    run.time("2-D map", t);

    if !cfg.seeds.is_empty() {
        let t = Instant::now();
        let main = source_for(&mut run, cfg, opts, None)?;
        let main_seeder = seeder_for(&mut run, cfg, &main)?;
        let seeds = cfg.seeds.iter().map(|s| cfg.seed_spec(&s.template(), s.lambda_nm)).collect::<Result<Vec<_>>>()?;
        let report = main_seeder.throughput(&seeds, true)?;
        run.manifest.warnings.extend(report.warnings.clone());
        run.json("throughput.json", &report)?;
        run.time("throughput report", t);
    }
    run.finish()
}

/// Throughput table at the configured points for all four kind pairings.
pub fn cmd_table(cfg: &RunConfig, opts: &RunOptions) -> Result<RunManifest> {
    let mut run = Run::start("table", cfg, opts)?;
    let t = Instant::now();
    let table = throughput_table(cfg, opts.cache.as_ref())?;
    run.time("table", t);
    run.manifest.conventions.notes.extend([
        "absolute fluxes scale as chi3^2 and with the modelled dispersion and overlap; ratios within one pump/seed pairing cancel both".to_string(),
        "pulsed-pulsed entries assume perfect temporal matching (zero delay) and a common repetition rate".to_string(),
        "pulsed pump with CW seeds: per-pulse overlaps times the pump repetition rate; no extra temporal-mismatch penalty".to_string(),
        "CW pump with pulsed seeds: the overlap carries units of time and is taken per seed pulse, times the seed repetition rate".to_string(),
        format!("entries below {TABLE_ZERO_FLOOR:e} of the largest value of the same pairing and quantity are reported as 0"),
    ]);
    let mut text = String::from("combination,point,quantity,lambda1_nm,lambda2_nm,flux_per_s\n");
    for e in &table.entries {
        let q = match e.quantity {
            Quantity::Single => "N_I",
            Quantity::Double => "N_II",
        };
        let l2 = e.lambda2_nm.map_or(String::new(), crate::io::fmt_num);
        text.push_str(&format!(
            "{},{},{q},{},{l2},{}\n",
            e.combination,
            e.point,
            crate::io::fmt_num(e.lambda1_nm),
            crate::io::fmt_num(e.flux_per_s)
        ));
    }
    let p = run.path("table.csv");
    std::fs::write(p, text)?;
    run.manifest.warnings.extend(table.warnings.clone());
    run.json("table.json", &table)?;
    run.finish()
}

/// Tomography raster, reconstruction, archive and fidelity report.
pub fn cmd_set(cfg: &RunConfig, opts: &RunOptions) -> Result<RunManifest> {
    let mut run = Run::start("set", cfg, opts)?;
    let source = source_for(&mut run, cfg, opts, Some(SpectralKind::Pulsed))?;
    let seeder = seeder_for(&mut run, cfg, &source)?;
    let s = &cfg.set;
    let mut scan = SetScanConfig::covering(&seeder, s.raster_points, s.power_mw * 1e-3);
    if s.lambda_min_nm.is_some() || s.lambda_max_nm.is_some() {
        let l = scan_lambdas(&seeder, s.lambda_min_nm, s.lambda_max_nm, s.raster_points);
        scan.seed_i_lambda_m = l.clone();
        scan.seed_j_lambda_m = l;
    }
    scan.linewidth_hz = s.linewidth_mhz * 1e6;
    scan.output_nodes = s.output_nodes;
    scan.diagonal_skip_cells = s.diagonal_skip_cells;

    let t = Instant::now();
    let raster = simulate_set_scan(&seeder, &scan)?;
    run.time("raster", t);
    let t = Instant::now();
    let recon = reconstruct_jsi(&raster)?;
    run.time("reconstruction", t);

    // archive: one CSV per measured point, plus the index
    let dir = run.out.join("set_raster");
    std::fs::create_dir_all(&dir)?;
    let lam1: Vec<f64> = raster.omega1.iter().map(|&w| wavelength_from_omega(w) * 1e9).collect();
    let cols = raster.cols();
    for a in 0..raster.rows() {
        for b in 0..cols {
            if let Some(spec) = raster.spectrum(a, b) {
                let rows: Vec<Vec<f64>> = lam1.iter().zip(spec).map(|(l, v)| vec![*l, *v]).collect();
                write_csv(&dir.join(format!("point_{a:03}_{b:03}.csv")), &["lambda1_nm", "N2_per_s_per_k1"], &rows)?;
            }
        }
    }
    run.manifest.outputs.push("set_raster/".into());
    let index = serde_json::json!({
        "seed_i_lambda_nm": recon.lambda_i_nm,
        "seed_j_lambda_nm": recon.lambda_j_nm,
        "power_i_W": scan.power_i_w,
        "power_j_W": scan.power_j_w,
        "linewidth_hz": scan.linewidth_hz,
        "delta_k_i_per_m": raster.delta_k_i,
        "delta_k_j_per_m": raster.delta_k_j,
        "diagonal_skip_cells": scan.diagonal_skip_cells,
        "skipped_points": raster.skipped,
        "config_hash": run.manifest.config_hash,
    });
    run.json("set_raster/index.json", &index)?;

    let rows: Vec<Vec<f64>> =
        (0..recon.plane.len()).map(|p| vec![recon.lambda_i_nm[p / cols], recon.lambda_j_nm[p % cols], recon.plane[p]]).collect();
    run.csv("set_reconstructed_plane.csv", &["lambda_seed1_nm", "lambda_seed2_nm", "jsi_marginal"], &rows)?;
    run.svg("set_reconstructed_plane.svg", || {
        heatmap("reconstructed seed-plane marginal", "seed 2 wavelength (nm)", "seed 1 wavelength (nm)", &recon.lambda_j_nm, &recon.lambda_i_nm, &recon.plane)
    })?;

    let t = Instant::now();
    let fine_i = scan_lambdas_from(&scan.seed_i_lambda_m, s.truth_points);
    let fine_j = scan_lambdas_from(&scan.seed_j_lambda_m, s.truth_points);
    let truth = truth_plane(&seeder, &fine_i, &fine_j)?;
    let to_nm = |v: &[f64]| v.iter().map(|l| l * 1e9).collect::<Vec<_>>();
    let up = upsample_bilinear(&recon.plane, &recon.lambda_i_nm, &recon.lambda_j_nm, &to_nm(&fine_i), &to_nm(&fine_j));
    let fid = fidelity(&up, &truth)?;
    run.time("fidelity", t);
    let topo = level_set_topology(&recon.plane, raster.rows(), 0.1).ok();
    let report = serde_json::json!({
        "fidelity": fid,
        "raster_points": s.raster_points,
        "truth_points": s.truth_points,
        "reconstructed_total": recon.total(&raster),
        "half_n0_per_s": 0.5 * raster.n0_per_s,
        "worst_contamination_ratio": raster.worst_contamination(),
        "ring": topo.as_ref().map(|t| t.is_ring()),
        "warnings": raster.warnings,
    });
    run.manifest.warnings.extend(raster.warnings.clone());
    run.json("set_fidelity.json", &report)?;

    // reconstruction in the joint-intensity export format: (ω1, ωi, ωj) axes
    let hdr = serde_json::json!({
        "format": "f64le",
        "order": "seed_i-major, then seed_j, then omega1",
        "shape": [raster.rows(), cols, raster.omega1.len()],
        "seed_i_lambda_nm": recon.lambda_i_nm,
        "seed_j_lambda_nm": recon.lambda_j_nm,
        "omega1_min_rad_s": raster.omega1[0],
        "omega1_step_rad_s": raster.omega1[1] - raster.omega1[0],
        "quantity": "(N0/2)|phi(k1,ki,kj)|^2, NaN at skipped points",
        "config_hash": run.manifest.config_hash,
        "data_file": "set_reconstruction.f64",
    });
    run.json("set_reconstruction.json", &hdr)?;
    let bytes: Vec<u8> = recon.values.iter().flat_map(|v| v.to_le_bytes()).collect();
    let p = run.path("set_reconstruction.f64");
    std::fs::write(p, bytes)?;
    run.finish()
}

fn scan_lambdas_from(grid: &[f64], n: usize) -> Vec<f64> {
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Subcommand names accepted by [`run_command`].
pub const COMMANDS: [&str; 5] = ["dispersion", "jsi", "scan", "table", "set"];

pub fn run_command(name: &str, cfg: &RunConfig, opts: &RunOptions) -> Result<RunManifest> {
    match name {
        "dispersion" => cmd_dispersion(cfg, opts),
        "jsi" => cmd_jsi(cfg, opts),
        "scan" => cmd_scan(cfg, opts),
        "table" => cmd_table(cfg, opts),
        "set" => cmd_set(cfg, opts),
        other => Err(Error::Validation(format!("unknown command '{other}'"))),
    }
}

/// Load a config file, or the degenerate preset when no path is given.
pub fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    match path {
        Some(p) => RunConfig::from_path(p),
        None => RunConfig::preset("degenerate"),
    }
}
