use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tripletforge::cli::{load_config, run_command, RunOptions};
use tripletforge::io::DispersionCache;

#[derive(Parser)]
#[command(name = "tripletforge", version, about = "Photon-triplet generation and seeded tomography in thin fibers")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// JSON config merged over its preset (defaults to the degenerate preset)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Skip SVG figures
    #[arg(long, global = true)]
    no_svg: bool,
    /// Dispersion cache directory (TRIPLETFORGE_CACHE takes precedence)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Solve and export the pump and triplet mode dispersion
    Dispersion,
    /// Spontaneous joint spectral intensity and its marginals
    Jsi,
    /// Single- and double-seed wavelength scans
    Scan,
    /// Seeded throughput table
    Table,
    /// Stimulated-emission tomography of the joint spectrum
    Set,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Dispersion => "dispersion",
            Command::Jsi => "jsi",
            Command::Scan => "scan",
            Command::Table => "table",
            Command::Set => "set",
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = Args::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(args.threads).build_global() {
        log::warn!("thread pool: {e}");
    }
    let mut opts = RunOptions::new(&args.out).with_cache(DispersionCache::resolve_dir(args.cache_dir.as_deref()));
    if args.no_svg {
        opts = opts.without_svg();
    }
    let result = load_config(args.config.as_deref()).and_then(|cfg| run_command(args.command.name(), &cfg, &opts));
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
