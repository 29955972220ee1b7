//! Drive the command layer from code: run `dispersion` and `jsi` into a
//! scratch directory and list what each run wrote.

use tripletforge::cli::{run_command, RunOptions};
use tripletforge::io::RunConfig;

fn main() -> tripletforge::Result<()> {
    let mut cfg = RunConfig::from_json_str(r#"{"preset": "degenerate", "jsi": {"nodes": 24, "format": "csv"}}"#)?;
    cfg.output_cells = 256;
    let out = std::env::temp_dir().join("tripletforge-example");
    let opts = RunOptions::new(&out).with_cache(out.join("cache")).without_svg();
    for cmd in ["dispersion", "jsi"] {
        let manifest = run_command(cmd, &cfg, &opts)?;
        println!("{cmd}: config {} -> {:?}", &manifest.config_hash[..12], manifest.outputs);
    }
    println!("written under {}", out.display());
    Ok(())
}
