use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_tripletforge");

/// Small grids so the whole file runs in seconds.
const LIGHT: &str = r#"{
  "output_cells": 128,
  "jsi": {"nodes": 32, "format": "csv"},
  "scan": {"points": 9, "map_points": 9, "spectra_at_nm": [1596]},
  "table": {"points": [{"label": "A", "pump_lambda_nm": 532, "seeds_nm": [1596]}]},
  "set": {"raster_points": 6, "output_nodes": 128, "truth_points": 24}
}"#;

fn run(args: &[&str], config: Option<&str>, dir: &Path, env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("TRIPLETFORGE_CACHE").env("RUST_LOG", "warn");
    if let Some(text) = config {
        let p = dir.join("config.json");
        std::fs::write(&p, text).unwrap();
        cmd.arg("--config").arg(p);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn out_dir(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

/// Every CSV/JSON output except the manifest, by relative path.
fn data_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
                continue;
            }
            let name = p.strip_prefix(dir).unwrap().to_string_lossy().to_string();
            let keep = (name.ends_with(".csv") || name.ends_with(".json") || name.ends_with(".f64")) && !name.ends_with("-manifest.json");
            if keep {
                files.insert(name, std::fs::read(&p).unwrap());
            }
        }
    }
    files
}

#[test]
fn every_command_writes_outputs_and_a_manifest() {
    let tmp = TempDir::new().unwrap();
    let cache = tmp.path().join("cache");
    for cmd in ["dispersion", "jsi", "scan", "table", "set"] {
        let out = out_dir(tmp.path(), cmd);
        let o = run(
            &[cmd, "--out", out.to_str().unwrap(), "--cache-dir", cache.to_str().unwrap(), "--threads", "1"],
            Some(LIGHT),
            tmp.path(),
            &[],
        );
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let manifest: serde_json::Value =
            serde_json::from_slice(&std::fs::read(out.join(format!("{cmd}-manifest.json"))).unwrap()).unwrap();
        assert_eq!(manifest["command"], cmd);
        assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
        for f in manifest["outputs"].as_array().unwrap() {
            assert!(out.join(f.as_str().unwrap()).exists(), "{cmd}: missing {f}");
        }
        assert!(data_files(&out).keys().any(|k| k.ends_with(".csv")), "{cmd}: no CSV");
    }
    assert!(out_dir(tmp.path(), "set").join("set_raster/index.json").exists());
    assert!(out_dir(tmp.path(), "jsi").join("marginal_12.svg").exists());
    assert!(std::fs::read_dir(&cache).unwrap().count() >= 2);
}

#[test]
fn no_svg_flag_suppresses_figures() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    let o = run(&["dispersion", "--no-svg", "--out", out.to_str().unwrap(), "--cache-dir", tmp.path().join("c").to_str().unwrap()], None, tmp.path(), &[]);
    assert!(o.status.success());
    assert!(std::fs::read_dir(&out).unwrap().all(|e| e.unwrap().path().extension().unwrap() != "svg"));
}

#[test]
fn reruns_are_bit_identical() {
    let tmp = TempDir::new().unwrap();
    let cache = tmp.path().join("cache");
    for cmd in ["jsi", "scan", "set"] {
        let a = tmp.path().join(format!("{cmd}-a"));
        let b = tmp.path().join(format!("{cmd}-b"));
        for (dir, threads) in [(&a, "1"), (&b, "3")] {
            let o = run(&[cmd, "--out", dir.to_str().unwrap(), "--threads", threads, "--no-svg", "--cache-dir", cache.to_str().unwrap()], Some(LIGHT), tmp.path(), &[]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        }
        let (fa, fb) = (data_files(&a), data_files(&b));
        assert_eq!(fa.keys().collect::<Vec<_>>(), fb.keys().collect::<Vec<_>>());
        for (k, v) in &fa {
            assert!(v == &fb[k], "{cmd}: {k} differs between runs");
        }
    }
}

#[test]
fn environment_variable_overrides_the_cache_flag() {
    let tmp = TempDir::new().unwrap();
    let (flag, env) = (tmp.path().join("flag"), tmp.path().join("env"));
    let o = run(
        &["dispersion", "--out", tmp.path().join("o").to_str().unwrap(), "--cache-dir", flag.to_str().unwrap()],
        None,
        tmp.path(),
        &[("TRIPLETFORGE_CACHE", &env)],
    );
    assert!(o.status.success());
    assert!(std::fs::read_dir(&env).unwrap().count() >= 2);
    assert!(!flag.exists());
}

#[test]
fn corrupt_cache_entries_are_rebuilt() {
    let tmp = TempDir::new().unwrap();
    let cache = tmp.path().join("cache");
    let args = |o: &str| vec!["dispersion".to_string(), "--out".into(), tmp.path().join(o).to_string_lossy().into(), "--cache-dir".into(), cache.to_string_lossy().into()];
    let first = run(&args("a").iter().map(String::as_str).collect::<Vec<_>>(), None, tmp.path(), &[]);
    assert!(first.status.success());
    for e in std::fs::read_dir(&cache).unwrap() {
        std::fs::write(e.unwrap().path(), b"{ not json").unwrap();
    }
    let second = run(&args("b").iter().map(String::as_str).collect::<Vec<_>>(), None, tmp.path(), &[]);
    assert!(second.status.success(), "{}", String::from_utf8_lossy(&second.stderr));
    assert_eq!(std::fs::read(tmp.path().join("a/dispersion_pump.csv")).unwrap(), std::fs::read(tmp.path().join("b/dispersion_pump.csv")).unwrap());
    let manifest = std::fs::read_to_string(tmp.path().join("b/dispersion-manifest.json")).unwrap();
    assert!(manifest.contains("recovered"), "{manifest}");
}

#[test]
fn exit_codes_follow_the_error_kind() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("o");
    let o = out.to_str().unwrap();
    let code = |args: &[&str], cfg: Option<&str>| run(args, cfg, tmp.path(), &[]).status.code();

    assert_eq!(code(&["dispersion", "--out", o], Some(r#"{"pump": {"lambda_nm": 532, "colour": 3}}"#)), Some(2));
    assert_eq!(code(&["table", "--out", o], Some(r#"{"table": {"points": []}}"#)), Some(2));
    assert_eq!(code(&["dispersion", "--out", o], Some(r#"{"preset": "elsewhere"}"#)), Some(2));
    assert_eq!(code(&["dispersion", "--out", o, "--config", "/nonexistent/config.json"], None), Some(4));
    assert_eq!(code(&["nonsense"], None), Some(2));
}
