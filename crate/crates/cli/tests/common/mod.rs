#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn srelax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srelax")).args(args).output().expect("srelax runs")
}

pub fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// Bundled configs as `(command, path)`, sorted by file name. The command is
/// the file stem up to the first dot.
pub fn bundled_configs() -> Vec<(String, PathBuf)> {
    let mut out: Vec<(String, PathBuf)> = std::fs::read_dir(configs_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .map(|p| {
            let stem = p.file_stem().unwrap().to_str().unwrap();
            (stem.split('.').next().unwrap().to_string(), p)
        })
        .collect();
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out
}

pub fn golden_path(config: &Path) -> PathBuf {
    golden_dir().join(format!("{}.csv", config.file_stem().unwrap().to_str().unwrap()))
}

/// Runs a bundled config and returns stdout, panicking on a nonzero exit.
pub fn run_config(command: &str, config: &Path) -> Vec<u8> {
    let out = srelax(&[command, config.to_str().unwrap()]);
    assert!(out.status.success(), "{command} {}: {}", config.display(), String::from_utf8_lossy(&out.stderr));
    out.stdout
}

/// Compares fresh output with the stored golden file. With
/// `SRELAX_UPDATE_GOLDEN=1` the golden file is rewritten instead.
pub fn check_golden(config: &Path, output: &[u8]) -> Result<(), String> {
    let path = golden_path(config);
    if std::env::var_os("SRELAX_UPDATE_GOLDEN").is_some_and(|v| v == "1") {
        std::fs::write(&path, output).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let stored = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if stored == output {
        Ok(())
    } else {
        Err(format!("{} differs from fresh output", path.display()))
    }
}
