//! Black-box checks of the installed binary: exit codes, byte-determinism
//! of reproduced panels, and the documented config errors.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rydscatter"))
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rydscatter-cli-{tag}"));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn spectrum_runs_a_minimal_config() {
    let dir = temp_dir("spectrum");
    let config = dir.join("sweep.toml");
    std::fs::write(
        &config,
        "model = \"A\"\n\n[axis1]\nname = \"delta_ka\"\nstart = -30.2\nstop = -29.8\ncount = 11\n",
    )
    .unwrap();
    let out = bin()
        .args(["spectrum", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("delta_ka,T12_eff,T21_eff\n"));
    assert_eq!(stdout.trim_end().lines().count(), 12);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = temp_dir("badconfig");
    let config = dir.join("sweep.toml");
    std::fs::write(
        &config,
        "model = \"A\"\n\n[axis1]\nname = \"delta_kb\"\nstart = -1.0\nstop = 1.0\ncount = 5\n",
    )
    .unwrap();
    let out = bin()
        .args(["spectrum", "--config"])
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("delta_kb = -delta_ka"), "{stderr}");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn unknown_figure_exits_with_code_two() {
    let out = bin().args(["reproduce", "fig99x"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduce_fig7c_is_byte_identical_across_runs() {
    let dir_a = temp_dir("repro-a");
    let dir_b = temp_dir("repro-b");
    for dir in [&dir_a, &dir_b] {
        let out = bin()
            .args(["reproduce", "fig7c", "--out"])
            .arg(dir)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let csv_a = std::fs::read(dir_a.join("fig7c.csv")).unwrap();
    let csv_b = std::fs::read(dir_b.join("fig7c.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
    let man_a = std::fs::read(dir_a.join("fig7c.manifest.json")).unwrap();
    let man_b = std::fs::read(dir_b.join("fig7c.manifest.json")).unwrap();
    assert_eq!(man_a, man_b);
    let _ = std::fs::remove_dir_all(&dir_a);
    let _ = std::fs::remove_dir_all(&dir_b);
}

#[test]
fn grid_requires_a_second_axis() {
    let dir = temp_dir("grid");
    let config = dir.join("sweep.toml");
    std::fs::write(
        &config,
        "model = \"A\"\n\n[axis1]\nname = \"delta_ka\"\nstart = -30.2\nstop = -29.8\ncount = 5\n",
    )
    .unwrap();
    let out = bin().args(["grid", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}
