use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use afdm_sim::output::{meta_path, read_csv};
use afdm_sim::ExperimentConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_afdm-sim"))
}

fn quick_config(dir: &Path) -> PathBuf {
    let path = dir.join("quick.toml");
    fs::write(
        &path,
        r#"
n_subcarriers = 64
alpha_max = 2
l_max = 2
paths = 3
snr_p_db = 40
snr_d_db = [-inf, 10]
pilot_counts = [1, 4]
iterations = [1, 2]
trials = 20
seed = 5
"#,
    )
    .unwrap();
    path
}

fn ok(out: Output) -> Output {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn validate_prints_derived_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(bin()
        .args(["validate", "--config"])
        .arg(quick_config(dir.path()))
        .output()
        .unwrap());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Q = 14"), "{text}");
    assert!(text.contains(&format!("c1 = {}", 5.0 / 128.0)), "{text}");
    assert!(text.contains("max pilot count = 4"), "{text}");
}

#[test]
fn validate_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let good = fs::read_to_string(quick_config(dir.path())).unwrap();
    fs::write(
        &path,
        good.replace("pilot_counts = [1, 4]", "pilot_counts = [5]"),
    )
    .unwrap();
    let out = bin()
        .args(["validate", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("pilot_counts"));

    let missing = bin()
        .args(["validate", "--config", "/nonexistent.toml"])
        .output()
        .unwrap();
    assert!(!missing.status.success());
}

#[test]
fn run_writes_csv_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let config = quick_config(dir.path());
    let csv = dir.path().join("out.csv");
    ok(bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&csv)
        .args(["--seed", "9", "--trials", "7"])
        .output()
        .unwrap());

    let rows = read_csv(&csv).unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows
        .iter()
        .all(|r| r.seed == 9 && r.trials == 7 && r.mse >= 0.0));
    let no_data: Vec<_> = rows
        .iter()
        .filter(|r| r.snr_d_db == f64::NEG_INFINITY)
        .collect();
    assert_eq!(no_data.len(), 4);
    assert!(no_data.iter().all(|r| r.ber.is_none()));
    assert!(rows
        .iter()
        .filter(|r| r.snr_d_db == 10.0)
        .all(|r| r.ber.is_some_and(|b| (0.0..=1.0).contains(&b))));

    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("snr_d_db,pilot_count,iterations,trials,mse,ber,seed\n"));
    assert!(!text.contains('\r'));

    let meta = fs::read_to_string(meta_path(&csv)).unwrap();
    let mut expected = ExperimentConfig::load(&config).unwrap();
    expected.seed = 9;
    expected.trials = 7;
    assert!(meta.contains(&format!("config_sha256 = {}", expected.hash())));
    assert!(meta.contains("seed = 9"));
    assert!(meta.contains("version = "));
}

#[test]
fn csv_is_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let config = quick_config(dir.path());
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let csv = dir.path().join(format!("w{workers}.csv"));
        ok(bin()
            .args(["run", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&csv)
            .args(["--workers", workers])
            .output()
            .unwrap());
        outputs.push(fs::read(&csv).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn run_needs_an_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["run", "--config"])
        .arg(quick_config(dir.path()))
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("output"));
}
