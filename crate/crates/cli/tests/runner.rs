use std::path::Path;
use std::process::Command;

use lacuna_cli::manifest::{sha256_hex, MANIFEST_NAME};
use lacuna_cli::{exit_code, run, ExperimentConfig, RunManifest};

const NAZAROV: &str = r#"
version = 1
output_dir = "unused"

[experiment]
kind = "nazarov_sweep"
measures = [0.25, 0.5, 0.75]

[sequence]
source = "geometric"
start = 1
ratio = 2
count = 6
"#;

const BAD_GRID: &str = r#"
version = 1
output_dir = "out"

[experiment]
kind = "theorem_ensemble"
level = 1

[sequence]
source = "explicit"
values = [4, 16, 64, 256]

[set]
pattern = "periodic"
period = 1.0
fraction = 0.5

[grid]
period = 4.0
samples = 256

[ensemble]
trials = 3
seed = 1
"#;

fn lacuna() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lacuna"))
}

#[test]
fn run_writes_every_file_with_checksum() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = run(NAZAROV, dir.path(), Some(dir.path())).unwrap();
    assert_eq!(manifest.experiment, "nazarov_sweep");
    assert_eq!(manifest.config_sha256, sha256_hex(NAZAROV.as_bytes()));
    for file in &manifest.files {
        let bytes = std::fs::read(dir.path().join(&file.path)).unwrap();
        assert_eq!(sha256_hex(&bytes), file.sha256, "{}", file.path);
    }
    let on_disk: RunManifest = serde_json::from_slice(&std::fs::read(dir.path().join(MANIFEST_NAME)).unwrap()).unwrap();
    assert_eq!(on_disk, manifest);
    let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("measure [1],lambda_min [1]"));
}

#[test]
fn nyquist_violation_is_rejected_before_any_write() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let err = run(BAD_GRID, dir.path(), None).unwrap_err();
    assert_eq!(exit_code(&err), 2);
    assert!(err.to_string().contains("grid"), "{err}");
    assert!(!out.exists());
}

#[test]
fn every_violation_is_listed() {
    let text = r#"
version = 2
output_dir = "out"

[experiment]
kind = "ls_sweep"
gammas = [0.0, 1.5]
"#;
    let cfg = ExperimentConfig::parse(text).unwrap();
    let err = cfg.resolve(Path::new(".")).unwrap_err();
    let fields: Vec<&str> = err.violations.iter().map(|v| v.field.as_str()).collect();
    assert_eq!(
        fields,
        ["version", "grid", "experiment.gammas[0]", "experiment.gammas[1]"]
    );
}

#[test]
fn unknown_keys_are_errors() {
    let text = NAZAROV.replace("count = 6", "count = 6\nextra = true");
    let err = ExperimentConfig::parse(&text).unwrap_err();
    assert!(err.to_string().contains("extra"), "{err}");
    let text = NAZAROV.replace("version = 1", "version = 1\nseed = 3");
    assert!(ExperimentConfig::parse(&text).is_err());
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, BAD_GRID).unwrap();
    let status = lacuna().arg("run").arg(&bad).status().unwrap();
    assert_eq!(status.code(), Some(2));
    assert!(!dir.path().join("out").exists());

    // Almost no set and many bins: the concentration form is degenerate.
    let status = lacuna()
        .args([
            "conc",
            "ls",
            "--periodic",
            "64,0,0.00001",
            "--period",
            "64",
            "--samples",
            "512",
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(3));

    let good = dir.path().join("good.toml");
    std::fs::write(&good, NAZAROV).unwrap();
    let output = lacuna()
        .arg("run")
        .arg(&good)
        .arg("--output")
        .arg(dir.path().join("res"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let manifest: RunManifest = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(manifest.files.len(), 2);
}

#[test]
fn subcommands_print_results() {
    let out = lacuna()
        .args(["seq", "build", "--kind", "greedy", "--count", "4"])
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1\n3\n7\n15\n");

    let out = lacuna()
        .args(["seq", "check", "--values", "1,2,4,8", "--zygmund", "1"])
        .output()
        .unwrap();
    let reports: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(reports[0]["constant"], 3.0);

    let out = lacuna()
        .args(["set", "gamma", "--periodic", "2,0,0.25", "--delta", "2"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["gamma"].as_f64().unwrap() - 0.25).abs() < 1e-12);

    let out = lacuna()
        .args(["conc", "nazarov", "--full", "0,1", "--values", "0,3,9"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["lambda_min"].as_f64().unwrap() - 1.0).abs() < 1e-10);

    let out = lacuna()
        .args(["uniq", "condition", "--values", "3,4,5,6"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_hold"], false);
    assert_eq!(v["first_failure"], 0);

    let out = lacuna()
        .args([
            "synth",
            "check",
            "--values",
            "4,16",
            "--period",
            "2",
            "--samples",
            "128",
        ])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["support_inside_profile"], true);
    let (a, b) = (v["norm_sqr"].as_f64().unwrap(), v["norm_sqr_blocks"].as_f64().unwrap());
    assert!((a - b).abs() < 1e-10 * b);
}

#[test]
fn missing_input_is_a_validation_error() {
    let status = lacuna().args(["conc", "nazarov", "--full", "0,1"]).status().unwrap();
    assert_eq!(status.code(), Some(2));
}
