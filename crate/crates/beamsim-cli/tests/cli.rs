//! End-to-end CLI behaviour: exit codes, file contents, config diagnostics,
//! and manifest checksums.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

fn beamsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_beamsim"))
}

fn write_config(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    beamsim()
        .arg(cmd)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .expect("spawn beamsim")
}

fn read_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
        .lines()
        .map(str::to_string)
        .collect()
}

/// Cell of a header-addressed CSV row.
fn cell<'a>(header: &[&str], row: &'a [&str], name: &str) -> &'a str {
    let idx = header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("no column {name}"));
    row[idx]
}

fn single_point_grid(range_m: f64, time_s: f64) -> Value {
    json!({
        "range_m": {"min": range_m, "max": range_m},
        "angle_deg": {"min": 0.0, "max": 0.0},
        "time_s": {"min": time_s, "max": time_s}
    })
}

#[test]
fn simulate_single_point_grid_emits_one_row_at_zero_db() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sim.json",
        &json!({
            "schema_version": 1,
            "array": {"fda": {}},
            "grid": single_point_grid(5000.0, 5000.0 / beamsim::SPEED_OF_LIGHT)
        }),
    );
    let out = dir.path().join("run");
    let output = run("simulate", &config, &out, &[]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");

    let lines = read_lines(&dir.path().join("run.cube.csv"));
    assert_eq!(lines.len(), 2, "header plus exactly one data row");
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();
    let db: f64 = cell(&header, &row, "magnitude_db").parse().unwrap();
    assert_eq!(db, 0.0);
    // The single point sits on the pattern ridge of the default array.
    let mag: f64 = cell(&header, &row, "magnitude").parse().unwrap();
    assert!((mag - 19.0).abs() < 1e-9);
}

#[test]
fn simulate_rejects_config_missing_carrier() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "bad.json",
        &json!({
            "schema_version": 1,
            "array": {"explicit": {"n_elements": 1, "spacing_m": 0.01, "elements": [{}]}},
            "grid": single_point_grid(100.0, 0.0)
        }),
    );
    let output = run("simulate", &config, &dir.path().join("x"), &[]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("carrier_hz"), "stderr: {stderr}");
}

#[test]
fn simulate_rejects_unknown_fields_and_bad_values() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "typo.json",
        &json!({"schema_version": 1, "array": {"fda": {"delta_f_zz": 1.0}}}),
    );
    let output = run("simulate", &config, &dir.path().join("x"), &[]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("delta_f_zz"));

    let config = write_config(
        dir.path(),
        "neg.json",
        &json!({
            "schema_version": 1,
            "array": {"fda": {"spacing_m": -1.0}},
            "grid": single_point_grid(100.0, 0.0)
        }),
    );
    let output = run("simulate", &config, &dir.path().join("y"), &[]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("spacing"));

    let config = write_config(
        dir.path(),
        "vers.json",
        &json!({"schema_version": 3, "array": {"fda": {}}}),
    );
    let output = run("simulate", &config, &dir.path().join("z"), &[]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("schema_version"));
}

#[test]
fn manifest_checksums_match_emitted_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sim.json",
        &json!({
            "schema_version": 1,
            "array": {"fda": {}},
            "grid": {
                "range_m": {"min": 4000.0, "max": 6000.0, "step": 100.0},
                "angle_deg": {"min": -2.0, "max": 2.0, "step": 2.0},
                "time_s": {"min": 1.5e-5, "max": 1.7e-5, "step": 1e-6}
            }
        }),
    );
    let out = dir.path().join("run");
    assert_eq!(run("simulate", &config, &out, &[]).status.code(), Some(0));

    let manifest: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("run.manifest.json")).unwrap(),
    )
    .unwrap();
    let outputs = manifest["outputs"].as_array().unwrap();
    assert!(!outputs.is_empty());
    for entry in outputs {
        let name = entry["path"].as_str().unwrap();
        let bytes = std::fs::read(dir.path().join(name)).unwrap();
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(hex, entry["sha256"].as_str().unwrap(), "checksum of {name}");
        assert_eq!(bytes.len() as u64, entry["bytes"].as_u64().unwrap());
    }
    // The expanded config records per-element excitations, not shorthand.
    assert!(manifest["expanded_config"]["array"]["explicit"]["elements"]
        .as_array()
        .map(|a| a.len() == 19)
        .unwrap_or(false));
}

#[test]
fn check_invariance_exit_codes_by_scenario() {
    let dir = tempfile::tempdir().unwrap();
    // Default FDA under the parallel-ray model: shift law exact, strong
    // fixed-point swing.
    let fda = write_config(
        dir.path(),
        "fda.json",
        &json!({"schema_version": 1, "array": {"fda": {}}, "seed": 9}),
    );
    let output = run("check-invariance", &fda, &dir.path().join("a"), &[]);
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let lines = read_lines(&dir.path().join("a.invariance.csv"));
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();
    let dev: f64 = cell(&header, &row, "max_relative_deviation")
        .parse()
        .unwrap();
    assert!(dev <= 1e-12);
    let swing: f64 = cell(&header, &row, "probe_swing_db").parse().unwrap();
    assert!(swing > 3.0);
    assert_eq!(cell(&header, &row, "verdict"), "consistent");

    // CW phased array: magnitude constant in time at a fixed point, which is
    // a degenerate probe rather than a violation.
    let phased = write_config(
        dir.path(),
        "phased.json",
        &json!({"schema_version": 1, "array": {"phased": {}}, "seed": 9}),
    );
    let output = run("check-invariance", &phased, &dir.path().join("b"), &[]);
    assert_eq!(output.status.code(), Some(4), "{output:?}");

    // Exact-spherical: nonzero deviation reported, still exit 0.
    let output = run(
        "check-invariance",
        &fda,
        &dir.path().join("c"),
        &["--model", "exact"],
    );
    assert_eq!(output.status.code(), Some(0), "{output:?}");
    let lines = read_lines(&dir.path().join("c.invariance.csv"));
    let header: Vec<&str> = lines[0].split(',').collect();
    let row: Vec<&str> = lines[1].split(',').collect();
    let dev: f64 = cell(&header, &row, "max_relative_deviation")
        .parse()
        .unwrap();
    assert!(dev > 0.0);
}

#[test]
fn compare_fig1_fdhm_override_doubles_the_width() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "fig1.json",
        &json!({"schema_version": 1, "fig1": {"fdhm_s": 33.4e-6}}),
    );
    let out = dir.path().join("f");
    assert_eq!(
        run("compare-fig1", &config, &out, &[]).status.code(),
        Some(0)
    );
    let lines = read_lines(&dir.path().join("f.summary.csv"));
    let header: Vec<&str> = lines[0].split(',').collect();
    let gaussian: Vec<&str> = lines
        .iter()
        .find(|l| l.starts_with("gaussian,"))
        .unwrap()
        .split(',')
        .collect();
    let fwhm: f64 = cell(&header, &gaussian, "fwhm_m").parse().unwrap();
    let expected = beamsim::SPEED_OF_LIGHT * 33.4e-6;
    assert!(
        (fwhm - expected).abs() / expected < 5e-3,
        "fwhm {fwhm} vs {expected}"
    );
}

#[test]
fn track_peak_boundary_exit_code_and_guidance() {
    let dir = tempfile::tempdir().unwrap();
    let t0 = 4500.0 / beamsim::SPEED_OF_LIGHT;
    // The peak sits outside this range window at every sampled instant.
    let config = write_config(
        dir.path(),
        "track.json",
        &json!({
            "schema_version": 1,
            "array": {"fda": {}},
            "grid": {
                "range_m": {"min": 3300.0, "max": 4100.0, "step": 10.0},
                "angle_deg": {"min": 0.0, "max": 0.0},
                "time_s": {"min": t0, "max": t0 + 4e-7, "step": 1e-7}
            }
        }),
    );
    let output = run("track-peak", &config, &dir.path().join("t"), &[]);
    assert_eq!(output.status.code(), Some(3), "{output:?}");
    assert!(String::from_utf8_lossy(&output.stderr).contains("widen the range window"));
}

#[test]
fn track_peak_flat_pattern_reports_zero_speed() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "flat.json",
        &json!({
            "schema_version": 1,
            "array": {"fda": {"n_elements": 1}},
            "grid": {
                "range_m": {"min": 1000.0, "max": 1100.0, "step": 10.0},
                "angle_deg": {"min": 0.0, "max": 0.0},
                "time_s": {"min": 0.0, "max": 4e-7, "step": 1e-7}
            }
        }),
    );
    let out = dir.path().join("flat");
    assert_eq!(run("track-peak", &config, &out, &[]).status.code(), Some(0));
    let lines = read_lines(&dir.path().join("flat.track.csv"));
    let speed_line = lines
        .iter()
        .find(|l| l.starts_with("# fitted_speed_m_per_s"))
        .unwrap();
    let speed: f64 = speed_line
        .rsplit('=')
        .next()
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert_eq!(speed, 0.0);
    assert!(lines
        .iter()
        .any(|l| l.contains("degenerate_flat_pattern = true")));
}

#[test]
fn duration_sweep_angle_drift_is_nondecreasing() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sweep.json",
        &json!({
            "schema_version": 1,
            "array": {"fda": {"envelope": {"periodic_switch": {"period_s": 1e-5, "duty": 0.1}}}},
            "grid": {
                "range_m": {"min": 5000.0, "max": 5000.0},
                "angle_deg": {"min": -6.0, "max": 6.0, "step": 0.06},
                "time_s": {"min": 0.0, "max": 1e-5, "step": 1e-6}
            },
            "track": {"duration_sweep_s": [1e-6, 2e-6, 4e-6, 8e-6], "sweep_time_samples": 16}
        }),
    );
    let out = dir.path().join("s");
    assert_eq!(run("track-peak", &config, &out, &[]).status.code(), Some(0));
    let lines = read_lines(&dir.path().join("s.duration_sweep.csv"));
    let drifts: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(drifts.len(), 4);
    assert!(drifts.windows(2).all(|w| w[1] >= w[0]), "{drifts:?}");
    assert!(
        drifts[3] > drifts[0],
        "drift must grow over an 8x duration span"
    );
}

#[test]
fn simulate_emits_requested_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let t0 = 10_000.0 / beamsim::SPEED_OF_LIGHT;
    let config = write_config(
        dir.path(),
        "metrics.json",
        &json!({
            "schema_version": 1,
            "array": {"phased": {"envelope": {"gaussian": {"fdhm_s": 16.7e-6}}}},
            "grid": {
                "range_m": {"min": 4000.0, "max": 16000.0, "step": 5.0},
                "angle_deg": {"min": 0.0, "max": 0.0},
                "time_s": {"min": t0, "max": t0}
            },
            "metrics": {
                "bce_targets": [{"range_m": [7500.0, 12500.0], "angle_deg": [-1.0, 1.0]}],
                "fwhm_cuts": [{"angle_index": 0, "time_index": 0}]
            }
        }),
    );
    let out = dir.path().join("m");
    assert_eq!(run("simulate", &config, &out, &[]).status.code(), Some(0));
    let lines = read_lines(&dir.path().join("m.metrics.csv"));
    let fwhm_row = lines.iter().find(|l| l.starts_with("fwhm_m,")).unwrap();
    let fwhm: f64 = fwhm_row.split(',').next_back().unwrap().parse().unwrap();
    let expected = beamsim::SPEED_OF_LIGHT * 16.7e-6;
    assert!((fwhm - expected).abs() / expected < 5e-3);
    assert!(lines.iter().any(|l| l.starts_with("bce,")));
    assert!(lines
        .iter()
        .any(|l| l.starts_with("sidelobe_db,") && l.ends_with("none")));
}
