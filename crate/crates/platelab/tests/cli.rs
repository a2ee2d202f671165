//! End-to-end tests of the `platelab` binary: exit-code conventions,
//! artifact schemas, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn platelab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_platelab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, rho: f64) -> String {
    let path = dir.join(name);
    std::fs::write(
        &path,
        format!(
            "length = 1.0\ninterface_a = 0.3\ninterface_b = 0.7\nrho = {rho}\n\
             n_left = 6\nn_mid = 6\nn_right = 6\nseed = 42\n"
        ),
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn simulate_happy_path_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", 1.0);
    let out = platelab(
        &[
            "simulate", &cfg, "--dt", "0.001", "--steps", "200", "--out", "sim",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("sim/energy.csv")).unwrap();
    assert!(csv.starts_with("t,E,dissipation_residual\n"));
    assert_eq!(csv.lines().count(), 202); // header + 201 rows
    assert!(!csv.contains('\r'));
    assert!(dir.path().join("sim/simulate_report.txt").exists());
}

#[test]
fn simulate_rejects_zero_dt() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", 1.0);
    let out = platelab(&["simulate", &cfg, "--dt", "0"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn simulate_undamped_reports_conservation_and_skips_decay() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", 0.0);
    let out = platelab(
        &[
            "simulate", &cfg, "--dt", "0.0005", "--steps", "500", "--out", "o",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report = std::fs::read_to_string(dir.path().join("o/simulate_report.txt")).unwrap();
    assert!(report.contains("[PASS] energy-conservation"));
    assert!(report.contains("[SKIP] energy-decay"));
}

#[test]
fn spectrum_exit_codes_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", 1.0);
    let out = platelab(&["spectrum", &cfg, "--out", "spec"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("spec/spectrum.csv")).unwrap();
    assert!(csv.starts_with("re,im,residual\n"));
    // 2 * n_dof rows: 18 elements -> 19 nodes -> 34 dofs -> 68 eigenvalues
    assert_eq!(csv.lines().count(), 69);

    let missing = platelab(&["spectrum", "nonexistent.cfg"], dir.path());
    assert_eq!(missing.status.code(), Some(1));

    // dense form export: n_dof x n_dof rows of 17-digit floats
    let exported = platelab(
        &["spectrum", &cfg, "--out", "forms", "--export-forms"],
        dir.path(),
    );
    assert_eq!(exported.status.code(), Some(0));
    for name in ["form_m.csv", "form_k.csv", "form_d0.csv"] {
        let text = std::fs::read_to_string(dir.path().join("forms").join(name)).unwrap();
        assert_eq!(text.lines().count(), 34, "{name}");
        assert_eq!(text.lines().next().unwrap().split(',').count(), 34);
    }
}

#[test]
fn spectrum_undamped_marks_stability_not_applicable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", 0.0);
    let out = platelab(&["spectrum", &cfg, "--out", "s"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let report = std::fs::read_to_string(dir.path().join("s/spectrum_report.txt")).unwrap();
    assert!(report.contains("[SKIP] exponential-stability"));
}

#[test]
fn scan_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", 1.0);
    let ok = platelab(
        &[
            "scan", &cfg, "--lmin", "-60", "--lmax", "60", "--points", "41", "--out", "scan",
        ],
        dir.path(),
    );
    assert_eq!(ok.status.code(), Some(0), "{ok:?}");
    let csv = std::fs::read_to_string(dir.path().join("scan/scan.csv")).unwrap();
    assert!(csv.starts_with("lambda,resolvent_norm\n"));
    assert_eq!(csv.lines().count(), 42);

    let bad = platelab(&["scan", &cfg, "--points", "0"], dir.path());
    assert_eq!(bad.status.code(), Some(1));

    // undamped spectrum sits on the axis: flagged points, exit 2
    let cfg0 = write_config(dir.path(), "c0.cfg", 0.0);
    let singular = platelab(
        &[
            "scan", &cfg0, "--lmin", "-100", "--lmax", "100", "--points", "11", "--out", "u",
        ],
        dir.path(),
    );
    assert_eq!(singular.status.code(), Some(2), "{singular:?}");
    let report = std::fs::read_to_string(dir.path().join("u/scan_report.txt")).unwrap();
    assert!(report.contains("[FAIL] resolvent-bounded"));
    let csv = std::fs::read_to_string(dir.path().join("u/scan.csv")).unwrap();
    assert!(csv.contains("inf"));
}

#[test]
fn verify_passes_fails_under_fault_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", 1.0);
    let one = platelab(&["verify", &cfg, "--out", "v1"], dir.path());
    assert_eq!(one.status.code(), Some(0), "{one:?}");
    let report = std::fs::read_to_string(dir.path().join("v1/verify_report.txt")).unwrap();
    assert!(report.contains("overall: PASS"));
    assert!(report.contains("seed = 42"));

    let two = platelab(&["verify", &cfg, "--out", "v2"], dir.path());
    assert_eq!(two.status.code(), Some(0));
    let r1 = std::fs::read(dir.path().join("v1/verify_report.txt")).unwrap();
    let r2 = std::fs::read(dir.path().join("v2/verify_report.txt")).unwrap();
    assert_eq!(r1, r2);
    let c1 = std::fs::read(dir.path().join("v1/verify_residuals.csv")).unwrap();
    let c2 = std::fs::read(dir.path().join("v2/verify_residuals.csv")).unwrap();
    assert_eq!(c1, c2);

    let faulted = platelab(
        &["verify", &cfg, "--out", "vf", "--fault", "rellich-sign"],
        dir.path(),
    );
    assert_eq!(faulted.status.code(), Some(2));
    let report = std::fs::read_to_string(dir.path().join("vf/verify_report.txt")).unwrap();
    assert!(report.contains("[FAIL] rellich-identity"));

    let missing = platelab(&["verify", "no-such-file.cfg"], dir.path());
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn bench_writes_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = platelab(
        &["bench", "--sizes", "10,20", "--reps", "3", "--out", "b"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("b/bench.csv")).unwrap();
    assert!(csv.starts_with("kernel,n,reps,median_s,min_s,checksum\n"));
    assert_eq!(csv.lines().count(), 7); // header + 3 kernels x 2 sizes

    let bad = platelab(&["bench", "--sizes", "10", "--reps", "2"], dir.path());
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn unknown_config_key_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    std::fs::write(&path, "lenght = 1.0\n").unwrap();
    let out = platelab(&["spectrum", path.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("unknown key"));
}

#[test]
fn all_artifacts_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", 1.0);
    for (args, files) in [
        (
            vec!["spectrum", cfg.as_str(), "--export-forms"],
            vec!["spectrum.csv", "form_m.csv", "form_k.csv", "form_d0.csv"],
        ),
        (
            vec![
                "scan",
                cfg.as_str(),
                "--lmin",
                "-30",
                "--lmax",
                "30",
                "--points",
                "11",
            ],
            vec!["scan.csv"],
        ),
        (
            vec!["simulate", cfg.as_str(), "--dt", "0.001", "--steps", "50"],
            vec!["energy.csv"],
        ),
    ] {
        let mut one = args.clone();
        one.extend(["--out", "a"]);
        let mut two = args.clone();
        two.extend(["--out", "b"]);
        assert_eq!(platelab(&one, dir.path()).status.code(), Some(0));
        assert_eq!(platelab(&two, dir.path()).status.code(), Some(0));
        for f in files {
            let x = std::fs::read(dir.path().join("a").join(f)).unwrap();
            let y = std::fs::read(dir.path().join("b").join(f)).unwrap();
            assert_eq!(x, y, "{f} differs between runs");
        }
        std::fs::remove_dir_all(dir.path().join("a")).unwrap();
        std::fs::remove_dir_all(dir.path().join("b")).unwrap();
    }
}
