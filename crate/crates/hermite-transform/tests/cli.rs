//! Black-box tests of the `hermite` binary: argument handling, exit codes,
//! CSV shape, cache behaviour, and the solver's failure diagnostics.

use std::path::Path;
use std::process::{Command, Output};

fn hermite(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermite"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

/// Data rows of a CSV dump: everything after the header line, comments
/// stripped.
fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

#[test]
fn help_and_version_exit_zero() {
    for flag in ["--help", "--version"] {
        let out = hermite(&[flag]);
        assert_eq!(out.status.code(), Some(0), "{flag}");
    }
}

#[test]
fn usage_errors_exit_one() {
    // Missing required flag, unknown subcommand, unknown backend.
    for args in [
        &["nodes"] as &[&str],
        &["frobnicate"],
        &["nodes", "--n", "8", "--backend", "cholesky"],
    ] {
        let out = hermite(args);
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
        assert!(!stderr_of(&out).is_empty(), "args {args:?}");
    }
}

#[test]
fn invalid_sizes_exit_one() {
    let out = hermite(&["nodes", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hermite(&["bench", "--sizes", "64,32", "--repeats", "1"]);
    assert_eq!(out.status.code(), Some(1), "sizes must ascend");
}

#[test]
fn nodes_csv_has_flag_comment_header_and_rule() {
    let out = hermite(&["nodes", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    let comment = lines.next().unwrap();
    assert!(
        comment.starts_with("# hermite nodes --n 5 --backend golub_welsch"),
        "comment line: {comment}"
    );
    assert_eq!(lines.next().unwrap(), "k,x,w,W");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 5);
    // Centre node of an odd rule is (numerically) zero, weights positive.
    let centre: f64 = rows[2][1].parse().unwrap();
    assert!(centre.abs() < 1e-13);
    for row in &rows {
        let w: f64 = row[2].parse().unwrap();
        let big_w: f64 = row[3].parse().unwrap();
        assert!(w > 0.0 && big_w > 0.0);
    }
    // Σw = √π for a tiny rule.
    let sum: f64 = rows.iter().map(|r| r[2].parse::<f64>().unwrap()).sum();
    assert!((sum - 1.772453850905516).abs() < 1e-12);
}

#[test]
fn nodes_backends_agree_on_small_rules() {
    let gw = hermite(&["nodes", "--n", "9"]);
    let direct = hermite(&["nodes", "--n", "9", "--backend", "direct"]);
    assert_eq!(gw.status.code(), Some(0));
    assert_eq!(direct.status.code(), Some(0));
    let a = data_rows(&stdout_of(&gw));
    let b = data_rows(&stdout_of(&direct));
    for (ra, rb) in a.iter().zip(&b) {
        let (xa, xb): (f64, f64) = (ra[1].parse().unwrap(), rb[1].parse().unwrap());
        let (wa, wb): (f64, f64) = (ra[2].parse().unwrap(), rb[2].parse().unwrap());
        assert!((xa - xb).abs() <= 1e-13);
        assert!((wa - wb).abs() <= 1e-13 * wa.abs());
    }
}

#[test]
fn nodes_cache_dir_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let first = hermite(&["nodes", "--n", "12", "--cache-dir", cache]);
    assert_eq!(first.status.code(), Some(0));
    assert!(
        Path::new(cache).join("factors_12.htf1").is_file(),
        "cache file should be created on first use"
    );
    let second = hermite(&["nodes", "--n", "12", "--cache-dir", cache]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(
        stdout_of(&first),
        stdout_of(&second),
        "cached run must reproduce the built run byte for byte"
    );
}

#[test]
fn corrupt_cache_file_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("factors_10.htf1"), b"not a factor file").unwrap();
    let out = hermite(&[
        "nodes",
        "--n",
        "10",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("error:"));
}

#[test]
fn unwritable_output_exits_three() {
    let out = hermite(&["nodes", "--n", "4", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bench_reports_each_cell_once() {
    let out = hermite(&[
        "bench",
        "--sizes",
        "16,32",
        "--backends",
        "direct,golub_welsch",
        "--repeats",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.lines().any(|l| l == "backend,n,median_seconds,repeats"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert!(["direct", "golub_welsch"].contains(&row[0].as_str()));
        let secs: f64 = row[2].parse().unwrap();
        assert!(secs > 0.0, "non-positive timing in {row:?}");
        assert_eq!(row[3], "1");
    }
}

#[test]
fn error_curve_reports_uncensored_errors_for_stable_backends() {
    let out = hermite(&[
        "error-curve",
        "--sizes",
        "10,20",
        "--backends",
        "golub_welsch,bunck",
        "--oracle-bits",
        "192",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.lines().any(|l| l == "backend,n,matrix,error,censored"));
    let rows = data_rows(&text);
    // 2 sizes × 2 backends × {t, tinv}.
    assert_eq!(rows.len(), 8);
    for row in &rows {
        assert!(["t", "tinv"].contains(&row[2].as_str()));
        let err: f64 = row[3].parse().unwrap();
        assert!(err < 1e-12, "tiny sizes should be near machine: {row:?}");
        assert_eq!(row[4], "0", "stable backend must not be censored");
    }
}

#[test]
fn error_curve_censors_the_broken_naive_build() {
    let out = hermite(&[
        "error-curve",
        "--sizes",
        "800",
        "--backends",
        "direct",
        "--oracle-bits",
        "192",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let rows = data_rows(&stdout_of(&out));
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert_eq!(
            row[4], "1",
            "direct backend past the underflow degree must be censored: {row:?}"
        );
    }
}

#[test]
fn error_curve_accepts_threshold_override() {
    // N = 220 dispatches to the asymptotic ψ path by default; raising the
    // threshold to 500 forces Clenshaw instead (fine at degree 219, which
    // is within its accuracy range).  Either path must stay at reference
    // accuracy, far below the 1e-10 the stable backends are held to.
    let out = hermite(&[
        "error-curve",
        "--sizes",
        "220",
        "--backends",
        "golub_welsch",
        "--oracle-bits",
        "160",
        "--threshold",
        "500",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(
        text.lines().next().unwrap().contains("--threshold 500"),
        "flag comment should record the override"
    );
    let rows = data_rows(&text);
    assert!(!rows.is_empty());
    for row in &rows {
        let err: f64 = row[3].parse().unwrap();
        assert_eq!(row[4], "0", "override rows must be uncensored: {row:?}");
        assert!(err < 1e-10, "threshold override lost accuracy: {row:?}");
    }
}

#[test]
fn gpe_writes_mass_log_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let out = hermite(&[
        "gpe",
        "--n",
        "64",
        "--tau",
        "1e-3",
        "--t-end",
        "0.01",
        "--snapshots",
        "0,0.01",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));

    let log = std::fs::read_to_string(dir.path().join("mass_log.csv")).unwrap();
    assert!(log.lines().any(|l| l == "step,t,mass"));
    let log_rows = data_rows(&log);
    assert_eq!(log_rows.len(), 11, "one record per step plus the initial one");
    let m0: f64 = log_rows[0][2].parse().unwrap();
    let m_last: f64 = log_rows[10][2].parse().unwrap();
    assert!((m_last / m0 - 1.0).abs() < 1e-11, "mass drifted: {m0} → {m_last}");

    for name in ["snapshot_t0.csv", "snapshot_t0.01.csv"] {
        let snap = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(snap.lines().any(|l| l == "x,re_u,im_u,density"), "{name}");
        let rows = data_rows(&snap);
        assert_eq!(rows.len(), 64, "{name}");
        for row in &rows {
            let re: f64 = row[1].parse().unwrap();
            let im: f64 = row[2].parse().unwrap();
            let density: f64 = row[3].parse().unwrap();
            assert!((density - (re * re + im * im)).abs() <= 1e-15 * density.max(1e-30));
        }
    }
}

#[test]
fn gpe_zero_time_snapshot_is_the_initial_profile() {
    let dir = tempfile::tempdir().unwrap();
    let out = hermite(&[
        "gpe",
        "--n",
        "48",
        "--t-end",
        "0",
        "--snapshots",
        "0",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let snap = std::fs::read_to_string(dir.path().join("snapshot_t0.csv")).unwrap();
    for row in data_rows(&snap) {
        let x: f64 = row[0].parse().unwrap();
        let density: f64 = row[3].parse().unwrap();
        // |u₀(x)|² = 8·e^{−(x+25)²/4}: the wave packet sits at x = −25.
        let want = 8.0 * (-(x + 25.0) * (x + 25.0) / 4.0).exp();
        assert!(
            (density - want).abs() <= 1e-12 * want.max(1e-300),
            "x = {x}: density {density} vs {want}"
        );
    }
}

#[test]
fn gpe_instability_aborts_with_code_two_and_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let out = hermite(&[
        "gpe",
        "--n",
        "800",
        "--backend",
        "direct",
        "--t-end",
        "0.05",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(
        err.contains("instability") && err.contains("step"),
        "diagnostic should name the failure and the step: {err}"
    );
    assert!(
        !dir.path().join("mass_log.csv").exists(),
        "no partial outputs after an aborted run"
    );
}

#[test]
fn gpe_rejects_bad_parameters_with_code_one() {
    let out = hermite(&["gpe", "--n", "16", "--tau", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let out = hermite(&["gpe", "--n", "16", "--splitting", "verlet"]);
    assert_eq!(out.status.code(), Some(1));
}
