//! Artifact contract, determinism and command-line behaviour.

use num_complex::Complex64;
use proptest::prelude::*;
use spectra_cli::config::{ExperimentConfig, Suite};
use spectra_cli::emit::{read_csv, read_json, write_csv, Table};
use spectra_cli::report::validate_report_json;
use spectra_cli::{ks_test, run_suite, CliError};
use std::process::Command;
use std::time::Duration;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spectra"))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn csv_round_trip_is_bit_exact(rows in prop::collection::vec(prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 4), 1..20)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut t = Table::new(vec!["a".into(), "b".into(), "c".into(), "d".into()]);
        for (i, r) in rows.iter().enumerate() {
            t.push(i as u64, r.clone()).unwrap();
        }
        write_csv(&t, &path).unwrap();
        let back = read_csv(&path).unwrap();
        prop_assert_eq!(&back.header, &t.header);
        prop_assert_eq!(&back.index, &t.index);
        for (a, b) in back.rows.iter().flatten().zip(t.rows.iter().flatten()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

#[test]
fn complex_spectrum_of_three_has_six_columns_plus_index() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.csv");
    let z = vec![vec![
        Complex64::new(0.1, -0.2),
        Complex64::new(1.0 / 3.0, 2.0),
        Complex64::new(-5.0, 1e-300),
    ]];
    write_csv(&Table::complex_spectra(&z), &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(
        header,
        ["index", "re_1", "im_1", "re_2", "im_2", "re_3", "im_3"]
    );
    let back = read_csv(&path).unwrap();
    assert_eq!(back.rows[0][3].to_bits(), 2f64.to_bits());
    assert_eq!(back.rows[0][5].to_bits(), 1e-300f64.to_bits());
    // 17 significant digits per real.
    let first = text.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    assert_eq!(first, "1.0000000000000001e-1");
}

#[test]
fn report_json_validates_against_schema() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::new(Suite::F4)
        .with_reps(5)
        .with_output(dir.path());
    let out = run_suite(&cfg).unwrap();
    let path = dir.path().join("F4.json");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    validate_report_json(&v).unwrap();
    assert_eq!(read_json(&path).unwrap(), out.report);
    assert_eq!(v["statistic_name"], "max_residual");
    // A tampered pass flag is caught.
    let mut bad = v.clone();
    bad["pass"] = serde_json::Value::Bool(!out.report.pass);
    assert!(validate_report_json(&bad).is_err());
    let mut extra = v;
    extra["note"] = "x".into();
    assert!(validate_report_json(&extra).is_err());
}

#[test]
fn identical_config_gives_identical_csv_bytes() {
    let run_in = |threads: usize| {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::new(Suite::F3)
            .with_n(40)
            .with_reps(24)
            .with_seed(9)
            .with_output(dir.path());
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| run_suite(&cfg)).unwrap();
        std::fs::read(dir.path().join("F3.csv")).unwrap()
    };
    let a = run_in(1);
    assert_eq!(a, run_in(1));
    assert_eq!(a, run_in(3));
}

#[test]
fn wall_clock_cap_is_enforced() {
    let cfg = ExperimentConfig::new(Suite::F3).with_cap(Duration::from_nanos(1));
    assert!(matches!(run_suite(&cfg), Err(CliError::Timeout { .. })));
}

#[test]
fn io_errors_carry_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain");
    std::fs::write(&file, "x").unwrap();
    let target = file.join("t.csv");
    let err = write_csv(&Table::new(vec!["a".into()]), &target).unwrap_err();
    assert!(err.to_string().contains("plain"), "{err}");
    let err = read_csv(&dir.path().join("missing.csv")).unwrap_err();
    assert!(err.to_string().contains("missing.csv"), "{err}");
}

#[test]
fn ks_test_examples() {
    // Samples from the cdf itself (uniform), n = 10⁴.
    let mut s = spectra_core::randgen::Stream::new(3);
    let u: Vec<f64> = (0..10_000).map(|_| s.uniform()).collect();
    assert!(ks_test(&u, |x| x.clamp(0.0, 1.0)).unwrap() < 0.02);
    // Point mass against a continuous law.
    let c = vec![0.0; 50];
    assert!(ks_test(&c, |x| 1.0 / (1.0 + (-x).exp())).unwrap() >= 0.5);
    // A decreasing "cdf" and too few samples are rejected.
    assert!(ks_test(&u, |x| 1.0 - x).is_err());
    assert!(ks_test(&u[..9], |x| x).is_err());
    assert!(ks_test(&[f64::NAN; 20], |x| x).is_err());
}

#[test]
fn cli_verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = bin()
        .args(["verify", "--suite", "F4.4", "--n", "20", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("PASS F4.4"));
    assert!(dir.path().join("F4.4.csv").exists() && dir.path().join("F4.4.json").exists());

    // A 2 x 2 matrix is far from the large-N outlier location.
    let fail = bin()
        .args([
            "verify", "--suite", "F3", "--n", "2", "--reps", "1", "--seed", "1", "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&fail.stdout).starts_with("FAIL F3"));

    let bad = bin().args(["verify", "--suite", "F9"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown suite"));
    let bad = bin()
        .args(["verify", "--suite", "F3", "--reps", "0", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn cli_sample_theory_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    let st = bin()
        .args([
            "sample",
            "--ensemble",
            "subunitary",
            "--n",
            "3",
            "--a",
            "0.4",
            "--reps",
            "5",
            "--seed",
            "2",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let t = read_csv(&out).unwrap();
    assert_eq!(t.len(), 5);
    assert_eq!(t.header.len(), 6);
    for r in &t.rows {
        let prod: f64 = r.chunks(2).map(|c| c[0].hypot(c[1])).product();
        assert!((prod - 0.4).abs() < 1e-12);
    }

    let th = bin()
        .args(["theory", "--quantity", "outlier", "--params", "alpha=1.5"])
        .output()
        .unwrap();
    assert!(th.status.success());
    let v: serde_json::Value = serde_json::from_slice(&th.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 5.0 / 3.0).abs() < 1e-14);

    let sw = bin()
        .args([
            "sweep",
            "--model",
            "subunitary",
            "--grid",
            "1:0:0.25",
            "--n",
            "4",
            "--seed",
            "1",
        ])
        .output()
        .unwrap();
    assert!(sw.status.success());
    let text = String::from_utf8(sw.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "index,grid_value,re_1,im_1,re_2,im_2,re_3,im_3,re_4,im_4,flag"
    );
    assert_eq!(lines.count(), 5);
    let bad = bin()
        .args(["sweep", "--model", "other", "--grid", "0:1:0.5", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
