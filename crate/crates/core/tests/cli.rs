use std::path::Path;
use std::process::Command;

use dashsvd::cli::main_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["dashsvd"];
    full.extend_from_slice(args);
    let code = main_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn diag_fixture(dir: &Path) -> String {
    let p = dir.join("diag.mtx");
    std::fs::write(
        &p,
        "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n2 2 2\n",
    )
    .unwrap();
    p.to_str().unwrap().to_string()
}

fn report_value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no {key} in report:\n{report}"))
}

#[test]
fn diag_fixture_dash() {
    let dir = tempfile::tempdir().unwrap();
    let input = diag_fixture(dir.path());
    let prefix = dir.path().join("out");
    let (code, out, err) = run(&[
        "run", "--input", &input, "--k", "1", "--alg", "dash", "--tol", "1e-2",
        "--out-prefix", prefix.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let s = std::fs::read_to_string(dir.path().join("out.S.txt")).unwrap();
    assert!(s.starts_with("2.0"), "{s}");
    assert_eq!(report_value(&out, "stop_reason"), "tol_met");
    let n_p: usize = report_value(&out, "n_p").parse().unwrap();
    assert!(n_p <= 1000);
    assert!(dir.path().join("out.U.mtx").exists());
    assert!(dir.path().join("out.V.mtx").exists());
}

#[test]
fn report_phases_fit_in_total() {
    let (code, out, _) = run(&["run", "--synthetic", "sparse:200x120:0.05:3", "--k", "8"]);
    assert_eq!(code, 0);
    let t = |k: &str| report_value(&out, k).parse::<f64>().unwrap();
    assert!(t("time_load_s") + t("time_iterate_s") + t("time_finalize_s") <= t("time_total_s") + 1e-6);
}

#[test]
fn p_and_tol_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let input = diag_fixture(dir.path());
    let (code, _, err) = run(&["run", "--input", &input, "--k", "1", "--p", "2", "--tol", "1e-2"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot be used with"), "{err}");
}

#[test]
fn algorithm_flag_mismatch_is_config_error() {
    let (code, _, err) = run(&["run", "--synthetic", "dense1:20", "--k", "2", "--alg", "basic", "--tol", "1e-2"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = run(&["run", "--synthetic", "dense1:20", "--k", "2", "--alg", "dash", "--p", "3"]);
    assert_eq!(code, 2);
}

#[test]
fn bad_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.mtx");
    std::fs::write(&p, "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n").unwrap();
    let (code, _, err) = run(&["run", "--input", p.to_str().unwrap(), "--k", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, _) = run(&["run", "--input", "/nonexistent.mtx", "--k", "1"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["run", "--synthetic", "dense1:20", "--k", "30"]);
    assert_eq!(code, 2);
}

#[test]
fn rank_deficiency_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r1.mtx");
    std::fs::write(
        &p,
        "%%MatrixMarket matrix coordinate real general\n3 3 1\n1 1 5\n",
    )
    .unwrap();
    let (code, _, err) = run(&["run", "--input", p.to_str().unwrap(), "--k", "1", "--s", "1", "--alg", "basic", "--p", "1"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn deterministic_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for name in ["a", "b"] {
        let prefix = dir.path().join(name);
        let (code, _, _) = run(&[
            "run", "--synthetic", "sparse:300x200:0.03:9", "--k", "10", "--seed", "7",
            "--deterministic", "--out-prefix", prefix.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        files.push(std::fs::read(dir.path().join(format!("{name}.S.txt"))).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn metrics_of_oracle_factors_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let a = dashsvd::synth::random_sparse(60, 40, 0.2, 1);
    let input = dir.path().join("a.mtx");
    dashsvd::sparse::save_matrix_market(&a, &input).unwrap();
    let exact = dashsvd::dense::oracle_svd(&a.to_dense()).unwrap().truncate(5);
    let prefix = dir.path().join("exact");
    dashsvd::cli::save_factors(&exact, &prefix).unwrap();
    let (code, out, err) = run(&[
        "metrics", "--input", input.to_str().unwrap(), "--factors", prefix.to_str().unwrap(),
        "--reference", "oracle",
    ]);
    assert_eq!(code, 0, "{err}");
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "eps_pve,eps_res,eps_spec,eps_sigma");
    let vals: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(vals.len(), 4);
    for v in vals {
        assert!(v.abs() <= 1e-8, "{v}");
    }
}

#[test]
fn metrics_from_spectrum_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = diag_fixture(dir.path());
    let prefix = dir.path().join("f");
    let (code, _, _) = run(&["run", "--input", &input, "--k", "1", "--out-prefix", prefix.to_str().unwrap()]);
    assert_eq!(code, 0);
    let spec = dir.path().join("sigma.txt");
    std::fs::write(&spec, "# sigma\n2\n1\n").unwrap();
    let (code, out, _) = run(&[
        "metrics", "--input", &input, "--factors", prefix.to_str().unwrap(),
        "--reference", spec.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn oracle_refused_on_large_input() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("f");
    let (code, _, err) = run(&[
        "metrics", "--synthetic", "sparse:3000x3000:0.0005", "--factors", prefix.to_str().unwrap(),
        "--reference", "oracle",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("oracle refuses"), "{err}");
}

#[test]
fn bench_cardinality() {
    let (code, out, err) = run(&[
        "bench", "--synthetic", "sparse:120x80:0.1:2", "--k", "5", "--alg", "basic,shifted",
        "--p-list", "0,2,4", "--repeats", "2",
    ]);
    assert_eq!(code, 0, "{err}");
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "alg,p,tol,seed,time_s,n_p,eps_pve,eps_res,eps_spec,eps_sigma"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12);
    for r in &rows {
        assert_eq!(r.split(',').count(), 10);
    }
}

#[test]
fn bench_needs_matching_lists() {
    let (code, _, _) = run(&["bench", "--synthetic", "dense1:30", "--k", "3", "--alg", "dash", "--p-list", "2"]);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["bench", "--synthetic", "dense1:30", "--k", "3", "--alg", "basic", "--tol-list", "1e-2"]);
    assert_eq!(code, 2);
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn dense2_synthetic_uses_known_spectrum() {
    let (code, out, err) = run(&[
        "bench", "--synthetic", "dense2:300", "--k", "10", "--alg", "dash", "--tol-list", "1e-2",
    ]);
    assert_eq!(code, 0, "{err}");
    let pve = column(&out, "eps_pve");
    assert!(pve[0] < 5e-2);

    let a = dashsvd::synth::dense2(300, 0);
    let exact = dashsvd::dense::oracle_svd(&a).unwrap();
    for (i, s) in exact.s.iter().take(20).enumerate() {
        assert!((s - 1.0 / ((i + 1) as f64).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn dense2_repeat_spread_is_small() {
    let (code, out, _) = run(&[
        "bench", "--synthetic", "dense2:500", "--k", "100", "--s", "50", "--alg", "shifted",
        "--p-list", "0", "--repeats", "10", "--seed", "1",
    ]);
    assert_eq!(code, 0);
    for metric in ["eps_res", "eps_sigma"] {
        let v = column(&out, metric);
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
        assert!(sd <= 0.05 * mean, "{metric}: sd {sd} mean {mean}");
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dashsvd");
    let st = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let st = Command::new(bin).args(["run", "--k", "1"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
    let st = Command::new(bin)
        .args(["run", "--synthetic", "dense1:20", "--k", "2"])
        .env("DASHSVD_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0));
    let out = String::from_utf8(st.stdout).unwrap();
    assert_eq!(report_value(&out, "threads"), "2");
}
