use std::process::{Command, Output};

use medqmc_cli::records::read_records;
use medqmc_core::digital_net::DirectionNumbers;
use medqmc_core::testbed::{fit_slope, run_convergence, ConvergenceSetup, RuleKind, TestFunction};

fn medqmc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_medqmc")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn sobol_points_in_one_dimension() {
    let o = medqmc(&["points", "--rule", "sobol", "--s", "1", "--m", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(data_lines(&out), ["0", "0.5", "0.25", "0.75"]);
    assert!(out.starts_with("# medqmc points rule=sobol"));
    assert!(out.contains("seed=0"));
}

#[test]
fn randomized_points_depend_on_the_seed() {
    let run = |seed: &str| stdout(&medqmc(&["points", "--rule", "plr", "--s", "2", "--m", "3", "--seed", seed]));
    assert_eq!(run("5"), run("5"));
    assert_ne!(data_lines(&run("5")), data_lines(&run("6")));
    assert_eq!(data_lines(&run("5")).len(), 8);
}

#[test]
fn verify_base_two() {
    let o = medqmc(&["verify", "--base", "2", "--max-m", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 8);
    assert!(!out.contains("FAIL"));
}

#[test]
fn tvalue_reports_both_methods() {
    let o = medqmc(&["tvalue", "--rule", "niederreiter", "--b", "3", "--s", "2", "--m", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("t (Rank) = 0") && out.contains("t (Dual) = 0"), "{out}");
    assert!(out.contains("t_{1,2}: Rank 0, Dual 0"));
}

#[test]
fn bound_prints_epsilon_and_constants() {
    let o = medqmc(&["bound", "--theorem", "sob1", "--m", "10", "--delta", "0.5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let eps: f64 = out.lines().find_map(|l| l.strip_prefix("epsilon = ")).unwrap().parse().unwrap();
    let expected = 2.0 * (2.0 + 20.0 * 3f64.log2()) / 1024.0;
    assert!((eps - expected).abs() < 1e-15 * expected);
    assert!(out.contains("m_b = ") && out.contains("lambda = -"));

    let o = medqmc(&["bound", "--theorem", "sob-alpha", "--family", "plr", "--m", "12", "--s", "3", "--r", "15", "--delta", "0.2"]);
    let out = stdout(&o);
    assert!(o.status.success());
    assert!(out.contains("C_alpha = ") && !out.contains("lambda = -") && !out.contains("tau = -"), "{out}");
    assert!(out.contains("median of 15 draws fails with probability <= "));
}

#[test]
fn converge_csv_replicates_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("f3.csv");
    let reps = dir.path().join("reps.csv");
    let svg = dir.path().join("f3.svg");
    let o = medqmc(&[
        "converge", "--rule", "median-plr", "--function", "f3", "--m", "6:16", "--seed", "42",
        "-o", csv.to_str().unwrap(), "--replicates", reps.to_str().unwrap(), "--svg", svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed = 42"));

    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("# medqmc converge --rule median-plr --function f3 --m 6:16"));
    let rows = data_lines(&text);
    assert_eq!(rows[0], "rule,function,c,s,b,m,N,r,w,seed,abs_error");
    assert_eq!(rows.len(), 12);

    // re-read records fit to the same bits as a fresh in-memory run
    let back = read_records(text.as_bytes()).unwrap();
    let setup = ConvergenceSetup {
        rule: RuleKind::MedianPlr,
        b: 2,
        r: 15,
        w: 52,
        seed: 42,
        dirs: DirectionNumbers::bundled(),
    };
    let fresh = run_convergence(&setup, &TestFunction::F3, &(6..=16).collect::<Vec<_>>()).unwrap();
    let (a, b) = (fit_slope(&back).unwrap(), fit_slope(&fresh).unwrap());
    assert_eq!(a.slope.to_bits(), b.slope.to_bits());
    assert_eq!(a.intercept.to_bits(), b.intercept.to_bits());

    let reps = std::fs::read_to_string(&reps).unwrap();
    assert_eq!(data_lines(&reps).len(), 1 + 11 * 15);
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 1);
}

#[test]
fn converge_accepts_the_long_rule_name_and_lists() {
    let o = medqmc(&[
        "converge", "--rule", "sobol,median-scrambled-sobol", "--function", "f5", "--c", "0,2", "--s", "2", "--m", "4:5",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let rows = data_lines(&out);
    assert_eq!(rows.len(), 1 + 2 * 2 * 2);
    assert!(rows.iter().any(|r| r.starts_with("median-sobol,f5,2,2,2,5,32,15,52,0,")));
    assert!(rows.iter().any(|r| r.starts_with("sobol,f5,0,2,2,4,16,1,4,0,")));
}

#[test]
fn exit_codes() {
    assert_eq!(medqmc(&["points", "--bogus"]).status.code(), Some(2));
    assert_eq!(medqmc(&["converge", "--rule", "nope", "--function", "f1", "--m", "3"]).status.code(), Some(2));
    assert_eq!(medqmc(&["converge", "--rule", "sobol", "--function", "f1", "--m", "9:3"]).status.code(), Some(2));
    let refused = medqmc(&["points", "--rule", "sobol", "--m", "30"]);
    assert_eq!(refused.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("refused"));
    assert_eq!(medqmc(&["tvalue", "--rule", "sobol", "--s", "9", "--m", "4", "--method", "dual"]).status.code(), Some(3));
    assert_eq!(medqmc(&["points", "--rule", "sobol", "--b", "3", "--m", "2"]).status.code(), Some(1));
}

#[test]
fn thread_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_medqmc"))
        .args(["points", "--rule", "sobol", "--m", "1"])
        .env("MEDQMC_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_medqmc"))
        .args(["verify"])
        .env("MEDQMC_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
