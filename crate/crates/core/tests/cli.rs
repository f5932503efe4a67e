use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn areatrap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_areatrap"))
        .args(args)
        .env_remove("AREATRAP_THREADS")
        .output()
        .expect("spawn areatrap")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

const MINI: &str = r#"{
  "master_seed": 3,
  "n_values": [10, 14, 18],
  "alpha_values": [0.1, 0.2],
  "replicates": 2,
  "outputs": { "lln_table": "lln.csv", "exponents_svg": "exp.svg", "lln_svg": "lln.svg" }
}"#;

#[test]
fn sample_then_solve_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let cloud = dir.path().join("cloud.txt");
    let path = dir.path().join("path.txt");
    let o = areatrap(&["sample", "--n", "15", "--seed", "4", "--out", p(&cloud)]);
    assert_eq!(o.status.code(), Some(0));

    let o = areatrap(&["solve", "--cloud", p(&cloud), "--alpha", "0.2", "--mode", "exact", "--out", p(&path)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let get = |k: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{k}=")))
            .unwrap_or_else(|| panic!("no {k} in {text}"))
            .parse()
            .unwrap()
    };
    assert!(get("L_alpha") <= get("L_unconstrained"));
    assert!(get("achieved_area") >= get("threshold"));
    assert_eq!(get("gap"), 0.0);

    // the same cloud sampled inline gives the same answer
    let o2 = areatrap(&["solve", "--n", "15", "--seed", "4", "--alpha", "0.2", "--mode", "exact"]);
    assert_eq!(stdout(&o2), text);

    let svg = dir.path().join("shape.svg");
    let o = areatrap(&["plot", "--in", p(&path), "--kind", "shape", "--alpha", "0.2", "--out", p(&svg)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(svg).unwrap().starts_with("<svg"));
}

#[test]
fn limit_shape_prints_constants_and_curve() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("psi.csv");
    let o = areatrap(&["limit-shape", "--alpha", "0.25", "--curve-out", p(&curve), "--samples", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row[0], 0.25);
    assert!(row[1] > 0.0 && row[2] > 0.0 && row[2] < 1.0);
    let lines: Vec<_> = fs::read_to_string(curve).unwrap().lines().map(String::from).collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "0,0");
    assert_eq!(lines[5], "1,1");
}

#[test]
fn sweep_trial_fit_and_plots_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("mini.json");
    fs::write(&cfg, MINI).unwrap();
    let out = dir.path().join("r.csv");
    let o = areatrap(&["sweep", "--config", p(&cfg), "--out", p(&out), "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["lln.csv", "exp.svg", "lln.svg"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let csv = fs::read_to_string(&out).unwrap();
    assert_eq!(csv.lines().count(), 13);

    // `trial` reproduces the sweep row
    let o = areatrap(&["trial", "--config", p(&cfg), "--index", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    assert_eq!(t.lines().nth(1), csv.lines().nth(6));

    let o = areatrap(&["fit", "--in", p(&out), "--field", "L_unconstrained"]);
    assert_eq!(o.status.code(), Some(0));
    let fit = stdout(&o);
    let slope: f64 = fit.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!(slope > 0.5 && slope < 1.5, "{fit}");

    let svg = dir.path().join("e.svg");
    let o = areatrap(&["plot", "--in", p(&out), "--kind", "exponents", "--out", p(&svg)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(&svg).unwrap(), fs::read(dir.path().join("exp.svg")).unwrap());
}

#[test]
fn env_threads_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("mini.json");
    fs::write(&cfg, MINI).unwrap();
    let out = dir.path().join("r.csv");
    let o = Command::new(env!("CARGO_BIN_EXE_areatrap"))
        .args(["sweep", "--config", p(&cfg), "--out", p(&out)])
        .env("AREATRAP_THREADS", "3")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&o.stderr).contains("on 3 threads"));
    let o = Command::new(env!("CARGO_BIN_EXE_areatrap"))
        .args(["sweep", "--config", p(&cfg), "--out", p(&out)])
        .env("AREATRAP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sweep_falls_back_to_configured_results_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(
        &cfg,
        r#"{"master_seed": 1, "n_values": [8], "alpha_values": [0.1], "outputs": {"results": "res/r.csv"}}"#,
    )
    .unwrap();
    fs::create_dir(dir.path().join("res")).unwrap();
    let o = areatrap(&["sweep", "--config", p(&cfg)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("res/r.csv").exists());
}

#[test]
fn oracle_check_passes_with_exit_zero() {
    let o = areatrap(&["oracle-check", "--trials", "40", "--max-points", "10", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mismatches=0"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // validation: bad arguments and bad values
    assert_eq!(areatrap(&["limit-shape", "--alpha", "0.7"]).status.code(), Some(1));
    assert_eq!(areatrap(&["sample", "--n", "-3", "--seed", "1", "--out", "x"]).status.code(), Some(1));
    assert_eq!(areatrap(&["solve", "--alpha", "0.1"]).status.code(), Some(1));
    assert_eq!(areatrap(&["nonsense"]).status.code(), Some(1));
    assert_eq!(areatrap(&["oracle-check", "--max-points", "40"]).status.code(), Some(1));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"master_seed": 1, "n_values": [8], "alpha_values": [0.1], "typo": 1}"#).unwrap();
    assert_eq!(areatrap(&["trial", "--config", p(&bad), "--index", "0"]).status.code(), Some(1));
    assert_eq!(
        areatrap(&["solve", "--n", "2", "--seed", "1", "--alpha", "0.49"]).status.code(),
        Some(1),
        "infeasible instance is a validation outcome"
    );
    // I/O failures are internal
    let missing = dir.path().join("nope").join("cloud.txt");
    assert_eq!(areatrap(&["solve", "--cloud", p(&missing), "--alpha", "0.1"]).status.code(), Some(2));
    assert_eq!(areatrap(&["sample", "--n", "3", "--seed", "1", "--out", p(&missing)]).status.code(), Some(2));
    assert_eq!(areatrap(&["--help"]).status.code(), Some(0));
}
