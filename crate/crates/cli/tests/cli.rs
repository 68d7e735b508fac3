use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use padefaber_cli::output::Summary;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_padefaber"));
    cmd.env_remove("PADEFABER_OUT");
    cmd
}

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn summary(dir: &Path) -> Summary {
    toml::from_str(&fs::read_to_string(dir.join("summary.toml")).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_prints_the_plan() {
    let o = run(&["validate", "--config", shipped("disk_d1.toml").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let plan = String::from_utf8(o.stdout).unwrap();
    assert!(plan.contains("rho_m        6"), "{plan}");
    assert!(plan.contains("n = 4..=36"));
}

#[test]
fn dry_run_computes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = run(&["run", "--dry-run", "--config", shipped("segment_s1.toml").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(String::from_utf8(o.stdout).unwrap().contains("rho_m        4"));
    assert!(!out.exists());
}

#[test]
fn disk_run_writes_tables_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["--jobs", "2", "run", "--config", shipped("disk_d1.toml").to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = fs::read_to_string(tmp.path().join("rows_E.csv")).unwrap();
    let mut lines = rows.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,alpha,sup_err,q_coeff_err,pole_err_1,pole_err_2,sigma_min,sigma_second,unique"
    );
    // (n, α) for n = 4..=36, α = 1, 2
    assert_eq!(lines.count(), 66);
    assert!(tmp.path().join("rows_band.csv").exists());
    let s = summary(tmp.path());
    assert_eq!(s.status, "ok");
    assert!(s.r_q.rate.unwrap() <= 0.55);
    let e = &s.grids[0];
    assert!((e.bound_24.unwrap() - 1.0 / 6.0).abs() < 1e-12);
    assert!(e.r_sup.iter().all(|f| f.rate.unwrap() <= 0.20));
    assert_eq!(s.uniqueness_onset, Some(4));
    assert!(!s.delta.unwrap().degenerate);
}

#[test]
fn degenerate_ensemble_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["run", "--config", shipped("degenerate.toml").to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = summary(tmp.path());
    assert_eq!((s.rows, s.unique_rows, s.uniqueness_onset), (12, 0, None));
    let delta = s.delta.unwrap();
    assert!(delta.degenerate && delta.relative < 1e-8);
    let rows = fs::read_to_string(tmp.path().join("rows_E.csv")).unwrap();
    assert!(rows.lines().skip(1).all(|l| l.ends_with(",false")));
}

#[test]
fn identical_configs_give_identical_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let config = shipped("ellipse_double_pole.toml");
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let o = run(&["run", "--config", config.to_str().unwrap(), "--out", dir.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for f in ["rows_E.csv", "rows_inner.csv", "coefficients.csv", "summary.toml"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn the_effective_config_reproduces_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let o = run(&["run", "--config", shipped("segment_s1.toml").to_str().unwrap(), "--out", a.to_str().unwrap()]);
    assert!(o.status.success());
    let echoed = a.join("effective_config.toml");
    let o = run(&["run", "--config", echoed.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(a.join("rows_E.csv")).unwrap(), fs::read(b.join("rows_E.csv")).unwrap());
    assert_eq!(fs::read(&echoed).unwrap(), fs::read(b.join("effective_config.toml")).unwrap());
}

#[test]
fn output_directory_precedence() {
    let tmp = tempfile::tempdir().unwrap();
    let env_dir = tmp.path().join("from_env");
    let flag_dir = tmp.path().join("from_flag");
    let config_dir = tmp.path().join("from_config");
    let base = fs::read_to_string(shipped("degenerate.toml")).unwrap();
    let plain = tmp.path().join("plain.toml");
    fs::write(&plain, &base).unwrap();
    let with_dir = tmp.path().join("with_dir.toml");
    fs::write(&with_dir, format!("{base}\n[output]\ndir = \"{}\"\n", config_dir.display())).unwrap();

    let o = bin().args(["run", "--config", plain.to_str().unwrap()]).env("PADEFABER_OUT", &env_dir).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(env_dir.join("summary.toml").exists());

    let o = bin().args(["run", "--config", with_dir.to_str().unwrap()]).env("PADEFABER_OUT", &env_dir).output().unwrap();
    assert!(o.status.success());
    assert!(config_dir.join("summary.toml").exists());

    let o = bin()
        .args(["run", "--config", with_dir.to_str().unwrap(), "--out", flag_dir.to_str().unwrap()])
        .env("PADEFABER_OUT", &env_dir)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(flag_dir.join("summary.toml").exists());
}

#[test]
fn bad_configs_fail_with_a_key_path() {
    let tmp = tempfile::tempdir().unwrap();
    let base = fs::read_to_string(shipped("degenerate.toml")).unwrap();
    let cases = [
        (base.replace("m = [1, 1]", "m = [0, 0]"), "m: "),
        (base.replace("radius = 1.0", "radius = 1.0\ncolour = 3"), "geometry.colour"),
        (base.replace("n_end = 12", "n_end = 0"), "n_end: "),
    ];
    for (text, needle) in cases {
        let path = tmp.path().join("bad.toml");
        fs::write(&path, text).unwrap();
        let o = run(&["validate", "--config", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(1));
        assert!(stderr(&o).contains(needle), "{}", stderr(&o));
    }
    let o = run(&["validate", "--config", "/nonexistent/config.toml"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn violated_defect_window_exits_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let base = fs::read_to_string(shipped("disk_d1.toml")).unwrap();
    let path = tmp.path().join("strict.toml");
    fs::write(&path, format!("{base}\n[tolerances]\ndefect = 1e-30\n")).unwrap();
    let out = tmp.path().join("out");
    let o = run(&["run", "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("partial"));
    let s = summary(&out);
    assert_eq!(s.status, "invariant_violation");
    assert!(!s.violations.is_empty());
}

#[test]
fn report_refits_the_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["run", "--config", shipped("disk_d1.toml").to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&["report", "--out", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: toml::Table = toml::from_str(&String::from_utf8(o.stdout).unwrap()).unwrap();
    let tables = doc["tables"].as_array().unwrap();
    assert_eq!(tables.len(), 2);
    let s = summary(tmp.path());
    let e = tables.iter().find(|t| t["grid"].as_str() == Some("E")).unwrap();
    assert_eq!(e["r_q"]["rate"].as_float(), s.r_q.rate);
    for (alpha, f) in s.grids[0].r_sup.iter().enumerate() {
        assert_eq!(e["r_sup"][alpha]["rate"].as_float(), f.rate);
    }
    let empty = tempfile::tempdir().unwrap();
    assert_eq!(run(&["report", "--out", empty.path().to_str().unwrap()]).status.code(), Some(1));
}
