use std::path::Path;
use std::process::{Command, Output};

fn biharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biharm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV document, header block and column line removed.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const C5: f64 = 0.012_665_147_955_292_22;

#[test]
fn eval_interval_h_at_zero_is_infinite() {
    let o = biharm(&["eval", "--model", "interval", "--kernel", "h", "--x", "0.5", "--y", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# model=interval"));
    assert!(text.contains("x,y,value,error_bound,exponent"));
    let r = &rows(&text)[0];
    assert_eq!(r[2], "INF");
    let p: f64 = r[4].parse().unwrap();
    assert!((p + 1.0).abs() <= 0.05);
}

#[test]
fn eval_bilaplace_h_on_the_diagonal() {
    let o = biharm(&["eval", "--model", "bilaplace", "--kernel", "h", "--x", "0.5", "--y", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = rows(&stdout(&o))[0][2].parse().unwrap();
    assert!((v - 1.0 / 48.0).abs() <= 1e-8);
}

#[test]
fn eval_newtonian_power_law() {
    let o = biharm(&["eval", "--model", "newtonian5", "--kernel", "g1", "--dist", "2,0"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    let v: f64 = r[0][1].parse().unwrap();
    assert!((v - C5 / 8.0).abs() <= 1e-15);
    assert_eq!(r[1][1], "INF");
    assert_eq!(r[1][3], "-3.00000e0");
    let o = biharm(&["eval", "--model", "newtonian5", "--kernel", "h", "--dist", "1"]);
    let v: f64 = rows(&stdout(&o))[0][1].parse().unwrap();
    assert!((v - C5 / 2.0).abs() <= 1e-8);
}

#[test]
fn eval_grid_of_points_and_operators() {
    let o = biharm(&[
        "eval", "--model", "interval", "--kernel", "g2", "--x", "0.25,0.75", "--y", "0.5,0.1",
    ]);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 4);
    assert_eq!(r[0][2], "3");
    let o = biharm(&["eval", "--model", "interval", "--kernel", "v", "--x", "0.2"]);
    let v: f64 = rows(&stdout(&o))[0][1].parse().unwrap();
    assert!((v - 0.4).abs() <= 1e-8);
    let o = biharm(&["eval", "--model", "interval", "--kernel", "vstar", "--x", "0"]);
    assert_eq!(rows(&stdout(&o))[0][1], "INF");
}

#[test]
fn eval_usage_errors_exit_2() {
    for args in [
        &["eval", "--model", "interval"][..],
        &["eval", "--model", "interval", "--kernel", "h", "--x", "0.5"],
        &["eval", "--model", "plane", "--kernel", "h", "--x", "0.5", "--y", "0.5"],
        &["eval", "--model", "newtonian3", "--kernel", "g1", "--dist", "1"],
        &["eval", "--model", "interval", "--kernel", "h", "--x", "1.5", "--y", "0.5"],
        &["eval", "--model", "newtonian5", "--kernel", "h", "--dist", "1e-6"],
        &["eval", "--model", "bilaplace", "--kernel", "g1", "--dist", "1"],
        &["eval", "--model", "bilaplace", "--kernel", "h", "--x", "0.5", "--y", "0.5", "--tol-quad", "-1"],
        &["eval", "--frobnicate"],
        &["explode"],
    ] {
        let o = biharm(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stdout(&o));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_suites_pass() {
    for suite in ["axioms", "interval", "bilaplace", "newtonian", "adjoint"] {
        let o = biharm(&["verify", suite]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        let text = stdout(&o);
        assert!(text.contains("# failed=0"));
        assert!(rows(&text).iter().all(|r| r.last().unwrap() == "pass"));
    }
    let text = stdout(&biharm(&["verify", "interval"]));
    for id in ["v1-identity", "kink-law", "divergence", "obstruction"] {
        assert!(text.contains(id), "interval suite lacks {id}");
    }
}

#[test]
fn verify_failure_exits_1() {
    // A finite-difference tolerance far below the truncation error fails the
    // residual checks.
    let o = biharm(&["verify", "bilaplace", "--tol-fd", "1e-15"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",fail"));
    assert_eq!(biharm(&["verify", "everything"]).status.code(), Some(2));
}

#[test]
fn config_file_is_merged_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "# bilaplace diagonal\nmodel = bilaplace\nkernel = h\nx = 0.5\ny = 0.5\nseed = 7\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let o = biharm(&["eval", "--config", c]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# seed=7"));
    let o = biharm(&["eval", "--config", c, "--y", "0.25"]);
    let r = rows(&stdout(&o));
    assert_eq!(r[0][1], "0.25");

    std::fs::write(&cfg, "model = bilaplace\ncolour = blue\n").unwrap();
    let o = biharm(&["eval", "--config", c]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown key `colour`"));

    let missing = dir.path().join("absent.conf");
    let o = biharm(&["verify", "axioms", "--config", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["eval", "--model", "interval", "--kernel", "h", "--x", "0.1,0.5,0.9", "--y", "0,0.3"];
    assert_eq!(biharm(&args).stdout, biharm(&args).stdout);
    let a = biharm(&["verify", "all"]);
    let b = biharm(&["verify", "all"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

fn report(example: &str, dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["report", example, "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    biharm(&args)
}

#[test]
fn reports_write_csv_and_dat() {
    let dir = tempfile::tempdir().unwrap();
    for (example, name) in [
        ("5.1", "newtonian-divergence"),
        ("5.2", "obstruction"),
        ("5.5", "interval-h-divergence"),
        ("condition63", "condition63-trace"),
        ("thm54", "h-symmetry"),
        ("thm71", "lsc"),
    ] {
        let o = report(example, dir.path(), &[]);
        assert_eq!(o.status.code(), Some(0), "{example}: {}", stdout(&o));
        assert!(stdout(&o).contains("reproduced"));
        let csv = std::fs::read_to_string(dir.path().join(format!("{name}.csv"))).unwrap();
        let dat = std::fs::read_to_string(dir.path().join(format!("{name}.dat"))).unwrap();
        assert!(csv.starts_with("# biharm="));
        assert!(csv.contains(&format!("# report={example}")));
        assert_eq!(
            rows(&csv).len(),
            dat.lines().filter(|l| !l.is_empty() && !l.starts_with('#')).count()
        );
    }
}

#[test]
fn condition63_trace_shows_the_integrand_blowing_up() {
    let dir = tempfile::tempdir().unwrap();
    report("condition63", dir.path(), &[]);
    let csv = std::fs::read_to_string(dir.path().join("condition63-trace.csv")).unwrap();
    let r = rows(&csv);
    let first_past = r
        .iter()
        .find(|row| row[2].parse::<f64>().unwrap() > 1e6)
        .map(|row| row[0].parse::<usize>().unwrap())
        .unwrap();
    assert!((18..=24).contains(&first_past), "{first_past}");
    // partial sums grow by ln 2 per shell
    let shell: f64 = r[20][3].parse().unwrap();
    assert!((shell - std::f64::consts::LN_2).abs() < 1e-6);
}

#[test]
fn symmetry_report_grid() {
    let dir = tempfile::tempdir().unwrap();
    report("thm54", dir.path(), &[]);
    let csv = std::fs::read_to_string(dir.path().join("h-symmetry.csv")).unwrap();
    let r = rows(&csv);
    assert_eq!(r.len(), 400);
    assert!(r.iter().all(|row| row[4].parse::<f64>().unwrap() <= 1e-10));
}

#[test]
fn obstruction_report_depends_on_the_seed_only() {
    let (a, b, c) = (
        tempfile::tempdir().unwrap(),
        tempfile::tempdir().unwrap(),
        tempfile::tempdir().unwrap(),
    );
    report("5.2", a.path(), &["--seed", "11", "--grid", "50"]);
    report("5.2", b.path(), &["--seed", "11", "--grid", "50"]);
    report("5.2", c.path(), &["--seed", "12", "--grid", "50"]);
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("obstruction.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    let csv = String::from_utf8(read(&a)).unwrap();
    let r = rows(&csv);
    assert_eq!(r.len(), 50);
    assert!(r[0][1].parse::<f64>().unwrap() < 0.0);
}

#[test]
fn report_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(report("5.9", dir.path(), &[]).status.code(), Some(2));
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = report("thm54", &blocker.join("sub"), &["--grid", "2"]);
    assert_eq!(o.status.code(), Some(2));
}
