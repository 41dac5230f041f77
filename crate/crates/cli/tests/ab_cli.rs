//! End-to-end behaviour of the `cantor-evt` binary.
//!
//! Cargo runs test targets in name order and stops at the first failing one;
//! this file sorts ahead of `acceptance` so a failing criterion cannot hide it.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cantor-evt"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).expect("utf-8")
}

struct Table {
    meta: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn parse(text: &str) -> Table {
        let mut lines = text.lines();
        let mut meta = Vec::new();
        let header = loop {
            let l = lines.next().expect("header row");
            if let Some(m) = l.strip_prefix("# ") {
                meta.push(m.to_string());
            } else {
                break l.split(',').map(String::from).collect();
            }
        };
        let rows = lines
            .map(|l| l.split(',').map(String::from).collect())
            .collect();
        Table { meta, header, rows }
    }

    fn col(&self, name: &str) -> Vec<f64> {
        let i = self
            .header
            .iter()
            .position(|h| h == name)
            .expect("column exists");
        self.rows
            .iter()
            .map(|r| r[i].parse().expect("number"))
            .collect()
    }
}

fn temp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("cantor-evt-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn cdf_rows_and_flags() {
    let t = Table::parse(&stdout(&[
        "cdf",
        "--beta",
        "0.3333333333333333",
        "--p",
        "0.5",
        "--x",
        "0.3333333333333333",
    ]));
    assert_eq!(t.header, ["x", "F", "error_bound", "exact_flag"]);
    assert_eq!(t.rows[0][1], "0.5");
    assert_eq!(t.rows[0][3], "true");
    let t = Table::parse(&stdout(&[
        "cdf", "--beta", "1/3", "--p", "0.5", "--x", "-1",
    ]));
    assert_eq!(t.col("F"), [0.0]);
    let t = Table::parse(&stdout(&[
        "cdf", "--beta", "2/5", "--p", "0.3", "--grid", "500",
    ]));
    let f = t.col("F");
    assert_eq!(f.len(), 501);
    assert!(f.windows(2).all(|w| w[1] >= w[0]));
    assert_eq!((f[0], f[500]), (0.0, 1.0));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code();
    assert_eq!(
        code(&["cdf", "--beta", "1/3", "--p", "0.5", "--x", "abc"]),
        Some(2)
    );
    assert_eq!(code(&["cdf", "--beta", "1/3", "--p", "0.5"]), Some(2));
    assert_eq!(
        code(&["cdf", "--beta", "0.7", "--p", "0.5", "--x", "0"]),
        Some(1)
    );
    assert_eq!(
        code(&["cdf", "--beta", "1/3", "--p", "1.5", "--x", "0"]),
        Some(1)
    );
    assert_eq!(code(&["verify", "--suite", ""]), Some(2));
    assert_eq!(
        code(&["figures", "--fig", "4", "--out-dir", "unused"]),
        Some(2)
    );
    let o = run(&[
        "max-law", "--beta", "1/3", "--p", "0.5", "--x-grid", "-1,-100", "--n", "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not positive"));
}

#[test]
fn nu_over_one_period() {
    let t = Table::parse(&stdout(&[
        "nu", "--beta", "1/3", "--p", "0.5", "--grid", "300",
    ]));
    let (ts, nu) = (t.col("t"), t.col("nu"));
    assert_eq!(ts.len(), 301);
    assert!((ts[0] - (1.0f64 / 3.0).ln()).abs() <= 1e-15);
    assert_eq!(ts[300], 0.0);
    assert!((nu[0] - nu[300]).abs() <= 1e-10);
    assert!(nu.iter().cloned().fold(f64::INFINITY, f64::min) > 0.0);
    let t = Table::parse(&stdout(&[
        "nu", "--beta", "1/2", "--p", "1/2", "--grid", "50",
    ]));
    assert!(t.col("nu").iter().all(|&v| v == 1.0));
}

#[test]
fn quantile_and_simulate() {
    let t = Table::parse(&stdout(&[
        "quantile",
        "--beta",
        "1/3",
        "--p",
        "0.5",
        "--alpha",
        "0,0.25,0.5,1",
    ]));
    let x = t.col("x");
    // F(1/9) = 1/4 and F(1/3) = 1/2; the quantile is the left end of the plateau.
    assert!((x[1] - 1.0 / 9.0).abs() <= 1e-15);
    assert!((x[2] - 1.0 / 3.0).abs() <= 1e-15);
    assert_eq!((x[0], x[3]), (0.0, 1.0));
    let t = Table::parse(&stdout(&[
        "simulate", "--beta", "1/2", "--p", "0.5", "--steps", "50", "--seed", "3",
    ]));
    let xs = t.col("x");
    for i in 1..xs.len() {
        let eps = if t.rows[i][2] == "1" { 0.5 } else { 0.0 };
        assert!((xs[i] - (0.5 * xs[i - 1] + eps)).abs() <= 1e-15);
    }
}

#[test]
fn max_law_against_the_limits() {
    let args = |mode: &'static str| {
        vec![
            "max-law", "--beta", "1/3", "--p", "0.5", "--x-grid", "-1", "--n", "8", "--reps",
            "100000", "--seed", "17", "--mode", mode,
        ]
    };
    let dep = Table::parse(&stdout(&args("dep")));
    assert!((dep.col("empirical")[0] - (-0.5f64).exp()).abs() <= 0.02);
    assert!((dep.col("theory_dep")[0] - (-0.5f64).exp()).abs() <= 1e-12);
    let iid = Table::parse(&stdout(&args("iid")));
    assert!((iid.col("empirical")[0] - iid.col("theory_iid")[0]).abs() <= 0.02);
    assert_eq!(stdout(&args("dep")), stdout(&args("dep")));
}

#[test]
fn extremal_index_table() {
    let base = [
        "extremal-index",
        "--beta",
        "1/3",
        "--p",
        "0.5",
        "--n",
        "8",
        "--reps",
        "20000",
        "--seed",
        "5",
    ];
    let t = Table::parse(&stdout(&base));
    assert_eq!(
        t.rows.iter().map(|r| r[0].as_str()).collect::<Vec<_>>(),
        ["runs", "ratio"]
    );
    assert!(t.col("theta_theory").iter().all(|&v| v == 0.5));
    let (est, lo, hi) = (t.col("estimate"), t.col("ci_lo"), t.col("ci_hi"));
    // The two intervals overlap.
    assert!(lo[0].max(lo[1]) <= hi[0].min(hi[1]), "{est:?}");
    let mut iid = base.to_vec();
    iid.extend(["--mode", "iid", "--method", "runs"]);
    let t = Table::parse(&stdout(&iid));
    assert!((t.col("estimate")[0] - 1.0).abs() <= 0.05);
    assert_eq!(stdout(&iid), stdout(&iid));
}

#[test]
fn exact_law_routes_agree() {
    let t = Table::parse(&stdout(&[
        "exact-law",
        "--beta",
        "1/3",
        "--p",
        "1/2",
        "--x",
        "-1",
        "--n",
        "4",
    ]));
    let s: Vec<f64> = t.col("s");
    let i = s.iter().position(|&v| v == 3.0).unwrap();
    assert_eq!(t.col("closed_form")[i], 0.875);
    for c in ["recursion", "automaton", "bracket_lo", "bracket_hi"] {
        assert!((t.col(c)[i] - 0.875).abs() <= 1e-12, "{c}");
    }
}

#[test]
fn verify_reports() {
    let t = Table::parse(&stdout(&["verify", "--suite", "dynamics"]));
    assert_eq!(
        t.header,
        ["suite", "invariant", "measured", "threshold", "passed"]
    );
    let names: Vec<&str> = t.rows.iter().map(|r| r[1].as_str()).collect();
    assert!(names.iter().any(|n| n.contains("invariance")));
    assert!(names.iter().any(|n| n.contains("conjugacy")));
    assert!(t.rows.iter().all(|r| r.last().unwrap() == "true"));
    let t = Table::parse(&stdout(&["verify", "--suite", "association"]));
    assert!(!t.rows.is_empty());
}

#[test]
fn figures_are_reproducible() {
    let (a, b) = (temp_dir("a"), temp_dir("b"));
    for fig in ["1", "2", "3"] {
        for d in [&a, &b] {
            stdout(&[
                "figures",
                "--fig",
                fig,
                "--out-dir",
                d.to_str().unwrap(),
                "--grid",
                "200",
            ]);
        }
    }
    for e in std::fs::read_dir(&a).unwrap() {
        let name = e.unwrap().file_name();
        assert_eq!(
            std::fs::read(a.join(&name)).unwrap(),
            std::fs::read(b.join(&name)).unwrap()
        );
    }
    // F(beta^k) = p^k = (beta^k)^(log p / log beta).
    let t = Table::parse(&std::fs::read_to_string(a.join("fig1_cdf.csv")).unwrap());
    let (x, f, r) = (t.col("x"), t.col("F"), t.col("reference"));
    let mut touched = 0;
    for k in 1..=4 {
        let bk = 3f64.powi(-k);
        let i = x
            .iter()
            .position(|&v| (v - bk).abs() <= 1e-17)
            .expect("beta^k on the grid");
        assert_eq!(f[i], 0.5f64.powi(k));
        assert!((f[i] - r[i]).abs() <= 1e-15);
        touched += 1;
    }
    assert_eq!(touched, 4);
    let nu = Table::parse(&std::fs::read_to_string(a.join("fig2_nu.csv")).unwrap()).col("nu");
    let span = nu.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - nu.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(span > 0.1);
    let svg = std::fs::read_to_string(a.join("fig3_cdf.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn convergence_figure_tables() {
    let d = temp_dir("conv");
    stdout(&[
        "figures",
        "--fig",
        "convergence",
        "--out-dir",
        d.to_str().unwrap(),
        "--reps",
        "2000",
    ]);
    let t = Table::parse(&std::fs::read_to_string(d.join("convergence_doa.csv")).unwrap());
    let gap = t.col("gap");
    assert_eq!(t.col("n"), [4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0]);
    assert!(gap.windows(2).all(|w| w[1] <= w[0]));
    let law = Table::parse(&std::fs::read_to_string(d.join("convergence_law.csv")).unwrap());
    assert_eq!(law.rows.len(), 30);
}

#[test]
fn config_file_and_metadata() {
    let d = temp_dir("cfg");
    let cfg = d.join("run.cfg");
    std::fs::write(
        &cfg,
        "# parameters\nbeta = 1/3\np = 0.5\nx = 1/9   # exact\nseed = 4\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    let t = Table::parse(&stdout(&["cdf", "--config", c]));
    assert_eq!(t.col("F"), [0.25]);
    assert!(t.meta.iter().any(|m| m == "seed=4"));
    assert!(t.meta.iter().any(|m| m == "beta=1/3"));
    assert!(t.meta[0].starts_with("cantor-evt "));
    let t = Table::parse(&stdout(&[
        "--config", c, "--seed", "2", "cdf", "--x", "1/27",
    ]));
    assert_eq!(t.col("F"), [0.125]);
    assert!(t.meta.iter().any(|m| m == "seed=2"));
    assert!(t.meta.iter().any(|m| m == "x=1/27"));

    std::fs::write(&cfg, "reps = 5\n").unwrap();
    let o = run(&[
        "cdf", "--config", c, "--beta", "1/3", "--p", "0.5", "--x", "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&cfg, "beta 1/3\n").unwrap();
    assert_eq!(
        run(&["cdf", "--config", c, "--x", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn out_flag_writes_lf_csv() {
    let d = temp_dir("out");
    let p = d.join("cdf.csv");
    let o = run(&[
        "cdf",
        "--beta",
        "1/3",
        "--p",
        "0.5",
        "--grid",
        "10",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&p).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    assert_eq!(Table::parse(&text).rows.len(), 11);
}
