use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use floquet_complexity::specfun::bessel_zero;

fn scan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floquet-scan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = scan(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

struct Csv {
    meta: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(text: &str) -> Self {
        let mut meta = Vec::new();
        let mut lines = text.lines().peekable();
        while let Some(l) = lines.peek() {
            let Some(kv) = l.strip_prefix("# ") else { break };
            let (k, v) = kv.split_once('=').unwrap();
            meta.push((k.to_string(), v.to_string()));
            lines.next();
        }
        let columns = lines.next().unwrap().split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        Self { meta, columns, rows }
    }

    fn meta(&self, key: &str) -> &str {
        &self.meta.iter().find(|(k, _)| k == key).unwrap().1
    }

    fn col(&self, name: &str) -> usize {
        self.columns.iter().position(|c| c == name).unwrap()
    }

    fn nums(&self, name: &str) -> Vec<f64> {
        let i = self.col(name);
        self.rows.iter().map(|r| r[i].parse().unwrap()).collect()
    }
}

#[test]
fn evolve_three_detunings_as_columns() {
    let csv = Csv::parse(&ok(&["evolve", "--L", "200", "--t-max", "3000", "--t-steps", "601"]));
    assert_eq!(csv.columns, ["t", "C_0", "C_1", "C_2", "slope_t"]);
    assert_eq!(csv.rows.len(), 601);
    assert_eq!(csv.meta("C_0.phase"), "FMZ");
    assert_eq!(csv.meta("C_0.valid"), "true");
    // no equilibration at zero detuning: the late window keeps oscillating
    let c0 = csv.nums("C_0");
    let late = &c0[300..];
    let mean = late.iter().sum::<f64>() / late.len() as f64;
    let (lo, hi) = late
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi - lo > 0.2 * mean, "swing {} vs mean {mean}", hi - lo);
}

#[test]
fn evolve_without_anisotropy_is_zero() {
    let z = bessel_zero(2, 1).unwrap();
    let g1 = format!("{}", z / 4.0);
    let csv = Csv::parse(&ok(&["evolve", "--L", "100", "--g1", &g1, "--t-steps", "101"]));
    for name in ["C_0", "C_1", "C_2", "slope_t"] {
        assert!(csv.nums(name).iter().all(|c| c.abs() < 1e-12), "{name}");
    }
}

#[test]
fn evolve_early_window_is_linear() {
    // t* = 1/(2|δg0| + 2J) with J = 0.01
    for (dg0, t_star) in [("0", 50.0), ("0.01", 25.0), ("0.02", 1.0 / 0.06)] {
        let tmax = format!("{}", t_star / 10.0);
        let csv = Csv::parse(&ok(&["evolve", "--dg0", dg0, "--t-max", &tmax, "--t-steps", "21"]));
        for (c, line) in csv.nums("C_0").iter().zip(csv.nums("slope_t")).skip(1) {
            assert!((c / line - 1.0).abs() < 5e-3, "dg0={dg0}: {c} vs {line}");
        }
    }
}

#[test]
fn average_single_point() {
    let csv = Csv::parse(&ok(&[
        "average",
        "--L",
        "100",
        "--periods",
        "10",
        "--sweep-min",
        "1.6",
        "--sweep-max",
        "1.6",
        "--sweep-steps",
        "1",
    ]));
    assert_eq!(csv.rows.len(), 1);
    assert_eq!(csv.rows[0][csv.col("dc_bar")], "NaN");
    assert_eq!(csv.rows[0][csv.col("valid")], "true");
}

#[test]
fn average_vanishes_at_bessel_zeros() {
    let omega = std::f64::consts::PI;
    let lo = format!("{}", omega * bessel_zero(2, 1).unwrap() / 4.0);
    let hi = format!("{}", omega * bessel_zero(2, 2).unwrap() / 4.0);
    let csv = Csv::parse(&ok(&[
        "average",
        "--L",
        "200",
        "--periods",
        "100",
        "--sweep-axis",
        "g1",
        "--sweep-min",
        &lo,
        "--sweep-max",
        &hi,
        "--sweep-steps",
        "5",
    ]));
    let c = csv.nums("c_bar");
    assert!(c[0] < 1e-8 && c[4] < 1e-8, "{c:?}");
    assert!(c[2] > 1.0);
    assert_eq!(csv.rows[0][csv.col("phase")], "ANISOTROPIC_CRITICAL");
    assert_eq!(csv.rows[2][csv.col("phase")], "FMY");
}

#[test]
fn average_is_sorted_and_worker_independent() {
    let args = |w: &'static str| {
        vec![
            "average",
            "--L",
            "200",
            "--periods",
            "20",
            "--sweep-min",
            "1.5",
            "--sweep-max",
            "1.64",
            "--sweep-steps",
            "15",
            "--workers",
            w,
        ]
    };
    let one = ok(&args("1"));
    let four = ok(&args("4"));
    assert_eq!(one, four);
    assert_eq!(one, ok(&args("1")));
    let x = Csv::parse(&one).nums("value");
    assert!(x.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn phase_diagram_cell_between_zeros_is_fmy() {
    let z1 = bessel_zero(2, 1).unwrap();
    let z2 = bessel_zero(2, 2).unwrap();
    let g1 = format!("{}", (z1 + z2) / 8.0);
    let csv = Csv::parse(&ok(&[
        "phase-diagram",
        "--g0-min",
        "0.5",
        "--g0-max",
        "0.5",
        "--g0-steps",
        "1",
        "--g1-min",
        &g1,
        "--g1-max",
        &g1,
        "--g1-steps",
        "1",
    ]));
    assert_eq!(csv.rows.len(), 1);
    assert_eq!(csv.rows[0][csv.col("phase")], "FMY");
    assert!(csv.nums("gamma")[0] < 0.0);
}

#[test]
fn phase_diagram_has_pm_stripes_and_alternating_gamma() {
    let csv = Csv::parse(&ok(&["phase-diagram", "--g0-steps", "61", "--g1-steps", "201"]));
    let (g0s, g1s, gamma) = (csv.nums("g0"), csv.nums("g1"), csv.nums("gamma"));
    let phase = csv.col("phase");
    for (i, row) in csv.rows.iter().enumerate() {
        let dg0 = g0s[i] - 0.5;
        if dg0.abs() > 0.0101 {
            assert_eq!(row[phase], "PM");
        } else if dg0.abs() < 0.0099 && g1s[i] > 0.0 {
            assert!(row[phase] == "FMZ" || row[phase] == "FMY" || row[phase] == "ANISOTROPIC_CRITICAL");
        }
    }
    // γ changes sign across each detected horizontal line
    let lines: Vec<f64> = csv.meta("critical_g1").split(';').map(|s| s.parse().unwrap()).collect();
    assert_eq!(lines.len(), 4);
    let at = |g1: f64| {
        let i = g1s.iter().position(|&x| (x - g1).abs() < 1e-9).unwrap();
        gamma[i]
    };
    let step = 4.0 / 200.0;
    for &l in &lines {
        let below = at((l / step).floor() * step);
        let above = at((l / step).ceil() * step);
        assert!(below * above < 0.0, "line {l}");
    }
}

#[test]
fn oracle_first_row_is_zero_and_ladder_decreases() {
    let csv = Csv::parse(&ok(&["oracle", "--omega-over-j", "50,200", "--t-steps", "51"]));
    let first = &csv.rows[0];
    for c in ["c_analytic", "c_ode", "diff"] {
        assert_eq!(first[csv.col(c)].parse::<f64>().unwrap(), 0.0);
    }
    let dev = |i: usize| -> f64 {
        let s = csv.meta(&format!("summary.{i}"));
        let v = s.split(' ').find_map(|kv| kv.strip_prefix("max_dev=")).unwrap();
        v.parse().unwrap()
    };
    assert!(dev(1) < dev(0));
}

#[test]
fn oracle_undriven_agrees_with_rabi() {
    // ℓ = 0 without drive: γ = 1 and the effective Hamiltonian is exact
    let csv = Csv::parse(&ok(&["oracle", "--ell", "0", "--g1", "0", "--t-steps", "41"]));
    assert!(csv.nums("c_analytic").iter().any(|&c| c > 0.1));
    for d in csv.nums("diff") {
        assert!(d < 1e-8, "{d}");
    }
}

#[test]
fn oracle_limits_chain_length() {
    let out = scan(&["oracle", "--L", "64"]);
    assert_eq!(out.status.code(), Some(1));
    let out = scan(&["oracle", "--L", "64", "--allow-large", "--t-steps", "3", "--t-max", "1"]);
    assert!(out.status.success());
}

#[test]
fn selftest_exit_codes() {
    let out = scan(&["selftest"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[PASS] symmetry: 500/500 passed"));
    let out = scan(&["selftest", "--inject-fault", "gamma-sign"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("[FAIL] symmetry"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(scan(&["evolve", "--no-such-flag"]).status.code(), Some(1));
    assert_eq!(scan(&["evolve", "--L", "7"]).status.code(), Some(1));
    assert_eq!(
        scan(&["average", "--sweep-min", "2", "--sweep-max", "1"]).status.code(),
        Some(1)
    );
    assert_eq!(scan(&["evolve", "--workers", "0"]).status.code(), Some(1));
    assert_eq!(scan(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(scan(&["--help"]).status.code(), Some(0));
}

#[test]
fn unwritable_output_exits_one() {
    let out = scan(&[
        "evolve",
        "--L",
        "10",
        "--t-steps",
        "3",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"L": 40, "J": 0.02, "t_steps": 5, "dg0": [0.0]}"#).unwrap();
    let out = dir.path().join("out.csv");
    let path = |p: &Path| p.to_str().unwrap().to_string();
    ok(&["evolve", "--config", &path(&cfg), "--L", "60", "--out", &path(&out)]);
    let csv = Csv::parse(&fs::read_to_string(&out).unwrap());
    assert_eq!(csv.meta("L"), "60");
    assert_eq!(csv.meta("J").parse::<f64>().unwrap(), 0.02);
    assert_eq!(csv.rows.len(), 5);

    fs::write(&cfg, r#"{"L": 40, "bogus": 1}"#).unwrap();
    assert_eq!(scan(&["evolve", "--config", &path(&cfg)]).status.code(), Some(1));
}
