use std::path::PathBuf;
use std::process::{Command as Proc, Output};

use ellcf_cli::{parse_spec, run_compare, run_eval, run_sample, CliError, Command, Grid, RouteKind, RunConfig};

fn spec_file(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn ellcf(args: &[&str]) -> Output {
    Proc::new(env!("CARGO_BIN_EXE_ellcf")).args(args).output().unwrap()
}

/// Data rows of a CSV, split into fields.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn config(command: Command, path: &PathBuf, grid: &str, routes: &[RouteKind]) -> RunConfig {
    let mut cfg = RunConfig::new(command, path);
    cfg.grid = Some(Grid::parse(grid).unwrap());
    cfg.routes = routes.to_vec();
    cfg
}

const NORMAL: &str = r#"{"schema": 1, "kind": "elliptical", "n": 2, "generator": {"family": "normal"}}"#;

#[test]
fn grid_forms() {
    let axis = Grid::parse("axis:2:0:1:3").unwrap();
    let pts = axis.points(2).unwrap();
    assert_eq!(pts.len(), 3);
    assert_eq!(pts[1].as_slice(), &[0.0, 0.5]);
    assert!(axis.points(1).is_err());

    let ray = Grid::parse("ray:3,4:0:10:2").unwrap().points(2).unwrap();
    assert_eq!(ray[1].as_slice(), &[6.0, 8.0]);

    let list = Grid::parse("list:1,0;2,-1").unwrap().points(2).unwrap();
    assert_eq!(list[1].as_slice(), &[2.0, -1.0]);
    assert!(Grid::parse("list:1,0;2").unwrap().points(2).is_err());

    for bad in [
        "axis:0:0:1:3",
        "axis:1:0:1:0",
        "ray:0,0:0:1:2",
        "box:1",
        "list:",
        "axis:1:a:1:2",
        "axis:1:0:inf:2",
    ] {
        assert!(matches!(Grid::parse(bad), Err(CliError::Spec(_))), "{bad}");
    }
}

#[test]
fn route_lists() {
    assert_eq!(
        RouteKind::parse_list("mc,closed,mc").unwrap(),
        vec![RouteKind::Closed, RouteKind::Mc]
    );
    assert!(RouteKind::parse_list("closed,exact").is_err());
    assert!(RouteKind::parse_list("").is_err());
}

#[test]
fn eval_normal_at_origin_is_one() {
    let path = spec_file("normal.json", NORMAL);
    let out = run_eval(&config(Command::Eval, &path, "list:0,0", &[RouteKind::Closed])).unwrap();
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][2..4], ["1".to_string(), "0".to_string()]);
    assert!(out.contains("sha256="));
}

#[test]
fn eval_cauchy() {
    let path = spec_file(
        "cauchy.json",
        r#"{"schema": 1, "kind": "elliptical", "n": 2, "generator": {"family": "cauchy"}}"#,
    );
    let out = run_eval(&config(
        Command::Eval,
        &path,
        "list:2,0",
        &[RouteKind::Closed, RouteKind::Hankel],
    ))
    .unwrap();
    let r = rows(&out);
    let want = (-2.0f64).exp();
    for row in &r {
        let re: f64 = row[2].parse().unwrap();
        assert!((re - want).abs() <= 1e-6, "{row:?}");
    }
    assert_eq!(r[0][5], "closed");
    assert_eq!(r[1][5], "hankel");
}

#[test]
fn eval_rows_follow_grid_order() {
    let path = spec_file("normal_order.json", NORMAL);
    let out = run_eval(&config(Command::Eval, &path, "axis:1:0:3:31", &[RouteKind::Closed])).unwrap();
    for (i, row) in rows(&out).iter().enumerate() {
        let t: f64 = row[0].parse().unwrap();
        assert!((t - 0.1 * i as f64).abs() < 1e-12);
        let re: f64 = row[2].parse().unwrap();
        assert!((re - (-0.5 * t * t).exp()).abs() < 1e-15);
    }
}

#[test]
fn malformed_spec_names_the_field() {
    let path = spec_file(
        "asym.json",
        "{\n  \"schema\": 1,\n  \"kind\": \"elliptical\",\n  \"n\": 2,\n  \"sigma\": [1.0, 0.5, 0.2, 1.0],\n  \"generator\": {\"family\": \"normal\"}\n}\n",
    );
    let err = run_eval(&config(Command::Eval, &path, "list:0,0", &[RouteKind::Closed])).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let msg = err.to_string();
    assert!(msg.contains("asym.json:5") && msg.contains("sigma"), "{msg}");
}

#[test]
fn spec_validation() {
    let cases = [
        (
            r#"{"schema": 1, "kind": "elliptical", "n": 2, "generator": {"family": "normal"}, "sigmaa": [1]}"#,
            "sigmaa",
        ),
        (
            r#"{"schema": 2, "kind": "elliptical", "n": 1, "generator": {"family": "normal"}}"#,
            "schema",
        ),
        (
            r#"{"schema": 1, "kind": "elliptical", "n": 2, "mu": [0], "generator": {"family": "normal"}}"#,
            "mu",
        ),
        (
            r#"{"schema": 1, "kind": "elliptical", "n": 2, "generator": {"family": "pearson_ii", "params": {"m": -2}}}"#,
            "params",
        ),
        (
            r#"{"schema": 1, "kind": "elliptical", "n": 1, "generator": {"family": "normal"}, "alpha": [1]}"#,
            "alpha",
        ),
        (r#"{"schema": 1, "kind": "skew_normal", "n": 1}"#, "alpha"),
        (
            r#"{"schema": 1, "kind": "smu", "n": 2, "generator": {"family": "uniform_ball"}}"#,
            "generator",
        ),
        (
            r#"{"schema": 1, "kind": "gse_skew_normal", "n": 1, "generator": {"family": "cauchy"}, "alpha": [2]}"#,
            "generator",
        ),
        (
            r#"{"schema": 1, "kind": "lsm", "n": 1, "generator": {"family": "normal"}, "gamma": [0], "mixing": {"kind": "discrete", "points": [1, 2], "weights": [0.5, 0.6]}}"#,
            "mixing",
        ),
    ];
    for (src, field) in cases {
        match parse_spec(src, "x.json") {
            Err(CliError::Spec(msg)) => assert!(msg.contains(field), "{src}: {msg}"),
            other => panic!("{src}: {other:?}"),
        }
    }
    for ok in [
        r#"{"schema": 1, "kind": "lsm", "n": 2, "generator": {"family": "normal"}, "gamma": [0.5, 0], "mixing": {"kind": "inverse_gamma", "shape": 2, "scale": 2}}"#,
        r#"{"schema": 1, "kind": "smsn", "n": 1, "alpha": [3], "mixing": {"kind": "discrete", "points": [0.5, 2], "weights": [0.5, 0.5], "weight": "reciprocal"}}"#,
        r#"{"schema": 1, "kind": "gse_skew_normal", "n": 2, "generator": {"family": "normal"}, "alpha": [1, -1], "parametrization": "full_sigma"}"#,
        r#"{"schema": 1, "kind": "smu", "n": 3, "generator": {"family": "kotz", "params": {"big_n": 1, "r": 1, "s": 0.5}}}"#,
    ] {
        parse_spec(ok, "ok.json").unwrap_or_else(|e| panic!("{ok}: {e}"));
    }
}

#[test]
fn compare_closed_and_hankel_normal() {
    let path = spec_file("normal_cmp.json", NORMAL);
    let out = run_compare(&config(
        Command::Compare,
        &path,
        "ray:1,1:0:8:33",
        &[RouteKind::Closed, RouteKind::Hankel],
    ))
    .unwrap();
    assert!(out.contains("# exceedances: 0"));
    for row in rows(&out) {
        let dev: f64 = row[6].parse().unwrap();
        assert!(dev <= 1e-6);
        assert_eq!(row[7], "true");
    }
}

#[test]
fn compare_pearson_ii_against_monte_carlo() {
    let path = spec_file(
        "pii.json",
        r#"{"schema": 1, "kind": "elliptical", "n": 2, "sigma": [1.0, 0.3, 0.3, 2.0], "generator": {"family": "pearson_ii", "params": {"m": 1}}}"#,
    );
    let mut cfg = config(
        Command::Compare,
        &path,
        "axis:1:0.2:3:5",
        &[RouteKind::Closed, RouteKind::Mc],
    );
    cfg.mc_count = 1_000_000;
    cfg.seed = 11;
    let out = run_compare(&cfg).unwrap();
    assert!(out.contains("tol=4e-3") || out.contains("tol=0.004"), "{out}");
}

#[test]
fn compare_every_kind_across_routes() {
    let specs = [
        r#"{"schema": 1, "kind": "lsm", "n": 2, "generator": {"family": "normal"}, "gamma": [0.5, 0], "mixing": {"kind": "discrete", "points": [1, 4], "weights": [0.5, 0.5]}}"#,
        r#"{"schema": 1, "kind": "skew_normal", "n": 2, "mu": [0.1, 0.2], "alpha": [3, -1]}"#,
        r#"{"schema": 1, "kind": "gse_skew_normal", "n": 2, "generator": {"family": "normal"}, "alpha": [1, 2]}"#,
        r#"{"schema": 1, "kind": "smu", "n": 2, "generator": {"family": "kotz", "params": {"big_n": 1, "r": 1, "s": 0.5}}}"#,
    ];
    for (i, src) in specs.iter().enumerate() {
        let path = spec_file(&format!("kind{i}.json"), src);
        let mut cfg = config(
            Command::Compare,
            &path,
            "ray:1,-0.5:0:3:7",
            &[RouteKind::Closed, RouteKind::Hankel, RouteKind::Mc],
        );
        cfg.mc_count = 50_000;
        run_compare(&cfg).unwrap_or_else(|e| panic!("{src}: {e}"));
    }
    let path = spec_file(
        "smsn.json",
        r#"{"schema": 1, "kind": "smsn", "n": 1, "alpha": [3], "mixing": {"kind": "inverse_gamma", "shape": 2, "scale": 2}}"#,
    );
    let mut cfg = config(
        Command::Compare,
        &path,
        "axis:1:-2:2:9",
        &[RouteKind::Closed, RouteKind::Mc],
    );
    cfg.mc_count = 50_000;
    run_compare(&cfg).unwrap();
    cfg.routes = vec![RouteKind::Closed, RouteKind::Hankel];
    assert_eq!(run_compare(&cfg).unwrap_err().exit_code(), 2);
}

#[test]
fn compare_flags_corrupted_closed_form() {
    let path = spec_file("normal_bad.json", NORMAL);
    let mut cfg = config(
        Command::Compare,
        &path,
        "axis:1:0:2:5",
        &[RouteKind::Closed, RouteKind::Hankel],
    );
    cfg.closed_perturbation = 1e-3;
    match run_compare(&cfg) {
        Err(CliError::Tolerance { output, .. }) => assert!(output.contains(",false")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn compare_needs_two_routes() {
    let path = spec_file("normal_one.json", NORMAL);
    let err = run_compare(&config(Command::Compare, &path, "axis:1:0:2:5", &[RouteKind::Closed])).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn sample_is_reproducible() {
    let path = spec_file("normal_sample.json", NORMAL);
    let mut cfg = RunConfig::new(Command::Sample, &path);
    cfg.mc_count = 5000;
    cfg.seed = 3;
    let a = run_sample(&cfg).unwrap();
    assert_eq!(a, run_sample(&cfg).unwrap());
    assert!(a.contains("# seed: 3"));
    assert_eq!(rows(&a).len(), 5000);
    cfg.seed = 4;
    assert_ne!(a, run_sample(&cfg).unwrap());
}

#[test]
fn sample_skew_normal_is_right_skewed() {
    let path = spec_file(
        "sn5.json",
        r#"{"schema": 1, "kind": "skew_normal", "n": 1, "alpha": [5]}"#,
    );
    let mut cfg = RunConfig::new(Command::Sample, &path);
    cfg.mc_count = 100_000;
    let xs: Vec<f64> = rows(&run_sample(&cfg).unwrap())
        .iter()
        .map(|r| r[0].parse().unwrap())
        .collect();
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / m;
    let skew = xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / m / var.powf(1.5);
    // population skewness ≈ 0.85 for α = 5; SE ≈ √(6/m)
    assert!(skew > 5.0 * (6.0 / m).sqrt(), "{skew}");
}

#[test]
fn sample_ball_stays_inside() {
    let path = spec_file(
        "ball.json",
        r#"{"schema": 1, "kind": "elliptical", "n": 3, "generator": {"family": "uniform_ball"}}"#,
    );
    let mut cfg = RunConfig::new(Command::Sample, &path);
    cfg.mc_count = 20_000;
    for row in rows(&run_sample(&cfg).unwrap()) {
        let norm: f64 = row
            .iter()
            .map(|x| x.parse::<f64>().unwrap().powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(norm <= 1.0);
    }
}

#[test]
fn sample_rejects_rank_deficient_sigma() {
    let path = spec_file(
        "rank1.json",
        r#"{"schema": 1, "kind": "elliptical", "n": 2, "sigma": [1, 1, 1, 1], "generator": {"family": "normal"}}"#,
    );
    let mut cfg = RunConfig::new(Command::Sample, &path);
    cfg.mc_count = 100;
    let err = run_sample(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("sigma"));
}

#[test]
fn csv_round_trips() {
    let path = spec_file(
        "sn_rt.json",
        r#"{"schema": 1, "kind": "skew_normal", "n": 2, "alpha": [1, 2]}"#,
    );
    let out = run_eval(&config(Command::Eval, &path, "ray:1,2:0:1e-6:3", &[RouteKind::Closed])).unwrap();
    let header = out.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "t1,t2,re,im,abs_err,method");
    for row in rows(&out) {
        assert_eq!(row.len(), 6);
        for field in &row[..4] {
            let x: f64 = field.parse().unwrap();
            assert_eq!(&ellcf::sampling::fmt_value(x), field);
        }
    }
}

#[test]
fn binary_exit_codes() {
    let normal = spec_file("bin_normal.json", NORMAL);
    let normal = normal.to_str().unwrap();
    let ok = ellcf(&["eval", "--spec", normal, "--grid", "list:0,0;1,0"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert_eq!(rows(&text)[0][2], "1");

    let cmp = ellcf(&[
        "compare",
        "--spec",
        normal,
        "--grid",
        "axis:1:0:4:9",
        "--routes",
        "closed,hankel",
    ]);
    assert_eq!(cmp.status.code(), Some(0));

    let bad = ellcf(&[
        "compare",
        "--spec",
        normal,
        "--grid",
        "axis:1:0:4:9",
        "--routes",
        "closed,hankel",
        "--perturb-closed",
        "0.01",
    ]);
    assert_eq!(bad.status.code(), Some(4));
    assert!(String::from_utf8(bad.stdout).unwrap().contains("# exceedances:"));

    let missing = ellcf(&["eval", "--spec", "/nonexistent.json", "--grid", "list:0"]);
    assert_eq!(missing.status.code(), Some(2));

    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR"))
        .join("cli")
        .join("sample.csv");
    let sample = ellcf(&[
        "sample",
        "--spec",
        normal,
        "--mc-count",
        "10",
        "--seed",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(sample.status.code(), Some(0));
    assert_eq!(rows(&std::fs::read_to_string(&out).unwrap()).len(), 10);

    let unwritable = ellcf(&[
        "sample",
        "--spec",
        normal,
        "--mc-count",
        "10",
        "--out",
        "/nonexistent/dir/x.csv",
    ]);
    assert_eq!(unwritable.status.code(), Some(1));
}
