//! Batch front-end: evaluate, compare and sample distribution specs over
//! grids of t-vectors, writing CSV.
//!
//! Exit codes: 0 success, 2 spec or configuration error, 3 numeric failure,
//! 4 tolerance exceedance. I/O failures on the output file exit 1.

pub mod grid;
pub mod spec;

use std::fmt::Write as _;
use std::path::PathBuf;

use ellcf::elliptical::{cf, has_closed_form, ComplexCF, EllipticalSpec, ModelError, Route};
use ellcf::sampling::{
    empirical_cf, fmt_value as fmt_f64, sample_elliptical, sample_lsm, sample_skew_normal, sample_smsn, RngStream,
    SampleBatch,
};
use ellcf::skewmix::{cf_gse, cf_lsm, cf_skew_normal, cf_smsn, cf_smu, GseSpec, LSMixtureSpec};
use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use grid::Grid;
pub use spec::{parse_spec, LoadedSpec, Model};

/// Default tolerance between two deterministic routes.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Smallest Monte Carlo sample accepted when the mc route is requested.
pub const MIN_MC_COUNT: usize = 1000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Spec(String),
    #[error("numeric failure at t = {point}: {detail}")]
    Numeric { point: String, detail: String },
    #[error("{detail}")]
    Tolerance { output: String, detail: String },
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => 2,
            CliError::Numeric { .. } => 3,
            CliError::Tolerance { .. } => 4,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Eval,
    Compare,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RouteKind {
    Closed,
    Hankel,
    Mc,
}

impl RouteKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RouteKind::Closed => "closed",
            RouteKind::Hankel => "hankel",
            RouteKind::Mc => "mc",
        }
    }

    /// Parses `closed,hankel,mc` into a sorted, deduplicated list.
    pub fn parse_list(s: &str) -> Result<Vec<RouteKind>, CliError> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            out.push(match part {
                "closed" => RouteKind::Closed,
                "hankel" => RouteKind::Hankel,
                "mc" => RouteKind::Mc,
                other => return Err(CliError::Spec(format!("--routes: unknown route `{other}`"))),
            });
        }
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(CliError::Spec("--routes: no route given".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub spec_path: PathBuf,
    pub grid: Option<Grid>,
    pub routes: Vec<RouteKind>,
    pub mc_count: usize,
    pub seed: u64,
    pub out_path: Option<PathBuf>,
    /// Rayon threads; `None` uses the default pool.
    pub workers: Option<usize>,
    /// Tolerance between deterministic routes in `compare`.
    pub tol: Option<f64>,
    /// Added to the real part of every closed-form value. Test fixture for
    /// the exceedance path.
    pub closed_perturbation: f64,
}

impl RunConfig {
    pub fn new(command: Command, spec_path: impl Into<PathBuf>) -> Self {
        Self {
            command,
            spec_path: spec_path.into(),
            grid: None,
            routes: vec![RouteKind::Closed],
            mc_count: 100_000,
            seed: 0,
            out_path: None,
            workers: None,
            tol: None,
            closed_perturbation: 0.0,
        }
    }
}

fn load(cfg: &RunConfig) -> Result<(LoadedSpec, String), CliError> {
    let label = cfg.spec_path.display().to_string();
    let source = std::fs::read_to_string(&cfg.spec_path).map_err(|e| CliError::Spec(format!("{label}: {e}")))?;
    let hash = Sha256::digest(source.as_bytes());
    let hex = hash.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    });
    Ok((parse_spec(&source, &label)?, hex))
}

fn fmt_point(t: &DVector<f64>) -> String {
    let parts: Vec<String> = t.iter().map(|v| fmt_f64(*v)).collect();
    format!("({})", parts.join(", "))
}

/// One route, prepared for evaluation at many points.
enum Evaluator {
    Elliptical(EllipticalSpec, Route),
    Smu(EllipticalSpec),
    Lsm(LSMixtureSpec),
    SkewNormal(ellcf::skewmix::SkewNormalSpec),
    Gse(GseSpec),
    Smsn(ellcf::skewmix::SkewNormalSpec, ellcf::skewmix::MixingLaw),
    Mc(SampleBatch),
}

fn draw(model: &Model, count: usize, rng: &RngStream) -> Result<SampleBatch, ModelError> {
    match model {
        Model::Elliptical(s) | Model::Smu(s) => sample_elliptical(s, count, rng),
        Model::Lsm(s) => sample_lsm(s, count, rng),
        Model::SkewNormal(s) => sample_skew_normal(s, count, rng),
        Model::GseSkewNormal { skew_normal, .. } => match skew_normal {
            Some(s) => sample_skew_normal(s, count, rng),
            None => Err(ModelError::InvalidParameter {
                field: "generator",
                detail: "only the normal generator (skew-normal law) is samplable".into(),
            }),
        },
        Model::Smsn(s, m) => sample_smsn(s, m, count, rng),
    }
}

fn sample_model(spec: &LoadedSpec, count: usize, seed: u64) -> Result<SampleBatch, CliError> {
    draw(&spec.model, count, &RngStream::new(seed, 0)).map_err(|e| {
        spec.error_at(
            if matches!(e, ModelError::RankDeficient { .. }) {
                "sigma"
            } else {
                "kind"
            },
            &e,
        )
    })
}

fn with_route(
    psi: &ellcf::elliptical::CharacteristicGenerator,
    route: Route,
) -> ellcf::elliptical::CharacteristicGenerator {
    let mut p = psi.clone();
    p.route = route;
    p
}

fn prepare(spec: &LoadedSpec, route: RouteKind, cfg: &RunConfig) -> Result<Evaluator, CliError> {
    let unsupported = || {
        spec.error_at(
            "kind",
            format!("route `{}` is not available for this kind", route.as_str()),
        )
    };
    let need_closed = |g: &ellcf::elliptical::DensityGenerator| {
        if has_closed_form(g) {
            Ok(())
        } else {
            Err(spec.error_at(
                "generator",
                format!("{} has no closed form for these parameters", g.family().name()),
            ))
        }
    };
    if route == RouteKind::Mc {
        if cfg.mc_count < MIN_MC_COUNT {
            return Err(CliError::Spec(format!(
                "--mc-count {} is below {MIN_MC_COUNT}",
                cfg.mc_count
            )));
        }
        return Ok(Evaluator::Mc(sample_model(spec, cfg.mc_count, cfg.seed)?));
    }
    let r = if route == RouteKind::Closed {
        Route::Closed
    } else {
        Route::Hankel
    };
    Ok(match &spec.model {
        Model::Elliptical(s) => {
            if route == RouteKind::Closed {
                need_closed(s.generator())?;
            }
            Evaluator::Elliptical(s.clone(), r)
        }
        Model::Smu(s) => match route {
            RouteKind::Closed => {
                need_closed(s.generator())?;
                Evaluator::Elliptical(s.clone(), Route::Closed)
            }
            _ => Evaluator::Smu(s.clone()),
        },
        Model::Lsm(s) => {
            if route == RouteKind::Closed {
                need_closed(&s.psi.generator)?;
            }
            let mut s = s.clone();
            s.psi = with_route(&s.psi, r);
            Evaluator::Lsm(s)
        }
        Model::SkewNormal(s) => match route {
            RouteKind::Closed => Evaluator::SkewNormal(s.clone()),
            _ => {
                let mut g = s.to_gse().map_err(|e| spec.error_at("alpha", e))?;
                g.psi = with_route(&g.psi, Route::Hankel);
                Evaluator::Gse(g)
            }
        },
        Model::GseSkewNormal { gse, .. } => {
            if route == RouteKind::Closed {
                need_closed(&gse.psi.generator)?;
            }
            let mut g = gse.clone();
            g.psi = with_route(&g.psi, r);
            Evaluator::Gse(g)
        }
        Model::Smsn(s, m) => match route {
            RouteKind::Closed => Evaluator::Smsn(s.clone(), m.clone()),
            _ => return Err(unsupported()),
        },
    })
}

impl Evaluator {
    fn eval(&self, t: &DVector<f64>, perturb: f64) -> Result<ComplexCF, ModelError> {
        let mut c = match self {
            Evaluator::Elliptical(s, r) => cf(s, t, *r)?,
            Evaluator::Smu(s) => {
                // the SMU integral is radial: evaluate at ‖Σ^{1/2}t‖
                let std = &s.roots().sym * t;
                let mut c = cf_smu(s.generator(), &std)?;
                let phase = Complex64::from_polar(1.0, t.dot(s.mu()));
                let v = phase * c.value();
                c.re = v.re;
                c.im = v.im;
                c
            }
            Evaluator::Lsm(s) => cf_lsm(s, t)?,
            Evaluator::SkewNormal(s) => cf_skew_normal(s, t)?,
            Evaluator::Gse(s) => cf_gse(s, t)?,
            Evaluator::Smsn(s, m) => cf_smsn(s, m, t)?,
            Evaluator::Mc(b) => return empirical_cf(b, t),
        };
        if perturb != 0.0 && c.method == ellcf::elliptical::Method::ClosedForm {
            c.re += perturb;
        }
        Ok(c)
    }

    fn band(&self) -> Option<f64> {
        match self {
            Evaluator::Mc(b) => Some(4.0 / (b.count as f64).sqrt() + b.truncation),
            _ => None,
        }
    }
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| CliError::Spec(format!("--workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn header(out: &mut String, cfg: &RunConfig, spec: &LoadedSpec, hash: &str, command: &str) {
    let _ = writeln!(out, "# ellcf {command}");
    let _ = writeln!(out, "# spec: {} sha256={hash}", spec.label);
    let _ = writeln!(out, "# kind: {} n={}", spec.file.kind.as_str(), spec.model.dim());
    if command != "sample" {
        let routes: Vec<&str> = cfg.routes.iter().map(|r| r.as_str()).collect();
        let _ = writeln!(out, "# routes: {}", routes.join(","));
    }
    if command == "sample" || cfg.routes.contains(&RouteKind::Mc) {
        let _ = writeln!(out, "# seed: {} mc_count: {}", cfg.seed, cfg.mc_count);
    }
}

fn grid_points(cfg: &RunConfig, n: usize) -> Result<Vec<DVector<f64>>, CliError> {
    let grid = cfg
        .grid
        .as_ref()
        .ok_or_else(|| CliError::Spec("--grid is required".into()))?;
    grid.points(n)
}

/// Evaluates every route at every grid point, in grid order.
fn evaluate_all(
    evaluators: &[(RouteKind, Evaluator)],
    points: &[DVector<f64>],
    perturb: f64,
) -> Result<Vec<Vec<ComplexCF>>, CliError> {
    points
        .par_iter()
        .map(|t| {
            evaluators
                .iter()
                .map(|(r, e)| {
                    e.eval(t, perturb).map_err(|err| CliError::Numeric {
                        point: fmt_point(t),
                        detail: format!("route {}: {err}", r.as_str()),
                    })
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect()
}

fn t_header(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("t{i}")).collect()
}

pub fn run_eval(cfg: &RunConfig) -> Result<String, CliError> {
    let (spec, hash) = load(cfg)?;
    let n = spec.model.dim();
    let points = grid_points(cfg, n)?;
    with_pool(cfg.workers, || {
        let evaluators = cfg
            .routes
            .iter()
            .map(|r| Ok((*r, prepare(&spec, *r, cfg)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let values = evaluate_all(&evaluators, &points, cfg.closed_perturbation)?;
        let mut out = String::new();
        header(&mut out, cfg, &spec, &hash, "eval");
        let mut cols = t_header(n);
        cols.extend(["re", "im", "abs_err", "method"].map(String::from));
        let _ = writeln!(out, "{}", cols.join(","));
        for (t, row) in points.iter().zip(&values) {
            for c in row {
                let mut fields: Vec<String> = t.iter().map(|v| fmt_f64(*v)).collect();
                fields.push(fmt_f64(c.re));
                fields.push(fmt_f64(c.im));
                fields.push(c.abs_err.map(fmt_f64).unwrap_or_default());
                fields.push(c.method.as_str().to_string());
                let _ = writeln!(out, "{}", fields.join(","));
            }
        }
        Ok(out)
    })?
}

/// Per pair of routes: the worst deviation and the tolerance it is held to.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSummary {
    pub a: RouteKind,
    pub b: RouteKind,
    pub max_dev: f64,
    pub worst_point: String,
    pub tol: f64,
    pub exceedances: usize,
}

pub fn run_compare(cfg: &RunConfig) -> Result<String, CliError> {
    if cfg.routes.len() < 2 {
        return Err(CliError::Spec("compare needs at least two --routes".into()));
    }
    let (spec, hash) = load(cfg)?;
    let n = spec.model.dim();
    let points = grid_points(cfg, n)?;
    let det_tol = cfg.tol.unwrap_or(DEFAULT_TOL);
    if !(det_tol > 0.0) {
        return Err(CliError::Spec(format!("--tol {det_tol} must be > 0")));
    }
    let (out, summaries) = with_pool(cfg.workers, || {
        let evaluators = cfg
            .routes
            .iter()
            .map(|r| Ok((*r, prepare(&spec, *r, cfg)?)))
            .collect::<Result<Vec<_>, CliError>>()?;
        let values = evaluate_all(&evaluators, &points, cfg.closed_perturbation)?;
        let mut pairs = Vec::new();
        for i in 0..evaluators.len() {
            for j in i + 1..evaluators.len() {
                let tol = match (evaluators[i].1.band(), evaluators[j].1.band()) {
                    (None, None) => det_tol,
                    (a, b) => a.unwrap_or(0.0) + b.unwrap_or(0.0),
                };
                pairs.push((i, j, tol));
            }
        }
        let mut out = String::new();
        header(&mut out, cfg, &spec, &hash, "compare");
        let mut cols = t_header(n);
        for (r, _) in &evaluators {
            cols.push(format!("re_{}", r.as_str()));
            cols.push(format!("im_{}", r.as_str()));
        }
        for (i, j, _) in &pairs {
            cols.push(format!(
                "dev_{}_{}",
                evaluators[*i].0.as_str(),
                evaluators[*j].0.as_str()
            ));
        }
        cols.push("ok".into());
        let _ = writeln!(out, "{}", cols.join(","));
        let mut summaries: Vec<PairSummary> = pairs
            .iter()
            .map(|(i, j, tol)| PairSummary {
                a: evaluators[*i].0,
                b: evaluators[*j].0,
                max_dev: 0.0,
                worst_point: String::new(),
                tol: *tol,
                exceedances: 0,
            })
            .collect();
        for (t, row) in points.iter().zip(&values) {
            let mut fields: Vec<String> = t.iter().map(|v| fmt_f64(*v)).collect();
            for c in row {
                fields.push(fmt_f64(c.re));
                fields.push(fmt_f64(c.im));
            }
            let mut ok = true;
            for ((i, j, tol), s) in pairs.iter().zip(summaries.iter_mut()) {
                let dev = (row[*i].re - row[*j].re).abs().max((row[*i].im - row[*j].im).abs());
                fields.push(fmt_f64(dev));
                if dev > s.max_dev || s.worst_point.is_empty() {
                    s.max_dev = dev;
                    s.worst_point = fmt_point(t);
                }
                if !(dev <= *tol) {
                    s.exceedances += 1;
                    ok = false;
                }
            }
            fields.push(ok.to_string());
            let _ = writeln!(out, "{}", fields.join(","));
        }
        let _ = writeln!(out, "# summary");
        for s in &summaries {
            let _ = writeln!(
                out,
                "# {}-{}: max_dev={} at t={} tol={} exceedances={}",
                s.a.as_str(),
                s.b.as_str(),
                fmt_f64(s.max_dev),
                s.worst_point,
                fmt_f64(s.tol),
                s.exceedances
            );
        }
        let total: usize = summaries.iter().map(|s| s.exceedances).sum();
        let _ = writeln!(out, "# exceedances: {total}");
        Ok::<_, CliError>((out, summaries))
    })??;
    let bad: Vec<String> = summaries
        .iter()
        .filter(|s| s.exceedances > 0)
        .map(|s| {
            format!(
                "{}-{} exceeds tolerance {} at {} point(s), worst {} at t={}",
                s.a.as_str(),
                s.b.as_str(),
                fmt_f64(s.tol),
                s.exceedances,
                fmt_f64(s.max_dev),
                s.worst_point
            )
        })
        .collect();
    if bad.is_empty() {
        Ok(out)
    } else {
        Err(CliError::Tolerance {
            output: out,
            detail: bad.join("; "),
        })
    }
}

pub fn run_sample(cfg: &RunConfig) -> Result<String, CliError> {
    let (spec, hash) = load(cfg)?;
    if cfg.mc_count == 0 {
        return Err(CliError::Spec("--mc-count must be >= 1".into()));
    }
    with_pool(cfg.workers, || {
        let batch = sample_model(&spec, cfg.mc_count, cfg.seed)?.with_spec_hash(hash.clone());
        let mut out = String::new();
        header(&mut out, cfg, &spec, &hash, "sample");
        let mut buf = Vec::new();
        batch.write_csv(&mut buf).map_err(|e| CliError::Io(e.to_string()))?;
        out.push_str(&String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))?);
        Ok(out)
    })?
}

pub fn run(cfg: &RunConfig) -> Result<String, CliError> {
    match cfg.command {
        Command::Eval => run_eval(cfg),
        Command::Compare => run_compare(cfg),
        Command::Sample => run_sample(cfg),
    }
}

/// Runs the command, writes its output and returns the exit code.
pub fn execute(cfg: &RunConfig) -> i32 {
    let (output, err) = match run(cfg) {
        Ok(out) => (Some(out), None),
        Err(CliError::Tolerance { output, detail }) => {
            (Some(output.clone()), Some(CliError::Tolerance { output, detail }))
        }
        Err(e) => (None, Some(e)),
    };
    if let Some(text) = output {
        let written = match &cfg.out_path {
            Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
            None => {
                use std::io::Write;
                std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string())
            }
        };
        if let Err(e) = written {
            eprintln!("error: {e}");
            return 1;
        }
    }
    match err {
        None => 0,
        Some(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
