//! JSON distribution specs.

use std::sync::Arc;

use ellcf::elliptical::{CharacteristicGenerator, DensityGenerator, EllipticalSpec, Family, ModelError, Route};
use ellcf::skewmix::{GseSpec, LSMixtureSpec, MixingKind, MixingLaw, Parametrization, SkewNormalSpec, WeightFn};
use nalgebra::{DMatrix, DVector};
use serde::Deserialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Elliptical,
    Lsm,
    GseSkewNormal,
    SkewNormal,
    Smsn,
    Smu,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Elliptical => "elliptical",
            Kind::Lsm => "lsm",
            Kind::GseSkewNormal => "gse_skew_normal",
            Kind::SkewNormal => "skew_normal",
            Kind::Smsn => "smsn",
            Kind::Smu => "smu",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TParams {
    pub s: f64,
    pub m: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MParams {
    pub m: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct P7Params {
    pub big_n: f64,
    pub s: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KotzParams {
    pub big_n: f64,
    pub r: f64,
    pub s: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BesselParams {
    pub a: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorJson {
    Normal,
    UniformBall,
    Cauchy,
    GeneralizedT(TParams),
    PearsonIi(MParams),
    PearsonVii(P7Params),
    Kotz(KotzParams),
    Bessel(BesselParams),
}

impl GeneratorJson {
    pub fn family(&self) -> Family {
        match self {
            GeneratorJson::Normal => Family::Normal,
            GeneratorJson::UniformBall => Family::UniformBall,
            GeneratorJson::Cauchy => Family::cauchy(),
            GeneratorJson::GeneralizedT(p) => Family::GeneralizedT { s: p.s, m: p.m },
            GeneratorJson::PearsonIi(p) => Family::PearsonII { m: p.m },
            GeneratorJson::PearsonVii(p) => Family::PearsonVII { big_n: p.big_n, s: p.s },
            GeneratorJson::Kotz(p) => Family::Kotz {
                big_n: p.big_n,
                r: p.r,
                s: p.s,
            },
            GeneratorJson::Bessel(p) => Family::Bessel { a: p.a, beta: p.beta },
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightJson {
    #[default]
    Identity,
    Reciprocal,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MixingJson {
    Degenerate {
        value: f64,
        #[serde(default)]
        weight: WeightJson,
    },
    Discrete {
        points: Vec<f64>,
        weights: Vec<f64>,
        #[serde(default)]
        weight: WeightJson,
    },
    InverseGamma {
        shape: f64,
        scale: f64,
        #[serde(default)]
        weight: WeightJson,
    },
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamJson {
    #[default]
    HalfRoot,
    FullSigma,
}

/// The file format. `sigma` is row-major; `mu` defaults to 0 and `sigma`
/// to the identity.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub schema: u32,
    pub kind: Kind,
    pub n: usize,
    pub mu: Option<Vec<f64>>,
    pub sigma: Option<Vec<f64>>,
    pub generator: Option<GeneratorJson>,
    pub gamma: Option<Vec<f64>>,
    pub mixing: Option<MixingJson>,
    pub alpha: Option<Vec<f64>>,
    pub parametrization: Option<ParamJson>,
}

/// A validated distribution, ready to evaluate.
#[derive(Debug, Clone)]
pub enum Model {
    Elliptical(EllipticalSpec),
    Lsm(LSMixtureSpec),
    SkewNormal(SkewNormalSpec),
    GseSkewNormal {
        gse: GseSpec,
        /// Present when ψ is normal, so the law is a skew-normal and samplable.
        skew_normal: Option<SkewNormalSpec>,
    },
    Smsn(SkewNormalSpec, MixingLaw),
    Smu(EllipticalSpec),
}

impl Model {
    pub fn dim(&self) -> usize {
        match self {
            Model::Elliptical(s) | Model::Smu(s) => s.dim(),
            Model::Lsm(s) => s.dim(),
            Model::SkewNormal(s) | Model::Smsn(s, _) => s.dim(),
            Model::GseSkewNormal { gse, .. } => gse.dim(),
        }
    }
}

/// A parsed spec together with its source text.
#[derive(Debug, Clone)]
pub struct LoadedSpec {
    pub file: SpecFile,
    pub model: Model,
    pub source: String,
    pub label: String,
}

impl LoadedSpec {
    /// 1-based line of the first occurrence of `"field"` in the source.
    fn line_of(&self, field: &str) -> Option<usize> {
        line_of(&self.source, field)
    }
}

fn line_of(source: &str, field: &str) -> Option<usize> {
    let key = format!("\"{field}\"");
    source.lines().position(|l| l.contains(&key)).map(|i| i + 1)
}

fn spec_error(label: &str, source: &str, field: &str, detail: impl std::fmt::Display) -> CliError {
    let at = match line_of(source, field) {
        Some(line) => format!("{label}:{line}"),
        None => label.to_string(),
    };
    CliError::Spec(format!("{at}: field `{field}`: {detail}"))
}

/// The spec field a model error points at.
fn field_of(e: &ModelError, fallback: &'static str) -> &'static str {
    match e {
        ModelError::InvalidParameter { field, .. } => match field.split('.').next() {
            Some("mixing") => "mixing",
            Some("alpha") => "alpha",
            Some("mu") => "mu",
            Some("sigma") => "sigma",
            Some("gamma") => "gamma",
            Some("kernel") => "generator",
            _ => "params",
        },
        ModelError::NotSymmetric(_) | ModelError::NotPsd(_) | ModelError::RankDeficient { .. } => "sigma",
        ModelError::NotStarUnimodal(_) => "generator",
        _ => fallback,
    }
}

pub fn parse_spec(source: &str, label: &str) -> Result<LoadedSpec, CliError> {
    let file: SpecFile = serde_json::from_str(source)
        .map_err(|e| CliError::Spec(format!("{label}:{}:{}: {e}", e.line(), e.column())))?;
    let fail = |field: &str, detail: &dyn std::fmt::Display| spec_error(label, source, field, detail);
    if file.schema != SCHEMA_VERSION {
        return Err(fail(
            "schema",
            &format!("unsupported version {} (expected {SCHEMA_VERSION})", file.schema),
        ));
    }
    let n = file.n;
    if n == 0 {
        return Err(fail("n", &"must be >= 1"));
    }
    let mu = match &file.mu {
        Some(v) if v.len() != n => return Err(fail("mu", &format!("has length {}, expected {n}", v.len()))),
        Some(v) => DVector::from_vec(v.clone()),
        None => DVector::zeros(n),
    };
    let sigma = match &file.sigma {
        Some(v) if v.len() != n * n => {
            return Err(fail(
                "sigma",
                &format!("has {} entries, expected {} (row-major n x n)", v.len(), n * n),
            ))
        }
        Some(v) => DMatrix::from_row_slice(n, n, v),
        None => DMatrix::identity(n, n),
    };
    // kind-specific blocks must not appear where they mean nothing
    let allowed: &[&str] = match file.kind {
        Kind::Elliptical | Kind::Smu => &["generator"],
        Kind::Lsm => &["generator", "gamma", "mixing"],
        Kind::GseSkewNormal => &["generator", "alpha", "parametrization"],
        Kind::SkewNormal => &["alpha", "parametrization"],
        Kind::Smsn => &["alpha", "parametrization", "mixing"],
    };
    let present = [
        ("generator", file.generator.is_some()),
        ("gamma", file.gamma.is_some()),
        ("mixing", file.mixing.is_some()),
        ("alpha", file.alpha.is_some()),
        ("parametrization", file.parametrization.is_some()),
    ];
    for (name, is_set) in present {
        if is_set && !allowed.contains(&name) {
            return Err(fail(name, &format!("not allowed for kind {:?}", file.kind)));
        }
    }
    let model_err = |e: ModelError, fallback: &'static str| fail(field_of(&e, fallback), &e);
    let generator = || -> Result<DensityGenerator, CliError> {
        let g = file.generator.as_ref().ok_or_else(|| fail("generator", &"missing"))?;
        DensityGenerator::new(g.family(), n).map_err(|e| model_err(e, "generator"))
    };
    let vector = |field: &'static str, v: &Option<Vec<f64>>| -> Result<DVector<f64>, CliError> {
        match v {
            None => Err(fail(field, &"missing")),
            Some(v) if v.len() != n => Err(fail(field, &format!("has length {}, expected {n}", v.len()))),
            Some(v) => Ok(DVector::from_vec(v.clone())),
        }
    };
    let mixing = || -> Result<MixingLaw, CliError> {
        let m = file.mixing.as_ref().ok_or_else(|| fail("mixing", &"missing"))?;
        let weight = |w: &WeightJson| match w {
            WeightJson::Identity => WeightFn::Identity,
            WeightJson::Reciprocal => WeightFn::Reciprocal,
        };
        let (kind, w) = match m {
            MixingJson::Degenerate { value, weight: w } => (MixingKind::Degenerate(*value), weight(w)),
            MixingJson::Discrete {
                points,
                weights,
                weight: w,
            } => (
                MixingKind::FiniteDiscrete {
                    points: points.clone(),
                    weights: weights.clone(),
                },
                weight(w),
            ),
            MixingJson::InverseGamma {
                shape,
                scale,
                weight: w,
            } => (
                MixingKind::InverseGamma {
                    shape: *shape,
                    scale: *scale,
                },
                weight(w),
            ),
        };
        MixingLaw::new(kind, w).map_err(|e| fail("mixing", &e))
    };
    let parametrization = match file.parametrization.unwrap_or_default() {
        ParamJson::HalfRoot => Parametrization::HalfRoot,
        ParamJson::FullSigma => Parametrization::FullSigma,
    };
    let model = match file.kind {
        Kind::Elliptical => {
            Model::Elliptical(EllipticalSpec::new(mu, sigma, generator()?).map_err(|e| model_err(e, "sigma"))?)
        }
        Kind::Smu => {
            let g = generator()?;
            ellcf::skewmix::check_star_unimodal(&g).map_err(|e| model_err(e, "generator"))?;
            Model::Smu(EllipticalSpec::new(mu, sigma, g).map_err(|e| model_err(e, "sigma"))?)
        }
        Kind::Lsm => {
            let psi = CharacteristicGenerator::new(generator()?, Route::Auto);
            let gamma = vector("gamma", &file.gamma)?;
            Model::Lsm(LSMixtureSpec::new(psi, mu, gamma, sigma, mixing()?).map_err(|e| model_err(e, "sigma"))?)
        }
        Kind::SkewNormal => {
            let alpha = vector("alpha", &file.alpha)?;
            Model::SkewNormal(
                SkewNormalSpec::new(mu, sigma, alpha, parametrization).map_err(|e| model_err(e, "alpha"))?,
            )
        }
        Kind::Smsn => {
            let alpha = vector("alpha", &file.alpha)?;
            let sn = SkewNormalSpec::new(mu, sigma, alpha, parametrization).map_err(|e| model_err(e, "alpha"))?;
            Model::Smsn(sn, mixing()?)
        }
        Kind::GseSkewNormal => {
            let g = generator()?;
            let alpha = vector("alpha", &file.alpha)?;
            let sn = SkewNormalSpec::new(mu.clone(), sigma.clone(), alpha, parametrization)
                .map_err(|e| model_err(e, "alpha"))?;
            let normal = g.family() == Family::Normal;
            let psi = CharacteristicGenerator::new(g, Route::Auto);
            let gse = GseSpec::new(mu, sigma, psi, Arc::new(sn.kernel())).map_err(|e| model_err(e, "generator"))?;
            Model::GseSkewNormal {
                gse,
                skew_normal: normal.then_some(sn),
            }
        }
    };
    Ok(LoadedSpec {
        file,
        model,
        source: source.to_string(),
        label: label.to_string(),
    })
}

impl LoadedSpec {
    pub fn error_at(&self, field: &str, detail: impl std::fmt::Display) -> CliError {
        let at = match self.line_of(field) {
            Some(line) => format!("{}:{line}", self.label),
            None => self.label.clone(),
        };
        CliError::Spec(format!("{at}: field `{field}`: {detail}"))
    }
}
