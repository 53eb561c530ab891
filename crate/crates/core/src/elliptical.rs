//! Elliptical laws: density generators, normalizing constants, radial
//! densities, Schoenberg's Ω_n and the closed-form characteristic
//! generators, assembled into CFs of the form e^{it′μ}φ(t′Σt).

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::{self, QuadError, QuadratureControl};
use crate::specfun::{bessel_j, bessel_k_scaled, gamma_fn, hyp0f1, hyp1f1, ln_gamma, SpecFunError};

/// Tolerance used for symmetry and PSD checks on Σ.
pub const MATRIX_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{field}`: {detail}")]
    InvalidParameter { field: &'static str, detail: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("dispersion matrix is not symmetric (max |Σ - Σ'| = {0:e})")]
    NotSymmetric(f64),
    #[error("dispersion matrix is not positive semi-definite (eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("dispersion matrix has rank {rank} < {n}; operation needs full rank")]
    RankDeficient { rank: usize, n: usize },
    #[error("no closed form for {0}; use the Hankel route")]
    NoClosedForm(String),
    #[error("generator is not star unimodal: {0}")]
    NotStarUnimodal(String),
    #[error(transparent)]
    Special(#[from] SpecFunError),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

pub type Result<T> = std::result::Result<T, ModelError>;

fn invalid(field: &'static str, detail: impl Into<String>) -> ModelError {
    ModelError::InvalidParameter {
        field,
        detail: detail.into(),
    }
}

/// Named generator families. `big_n` is the power parameter N of the Pearson
/// VII and Kotz families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// g(z) = e^{-z/2}
    Normal,
    /// g(z) = 1 on [0, 1]
    UniformBall,
    /// g(z) = (1 + z/s)^{-(n+m)/2}, m a positive integer. Cauchy is s = m = 1.
    GeneralizedT { s: f64, m: f64 },
    /// g(z) = (1 - z)^m on [0, 1]
    PearsonII { m: f64 },
    /// g(z) = (1 + z/s)^{-N}
    PearsonVII { big_n: f64, s: f64 },
    /// g(z) = z^{N-1} exp(-r z^s)
    Kotz { big_n: f64, r: f64, s: f64 },
    /// g(z) = (√z/β)^a K_a(√z/β)
    Bessel { a: f64, beta: f64 },
    /// User supplied g.
    Custom,
}

impl Family {
    pub fn cauchy() -> Self {
        Family::GeneralizedT { s: 1.0, m: 1.0 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Normal => "normal",
            Family::UniformBall => "uniform_ball",
            Family::GeneralizedT { .. } => "generalized_t",
            Family::PearsonII { .. } => "pearson_ii",
            Family::PearsonVII { .. } => "pearson_vii",
            Family::Kotz { .. } => "kotz",
            Family::Bessel { .. } => "bessel",
            Family::Custom => "custom",
        }
    }
}

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
struct CustomParts {
    g: ScalarFn,
    g_prime: Option<ScalarFn>,
    support_radius: f64,
}

/// A density generator bound to a dimension n.
///
/// Binding to n is needed because some families (generalized t) define g in
/// terms of n, and because the normalizing integral
/// M_n = ∫₀^∞ z^{n/2−1} g(z) dz is computed once here.
#[derive(Clone)]
pub struct DensityGenerator {
    family: Family,
    n: usize,
    custom: Option<CustomParts>,
    moment_n: f64,
}

impl fmt::Debug for DensityGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityGenerator")
            .field("family", &self.family)
            .field("n", &self.n)
            .field("moment_n", &self.moment_n)
            .finish()
    }
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("{v} must be finite and > 0")))
    }
}

impl DensityGenerator {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(ModelError::Dimension("n must be >= 1".into()));
        }
        let nf = n as f64;
        match family {
            Family::Normal | Family::UniformBall => {}
            Family::GeneralizedT { s, m } => {
                positive("s", s)?;
                if !(m >= 1.0 && m == m.round() && m.is_finite()) {
                    return Err(invalid("m", format!("{m} must be a positive integer")));
                }
            }
            Family::PearsonII { m } => {
                if !(m > -1.0 && m.is_finite()) {
                    return Err(invalid("m", format!("{m} must be > -1")));
                }
            }
            Family::PearsonVII { big_n, s } => {
                positive("s", s)?;
                if !(big_n > 0.5 * nf && big_n.is_finite()) {
                    return Err(invalid("N", format!("{big_n} must exceed n/2 = {}", 0.5 * nf)));
                }
            }
            Family::Kotz { big_n, r, s } => {
                positive("r", r)?;
                positive("s", s)?;
                if !(2.0 * big_n + nf > 2.0 && big_n.is_finite()) {
                    return Err(invalid("N", format!("2N + n = {} must exceed 2", 2.0 * big_n + nf)));
                }
            }
            Family::Bessel { a, beta } => {
                positive("beta", beta)?;
                if !(a > -0.5 * nf && a.is_finite()) {
                    return Err(invalid("a", format!("{a} must exceed -n/2 = {}", -0.5 * nf)));
                }
            }
            Family::Custom => {
                return Err(invalid("family", "use DensityGenerator::custom for user generators"));
            }
        }
        let mut g = Self {
            family,
            n,
            custom: None,
            moment_n: 1.0,
        };
        g.moment_n = g
            .moment_closed(nf)
            .expect("named families have a closed normalizing integral")?;
        Ok(g)
    }

    /// A user supplied generator. `support_radius` bounds the radial
    /// variable (use `f64::INFINITY` for unbounded support). The normalizing
    /// integral is checked numerically.
    pub fn custom(n: usize, g: ScalarFn, g_prime: Option<ScalarFn>, support_radius: f64) -> Result<Self> {
        if n == 0 {
            return Err(ModelError::Dimension("n must be >= 1".into()));
        }
        if !(support_radius > 0.0) {
            return Err(invalid("support_radius", format!("{support_radius} must be > 0")));
        }
        let mut out = Self {
            family: Family::Custom,
            n,
            custom: Some(CustomParts {
                g,
                g_prime,
                support_radius,
            }),
            moment_n: 1.0,
        };
        for i in 0..64 {
            let z = 1e-3 * 1.3f64.powi(i);
            let v = out.eval(z);
            if z > support_radius * support_radius {
                break;
            }
            if !(v >= 0.0) {
                return Err(invalid("g", format!("g({z}) = {v} is negative or not a number")));
            }
        }
        let m = quadrature::moment_integral(&out, n as f64, &QuadratureControl::default())?;
        if !(m.value > 0.0 && m.value.is_finite()) {
            return Err(invalid(
                "g",
                format!("normalizing integral {} is not positive", m.value),
            ));
        }
        out.moment_n = m.value;
        Ok(out)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Same family and parameters bound to another dimension.
    pub fn with_dim(&self, n: usize) -> Result<Self> {
        match &self.custom {
            Some(c) => Self::custom(n, c.g.clone(), c.g_prime.clone(), c.support_radius),
            None => Self::new(self.family, n),
        }
    }

    /// M_n = ∫₀^∞ z^{n/2−1} g(z) dz.
    pub fn moment_n(&self) -> f64 {
        self.moment_n
    }

    /// Radius of the support of R (∞ for unbounded laws).
    pub fn support_radius(&self) -> f64 {
        match (&self.family, &self.custom) {
            (Family::UniformBall | Family::PearsonII { .. }, _) => 1.0,
            (_, Some(c)) => c.support_radius,
            _ => f64::INFINITY,
        }
    }

    /// Rough location of the mass of z = R² (used to seed quadrature).
    pub(crate) fn scale_hint(&self) -> f64 {
        match self.family {
            Family::GeneralizedT { s, .. } | Family::PearsonVII { s, .. } => s,
            Family::Kotz { r, s, .. } => r.powf(-1.0 / s).clamp(1e-100, 1e100),
            Family::Bessel { beta, .. } => beta * beta,
            _ => 1.0,
        }
    }

    /// g(z), zero outside the support.
    pub fn eval(&self, z: f64) -> f64 {
        let nf = self.n as f64;
        if z < 0.0 {
            return 0.0;
        }
        match self.family {
            Family::Normal => (-0.5 * z).exp(),
            Family::UniformBall => {
                if z <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Family::GeneralizedT { s, m } => (1.0 + z / s).powf(-0.5 * (nf + m)),
            Family::PearsonII { m } => {
                if z < 1.0 {
                    (1.0 - z).powf(m)
                } else {
                    0.0
                }
            }
            Family::PearsonVII { big_n, s } => (1.0 + z / s).powf(-big_n),
            Family::Kotz { big_n, r, s } => {
                if z == 0.0 {
                    return if big_n > 1.0 {
                        0.0
                    } else if big_n == 1.0 {
                        1.0
                    } else {
                        f64::INFINITY
                    };
                }
                ((big_n - 1.0) * z.ln() - r * z.powf(s)).exp()
            }
            Family::Bessel { a, beta } => {
                let x = z.sqrt() / beta;
                if x == 0.0 {
                    return if a > 0.0 {
                        2f64.powf(a - 1.0) * gamma_fn(a).unwrap_or(f64::NAN)
                    } else {
                        f64::INFINITY
                    };
                }
                match bessel_k_scaled(a, x) {
                    Ok(k) => (a * x.ln() - x).exp() * k,
                    Err(_) => f64::NAN,
                }
            }
            Family::Custom => {
                let c = self.custom.as_ref().expect("custom parts present");
                if z > c.support_radius * c.support_radius {
                    0.0
                } else {
                    (c.g)(z)
                }
            }
        }
    }

    /// g(z) given also the gap R² − z to the end of the support, which
    /// keeps (1 − z)^m accurate next to z = 1.
    pub fn eval_with_gap(&self, z: f64, gap: f64) -> f64 {
        match self.family {
            Family::PearsonII { m } if gap < 0.5 => {
                if gap > 0.0 {
                    gap.powf(m)
                } else {
                    0.0
                }
            }
            _ => self.eval(z),
        }
    }

    /// g′(z) where available. For the ball and Pearson II the derivative is
    /// the one on the interior of the support.
    pub fn derivative(&self, z: f64) -> Option<f64> {
        let nf = self.n as f64;
        match self.family {
            Family::Normal => Some(-0.5 * (-0.5 * z).exp()),
            Family::UniformBall => Some(0.0),
            Family::GeneralizedT { s, m } => {
                let big_n = 0.5 * (nf + m);
                Some(-(big_n / s) * (1.0 + z / s).powf(-big_n - 1.0))
            }
            Family::PearsonVII { big_n, s } => Some(-(big_n / s) * (1.0 + z / s).powf(-big_n - 1.0)),
            Family::PearsonII { m } => Some(if m == 0.0 || z >= 1.0 {
                0.0
            } else {
                -m * (1.0 - z).powf(m - 1.0)
            }),
            Family::Kotz { big_n, r, s } => {
                if z == 0.0 {
                    return None;
                }
                Some(self.eval(z) * ((big_n - 1.0) / z - r * s * z.powf(s - 1.0)))
            }
            Family::Bessel { a, beta } => {
                if z == 0.0 {
                    return None;
                }
                let x = z.sqrt() / beta;
                let k = bessel_k_scaled(a - 1.0, x).ok()?;
                Some(-(a * x.ln() - x).exp() * k / (2.0 * beta * z.sqrt()))
            }
            Family::Custom => {
                let c = self.custom.as_ref()?;
                c.g_prime.as_ref().map(|d| d(z))
            }
        }
    }

    pub fn is_differentiable(&self) -> bool {
        match self.family {
            Family::Custom => self.custom.as_ref().is_some_and(|c| c.g_prime.is_some()),
            _ => true,
        }
    }

    /// Closed form of M_p = ∫₀^∞ z^{p/2−1} g(z) dz for named families.
    /// `None` for custom generators; an error when the integral diverges.
    pub fn moment_closed(&self, p: f64) -> Option<Result<f64>> {
        let nf = self.n as f64;
        let lg = |x: f64| ln_gamma(x).map_err(ModelError::from);
        let hp = 0.5 * p;
        let out = match self.family {
            Family::Normal => lg(hp).map(|l| (hp * LN_2 + l).exp()),
            Family::UniformBall => Ok(2.0 / p),
            Family::PearsonII { m } => (|| Ok((lg(hp)? + lg(m + 1.0)? - lg(hp + m + 1.0)?).exp()))(),
            Family::GeneralizedT { s, m } => pearson_vii_moment(0.5 * (nf + m), s, p),
            Family::PearsonVII { big_n, s } => pearson_vii_moment(big_n, s, p),
            Family::Kotz { big_n, r, s } => {
                let alpha = (2.0 * big_n + p - 2.0) / (2.0 * s);
                if alpha <= 0.0 {
                    Err(invalid("N", format!("moment of order {p} diverges at the origin")))
                } else {
                    lg(alpha).map(|l| (l - alpha * r.ln()).exp() / s)
                }
            }
            Family::Bessel { a, beta } => {
                if hp + a <= 0.0 {
                    Err(invalid("a", format!("moment of order {p} diverges at the origin")))
                } else {
                    (|| Ok(((p + a - 1.0) * LN_2 + p * beta.ln() + lg(hp)? + lg(hp + a)?).exp()))()
                }
            }
            Family::Custom => return None,
        };
        Some(out)
    }

    /// M_p, closed form when available, quadrature otherwise.
    pub fn moment(&self, p: f64, ctl: &QuadratureControl) -> Result<f64> {
        match self.moment_closed(p) {
            Some(r) => r,
            None => Ok(quadrature::moment_integral(self, p, ctl)?.value),
        }
    }

    /// c_n = Γ(n/2) π^{−n/2} / M_n.
    pub fn normalizing_constant(&self) -> f64 {
        let nf = self.n as f64;
        (ln_gamma(0.5 * nf).unwrap_or(f64::NAN) - 0.5 * nf * PI.ln()).exp() / self.moment_n
    }

    /// h_R(v) = c_n (2π^{n/2}/Γ(n/2)) v^{n−1} g(v²) = 2 v^{n−1} g(v²) / M_n.
    pub fn radial_density(&self, v: f64) -> f64 {
        if v < 0.0 || v > self.support_radius() {
            return 0.0;
        }
        let gz = self.eval(v * v);
        if gz == 0.0 {
            return 0.0;
        }
        2.0 * v.powi(self.n as i32 - 1) * gz / self.moment_n
    }
}

fn pearson_vii_moment(big_n: f64, s: f64, p: f64) -> Result<f64> {
    let hp = 0.5 * p;
    if big_n <= hp {
        return Err(invalid(
            "N",
            format!("moment of order {p} needs N > {hp}, got N = {big_n}"),
        ));
    }
    let l = hp * s.ln() + ln_gamma(hp)? + ln_gamma(big_n - hp)? - ln_gamma(big_n)?;
    Ok(l.exp())
}

/// Normalizing constant c_n of a generator at its bound dimension.
pub fn normalizing_constant(g: &DensityGenerator) -> f64 {
    g.normalizing_constant()
}

/// Schoenberg's Ω_n(s) = Γ(n/2)(2/√s)^{(n−2)/2} J_{(n−2)/2}(√s), the CF of
/// the uniform law on the unit sphere at ‖t‖² = s.
pub fn omega_n(n: usize, s: f64) -> Result<f64> {
    if n == 0 {
        return Err(ModelError::Dimension("n must be >= 1".into()));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(invalid("s", format!("{s} must be finite and >= 0")));
    }
    let half = 0.5 * n as f64;
    if s == 0.0 {
        return Ok(1.0);
    }
    let x = s.sqrt();
    if x < 1e-3 {
        return Ok(hyp0f1(half, -0.25 * s)?);
    }
    let nu = half - 1.0;
    Ok(gamma_fn(half)? * (2.0 / x).powf(nu) * bessel_j(nu, x)?)
}

/// Characteristic generator of the normal law.
pub fn phi_normal(q: f64) -> f64 {
    (-0.5 * q).exp()
}

/// Uniform ball, ₀F₁(n/2+1; −Q/4).
pub fn phi_uniform_ball(n: usize, q: f64) -> Result<f64> {
    Ok(hyp0f1(0.5 * n as f64 + 1.0, -0.25 * q)?)
}

/// Uniform ball, J form 2^{n/2}Γ(n/2+1) x^{−n/2} J_{n/2}(x), x = √Q.
pub fn phi_uniform_ball_bessel(n: usize, q: f64) -> Result<f64> {
    bessel_form(0.5 * n as f64, q)
}

fn bessel_form(nu: f64, q: f64) -> Result<f64> {
    if q == 0.0 {
        return Ok(1.0);
    }
    let x = q.sqrt();
    Ok(2f64.powf(nu) * gamma_fn(nu + 1.0)? * x.powf(-nu) * bessel_j(nu, x)?)
}

/// 2^{1−ν}/Γ(ν) x^ν K_ν(x) at x = √(sQ); the t / Pearson VII form.
fn macdonald_form(nu: f64, s: f64, q: f64) -> Result<f64> {
    if q == 0.0 {
        return Ok(1.0);
    }
    let x = (s * q).sqrt();
    let log = (1.0 - nu) * LN_2 - ln_gamma(nu)? + nu * x.ln() - x;
    Ok(log.exp() * bessel_k_scaled(nu, x)?)
}

/// Generalized t with parameters (s, m); does not depend on n.
pub fn phi_generalized_t(m: f64, s: f64, q: f64) -> Result<f64> {
    macdonald_form(0.5 * m, s, q)
}

/// Multivariate Cauchy, exp(−√Q).
pub fn phi_cauchy(q: f64) -> f64 {
    (-q.sqrt()).exp()
}

/// Pearson II, ₀F₁(n/2+m+1; −Q/4).
pub fn phi_pearson_ii(n: usize, m: f64, q: f64) -> Result<f64> {
    Ok(hyp0f1(0.5 * n as f64 + m + 1.0, -0.25 * q)?)
}

/// Pearson II, J form with order n/2 + m.
pub fn phi_pearson_ii_bessel(n: usize, m: f64, q: f64) -> Result<f64> {
    bessel_form(0.5 * n as f64 + m, q)
}

/// Pearson VII with (N, s): the t form with ν = N − n/2.
pub fn phi_pearson_vii(n: usize, big_n: f64, s: f64, q: f64) -> Result<f64> {
    macdonald_form(big_n - 0.5 * n as f64, s, q)
}

/// Kotz with s = 1: ₁F₁(n/2+N−1; n/2; −Q/(4r)).
pub fn phi_kotz_s1(n: usize, big_n: f64, r: f64, q: f64) -> Result<f64> {
    let half = 0.5 * n as f64;
    Ok(hyp1f1(half + big_n - 1.0, half, -q / (4.0 * r))?)
}

/// Kotz with s = 1/2, from
/// 2^{n−1}Γ(n/2)Γ((n+1)/2) r^{2N+n−1} / (√π Γ(2N+n−2) (r²+Q)^{(n+1)/2}).
///
/// The expression is a characteristic generator only for N = 1; other N
/// are refused.
pub fn phi_kotz_half(n: usize, big_n: f64, r: f64, q: f64) -> Result<f64> {
    if big_n != 1.0 {
        return Err(ModelError::NoClosedForm(format!("kotz with s = 1/2 and N = {big_n}")));
    }
    let nf = n as f64;
    let log = (nf - 1.0) * LN_2 + ln_gamma(0.5 * nf)? + ln_gamma(0.5 * (nf + 1.0))? + (2.0 * big_n + nf - 1.0) * r.ln()
        - 0.5 * PI.ln()
        - ln_gamma(2.0 * big_n + nf - 2.0)?
        - 0.5 * (nf + 1.0) * (r * r + q).ln();
    Ok(log.exp())
}

/// Kotz with s = 1/2, N = 1 in the plane: r³/(r²+Q)^{3/2}.
pub fn phi_kotz_half_plane(r: f64, q: f64) -> f64 {
    r.powi(3) / (r * r + q).powf(1.5)
}

/// Bessel family, (1 + β²Q)^{−(n/2+a)}.
pub fn phi_bessel_family(n: usize, a: f64, beta: f64, q: f64) -> f64 {
    (1.0 + beta * beta * q).powf(-(0.5 * n as f64 + a))
}

/// Closed-form characteristic generator φ(Q), dispatched on the family.
pub fn phi_closed(g: &DensityGenerator, q: f64) -> Result<f64> {
    if !(q >= 0.0 && q.is_finite()) {
        return Err(invalid("Q", format!("{q} must be finite and >= 0")));
    }
    let n = g.dim();
    if q == 0.0 && g.family() != Family::Custom {
        return Ok(1.0);
    }
    match g.family() {
        Family::Normal => Ok(phi_normal(q)),
        Family::UniformBall => phi_uniform_ball(n, q),
        Family::GeneralizedT { s, m } => {
            if s == 1.0 && m == 1.0 {
                Ok(phi_cauchy(q))
            } else {
                phi_generalized_t(m, s, q)
            }
        }
        Family::PearsonII { m } => phi_pearson_ii(n, m, q),
        Family::PearsonVII { big_n, s } => phi_pearson_vii(n, big_n, s, q),
        Family::Kotz { big_n, r, s } if s == 1.0 => phi_kotz_s1(n, big_n, r, q),
        Family::Kotz { big_n, r, s } if s == 0.5 && big_n == 1.0 => phi_kotz_half(n, big_n, r, q),
        Family::Kotz { big_n, s, .. } => Err(ModelError::NoClosedForm(format!("kotz with N = {big_n}, s = {s}"))),
        Family::Bessel { a, beta } => Ok(phi_bessel_family(n, a, beta, q)),
        Family::Custom => Err(ModelError::NoClosedForm("custom generator".into())),
    }
}

/// True when `phi_closed` has a formula for this generator.
pub fn has_closed_form(g: &DensityGenerator) -> bool {
    match g.family() {
        Family::Custom => false,
        Family::Kotz { big_n, s, .. } => s == 1.0 || (s == 0.5 && big_n == 1.0),
        _ => true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Hankel,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::Hankel => "hankel",
            Method::MonteCarlo => "mc",
        }
    }
}

/// How a characteristic generator is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Closed form when there is one, Hankel quadrature otherwise.
    #[default]
    Auto,
    Closed,
    Hankel,
}

/// A CF value with an optional error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexCF {
    pub re: f64,
    pub im: f64,
    pub abs_err: Option<f64>,
    pub method: Method,
}

impl ComplexCF {
    pub fn new(value: Complex64, abs_err: Option<f64>, method: Method) -> Self {
        Self {
            re: value.re,
            im: value.im,
            abs_err,
            method,
        }
    }

    pub fn one(method: Method) -> Self {
        Self {
            re: 1.0,
            im: 0.0,
            abs_err: Some(0.0),
            method,
        }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(&self) -> f64 {
        self.value().norm()
    }
}

/// A φ value with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiValue {
    pub value: f64,
    pub abs_err: f64,
    pub method: Method,
}

/// φ(Q) of a generator under a route.
pub fn characteristic_generator(
    g: &DensityGenerator,
    q: f64,
    route: Route,
    ctl: &QuadratureControl,
) -> Result<PhiValue> {
    let closed = match route {
        Route::Closed => true,
        Route::Hankel => false,
        Route::Auto => has_closed_form(g),
    };
    if closed {
        return Ok(PhiValue {
            value: phi_closed(g, q)?,
            abs_err: 0.0,
            method: Method::ClosedForm,
        });
    }
    if !(q >= 0.0 && q.is_finite()) {
        return Err(invalid("Q", format!("{q} must be finite and >= 0")));
    }
    let r = quadrature::phi_hankel(g, q.sqrt(), ctl)?;
    Ok(PhiValue {
        value: r.value,
        abs_err: r.err_est,
        method: Method::Hankel,
    })
}

/// A generator together with an evaluation route: the ψ of skew and mixture
/// constructions.
#[derive(Debug, Clone)]
pub struct CharacteristicGenerator {
    pub generator: DensityGenerator,
    pub route: Route,
    pub control: QuadratureControl,
}

impl CharacteristicGenerator {
    pub fn new(generator: DensityGenerator, route: Route) -> Self {
        Self {
            generator,
            route,
            control: QuadratureControl::default(),
        }
    }

    pub fn eval(&self, q: f64) -> Result<PhiValue> {
        characteristic_generator(&self.generator, q, self.route, &self.control)
    }

    /// φ(Q) as (mantissa, log-scale) with φ = mantissa·e^{log-scale}. The
    /// normal generator keeps its exponent separate so that callers can
    /// cancel it against growing factors.
    pub fn eval_scaled(&self, q: f64) -> Result<(f64, f64, PhiValue)> {
        let closed = matches!(self.route, Route::Auto | Route::Closed);
        if closed && self.generator.family() == Family::Normal {
            let pv = PhiValue {
                value: phi_normal(q),
                abs_err: 0.0,
                method: Method::ClosedForm,
            };
            return Ok((1.0, -0.5 * q, pv));
        }
        let pv = self.eval(q)?;
        Ok((pv.value, 0.0, pv))
    }
}

/// A (cholesky-type) factor A with A′A = Σ and the symmetric root Σ^{1/2}.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixRoots {
    pub a: DMatrix<f64>,
    pub sym: DMatrix<f64>,
    pub eigenvalues: DVector<f64>,
    pub rank: usize,
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Symmetric PSD check and both square roots of Σ.
///
/// Eigenvalues down to −1e-12·scale are clamped to zero. For singular Σ the
/// factor A is Λ^{1/2}V′ from the eigendecomposition.
pub fn matrix_roots(sigma: &DMatrix<f64>) -> Result<MatrixRoots> {
    if !sigma.is_square() || sigma.nrows() == 0 {
        return Err(ModelError::Dimension(format!(
            "sigma is {}x{}, expected a nonempty square matrix",
            sigma.nrows(),
            sigma.ncols()
        )));
    }
    if sigma.iter().any(|v| !v.is_finite()) {
        return Err(invalid("sigma", "entries must be finite"));
    }
    let scale = max_abs(sigma).max(1.0);
    let asym = max_abs(&(sigma - sigma.transpose()));
    if asym > MATRIX_TOL * scale {
        return Err(ModelError::NotSymmetric(asym));
    }
    let sym_sigma = (sigma + sigma.transpose()) * 0.5;
    let eig = sym_sigma.clone().symmetric_eigen();
    let mut lambda = eig.eigenvalues.clone();
    for l in lambda.iter_mut() {
        if *l < -MATRIX_TOL * scale {
            return Err(ModelError::NotPsd(*l));
        }
        *l = l.max(0.0);
    }
    let lmax = lambda.iter().fold(0.0f64, |a, b| a.max(*b));
    let rank = lambda
        .iter()
        .filter(|l| **l > MATRIX_TOL * lmax.max(f64::MIN_POSITIVE))
        .count();
    let v = &eig.eigenvectors;
    let root_diag = DMatrix::from_diagonal(&lambda.map(f64::sqrt));
    let sym = v * &root_diag * v.transpose();
    let a = match (rank == sym_sigma.nrows())
        .then(|| sym_sigma.clone().cholesky())
        .flatten()
    {
        Some(ch) => ch.l().transpose(),
        None => &root_diag * v.transpose(),
    };
    Ok(MatrixRoots {
        a,
        sym,
        eigenvalues: lambda,
        rank,
    })
}

/// (μ, Σ, g) of an elliptical law in ℝⁿ.
#[derive(Debug, Clone)]
pub struct EllipticalSpec {
    mu: DVector<f64>,
    sigma: DMatrix<f64>,
    generator: DensityGenerator,
    roots: MatrixRoots,
}

impl EllipticalSpec {
    pub fn new(mu: DVector<f64>, sigma: DMatrix<f64>, generator: DensityGenerator) -> Result<Self> {
        let n = mu.len();
        if n == 0 {
            return Err(ModelError::Dimension("mu is empty".into()));
        }
        if sigma.nrows() != n || sigma.ncols() != n {
            return Err(ModelError::Dimension(format!(
                "sigma is {}x{} but mu has length {n}",
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        if generator.dim() != n {
            return Err(ModelError::Dimension(format!(
                "generator bound to n = {} but mu has length {n}",
                generator.dim()
            )));
        }
        if mu.iter().any(|v| !v.is_finite()) {
            return Err(invalid("mu", "entries must be finite"));
        }
        let roots = matrix_roots(&sigma)?;
        let sigma = (&sigma + sigma.transpose()) * 0.5;
        Ok(Self {
            mu,
            sigma,
            generator,
            roots,
        })
    }

    /// Standard spec: μ = 0, Σ = I.
    pub fn standard(generator: DensityGenerator) -> Result<Self> {
        let n = generator.dim();
        Self::new(DVector::zeros(n), DMatrix::identity(n, n), generator)
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn generator(&self) -> &DensityGenerator {
        &self.generator
    }

    pub fn roots(&self) -> &MatrixRoots {
        &self.roots
    }

    pub fn rank(&self) -> usize {
        self.roots.rank
    }

    /// t′Σt, clamped at zero.
    pub fn quad_form(&self, t: &DVector<f64>) -> f64 {
        t.dot(&(&self.sigma * t)).max(0.0)
    }

    pub fn radial_density(&self, v: f64) -> Result<f64> {
        radial_density(self, v)
    }
}

/// Density of the generating variate R; needs a full-rank Σ.
pub fn radial_density(spec: &EllipticalSpec, v: f64) -> Result<f64> {
    if spec.rank() < spec.dim() {
        return Err(ModelError::RankDeficient {
            rank: spec.rank(),
            n: spec.dim(),
        });
    }
    Ok(spec.generator.radial_density(v))
}

pub(crate) fn check_len(t: &DVector<f64>, n: usize) -> Result<()> {
    if t.len() != n {
        return Err(ModelError::Dimension(format!("t has length {} but n = {n}", t.len())));
    }
    if t.iter().any(|v| !v.is_finite()) {
        return Err(invalid("t", "entries must be finite"));
    }
    Ok(())
}

/// e^{it′μ}φ(t′Σt).
pub fn cf(spec: &EllipticalSpec, t: &DVector<f64>, route: Route) -> Result<ComplexCF> {
    cf_with(spec, t, route, &QuadratureControl::default())
}

pub fn cf_with(spec: &EllipticalSpec, t: &DVector<f64>, route: Route, ctl: &QuadratureControl) -> Result<ComplexCF> {
    check_len(t, spec.dim())?;
    let method_hint = match route {
        Route::Hankel => Method::Hankel,
        Route::Closed => Method::ClosedForm,
        Route::Auto if has_closed_form(&spec.generator) => Method::ClosedForm,
        Route::Auto => Method::Hankel,
    };
    if t.iter().all(|v| *v == 0.0) {
        return Ok(ComplexCF::one(method_hint));
    }
    let q = spec.quad_form(t);
    let phi = characteristic_generator(&spec.generator, q, route, ctl)?;
    let phase = Complex64::from_polar(1.0, t.dot(&spec.mu));
    Ok(ComplexCF::new(phase * phi.value, Some(phi.abs_err), phi.method))
}
