//! Constructions on top of the elliptical core: location-scale mixtures,
//! the scale-mixture-of-uniforms (star unimodal) representation,
//! generalized skew-elliptical (GSE) laws, the skew-normal and its scale
//! mixtures.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::elliptical::{
    check_len, matrix_roots, CharacteristicGenerator, ComplexCF, DensityGenerator, Family, Method, ModelError, Result,
    ScalarFn,
};
use crate::quadrature::{
    integrate_bessel_finite, integrate_bessel_oscillatory, integrate_half_line, integrate_interval, Integrand,
    QuadratureControl,
};
use crate::specfun::{dawson, gamma_fn, ln_gamma, phi_imag};

fn invalid(field: &'static str, detail: impl Into<String>) -> ModelError {
    ModelError::InvalidParameter {
        field,
        detail: detail.into(),
    }
}

fn is_zero(t: &DVector<f64>) -> bool {
    t.iter().all(|v| *v == 0.0)
}

/// Law of the mixing variable ξ.
#[derive(Clone)]
pub enum MixingKind {
    Degenerate(f64),
    FiniteDiscrete {
        points: Vec<f64>,
        weights: Vec<f64>,
    },
    /// density β^α/Γ(α) x^{−α−1} e^{−β/x}
    InverseGamma {
        shape: f64,
        scale: f64,
    },
    /// A density on (0, upper).
    CustomDensity {
        density: ScalarFn,
        upper: f64,
    },
}

impl fmt::Debug for MixingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixingKind::Degenerate(v) => write!(f, "Degenerate({v})"),
            MixingKind::FiniteDiscrete { points, weights } => f
                .debug_struct("FiniteDiscrete")
                .field("points", points)
                .field("weights", weights)
                .finish(),
            MixingKind::InverseGamma { shape, scale } => f
                .debug_struct("InverseGamma")
                .field("shape", shape)
                .field("scale", scale)
                .finish(),
            MixingKind::CustomDensity { upper, .. } => write!(f, "CustomDensity(upper = {upper})"),
        }
    }
}

/// Weight k applied to ξ; the scale that enters the construction is k(ξ).
#[derive(Clone, Default)]
pub enum WeightFn {
    #[default]
    Identity,
    Reciprocal,
    Custom(ScalarFn),
}

impl WeightFn {
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            WeightFn::Identity => x,
            WeightFn::Reciprocal => 1.0 / x,
            WeightFn::Custom(f) => f(x),
        }
    }
}

impl fmt::Debug for WeightFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFn::Identity => write!(f, "Identity"),
            WeightFn::Reciprocal => write!(f, "Reciprocal"),
            WeightFn::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// A mixing law: ξ ~ kind, scale k(ξ).
#[derive(Debug, Clone)]
pub struct MixingLaw {
    kind: MixingKind,
    weight: WeightFn,
    control: QuadratureControl,
}

impl MixingLaw {
    pub fn new(kind: MixingKind, weight: WeightFn) -> Result<Self> {
        let control = QuadratureControl {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            ..QuadratureControl::default()
        };
        match &kind {
            MixingKind::Degenerate(v) => {
                if !(*v >= 0.0 && v.is_finite()) {
                    return Err(invalid("mixing.value", format!("{v} must be finite and >= 0")));
                }
            }
            MixingKind::FiniteDiscrete { points, weights } => {
                if points.is_empty() || points.len() != weights.len() {
                    return Err(invalid(
                        "mixing.weights",
                        format!("{} points but {} weights", points.len(), weights.len()),
                    ));
                }
                if let Some(p) = points.iter().find(|p| !(**p >= 0.0 && p.is_finite())) {
                    return Err(invalid("mixing.points", format!("{p} must be finite and >= 0")));
                }
                if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
                    return Err(invalid("mixing.weights", format!("{w} is negative")));
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-8 {
                    return Err(invalid("mixing.weights", format!("weights sum to {total}, not 1")));
                }
            }
            MixingKind::InverseGamma { shape, scale } => {
                for (field, v) in [("mixing.shape", shape), ("mixing.scale", scale)] {
                    if !(*v > 0.0 && v.is_finite()) {
                        return Err(invalid(field, format!("{v} must be finite and > 0")));
                    }
                }
            }
            MixingKind::CustomDensity { density, upper } => {
                if !(*upper > 0.0) {
                    return Err(invalid("mixing.upper", format!("{upper} must be > 0")));
                }
                let mass = if upper.is_finite() {
                    integrate_interval(&|x: f64, _gap: f64| density(x), *upper, &control)?.value
                } else {
                    integrate_half_line(&|x: f64| density(x), 1.0, &control)?.value
                };
                if (mass - 1.0).abs() > 1e-8 {
                    return Err(invalid("mixing.density", format!("integrates to {mass}, not 1")));
                }
            }
        }
        Ok(Self { kind, weight, control })
    }

    pub fn degenerate(value: f64) -> Result<Self> {
        Self::new(MixingKind::Degenerate(value), WeightFn::Identity)
    }

    pub fn kind(&self) -> &MixingKind {
        &self.kind
    }

    pub fn weight(&self) -> &WeightFn {
        &self.weight
    }

    /// The scale k(ξ) at a point of the support.
    pub fn scale_at(&self, xi: f64) -> f64 {
        self.weight.apply(xi)
    }

    /// True for laws evaluated as exact finite sums.
    pub fn is_discrete(&self) -> bool {
        matches!(self.kind, MixingKind::Degenerate(_) | MixingKind::FiniteDiscrete { .. })
    }

    /// E[f(k(ξ))] with an error estimate. Discrete laws are summed exactly,
    /// continuous laws integrated on log-scaled panels.
    pub fn expect<T: Integrand, F: Fn(f64) -> Result<T>>(&self, f: F) -> Result<(T, f64)> {
        match &self.kind {
            MixingKind::Degenerate(v) => Ok((f(self.scale_at(*v))?, 0.0)),
            MixingKind::FiniteDiscrete { points, weights } => {
                let mut acc = T::zero();
                for (p, w) in points.iter().zip(weights) {
                    if *w > 0.0 {
                        acc = acc + f(self.scale_at(*p))? * *w;
                    }
                }
                Ok((acc, 0.0))
            }
            MixingKind::InverseGamma { shape, scale } => {
                let (a, b) = (*shape, *scale);
                let log_norm = a * b.ln() - ln_gamma(a)?;
                let density = move |x: f64| (log_norm - (a + 1.0) * x.ln() - b / x).exp();
                self.integrate(&f, &density, f64::INFINITY, b / (a + 1.0))
            }
            MixingKind::CustomDensity { density, upper } => {
                let d = density.clone();
                self.integrate(&f, &move |x: f64| d(x), *upper, 1.0)
            }
        }
    }

    fn integrate<T: Integrand, F: Fn(f64) -> Result<T>, D: Fn(f64) -> f64>(
        &self,
        f: &F,
        density: &D,
        upper: f64,
        scale: f64,
    ) -> Result<(T, f64)> {
        let failure: RefCell<Option<ModelError>> = RefCell::new(None);
        let integrand = |x: f64| {
            let d = density(x);
            if d == 0.0 || !d.is_finite() {
                return T::zero();
            }
            match f(self.scale_at(x)) {
                Ok(v) => v * d,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    T::zero()
                }
            }
        };
        let r = if upper.is_finite() {
            integrate_interval(&|x: f64, _gap: f64| integrand(x), upper, &self.control)
        } else {
            integrate_half_line(&integrand, scale, &self.control)
        };
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let r = r?;
        Ok((r.value, r.err_est))
    }
}

/// X = μ + Vγ + √V Σ^{1/2} Z with Z spherical from `base`.
#[derive(Debug, Clone)]
pub struct LSMixtureSpec {
    pub psi: CharacteristicGenerator,
    pub mu: DVector<f64>,
    pub gamma: DVector<f64>,
    pub sigma: DMatrix<f64>,
    pub sigma_root: DMatrix<f64>,
    pub mixing: MixingLaw,
}

impl LSMixtureSpec {
    pub fn new(
        psi: CharacteristicGenerator,
        mu: DVector<f64>,
        gamma: DVector<f64>,
        sigma: DMatrix<f64>,
        mixing: MixingLaw,
    ) -> Result<Self> {
        let n = mu.len();
        if gamma.len() != n || sigma.nrows() != n || psi.generator.dim() != n {
            return Err(ModelError::Dimension(format!(
                "mu has length {n}, gamma {}, sigma {}x{}, generator n = {}",
                gamma.len(),
                sigma.nrows(),
                sigma.ncols(),
                psi.generator.dim()
            )));
        }
        let roots = matrix_roots(&sigma)?;
        if let MixingKind::FiniteDiscrete { points, .. } = &mixing.kind {
            if points.iter().any(|p| mixing.scale_at(*p) < 0.0) {
                return Err(invalid("mixing", "V must be nonnegative"));
            }
        }
        Ok(Self {
            psi,
            mu,
            gamma,
            sigma,
            sigma_root: roots.sym,
            mixing,
        })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }
}

/// e^{it′μ} E_V[e^{iVt′γ} φ(V t′Σt)].
pub fn cf_lsm(spec: &LSMixtureSpec, t: &DVector<f64>) -> Result<ComplexCF> {
    check_len(t, spec.dim())?;
    let method = if spec.psi.eval(0.25)?.method == Method::Hankel {
        Method::Hankel
    } else {
        Method::ClosedForm
    };
    if is_zero(t) {
        return Ok(ComplexCF::one(method));
    }
    let q = t.dot(&(&spec.sigma * t)).max(0.0);
    let tg = t.dot(&spec.gamma);
    let phi_err = RefCell::new(0.0f64);
    let (value, err) = spec.mixing.expect(|v: f64| {
        let phi = spec.psi.eval(v * q)?;
        *phi_err.borrow_mut() += phi.abs_err;
        Ok(Complex64::from_polar(phi.value, v * tg))
    })?;
    let phase = Complex64::from_polar(1.0, t.dot(&spec.mu));
    let err = err
        + if spec.mixing.is_discrete() {
            phi_err.into_inner()
        } else {
            0.0
        };
    Ok(ComplexCF::new(phase * value, Some(err), method))
}

/// Probe points for the star-unimodality check, inside the support of z.
fn probe_points(g: &DensityGenerator) -> Vec<f64> {
    let upper = g.support_radius().powi(2);
    (0..80)
        .map(|i| 1e-4 * 1.25f64.powi(i))
        .filter(|z| *z < upper * (1.0 - 1e-9))
        .collect()
}

/// Checks g′ ≤ 0 (star unimodality) and that g′ does not vanish identically.
pub fn check_star_unimodal(g: &DensityGenerator) -> Result<()> {
    if !g.is_differentiable() {
        return Err(ModelError::NotStarUnimodal("generator has no derivative".into()));
    }
    let mut any_negative = false;
    for z in probe_points(g) {
        let Some(d) = g.derivative(z) else { continue };
        if d > 1e-14 * g.eval(z).abs().max(1e-300) {
            return Err(ModelError::NotStarUnimodal(format!("g'({z}) = {d} > 0")));
        }
        if d < 0.0 {
            any_negative = true;
        }
    }
    if !any_negative {
        return Err(ModelError::NotStarUnimodal(
            "g' vanishes on the support interior, W has no density".into(),
        ));
    }
    Ok(())
}

/// Density of W in X = W·V, V uniform in the unit ball:
/// f_W(w) = −(4π^{n/2}c_n/(nΓ(n/2))) w^{n+1} g′(w²).
pub fn smu_density(g: &DensityGenerator, w: f64) -> Result<f64> {
    check_star_unimodal(g)?;
    smu_density_unchecked(g, w)
}

fn smu_density_unchecked(g: &DensityGenerator, w: f64) -> Result<f64> {
    if !(w >= 0.0) {
        return Err(invalid("w", format!("{w} must be >= 0")));
    }
    if w == 0.0 || w > g.support_radius() {
        return Ok(0.0);
    }
    let n = g.dim() as f64;
    let d = g.derivative(w * w).unwrap_or(0.0);
    let c = 4.0 * PI.powf(0.5 * n) * g.normalizing_constant() / (n * gamma_fn(0.5 * n)?);
    Ok(-c * w.powf(n + 1.0) * d)
}

/// CF through the SMU representation:
/// −2c_n(2π)^{n/2} ‖t‖^{−n/2} ∫₀^∞ w^{n/2+1} J_{n/2}(w‖t‖) g′(w²) dw.
pub fn cf_smu(g: &DensityGenerator, t: &DVector<f64>) -> Result<ComplexCF> {
    cf_smu_with(g, t, &QuadratureControl::default())
}

pub fn cf_smu_with(g: &DensityGenerator, t: &DVector<f64>, ctl: &QuadratureControl) -> Result<ComplexCF> {
    check_len(t, g.dim())?;
    check_star_unimodal(g)?;
    if is_zero(t) {
        return Ok(ComplexCF::one(Method::Hankel));
    }
    let n = g.dim() as f64;
    let u = t.norm();
    // 2 c_n (2π)^{n/2} = 2 Γ(n/2) 2^{n/2} / M_n
    let pref = -2.0 * gamma_fn(0.5 * n)? * 2f64.powf(0.5 * n) / g.moment_n() * u.powf(-0.5 * n);
    let envelope = |w: f64| match g.derivative(w * w) {
        Some(d) if d != 0.0 => pref * w.powf(0.5 * n + 1.0) * d,
        _ => 0.0,
    };
    let radius = g.support_radius();
    let r = if radius.is_finite() {
        integrate_bessel_finite(envelope, 0.5 * n, u, radius, ctl)?
    } else {
        integrate_bessel_oscillatory(envelope, 0.5 * n, u, ctl)?
    };
    Ok(ComplexCF::new(
        Complex64::new(r.value, 0.0),
        Some(r.err_est),
        Method::Hankel,
    ))
}

/// value·e^{log_scale}, kept apart so that large factors can cancel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledComplex {
    pub value: Complex64,
    pub log_scale: f64,
}

impl ScaledComplex {
    pub fn unscaled(value: Complex64) -> Self {
        Self { value, log_scale: 0.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        if self.log_scale == 0.0 {
            self.value
        } else {
            self.value * self.log_scale.exp()
        }
    }
}

/// A skewing kernel k: ℝᵈ → ℂ with k(s) + k(−s) = 1.
pub trait SkewKernel: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn eval(&self, s: &DVector<f64>) -> Result<ScaledComplex>;
}

/// k ≡ 1/2 (no skewing).
#[derive(Debug, Clone, Copy)]
pub struct HalfKernel(pub usize);

impl SkewKernel for HalfKernel {
    fn dim(&self) -> usize {
        self.0
    }
    fn eval(&self, _s: &DVector<f64>) -> Result<ScaledComplex> {
        Ok(ScaledComplex::unscaled(Complex64::new(0.5, 0.0)))
    }
}

/// Above this exponent Φ(iy) is returned with a separate log-scale.
const KERNEL_SCALE_SWITCH: f64 = 600.0;

/// k(s) = Φ(i w′s / c), the skew-normal kernel.
#[derive(Debug, Clone)]
pub struct SkewNormalKernel {
    w: DVector<f64>,
    c: f64,
}

impl SkewNormalKernel {
    /// Φ(i α′Ωs / √(1 + α′Ωα)).
    pub fn new(alpha: &DVector<f64>, omega: &DMatrix<f64>) -> Result<Self> {
        let d = alpha.len();
        if omega.nrows() != d || omega.ncols() != d {
            return Err(ModelError::Dimension(format!(
                "omega is {}x{} but alpha has length {d}",
                omega.nrows(),
                omega.ncols()
            )));
        }
        let quad = alpha.dot(&(omega * alpha));
        if !(quad > -1.0) {
            return Err(invalid("alpha", format!("1 + α'Ωα = {} must be positive", 1.0 + quad)));
        }
        Ok(Self {
            w: omega.transpose() * alpha,
            c: (1.0 + quad).sqrt(),
        })
    }

    /// The argument y of Φ(iy).
    pub fn argument(&self, s: &DVector<f64>) -> f64 {
        self.w.dot(s) / self.c
    }
}

impl SkewKernel for SkewNormalKernel {
    fn dim(&self) -> usize {
        self.w.len()
    }
    fn eval(&self, s: &DVector<f64>) -> Result<ScaledComplex> {
        let y = self.argument(s);
        let p = phi_imag(y)?;
        if p.log_scale <= KERNEL_SCALE_SWITCH {
            return Ok(ScaledComplex::unscaled(p.value()?));
        }
        Ok(ScaledComplex {
            value: Complex64::new(0.5 * (-p.log_scale).exp(), p.imag_mantissa),
            log_scale: p.log_scale,
        })
    }
}

/// τ_n(t) = 1 − 2k_n(−t).
pub fn tau_from_k(k_neg: Complex64) -> Complex64 {
    Complex64::new(1.0, 0.0) - k_neg * 2.0
}

/// c(t) = 2e^{it′μ} ψ(t′Σt) k(K t), K = Σ^{1/2} for a freshly built spec.
#[derive(Debug, Clone)]
pub struct GseSpec {
    pub mu: DVector<f64>,
    pub sigma: DMatrix<f64>,
    pub psi: CharacteristicGenerator,
    pub kernel: Arc<dyn SkewKernel>,
    /// Map from t to the kernel argument.
    pub k_map: DMatrix<f64>,
}

impl GseSpec {
    pub fn new(
        mu: DVector<f64>,
        sigma: DMatrix<f64>,
        psi: CharacteristicGenerator,
        kernel: Arc<dyn SkewKernel>,
    ) -> Result<Self> {
        let n = mu.len();
        if sigma.nrows() != n || kernel.dim() != n {
            return Err(ModelError::Dimension(format!(
                "mu has length {n}, sigma {}x{}, kernel dimension {}",
                sigma.nrows(),
                sigma.ncols(),
                kernel.dim()
            )));
        }
        let roots = matrix_roots(&sigma)?;
        let spec = Self {
            mu,
            sigma,
            psi,
            kernel,
            k_map: roots.sym,
        };
        spec.check_antisymmetry()?;
        spec.check_modulus()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// k_n(t) = k(K t).
    pub fn k_n(&self, t: &DVector<f64>) -> Result<ScaledComplex> {
        self.kernel.eval(&(&self.k_map * t))
    }

    /// Samples k(s) + k(−s) = 1 on a fixed set of directions.
    fn check_antisymmetry(&self) -> Result<()> {
        let d = self.kernel.dim();
        for i in 0..16 {
            let s = DVector::from_fn(d, |j, _| ((i * 7 + j * 3) as f64 * 0.37).sin() * 2.0);
            let a = self.kernel.eval(&s)?.to_complex();
            let b = self.kernel.eval(&(-&s))?.to_complex();
            if !a.is_finite() || !b.is_finite() {
                continue;
            }
            let dev = (a + b - Complex64::new(1.0, 0.0)).norm();
            if dev > 1e-10 {
                return Err(invalid("kernel", format!("k(s) + k(-s) deviates from 1 by {dev:e}")));
            }
        }
        Ok(())
    }

    /// |2ψ(t′Σt)k_n(t)| ≤ 1 on fixed directions at Q from 0.01 to 100. A kernel
    /// that outgrows ψ (e.g. the skew-normal kernel on a heavy-tailed ψ) fails.
    fn check_modulus(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..8 {
            let dir = DVector::from_fn(n, |j, _| ((i * 5 + j * 11 + 1) as f64 * 0.61).sin());
            let base = dir.dot(&(&self.sigma * &dir));
            if !(base > 0.0) {
                continue;
            }
            for q in [0.01, 0.1, 1.0, 4.0, 25.0, 100.0] {
                let t = &dir * (q / base).sqrt();
                let modulus = match cf_gse(self, &t) {
                    Ok(c) => c.modulus(),
                    Err(ModelError::Special(crate::specfun::SpecFunError::Overflow { .. })) => f64::INFINITY,
                    Err(e) => return Err(e),
                };
                if !(modulus <= 1.0 + 1e-9) {
                    return Err(invalid(
                        "kernel",
                        format!(
                            "|2 psi k| = {modulus:e} > 1 at Q = {q}: kernel and generator do not form a distribution"
                        ),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// 2 e^{it′μ} ψ(t′Σt) k_n(t).
pub fn cf_gse(spec: &GseSpec, t: &DVector<f64>) -> Result<ComplexCF> {
    check_len(t, spec.dim())?;
    if is_zero(t) {
        return Ok(ComplexCF::one(spec.psi.eval(0.0)?.method));
    }
    let q = t.dot(&(&spec.sigma * t)).max(0.0);
    let (mantissa, log_psi, pv) = spec.psi.eval_scaled(q)?;
    let k = spec.k_n(t)?;
    let log_total = log_psi + k.log_scale;
    let body = k.value * (2.0 * mantissa) * log_total.exp();
    if !body.is_finite() {
        return Err(ModelError::Special(crate::specfun::SpecFunError::Overflow {
            function: "cf_gse",
        }));
    }
    let phase = Complex64::from_polar(1.0, t.dot(&spec.mu));
    Ok(ComplexCF::new(phase * body, Some(2.0 * pv.abs_err), pv.method))
}

/// Law of a + BY for Y ~ GSE and B of full row rank m ≤ n.
pub fn gse_affine(spec: &GseSpec, a: &DVector<f64>, b: &DMatrix<f64>) -> Result<GseSpec> {
    let n = spec.dim();
    let m = b.nrows();
    if b.ncols() != n || a.len() != m || m == 0 {
        return Err(ModelError::Dimension(format!(
            "B is {}x{} and a has length {}, expected m x {n} and m",
            b.nrows(),
            b.ncols(),
            a.len()
        )));
    }
    if m > n {
        return Err(invalid("B", format!("{m} rows exceed dimension {n}")));
    }
    let sv = b.clone().svd(false, false).singular_values;
    let smax = sv.iter().fold(0.0f64, |x, y| x.max(*y));
    let rank = sv
        .iter()
        .filter(|s| **s > 1e-12 * smax.max(f64::MIN_POSITIVE) * n as f64)
        .count();
    if rank < m {
        return Err(invalid("B", format!("rank {rank} < {m} rows")));
    }
    let sigma = b * &spec.sigma * b.transpose();
    let sigma = (&sigma + sigma.transpose()) * 0.5;
    matrix_roots(&sigma)?;
    let mut psi = spec.psi.clone();
    if psi.generator.dim() != m {
        psi.generator = psi.generator.with_dim(m)?;
    }
    Ok(GseSpec {
        mu: a + b * &spec.mu,
        sigma,
        psi,
        kernel: spec.kernel.clone(),
        k_map: &spec.k_map * b.transpose(),
    })
}

/// Which skew-normal parametrization Φ uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parametrization {
    /// Φ(iα′Σ^{1/2}t / √(1+α′α))
    #[default]
    HalfRoot,
    /// Φ(iα′Σt / √(1+α′Σα))
    FullSigma,
}

#[derive(Debug, Clone)]
pub struct SkewNormalSpec {
    pub mu: DVector<f64>,
    pub sigma: DMatrix<f64>,
    pub alpha: DVector<f64>,
    pub parametrization: Parametrization,
    pub sigma_root: DMatrix<f64>,
    kernel: SkewNormalKernel,
}

impl SkewNormalSpec {
    pub fn new(
        mu: DVector<f64>,
        sigma: DMatrix<f64>,
        alpha: DVector<f64>,
        parametrization: Parametrization,
    ) -> Result<Self> {
        let n = mu.len();
        if alpha.len() != n || sigma.nrows() != n || sigma.ncols() != n {
            return Err(ModelError::Dimension(format!(
                "mu has length {n}, alpha {}, sigma {}x{}",
                alpha.len(),
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        if alpha.iter().chain(mu.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("alpha", "entries of mu and alpha must be finite"));
        }
        let roots = matrix_roots(&sigma)?;
        let sigma = (&sigma + sigma.transpose()) * 0.5;
        // y = w′s / c with s = Σ^{1/2}t
        let kernel = match parametrization {
            Parametrization::HalfRoot => SkewNormalKernel::new(&alpha, &DMatrix::identity(n, n))?,
            Parametrization::FullSigma => {
                let w = &roots.sym * &alpha;
                SkewNormalKernel {
                    c: (1.0 + alpha.dot(&(&sigma * &alpha))).sqrt(),
                    w,
                }
            }
        };
        Ok(Self {
            mu,
            sigma,
            alpha,
            parametrization,
            sigma_root: roots.sym,
            kernel,
        })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// The skewing vector δ-direction used by the conditioning sampler:
    /// λ with Φ-argument λ′Σ^{-1/2}(x − μ).
    pub fn lambda(&self) -> DVector<f64> {
        match self.parametrization {
            Parametrization::HalfRoot => self.alpha.clone(),
            Parametrization::FullSigma => &self.sigma_root * &self.alpha,
        }
    }

    /// y such that Φ(iy) enters the CF at t.
    pub fn skew_argument(&self, t: &DVector<f64>) -> f64 {
        self.kernel.argument(&(&self.sigma_root * t))
    }

    /// The skew-normal kernel k with k_n(t) = k(Σ^{1/2}t).
    pub fn kernel(&self) -> SkewNormalKernel {
        self.kernel.clone()
    }

    /// The same law as a GSE spec with normal ψ.
    pub fn to_gse(&self) -> Result<GseSpec> {
        let psi = CharacteristicGenerator::new(
            DensityGenerator::new(Family::Normal, self.dim())?,
            crate::elliptical::Route::Closed,
        );
        GseSpec::new(self.mu.clone(), self.sigma.clone(), psi, Arc::new(self.kernel.clone()))
    }
}

/// 2e^{−Q/2}Φ(iy) without the phase, assembled in log scale:
/// e^{−Q/2} + 2i·D(y/√2)/√π·e^{(y²−Q)/2}.
fn skew_normal_body(q: f64, y: f64) -> Complex64 {
    let im = 2.0 * dawson(y / std::f64::consts::SQRT_2) / PI.sqrt() * (0.5 * (y * y - q)).exp();
    Complex64::new((-0.5 * q).exp(), im)
}

pub fn cf_skew_normal(spec: &SkewNormalSpec, t: &DVector<f64>) -> Result<ComplexCF> {
    check_len(t, spec.dim())?;
    if is_zero(t) {
        return Ok(ComplexCF::one(Method::ClosedForm));
    }
    let q = t.dot(&(&spec.sigma * t)).max(0.0);
    let y = spec.skew_argument(t);
    let phase = Complex64::from_polar(1.0, t.dot(&spec.mu));
    Ok(ComplexCF::new(
        phase * skew_normal_body(q, y),
        Some(0.0),
        Method::ClosedForm,
    ))
}

/// Scale mixture of skew-normals: e^{it′μ} E[c_sn(√k(ξ) t)] with c_sn
/// centred.
pub fn cf_smsn(spec: &SkewNormalSpec, mixing: &MixingLaw, t: &DVector<f64>) -> Result<ComplexCF> {
    check_len(t, spec.dim())?;
    if is_zero(t) {
        return Ok(ComplexCF::one(Method::ClosedForm));
    }
    let q = t.dot(&(&spec.sigma * t)).max(0.0);
    let y = spec.skew_argument(t);
    check_scales(mixing)?;
    let (value, err) = mixing.expect(|k: f64| Ok(skew_normal_body(k * q, k.sqrt() * y)))?;
    let phase = Complex64::from_polar(1.0, t.dot(&spec.mu));
    Ok(ComplexCF::new(phase * value, Some(err), Method::ClosedForm))
}

fn check_scales(mixing: &MixingLaw) -> Result<()> {
    if let MixingKind::FiniteDiscrete { points, .. } = mixing.kind() {
        if let Some(p) = points.iter().find(|p| !(mixing.scale_at(**p) >= 0.0)) {
            return Err(invalid("mixing", format!("k({p}) is negative")));
        }
    }
    Ok(())
}

/// The (ψ, k_n) split of a scale mixture of skew-normals:
/// ψ(Q) = E[e^{−kQ/2}] and k_n(t) = 1/2 + E[e^{−kQ/2}(Φ(i√k y) − 1/2)]/ψ.
pub fn smsn_split(spec: &SkewNormalSpec, mixing: &MixingLaw, t: &DVector<f64>) -> Result<(f64, Complex64)> {
    check_len(t, spec.dim())?;
    check_scales(mixing)?;
    let q = t.dot(&(&spec.sigma * t)).max(0.0);
    let y = spec.skew_argument(t);
    let (psi, _) = mixing.expect(|k: f64| Ok((-0.5 * k * q).exp()))?;
    let (tilt, _) = mixing.expect(|k: f64| {
        let x = k.sqrt() * y;
        let im = dawson(x / std::f64::consts::SQRT_2) / PI.sqrt() * (0.5 * k * (y * y - q)).exp();
        Ok(Complex64::new(0.0, im))
    })?;
    if psi == 0.0 {
        return Ok((0.0, Complex64::new(0.5, 0.0)));
    }
    Ok((psi, Complex64::new(0.5, 0.0) + tilt / psi))
}

/// The SMSN CF assembled from the split: 2e^{it′μ}ψ k_n.
pub fn cf_smsn_split(spec: &SkewNormalSpec, mixing: &MixingLaw, t: &DVector<f64>) -> Result<ComplexCF> {
    if is_zero(t) {
        check_len(t, spec.dim())?;
        return Ok(ComplexCF::one(Method::ClosedForm));
    }
    let (psi, k_n) = smsn_split(spec, mixing, t)?;
    let phase = Complex64::from_polar(1.0, t.dot(&spec.mu));
    Ok(ComplexCF::new(phase * k_n * (2.0 * psi), None, Method::ClosedForm))
}
