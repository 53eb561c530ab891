//! One-dimensional quadrature.
//!
//! Three layers: an adaptive Gauss–Kronrod (7/15) integrator on finite
//! intervals, a log-scaled panel march for smooth integrals over (0, ∞), and
//! a zero-split panel engine with Euler acceleration for integrals against a
//! Bessel kernel J_ν(ωr). The generator-level operations (moment integrals,
//! radial moments and the Hankel form of the characteristic generator) are
//! built on top of these.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use thiserror::Error;

use crate::elliptical::DensityGenerator;
use crate::specfun::{bessel_j, gamma_fn, BesselZeros, SpecFunError};

/// Below this u the Hankel route switches to the moment series.
pub const SERIES_SWITCH: f64 = 1e-3;

const GEOMETRIC_LEVELS: usize = 40;
const MAX_SUBDIVISIONS: usize = 200;
const EULER_DEPTH: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid quadrature control: {0}")]
    InvalidControl(String),
    #[error("no convergence after {panels} panels (value {value}, error estimate {err_est})")]
    NotConverged { value: f64, err_est: f64, panels: usize },
    #[error("integral diverges: {0}")]
    Divergent(String),
    #[error("integrand envelope does not decay after {panels} panels")]
    NonDecaying { panels: usize },
    #[error("radial moment E[R^{}] does not exist", 2 * .k)]
    MomentDoesNotExist { k: usize },
    #[error("integrand is not finite near r = {at}")]
    NonFinite { at: f64 },
    #[error(transparent)]
    Special(#[from] SpecFunError),
}

/// Tolerances and limits shared by every integrator in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Relative envelope level below which the rest of the axis is dropped.
    pub tail_cutoff: f64,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-9,
            max_panels: 400,
            tail_cutoff: 1e-16,
        }
    }
}

impl QuadratureControl {
    pub fn new(abs_tol: f64, rel_tol: f64, max_panels: usize, tail_cutoff: f64) -> Result<Self, QuadError> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || !(tail_cutoff > 0.0) {
            return Err(QuadError::InvalidControl(format!(
                "tolerances must be > 0 (abs_tol {abs_tol}, rel_tol {rel_tol}, tail_cutoff {tail_cutoff})"
            )));
        }
        if max_panels < 2 {
            return Err(QuadError::InvalidControl(format!("max_panels = {max_panels} < 2")));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_panels,
            tail_cutoff,
        })
    }

    /// Same limits with both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            ..*self
        }
    }

    fn target(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T = f64> {
    pub value: T,
    pub err_est: f64,
    pub panels_used: usize,
    /// Bound on the neglected part of an infinite range (0 for finite ranges).
    pub tail_bound: f64,
}

/// Values an integrand may take: real or complex.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn modulus(self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One 15-point Kronrod panel with the QUADPACK error heuristic.
fn gk15<T: Integrand, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Result<(T, f64), QuadError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut fv = [(T::zero(), T::zero()); 7];
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = fc.modulus() * WGK[7];
    for j in 0..7 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x), f(c + x));
        fv[j] = (f1, f2);
        resk = resk + (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG[j / 2];
        }
        resabs += (f1.modulus() + f2.modulus()) * WGK[j];
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).modulus();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j].0 - mean).modulus() + (fv[j].1 - mean).modulus());
    }
    let result = resk * h;
    if !result.modulus().is_finite() {
        return Err(QuadError::NonFinite { at: c });
    }
    let (resabs, resasc) = (resabs * h.abs(), resasc * h.abs());
    let mut err = ((resk - resg) * h).modulus();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((result, err))
}

/// Globally adaptive Gauss–Kronrod integration of `f` over [a, b].
///
/// Returns the estimate and its error; the error may exceed the request if
/// the subdivision limit is reached, callers decide what to do with that.
pub fn integrate_adaptive<T: Integrand, F: Fn(f64) -> T>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(T, f64), QuadError> {
    if a == b {
        return Ok((T::zero(), 0.0));
    }
    let (v, e) = gk15(f, a, b)?;
    let mut segs = vec![(a, b, v, e)];
    let (mut total, mut total_err) = (v, e);
    while total_err > abs_tol.max(rel_tol * total.modulus()) && segs.len() < MAX_SUBDIVISIONS {
        let worst = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, sv, se) = segs.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            segs.push((lo, hi, sv, se));
            break;
        }
        let (v1, e1) = gk15(f, lo, mid)?;
        let (v2, e2) = gk15(f, mid, hi)?;
        segs.push((lo, mid, v1, e1));
        segs.push((mid, hi, v2, e2));
        total = segs.iter().fold(T::zero(), |acc, s| acc + s.2);
        total_err = segs.iter().map(|s| s.3).sum();
    }
    Ok((total, total_err))
}

/// ∫₀^∞ h(s) ds for h that eventually decays geometrically across unit
/// panels. Panels are added until a geometric tail bound falls below the
/// tolerance; a ratio stuck near one marks divergence.
fn march<T: Integrand, H: Fn(f64) -> T>(h: &H, ctl: &QuadratureControl) -> Result<QuadResult<T>, QuadError> {
    let mut sum = T::zero();
    let mut err = 0.0;
    let mut prev: Option<f64> = None;
    let mut flat = 0usize;
    let mut zeros = 0usize;
    let mut seen_mass = false;
    for k in 0..ctl.max_panels {
        let s0 = k as f64;
        let (v, e) = integrate_adaptive(h, s0, s0 + 1.0, 1e-3 * ctl.abs_tol, 1e-3 * ctl.rel_tol)?;
        sum = sum + v;
        err += e;
        let m = v.modulus();
        let done = |tail: f64, sum: T, err: f64| QuadResult {
            value: sum,
            err_est: err + 0.1 * tail,
            panels_used: k + 1,
            tail_bound: tail,
        };
        if m == 0.0 {
            zeros += 1;
            if zeros >= 3 && (seen_mass || k >= 8) {
                return Ok(done(0.0, sum, err));
            }
            prev = Some(0.0);
            continue;
        }
        seen_mass = true;
        zeros = 0;
        if let Some(p) = prev.filter(|p| *p > 0.0) {
            let rho = m / p;
            if rho < 0.999 {
                flat = 0;
                let tail = m * rho / (1.0 - rho);
                if tail <= 0.01 * ctl.target(sum.modulus()) || (m <= ctl.tail_cutoff * sum.modulus() && rho < 0.9) {
                    // geometric extrapolation of the remaining panels
                    return Ok(done(tail, sum + v * (rho / (1.0 - rho)), err));
                }
            } else if k >= 40 {
                flat += 1;
                if flat >= 20 {
                    return Err(QuadError::Divergent(format!(
                        "panel contributions stopped shrinking after {} panels",
                        k + 1
                    )));
                }
            }
        }
        prev = Some(m);
    }
    Err(QuadError::NotConverged {
        value: sum.modulus(),
        err_est: err,
        panels: ctl.max_panels,
    })
}

fn combine<T: Integrand>(left: QuadResult<T>, right: QuadResult<T>) -> QuadResult<T> {
    QuadResult {
        value: left.value + right.value,
        err_est: left.err_est + right.err_est,
        panels_used: left.panels_used + right.panels_used,
        tail_bound: left.tail_bound + right.tail_bound,
    }
}

/// ∫₀^∞ f(z) dz for f smooth on (0, ∞), with an integrable power
/// singularity allowed at 0. `scale` marks roughly where the mass sits and
/// only matters for efficiency.
///
/// The substitution z = scale·e^{±s} turns both power-law ends into
/// geometrically decaying unit panels in s.
pub fn integrate_half_line<T: Integrand, F: Fn(f64) -> T>(
    f: &F,
    scale: f64,
    ctl: &QuadratureControl,
) -> Result<QuadResult<T>, QuadError> {
    let scale = if scale > 0.0 && scale.is_finite() { scale } else { 1.0 };
    let left = march(
        &|s: f64| {
            let z = scale * (-s).exp();
            f(z) * z
        },
        ctl,
    )?;
    let right = march(
        &|s: f64| {
            let z = scale * s.exp();
            let v = f(z);
            if v.modulus() == 0.0 {
                T::zero()
            } else {
                v * z
            }
        },
        ctl,
    )?;
    Ok(combine(left, right))
}

/// ∫₀^upper f(z, upper − z) dz. The integrand receives the distance to the
/// upper end as well, so power singularities there can be evaluated without
/// cancellation.
pub fn integrate_interval<T: Integrand, F: Fn(f64, f64) -> T>(
    f: &F,
    upper: f64,
    ctl: &QuadratureControl,
) -> Result<QuadResult<T>, QuadError> {
    if !(upper > 0.0 && upper.is_finite()) {
        return Err(QuadError::InvalidControl(format!(
            "upper limit {upper} must be finite and > 0"
        )));
    }
    let half = 0.5 * upper;
    let left = march(
        &|s: f64| {
            let z = half * (-s).exp();
            f(z, upper - z) * z
        },
        ctl,
    )?;
    let right = march(
        &|s: f64| {
            let w = half * (-s).exp();
            f(upper - w, w) * w
        },
        ctl,
    )?;
    Ok(combine(left, right))
}

/// ∫ over [lo, hi] with pieces halving toward `lo` (toward_lo) or `hi`, so
/// power-law endpoint behaviour is resolved.
fn integrate_graded<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    toward_lo: bool,
    ctl: &QuadratureControl,
) -> Result<(f64, f64, usize), QuadError> {
    let width = hi - lo;
    let point = |frac: f64| {
        if toward_lo {
            lo + width * frac
        } else {
            hi - width * frac
        }
    };
    let (mut sum, mut err) = (0.0, 0.0);
    let mut prev = f64::INFINITY;
    let (mut last, mut prev_signed) = (0.0, 0.0);
    let mut pieces = 0;
    for k in 0..GEOMETRIC_LEVELS {
        let (x0, x1) = (point(0.5f64.powi(k as i32 + 1)), point(0.5f64.powi(k as i32)));
        let (a, b) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
        let (v, e) = integrate_adaptive(f, a, b, 1e-3 * ctl.abs_tol, 1e-3 * ctl.rel_tol)?;
        sum += v;
        err += e;
        pieces += 1;
        if k >= 4 && sum != 0.0 && v.abs() <= 1e-17 * sum.abs() && v.abs() <= prev {
            return Ok((sum, err, pieces));
        }
        prev = v.abs();
        prev_signed = last;
        last = v;
    }
    // Power-law behaviour at the endpoint makes the pieces geometric; the
    // remainder below the last level is their geometric tail.
    let ratio = last / prev_signed;
    if ratio > 0.0 && ratio < 0.95 {
        let tail = last * ratio / (1.0 - ratio);
        return Ok((sum + tail, err + 0.01 * tail.abs(), pieces));
    }
    let edge = point(0.5f64.powi(GEOMETRIC_LEVELS as i32));
    let (a, b) = if toward_lo { (lo, edge) } else { (edge, hi) };
    let (v, e) = integrate_adaptive(f, a, b, 1e-3 * ctl.abs_tol, 1e-3 * ctl.rel_tol)?;
    Ok((sum + v, err + e, pieces + 1))
}

/// Repeated pairwise averaging of partial sums (Euler transform).
fn euler_average(partial: &[f64]) -> f64 {
    let mut v = partial.to_vec();
    while v.len() > 1 {
        for i in 0..v.len() - 1 {
            v[i] = 0.5 * (v[i] + v[i + 1]);
        }
        v.pop();
    }
    v[0]
}

fn bessel_kernel<F: Fn(f64) -> f64>(f: &F, nu: f64, omega: f64) -> impl Fn(f64) -> f64 + '_ {
    move |r: f64| {
        let fr = f(r);
        if fr == 0.0 {
            return 0.0;
        }
        fr * bessel_j(nu, omega * r).unwrap_or(f64::NAN)
    }
}

/// ∫₀^∞ f(r)·J_ν(ωr) dr for an eventually decaying envelope f.
///
/// The axis is cut at the scaled zeros j_{ν,k}/ω. The first panel is graded
/// toward r = 0, later panels are plain adaptive Kronrod. The panel sums
/// alternate, so the partial sums are accelerated by repeated averaging over
/// the last 20 of them; the loop stops once two consecutive accelerated
/// values agree, or earlier if the envelope has dropped below `tail_cutoff`
/// of its peak.
pub fn integrate_bessel_oscillatory<F: Fn(f64) -> f64>(
    f: F,
    nu: f64,
    omega: f64,
    ctl: &QuadratureControl,
) -> Result<QuadResult, QuadError> {
    check_omega(omega)?;
    let h = bessel_kernel(&f, nu, omega);
    let mut zeros = BesselZeros::new(nu)?.map(|z| z.map(|z| z / omega));
    let mut a = zeros.next().transpose()?.expect("zero iterator is infinite");
    let (first, mut err, mut panels) = integrate_graded(&h, 0.0, a, true, ctl)?;
    let mut partial = vec![first];
    let envelope = |r: f64| f(r).abs() / (omega * r).sqrt().max(1.0);
    let mut env_max = (0..GEOMETRIC_LEVELS as i32)
        .map(|k| envelope(a * 0.5f64.powi(k)))
        .fold(0.0f64, f64::max);
    let mut prev_acc: Option<f64> = None;
    let mut agree = 0;
    let mut terms: Vec<f64> = Vec::new();
    while panels < ctl.max_panels {
        let b = zeros.next().transpose()?.expect("zero iterator is infinite");
        let (v, e) = integrate_adaptive(&h, a, b, 1e-3 * ctl.abs_tol, 1e-3 * ctl.rel_tol)?;
        panels += 1;
        err += e;
        terms.push(v.abs());
        let s = partial.last().copied().unwrap_or(0.0) + v;
        partial.push(s);
        let env = envelope(b);
        env_max = env_max.max(env);
        if env_max > 0.0 && env <= ctl.tail_cutoff * env_max {
            return Ok(QuadResult {
                value: s,
                err_est: err + v.abs() * ctl.tail_cutoff,
                panels_used: panels,
                tail_bound: env * (b - a),
            });
        }
        if partial.len() >= 8 {
            let start = partial.len().saturating_sub(EULER_DEPTH);
            let acc = euler_average(&partial[start..]);
            if let Some(p) = prev_acc {
                let d = (acc - p).abs();
                let k = terms.len();
                let decaying = k >= 6 && (terms[k - 1] < terms[k - 6] || terms[k - 1] == 0.0);
                if d <= 0.1 * ctl.target(acc.abs()) && decaying {
                    agree += 1;
                    if agree >= 2 {
                        return Ok(QuadResult {
                            value: acc,
                            err_est: err + d,
                            panels_used: panels,
                            tail_bound: v.abs(),
                        });
                    }
                } else {
                    agree = 0;
                }
            }
            prev_acc = Some(acc);
        }
        a = b;
    }
    let k = terms.len();
    if k > 40 && terms[k - 1] >= terms[k - 21] {
        return Err(QuadError::NonDecaying { panels });
    }
    Err(QuadError::NotConverged {
        value: prev_acc.unwrap_or(partial[partial.len() - 1]),
        err_est: err,
        panels,
    })
}

/// ∫₀^upper f(r)·J_ν(ωr) dr for compactly supported f. Panels at the
/// scaled zeros inside the support, graded at both ends.
pub fn integrate_bessel_finite<F: Fn(f64) -> f64>(
    f: F,
    nu: f64,
    omega: f64,
    upper: f64,
    ctl: &QuadratureControl,
) -> Result<QuadResult, QuadError> {
    check_omega(omega)?;
    if !(upper > 0.0 && upper.is_finite()) {
        return Err(QuadError::InvalidControl(format!(
            "upper limit {upper} must be finite and > 0"
        )));
    }
    let h = bessel_kernel(&f, nu, omega);
    let mut cuts = vec![0.0];
    for z in BesselZeros::new(nu)? {
        let z = z? / omega;
        if z >= upper {
            break;
        }
        cuts.push(z);
        if cuts.len() > ctl.max_panels {
            return Err(QuadError::NotConverged {
                value: f64::NAN,
                err_est: f64::INFINITY,
                panels: cuts.len(),
            });
        }
    }
    if cuts.len() == 1 {
        cuts.push(0.5 * upper);
    }
    cuts.push(upper);
    let last = cuts.len() - 2;
    let (mut sum, mut err, mut panels) = (0.0, 0.0, 0);
    for (i, w) in cuts.windows(2).enumerate() {
        let (v, e, p) = if i == 0 {
            integrate_graded(&h, w[0], w[1], true, ctl)?
        } else if i == last {
            integrate_graded(&h, w[0], w[1], false, ctl)?
        } else {
            let (v, e) = integrate_adaptive(&h, w[0], w[1], 1e-3 * ctl.abs_tol, 1e-3 * ctl.rel_tol)?;
            (v, e, 1)
        };
        sum += v;
        err += e;
        panels += p;
    }
    Ok(QuadResult {
        value: sum,
        err_est: err,
        panels_used: panels,
        tail_bound: 0.0,
    })
}

fn check_omega(omega: f64) -> Result<(), QuadError> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(QuadError::InvalidControl(format!(
            "omega = {omega} must be finite and > 0"
        )));
    }
    Ok(())
}

/// M_p = ∫₀^∞ z^{p/2−1} g(z) dz by numerical quadrature.
///
/// `p = n` gives the normalizing integral; `p = n + 2k` feeds the radial
/// moments.
pub fn moment_integral(g: &DensityGenerator, p: f64, ctl: &QuadratureControl) -> Result<QuadResult, QuadError> {
    if !(p > 0.0) {
        return Err(QuadError::InvalidControl(format!("moment order p = {p} must be > 0")));
    }
    let integrand = |z: f64, gap: f64| {
        let gz = g.eval_with_gap(z, gap);
        if gz == 0.0 {
            0.0
        } else {
            gz * z.powf(0.5 * p - 1.0)
        }
    };
    let upper = g.support_radius().powi(2);
    let r = if upper.is_finite() {
        integrate_interval(&integrand, upper, ctl)?
    } else {
        integrate_half_line(&|z: f64| integrand(z, f64::INFINITY), g.scale_hint(), ctl)?
    };
    if !r.value.is_finite() {
        return Err(QuadError::Divergent(format!(
            "moment integral of order {p} is not finite"
        )));
    }
    Ok(r)
}

/// E[R^{2k}] for the radial law of the generator at its bound dimension.
pub fn radial_moment(g: &DensityGenerator, k: usize, ctl: &QuadratureControl) -> Result<f64, QuadError> {
    if k == 0 {
        return Ok(1.0);
    }
    let p = g.dim() as f64 + 2.0 * k as f64;
    match g.moment(p, ctl) {
        Ok(m) if m.is_finite() => Ok(m / g.moment_n()),
        _ => Err(QuadError::MomentDoesNotExist { k }),
    }
}

/// φ(u²) from the moment series Σ_k (−u²/4)^k E[R^{2k}] / ((n/2)_k k!).
pub fn phi_hankel_series(g: &DensityGenerator, u: f64, ctl: &QuadratureControl) -> Result<QuadResult, QuadError> {
    let half_n = 0.5 * g.dim() as f64;
    let x = -0.25 * u * u;
    let mut sum = 1.0;
    let mut coeff = 1.0;
    for k in 1..=30 {
        let kf = k as f64;
        coeff *= x / ((half_n + kf - 1.0) * kf);
        let term = coeff * radial_moment(g, k, ctl)?;
        sum += term;
        if term.abs() <= ctl.rel_tol * 1e-3 * sum.abs() {
            return Ok(QuadResult {
                value: sum,
                err_est: term.abs(),
                panels_used: k,
                tail_bound: term.abs(),
            });
        }
    }
    Err(QuadError::NotConverged {
        value: sum,
        err_est: f64::INFINITY,
        panels: 30,
    })
}

/// φ(u²) by direct quadrature of the Hankel-type integral
/// c_n(2π)^{n/2} u^{−ν} ∫₀^∞ r^{n/2} J_ν(ru) g(r²) dr, ν = (n−2)/2.
pub fn phi_hankel_oscillatory(g: &DensityGenerator, u: f64, ctl: &QuadratureControl) -> Result<QuadResult, QuadError> {
    let n = g.dim() as f64;
    let nu = 0.5 * (n - 2.0);
    // c_n (2π)^{n/2} = Γ(n/2) 2^{n/2} / M_n
    let prefactor = gamma_fn(0.5 * n)? * 2f64.powf(0.5 * n) / g.moment_n() * u.powf(-nu);
    let envelope = |r: f64| {
        let gz = g.eval(r * r);
        if gz == 0.0 {
            0.0
        } else {
            prefactor * r.powf(0.5 * n) * gz
        }
    };
    let radius = g.support_radius();
    if radius.is_finite() {
        integrate_bessel_finite(envelope, nu, u, radius, ctl)
    } else {
        integrate_bessel_oscillatory(envelope, nu, u, ctl)
    }
}

/// The characteristic generator φ(u²) of any density generator.
///
/// φ(0) = 1 exactly. Below u = 1e-3 the moment series is used when the
/// needed moments exist; otherwise, and for all larger u, the oscillatory
/// integral.
pub fn phi_hankel(g: &DensityGenerator, u: f64, ctl: &QuadratureControl) -> Result<QuadResult, QuadError> {
    if !(u >= 0.0 && u.is_finite()) {
        return Err(QuadError::InvalidControl(format!("u = {u} must be finite and >= 0")));
    }
    if u == 0.0 {
        return Ok(QuadResult {
            value: 1.0,
            err_est: 0.0,
            panels_used: 0,
            tail_bound: 0.0,
        });
    }
    if u < SERIES_SWITCH {
        if let Ok(r) = phi_hankel_series(g, u, ctl) {
            return Ok(r);
        }
    }
    phi_hankel_oscillatory(g, u, ctl)
}
