use std::f64::consts::{FRAC_PI_2, PI};

use super::gamma::ln_gamma;
use super::{Result, SpecFunError};

/// Below this argument J_ν is summed from its power series.
const SERIES_LIMIT: f64 = 4.0;
/// Above max(this, 2ν²) the Hankel asymptotic expansion is used.
const ASYMPTOTIC_LIMIT: f64 = 40.0;
const MAX_ITER: usize = 100_000;
const TINY: f64 = 1e-300;

/// Bessel function of the first kind J_ν(x) for real ν > -1 and x ≥ 0.
///
/// Power series for small x, Steed's continued-fraction method in the
/// intermediate band and the Hankel expansion for large x. ν = ±1/2 use the
/// elementary forms.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if !nu.is_finite() || nu <= -1.0 {
        return Err(SpecFunError::Domain {
            function: "bessel_j",
            detail: format!("order {nu} must be > -1"),
        });
    }
    if !x.is_finite() || x < 0.0 {
        return Err(SpecFunError::Domain {
            function: "bessel_j",
            detail: format!("argument {x} must be finite and >= 0"),
        });
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    if nu == 0.5 {
        return Ok((2.0 / (PI * x)).sqrt() * x.sin());
    }
    if nu == -0.5 {
        return Ok((2.0 / (PI * x)).sqrt() * x.cos());
    }
    if x <= SERIES_LIMIT || 0.25 * x * x < nu + 1.0 {
        return j_series(nu, x);
    }
    if nu < 0.0 {
        let j1 = bessel_j(nu + 1.0, x)?;
        let j2 = bessel_j(nu + 2.0, x)?;
        return Ok(2.0 * (nu + 1.0) / x * j1 - j2);
    }
    if x > ASYMPTOTIC_LIMIT && x > 2.0 * nu * nu {
        if let Some(v) = j_asymptotic(nu, x) {
            return Ok(v);
        }
    }
    j_steed(nu, x)
}

fn j_series(nu: f64, x: f64) -> Result<f64> {
    let half = 0.5 * x;
    let log_prefactor = nu * half.ln() - ln_gamma(nu + 1.0)?;
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=MAX_ITER {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() && kf * (nu + kf) > -q {
            return Ok(sum * log_prefactor.exp());
        }
    }
    Err(SpecFunError::NotConverged {
        function: "bessel_j",
        terms: MAX_ITER,
    })
}

fn j_asymptotic(nu: f64, x: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut prev = f64::INFINITY;
    for k in 1..80usize {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() > prev && k > 2 {
            return None;
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 * p.abs().max(q.abs()) {
            let phase = (0.5 * nu + 0.25) * PI;
            let (sx, cx) = x.sin_cos();
            let (sp, cp) = phase.sin_cos();
            let cos_chi = cx * cp + sx * sp;
            let sin_chi = sx * cp - cx * sp;
            return Some((2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi));
        }
    }
    None
}

/// Steed's method: CF1 gives J'/J at ν, downward recurrence to a low order μ,
/// CF2 gives (J + iY) there and the Wronskian fixes the normalization.
fn j_steed(nu: f64, x: f64) -> Result<f64> {
    const EPS: f64 = 1e-16;
    let not_converged = || SpecFunError::NotConverged {
        function: "bessel_j",
        terms: MAX_ITER,
    };
    let nl = (nu - x + 1.5).max(0.0) as usize;
    let xmu = nu - nl as f64;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    let mut isign = 1.0;
    let mut h = (nu * xi).max(TINY);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        b += xi2;
        d = b - d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b - 1.0 / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(not_converged());
    }

    let mut rjl = isign * TINY;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let mut a = 0.25 - xmu * xmu;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    converged = false;
    for i in 2..MAX_ITER {
        a += 2.0 * (i - 1) as f64;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < TINY {
            dr = TINY;
        }
        fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < TINY {
            cr = TINY;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(not_converged());
    }
    let gam = (p - f) / q;
    let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
    Ok(rjl1 * (rjmu / rjl))
}

/// Modified Bessel function of the second kind K_ν(x), x > 0.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    Ok(bessel_k_scaled(nu, x)? * (-x).exp())
}

/// eˣ·K_ν(x), finite for large x where K_ν itself underflows.
///
/// Half-integer orders come from K_{1/2} and upward recurrence; all other
/// orders from the integral ∫₀^∞ e^{-x cosh t} cosh(νt) dt.
pub fn bessel_k_scaled(nu: f64, x: f64) -> Result<f64> {
    check_k_args(nu, x)?;
    let nu = nu.abs();
    let twice = 2.0 * nu;
    if twice == twice.round() && twice % 2.0 == 1.0 && nu < 60.0 {
        let mut k_lo = (FRAC_PI_2 / x).sqrt();
        let mut k_hi = k_lo;
        let mut mu = 0.5;
        while mu < nu {
            let next = k_lo + 2.0 * mu / x * k_hi;
            k_lo = k_hi;
            k_hi = next;
            mu += 1.0;
        }
        return Ok(k_hi);
    }
    k_integral_scaled(nu, x)
}

/// K_ν(x) from its integral representation only, for any real order.
pub fn bessel_k_integral(nu: f64, x: f64) -> Result<f64> {
    check_k_args(nu, x)?;
    Ok(k_integral_scaled(nu.abs(), x)? * (-x).exp())
}

fn check_k_args(nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() {
        return Err(SpecFunError::Domain {
            function: "bessel_k",
            detail: format!("order {nu}"),
        });
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(SpecFunError::Domain {
            function: "bessel_k",
            detail: format!("argument {x} must be finite and > 0"),
        });
    }
    Ok(())
}

// Trapezoidal rule on the doubly-decaying integrand; the error falls like
// exp(-π²/h), far below f64 resolution for h = 0.1.
fn k_integral_scaled(nu: f64, x: f64) -> Result<f64> {
    const STEP: f64 = 0.1;
    let ln_cosh = |y: f64| y + (-2.0 * y).exp().ln_1p() - std::f64::consts::LN_2;
    let log_integrand = |t: f64| -2.0 * x * (0.5 * t).sinh().powi(2) + ln_cosh(nu * t);
    let t_peak = (nu / x).asinh();
    let mut sum = 0.5 * log_integrand(0.0).exp();
    for k in 1..MAX_ITER {
        let t = k as f64 * STEP;
        let term = log_integrand(t).exp();
        sum += term;
        if t > t_peak && term <= 1e-18 * sum {
            return Ok(STEP * sum);
        }
    }
    Err(SpecFunError::NotConverged {
        function: "bessel_k",
        terms: MAX_ITER,
    })
}

/// Positive zeros of J_ν in increasing order, for ν ≥ -1/2.
#[derive(Debug, Clone)]
pub struct BesselZeros {
    nu: f64,
    k: usize,
    last: f64,
}

impl BesselZeros {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < -0.5 {
            return Err(SpecFunError::Domain {
                function: "bessel_j_zero",
                detail: format!("order {nu} must be >= -1/2"),
            });
        }
        Ok(Self { nu, k: 0, last: 0.0 })
    }

    fn next_zero(&mut self) -> Result<f64> {
        let k = self.k + 1;
        let nu = self.nu;
        let zero = if nu == 0.5 {
            k as f64 * PI
        } else if nu == -0.5 {
            (k as f64 - 0.5) * PI
        } else {
            let j = |x: f64| bessel_j(nu, x);
            let lower = if k == 1 { nu.max(0.0) + 1.0 } else { self.last + 1.0 };
            let beta = (k as f64 + 0.5 * nu - 0.25) * PI;
            let mut bracket = None;
            if beta > 6.0 * (nu + 1.0) {
                let g = mcmahon(nu, beta);
                let (a, b) = (g - 0.3, g + 0.3);
                if a > lower && j(a)?.signum() != j(b)?.signum() {
                    bracket = Some((a, b));
                }
            }
            let (a, b) = match bracket {
                Some(ab) => ab,
                None => scan_for_sign_change(&j, lower)?,
            };
            brent(&j, a, b)?
        };
        self.k = k;
        self.last = zero;
        Ok(zero)
    }
}

impl Iterator for BesselZeros {
    type Item = Result<f64>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.next_zero())
    }
}

fn mcmahon(nu: f64, beta: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let b8 = 8.0 * beta;
    beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
}

fn scan_for_sign_change<F>(f: &F, start: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    const STEP: f64 = 0.5;
    let mut a = start;
    let mut fa = f(a)?;
    for _ in 0..100_000 {
        let b = a + STEP;
        let fb = f(b)?;
        if fa == 0.0 {
            return Ok((a, a));
        }
        if fa.signum() != fb.signum() {
            return Ok((a, b));
        }
        a = b;
        fa = fb;
    }
    Err(SpecFunError::NotConverged {
        function: "bessel_j_zero",
        terms: 100_000,
    })
}

/// Brent's root finder on a sign-changing bracket.
fn brent<F>(f: &F, a: f64, b: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(a);
    }
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..200 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs();
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(SpecFunError::NotConverged {
        function: "bessel_j_zero",
        terms: 200,
    })
}

/// k-th positive zero of J_ν (k ≥ 1), ν ≥ -1/2.
pub fn bessel_j_zero(nu: f64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(SpecFunError::Domain {
            function: "bessel_j_zero",
            detail: "zero index starts at 1".into(),
        });
    }
    let mut zeros = BesselZeros::new(nu)?;
    let mut z = 0.0;
    for _ in 0..k {
        z = zeros.next_zero()?;
    }
    Ok(z)
}

/// The first `count` positive zeros of J_ν.
pub fn bessel_j_zeros(nu: f64, count: usize) -> Result<Vec<f64>> {
    BesselZeros::new(nu)?.take(count).collect()
}
