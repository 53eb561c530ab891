use super::bessel::bessel_j;
use super::gamma::ln_gamma;
use super::{is_nonpositive_integer, Result, SeriesControl, SpecFunError, SpecialValue};

/// Arguments below this use the Bessel-J identity for ₀F₁ instead of the
/// alternating series, which cancels badly for large |z|.
const HYP0F1_SERIES_FLOOR: f64 = -16.0;

/// ₀F₁(;γ;z) = Σ zᵏ/((γ)ₖ k!).
pub fn hyp0f1(gamma: f64, z: f64) -> Result<f64> {
    hyp0f1_with(gamma, z, &SeriesControl::default())?.into_result("hyp0f1")
}

pub fn hyp0f1_with(gamma: f64, z: f64, ctl: &SeriesControl) -> Result<SpecialValue<f64>> {
    if !gamma.is_finite() || !z.is_finite() {
        return Err(SpecFunError::Domain {
            function: "hyp0f1",
            detail: format!("gamma = {gamma}, z = {z}"),
        });
    }
    if is_nonpositive_integer(gamma) {
        return Err(SpecFunError::Pole {
            function: "hyp0f1",
            at: gamma,
        });
    }
    if z < HYP0F1_SERIES_FLOOR && gamma > 0.0 {
        // ₀F₁(b+1; -x²/4) = Γ(b+1) (x/2)^{-b} J_b(x)
        let b = gamma - 1.0;
        let x = 2.0 * (-z).sqrt();
        let j = bessel_j(b, x)?;
        let scale = (ln_gamma(gamma)? - b * (0.5 * x).ln()).exp();
        return Ok(SpecialValue {
            value: scale * j,
            terms_used: 1,
            converged: true,
        });
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=ctl.max_terms {
        let kf = k as f64;
        let denom = (gamma + kf - 1.0) * kf;
        term *= z / denom;
        sum += term;
        let decreasing = z.abs() < 0.5 * ((gamma + kf) * (kf + 1.0)).abs();
        if term == 0.0 || (term.abs() <= ctl.rel_tol * sum.abs() && decreasing) {
            return Ok(SpecialValue {
                value: sum,
                terms_used: k + 1,
                converged: true,
            });
        }
    }
    Ok(SpecialValue {
        value: sum,
        terms_used: ctl.max_terms,
        converged: false,
    })
}

/// Kummer's function ₁F₁(α;γ;z).
pub fn hyp1f1(alpha: f64, gamma: f64, z: f64) -> Result<f64> {
    hyp1f1_with(alpha, gamma, z, &SeriesControl::default())?.into_result("hyp1f1")
}

/// ₁F₁ with explicit truncation control. Negative arguments below -1 go
/// through ₁F₁(α;γ;z) = eᶻ ₁F₁(γ-α;γ;-z), whose series has no cancellation
/// once its terms turn positive.
pub fn hyp1f1_with(alpha: f64, gamma: f64, z: f64, ctl: &SeriesControl) -> Result<SpecialValue<f64>> {
    if !alpha.is_finite() || !gamma.is_finite() || !z.is_finite() {
        return Err(SpecFunError::Domain {
            function: "hyp1f1",
            detail: format!("alpha = {alpha}, gamma = {gamma}, z = {z}"),
        });
    }
    if is_nonpositive_integer(gamma) {
        return Err(SpecFunError::Pole {
            function: "hyp1f1",
            at: gamma,
        });
    }
    if z < -1.0 && !is_nonpositive_integer(alpha) {
        let inner = kummer_series(gamma - alpha, gamma, -z, ctl);
        return Ok(SpecialValue {
            value: z.exp() * inner.value,
            ..inner
        });
    }
    Ok(kummer_series(alpha, gamma, z, ctl))
}

fn kummer_series(alpha: f64, gamma: f64, z: f64, ctl: &SeriesControl) -> SpecialValue<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=ctl.max_terms {
        let kf = k as f64;
        term *= (alpha + kf - 1.0) * z / ((gamma + kf - 1.0) * kf);
        sum += term;
        let ratio = ((alpha + kf) * z / ((gamma + kf) * (kf + 1.0))).abs();
        if term == 0.0 || (term.abs() <= ctl.rel_tol * sum.abs() && ratio < 0.5) {
            return SpecialValue {
                value: sum,
                terms_used: k + 1,
                converged: true,
            };
        }
    }
    SpecialValue {
        value: sum,
        terms_used: ctl.max_terms,
        converged: false,
    }
}
