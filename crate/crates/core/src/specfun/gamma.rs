use std::f64::consts::PI;

use super::{is_nonpositive_integer, Result, SpecFunError};

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Largest argument for which Γ(x) is finite in f64.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn lanczos_sum(z: f64) -> f64 {
    LANCZOS
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (z + i as f64))
}

/// sin(πx) with exact argument reduction.
pub(crate) fn sin_pi(x: f64) -> f64 {
    let mut r = x % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r <= -1.0 {
        r += 2.0;
    }
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

/// Γ(x) for real x away from the poles.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(SpecFunError::Domain {
            function: "gamma_fn",
            detail: format!("x = {x}"),
        });
    }
    if is_nonpositive_integer(x) {
        return Err(SpecFunError::Pole {
            function: "gamma_fn",
            at: x,
        });
    }
    if x < 0.5 {
        let s = sin_pi(x);
        let g = gamma_fn(1.0 - x);
        return match g {
            Ok(g) => Ok(PI / (s * g)),
            // Γ(1 - x) overflowing means Γ(x) underflows.
            Err(SpecFunError::Overflow { .. }) => Ok(0.0),
            Err(e) => Err(e),
        };
    }
    if x > GAMMA_MAX_ARG {
        return Err(SpecFunError::Overflow { function: "gamma_fn" });
    }
    if x == x.round() {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    let p = t.powf(0.5 * (z + 0.5));
    Ok(SQRT_2PI * (p * (-t).exp()) * p * lanczos_sum(z))
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(SpecFunError::Domain {
            function: "ln_gamma",
            detail: format!("x = {x}"),
        });
    }
    if is_nonpositive_integer(x) {
        return Err(SpecFunError::Pole {
            function: "ln_gamma",
            at: x,
        });
    }
    if x < 0.5 {
        return Ok((PI / sin_pi(x).abs()).ln() - ln_gamma(1.0 - x)?);
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}
