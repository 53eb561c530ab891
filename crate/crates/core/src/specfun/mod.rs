//! Real-order special functions: gamma, Bessel J and K, the confluent
//! hypergeometric series ₀F₁ and ₁F₁, and the normal CDF on the imaginary
//! axis.
//!
//! All functions are pure. Series evaluations are truncated under a
//! [`SeriesControl`] and report how many terms they used.

mod bessel;
mod dawson;
mod gamma;
mod hyper;

pub use bessel::{bessel_j, bessel_j_zero, bessel_j_zeros, bessel_k, bessel_k_integral, bessel_k_scaled, BesselZeros};
pub use dawson::{dawson, erfi, phi_imag, ImagNormalCdf};
pub use gamma::{gamma_fn, ln_gamma};
pub use hyper::{hyp0f1, hyp0f1_with, hyp1f1, hyp1f1_with};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("{function}: argument outside domain ({detail})")]
    Domain { function: &'static str, detail: String },
    #[error("{function}: pole at {at}")]
    Pole { function: &'static str, at: f64 },
    #[error("{function}: no convergence after {terms} terms")]
    NotConverged { function: &'static str, terms: usize },
    #[error("{function}: result overflows f64")]
    Overflow { function: &'static str },
}

pub type Result<T> = std::result::Result<T, SpecFunError>;

/// Truncation policy for power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-14,
            max_terms: 500,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || max_terms < 1 {
            return Err(SpecFunError::Domain {
                function: "SeriesControl",
                detail: format!("rel_tol = {rel_tol}, max_terms = {max_terms}"),
            });
        }
        Ok(Self { rel_tol, max_terms })
    }
}

/// A series value together with its truncation record.
///
/// When `converged` is false the value must not be used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue<T> {
    pub value: T,
    pub terms_used: usize,
    pub converged: bool,
}

impl<T> SpecialValue<T> {
    pub fn into_result(self, function: &'static str) -> Result<T> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(SpecFunError::NotConverged {
                function,
                terms: self.terms_used,
            })
        }
    }
}

/// `true` when `x` is 0, -1, -2, ...
pub(crate) fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}
