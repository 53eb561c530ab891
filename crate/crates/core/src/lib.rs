//! Characteristic functions of multivariate elliptical, skew-elliptical and
//! mixture distributions.
//!
//! Every characteristic function can be reached by up to three independent
//! routes:
//!
//! * closed forms built from Bessel and hypergeometric functions
//!   ([`elliptical::phi_closed`]),
//! * one-dimensional Hankel-type quadrature of the density generator
//!   ([`quadrature::phi_hankel`]), valid for any generator,
//! * Monte-Carlo empirical characteristic functions of samples drawn from
//!   the stochastic representation ([`sampling`]).
//!
//! The routes are independent enough to cross-check each other.

pub mod elliptical;
pub mod quadrature;
pub mod sampling;
pub mod skewmix;
pub mod specfun;
