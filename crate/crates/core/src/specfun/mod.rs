//! Special-function kernel: log-Gamma, modified Bessel functions of real
//! order, the confluent hypergeometric functions ₁F₁ and ₀F₁, and Jacobi
//! polynomials.
//!
//! Everything here is implemented from series, recurrences and continued
//! fractions in plain `f64` / `Complex64` arithmetic.  The test suite checks
//! the kernels against 50-digit reference tables.

mod bessel;
mod gamma;
mod hypergeometric;
mod jacobi;

pub use bessel::{bessel_i, bessel_i_scaled, bessel_ik_scaled, bessel_k, bessel_k_scaled, BesselIk};
pub use gamma::{log_gamma, log_pochhammer};
pub use hypergeometric::{hyp_0f1, hyp_1f1, SeriesResult};
pub use jacobi::jacobi_p;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecfunError {
    #[error("{function}: argument {value} outside the domain ({domain})")]
    Domain {
        function: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("{function}: lower parameter {value} is a non-positive integer (pole)")]
    Pole { function: &'static str, value: f64 },
    #[error("{function}: no convergence after {terms} terms (last relative term {last_ratio:e})")]
    NonConvergent {
        function: &'static str,
        terms: usize,
        last_ratio: f64,
    },
}

pub(crate) const EPS: f64 = f64::EPSILON;
