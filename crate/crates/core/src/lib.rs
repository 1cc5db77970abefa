//! Generalized intelligent states (coherent and squeezed states that saturate
//! the Robertson–Schrödinger uncertainty relation) for quantum systems with a
//! non-degenerate discrete spectrum.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: log-Gamma, modified Bessel functions, ₁F₁ / ₀F₁, Jacobi
//!   polynomials.
//! * [`spectrum`]: validated energy sequences eₙ and the running products
//!   f(n) = e₁⋯eₙ.
//! * [`operators`]: ladder operators with the phase parameter α, the
//!   quadratures W and P, and the uncertainty report.
//! * [`gis`]: solutions of `[(1−λ)a⁺ + (1+λ)a⁻]Ψ = 2zΨ` by three independent
//!   routes (recurrence, continued fraction, closed combinatorial sum).
//! * [`measure`]: the moment problem behind the resolution of unity.
//! * [`bargmann`]: the holomorphic representation and the Kummer-function
//!   construction for Pöschl–Teller systems.
//! * [`poschl_teller`]: potential, superpotential, wavefunctions and closed
//!   forms specific to the Pöschl–Teller family.

// reference constants carry every published digit; `!(x > 0.0)` is how NaN is rejected
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod bargmann;
pub mod exact;
pub mod export;
pub mod gis;
pub mod measure;
pub mod operators;
pub mod poschl_teller;
pub mod quadrature;
pub mod specfun;
pub mod spectrum;

pub use num_complex::Complex64;

pub use gis::{Classification, CoefficientSet, GisParams, Route, Truncation};
pub use operators::{FockState, UncertaintyReport};
pub use spectrum::{FactorialMoment, Radius, Spectrum, SpectrumKind};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name}: {detail}")]
    InvalidParameter { name: &'static str, detail: String },
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("index {n} exceeds the stored spectrum (max index {max})")]
    IndexOutOfRange { n: usize, max: usize },
    #[error("state of length {trunc} does not fit a spectrum with max index {max}")]
    TruncationMismatch { trunc: usize, max: usize },
    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("λ = −1 admits only the zero vector (all coefficients vanish); the state cannot be normalized")]
    LambdaMinusOne,
    #[error("coefficients grow without bound (mean growth of ln|cₙ|² per step {growth_rate:.3e} over the last {window} indices up to n = {n})")]
    SustainedGrowth { growth_rate: f64, window: usize, n: usize },
    #[error("coefficients did not decay within the truncation cap {cap} (estimated tail mass {tail_mass:.3e})")]
    TruncationCap { cap: usize, tail_mass: f64 },
    #[error("truncation {trunc} leaves tail mass {tail_mass:.3e} above the target {target:.0e}")]
    TruncationInsufficient { trunc: usize, tail_mass: f64, target: f64 },
    #[error("|z|² = {z_abs_sqr} lies outside the convergence disk (R = {radius})")]
    OutsideConvergenceDisk { z_abs_sqr: f64, radius: f64 },
    #[error("continued fraction hit a node: A_{n} = 0")]
    ContinuedFractionNode { n: usize },
    #[error("Re λ = {re_lambda} ≤ 0: the commutator positivity condition fails")]
    NonPositiveReLambda { re_lambda: f64 },
    #[error("quadrature did not converge on [{a}, {b}] (estimated error {error:.3e})")]
    Quadrature { a: f64, b: f64, error: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Specfun(#[from] specfun::SpecfunError),
}

impl Error {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        use specfun::SpecfunError as S;
        match self {
            Error::InvalidParameter { .. } => "INVALID_PARAMETER",
            Error::InvalidSpectrum(_) => "INVALID_SPECTRUM",
            Error::IndexOutOfRange { .. } => "INDEX_OUT_OF_RANGE",
            Error::TruncationMismatch { .. } => "TRUNCATION_MISMATCH",
            Error::NotNormalized { .. } => "NOT_NORMALIZED",
            Error::LambdaMinusOne => "NON_NORMALIZABLE_LAMBDA_MINUS_ONE",
            Error::SustainedGrowth { .. } => "NON_NORMALIZABLE_GROWTH",
            Error::TruncationCap { .. } => "TRUNCATION_CAP",
            Error::TruncationInsufficient { .. } => "TRUNCATION_INSUFFICIENT",
            Error::OutsideConvergenceDisk { .. } => "OUTSIDE_CONVERGENCE_DISK",
            Error::ContinuedFractionNode { .. } => "CONTINUED_FRACTION_NODE",
            Error::NonPositiveReLambda { .. } => "NON_POSITIVE_RE_LAMBDA",
            Error::Quadrature { .. } => "QUADRATURE_NONCONVERGENT",
            Error::Unsupported(_) => "UNSUPPORTED",
            Error::Specfun(S::Domain { .. }) => "SPECFUN_DOMAIN",
            Error::Specfun(S::Pole { .. }) => "SPECFUN_POLE",
            Error::Specfun(S::NonConvergent { .. }) => "SPECFUN_NONCONVERGENT",
        }
    }

    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        !matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::InvalidSpectrum(_)
                | Error::IndexOutOfRange { .. }
                | Error::TruncationMismatch { .. }
                | Error::Unsupported(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, detail: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        detail: detail.into(),
    }
}
