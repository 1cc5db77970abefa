//! Harmonic-oscillator reference: the state
//! c₀ exp[q (a⁺)²/2] exp[p a⁺] |0⟩ with eₙ = n, expanded directly.
//!
//! In the unnormalized monomial basis |n) = (a⁺)ⁿ|0⟩ = √n! |n⟩ both
//! exponentials act without square roots.  Carrying vₙ = n!·(coefficient of
//! |n)) keeps every weight an integer:
//!
//! ```text
//! exp[p a⁺]|0⟩:         vₘ = pᵐ
//! exp[q (a⁺)²/2]:       wₙ = Σₖ C(n, 2k) (2k−1)!! qᵏ vₙ₋₂ₖ
//! ⟨n|Ψ⟩ ∝ wₙ / √n!
//! ```
//!
//! and the sums are evaluated in exact dyadic arithmetic.

use super::coefficients::LogSeq;
use crate::exact::{Dyadic, ExactComplex};
use crate::operators::FockState;
use crate::specfun::log_gamma;
use crate::{invalid, Result};
use num_bigint::BigInt;
use num_complex::Complex64;

pub(crate) fn expansion(p: Complex64, q: Complex64, count: usize) -> Result<LogSeq> {
    if count > super::coefficients::CLOSED_FORM_LIMIT + 1 {
        return Err(crate::Error::Unsupported(format!(
            "operator expansion limited to n ≤ {}",
            super::coefficients::CLOSED_FORM_LIMIT
        )));
    }
    let pe = ExactComplex::from_complex(p);
    let qe = ExactComplex::from_complex(q);
    let mut v = vec![ExactComplex::one()];
    for m in 1..count {
        v.push(&v[m - 1] * &pe);
    }
    let mut q_pow = vec![ExactComplex::one()];
    for k in 1..=count / 2 {
        q_pow.push(&q_pow[k - 1] * &qe);
    }
    let mut out = LogSeq::default();
    for n in 0..count {
        let mut w = ExactComplex::zero();
        // C(n, 2k)(2k−1)!! built incrementally in k
        let mut weight = BigInt::from(1);
        for k in 0..=n / 2 {
            if k > 0 {
                let (a, b) = ((n - 2 * k + 2) as u64, (n - 2 * k + 1) as u64);
                // C(n,2k)/C(n,2k−2) = (n−2k+2)(n−2k+1)/((2k)(2k−1)), times (2k−1)
                weight = weight * a * b / (2 * k as u64);
            }
            let term = (&q_pow[k] * &v[n - 2 * k]).scale(&Dyadic::from_bigint(weight.clone()));
            w = &w + &term;
        }
        let (ln_w, arg) = w.ln_polar();
        out.push(ln_w - 0.5 * log_gamma(n as f64 + 1.0)?, arg);
    }
    Ok(out)
}

/// The normalized expansion truncated to `trunc` levels (α = 0).
pub fn harmonic_squeezed_check(z: Complex64, lambda: Complex64, trunc: usize) -> Result<FockState> {
    if !(lambda.re > 0.0) {
        return Err(crate::Error::NonPositiveReLambda { re_lambda: lambda.re });
    }
    if trunc == 0 {
        return Err(invalid("trunc", "must be positive"));
    }
    let q = (lambda - 1.0) / (lambda + 1.0);
    if q.norm() >= 1.0 {
        return Err(invalid("lambda", "the squeeze factor |(λ−1)/(λ+1)| must be < 1"));
    }
    let p = 2.0 * z / (1.0 + lambda);
    let seq = expansion(p, q, trunc)?;
    let log_norm = seq.log_norm_sqr();
    let coefficients = (0..trunc)
        .map(|n| Complex64::from_polar((seq.log_abs[n] - 0.5 * log_norm).exp(), seq.arg[n]))
        .collect();
    Ok(FockState::new(coefficients, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_weights() {
        // n = 4: k = 0, 1, 2 → 1, C(4,2)·1 = 6, C(4,4)·3 = 3
        let seq = expansion(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), 5).unwrap();
        let w4 = (seq.log_abs[4] + 0.5 * 24f64.ln()).exp();
        assert!((w4 - 10.0).abs() < 1e-12);
    }

    #[test]
    fn squeezed_vacuum_two_term_recursion() {
        // z = 0: c₂ₖ₊₂/c₂ₖ = q √((2k+1)/(2k+2))
        let lambda = Complex64::new(3.0, 0.0);
        let q = 0.5;
        let psi = harmonic_squeezed_check(Complex64::new(0.0, 0.0), lambda, 40).unwrap();
        for k in 0..19 {
            let ratio = psi.coefficients[2 * k + 2] / psi.coefficients[2 * k];
            let want = q * ((2 * k + 1) as f64 / (2 * k + 2) as f64).sqrt();
            assert!((ratio.re - want).abs() < 1e-13 && ratio.im.abs() < 1e-13);
            assert_eq!(psi.coefficients[2 * k + 1], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn coherent_limit() {
        let z = Complex64::new(0.7, 0.4);
        let psi = harmonic_squeezed_check(z, Complex64::new(1.0, 0.0), 40).unwrap();
        let mut want = Complex64::new((-z.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..40 {
            assert!((psi.coefficients[n] - want).norm() < 1e-14);
            want *= z / ((n + 1) as f64).sqrt();
        }
    }
}
