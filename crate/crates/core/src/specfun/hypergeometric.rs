//! Confluent hypergeometric series ₁F₁(a; b; x) and ₀F₁(; b; x).

use super::{SpecfunError, EPS};
use num_complex::Complex64;

const MAX_TERMS: usize = 20_000;
const KUMMER_SWITCH: f64 = 40.0;

/// A summed series together with its accuracy bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: Complex64,
    pub terms_used: usize,
    /// Relative error bound: geometric bound on the neglected tail plus a
    /// rounding term proportional to Σ|tₖ| / |Σ tₖ|.
    pub truncation_estimate: f64,
}

fn is_pole(b: Complex64) -> bool {
    b.im == 0.0 && b.re <= 0.0 && b.re == b.re.round()
}

/// Sums Σ tₖ where t₀ = 1 and t_{k+1} = tₖ · ratio(k).
fn sum_series<F>(function: &'static str, mut ratio: F) -> Result<SeriesResult, SpecfunError>
where
    F: FnMut(usize) -> Complex64,
{
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut abs_sum = 1.0;
    let mut k = 0;
    loop {
        let r = ratio(k);
        term *= r;
        k += 1;
        if term == Complex64::new(0.0, 0.0) {
            // terminating series
            let cond = abs_sum / sum.norm().max(f64::MIN_POSITIVE);
            return Ok(SeriesResult {
                value: sum,
                terms_used: k,
                truncation_estimate: (k as f64 + 1.0) * EPS * cond,
            });
        }
        sum += term;
        abs_sum += term.norm();
        let rnorm = r.norm();
        // once the term ratio is below 1/2 the neglected tail is bounded by
        // |t| · ρ/(1 − ρ) with ρ the (decreasing) ratio bound
        if rnorm < 0.5 && term.norm() < EPS * 1e-2 * sum.norm() {
            let next = ratio(k).norm();
            let rho = next.max(rnorm).min(0.5);
            let tail = term.norm() * rho / (1.0 - rho) / sum.norm();
            let cond = abs_sum / sum.norm();
            return Ok(SeriesResult {
                value: sum,
                terms_used: k + 1,
                truncation_estimate: tail + (k as f64 + 1.0) * EPS * cond,
            });
        }
        if k >= MAX_TERMS || !sum.norm().is_finite() {
            return Err(SpecfunError::NonConvergent {
                function,
                terms: k,
                last_ratio: term.norm() / sum.norm(),
            });
        }
    }
}

fn kummer_series(a: Complex64, b: Complex64, x: Complex64) -> Result<SeriesResult, SpecfunError> {
    sum_series("hyp_1f1", |k| {
        let kf = k as f64;
        (a + kf) / (b + kf) * x / (kf + 1.0)
    })
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; x).
///
/// For |x| > 40 the transformed form e^x ₁F₁(b − a; b; −x) is also summed and
/// whichever has the smaller error estimate is returned.
pub fn hyp_1f1(a: Complex64, b: Complex64, x: Complex64) -> Result<SeriesResult, SpecfunError> {
    if is_pole(b) {
        return Err(SpecfunError::Pole {
            function: "hyp_1f1",
            value: b.re,
        });
    }
    let direct = kummer_series(a, b, x);
    if x.norm() <= KUMMER_SWITCH {
        return direct;
    }
    let transformed = kummer_series(b - a, b, -x).map(|r| SeriesResult {
        value: r.value * x.exp(),
        terms_used: r.terms_used,
        truncation_estimate: r.truncation_estimate + 4.0 * EPS * x.norm(),
    });
    match (direct, transformed) {
        (Ok(d), Ok(t)) => Ok(if t.truncation_estimate < d.truncation_estimate {
            t
        } else {
            d
        }),
        (Ok(d), Err(_)) => Ok(d),
        (Err(_), Ok(t)) => Ok(t),
        (Err(e), Err(_)) => Err(e),
    }
}

/// The confluent limit function ₀F₁(; b; x) = Σ xⁿ / ((b)ₙ n!).
pub fn hyp_0f1(b: Complex64, x: Complex64) -> Result<SeriesResult, SpecfunError> {
    if is_pole(b) {
        return Err(SpecfunError::Pole {
            function: "hyp_0f1",
            value: b.re,
        });
    }
    sum_series("hyp_0f1", |k| {
        let kf = k as f64;
        x / ((b + kf) * (kf + 1.0))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_i, log_gamma};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_argument_is_one() {
        let r = hyp_1f1(c(2.5, -1.0), c(3.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(r.value, c(1.0, 0.0));
        let r = hyp_0f1(c(4.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(r.value, c(1.0, 0.0));
    }

    #[test]
    fn equal_parameters_give_exponential() {
        for &x in &[c(0.3, 0.0), c(-2.0, 1.5), c(7.0, -3.0), c(-45.0, 2.0), c(50.0, 0.0)] {
            for &a in &[c(1.0, 0.0), c(2.5, 0.7)] {
                let r = hyp_1f1(a, a, x).unwrap();
                let rel = (r.value - x.exp()).norm() / x.exp().norm();
                assert!(rel < 1e-13, "x = {x}: rel {rel}");
            }
        }
    }

    #[test]
    fn terminating_series_is_a_polynomial() {
        // ₁F₁(−2; b; x) = 1 − 2x/b + x²/(b(b+1))
        let b = 3.0;
        let x = 1.7;
        let expected = 1.0 - 2.0 * x / b + x * x / (b * (b + 1.0));
        let r = hyp_1f1(c(-2.0, 0.0), c(b, 0.0), c(x, 0.0)).unwrap();
        assert!((r.value.re - expected).abs() < 1e-15);
        assert_eq!(r.terms_used, 3);
    }

    #[test]
    fn bessel_cross_check() {
        for &nu in &[0.0, 1.5, 3.0, 6.0] {
            for &r in &[0.1, 1.0, 4.0] {
                let f = hyp_0f1(c(nu + 1.0, 0.0), c(r * r, 0.0)).unwrap().value.re;
                let via_i = (log_gamma(nu + 1.0).unwrap() - nu * f64::ln(r)).exp() * bessel_i(nu, 2.0 * r).unwrap();
                assert!((f - via_i).abs() < 1e-13 * f, "nu = {nu}, r = {r}");
            }
        }
    }

    #[test]
    fn poles_are_rejected() {
        assert!(hyp_1f1(c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(hyp_0f1(c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }
}
