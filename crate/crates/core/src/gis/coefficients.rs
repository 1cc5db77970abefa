//! Unnormalized coefficient sequences in log-polar form.
//!
//! Every route produces tₙ with cₙ = c₀ tₙ e^{−iαeₙ}; writing
//! tₙ = dₙ/√f(n), the eigenvalue equation becomes
//!
//! ```text
//! d₀ = 1,  d₁ = p,  dₙ₊₁ = p dₙ + q eₙ dₙ₋₁,   p = 2z/(1+λ),  q = (λ−1)/(λ+1)
//! ```
//!
//! The sequences are stored as (ln|tₙ|, arg tₙ) so that neither f(n) nor the
//! transient growth of large-|z| states can overflow.

use super::delta::delta_table_exact;
use crate::exact::{Dyadic, ExactComplex};
use crate::spectrum::Spectrum;
use crate::{Error, Result};
use num_complex::Complex64;

/// Above this index the exact closed-form sum becomes too expensive.
pub const CLOSED_FORM_LIMIT: usize = 256;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LogSeq {
    pub log_abs: Vec<f64>,
    pub arg: Vec<f64>,
}

impl LogSeq {
    pub fn len(&self) -> usize {
        self.log_abs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_abs.is_empty()
    }

    pub(crate) fn push(&mut self, log_abs: f64, arg: f64) {
        self.log_abs.push(log_abs);
        self.arg.push(arg.rem_euclid(std::f64::consts::TAU));
    }

    pub fn truncate(&mut self, n: usize) {
        self.log_abs.truncate(n);
        self.arg.truncate(n);
    }

    /// ln Σ|tₙ|² over the stored range.
    pub fn log_norm_sqr(&self) -> f64 {
        log_sum_exp(self.log_abs.iter().map(|l| 2.0 * l))
    }
}

pub(crate) fn log_sum_exp(xs: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = xs.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// A sequential producer of (ln|tₙ|, arg tₙ) for n = 0, 1, 2, …
pub(crate) trait Generator {
    /// `None` once the spectrum runs out.
    fn next(&mut self) -> Option<Result<(f64, f64)>>;
}

pub(crate) type EnergyFn<'a> = Box<dyn Fn(usize) -> Option<f64> + 'a>;

pub(crate) fn energy_fn(s: &Spectrum) -> EnergyFn<'_> {
    Box::new(move |n| s.energy_or_formula(n))
}

/// tₙ = zⁿ/√f(n).
pub(crate) struct GkGen<'a> {
    e: EnergyFn<'a>,
    n: usize,
    ln_z: f64,
    arg_z: f64,
    log_f: f64,
}

impl<'a> GkGen<'a> {
    pub fn new(e: EnergyFn<'a>, z: Complex64) -> Self {
        GkGen {
            e,
            n: 0,
            ln_z: z.norm().ln(),
            arg_z: z.arg(),
            log_f: 0.0,
        }
    }
}

impl Generator for GkGen<'_> {
    fn next(&mut self) -> Option<Result<(f64, f64)>> {
        let n = self.n;
        if n > 0 {
            self.log_f += (self.e)(n)?.ln();
        }
        self.n += 1;
        if n == 0 {
            return Some(Ok((0.0, 0.0)));
        }
        let nf = n as f64;
        Some(Ok((nf * self.ln_z - 0.5 * self.log_f, nf * self.arg_z)))
    }
}

/// z = 0: t₂ₖ = qᵏ √(e₁e₃⋯e₂ₖ₋₁ / (e₂e₄⋯e₂ₖ)), odd terms zero.
pub(crate) struct EvenGen<'a> {
    e: EnergyFn<'a>,
    n: usize,
    ln_q: f64,
    arg_q: f64,
    half_log_ratio: f64,
}

impl<'a> EvenGen<'a> {
    pub fn new(e: EnergyFn<'a>, q: Complex64) -> Self {
        EvenGen {
            e,
            n: 0,
            ln_q: q.norm().ln(),
            arg_q: q.arg(),
            half_log_ratio: 0.0,
        }
    }
}

impl Generator for EvenGen<'_> {
    fn next(&mut self) -> Option<Result<(f64, f64)>> {
        let n = self.n;
        let en = if n > 0 { (self.e)(n)? } else { 0.0 };
        self.n += 1;
        if n == 0 {
            return Some(Ok((0.0, 0.0)));
        }
        if n % 2 == 1 {
            self.half_log_ratio += 0.5 * en.ln();
            return Some(Ok((f64::NEG_INFINITY, 0.0)));
        }
        self.half_log_ratio -= 0.5 * en.ln();
        let k = (n / 2) as f64;
        if self.ln_q == f64::NEG_INFINITY {
            return Some(Ok((f64::NEG_INFINITY, 0.0)));
        }
        Some(Ok((k * self.ln_q + self.half_log_ratio, k * self.arg_q)))
    }
}

/// Forward three-term recurrence
/// (1+λ)√eₙ₊₁ tₙ₊₁ = 2z tₙ − (1−λ)√eₙ tₙ₋₁ with a shared running scale.
pub(crate) struct RecurrenceGen<'a> {
    e: EnergyFn<'a>,
    n: usize,
    lambda: Complex64,
    z: Complex64,
    prev: Complex64,
    cur: Complex64,
    log_scale: f64,
}

impl<'a> RecurrenceGen<'a> {
    pub fn new(e: EnergyFn<'a>, lambda: Complex64, z: Complex64) -> Self {
        RecurrenceGen {
            e,
            n: 0,
            lambda,
            z,
            prev: Complex64::new(0.0, 0.0),
            cur: Complex64::new(1.0, 0.0),
            log_scale: 0.0,
        }
    }
}

const RESCALE_HIGH: f64 = 1e150;
const RESCALE_LOW: f64 = 1e-150;

impl Generator for RecurrenceGen<'_> {
    fn next(&mut self) -> Option<Result<(f64, f64)>> {
        let n = self.n;
        if n == 0 {
            self.n = 1;
            return Some(Ok((0.0, 0.0)));
        }
        // produce tₙ from tₙ₋₁ = cur, tₙ₋₂ = prev
        let m = n - 1;
        let em1 = (self.e)(n)?;
        let em = if m == 0 { 0.0 } else { (self.e)(m)? };
        let next = (2.0 * self.z * self.cur - (1.0 - self.lambda) * em.sqrt() * self.prev)
            / ((1.0 + self.lambda) * em1.sqrt());
        self.prev = self.cur;
        self.cur = next;
        self.n += 1;
        let big = self.cur.norm().max(self.prev.norm());
        if big > RESCALE_HIGH || (big < RESCALE_LOW && big > 0.0) {
            let k = big.ln().round();
            let f = (-k).exp();
            self.cur *= f;
            self.prev *= f;
            self.log_scale += k;
        }
        let a = self.cur.norm();
        if !a.is_finite() {
            return Some(Err(Error::SustainedGrowth {
                growth_rate: f64::INFINITY,
                window: 1,
                n,
            }));
        }
        Some(Ok((a.ln() + self.log_scale, self.cur.arg())))
    }
}

/// tₙ = A₁⋯Aₙ / √f(n) with A₁ = p and Aₙ₊₁ = p + q eₙ/Aₙ.
pub(crate) struct ContinuedFractionGen<'a> {
    e: EnergyFn<'a>,
    n: usize,
    p: Complex64,
    q: Complex64,
    a: Complex64,
    log_prod: f64,
    arg_prod: f64,
    log_f: f64,
}

impl<'a> ContinuedFractionGen<'a> {
    pub fn new(e: EnergyFn<'a>, p: Complex64, q: Complex64) -> Self {
        ContinuedFractionGen {
            e,
            n: 0,
            p,
            q,
            a: Complex64::new(0.0, 0.0),
            log_prod: 0.0,
            arg_prod: 0.0,
            log_f: 0.0,
        }
    }
}

impl Generator for ContinuedFractionGen<'_> {
    fn next(&mut self) -> Option<Result<(f64, f64)>> {
        let n = self.n;
        if n == 0 {
            self.n = 1;
            return Some(Ok((0.0, 0.0)));
        }
        let en = (self.e)(n)?;
        self.a = if n == 1 {
            self.p
        } else {
            self.p + self.q * (self.e)(n - 1)? / self.a
        };
        self.n += 1;
        if self.a == Complex64::new(0.0, 0.0) {
            return Some(Err(Error::ContinuedFractionNode { n }));
        }
        self.log_prod += self.a.norm().ln();
        self.arg_prod = (self.arg_prod + self.a.arg()).rem_euclid(std::f64::consts::TAU);
        self.log_f += en.ln();
        Some(Ok((self.log_prod - 0.5 * self.log_f, self.arg_prod)))
    }
}

/// Runs a generator for `count` terms.
pub(crate) fn collect(g: &mut dyn Generator, count: usize) -> Result<LogSeq> {
    let mut out = LogSeq::default();
    for n in 0..count {
        match g.next() {
            Some(r) => {
                let (l, a) = r?;
                out.push(l, a);
            }
            None => {
                return Err(Error::IndexOutOfRange {
                    n,
                    max: n.saturating_sub(1),
                })
            }
        }
    }
    Ok(out)
}

/// Closed combinatorial form dₙ = Σₕ p^{n−2h} qʰ Δ(n, h), evaluated exactly.
pub(crate) fn closed_form(s: &Spectrum, p: Complex64, q: Complex64, count: usize) -> Result<LogSeq> {
    if count > CLOSED_FORM_LIMIT + 1 {
        return Err(Error::Unsupported(format!(
            "closed form limited to n ≤ {CLOSED_FORM_LIMIT} (requested {})",
            count - 1
        )));
    }
    let n_max = count.saturating_sub(1);
    let delta = delta_table_exact(s, n_max)?;
    let pe = ExactComplex::from_complex(p);
    let qe = ExactComplex::from_complex(q);
    let mut p_pow = vec![ExactComplex::one()];
    let mut q_pow = vec![ExactComplex::one()];
    for k in 1..=n_max {
        p_pow.push(&p_pow[k - 1] * &pe);
    }
    for k in 1..=n_max / 2 {
        q_pow.push(&q_pow[k - 1] * &qe);
    }
    let mut out = LogSeq::default();
    for n in 0..count {
        let mut d = ExactComplex::zero();
        for h in 0..=n / 2 {
            let w: &Dyadic = &delta[n][h];
            let term = (&p_pow[n - 2 * h] * &q_pow[h]).scale(w);
            d = &d + &term;
        }
        let (ln_d, arg) = d.ln_polar();
        out.push(ln_d - 0.5 * s.log_f(n), arg);
    }
    Ok(out)
}
