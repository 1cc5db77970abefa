//! Holomorphic (Fock–Bargmann) representation.
//!
//! A state Σ hₙ|ψₙ⟩ is represented by h(z) = Σ hₙ e^{iαeₙ} zⁿ/√f(n).  In the
//! monomial basis a⁺ is multiplication by z and a⁻ acts as
//! (a⁻h)ₙ = eₙ₊₁ hₙ₊₁, which for eₙ = n(n+υ) is z d²/dz² + (υ+1) d/dz.
//!
//! For Pöschl–Teller spectra the eigenvalue equation becomes a Kummer
//! equation, solved by Φ(z) = e^{cz} ₁F₁(a; υ+1; −2cz) with
//! c = √((λ−1)/(λ+1)) and a = (υ+1)/2 − z′/((λ+1)c).

use crate::exact::{Dyadic, ExactComplex};
use crate::operators::FockState;
use crate::specfun::{hyp_0f1, hyp_1f1, log_gamma, log_pochhammer};
use crate::spectrum::Spectrum;
use crate::{invalid, Error, Result};
use num_bigint::BigInt;
use num_complex::Complex64;
use std::sync::Arc;

/// Below this |λ − 1| the ₀F₁ form replaces the Kummer parametrisation.
pub const LAMBDA_ONE_TOLERANCE: f64 = 1e-8;
/// Taylor coefficients computed for the Pöschl–Teller analytic states.
pub const DEFAULT_TERMS: usize = 96;

pub type Evaluator = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

#[derive(Clone)]
pub struct AnalyticState {
    /// Taylor coefficients at z = 0.
    pub series: Vec<Complex64>,
    /// Radius of convergence in the z-plane.
    pub domain_radius: f64,
    closed_form: Option<Evaluator>,
}

impl std::fmt::Debug for AnalyticState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticState")
            .field("series", &self.series)
            .field("domain_radius", &self.domain_radius)
            .field("closed_form", &self.closed_form.is_some())
            .finish()
    }
}

impl AnalyticState {
    pub fn from_series(series: Vec<Complex64>, domain_radius: f64) -> Self {
        AnalyticState {
            series,
            domain_radius,
            closed_form: None,
        }
    }

    pub fn has_closed_form(&self) -> bool {
        self.closed_form.is_some()
    }

    /// The closed form when one is attached, otherwise the truncated series.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        match &self.closed_form {
            Some(f) => f(z),
            None => Ok(self.evaluate_series(z)),
        }
    }

    pub fn evaluate_series(&self, z: Complex64) -> Complex64 {
        self.series
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// (h, h′, h″) at z from the series.
    pub fn derivatives(&self, z: Complex64) -> [Complex64; 3] {
        let zero = Complex64::new(0.0, 0.0);
        let (mut f, mut d1, mut d2) = (zero, zero, zero);
        for (n, c) in self.series.iter().enumerate().rev() {
            let nf = n as f64;
            f = f * z + c;
            if n >= 1 {
                d1 = d1 * z + c * nf;
            }
            if n >= 2 {
                d2 = d2 * z + c * nf * (nf - 1.0);
            }
        }
        [f, d1, d2]
    }

    /// Bound on the omitted part of the series at |z| from the last few
    /// terms, assuming at least geometric decay.
    pub fn truncation_bound(&self, r: f64) -> f64 {
        let n = self.series.len();
        if n < 4 {
            return f64::INFINITY;
        }
        let t = |k: usize| self.series[k].norm() * r.powi(k as i32);
        let last = t(n - 1).max(t(n - 2));
        let prev = t(n - 3).max(t(n - 4));
        if prev == 0.0 {
            return last;
        }
        let rho = (last / prev).sqrt();
        if rho >= 1.0 {
            f64::INFINITY
        } else {
            last * rho / (1.0 - rho) + 64.0 * f64::EPSILON * (0..n).map(t).sum::<f64>()
        }
    }
}

fn domain_radius(s: &Spectrum) -> f64 {
    // Σ |z|^{2n}/f(n) converges for |z|² < R
    s.radius_of_convergence().value().sqrt()
}

/// hₙ ↦ hₙ e^{iαeₙ}/√f(n).  Linear, so unnormalized inputs are accepted.
pub fn bargmann_transform(state: &FockState, s: &Spectrum) -> Result<AnalyticState> {
    if state.trunc() == 0 || state.trunc() > s.max_index() + 1 {
        return Err(Error::TruncationMismatch {
            trunc: state.trunc(),
            max: s.max_index(),
        });
    }
    let e = s.energies();
    let series = state
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar((-0.5 * s.log_f(n)).exp(), state.alpha * e[n]))
        .collect();
    Ok(AnalyticState::from_series(series, domain_radius(s)))
}

/// Σ h̄ₙ e^{−iαeₙ} zⁿ/√f(n) · (coefficients of `state`): the overlap of
/// `state` with the unnormalized coherent state Σ zⁿe^{−iαeₙ}/√f(n) |ψₙ⟩.
pub fn coherent_overlap_series(state: &FockState, s: &Spectrum, z: Complex64) -> Result<Complex64> {
    let t = bargmann_transform(state, s)?;
    let conj = AnalyticState::from_series(t.series.iter().map(|c| c.conj()).collect(), t.domain_radius);
    Ok(conj.evaluate_series(z))
}

/// (a⁻h)ₙ = eₙ₊₁ hₙ₊₁.  The last coefficient has no partner past the
/// stored range and is set to zero.
pub fn apply_lowering_analytic(f: &AnalyticState, s: &Spectrum) -> Result<AnalyticState> {
    let m = f.series.len();
    if m == 0 {
        return Err(invalid("series", "empty"));
    }
    let mut series = Vec::with_capacity(m);
    for n in 0..m - 1 {
        let e = s.energy_or_formula(n + 1).ok_or(Error::IndexOutOfRange {
            n: n + 1,
            max: s.max_index(),
        })?;
        series.push(f.series[n + 1] * e);
    }
    series.push(Complex64::new(0.0, 0.0));
    Ok(AnalyticState::from_series(series, f.domain_radius))
}

/// Multiplication by z.
pub fn apply_raising_analytic(f: &AnalyticState) -> AnalyticState {
    let mut series = Vec::with_capacity(f.series.len() + 1);
    series.push(Complex64::new(0.0, 0.0));
    series.extend_from_slice(&f.series);
    AnalyticState::from_series(series, f.domain_radius)
}

/// z d/dz.
pub fn apply_number_analytic(f: &AnalyticState) -> AnalyticState {
    let series = f.series.iter().enumerate().map(|(n, c)| c * n as f64).collect();
    AnalyticState::from_series(series, f.domain_radius)
}

/// z h″ + (υ+1) h′ by differentiating the series term by term.
pub fn pt_differential_lowering(f: &AnalyticState, upsilon: f64) -> AnalyticState {
    let m = f.series.len();
    let d1: Vec<Complex64> = (1..m).map(|n| f.series[n] * n as f64).collect();
    let d2: Vec<Complex64> = (1..d1.len()).map(|n| d1[n] * n as f64).collect();
    // d1[j], d2[j] are the zʲ coefficients of h′ and h″; (z h″)ₙ = d2[n−1]
    let mut series = vec![Complex64::new(0.0, 0.0); m];
    for n in 0..m {
        let mut v = Complex64::new(0.0, 0.0);
        if n < d1.len() {
            v += d1[n] * (upsilon + 1.0);
        }
        if n >= 1 && n - 1 < d2.len() {
            v += d2[n - 1];
        }
        series[n] = v;
    }
    AnalyticState::from_series(series, f.domain_radius)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Principal square root for c.
    Principal,
    /// −c; Kummer's transformation makes this the same function.
    Negated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerParameters {
    pub a: Complex64,
    pub b: f64,
    pub c: Complex64,
}

fn check_pt(lambda: Complex64, upsilon: f64, z_prime: Complex64) -> Result<()> {
    if !(lambda.re.is_finite() && lambda.im.is_finite() && z_prime.re.is_finite() && z_prime.im.is_finite()) {
        return Err(invalid("lambda", "parameters must be finite"));
    }
    if !(lambda.re > 0.0) {
        return Err(Error::NonPositiveReLambda { re_lambda: lambda.re });
    }
    if !(upsilon.is_finite() && upsilon >= 2.0) {
        return Err(invalid("upsilon", "must satisfy υ ≥ 2"));
    }
    Ok(())
}

/// c = ±√((λ−1)/(λ+1)), b = υ+1, a = b/2 − z′/((λ+1)c).  Writing (λ+1)c for
/// √(λ²−1) keeps a consistent with whichever branch of c is used.
pub fn kummer_parameters(
    z_prime: Complex64,
    lambda: Complex64,
    upsilon: f64,
    branch: Branch,
) -> Result<KummerParameters> {
    check_pt(lambda, upsilon, z_prime)?;
    if (lambda - 1.0).norm() < LAMBDA_ONE_TOLERANCE {
        return Err(invalid(
            "lambda",
            "λ = 1 has no Kummer parametrisation (c = 0); use the ₀F₁ form",
        ));
    }
    let mut c = ((lambda - 1.0) / (lambda + 1.0)).sqrt();
    if branch == Branch::Negated {
        c = -c;
    }
    let b = upsilon + 1.0;
    Ok(KummerParameters {
        a: Complex64::new(b / 2.0, 0.0) - z_prime / ((lambda + 1.0) * c),
        b,
        c,
    })
}

/// Φ(z) for the principal branch with `DEFAULT_TERMS` Taylor coefficients.
pub fn pt_gis_analytic(z_prime: Complex64, lambda: Complex64, upsilon: f64) -> Result<AnalyticState> {
    pt_gis_analytic_with(z_prime, lambda, upsilon, Branch::Principal, DEFAULT_TERMS)
}

/// Φ(z) = e^{cz} ₁F₁(a; b; −2cz), normalised to Φ(0) = 1.
///
/// The Taylor coefficients are the Cauchy product of the two series,
///
/// ```text
/// Tₙ · n! (b)ₙ = cⁿ Σₖ C(n,k) (−2)ᵏ (a)ₖ (b+k)ₙ₋ₖ
/// ```
///
/// summed exactly (the terms alternate and cancel heavily for large |a|).
pub fn pt_gis_analytic_with(
    z_prime: Complex64,
    lambda: Complex64,
    upsilon: f64,
    branch: Branch,
    terms: usize,
) -> Result<AnalyticState> {
    check_pt(lambda, upsilon, z_prime)?;
    if terms == 0 {
        return Err(invalid("terms", "must be positive"));
    }
    let b = upsilon + 1.0;
    if (lambda - 1.0).norm() < LAMBDA_ONE_TOLERANCE {
        // Tₙ = z′ⁿ/(n!(b)ₙ), i.e. ₀F₁(b; z′z)
        let mut series = Vec::with_capacity(terms);
        for n in 0..terms {
            let ln = -log_gamma(n as f64 + 1.0)? - log_pochhammer(b, n)?;
            series.push(z_prime.powu(n as u32) * ln.exp());
        }
        let zp = z_prime;
        let eval: Evaluator = Arc::new(move |z| Ok(hyp_0f1(Complex64::new(b, 0.0), zp * z)?.value));
        return Ok(AnalyticState {
            series,
            domain_radius: f64::INFINITY,
            closed_form: Some(eval),
        });
    }
    let k = kummer_parameters(z_prime, lambda, upsilon, branch)?;
    let series = kummer_taylor(k, terms)?;
    let eval: Evaluator = Arc::new(move |z| {
        let m = hyp_1f1(k.a, Complex64::new(k.b, 0.0), -2.0 * k.c * z)?;
        Ok((k.c * z).exp() * m.value)
    });
    Ok(AnalyticState {
        series,
        domain_radius: f64::INFINITY,
        closed_form: Some(eval),
    })
}

fn kummer_taylor(k: KummerParameters, terms: usize) -> Result<Vec<Complex64>> {
    let a = ExactComplex::from_complex(k.a);
    let b = Dyadic::from_f64(k.b);
    // (a)ₖ for k < terms
    let mut poch_a = vec![ExactComplex::one()];
    for j in 1..terms {
        let step = &a + &ExactComplex::real(Dyadic::from_int(j as i64 - 1));
        poch_a.push(&poch_a[j - 1] * &step);
    }
    let b_plus: Vec<Dyadic> = (0..terms).map(|j| &b + &Dyadic::from_int(j as i64)).collect();
    let (ln_c, arg_c) = (k.c.norm().ln(), k.c.arg());
    let mut out = Vec::with_capacity(terms);
    for n in 0..terms {
        // (b+k)ₙ₋ₖ for k = n, n−1, …, 0 accumulated backwards
        let mut tail = Dyadic::one();
        let mut binom = BigInt::from(1);
        let mut terms_k: Vec<ExactComplex> = Vec::with_capacity(n + 1);
        // binomials C(n,k)(−2)ᵏ forward
        let mut weights = Vec::with_capacity(n + 1);
        for kk in 0..=n {
            if kk > 0 {
                binom = binom * BigInt::from((n - kk + 1) as u64) / BigInt::from(kk as u64);
            }
            let signed = if kk % 2 == 1 { -binom.clone() } else { binom.clone() };
            weights.push(Dyadic::from_bigint(signed).ldexp(kk as i64));
        }
        for kk in (0..=n).rev() {
            if kk < n {
                tail = &tail * &b_plus[kk];
            }
            terms_k.push(poch_a[kk].scale(&(&weights[kk] * &tail)));
        }
        let mut sum = ExactComplex::zero();
        for t in &terms_k {
            sum = &sum + t;
        }
        let (ln_s, arg_s) = sum.ln_polar();
        let nf = n as f64;
        let ln = ln_s - log_gamma(nf + 1.0)? - log_pochhammer(k.b, n)? + nf * ln_c;
        out.push(Complex64::from_polar(ln.exp(), arg_s + nf * arg_c));
    }
    Ok(out)
}

/// |(1+λ)(z h″ + (υ+1)h′) + (1−λ)z h − 2z′h| relative to the size of the
/// individual terms, from the series derivatives.
pub fn ode_residual(f: &AnalyticState, z_prime: Complex64, lambda: Complex64, upsilon: f64, z: Complex64) -> f64 {
    let [h, d1, d2] = f.derivatives(z);
    let t1 = (1.0 + lambda) * (z * d2 + (upsilon + 1.0) * d1);
    let t2 = (1.0 - lambda) * z * h;
    let t3 = 2.0 * z_prime * h;
    let scale = t1.norm().max(t2.norm()).max(t3.norm()).max(h.norm());
    (t1 + t2 - t3).norm() / scale
}

/// ⟨z′,λ,α|z,α⟩ up to normalization: e^{c̄z} ₁F₁(ā; b; −2c̄z).
pub fn pt_overlap(z_prime: Complex64, lambda: Complex64, upsilon: f64, z: Complex64) -> Result<Complex64> {
    check_pt(lambda, upsilon, z_prime)?;
    if (lambda - 1.0).norm() < LAMBDA_ONE_TOLERANCE {
        return Ok(hyp_0f1(Complex64::new(upsilon + 1.0, 0.0), z * z_prime.conj())?.value);
    }
    let k = kummer_parameters(z_prime, lambda, upsilon, Branch::Principal)?;
    let c = k.c.conj();
    let m = hyp_1f1(k.a.conj(), Complex64::new(k.b, 0.0), -2.0 * c * z)?;
    Ok((c * z).exp() * m.value)
}
