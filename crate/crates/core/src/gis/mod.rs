//! Solutions of the eigenvalue equation
//!
//! ```text
//! [(1−λ)a⁺ + (1+λ)a⁻] Ψ = 2z Ψ        (equivalently (W + iλP)Ψ = √2 zΨ)
//! ```
//!
//! for an arbitrary spectrum.  λ = 1 gives the Gazeau–Klauder coherent
//! states, z = 0 the even states, and the general case is computed by three
//! independent routes: the forward recurrence, the continued fraction for
//! consecutive ratios, and the closed combinatorial sum over Δ(n, h).

mod coefficients;
mod delta;
mod harmonic;

pub use coefficients::{LogSeq, CLOSED_FORM_LIMIT};
pub use delta::{delta_sum, delta_sum_exact, delta_table_exact};
pub use harmonic::harmonic_squeezed_check;

use coefficients::{
    closed_form, collect, energy_fn, log_sum_exp, ContinuedFractionGen, EvenGen, Generator, GkGen, RecurrenceGen,
};

use crate::operators::{eigen_residual, FockState};
use crate::spectrum::Spectrum;
use crate::{invalid, Error, Result};
use num_complex::Complex64;
use serde::Serialize;

/// Absolute tolerance for recognising λ = ±1, |λ| = 1 and z = 0.
pub const CLASSIFICATION_TOLERANCE: f64 = 1e-12;
/// Default hard cap on the number of retained levels.
pub const TRUNCATION_CAP: usize = 4096;
/// Target for the neglected tail mass.
pub const TAIL_TARGET: f64 = 1e-12;
/// A retained coefficient is negligible below this fraction of the peak |cₙ|².
pub const DECAY_THRESHOLD: f64 = 1e-16;
/// Window (in n) used to diagnose sustained growth at the cap.
pub const GROWTH_WINDOW: usize = 32;

const DECAY_RUN: usize = 8;
const LOOKAHEAD: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// λ = 1
    GazeauKlauder,
    /// |λ| = 1, λ ≠ ±1
    GeneralizedCoherent,
    /// |λ| ≠ 1
    Squeezed,
    /// λ = −1 (no nonzero solution)
    NonNormalizable,
    /// z = 0, λ ≠ −1
    EvenState,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::GazeauKlauder => "gazeau_klauder",
            Classification::GeneralizedCoherent => "generalized_coherent",
            Classification::Squeezed => "squeezed",
            Classification::NonNormalizable => "non_normalizable",
            Classification::EvenState => "even_state",
        }
    }
}

/// λ = −1 is rejected whatever z is: for z ≠ 0 every coefficient vanishes,
/// and for z = 0 the equation reads a⁺Ψ = 0, whose only solution is Ψ = 0.
pub fn classify(lambda: Complex64, z: Complex64) -> Classification {
    let tol = CLASSIFICATION_TOLERANCE;
    if (lambda + 1.0).norm() <= tol {
        Classification::NonNormalizable
    } else if z.norm() <= tol {
        Classification::EvenState
    } else if (lambda - 1.0).norm() <= tol {
        Classification::GazeauKlauder
    } else if (lambda.norm() - 1.0).abs() <= tol {
        Classification::GeneralizedCoherent
    } else {
        Classification::Squeezed
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GisParams {
    pub lambda: Complex64,
    pub z: Complex64,
    pub alpha: f64,
    pub classification: Classification,
}

impl GisParams {
    pub fn new(lambda: Complex64, z: Complex64, alpha: f64) -> Self {
        GisParams {
            lambda,
            z,
            alpha,
            classification: classify(lambda, z),
        }
    }

    /// p = 2z/(1+λ)
    pub fn p(&self) -> Complex64 {
        2.0 * self.z / (1.0 + self.lambda)
    }

    /// q = (λ−1)/(λ+1)
    pub fn q(&self) -> Complex64 {
        (self.lambda - 1.0) / (self.lambda + 1.0)
    }

    fn admissible(&self) -> Result<()> {
        for (name, v) in [("lambda", self.lambda), ("z", self.z)] {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(invalid(name, "must be finite"));
            }
        }
        if !self.alpha.is_finite() {
            return Err(invalid("alpha", "must be finite"));
        }
        if self.classification == Classification::NonNormalizable {
            return Err(Error::LambdaMinusOne);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    Recurrence,
    ContinuedFraction,
    ClosedForm,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Recurrence => "recurrence",
            Route::ContinuedFraction => "continued_fraction",
            Route::ClosedForm => "closed_form",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Grow until the coefficients have decayed and the eigenvalue residual
    /// stops improving, up to min(4096, max_index + 1).
    Auto,
    /// Exactly this many levels; fails if the tail mass exceeds 1e-12.
    Fixed(usize),
}

/// Normalized coefficients cₙ = exp(log_magnitudes[n] + i·phases[n]).
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub log_magnitudes: Vec<f64>,
    pub phases: Vec<f64>,
    pub c0: f64,
    pub route: Route,
    pub tail_mass: f64,
}

impl CoefficientSet {
    pub fn len(&self) -> usize {
        self.log_magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_magnitudes.is_empty()
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        Complex64::from_polar(self.log_magnitudes[n].exp(), self.phases[n])
    }

    pub fn to_state(&self, alpha: f64) -> FockState {
        FockState {
            coefficients: (0..self.len()).map(|n| self.coefficient(n)).collect(),
            tail_mass: self.tail_mass,
            alpha,
        }
    }
}

/// The sequential generator that defines the state's tail behaviour.
fn primary_generator<'a>(s: &'a Spectrum, p: &GisParams) -> Box<dyn Generator + 'a> {
    match p.classification {
        Classification::GazeauKlauder => Box::new(GkGen::new(energy_fn(s), p.z)),
        Classification::EvenState => Box::new(EvenGen::new(energy_fn(s), p.q())),
        _ => Box::new(RecurrenceGen::new(energy_fn(s), p.lambda, p.z)),
    }
}

/// Outcome of the truncation search: the first `trunc` terms and the tail
/// beyond them relative to the retained norm.
struct Plan {
    seq: LogSeq,
    trunc: usize,
    log_tail: f64,
}

/// ln of Σ|tₙ|² over n ≥ `from`, using up to LOOKAHEAD further terms and a
/// geometric extrapolation of the last pair ratio.
fn log_tail(seq: &LogSeq, from: usize) -> f64 {
    let end = seq.len();
    if from >= end {
        return f64::NEG_INFINITY;
    }
    let seen = log_sum_exp(seq.log_abs[from..end].iter().map(|l| 2.0 * l));
    if end < from + 4 {
        return seen;
    }
    let pair = |k: usize| log_sum_exp([2.0 * seq.log_abs[k], 2.0 * seq.log_abs[k - 1]].into_iter());
    let last = pair(end - 1);
    let before = pair(end - 3);
    let log_rho = last - before;
    if !(log_rho < 0.0) || last == f64::NEG_INFINITY {
        // no visible decay: count the last pair once per unseen pair of
        // levels up to the lookahead length as a crude bound
        return log_sum_exp([seen, last + ((LOOKAHEAD / 2) as f64).ln()].into_iter());
    }
    let rho = log_rho.exp();
    log_sum_exp([seen, last + (rho / (1.0 - rho)).ln()].into_iter())
}

fn pair_mass(seq: &LogSeq, k: usize) -> f64 {
    let a = 2.0 * seq.log_abs[k];
    let b = if k > 0 {
        2.0 * seq.log_abs[k - 1]
    } else {
        f64::NEG_INFINITY
    };
    log_sum_exp([a, b].into_iter())
}

fn growth_diagnosis(seq: &LogSeq, cap: usize) -> Error {
    let n = seq.len();
    let tail = {
        let lt = log_tail(seq, n.min(cap));
        let total = seq.log_norm_sqr();
        (lt - total).exp()
    };
    if n > GROWTH_WINDOW + 2 {
        let end = n - 1;
        let start = end - GROWTH_WINDOW;
        let growing = (start..end).all(|k| pair_mass(seq, k + 1) > pair_mass(seq, k.max(1) - 1));
        if growing {
            let rate = (pair_mass(seq, end) - pair_mass(seq, start)) / GROWTH_WINDOW as f64;
            return Error::SustainedGrowth {
                growth_rate: rate,
                window: GROWTH_WINDOW,
                n: end,
            };
        }
    }
    let seen = seq.log_abs[..cap.min(n)].iter().map(|l| 2.0 * l);
    let total = log_sum_exp(seen);
    let last_quarter = log_sum_exp(seq.log_abs[cap.min(n) * 3 / 4..cap.min(n)].iter().map(|l| 2.0 * l));
    Error::TruncationCap {
        cap,
        tail_mass: (last_quarter - total).exp().max(tail.min(1.0)),
    }
}

fn plan(s: &Spectrum, p: &GisParams, policy: Truncation) -> Result<Plan> {
    let cap_levels = s.reachable_index(TRUNCATION_CAP - 1) + 1;
    let mut g = primary_generator(s, p);
    let mut seq = LogSeq::default();
    let mut pull = |seq: &mut LogSeq, upto: usize| -> Result<()> {
        while seq.len() < upto {
            match g.next() {
                Some(r) => {
                    let (l, a) = r?;
                    seq.push(l, a);
                }
                None => break,
            }
        }
        Ok(())
    };

    let trunc = match policy {
        Truncation::Fixed(n) => {
            if n == 0 {
                return Err(invalid("trunc", "must be positive"));
            }
            if n > s.max_index() + 1 {
                return Err(Error::TruncationMismatch {
                    trunc: n,
                    max: s.max_index(),
                });
            }
            pull(&mut seq, n + LOOKAHEAD)?;
            n
        }
        Truncation::Auto => {
            let log_drop = DECAY_THRESHOLD.ln();
            let mut lmax = f64::NEG_INFINITY;
            let mut peak = 0usize;
            let mut found = None;
            let mut n = 0;
            while n < cap_levels {
                pull(&mut seq, n + 1)?;
                if seq.len() <= n {
                    break;
                }
                let l = 2.0 * seq.log_abs[n];
                if l > lmax {
                    lmax = l;
                    peak = n;
                }
                if n >= peak + DECAY_RUN
                    && seq.log_abs[n + 1 - DECAY_RUN..=n]
                        .iter()
                        .all(|x| 2.0 * x < lmax + log_drop)
                {
                    found = Some(n + 1);
                    break;
                }
                n += 1;
            }
            match found {
                None => {
                    pull(&mut seq, cap_levels)?;
                    return Err(growth_diagnosis(&seq, cap_levels));
                }
                Some(n0) => n0,
            }
        }
    };

    let mut trunc = trunc;
    if policy == Truncation::Auto {
        // extend by a quarter while the eigenvalue residual keeps improving
        let residual_at = |seq: &LogSeq, m: usize| -> Result<f64> {
            let state = state_from(seq, m, f64::NEG_INFINITY, p.alpha, s);
            eigen_residual(&state, s, p.lambda, p.z)
        };
        pull(&mut seq, (trunc + trunc / 4 + DECAY_RUN).min(cap_levels) + LOOKAHEAD)?;
        let mut r0 = residual_at(&seq, trunc)?;
        loop {
            let next = (trunc + (trunc / 4).max(DECAY_RUN)).min(cap_levels).min(seq.len());
            if next <= trunc {
                break;
            }
            let r1 = residual_at(&seq, next)?;
            trunc = next;
            if !(r1 < 0.5 * r0) {
                break;
            }
            r0 = r1;
            pull(&mut seq, (trunc + trunc / 4 + DECAY_RUN).min(cap_levels) + LOOKAHEAD)?;
        }
    }

    pull(&mut seq, trunc + LOOKAHEAD)?;
    if seq.len() < trunc {
        return Err(Error::IndexOutOfRange {
            n: trunc - 1,
            max: seq.len().saturating_sub(1),
        });
    }
    let retained = log_sum_exp(seq.log_abs[..trunc].iter().map(|l| 2.0 * l));
    let lt = log_tail(&seq, trunc) - retained;
    if let Truncation::Fixed(n) = policy {
        if lt.exp() > TAIL_TARGET {
            return Err(Error::TruncationInsufficient {
                trunc: n,
                tail_mass: lt.exp(),
                target: TAIL_TARGET,
            });
        }
    }
    Ok(Plan {
        seq,
        trunc,
        log_tail: lt,
    })
}

/// Builds the normalized state from the first `m` terms; `log_tail` is the
/// tail mass relative to the retained norm.
fn state_from(seq: &LogSeq, m: usize, log_tail: f64, alpha: f64, s: &Spectrum) -> FockState {
    coefficient_set(seq, m, log_tail, alpha, s, Route::Recurrence).to_state(alpha)
}

fn coefficient_set(seq: &LogSeq, m: usize, log_tail: f64, alpha: f64, s: &Spectrum, route: Route) -> CoefficientSet {
    let retained = log_sum_exp(seq.log_abs[..m].iter().map(|l| 2.0 * l));
    // c₀² = 1/(retained + tail)
    let total = retained + log_sum_exp([0.0, log_tail].into_iter());
    let log_c0 = -0.5 * total;
    let tail_mass = (log_tail + retained - total).exp();
    let log_magnitudes = seq.log_abs[..m].iter().map(|l| l + log_c0).collect();
    let phases = (0..m)
        .map(|n| {
            let e = s.energy_or_formula(n).unwrap_or(0.0);
            (seq.arg[n] - alpha * e).rem_euclid(std::f64::consts::TAU)
        })
        .collect();
    CoefficientSet {
        log_magnitudes,
        phases,
        c0: log_c0.exp(),
        route,
        tail_mass,
    }
}

/// Normalized coefficients by the requested route.  The truncation order is
/// always decided by the primary (recurrence or explicit) sequence; the
/// route only changes how the retained coefficients are computed.
pub fn coefficients(s: &Spectrum, p: &GisParams, trunc: Truncation, route: Route) -> Result<CoefficientSet> {
    p.admissible()?;
    let plan = plan(s, p, trunc)?;
    let seq = raw_sequence(s, p, plan.trunc, route, Some(&plan.seq))?;
    Ok(coefficient_set(&seq, plan.trunc, plan.log_tail, p.alpha, s, route))
}

/// Unnormalized tₙ for n < count by one route (no truncation policy).
pub fn raw_coefficients(s: &Spectrum, p: &GisParams, count: usize, route: Route) -> Result<LogSeq> {
    p.admissible()?;
    raw_sequence(s, p, count, route, None)
}

fn raw_sequence(s: &Spectrum, p: &GisParams, count: usize, route: Route, primary: Option<&LogSeq>) -> Result<LogSeq> {
    match route {
        Route::Recurrence => match primary {
            Some(seq)
                if seq.len() >= count
                    && !matches!(
                        p.classification,
                        Classification::GazeauKlauder | Classification::EvenState
                    ) =>
            {
                let mut out = seq.clone();
                out.truncate(count);
                Ok(out)
            }
            _ => collect(&mut RecurrenceGen::new(energy_fn(s), p.lambda, p.z), count),
        },
        Route::ContinuedFraction => {
            if p.z.norm() <= CLASSIFICATION_TOLERANCE {
                return Err(invalid(
                    "z",
                    "the continued fraction needs z ≠ 0 (A₁ = 2z/(1+λ) vanishes)",
                ));
            }
            collect(&mut ContinuedFractionGen::new(energy_fn(s), p.p(), p.q()), count)
        }
        Route::ClosedForm => {
            let s = s.extended_to(count)?;
            closed_form(&s, p.p(), p.q(), count)
        }
    }
}

/// Dispatches on the classification: explicit formulas for the coherent and
/// even families, the recurrence otherwise.
pub fn build(s: &Spectrum, p: &GisParams, trunc: Truncation) -> Result<FockState> {
    p.admissible()?;
    match p.classification {
        Classification::GazeauKlauder => gk_coherent(s, p.z, p.alpha, trunc),
        Classification::EvenState => even_gis(s, p.lambda, p.alpha, trunc),
        _ => gis_recurrence(s, p, trunc),
    }
}

/// cₙ = c₀ zⁿ e^{−iαeₙ}/√f(n).
pub fn gk_coherent(s: &Spectrum, z: Complex64, alpha: f64, trunc: Truncation) -> Result<FockState> {
    let radius = s.radius_of_convergence();
    // Σ|z|^{2n}/f(n) converges for |z|² < lim ⁿ√f(n)
    if !radius.is_infinite() && !(z.norm_sqr() < radius.value()) {
        return Err(Error::OutsideConvergenceDisk {
            z_abs_sqr: z.norm_sqr(),
            radius: radius.value(),
        });
    }
    let p = GisParams {
        lambda: Complex64::new(1.0, 0.0),
        z,
        alpha,
        classification: Classification::GazeauKlauder,
    };
    p.admissible()?;
    let plan = plan(s, &p, trunc)?;
    Ok(coefficient_set(&plan.seq, plan.trunc, plan.log_tail, alpha, s, Route::Recurrence).to_state(alpha))
}

/// z = 0: odd coefficients vanish and
/// c₂ₖ = qᵏ √(e₁e₃⋯e₂ₖ₋₁/(e₂e₄⋯e₂ₖ)) e^{−iαe₂ₖ} c₀.
pub fn even_gis(s: &Spectrum, lambda: Complex64, alpha: f64, trunc: Truncation) -> Result<FockState> {
    let p = GisParams {
        lambda,
        z: Complex64::new(0.0, 0.0),
        alpha,
        classification: if (lambda + 1.0).norm() <= CLASSIFICATION_TOLERANCE {
            Classification::NonNormalizable
        } else {
            Classification::EvenState
        },
    };
    p.admissible()?;
    let plan = plan(s, &p, trunc)?;
    Ok(coefficient_set(&plan.seq, plan.trunc, plan.log_tail, alpha, s, Route::Recurrence).to_state(alpha))
}

pub fn gis_recurrence(s: &Spectrum, p: &GisParams, trunc: Truncation) -> Result<FockState> {
    Ok(coefficients(s, p, trunc, Route::Recurrence)?.to_state(p.alpha))
}

pub fn gis_continued_fraction(s: &Spectrum, p: &GisParams, trunc: Truncation) -> Result<FockState> {
    Ok(coefficients(s, p, trunc, Route::ContinuedFraction)?.to_state(p.alpha))
}

pub fn gis_closed_form(s: &Spectrum, p: &GisParams, trunc: Truncation) -> Result<FockState> {
    Ok(coefficients(s, p, trunc, Route::ClosedForm)?.to_state(p.alpha))
}

/// Aₙ by forward iteration from A₁ = 2z/(1+λ):
/// Aₙ = 2z/(1+λ) + ((λ−1)/(λ+1)) eₙ₋₁/Aₙ₋₁.
pub fn continued_fraction_a(n: usize, s: &Spectrum, p: &GisParams) -> Result<Complex64> {
    p.admissible()?;
    if n == 0 {
        return Err(invalid("n", "the continued fraction starts at A₁"));
    }
    if p.z.norm() <= CLASSIFICATION_TOLERANCE {
        return Err(invalid("z", "A₁ = 2z/(1+λ) vanishes at z = 0"));
    }
    let (pp, q) = (p.p(), p.q());
    let mut a = pp;
    for k in 2..=n {
        if a == Complex64::new(0.0, 0.0) {
            return Err(Error::ContinuedFractionNode { n: k - 1 });
        }
        let e = s.energy_or_formula(k - 1).ok_or(Error::IndexOutOfRange {
            n: k - 1,
            max: s.max_index(),
        })?;
        a = pp + q * e / a;
    }
    if a == Complex64::new(0.0, 0.0) {
        return Err(Error::ContinuedFractionNode { n });
    }
    Ok(a)
}
