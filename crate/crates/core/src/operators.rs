//! Truncated Fock-space engine.
//!
//! With the phase parameter α the ladder operators act as
//!
//! ```text
//! a⁻|ψₙ⟩ = √eₙ e^{ iα(eₙ − eₙ₋₁)} |ψₙ₋₁⟩
//! a⁺|ψₙ⟩ = √eₙ₊₁ e^{−iα(eₙ₊₁ − eₙ)} |ψₙ₊₁⟩
//! ```
//!
//! and W = (a⁻ + a⁺)/√2, P = i(a⁺ − a⁻)/√2, G = [a⁻, a⁺], F = {W − ⟨W⟩, P − ⟨P⟩}.
//! All actions are banded and computed in O(trunc).

use crate::spectrum::Spectrum;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    pub coefficients: Vec<Complex64>,
    /// Upper estimate of the |cₙ|² mass not represented in `coefficients`.
    pub tail_mass: f64,
    pub alpha: f64,
}

impl FockState {
    pub fn new(coefficients: Vec<Complex64>, alpha: f64) -> Self {
        FockState {
            coefficients,
            tail_mass: 0.0,
            alpha,
        }
    }

    /// |ψₙ⟩ in a space of dimension `trunc`.
    pub fn basis(n: usize, trunc: usize, alpha: f64) -> Self {
        assert!(n < trunc, "basis index {n} outside truncation {trunc}");
        let mut c = vec![Complex64::new(0.0, 0.0); trunc];
        c[n] = Complex64::new(1.0, 0.0);
        Self::new(c, alpha)
    }

    pub fn trunc(&self) -> usize {
        self.coefficients.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    /// ⟨self|other⟩ over the common range.
    pub fn inner(&self, other: &FockState) -> Complex64 {
        inner(&self.coefficients, &other.coefficients)
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            for c in &mut self.coefficients {
                *c /= n;
            }
            self.tail_mass /= n * n;
        }
        self
    }

    /// ⟨H⟩ = Σ eₙ|cₙ|² over the stored range.
    pub fn energy_expectation(&self, s: &Spectrum) -> Result<f64> {
        check_fits(self, s)?;
        let e = s.energies();
        Ok(self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| e[n] * c.norm_sqr())
            .sum::<f64>()
            / self.norm_sqr())
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() + self.tail_mass - 1.0).abs() <= NORM_TOLERANCE + self.tail_mass
    }
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

/// Energy needed one step past the stored range; for a custom spectrum the
/// last stored energy is the best available (lower) estimate.
fn energy_past(s: &Spectrum, n: usize) -> f64 {
    s.energy_or_formula(n).unwrap_or_else(|| s.energies()[s.max_index()])
}

fn check_fits(state: &FockState, s: &Spectrum) -> Result<()> {
    let trunc = state.trunc();
    if trunc == 0 || trunc > s.max_index() + 1 {
        return Err(Error::TruncationMismatch {
            trunc,
            max: s.max_index(),
        });
    }
    Ok(())
}

fn phase(alpha: f64, de: f64) -> Complex64 {
    Complex64::from_polar(1.0, alpha * de)
}

/// (a⁻c)ₙ for n < len(c); components beyond the stored range are zero.
pub(crate) fn lower_vec(c: &[Complex64], e: &dyn Fn(usize) -> f64, alpha: f64) -> Vec<Complex64> {
    let m = c.len();
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    for n in 0..m.saturating_sub(1) {
        let (en, en1) = (e(n), e(n + 1));
        out[n] = c[n + 1] * en1.sqrt() * phase(alpha, en1 - en);
    }
    out
}

/// (a⁺c)ₙ for n ≤ len(c): the result has one more component than the input.
pub(crate) fn raise_vec(c: &[Complex64], e: &dyn Fn(usize) -> f64, alpha: f64) -> Vec<Complex64> {
    let m = c.len();
    let mut out = vec![Complex64::new(0.0, 0.0); m + 1];
    for n in 1..=m {
        let (en, en1) = (e(n), e(n - 1));
        out[n] = c[n - 1] * en.sqrt() * phase(-alpha, en - en1);
    }
    out
}

/// a⁻Ψ; not renormalized.
pub fn apply_lowering(state: &FockState, s: &Spectrum) -> Result<FockState> {
    check_fits(state, s)?;
    let e = |n: usize| energy_past(s, n);
    let out = lower_vec(&state.coefficients, &e, state.alpha);
    // the first neglected level feeds the last stored component
    let tail_mass = state.tail_mass * energy_past(s, state.trunc());
    Ok(FockState {
        coefficients: out,
        tail_mass,
        alpha: state.alpha,
    })
}

/// a⁺Ψ; the component raised past `trunc − 1` is moved into `tail_mass`.
pub fn apply_raising(state: &FockState, s: &Spectrum) -> Result<FockState> {
    check_fits(state, s)?;
    let e = |n: usize| energy_past(s, n);
    let mut out = raise_vec(&state.coefficients, &e, state.alpha);
    let lost = out.pop().unwrap().norm_sqr();
    let tail_mass = state.tail_mass * energy_past(s, state.trunc() + 1) + lost;
    Ok(FockState {
        coefficients: out,
        tail_mass,
        alpha: state.alpha,
    })
}

/// A⁺ = (N/g(N)) a⁺ with g(N) = H, so that [a⁻, A⁺] = 1.
///
/// On the basis, A⁺|ψₙ⟩ = (n + 1)/√eₙ₊₁ · e^{−iα(eₙ₊₁ − eₙ)} |ψₙ₊₁⟩; the
/// division by eₙ₊₁ never meets e₀ = 0 because N multiplies after a⁺.
pub fn apply_canonical_raising(state: &FockState, s: &Spectrum) -> Result<FockState> {
    if state.trunc() < 2 {
        return Err(Error::TruncationMismatch {
            trunc: state.trunc(),
            max: s.max_index(),
        });
    }
    let raised = apply_raising(state, s)?;
    let lost_scale = {
        let n = state.trunc() as f64;
        n * n / energy_past(s, state.trunc()).powi(2)
    };
    let e = s.energies();
    let mut out = raised.coefficients;
    for (n, c) in out.iter_mut().enumerate().skip(1) {
        *c *= n as f64 / e[n];
    }
    Ok(FockState {
        coefficients: out,
        tail_mass: raised.tail_mass * lost_scale,
        alpha: state.alpha,
    })
}

/// e^{−iHt}: cₙ ↦ e^{−ieₙt} cₙ, with α ↦ α + t.
///
/// Since e^{−iHt} a±(α) e^{iHt} = a±(α + t), the evolved state satisfies the
/// same eigenvalue equation with the shifted phase label, and the shifted
/// label is carried along so that later ladder actions stay consistent.
pub fn evolve(state: &FockState, s: &Spectrum, t: f64) -> Result<FockState> {
    check_fits(state, s)?;
    let e = s.energies();
    let coefficients = state
        .coefficients
        .iter()
        .enumerate()
        .map(|(n, c)| c * Complex64::from_polar(1.0, -e[n] * t))
        .collect();
    Ok(FockState {
        coefficients,
        tail_mass: state.tail_mass,
        alpha: state.alpha + t,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyReport {
    pub mean_w: f64,
    pub mean_p: f64,
    pub var_w: f64,
    pub var_p: f64,
    pub mean_g: f64,
    pub mean_f: f64,
    /// var_W·var_P − ¼(⟨G⟩² + ⟨F⟩²), computed rather than assumed.
    pub rs_defect: f64,
    pub tail_mass: f64,
}

impl UncertaintyReport {
    pub const FIELDS: [&'static str; 8] = [
        "mean_w",
        "mean_p",
        "var_w",
        "var_p",
        "mean_g",
        "mean_f",
        "rs_defect",
        "tail_mass",
    ];

    pub fn values(&self) -> [f64; 8] {
        [
            self.mean_w,
            self.mean_p,
            self.var_w,
            self.var_p,
            self.mean_g,
            self.mean_f,
            self.rs_defect,
            self.tail_mass,
        ]
    }

    /// rs_defect / max(var_W·var_P, ¼⟨G⟩²).
    pub fn normalized_defect(&self) -> f64 {
        let scale = (self.var_w * self.var_p).max(0.25 * self.mean_g * self.mean_g);
        self.rs_defect / scale
    }
}

/// Moments of W, P, G, F.  The state is treated as ψ/‖ψ‖ over the stored
/// range and a⁺ is applied without truncation loss (one extra level).
pub fn uncertainty_report(state: &FockState, s: &Spectrum) -> Result<UncertaintyReport> {
    check_fits(state, s)?;
    if !state.is_normalized() {
        return Err(Error::NotNormalized {
            norm_sqr: state.norm_sqr(),
        });
    }
    let nrm = state.norm_sqr().sqrt();
    let c: Vec<Complex64> = state.coefficients.iter().map(|x| x / nrm).collect();
    let e = |n: usize| energy_past(s, n);
    let mut lo = lower_vec(&c, &e, state.alpha);
    lo.push(Complex64::new(0.0, 0.0));
    let hi = raise_vec(&c, &e, state.alpha);
    let mut padded = c.clone();
    padded.push(Complex64::new(0.0, 0.0));

    let mean_a = inner(&padded, &lo);
    let sq2 = std::f64::consts::SQRT_2;
    let mean_w = sq2 * mean_a.re;
    let mean_p = sq2 * mean_a.im;

    let i = Complex64::new(0.0, 1.0);
    // centered quadratures applied to ψ
    let dw: Vec<Complex64> = (0..padded.len())
        .map(|n| (lo[n] + hi[n]) / sq2 - mean_w * padded[n])
        .collect();
    let dp: Vec<Complex64> = (0..padded.len())
        .map(|n| i * (hi[n] - lo[n]) / sq2 - mean_p * padded[n])
        .collect();
    let var_w = norm_sqr(&dw);
    let var_p = norm_sqr(&dp);
    let mean_f = 2.0 * inner(&dw, &dp).re;
    // ⟨G⟩ = Σ|cₙ|²(eₙ₊₁ − eₙ), free of cancellation
    let mean_g = c
        .iter()
        .enumerate()
        .map(|(n, x)| x.norm_sqr() * (e(n + 1) - e(n)))
        .sum::<f64>();
    let rs_defect = var_w * var_p - 0.25 * (mean_g * mean_g + mean_f * mean_f);
    Ok(UncertaintyReport {
        mean_w,
        mean_p,
        var_w,
        var_p,
        mean_g,
        mean_f,
        rs_defect,
        tail_mass: state.tail_mass,
    })
}

/// Residuals of the relations that hold on any solution of
/// (W + iλP)Ψ = √2 zΨ, each relative to the natural scale of its two sides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenRelations {
    /// var_W = |λ|Δ with Δ = ½√(⟨G⟩² + ⟨F⟩²)
    pub var_w_vs_delta: f64,
    /// var_P = Δ/|λ|
    pub var_p_vs_delta: f64,
    /// ⟨G⟩ = 2 Re λ var_P
    pub mean_g: f64,
    /// ⟨F⟩ = 2 Im λ var_P
    pub mean_f: f64,
    /// var_W = ½(Re λ⟨G⟩ + Im λ⟨F⟩)
    pub var_w_combination: f64,
    /// var_P = (Re λ⟨G⟩ + Im λ⟨F⟩)/(2|λ|²)
    pub var_p_combination: f64,
    /// Im λ⟨G⟩ = Re λ⟨F⟩
    pub im_re_balance: f64,
}

impl EigenRelations {
    pub fn max(&self) -> f64 {
        [
            self.var_w_vs_delta,
            self.var_p_vs_delta,
            self.mean_g,
            self.mean_f,
            self.var_w_combination,
            self.var_p_combination,
            self.im_re_balance,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn eigen_relations(r: &UncertaintyReport, lambda: Complex64) -> EigenRelations {
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    let abs_l = lambda.norm();
    let delta = 0.5 * r.mean_g.hypot(r.mean_f);
    let comb = lambda.re * r.mean_g + lambda.im * r.mean_f;
    let g_scale = r.mean_g.abs().max(r.mean_f.abs());
    EigenRelations {
        var_w_vs_delta: rel(r.var_w, abs_l * delta),
        var_p_vs_delta: rel(r.var_p, delta / abs_l),
        mean_g: (r.mean_g - 2.0 * lambda.re * r.var_p).abs() / g_scale,
        mean_f: (r.mean_f - 2.0 * lambda.im * r.var_p).abs() / g_scale,
        var_w_combination: rel(r.var_w, 0.5 * comb),
        var_p_combination: rel(r.var_p, comb / (2.0 * abs_l * abs_l)),
        im_re_balance: (lambda.im * r.mean_g - lambda.re * r.mean_f).abs() / (abs_l * g_scale),
    }
}

/// ‖(1−λ)a⁺Ψ + (1+λ)a⁻Ψ − 2zΨ‖ / ‖Ψ‖ over n < trunc − 1.
pub fn eigen_residual(state: &FockState, s: &Spectrum, lambda: Complex64, z: Complex64) -> Result<f64> {
    check_fits(state, s)?;
    let e = |n: usize| energy_past(s, n);
    let c = &state.coefficients;
    let lo = lower_vec(c, &e, state.alpha);
    let hi = raise_vec(c, &e, state.alpha);
    let m = c.len().saturating_sub(1);
    let r: f64 = (0..m)
        .map(|n| ((1.0 - lambda) * hi[n] + (1.0 + lambda) * lo[n] - 2.0 * z * c[n]).norm_sqr())
        .sum();
    Ok((r / state.norm_sqr()).sqrt())
}

/// ‖a⁻Ψ − zΨ‖ / ‖Ψ‖ over n < trunc − 1.
pub fn lowering_residual(state: &FockState, s: &Spectrum, z: Complex64) -> Result<f64> {
    check_fits(state, s)?;
    let e = |n: usize| energy_past(s, n);
    let c = &state.coefficients;
    let lo = lower_vec(c, &e, state.alpha);
    let m = c.len().saturating_sub(1);
    let r: f64 = (0..m).map(|n| (lo[n] - z * c[n]).norm_sqr()).sum();
    Ok((r / state.norm_sqr()).sqrt())
}
