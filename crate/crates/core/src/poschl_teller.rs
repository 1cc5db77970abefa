//! Trigonometric Pöschl–Teller well on (0, πa):
//!
//! ```text
//! V(x) = (1/4a²)[κ(κ−1)/sin²(x/2a) + λ(λ−1)/cos²(x/2a)] − (κ+λ)²/4a²
//! ```
//!
//! with eₙ = n(n+υ), υ = κ+λ.  The infinite square well is the substitution
//! κ = λ = 1 (υ = 2).

use crate::quadrature::{gauss_legendre, integrate};
use crate::specfun::{bessel_i_scaled, hyp_0f1, jacobi_p, log_gamma};
use crate::spectrum::Spectrum;
use crate::{invalid, Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Wavefunctions are evaluated up to this degree.
pub const WAVEFUNCTION_MAX_N: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PtParams {
    pub kappa: f64,
    pub lambda_pot: f64,
    pub a_scale: f64,
    pub upsilon: f64,
}

impl PtParams {
    pub fn new(kappa: f64, lambda_pot: f64, a_scale: f64) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 1.0) {
            return Err(invalid("kappa", "must be > 1 (κ = λ = 1 is the infinite well)"));
        }
        if !(lambda_pot.is_finite() && lambda_pot > 1.0) {
            return Err(invalid("lambda_pot", "must be > 1 (κ = λ = 1 is the infinite well)"));
        }
        Self::checked(kappa, lambda_pot, a_scale)
    }

    pub fn infinite_well(a_scale: f64) -> Result<Self> {
        Self::checked(1.0, 1.0, a_scale)
    }

    fn checked(kappa: f64, lambda_pot: f64, a_scale: f64) -> Result<Self> {
        if !(a_scale.is_finite() && a_scale > 0.0) {
            return Err(invalid("a_scale", "must be positive"));
        }
        Ok(PtParams {
            kappa,
            lambda_pot,
            a_scale,
            upsilon: kappa + lambda_pot,
        })
    }

    pub fn is_infinite_well(&self) -> bool {
        self.kappa == 1.0 && self.lambda_pot == 1.0
    }

    /// Width of the well, πa.
    pub fn width(&self) -> f64 {
        PI * self.a_scale
    }

    fn y(&self, x: f64) -> f64 {
        x / (2.0 * self.a_scale)
    }

    fn inside(&self, x: f64) -> bool {
        x > 0.0 && x < self.width()
    }
}

/// eₙ = n(n+υ), in units of 1/a² for the Schrödinger operator −d²/dx² + V.
pub fn pt_spectrum(p: &PtParams, n_max: usize) -> Result<Spectrum> {
    if p.is_infinite_well() {
        Spectrum::infinite_well(n_max)
    } else {
        Spectrum::poschl_teller(p.kappa, p.lambda_pot, n_max)
    }
}

pub fn pt_potential(x: f64, p: &PtParams) -> f64 {
    if !p.inside(x) {
        return f64::INFINITY;
    }
    let (s, c) = p.y(x).sin_cos();
    let a2 = 4.0 * p.a_scale * p.a_scale;
    (p.kappa * (p.kappa - 1.0) / (s * s) + p.lambda_pot * (p.lambda_pot - 1.0) / (c * c) - p.upsilon * p.upsilon) / a2
}

fn check_inside(x: f64, p: &PtParams) -> Result<()> {
    if !p.inside(x) {
        return Err(invalid("x", format!("{x} is not inside (0, {})", p.width())));
    }
    Ok(())
}

/// W(x) = (1/2a)[κ cot(x/2a) − λ tan(x/2a)], as printed.
pub fn pt_superpotential(x: f64, p: &PtParams) -> Result<f64> {
    check_inside(x, p)?;
    let y = p.y(x);
    Ok((p.kappa / y.tan() - p.lambda_pot * y.tan()) / (2.0 * p.a_scale))
}

/// W′(x) = −(1/4a²)[κ/sin²(x/2a) + λ/cos²(x/2a)].
pub fn pt_superpotential_derivative(x: f64, p: &PtParams) -> Result<f64> {
    check_inside(x, p)?;
    let (s, c) = p.y(x).sin_cos();
    Ok(-(p.kappa / (s * s) + p.lambda_pot / (c * c)) / (4.0 * p.a_scale * p.a_scale))
}

/// Residuals of the two Riccati forms against V at sample points.
///
/// With a± = ∓d/dx + W one has a⁺a⁻ = −d²/dx² + W² − W′.  For the printed W
/// it is W² + W′ that equals V identically, i.e. the factorization holds
/// with −W (equivalently a± = ±d/dx + W).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationReport {
    /// max |W² − W′ − V|
    pub minus_form_residual: f64,
    /// max |W² + W′ − V|
    pub plus_form_residual: f64,
    /// spread of W² − W′ − V over the samples; nonzero means it is not a
    /// constant shift
    pub minus_form_spread: f64,
}

pub fn factorization_report(p: &PtParams, samples: usize) -> Result<FactorizationReport> {
    if samples < 2 {
        return Err(invalid("samples", "need at least two points"));
    }
    let (mut minus, mut plus) = (Vec::new(), Vec::new());
    for k in 1..=samples {
        let x = p.width() * k as f64 / (samples + 1) as f64;
        let w = pt_superpotential(x, p)?;
        let dw = pt_superpotential_derivative(x, p)?;
        let v = pt_potential(x, p);
        let scale = v.abs().max(w * w).max(dw.abs()).max(1.0);
        minus.push((w * w - dw - v) / scale);
        plus.push((w * w + dw - v) / scale);
    }
    let max_abs = |v: &[f64]| v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let hi = minus.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = minus.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(FactorizationReport {
        minus_form_residual: max_abs(&minus),
        plus_form_residual: max_abs(&plus),
        minus_form_spread: hi - lo,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WavefunctionNorm {
    /// cₙ(κ,λ) exactly as printed, with Γ(2n+κ+λ) in the denominator.
    AsPrinted,
    /// Γ(2n+κ+λ) replaced by (2n+κ+λ), which makes ∫ψₙ² dx = 1.
    Corrected,
}

/// ln cₙ(κ, λ).
pub fn log_cn(n: usize, p: &PtParams, norm: WavefunctionNorm) -> Result<f64> {
    let (k, l, u) = (p.kappa, p.lambda_pot, p.upsilon);
    let nf = n as f64;
    let last = match norm {
        WavefunctionNorm::AsPrinted => log_gamma(2.0 * nf + u)?,
        WavefunctionNorm::Corrected => (2.0 * nf + u).ln(),
    };
    Ok(
        p.a_scale.ln() + log_gamma(nf + 1.0)? + 2.0 * log_gamma(k + 0.5)? + log_gamma(nf + l + 0.5)?
            - log_gamma(nf + k + 0.5)?
            - log_gamma(nf + u)?
            - last,
    )
}

/// ψₙ(x) = cₙ^{−1/2} cos^λ(x/2a) sin^κ(x/2a) · n!Γ(κ+½)/Γ(n+κ+½) · P_n^{(κ−½, λ−½)}(cos(x/a)).
pub fn pt_wavefunction(n: usize, x: f64, p: &PtParams, norm: WavefunctionNorm) -> Result<f64> {
    check_inside(x, p)?;
    if n > WAVEFUNCTION_MAX_N {
        return Err(invalid(
            "n",
            format!("wavefunctions are supported for n ≤ {WAVEFUNCTION_MAX_N}"),
        ));
    }
    let (k, l) = (p.kappa, p.lambda_pot);
    let nf = n as f64;
    let y = p.y(x);
    let (s, c) = y.sin_cos();
    let pn = jacobi_p(n, k - 0.5, l - 0.5, (2.0 * y).cos())?;
    let ln_env = l * c.ln() + k * s.ln() + log_gamma(nf + 1.0)? + log_gamma(k + 0.5)?
        - log_gamma(nf + k + 0.5)?
        - 0.5 * log_cn(n, p, norm)?;
    Ok(ln_env.exp() * pn)
}

/// Maps t ∈ [0, 1] to x ∈ [0, πa] by the smoothstep t²(3 − 2t); the zero
/// derivative at both ends clusters nodes where sin^κ and cos^λ vanish.
fn smoothstep(t: f64) -> (f64, f64) {
    (t * t * (3.0 - 2.0 * t), 6.0 * t * (1.0 - t))
}

/// ∫₀^{πa} ψₘψₙ dx for m, n ≤ n_max by mapped Gauss–Legendre quadrature.
pub fn overlap_matrix(p: &PtParams, n_max: usize, norm: WavefunctionNorm, points: usize) -> Result<Vec<Vec<f64>>> {
    let (t, w) = gauss_legendre(points);
    let width = p.width();
    let mut values = vec![Vec::with_capacity(points); n_max + 1];
    let mut weights = Vec::with_capacity(points);
    for (ti, wi) in t.iter().zip(&w) {
        let (s, ds) = smoothstep(0.5 * (ti + 1.0));
        let x = width * s;
        weights.push(0.5 * wi * width * ds);
        for (n, row) in values.iter_mut().enumerate() {
            row.push(if p.inside(x) {
                pt_wavefunction(n, x, p, norm)?
            } else {
                0.0
            });
        }
    }
    let mut out = vec![vec![0.0; n_max + 1]; n_max + 1];
    for m in 0..=n_max {
        for n in m..=n_max {
            let v: f64 = (0..points).map(|k| weights[k] * values[m][k] * values[n][k]).sum();
            out[m][n] = v;
            out[n][m] = v;
        }
    }
    Ok(out)
}

/// ∫ψₘψₙ dx by adaptive Gauss–Kronrod, an independent check on the fixed rule.
pub fn overlap_adaptive(m: usize, n: usize, p: &PtParams, norm: WavefunctionNorm) -> Result<f64> {
    let f = |x: f64| {
        if !p.inside(x) {
            return 0.0;
        }
        match (pt_wavefunction(m, x, p, norm), pt_wavefunction(n, x, p, norm)) {
            (Ok(a), Ok(b)) => a * b,
            _ => f64::NAN,
        }
    };
    Ok(integrate(&f, 0.0, p.width(), 1e-14, 1e-13, 4000)?.value)
}

/// Sign changes of ψₙ on a uniform interior grid.
pub fn count_nodes(n: usize, p: &PtParams, samples: usize) -> Result<usize> {
    let mut count = 0;
    let mut last = 0.0f64;
    for k in 1..samples {
        let x = p.width() * k as f64 / samples as f64;
        let v = pt_wavefunction(n, x, p, WavefunctionNorm::Corrected)?;
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
    }
    Ok(count)
}

/// Per-level ∫ψₙ² dx with the printed normalization and its closed-form
/// value Γ(2n+υ)/(2n+υ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormAudit {
    pub n: usize,
    pub quadrature: f64,
    pub predicted: f64,
}

pub fn printed_norm_audit(p: &PtParams, n_max: usize, points: usize) -> Result<Vec<NormAudit>> {
    let m = overlap_matrix(p, n_max, WavefunctionNorm::AsPrinted, points)?;
    (0..=n_max)
        .map(|n| {
            let x = 2.0 * n as f64 + p.upsilon;
            Ok(NormAudit {
                n,
                quadrature: m[n][n],
                predicted: (log_gamma(x)? - x.ln()).exp(),
            })
        })
        .collect()
}

fn check_r(r: f64, upsilon: f64) -> Result<()> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(invalid("r", "must be finite and non-negative"));
    }
    if !(upsilon.is_finite() && upsilon >= 2.0) {
        return Err(invalid("upsilon", "must satisfy υ ≥ 2"));
    }
    Ok(())
}

/// N(r) = √(r^υ / I_υ(2r)) with N(0) = √Γ(υ+1).
///
/// This normalizes Σ zⁿ/√(Γ(n+1)Γ(n+υ+1)) |ψₙ⟩; the coefficient of |ψ₀⟩ in
/// the f(n) convention is [`pt_c0`] = N/√Γ(υ+1).
pub fn pt_coherent_norm(r: f64, upsilon: f64) -> Result<f64> {
    check_r(r, upsilon)?;
    if r == 0.0 {
        return Ok((0.5 * log_gamma(upsilon + 1.0)?).exp());
    }
    let is = bessel_i_scaled(upsilon, 2.0 * r)?;
    Ok((0.5 * (upsilon * r.ln() - 2.0 * r - is.ln())).exp())
}

/// c₀(r) = 1/√(Σ r²ⁿ/f(n)) on eₙ = n(n+υ).
pub fn pt_c0(r: f64, upsilon: f64) -> Result<f64> {
    Ok((pt_coherent_norm(r, upsilon)?.ln() - 0.5 * log_gamma(upsilon + 1.0)?).exp())
}

/// ⟨G⟩ = (1+υ) + 2r²/(1+υ) · ₀F₁(2+υ; r²)/₀F₁(1+υ; r²) on |z| = r.
pub fn pt_mean_g(r: f64, upsilon: f64) -> Result<f64> {
    check_r(r, upsilon)?;
    let x = Complex64::new(r * r, 0.0);
    let num = hyp_0f1(Complex64::new(2.0 + upsilon, 0.0), x)?.value.re;
    let den = hyp_0f1(Complex64::new(1.0 + upsilon, 0.0), x)?.value.re;
    if !(num.is_finite() && den.is_finite()) {
        return Err(Error::Unsupported(format!("₀F₁ overflows at r = {r}")));
    }
    Ok(1.0 + upsilon + 2.0 * r * r / (1.0 + upsilon) * num / den)
}
