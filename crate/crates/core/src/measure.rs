//! Resolution of unity for the coherent states |z, α⟩.
//!
//! Writing dμ(z) = c₀(|z|)⁻² h(r²) r dr dφ with c₀(|z|)⁻² = Σ |z|²ⁿ/f(n), the
//! angular integral kills every off-diagonal term and
//!
//! ```text
//! ∫ |z,α⟩⟨z,α| dμ = Σₙ |ψₙ⟩⟨ψₙ| · π/f(n) ∫₀^{R²} h(u) uⁿ du
//! ```
//!
//! so the identity is resolved exactly when ∫ h(u) u^{n−1} du = f(n−1)/π.

use crate::quadrature::{integrate, integrate_half_line};
use crate::specfun::{bessel_i_scaled, bessel_k_scaled, log_gamma};
use crate::spectrum::Spectrum;
use crate::{invalid, Error, Result};
use serde::Serialize;
use std::sync::Arc;

const QUAD_TOL: f64 = 1e-13;

pub type Density = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct MeasureSpec {
    pub density: Density,
    pub support_radius_sq: f64,
    pub description: String,
    /// Break points of a tabulated density; moments are integrated panel by
    /// panel between them.
    pub knots: Option<Arc<Vec<f64>>>,
}

impl std::fmt::Debug for MeasureSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MeasureSpec")
            .field("support_radius_sq", &self.support_radius_sq)
            .field("description", &self.description)
            .finish()
    }
}

impl MeasureSpec {
    pub fn new(density: impl Fn(f64) -> f64 + Send + Sync + 'static, description: impl Into<String>) -> Self {
        MeasureSpec {
            density: Arc::new(density),
            support_radius_sq: f64::INFINITY,
            description: description.into(),
            knots: None,
        }
    }

    /// Piecewise-linear interpolation of tabulated (u, h) pairs, zero past the
    /// last abscissa.
    pub fn tabulated(u: Vec<f64>, h: Vec<f64>, description: impl Into<String>) -> Result<Self> {
        if u.len() != h.len() || u.len() < 2 {
            return Err(invalid("table", "need at least two (u, h) pairs of equal length"));
        }
        if u[0] != 0.0 || u.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("table", "abscissae must start at 0 and increase"));
        }
        if h.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(invalid("table", "density values must be finite and non-negative"));
        }
        let knots = Arc::new(u.clone());
        let density = move |x: f64| {
            if x >= *u.last().unwrap() {
                return 0.0;
            }
            let k = u.partition_point(|&v| v <= x).max(1) - 1;
            let t = (x - u[k]) / (u[k + 1] - u[k]);
            h[k] + t * (h[k + 1] - h[k])
        };
        let mut m = MeasureSpec::new(density, description);
        m.knots = Some(knots);
        Ok(m)
    }

    /// h(u) = e^{−u}/π for eₙ = n.
    pub fn harmonic() -> Self {
        MeasureSpec::new(|u: f64| (-u).exp() / std::f64::consts::PI, "harmonic: exp(-u)/pi")
    }

    /// The printed Pöschl–Teller weight (2/π) I_υ(2r) K_{υ/2}(2r) against
    /// r dr dφ, converted to h(u) = c₀² · weight.
    pub fn pt_printed(upsilon: f64) -> Result<Self> {
        Self::pt_with_order(upsilon, upsilon / 2.0)
    }

    /// The same construction with K_ν of a free order.
    pub fn pt_with_order(upsilon: f64, nu: f64) -> Result<Self> {
        check_upsilon(upsilon)?;
        if !(nu.is_finite() && nu >= 0.0) {
            return Err(invalid("nu", "must be finite and non-negative"));
        }
        let ln_pref = (2.0 / std::f64::consts::PI).ln() - log_gamma(upsilon + 1.0)?;
        let density = move |u: f64| pt_h(u, upsilon, nu, ln_pref);
        Ok(MeasureSpec::new(
            density,
            format!("poschl-teller: (2/(pi Gamma(u+1))) r^u K_{nu}(2r), upsilon = {upsilon}"),
        ))
    }

    /// K order equal to υ, which reproduces f(n−1)/π exactly.
    pub fn pt_corrected(upsilon: f64) -> Result<Self> {
        Self::pt_with_order(upsilon, upsilon)
    }
}

fn check_upsilon(upsilon: f64) -> Result<()> {
    if !(upsilon.is_finite() && upsilon >= 2.0) {
        return Err(invalid("upsilon", "must satisfy υ ≥ 2"));
    }
    Ok(())
}

/// h(u) = (2/(πΓ(υ+1))) r^υ K_ν(2r) with u = r², in log form.
fn pt_h(u: f64, upsilon: f64, nu: f64, ln_pref: f64) -> f64 {
    if u <= 0.0 {
        // r^υ K_ν(2r) ~ ½Γ(ν) r^{υ−ν} as r → 0
        return if nu > upsilon {
            f64::INFINITY
        } else if nu == upsilon {
            (ln_pref + log_gamma(nu).unwrap_or(f64::NAN)).exp() * 0.5
        } else {
            0.0
        };
    }
    let r = u.sqrt();
    match bessel_k_scaled(nu, 2.0 * r) {
        Ok(k) => (ln_pref + upsilon * r.ln() + k.ln() - 2.0 * r).exp(),
        Err(_) => f64::NAN,
    }
}

/// (2/π) I_υ(2r) K_{υ/2}(2r) exactly as printed, with scaled Bessel
/// functions so that the exponentials cancel analytically.
pub fn pt_measure_density(r: f64, upsilon: f64) -> Result<f64> {
    pt_measure_density_order(r, upsilon, upsilon / 2.0)
}

pub fn pt_measure_density_order(r: f64, upsilon: f64, nu: f64) -> Result<f64> {
    check_upsilon(upsilon)?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(invalid("r", "must be finite and non-negative"));
    }
    if r == 0.0 {
        // I_υ(2r)K_ν(2r) ~ r^υ/Γ(υ+1) · Γ(ν)/(2 r^ν)
        return Ok(if nu < upsilon {
            0.0
        } else {
            (2.0 / std::f64::consts::PI) * 0.5 * (log_gamma(nu)? - log_gamma(upsilon + 1.0)?).exp()
        });
    }
    let i = bessel_i_scaled(upsilon, 2.0 * r)?;
    let k = bessel_k_scaled(nu, 2.0 * r)?;
    Ok(2.0 / std::f64::consts::PI * i * k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentRow {
    pub n: usize,
    pub moment_numeric: f64,
    pub moment_target: f64,
    pub rel_residual: f64,
    pub quadrature_error: f64,
}

impl MomentRow {
    pub const FIELDS: [&'static str; 4] = ["n", "moment_numeric", "moment_target", "rel_residual"];
}

fn check_support(m: &MeasureSpec, s: &Spectrum) -> Result<()> {
    if m.support_radius_sq.is_finite() || !s.radius_of_convergence().is_infinite() {
        return Err(Error::Unsupported(
            "measures on a finite convergence disk are not supported".into(),
        ));
    }
    Ok(())
}

/// ∫₀^∞ h(u) u^{n−1} du by adaptive quadrature on doubling panels.
pub fn moment(m: &MeasureSpec, n: usize) -> Result<(f64, f64)> {
    let h = m.density.clone();
    let p = n as f64 - 1.0;
    let f = move |u: f64| {
        let v = h(u);
        if v == 0.0 {
            0.0
        } else if p == 0.0 {
            v
        } else {
            v * u.powf(p)
        }
    };
    if let Some(knots) = &m.knots {
        let mut total = (0.0, 0.0);
        for w in knots.windows(2) {
            let r = integrate(&f, w[0], w[1], 0.0, QUAD_TOL, 50)?;
            total.0 += r.value;
            total.1 += r.error;
        }
        return Ok(total);
    }
    // start the first panel near the bulk of u^{n−1} e^{−u}-like integrands
    let width = (n as f64).max(1.0);
    let r = integrate_half_line(&f, width, QUAD_TOL)?;
    Ok((r.value, r.error))
}

/// Relative residuals of ∫ h u^{n−1} du against f(n−1)/π for n = 1…n_max.
pub fn moment_residuals(m: &MeasureSpec, s: &Spectrum, n_max: usize) -> Result<Vec<MomentRow>> {
    check_support(m, s)?;
    if n_max == 0 {
        return Err(invalid("n_max", "must be positive"));
    }
    if n_max > s.max_index() {
        return Err(Error::IndexOutOfRange {
            n: n_max,
            max: s.max_index(),
        });
    }
    (1..=n_max)
        .map(|n| {
            let (numeric, err) = moment(m, n)?;
            let target = s.factorial_moment(n - 1)?.value() / std::f64::consts::PI;
            Ok(MomentRow {
                n,
                moment_numeric: numeric,
                moment_target: target,
                rel_residual: ((numeric - target) / target).abs(),
                quadrature_error: err / target,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnityReport {
    /// π ∫h uⁿ du / f(n) for n < trunc.
    pub diagonal: Vec<f64>,
    pub max_deviation: f64,
}

impl UnityReport {
    /// The full operator in the n-basis; off-diagonal entries vanish by the
    /// φ-integration.
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.diagonal.len();
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { self.diagonal[i] } else { 0.0 }).collect())
            .collect()
    }
}

/// ∫|z,α⟩⟨z,α| dμ restricted to n < trunc.  The phases e^{−iαeₙ} cancel in
/// every diagonal element, so α does not enter.
pub fn unity_resolution_check(m: &MeasureSpec, s: &Spectrum, alpha: f64, trunc: usize) -> Result<UnityReport> {
    if !alpha.is_finite() {
        return Err(invalid("alpha", "must be finite"));
    }
    if trunc == 0 {
        return Err(invalid("trunc", "must be positive"));
    }
    let rows = moment_residuals(m, s, trunc)?;
    let diagonal: Vec<f64> = rows.iter().map(|r| r.moment_numeric / r.moment_target).collect();
    let max_deviation = diagonal.iter().map(|d| (d - 1.0).abs()).fold(0.0, f64::max);
    Ok(UnityReport {
        diagonal,
        max_deviation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderFit {
    pub upsilon: f64,
    pub printed_order: f64,
    pub fitted_order: f64,
    pub printed_max_residual: f64,
    pub fitted_max_residual: f64,
}

/// Fits the K order ν in h(u) = (2/(πΓ(υ+1))) r^υ K_ν(2r) to the moment
/// conditions n = 1…n_max by golden-section search on
/// Σ ln²(moment/target) over ν ∈ [0, 2υ].
pub fn fit_k_order(s: &Spectrum, upsilon: f64, n_max: usize) -> Result<OrderFit> {
    let objective = |nu: f64| -> Result<f64> {
        let m = MeasureSpec::pt_with_order(upsilon, nu)?;
        Ok(moment_residuals(&m, s, n_max)?
            .iter()
            .map(|r| (r.moment_numeric / r.moment_target).ln().powi(2))
            .sum())
    };
    let max_res = |nu: f64| -> Result<f64> {
        let m = MeasureSpec::pt_with_order(upsilon, nu)?;
        Ok(moment_residuals(&m, s, n_max)?
            .iter()
            .map(|r| r.rel_residual)
            .fold(0.0, f64::max))
    };
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, 2.0 * upsilon);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (objective(x1)?, objective(x2)?);
    while hi - lo > 1e-9 * upsilon {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = objective(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = objective(x2)?;
        }
    }
    let fitted = 0.5 * (lo + hi);
    Ok(OrderFit {
        upsilon,
        printed_order: upsilon / 2.0,
        fitted_order: fitted,
        printed_max_residual: max_res(upsilon / 2.0)?,
        fitted_max_residual: max_res(fitted)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_moments() {
        let s = Spectrum::harmonic(20).unwrap();
        let rows = moment_residuals(&MeasureSpec::harmonic(), &s, 15).unwrap();
        for r in rows {
            assert!(r.rel_residual < 1e-10, "{r:?}");
        }
    }

    #[test]
    fn normalization_moment() {
        let s = Spectrum::poschl_teller(1.5, 1.5, 4).unwrap();
        let m = MeasureSpec::pt_corrected(3.0).unwrap();
        let r = &moment_residuals(&m, &s, 1).unwrap()[0];
        assert!((r.moment_target - 1.0 / std::f64::consts::PI).abs() < 1e-16);
        assert!(r.rel_residual < 1e-10);
    }

    #[test]
    fn density_small_r() {
        // order υ/2 < υ: the density vanishes at the origin like r^{υ/2}
        let d1 = pt_measure_density(1e-3, 3.0).unwrap();
        let d2 = pt_measure_density(2e-3, 3.0).unwrap();
        assert!((d2 / d1 - 2f64.powf(1.5)).abs() < 1e-3);
        assert_eq!(pt_measure_density(0.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn finite_radius_unsupported() {
        let e: Vec<f64> = (0..40)
            .map(|n| if n == 0 { 0.0 } else { 2.0 - 2f64.powi(1 - n) })
            .collect();
        let s = Spectrum::custom(e).unwrap();
        assert_eq!(
            moment_residuals(&MeasureSpec::harmonic(), &s, 5).unwrap_err().code(),
            "UNSUPPORTED"
        );
    }

    #[test]
    fn tabulated_density() {
        let u: Vec<f64> = (0..=4000).map(|k| k as f64 * 0.01).collect();
        let h: Vec<f64> = u.iter().map(|x| (-x).exp() / std::f64::consts::PI).collect();
        let m = MeasureSpec::tabulated(u, h, "table").unwrap();
        let s = Spectrum::harmonic(5).unwrap();
        let rows = moment_residuals(&m, &s, 3).unwrap();
        // trapezoidal interpolation error is O(h²)
        assert!(rows.iter().all(|r| r.rel_residual < 1e-4), "{rows:?}");
    }
}
