//! Discrete, non-degenerate spectra eₙ with e₀ = 0 and the running product
//! f(n) = e₁e₂⋯eₙ, kept in log space.

use crate::{invalid, Error, Result};

/// Largest index a built-in spectrum can be extended to on demand.
pub const BUILTIN_INDEX_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumKind {
    /// eₙ = n
    Harmonic,
    /// eₙ = n(n + 2), the Pöschl–Teller family at κ = λ = 1.
    InfiniteWell,
    /// eₙ = n(n + κ + λ) with κ, λ > 1.
    PoschlTeller {
        kappa: f64,
        lambda_pot: f64,
    },
    Custom,
}

impl SpectrumKind {
    /// Closed-form energy, `None` for custom spectra.
    pub fn energy(&self, n: usize) -> Option<f64> {
        let n = n as f64;
        match *self {
            SpectrumKind::Harmonic => Some(n),
            SpectrumKind::InfiniteWell => Some(n * (n + 2.0)),
            SpectrumKind::PoschlTeller { kappa, lambda_pot } => Some(n * (n + kappa + lambda_pot)),
            SpectrumKind::Custom => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpectrumKind::Harmonic => "harmonic",
            SpectrumKind::InfiniteWell => "infinite_well",
            SpectrumKind::PoschlTeller { .. } => "poschl_teller",
            SpectrumKind::Custom => "custom",
        }
    }

    /// κ + λ for the Pöschl–Teller family (2 for the infinite well).
    pub fn upsilon(&self) -> Option<f64> {
        match *self {
            SpectrumKind::InfiniteWell => Some(2.0),
            SpectrumKind::PoschlTeller { kappa, lambda_pot } => Some(kappa + lambda_pot),
            _ => None,
        }
    }
}

/// ln f(n) together with n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorialMoment {
    pub n: usize,
    pub log_value: f64,
}

impl FactorialMoment {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

/// R = lim ⁿ√f(n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Infinite,
    /// Extrapolated limit with a confidence interval.
    Finite {
        estimate: f64,
        lower: f64,
        upper: f64,
    },
    /// The stored terms do not settle; the last computed ⁿ√f(n) is reported.
    Unresolved {
        last_estimate: f64,
    },
}

impl Radius {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Radius::Infinite)
    }

    /// Best available value, `f64::INFINITY` for an infinite radius.
    pub fn value(&self) -> f64 {
        match *self {
            Radius::Infinite => f64::INFINITY,
            Radius::Finite { estimate, .. } => estimate,
            Radius::Unresolved { last_estimate } => last_estimate,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    kind: SpectrumKind,
    energies: Vec<f64>,
    log_f: Vec<f64>,
}

impl Spectrum {
    pub fn builtin(kind: SpectrumKind, n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(invalid("n_max", "must be at least 1"));
        }
        if n_max > BUILTIN_INDEX_LIMIT {
            return Err(invalid("n_max", format!("must not exceed {BUILTIN_INDEX_LIMIT}")));
        }
        match kind {
            SpectrumKind::Custom => {
                return Err(invalid("kind", "custom spectra need explicit energies"));
            }
            SpectrumKind::PoschlTeller { kappa, lambda_pot } => {
                if !(kappa > 1.0) || !kappa.is_finite() {
                    return Err(invalid("kappa", format!("{kappa} must be > 1")));
                }
                if !(lambda_pot > 1.0) || !lambda_pot.is_finite() {
                    return Err(invalid("lambda_pot", format!("{lambda_pot} must be > 1")));
                }
            }
            _ => {}
        }
        let energies = (0..=n_max).map(|n| kind.energy(n).unwrap()).collect();
        Self::validated(kind, energies)
    }

    pub fn harmonic(n_max: usize) -> Result<Self> {
        Self::builtin(SpectrumKind::Harmonic, n_max)
    }

    pub fn infinite_well(n_max: usize) -> Result<Self> {
        Self::builtin(SpectrumKind::InfiniteWell, n_max)
    }

    pub fn poschl_teller(kappa: f64, lambda_pot: f64, n_max: usize) -> Result<Self> {
        Self::builtin(SpectrumKind::PoschlTeller { kappa, lambda_pot }, n_max)
    }

    /// A spectrum given as an explicit array e₀, e₁, …
    pub fn custom(energies: Vec<f64>) -> Result<Self> {
        if energies.len() < 2 {
            return Err(Error::InvalidSpectrum("need at least e₀ and e₁".into()));
        }
        Self::validated(SpectrumKind::Custom, energies)
    }

    fn validated(kind: SpectrumKind, energies: Vec<f64>) -> Result<Self> {
        if energies[0] != 0.0 {
            return Err(Error::InvalidSpectrum(format!(
                "e₀ = {} (must be exactly 0)",
                energies[0]
            )));
        }
        for (n, w) in energies.windows(2).enumerate() {
            if !w[1].is_finite() {
                return Err(Error::InvalidSpectrum(format!("e_{} is not finite", n + 1)));
            }
            if !(w[1] > w[0]) {
                return Err(Error::InvalidSpectrum(format!(
                    "not strictly increasing: e_{} = {} ≤ e_{} = {}",
                    n + 1,
                    w[1],
                    n,
                    w[0]
                )));
            }
        }
        // Neumaier-compensated running sum of ln eₙ
        let mut log_f = Vec::with_capacity(energies.len());
        log_f.push(0.0);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        for e in &energies[1..] {
            let x = e.ln();
            let t = sum + x;
            if sum.abs() >= x.abs() {
                comp += (sum - t) + x;
            } else {
                comp += (x - t) + sum;
            }
            sum = t;
            log_f.push(sum + comp);
        }
        Ok(Spectrum { kind, energies, log_f })
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn max_index(&self) -> usize {
        self.energies.len() - 1
    }

    /// True when eₙ is known in closed form for every n.
    pub fn is_analytic(&self) -> bool {
        self.kind != SpectrumKind::Custom
    }

    pub fn energy(&self, n: usize) -> Result<f64> {
        self.energies.get(n).copied().ok_or(Error::IndexOutOfRange {
            n,
            max: self.max_index(),
        })
    }

    /// Stored energy, or the closed form beyond the stored range.
    pub fn energy_or_formula(&self, n: usize) -> Option<f64> {
        self.energies.get(n).copied().or_else(|| self.kind.energy(n))
    }

    /// ln f(n) without bounds reporting (panics past the stored range).
    pub(crate) fn log_f(&self, n: usize) -> f64 {
        self.log_f[n]
    }

    pub fn factorial_moment(&self, n: usize) -> Result<FactorialMoment> {
        self.log_f
            .get(n)
            .map(|&log_value| FactorialMoment { n, log_value })
            .ok_or(Error::IndexOutOfRange {
                n,
                max: self.max_index(),
            })
    }

    /// The same spectrum stored up to at least `n_max` (built-ins are
    /// regenerated, custom spectra cannot grow).
    pub fn extended_to(&self, n_max: usize) -> Result<Spectrum> {
        if n_max <= self.max_index() {
            return Ok(self.clone());
        }
        match self.kind {
            SpectrumKind::Custom => Err(Error::IndexOutOfRange {
                n: n_max,
                max: self.max_index(),
            }),
            kind => Spectrum::builtin(kind, n_max),
        }
    }

    /// Highest index usable for a construction capped at `cap`.
    pub(crate) fn reachable_index(&self, cap: usize) -> usize {
        if self.is_analytic() {
            cap
        } else {
            cap.min(self.max_index())
        }
    }

    /// R = lim ⁿ√f(n).  Built-in spectra grow without bound, so R = ∞.  For a
    /// custom spectrum the sequence sₙ = ⁿ√f(n) is examined over the last
    /// quarter of the stored terms: a clear power-law growth of sₙ is reported
    /// as infinite, otherwise sₙ ≈ R + b/n is fitted by least squares.
    pub fn radius_of_convergence(&self) -> Radius {
        if self.is_analytic() {
            return Radius::Infinite;
        }
        let n_max = self.max_index();
        let s = |n: usize| (self.log_f[n] / n as f64).exp();
        let last = s(n_max);
        let start = (3 * n_max / 4).max(1);
        if n_max - start + 1 < 8 {
            return Radius::Unresolved { last_estimate: last };
        }
        let idx: Vec<usize> = (start..=n_max).collect();
        let m = idx.len() as f64;

        // log-log slope of sₙ against n
        let lx: Vec<f64> = idx.iter().map(|&n| (n as f64).ln()).collect();
        let ly: Vec<f64> = idx.iter().map(|&n| self.log_f[n] / n as f64).collect();
        let slope = fit_line(&lx, &ly).1;
        if slope > 0.25 {
            return Radius::Infinite;
        }

        // sₙ = R + b/n
        let x: Vec<f64> = idx.iter().map(|&n| 1.0 / n as f64).collect();
        let y: Vec<f64> = idx.iter().map(|&n| s(n)).collect();
        let (r, b) = fit_line(&x, &y);
        let resid: f64 = x.iter().zip(&y).map(|(xi, yi)| (yi - r - b * xi).powi(2)).sum::<f64>();
        let sigma = (resid / (m - 2.0)).sqrt();
        let mean_x = x.iter().sum::<f64>() / m;
        let sxx: f64 = x.iter().map(|xi| (xi - mean_x).powi(2)).sum();
        let se_r = sigma * (1.0 / m + mean_x * mean_x / sxx).sqrt();
        // the fit must explain the data and the limit must not undercut the
        // geometric means already seen
        let explained = sigma <= 1e-3 * r.abs();
        if !r.is_finite() || !explained || r < last * (1.0 - 1e-6) {
            return Radius::Unresolved { last_estimate: last };
        }
        let half_width = (3.0 * se_r).max(1e-3 * (r - last).abs()).max(r * f64::EPSILON * 16.0);
        Radius::Finite {
            estimate: r,
            lower: (r - half_width).max(last),
            upper: r + half_width,
        }
    }
}

/// Least-squares line y = a + b x, returns (a, b).
fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let b = sxy / sxx;
    (my - b * mx, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_energies() {
        assert_eq!(Spectrum::harmonic(3).unwrap().energies(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(Spectrum::infinite_well(3).unwrap().energies(), &[0.0, 3.0, 8.0, 15.0]);
        assert_eq!(
            Spectrum::poschl_teller(1.5, 1.5, 3).unwrap().energies(),
            &[0.0, 4.0, 10.0, 18.0]
        );
    }

    #[test]
    fn builtin_rejections() {
        assert!(Spectrum::harmonic(0).is_err());
        assert!(Spectrum::poschl_teller(1.0, 2.0, 4).is_err());
        assert!(Spectrum::poschl_teller(2.0, 0.5, 4).is_err());
        assert!(Spectrum::builtin(SpectrumKind::Custom, 4).is_err());
    }

    #[test]
    fn custom_validation() {
        assert!(Spectrum::custom(vec![0.1, 1.0]).is_err());
        assert!(Spectrum::custom(vec![0.0, 1.0, 1.0]).is_err());
        assert!(Spectrum::custom(vec![0.0, 2.0, 1.0]).is_err());
        assert!(Spectrum::custom(vec![0.0, 1.0, f64::INFINITY]).is_err());
        assert!(Spectrum::custom(vec![0.0, 0.5, 2.0]).is_ok());
    }

    #[test]
    fn factorial_moments() {
        let h = Spectrum::harmonic(10).unwrap();
        assert_eq!(h.factorial_moment(0).unwrap().log_value, 0.0);
        assert!((h.factorial_moment(5).unwrap().value() - 120.0).abs() < 1e-12 * 120.0);
        let w = Spectrum::infinite_well(4).unwrap();
        assert!((w.factorial_moment(2).unwrap().value() - 24.0).abs() < 1e-12 * 24.0);
        assert!(w.factorial_moment(5).is_err());
    }

    #[test]
    fn builtin_radius_is_infinite() {
        assert!(Spectrum::harmonic(50).unwrap().radius_of_convergence().is_infinite());
        assert!(Spectrum::poschl_teller(2.0, 3.0, 50)
            .unwrap()
            .radius_of_convergence()
            .is_infinite());
    }

    #[test]
    fn custom_radius_power_growth_is_infinite() {
        let e: Vec<f64> = (0..200).map(|n| (n as f64).powf(1.5)).collect();
        assert!(Spectrum::custom(e).unwrap().radius_of_convergence().is_infinite());
    }

    #[test]
    fn extension_of_builtins() {
        let s = Spectrum::infinite_well(4).unwrap().extended_to(10).unwrap();
        assert_eq!(s.max_index(), 10);
        assert_eq!(s.energy(10).unwrap(), 120.0);
        let c = Spectrum::custom(vec![0.0, 1.0, 3.0]).unwrap();
        assert!(c.extended_to(5).is_err());
        assert_eq!(c.energy_or_formula(7), None);
    }
}
