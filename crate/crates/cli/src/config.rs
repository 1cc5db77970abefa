//! Run configuration: one TOML file, every physics parameter explicit.
//!
//! ```toml
//! tol = 1e-8                    # optional; verification tolerance (top level, before any table)
//!
//! [spectrum]
//! kind = "poschl_teller"        # harmonic | infinite_well | poschl_teller | custom
//! kappa = 1.5                   # poschl_teller only
//! lambda = 1.5                  # poschl_teller only
//! n_max = 4095                  # builtin kinds
//! # energies = [0.0, 1.0, 3.0]  # custom only; e₀ = 0, strictly increasing
//!
//! [state]                       # build, verify, wavefunction
//! lambda = [1.0, 0.0]           # [re, im]
//! z = [1.5, 0.0]
//! alpha = 0.0                   # optional, 0 if omitted
//! route = "recurrence"          # optional: recurrence | continued_fraction | closed_form
//! trunc = 120                   # optional fixed truncation; automatic if omitted
//!
//! [sweep]                       # λ grid outer, z grid inner, first component slowest
//! lambda = { modulus = { start = 1.0, stop = 1.0, count = 1 }, phase = { start = -1.2, stop = 1.2, count = 9 } }
//! z = { re = { start = 0.5, stop = 2.0, count = 4 }, im = { start = 0.0, stop = 0.0, count = 1 } }
//!
//! [measure]
//! density = "pt_corrected"      # harmonic | pt_printed | pt_corrected | pt_order
//! order = 3.0                   # pt_order only: the K order
//! n_max = 10
//!
//! [wavefunction]                # Pöschl–Teller and infinite-well spectra
//! a = 1.0                       # length scale, x ∈ (0, πa)
//! levels = [0, 1, 2]
//! points = 200                  # midpoint grid
//! norm = "corrected"            # corrected | printed
//! ```
//!
//! Grids accept either `{ re, im }` or `{ modulus, phase }` axes.

use gis_core::{Complex64, Route, Spectrum, Truncation};
use serde::Deserialize;
use std::path::Path;

pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub tol: Option<f64>,
    pub spectrum: SpectrumConfig,
    pub state: Option<StateConfig>,
    pub sweep: Option<SweepConfig>,
    pub measure: Option<MeasureConfig>,
    pub wavefunction: Option<WavefunctionConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKindName {
    Harmonic,
    InfiniteWell,
    PoschlTeller,
    Custom,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub kind: SpectrumKindName,
    pub kappa: Option<f64>,
    pub lambda: Option<f64>,
    pub n_max: Option<usize>,
    pub energies: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteName {
    Recurrence,
    ContinuedFraction,
    ClosedForm,
}

impl From<RouteName> for Route {
    fn from(r: RouteName) -> Route {
        match r {
            RouteName::Recurrence => Route::Recurrence,
            RouteName::ContinuedFraction => Route::ContinuedFraction,
            RouteName::ClosedForm => Route::ClosedForm,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    pub lambda: [f64; 2],
    pub z: [f64; 2],
    #[serde(default)]
    pub alpha: f64,
    pub route: Option<RouteName>,
    pub trunc: Option<usize>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Axis {
    fn validate(&self, name: &str) -> Result<(), ConfigError> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(bad(format!("{name}: bounds must be finite")));
        }
        match self.count {
            0 => Err(bad(format!("{name}: count must be at least 1"))),
            1 if self.start != self.stop => Err(bad(format!("{name}: a single point needs start = stop"))),
            1 => Ok(()),
            _ if self.stop <= self.start => Err(bad(format!("{name}: need start < stop"))),
            _ => Ok(()),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.start + step * k as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum ComplexGrid {
    Cartesian { re: Axis, im: Axis },
    Polar { modulus: Axis, phase: Axis },
}

impl ComplexGrid {
    fn validate(&self, name: &str) -> Result<(), ConfigError> {
        match self {
            ComplexGrid::Cartesian { re, im } => {
                re.validate(&format!("{name}.re"))?;
                im.validate(&format!("{name}.im"))
            }
            ComplexGrid::Polar { modulus, phase } => {
                modulus.validate(&format!("{name}.modulus"))?;
                phase.validate(&format!("{name}.phase"))
            }
        }
    }

    pub fn points(&self) -> Vec<Complex64> {
        match self {
            ComplexGrid::Cartesian { re, im } => re
                .points()
                .into_iter()
                .flat_map(|a| im.points().into_iter().map(move |b| Complex64::new(a, b)))
                .collect(),
            ComplexGrid::Polar { modulus, phase } => modulus
                .points()
                .into_iter()
                .flat_map(|r| phase.points().into_iter().map(move |t| Complex64::from_polar(r, t)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub lambda: ComplexGrid,
    pub z: ComplexGrid,
    #[serde(default)]
    pub alpha: f64,
    pub route: Option<RouteName>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityName {
    Harmonic,
    PtPrinted,
    PtCorrected,
    PtOrder,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureConfig {
    pub density: DensityName,
    pub order: Option<f64>,
    pub n_max: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormName {
    Corrected,
    Printed,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavefunctionConfig {
    pub a: f64,
    pub levels: Vec<usize>,
    pub points: usize,
    pub norm: NormName,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let cfg: Config = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        if let Some(t) = cfg.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(bad("tol must be positive"));
            }
        }
        if let Some(sw) = &cfg.sweep {
            sw.lambda.validate("sweep.lambda")?;
            sw.z.validate("sweep.z")?;
        }
        if let Some(w) = &cfg.wavefunction {
            if !(w.a > 0.0 && w.a.is_finite()) {
                return Err(bad("wavefunction.a must be positive"));
            }
            if w.points == 0 {
                return Err(bad("wavefunction.points must be at least 1"));
            }
        }
        Ok(cfg)
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOL)
    }

    pub fn build_spectrum(&self) -> Result<Spectrum, ConfigError> {
        let sc = &self.spectrum;
        let need_n = || sc.n_max.ok_or_else(|| bad("spectrum.n_max is required"));
        let forbid = |present: bool, key: &str| {
            if present {
                Err(bad(format!("spectrum.{key} does not apply to kind {:?}", sc.kind)))
            } else {
                Ok(())
            }
        };
        let s = match sc.kind {
            SpectrumKindName::Harmonic | SpectrumKindName::InfiniteWell => {
                forbid(sc.kappa.is_some(), "kappa")?;
                forbid(sc.lambda.is_some(), "lambda")?;
                forbid(sc.energies.is_some(), "energies")?;
                if sc.kind == SpectrumKindName::Harmonic {
                    Spectrum::harmonic(need_n()?)
                } else {
                    Spectrum::infinite_well(need_n()?)
                }
            }
            SpectrumKindName::PoschlTeller => {
                forbid(sc.energies.is_some(), "energies")?;
                let kappa = sc.kappa.ok_or_else(|| bad("spectrum.kappa is required"))?;
                let lambda = sc.lambda.ok_or_else(|| bad("spectrum.lambda is required"))?;
                Spectrum::poschl_teller(kappa, lambda, need_n()?)
            }
            SpectrumKindName::Custom => {
                forbid(sc.kappa.is_some(), "kappa")?;
                forbid(sc.lambda.is_some(), "lambda")?;
                forbid(sc.n_max.is_some(), "n_max")?;
                let e = sc
                    .energies
                    .clone()
                    .ok_or_else(|| bad("spectrum.energies is required"))?;
                Spectrum::custom(e)
            }
        };
        s.map_err(|e| bad(e.to_string()))
    }

    pub fn state(&self) -> Result<&StateConfig, ConfigError> {
        self.state
            .as_ref()
            .ok_or_else(|| bad("this command needs a [state] table"))
    }
}

impl StateConfig {
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.lambda[0], self.lambda[1])
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.z[0], self.z[1])
    }

    pub fn route(&self) -> Route {
        self.route.map(Route::from).unwrap_or(Route::Recurrence)
    }

    pub fn truncation(&self, override_trunc: Option<usize>) -> Truncation {
        match override_trunc.or(self.trunc) {
            Some(n) => Truncation::Fixed(n),
            None => Truncation::Auto,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "[spectrum]\nkind = \"harmonic\"\nn_max = 100\n";

    #[test]
    fn axis_points_include_both_ends() {
        let a = Axis {
            start: 0.0,
            stop: 1.0,
            count: 5,
        };
        assert_eq!(a.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn rejects_unordered_grid() {
        let text = format!(
            "{BASE}[sweep]\nlambda = {{ re = {{ start = 2.0, stop = 1.0, count = 3 }}, im = {{ start = 0.0, stop = 0.0, count = 1 }} }}\n\
             z = {{ re = {{ start = 1.0, stop = 1.0, count = 1 }}, im = {{ start = 0.0, stop = 0.0, count = 1 }} }}\n"
        );
        assert!(Config::parse(&text).unwrap_err().0.contains("start < stop"));
    }

    #[test]
    fn polar_grid_order() {
        let g = ComplexGrid::Polar {
            modulus: Axis {
                start: 1.0,
                stop: 2.0,
                count: 2,
            },
            phase: Axis {
                start: 0.0,
                stop: 0.0,
                count: 1,
            },
        };
        assert_eq!(g.points(), vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
    }

    #[test]
    fn unknown_keys_and_misplaced_parameters_fail() {
        assert!(Config::parse(&format!("{BASE}bogus = 1\n")).is_err());
        let cfg = Config::parse("[spectrum]\nkind = \"harmonic\"\nn_max = 10\nkappa = 2.0\n").unwrap();
        assert!(cfg.build_spectrum().is_err());
        let cfg = Config::parse("[spectrum]\nkind = \"poschl_teller\"\nkappa = 1.5\nn_max = 10\n").unwrap();
        assert!(cfg.build_spectrum().unwrap_err().0.contains("lambda"));
    }

    #[test]
    fn state_defaults() {
        let cfg = Config::parse(&format!("{BASE}[state]\nlambda = [1.0, 0.0]\nz = [0.5, 0.0]\n")).unwrap();
        let st = cfg.state().unwrap();
        assert_eq!(st.alpha, 0.0);
        assert_eq!(st.route(), Route::Recurrence);
        assert_eq!(st.truncation(None), Truncation::Auto);
        assert_eq!(st.truncation(Some(40)), Truncation::Fixed(40));
        assert_eq!(cfg.tol(), DEFAULT_TOL);
    }
}
