//! TOML run configurations for the `pattern`, `plan` and `fit` commands.
//!
//! A physical scenario names an atom and a grating:
//!
//! ```toml
//! atom = "Model15"
//! catalog = "my_catalog.toml"   # optional; the built-in catalog otherwise
//! wavelength_m = 5e-10
//! U_target_eV = 1e-3            # or intensity_W_m2, exactly one
//! pulse_duration_s = 1e-12
//! spot_radius_m = 1e-6
//! interaction_time_s = 1e-12    # optional; hbar / U otherwise
//!
//! [overrides]                   # optional species fields
//! alpha_m3 = 1e-29
//!
//! [thresholds]                  # optional plan thresholds
//! interaction_volume = 1e-12
//! ```
//!
//! A pattern may instead be given directly by its phases:
//!
//! ```toml
//! [phases]
//! theta0 = 1.0
//! theta_a2 = 0.0   # optional
//! theta_c4 = 0.0   # optional
//! ```
//!
//! A fit configuration points at an observation CSV:
//!
//! ```toml
//! observations = "observed.csv"
//! model = "quadrupole"          # or "dipole"
//!
//! [init]
//! theta0 = 0.5
//!
//! [laser]                       # optional; enables the polarizability report
//! intensity_W_m2 = 1.9e14
//! wavelength_m = 5e-10
//! interaction_time_s = 6.6e-13
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::diffraction::PhaseSet;
use crate::feasibility::{self, Thresholds};
use crate::fitting::LaserContext;
use crate::potentials::catalog::{Catalog, CatalogError};
use crate::potentials::{lightshift_depth, AtomSpecies, InvalidField, LaserGrating};
use crate::units;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("{0}")]
    Parse(String),
    #[error("{key}: {reason}")]
    Invalid { key: &'static str, reason: String },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Field(#[from] InvalidField),
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })
}

fn resolve(base: Option<&Path>, p: &str) -> PathBuf {
    let p = Path::new(p);
    match base {
        Some(dir) if p.is_relative() => dir.join(p),
        _ => p.to_path_buf(),
    }
}

fn parse_toml<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string().trim_end().to_string()))
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub mass_kg: Option<f64>,
    pub alpha_m3: Option<f64>,
    #[serde(rename = "A_dq")]
    pub a_dq: Option<f64>,
    #[serde(rename = "C_qq")]
    pub c_qq: Option<f64>,
    #[serde(rename = "ionization_energy_eV")]
    pub ionization_energy_ev: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseConfig {
    pub theta0: f64,
    #[serde(default)]
    pub theta_a2: f64,
    #[serde(default)]
    pub theta_c4: f64,
}

impl PhaseConfig {
    pub fn phase_set(&self) -> PhaseSet {
        PhaseSet::tied(self.theta0, self.theta_a2, self.theta_c4)
    }
}

/// Either a physical scenario or a bare phase set.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub atom: Option<String>,
    pub catalog: Option<String>,
    pub wavelength_m: Option<f64>,
    #[serde(rename = "intensity_W_m2")]
    pub intensity_w_m2: Option<f64>,
    #[serde(rename = "U_target_eV")]
    pub u_target_ev: Option<f64>,
    pub pulse_duration_s: Option<f64>,
    pub spot_radius_m: Option<f64>,
    pub interaction_time_s: Option<f64>,
    #[serde(default)]
    pub overrides: Overrides,
    #[serde(default)]
    pub thresholds: Thresholds,
    pub phases: Option<PhaseConfig>,
}

/// A resolved physical scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub atom: AtomSpecies,
    pub laser: LaserGrating,
    /// Target potential depth, J.
    pub u_target: f64,
    /// Raman-Nath interaction time, s.
    pub interaction_time: f64,
    pub thresholds: Thresholds,
}

/// What the `pattern` command evaluates.
#[derive(Debug, Clone, PartialEq)]
pub enum PatternSource {
    Physical(Box<Scenario>),
    Phases(PhaseSet),
}

fn required(key: &'static str, v: Option<f64>) -> Result<f64, ConfigError> {
    v.ok_or(ConfigError::Invalid { key, reason: "missing".into() })
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        parse_toml(text)
    }

    pub fn load(path: &Path) -> Result<(Self, Option<PathBuf>), ConfigError> {
        let file = Self::parse(&read(path)?)?;
        Ok((file, path.parent().map(Path::to_path_buf)))
    }

    /// Resolve the physical scenario. `base` is the directory relative catalog paths refer to.
    pub fn scenario(&self, base: Option<&Path>) -> Result<Scenario, ConfigError> {
        let name = self.atom.as_deref().ok_or(ConfigError::Invalid { key: "atom", reason: "missing".into() })?;
        let catalog = match &self.catalog {
            Some(p) => Catalog::parse(&read(&resolve(base, p))?)?,
            None => Catalog::builtin(),
        };
        let mut atom = catalog.get(name)?.clone();
        let o = &self.overrides;
        if let Some(v) = o.mass_kg {
            atom.mass = v;
        }
        if let Some(v) = o.alpha_m3 {
            atom.alpha = v;
        }
        if let Some(v) = o.a_dq {
            atom.dipole_quadrupole = v;
        }
        if let Some(v) = o.c_qq {
            atom.quadrupole_quadrupole = v;
        }
        if let Some(v) = o.ionization_energy_ev {
            atom.ionization_energy = v;
        }
        atom.validate()?;

        let wavelength = required("wavelength_m", self.wavelength_m)?;
        let pulse = required("pulse_duration_s", self.pulse_duration_s)?;
        let spot = required("spot_radius_m", self.spot_radius_m)?;
        let (intensity, u_target) = match (self.intensity_w_m2, self.u_target_ev) {
            (Some(_), Some(_)) | (None, None) => {
                return Err(ConfigError::Invalid {
                    key: "intensity_W_m2",
                    reason: "give exactly one of intensity_W_m2 and U_target_eV".into(),
                })
            }
            (None, Some(u_ev)) => {
                if !(u_ev.is_finite() && u_ev > 0.0) {
                    return Err(ConfigError::Invalid { key: "U_target_eV", reason: format!("must be finite and > 0, got {u_ev}") });
                }
                let u = units::ev_to_joule(u_ev);
                let i = feasibility::required_intensity(&atom, u)
                    .map_err(|e| ConfigError::Invalid { key: "U_target_eV", reason: e.to_string() })?;
                (i, u)
            }
            (Some(i), None) => (i, 0.0),
        };
        let laser = LaserGrating::new(wavelength, intensity, pulse, spot)?;
        let u_target = if u_target > 0.0 { u_target } else { default_target(&atom, &laser) };
        let interaction_time = match self.interaction_time_s {
            Some(t) if t.is_finite() && t > 0.0 => t,
            Some(t) => {
                return Err(ConfigError::Invalid { key: "interaction_time_s", reason: format!("must be finite and > 0, got {t}") })
            }
            None => units::HBAR / u_target,
        };
        for (key, v) in [
            ("thresholds.interaction_volume", self.thresholds.interaction_volume),
            ("thresholds.min_photons", self.thresholds.min_photons),
            ("thresholds.max_gamma_tau", self.thresholds.max_gamma_tau),
            ("thresholds.nonlinear_intensity", self.thresholds.nonlinear_intensity),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::Invalid { key, reason: format!("must be finite and > 0, got {v}") });
            }
        }
        Ok(Scenario { atom, laser, u_target, interaction_time, thresholds: self.thresholds })
    }

    pub fn pattern_source(&self, base: Option<&Path>) -> Result<PatternSource, ConfigError> {
        match (&self.phases, &self.atom) {
            (Some(_), Some(_)) => Err(ConfigError::Invalid { key: "phases", reason: "give either [phases] or a physical scenario".into() }),
            (Some(p), None) => {
                for v in [p.theta0, p.theta_a2, p.theta_c4] {
                    if !v.is_finite() {
                        return Err(ConfigError::Invalid { key: "phases", reason: format!("phase must be finite, got {v}") });
                    }
                }
                Ok(PatternSource::Phases(p.phase_set()))
            }
            (None, _) => Ok(PatternSource::Physical(Box::new(self.scenario(base)?))),
        }
    }
}

/// Target depth when only the intensity is fixed: `α E0^2`, the same
/// convention the required intensity uses, so the two round-trip. A dark
/// grating has no depth of its own and is planned against the recoil energy.
fn default_target(atom: &AtomSpecies, laser: &LaserGrating) -> f64 {
    let u = 4.0 * lightshift_depth(atom, laser).abs();
    if u > 0.0 {
        u
    } else {
        let k = laser.wave_number();
        units::HBAR * units::HBAR * k * k / (2.0 * atom.mass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitModel {
    Dipole,
    Quadrupole,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitConfig {
    #[serde(default)]
    pub theta0: Option<f64>,
    #[serde(default)]
    pub theta_a2: Option<f64>,
    #[serde(default)]
    pub theta_c4: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaserContextConfig {
    #[serde(rename = "intensity_W_m2")]
    pub intensity_w_m2: f64,
    pub wavelength_m: f64,
    pub interaction_time_s: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitFile {
    pub observations: String,
    pub model: FitModel,
    #[serde(default)]
    pub init: InitConfig,
    pub laser: Option<LaserContextConfig>,
}

#[derive(Debug, Clone)]
pub struct FitConfig {
    pub observations: PathBuf,
    pub model: FitModel,
    pub init: PhaseSet,
    pub laser: Option<LaserContext>,
}

impl FitFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        parse_toml(text)
    }

    pub fn load(path: &Path) -> Result<FitConfig, ConfigError> {
        let file = Self::parse(&read(path)?)?;
        file.resolve(path.parent())
    }

    pub fn resolve(&self, base: Option<&Path>) -> Result<FitConfig, ConfigError> {
        let observations = resolve(base, &self.observations);
        if !observations.is_file() {
            return Err(ConfigError::Invalid { key: "observations", reason: format!("{} does not exist", observations.display()) });
        }
        let init = PhaseSet::tied(
            self.init.theta0.unwrap_or(1.0),
            self.init.theta_a2.unwrap_or(0.0),
            self.init.theta_c4.unwrap_or(0.0),
        );
        let laser = self.laser.map(|l| LaserContext {
            intensity: l.intensity_w_m2,
            wavelength: l.wavelength_m,
            interaction_time: l.interaction_time_s,
        });
        Ok(FitConfig { observations, model: self.model, init, laser })
    }
}
