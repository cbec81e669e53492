use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::feasibility::cross_section::CrossSectionTable;

/// A field of an atom or laser description failed validation.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid `{key}`: {reason}")]
pub struct InvalidField {
    pub key: &'static str,
    pub reason: String,
}

impl InvalidField {
    pub(crate) fn new(key: &'static str, reason: impl Into<String>) -> Self {
        Self { key, reason: reason.into() }
    }
}

pub(crate) fn require_positive(key: &'static str, v: f64) -> Result<(), InvalidField> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(InvalidField::new(key, format!("must be finite and > 0, got {v}")))
    }
}

pub(crate) fn require_non_negative(key: &'static str, v: f64) -> Result<(), InvalidField> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(InvalidField::new(key, format!("must be finite and >= 0, got {v}")))
    }
}

/// Atom-side inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpecies {
    pub name: String,
    /// kg
    pub mass: f64,
    /// Dipole polarizability as a Gaussian volume, m^3.
    pub alpha: f64,
    /// Dipole-quadrupole polarizability in units of `e^2 r0^3 / E_h`.
    pub dipole_quadrupole: f64,
    /// Quadrupole-quadrupole polarizability in units of `e^2 r0^4 / E_h`.
    pub quadrupole_quadrupole: f64,
    /// eV
    pub ionization_energy: f64,
    pub cross_sections: CrossSectionTable,
}

impl AtomSpecies {
    /// Dipole-only species with the given mass, polarizability and cross sections.
    pub fn new(
        name: impl Into<String>,
        mass: f64,
        alpha: f64,
        ionization_energy: f64,
        cross_sections: CrossSectionTable,
    ) -> Result<Self, InvalidField> {
        let atom = Self {
            name: name.into(),
            mass,
            alpha,
            dipole_quadrupole: 0.0,
            quadrupole_quadrupole: 0.0,
            ionization_energy,
            cross_sections,
        };
        atom.validate()?;
        Ok(atom)
    }

    pub fn with_quadrupole(mut self, dipole_quadrupole: f64, quadrupole_quadrupole: f64) -> Result<Self, InvalidField> {
        self.dipole_quadrupole = dipole_quadrupole;
        self.quadrupole_quadrupole = quadrupole_quadrupole;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), InvalidField> {
        if self.name.trim().is_empty() {
            return Err(InvalidField::new("name", "must not be empty"));
        }
        require_positive("mass_kg", self.mass)?;
        require_positive("alpha_m3", self.alpha)?;
        require_non_negative("A_dq", self.dipole_quadrupole)?;
        require_non_negative("C_qq", self.quadrupole_quadrupole)?;
        require_positive("ionization_energy_eV", self.ionization_energy)?;
        Ok(())
    }
}
