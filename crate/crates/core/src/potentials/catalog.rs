//! Atom-species catalog files.
//!
//! A catalog is a TOML document with one `[[species]]` table per atom:
//!
//! ```toml
//! [[species]]
//! name = "Na"
//! mass_kg = 3.817540787e-26
//! alpha_m3 = 2.41e-29
//! A_dq = 0.0                      # optional, default 0
//! C_qq = 0.0                      # optional, default 0
//! ionization_energy_eV = 5.139
//! sigma_table = [[50.0, 1.2e-21], [100.0, 5.0e-22]]   # [energy_eV, sigma_m2]
//! ```
//!
//! Unknown keys are rejected. Every error message names the offending key.

use serde::Deserialize;
use thiserror::Error;

use super::atom::{AtomSpecies, InvalidField};
use crate::feasibility::cross_section::CrossSectionTable;

/// The catalog shipped with the crate.
pub const BUILTIN_CATALOG: &str = include_str!("../../data/catalog.toml");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("catalog parse error: {0}")]
    Parse(String),
    #[error("species `{species}`: {source}")]
    Invalid { species: String, source: InvalidField },
    #[error("species `{0}` listed twice")]
    Duplicate(String),
    #[error("unknown species `{0}`")]
    Unknown(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    species: Vec<RawSpecies>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpecies {
    name: String,
    mass_kg: f64,
    alpha_m3: f64,
    #[serde(rename = "A_dq", default)]
    a_dq: f64,
    #[serde(rename = "C_qq", default)]
    c_qq: f64,
    #[serde(rename = "ionization_energy_eV")]
    ionization_energy_ev: f64,
    sigma_table: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    species: Vec<AtomSpecies>,
}

impl Catalog {
    pub fn parse(text: &str) -> Result<Self, CatalogError> {
        let raw: RawCatalog = toml::from_str(text).map_err(|e| CatalogError::Parse(e.to_string()))?;
        let mut species: Vec<AtomSpecies> = Vec::with_capacity(raw.species.len());
        for r in raw.species {
            let name = r.name.clone();
            let invalid = |source| CatalogError::Invalid { species: name.clone(), source };
            let table = CrossSectionTable::new(r.sigma_table.iter().map(|&[e, s]| (e, s)).collect())
                .map_err(|e| invalid(InvalidField::new("sigma_table", e.to_string())))?;
            let atom = AtomSpecies {
                name: r.name,
                mass: r.mass_kg,
                alpha: r.alpha_m3,
                dipole_quadrupole: r.a_dq,
                quadrupole_quadrupole: r.c_qq,
                ionization_energy: r.ionization_energy_ev,
                cross_sections: table,
            };
            atom.validate().map_err(invalid)?;
            if species.iter().any(|s| s.name == atom.name) {
                return Err(CatalogError::Duplicate(atom.name));
            }
            species.push(atom);
        }
        Ok(Self { species })
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN_CATALOG).expect("builtin catalog is valid")
    }

    pub fn get(&self, name: &str) -> Result<&AtomSpecies, CatalogError> {
        self.species
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| CatalogError::Unknown(name.to_string()))
    }

    pub fn species(&self) -> &[AtomSpecies] {
        &self.species
    }
}
