//! Tabulated photoionization cross sections with log-log interpolation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CrossSectionError {
    #[error("cross-section table is empty")]
    Empty,
    #[error("photon energies must be strictly increasing (entry {index})")]
    NotIncreasing { index: usize },
    #[error("entry {index}: energy and cross section must be finite and > 0")]
    NonPositive { index: usize },
    #[error("photon energy {energy_ev} eV outside table range [{min_ev}, {max_ev}] eV")]
    OutOfRange { energy_ev: f64, min_ev: f64, max_ev: f64 },
}

/// `(photon energy in eV, cross section in m^2)` pairs, strictly increasing in energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct CrossSectionTable {
    points: Vec<(f64, f64)>,
}

impl CrossSectionTable {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, CrossSectionError> {
        if points.is_empty() {
            return Err(CrossSectionError::Empty);
        }
        for (index, &(e, s)) in points.iter().enumerate() {
            if !(e.is_finite() && s.is_finite() && e > 0.0 && s > 0.0) {
                return Err(CrossSectionError::NonPositive { index });
            }
            if index > 0 && e <= points[index - 1].0 {
                return Err(CrossSectionError::NotIncreasing { index });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn energy_range(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    /// Cross section at `energy_ev`, linear in `(ln E, ln σ)` between nodes.
    ///
    /// Node energies return the tabulated value exactly. Energies outside the
    /// table are an error; there is no extrapolation.
    pub fn interpolate(&self, energy_ev: f64) -> Result<f64, CrossSectionError> {
        let (min_ev, max_ev) = self.energy_range();
        if !(energy_ev >= min_ev && energy_ev <= max_ev) {
            return Err(CrossSectionError::OutOfRange { energy_ev, min_ev, max_ev });
        }
        let upper = self.points.partition_point(|&(e, _)| e < energy_ev);
        let (e1, s1) = self.points[upper];
        if e1 == energy_ev {
            return Ok(s1);
        }
        let (e0, s0) = self.points[upper - 1];
        let t = (energy_ev / e0).ln() / (e1 / e0).ln();
        Ok((s0.ln() + t * (s1 / s0).ln()).exp())
    }
}

impl TryFrom<Vec<[f64; 2]>> for CrossSectionTable {
    type Error = CrossSectionError;

    fn try_from(v: Vec<[f64; 2]>) -> Result<Self, Self::Error> {
        Self::new(v.into_iter().map(|[e, s]| (e, s)).collect())
    }
}

impl From<CrossSectionTable> for Vec<[f64; 2]> {
    fn from(t: CrossSectionTable) -> Self {
        t.points.into_iter().map(|(e, s)| [e, s]).collect()
    }
}
