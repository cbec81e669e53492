//! Time-averaged light-atom interaction potential.
//!
//! The dipole lightshift gives `U0 cos^2(k X)`. Induced quadrupole moments add
//! `UA cos^3 sin` and `UC cos^2 sin^2` terms. The sum is stored as its exact
//! Fourier decomposition over the harmonics `2kX` and `4kX`, which is what the
//! diffraction engines consume. Permanent multipoles average to zero over an
//! optical period and never enter the model; see [`multipole`].

pub mod atom;
pub mod catalog;
pub mod laser;
pub mod multipole;

use serde::{Deserialize, Serialize};

pub use atom::{AtomSpecies, InvalidField};
pub use laser::LaserGrating;

use crate::units;

/// Coefficients of `dc + cos2 cos(2kX) + sin2 sin(2kX) + sin4 sin(4kX) + cos4 cos(4kX)`, in J.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierCoefficients {
    pub dc: f64,
    pub cos2: f64,
    pub sin2: f64,
    pub sin4: f64,
    pub cos4: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialModel {
    /// Dipole lightshift depth, J.
    pub u0: f64,
    /// Dipole-quadrupole term scale, J.
    pub ua: f64,
    /// Quadrupole-quadrupole term scale, J.
    pub uc: f64,
    /// Grating wave number, 1/m.
    pub k_l: f64,
    pub fourier: FourierCoefficients,
}

/// Assemble the potential and its Fourier decomposition.
pub fn build_potential(u0: f64, ua: f64, uc: f64, k_l: f64) -> PotentialModel {
    let fourier = FourierCoefficients {
        dc: u0 / 2.0 + uc / 8.0,
        cos2: u0 / 2.0,
        sin2: ua / 4.0,
        sin4: ua / 8.0,
        cos4: -uc / 8.0,
    };
    PotentialModel { u0, ua, uc, k_l, fourier }
}

impl PotentialModel {
    /// Potential for a given atom in a given grating.
    pub fn for_species(atom: &AtomSpecies, laser: &LaserGrating) -> Self {
        let (ua, uc) = quadrupole_scales(atom, laser);
        build_potential(lightshift_depth(atom, laser), ua, uc, laser.wave_number())
    }

    /// `U(X)` in J.
    pub fn evaluate(&self, x: f64) -> f64 {
        evaluate_potential(self, x)
    }

    pub fn is_dipole_only(&self) -> bool {
        self.ua == 0.0 && self.uc == 0.0
    }

    /// Spatial period shared by all five Fourier terms, `2π / k_L`.
    pub fn full_period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.k_l
    }
}

pub fn evaluate_potential(model: &PotentialModel, x: f64) -> f64 {
    let phase = 2.0 * model.k_l * x;
    let (s2, c2) = phase.sin_cos();
    let (s4, c4) = (2.0 * phase).sin_cos();
    let f = &model.fourier;
    f.dc + f.cos2 * c2 + f.sin2 * s2 + f.sin4 * s4 + f.cos4 * c4
}

/// Dipole lightshift depth `U0 = -α E0^2 / 4` in J (negative: wells at antinodes).
pub fn lightshift_depth(atom: &AtomSpecies, laser: &LaserGrating) -> f64 {
    let e0 = laser.field_amplitude();
    -units::polarizability_si(atom.alpha) * e0 * e0 / 4.0
}

/// `(UA, UC)` in J from the induced-quadrupole polarizabilities.
///
/// `UA = A k E0^2` and `UC = C (k E0)^2`, with `A` and `C` the stored
/// multipliers times the atomic units `e^2 r0^3 / E_h` and `e^2 r0^4 / E_h`.
pub fn quadrupole_scales(atom: &AtomSpecies, laser: &LaserGrating) -> (f64, f64) {
    let e0 = laser.field_amplitude();
    let k = laser.wave_number();
    let ua = atom.dipole_quadrupole * units::dipole_quadrupole_unit() * k * e0 * e0;
    let uc = atom.quadrupole_quadrupole * units::quadrupole_quadrupole_unit() * (k * e0).powi(2);
    (ua, uc)
}

/// The order-of-magnitude estimate `(e r0 E0)^2 / E_h` that both quadrupole
/// scales reduce to when `r0 k ≈ 1`.
pub fn quadrupole_estimate(laser: &LaserGrating) -> f64 {
    let f = units::E_CHARGE * units::BOHR_RADIUS * laser.field_amplitude();
    f * f / units::HARTREE_ROUNDED
}
