//! Physical constants and the Gaussian/SI conversion boundary.
//!
//! Everything stored in this crate is SI. Two relations are naturally
//! written in Gaussian units: the intensity of a field, `I = c E0^2 / 8π`,
//! and the polarizability expressed as a volume. Both are converted here and
//! nowhere else.

use std::f64::consts::PI;

/// Reduced Planck constant, J s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
/// Proton mass, kg.
pub const PROTON_MASS: f64 = 1.672_621_923_69e-27;
/// Bohr radius, m.
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// Joules per electronvolt.
pub const EV: f64 = E_CHARGE;

/// Atomic energy scale used for the induced-quadrupole estimates.
///
/// This is the rounded `4e-18 J`, not the exact Hartree (4.3597e-18 J), so
/// that the quadrupole scales reproduce the published magnitudes.
pub const HARTREE_ROUNDED: f64 = 4e-18;

pub fn ev_to_joule(ev: f64) -> f64 {
    ev * EV
}

pub fn joule_to_ev(j: f64) -> f64 {
    j / EV
}

/// Peak field amplitude in V/m for a given intensity in W/m^2.
///
/// The Gaussian definition `I = c E0^2 / 8π` in SI form, `sqrt(2 I / (c ε0))`.
/// The same `ε0` enters [`polarizability_si`], so Gaussian products such as
/// `α E0^2 = 8π α I / c` hold to rounding.
pub fn field_from_intensity(intensity: f64) -> f64 {
    (2.0 * intensity / (C * EPSILON_0)).sqrt()
}

/// Inverse of [`field_from_intensity`].
pub fn intensity_from_field(field: f64) -> f64 {
    C * EPSILON_0 * field * field / 2.0
}

/// SI polarizability (C m^2 / V) from a Gaussian polarizability volume in m^3.
pub fn polarizability_si(alpha_volume: f64) -> f64 {
    4.0 * PI * EPSILON_0 * alpha_volume
}

/// Gaussian polarizability volume in m^3 from an SI polarizability.
pub fn polarizability_volume(alpha_si: f64) -> f64 {
    alpha_si / (4.0 * PI * EPSILON_0)
}

/// Dipole-quadrupole polarizability unit `e^2 r0^3 / E_h` in SI.
pub fn dipole_quadrupole_unit() -> f64 {
    E_CHARGE * E_CHARGE * BOHR_RADIUS.powi(3) / HARTREE_ROUNDED
}

/// Quadrupole-quadrupole polarizability unit `e^2 r0^4 / E_h` in SI.
pub fn quadrupole_quadrupole_unit() -> f64 {
    E_CHARGE * E_CHARGE * BOHR_RADIUS.powi(4) / HARTREE_ROUNDED
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_relations_hold() {
        let alpha = 1e-29;
        for &i in &[1e7, 1e14, 3.3e17] {
            let e = field_from_intensity(i);
            // α E0^2 with E0^2 = 8π I / c, all Gaussian
            let gaussian = alpha * 8.0 * PI * i / C;
            let si = polarizability_si(alpha) * e * e;
            assert!((si - gaussian).abs() / gaussian < 1e-14, "{si} vs {gaussian}");
            assert!((intensity_from_field(e) - i).abs() / i < 1e-14);
        }
    }

    #[test]
    fn polarizability_round_trip() {
        let a = 1e-29;
        assert!((polarizability_volume(polarizability_si(a)) - a).abs() < 1e-44);
    }
}
