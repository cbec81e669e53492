//! Experimental feasibility of short-wavelength atomic Kapitza-Dirac diffraction.
//!
//! Each estimate is a small closed-form operation; [`plan_experiment`]
//! composes them into a [`FeasibilityReport`] with pass/fail flags.

pub mod cross_section;
mod report;

use std::f64::consts::PI;

use thiserror::Error;

pub use cross_section::{CrossSectionError, CrossSectionTable};
pub use report::{FeasibilityReport, Flags, ReferenceEstimates, Thresholds, HEADLINE_ESTIMATES};

use crate::potentials::{lightshift_depth, AtomSpecies, InvalidField, LaserGrating};
use crate::units::{self, HBAR};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FeasibilityError {
    #[error("`{key}` must be finite and > 0, got {value}")]
    NonPositive { key: &'static str, value: f64 },
    #[error(transparent)]
    CrossSection(#[from] CrossSectionError),
    #[error(transparent)]
    Invalid(#[from] InvalidField),
}

fn positive(key: &'static str, value: f64) -> Result<f64, FeasibilityError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(FeasibilityError::NonPositive { key, value })
    }
}

/// Recoil energy `ħ^2 k^2 / 2m` in eV.
pub fn recoil_energy(mass: f64, k_l: f64) -> Result<f64, FeasibilityError> {
    positive("mass", mass)?;
    Ok(units::joule_to_ev(HBAR * HBAR * k_l * k_l / (2.0 * mass)))
}

/// `|U| / ε`. Diffraction needs this strictly above one.
pub fn regime_ratio(u: f64, epsilon: f64) -> Result<f64, FeasibilityError> {
    positive("epsilon", epsilon)?;
    Ok(u.abs() / epsilon)
}

/// Intensity (W/m^2) at which `α E0^2` reaches `u_target` (J).
///
/// Order-of-magnitude convention `U ≈ α E0^2`, without the 1/4 of the exact
/// lightshift depth, combined with `I = c E0^2 / 8π`. In SI this is
/// `I = c U / (8π α)` with α the polarizability volume.
pub fn required_intensity(atom: &AtomSpecies, u_target: f64) -> Result<f64, FeasibilityError> {
    positive("U_target", u_target)?;
    let alpha = positive("alpha", atom.alpha)?;
    let e0_squared = u_target / units::polarizability_si(alpha);
    Ok(units::intensity_from_field(e0_squared.sqrt()))
}

/// Interaction time `ħ / |U|` (s) at which the imprinted phase reaches one radian.
pub fn interaction_time(u: f64) -> Result<f64, FeasibilityError> {
    positive("|U|", u.abs())?;
    Ok(HBAR / u.abs())
}

/// Photon energy `2π ħ c / λ` in eV.
pub fn photon_energy(wavelength: f64) -> Result<f64, FeasibilityError> {
    positive("wavelength", wavelength)?;
    Ok(units::joule_to_ev(2.0 * PI * HBAR * units::C / wavelength))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ionization {
    /// Γ = σ I / ħω, 1/s.
    pub rate: f64,
    pub gamma_tau: f64,
    /// N(τ)/N0 = exp(-Γτ).
    pub survival: f64,
    /// Interpolated cross section, m^2.
    pub cross_section: f64,
}

/// One-photon ionization with a time-independent rate.
pub fn ionization_survival(
    atom: &AtomSpecies,
    intensity: f64,
    photon_energy_ev: f64,
    tau: f64,
) -> Result<Ionization, FeasibilityError> {
    if !(intensity.is_finite() && intensity >= 0.0) {
        return Err(FeasibilityError::NonPositive { key: "intensity", value: intensity });
    }
    positive("tau", tau)?;
    let sigma = atom.cross_sections.interpolate(photon_energy_ev)?;
    let rate = sigma * intensity / units::ev_to_joule(photon_energy_ev);
    let gamma_tau = rate * tau;
    Ok(Ionization { rate, gamma_tau, survival: (-gamma_tau).exp(), cross_section: sigma })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonCount {
    /// Photons per m^3, `I / (c ħω)`.
    pub density: f64,
    /// Photons in the interaction volume.
    pub count: f64,
    pub pass: bool,
}

/// Photon-number criterion for treating the field classically.
pub fn semiclassical_check(
    intensity: f64,
    wavelength: f64,
    volume: f64,
    min_photons: f64,
) -> Result<PhotonCount, FeasibilityError> {
    if !(intensity.is_finite() && intensity >= 0.0) {
        return Err(FeasibilityError::NonPositive { key: "intensity", value: intensity });
    }
    positive("volume", volume)?;
    let e_ph = units::ev_to_joule(photon_energy(wavelength)?);
    let density = intensity / (units::C * e_ph);
    let count = density * volume;
    Ok(PhotonCount { density, count, pass: count >= min_photons })
}

/// Smallest intensity giving `min_photons` photons in `volume`.
pub fn min_semiclassical_intensity(wavelength: f64, volume: f64, min_photons: f64) -> Result<f64, FeasibilityError> {
    positive("volume", volume)?;
    let e_ph = units::ev_to_joule(photon_energy(wavelength)?);
    Ok(min_photons / volume * units::C * e_ph)
}

/// Atom speed that crosses a spot of radius `spot_radius` in `tau`: `2 r / τ`.
pub fn atom_velocity_needed(spot_radius: f64, tau: f64) -> Result<f64, FeasibilityError> {
    positive("spot_radius", spot_radius)?;
    positive("tau", tau)?;
    Ok(2.0 * spot_radius / tau)
}

/// Full feasibility report for `atom` in `laser`, aiming at depth `u_target` (J).
///
/// * regime ratio: exact lightshift depth of the laser against the recoil energy;
/// * required intensity and interaction time: from `u_target`;
/// * ionization and photon count: at the laser's intensity;
/// * visibility: the pulse outlasts the interaction time.
pub fn plan_experiment(
    atom: &AtomSpecies,
    laser: &LaserGrating,
    u_target: f64,
    thresholds: &Thresholds,
) -> Result<FeasibilityReport, FeasibilityError> {
    atom.validate()?;
    laser.validate()?;
    positive("U_target", u_target)?;

    let k = laser.wave_number();
    let recoil_ev = recoil_energy(atom.mass, k)?;
    let depth = lightshift_depth(atom, laser);
    let ratio = regime_ratio(depth, units::ev_to_joule(recoil_ev))?;
    let required = required_intensity(atom, u_target)?;
    let tau = interaction_time(u_target)?;
    let e_ph = photon_energy(laser.wavelength)?;
    let ion = ionization_survival(atom, laser.intensity, e_ph, tau)?;
    let photons = semiclassical_check(laser.intensity, laser.wavelength, thresholds.interaction_volume, thresholds.min_photons)?;
    let velocity = atom_velocity_needed(laser.spot_radius, tau)?;

    let flags = Flags {
        diffraction_regime: ratio > 1.0,
        visibility: laser.pulse_duration > tau,
        semiclassical: photons.pass,
        low_ionization: ion.gamma_tau < thresholds.max_gamma_tau,
        below_nonlinear_threshold: required < thresholds.nonlinear_intensity,
    };

    Ok(FeasibilityReport {
        species: atom.name.clone(),
        wavelength: laser.wavelength,
        intensity: laser.intensity,
        target_depth_ev: units::joule_to_ev(u_target),
        lightshift_depth_ev: units::joule_to_ev(depth) + 0.0,
        recoil_energy: recoil_ev,
        regime_ratio: ratio,
        required_intensity: required,
        interaction_time: tau,
        photon_energy: e_ph,
        cross_section: ion.cross_section,
        ionization_rate: ion.rate,
        gamma_tau: ion.gamma_tau,
        survival_fraction: ion.survival,
        photon_density: photons.density,
        photons_in_volume: photons.count,
        atom_velocity_needed: velocity,
        flags,
        thresholds: *thresholds,
        intensity_convention: "required_intensity uses U = alpha E0^2; lightshift_depth uses U0 = -alpha E0^2 / 4".into(),
        adiabaticity_note: format!(
            "photon energy {e_ph:.4e} eV is {:.3e} x the ionization energy ({} eV): far detuned from bound transitions",
            e_ph / atom.ionization_energy,
            atom.ionization_energy
        ),
        reference: HEADLINE_ESTIMATES,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::catalog::Catalog;

    fn model_atom() -> AtomSpecies {
        Catalog::builtin().get("Model15").unwrap().clone()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn recoil_values_and_scaling() {
        let k = 2.0 * PI / 5e-10;
        let m = 15.0 * units::PROTON_MASS;
        let eps = recoil_energy(m, k).unwrap();
        assert!(rel(eps, 2.184_452_553_618_791e-4) < 1e-12, "{eps}");
        assert!(rel(recoil_energy(m, 2.0 * k).unwrap(), 4.0 * eps) < 1e-14);
        assert!(rel(recoil_energy(2.0 * m, k).unwrap(), eps / 2.0) < 1e-14);
        assert!(recoil_energy(0.0, k).is_err());
    }

    #[test]
    fn regime_ratio_is_strict() {
        let ev = units::EV;
        assert!((regime_ratio(1e-3 * ev, 1e-4 * ev).unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(regime_ratio(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(regime_ratio(-2.0, 2.0).unwrap(), 1.0);
        assert!(regime_ratio(1.0, 0.0).is_err());
    }

    #[test]
    fn required_intensity_values() {
        let atom = model_atom();
        let u = units::ev_to_joule(1e-3);
        let i = required_intensity(&atom, u).unwrap();
        assert!(rel(i, 1.911_134_431_719_609_5e14) < 1e-12, "{i}");
        assert!(rel(required_intensity(&atom, 4.0 * u).unwrap(), 4.0 * i) < 1e-12);
        let light = AtomSpecies { alpha: 1e-31, ..atom };
        assert!(rel(required_intensity(&light, u).unwrap(), 100.0 * i) < 1e-12);
    }

    #[test]
    fn interaction_time_values() {
        let t = interaction_time(units::ev_to_joule(1e-3)).unwrap();
        assert!(rel(t, 6.582_119_565_476_075e-13) < 1e-12);
        assert!(rel(interaction_time(units::ev_to_joule(2e-3)).unwrap(), t / 2.0) < 1e-14);
        assert!(rel(interaction_time(units::ev_to_joule(-1.0)).unwrap(), 6.582_119_565_476_075e-16) < 1e-12);
        assert!(interaction_time(0.0).is_err());
    }

    #[test]
    fn photon_energy_values() {
        assert!(rel(photon_energy(5e-10).unwrap(), 2479.683_967_144_655) < 1e-12);
        assert!(rel(photon_energy(500e-9).unwrap(), 2.479_683_967_144_655) < 1e-12);
        assert!(rel(photon_energy(1e-9).unwrap(), photon_energy(5e-10).unwrap() / 2.0) < 1e-14);
    }

    #[test]
    fn sodium_ionization_estimate() {
        let na = Catalog::builtin().get("Na").unwrap().clone();
        let ion = ionization_survival(&na, 1e14, 100.0, 1e-12).unwrap();
        assert!(rel(ion.gamma_tau, 3.120_754_537_230_381e-3) < 1e-12);
        assert!((ion.survival - 0.996_884_110).abs() < 1e-8);

        assert_eq!(ionization_survival(&na, 0.0, 100.0, 1e-12).unwrap().survival, 1.0);

        // construct Γτ = ln 2
        let tau = std::f64::consts::LN_2 / ion.rate;
        assert!((ionization_survival(&na, 1e14, 100.0, tau).unwrap().survival - 0.5).abs() < 1e-14);

        let err = ionization_survival(&na, 1e14, 20.0, 1e-12).unwrap_err();
        assert!(matches!(err, FeasibilityError::CrossSection(CrossSectionError::OutOfRange { .. })));
    }

    #[test]
    fn photon_counting() {
        let c = semiclassical_check(1e7, 500e-9, 1e-12, 1e6).unwrap();
        assert!(rel(c.density, 8.396_002_695_016_446e16) < 1e-12);
        assert!(c.count < 1e6 && !c.pass);
        let z = semiclassical_check(0.0, 5e-10, 1e-12, 1e6).unwrap();
        assert_eq!((z.density, z.pass), (0.0, false));

        let i_min = min_semiclassical_intensity(5e-10, 1e-12, 1e6).unwrap();
        assert!(rel(i_min, 1.191_042_971_667_413_5e11) < 1e-12);
        assert!(semiclassical_check(i_min * 1.000_001, 5e-10, 1e-12, 1e6).unwrap().pass);
        assert!(!semiclassical_check(i_min * 0.999_999, 5e-10, 1e-12, 1e6).unwrap().pass);
    }

    #[test]
    fn transit_velocity() {
        assert!(rel(atom_velocity_needed(0.5e-6, 1e-12).unwrap(), 1e6) < 1e-14);
        let v = atom_velocity_needed(1e-6, 1e-12).unwrap();
        assert!(v >= 1e6 && v <= 2e6);
        assert!(rel(atom_velocity_needed(1e-6, 2e-12).unwrap(), v / 2.0) < 1e-14);
    }
}
