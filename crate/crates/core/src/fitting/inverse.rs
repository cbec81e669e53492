//! Polarizabilities from fitted phases.
//!
//! The phases are linear in the potential scales and the scales are linear
//! in the polarizabilities, so the inversion and its error propagation are
//! exact linear maps.

use serde::{Deserialize, Serialize};

use super::symmetry::equivalent_parameters;
use super::{FitError, FitResult};
use crate::units;

/// What the fit cannot know: the grating that imprinted the phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserContext {
    /// W/m^2
    pub intensity: f64,
    /// m
    pub wavelength: f64,
    /// s
    pub interaction_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarizabilityEstimate {
    /// Polarizability volume, m^3.
    pub alpha: f64,
    pub alpha_error: Option<f64>,
    /// Dipole-quadrupole multiplier of `e^2 r0^3 / E_h`.
    pub dipole_quadrupole: f64,
    pub dipole_quadrupole_error: Option<f64>,
    /// Quadrupole-quadrupole multiplier of `e^2 r0^4 / E_h`.
    pub quadrupole_quadrupole: f64,
    pub quadrupole_quadrupole_error: Option<f64>,
    /// The member `(θ0, θA2, θC4)` of the fitted symmetry class that was inverted.
    pub phases: [f64; 3],
    pub note: String,
}

impl LaserContext {
    fn validate(&self) -> Result<(), FitError> {
        for (key, v) in [
            ("intensity_W_m2", self.intensity),
            ("wavelength_m", self.wavelength),
            ("interaction_time_s", self.interaction_time),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(FitError::InvalidContext { key, value: v });
            }
        }
        Ok(())
    }
}

/// Invert the fitted phases for `α`, `A` and `C`.
///
/// Intensities fix the phases only up to the twins of [`super::symmetry`].
/// A positive polarizability gives `U0 < 0` (`θ0 < 0`) and a non-negative
/// `C` gives `θC4 <= 0`; the twin satisfying both is inverted. When several
/// or none do, the choice is stated in `note`. Standard errors are those of
/// the fitted representative, mapped linearly.
pub fn polarizabilities(fit: &FitResult, ctx: &LaserContext) -> Result<PolarizabilityEstimate, FitError> {
    ctx.validate()?;
    let e0 = units::field_from_intensity(ctx.intensity);
    let k = 2.0 * std::f64::consts::PI / ctx.wavelength;
    let s = units::HBAR / ctx.interaction_time;

    // θ0 = U0 τ/2ħ with U0 = -α_SI E0^2/4
    let d_alpha = units::polarizability_volume(8.0 * s / (e0 * e0));
    // θA2 = UA τ/4ħ with UA = A unit k E0^2
    let d_a = 4.0 * s / (units::dipole_quadrupole_unit() * k * e0 * e0);
    // θC4 = -UC τ/8ħ with UC = C unit (k E0)^2
    let d_c = 8.0 * s / (units::quadrupole_quadrupole_unit() * (k * e0).powi(2));

    let fitted = [fit.theta0_hat, fit.theta_a2_hat, fit.theta_c4_hat];
    let reflected = [-fitted[0], fitted[1], -fitted[2]];
    let slack = 1e-12;
    let physical: Vec<[f64; 3]> = equivalent_parameters(fitted)
        .into_iter()
        .filter(|p| p[0] <= 0.0 && p[2] <= slack)
        .collect();
    let (phases, note) = match physical.as_slice() {
        [] => (reflected, String::from("no equivalent phase set has alpha > 0 and C >= 0; inverted the reflection of the fit")),
        [only] => (*only, String::new()),
        many => {
            // Prefer the plain reflection when it is admissible.
            let pick = many
                .iter()
                .copied()
                .find(|p| p.iter().zip(&reflected).all(|(a, b)| (a - b).abs() <= 1e-12 * (1.0 + b.abs())))
                .unwrap_or(many[0]);
            let others: Vec<String> = many.iter().filter(|p| **p != pick).map(|p| format!("{p:?}")).collect();
            (pick, format!("equally good phase sets with alpha > 0 and C >= 0: {}", others.join(", ")))
        }
    };

    let err = |i: usize, d: f64| fit.standard_errors.as_ref().and_then(|e| e.get(i)).map(|e| (e * d).abs());
    Ok(PolarizabilityEstimate {
        alpha: -phases[0] * d_alpha,
        alpha_error: err(0, d_alpha),
        dipole_quadrupole: phases[1] * d_a,
        dipole_quadrupole_error: err(1, d_a),
        quadrupole_quadrupole: -phases[2] * d_c,
        quadrupole_quadrupole_error: err(2, d_c),
        phases,
        note,
    })
}
