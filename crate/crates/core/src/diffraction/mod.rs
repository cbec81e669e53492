//! Raman-Nath diffraction of an atom beam by the periodic potential.
//!
//! After an interaction time τ the centre-of-mass state is the phase imprint
//! `exp(i U(X) τ / ħ) exp(i k0 X)`. Its Fourier components sit at `k0 + q k_L`
//! with `q` even. Two independent routes compute them:
//!
//! * [`analytic`]: Jacobi-Anger expansion of each Fourier term of the
//!   potential into a Bessel series and discrete convolution of the series;
//! * [`oracle`]: direct FFT of the sampled phase imprint over one period.

pub mod analytic;
pub mod oracle;
pub mod output;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bessel::BesselError;
use crate::potentials::{build_potential, PotentialModel};
use crate::units::HBAR;

pub use analytic::{dipole_pattern, dipole_pattern_with, quadrupole_pattern, quadrupole_pattern_with};
pub use oracle::{phase_grating_oracle, OracleResult};
pub use output::{intensities_csv, pattern_json, pattern_svg};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PatternError {
    #[error("tolerance must lie in (0, 1e-3], got {0}")]
    InvalidTolerance(f64),
    #[error("interaction time must be finite and > 0, got {0}")]
    InvalidInteractionTime(f64),
    #[error("phase {phase} rad is not finite")]
    NonFinitePhase { phase: f64 },
    #[error("Bessel series for phase {phase} rad did not reach tolerance {tolerance} by order {order}")]
    TruncationFailed { phase: f64, tolerance: f64, order: usize },
    #[error("grid must be a power of two >= {min}, got {got}", min = oracle::MIN_GRID_POINTS)]
    InvalidGrid { got: usize },
    #[error("grid of {0} points cannot resolve the spectrum (energy near the Nyquist order)")]
    GridTooCoarse(usize),
    #[error("thetaA4 must equal thetaA2/2 to describe a single UA")]
    UntiedPhases,
    #[error(transparent)]
    Bessel(#[from] BesselError),
}

/// Arguments of the four Bessel factors plus the global phase, in rad.
///
/// `theta0` multiplies `cos(2kX)`, `theta_a2` multiplies `sin(2kX)`,
/// `theta_a4` multiplies `sin(4kX)` and `theta_c4` multiplies `cos(4kX)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSet {
    pub theta0: f64,
    pub theta_a2: f64,
    pub theta_a4: f64,
    pub theta_c4: f64,
    pub global_phase: f64,
}

impl PhaseSet {
    pub fn dipole(theta0: f64) -> Self {
        Self::tied(theta0, 0.0, 0.0)
    }

    /// Phases produced by a single `UA` (so `theta_a4 = theta_a2 / 2`).
    /// The global phase is the one implied by `theta0` and `theta_c4`.
    pub fn tied(theta0: f64, theta_a2: f64, theta_c4: f64) -> Self {
        Self {
            theta0,
            theta_a2,
            theta_a4: theta_a2 / 2.0,
            theta_c4,
            global_phase: theta0 - theta_c4,
        }
    }

    pub fn is_tied(&self) -> bool {
        self.theta_a4 == self.theta_a2 / 2.0
    }

    fn check_finite(&self) -> Result<(), PatternError> {
        for phase in [self.theta0, self.theta_a2, self.theta_a4, self.theta_c4, self.global_phase] {
            if !phase.is_finite() {
                return Err(PatternError::NonFinitePhase { phase });
            }
        }
        Ok(())
    }
}

/// `theta0 = U0 τ/2ħ`, `theta_a2 = UA τ/4ħ`, `theta_a4 = UA τ/8ħ`,
/// `theta_c4 = -UC τ/8ħ`, global phase `(U0/2 + UC/8) τ/ħ`.
pub fn phases_from_potential(model: &PotentialModel, tau: f64) -> Result<PhaseSet, PatternError> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(PatternError::InvalidInteractionTime(tau));
    }
    let s = tau / HBAR;
    Ok(PhaseSet {
        theta0: model.u0 * s / 2.0,
        theta_a2: model.ua * s / 4.0,
        theta_a4: model.ua * s / 8.0,
        theta_c4: -model.uc * s / 8.0,
        global_phase: (model.u0 / 2.0 + model.uc / 8.0) * s,
    })
}

/// The potential that produces `phases` after `tau`, on a grating of wave number `k_l`.
pub fn potential_from_phases(phases: &PhaseSet, tau: f64, k_l: f64) -> Result<PotentialModel, PatternError> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(PatternError::InvalidInteractionTime(tau));
    }
    if !phases.is_tied() {
        return Err(PatternError::UntiedPhases);
    }
    let s = HBAR / tau;
    Ok(build_potential(2.0 * phases.theta0 * s, 4.0 * phases.theta_a2 * s, -8.0 * phases.theta_c4 * s, k_l))
}

/// One diffraction peak at momentum `k0 + order k_L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffractionOrder {
    pub order: i64,
    /// `[re, im]`, global phase factored out.
    pub amplitude: Complex64,
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffractionPattern {
    /// Sorted by order; only even orders appear.
    pub orders: Vec<DiffractionOrder>,
    /// Largest Bessel index kept in any single series (or the largest |q|/2 for the oracle).
    pub truncation_order: usize,
    /// Upper bound on the probability not represented in `orders`.
    pub truncation_residual: f64,
    /// Phase common to every amplitude, rad.
    pub global_phase: f64,
    /// Initial wave number of the beam, 1/m. Orders are relative to it.
    pub k0: f64,
}

impl DiffractionPattern {
    pub(crate) fn from_amplitudes(
        amplitudes: impl IntoIterator<Item = (i64, Complex64)>,
        truncation_order: usize,
        truncation_residual: f64,
        global_phase: f64,
    ) -> Self {
        let orders = amplitudes
            .into_iter()
            .map(|(order, amplitude)| DiffractionOrder { order, amplitude, intensity: amplitude.norm_sqr() })
            .collect();
        Self { orders, truncation_order, truncation_residual, global_phase, k0: 0.0 }
    }

    pub fn with_k0(mut self, k0: f64) -> Self {
        self.k0 = k0;
        self
    }

    pub fn total_intensity(&self) -> f64 {
        self.orders.iter().map(|o| o.intensity).sum()
    }

    pub fn get(&self, order: i64) -> Option<&DiffractionOrder> {
        self.orders
            .binary_search_by_key(&order, |o| o.order)
            .ok()
            .map(|i| &self.orders[i])
    }

    /// Amplitude at `order`, zero if the order is not listed.
    pub fn amplitude(&self, order: i64) -> Complex64 {
        self.get(order).map_or(Complex64::new(0.0, 0.0), |o| o.amplitude)
    }

    pub fn intensity(&self, order: i64) -> f64 {
        self.get(order).map_or(0.0, |o| o.intensity)
    }

    /// Amplitude including the global phase.
    pub fn full_amplitude(&self, order: i64) -> Complex64 {
        self.amplitude(order) * Complex64::from_polar(1.0, self.global_phase)
    }

    pub fn order_range(&self) -> (i64, i64) {
        match (self.orders.first(), self.orders.last()) {
            (Some(a), Some(b)) => (a.order, b.order),
            _ => (0, 0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_substitution() {
        let tau = 1e-12;
        let m = build_potential(2.0 * HBAR / tau, 0.0, 0.0, 1.0);
        let p = phases_from_potential(&m, tau).unwrap();
        assert!((p.theta0 - 1.0).abs() < 1e-15);
        assert_eq!((p.theta_a2, p.theta_a4, p.theta_c4), (0.0, 0.0, 0.0));

        let m = build_potential(0.0, 4.0 * HBAR / tau, 0.0, 1.0);
        let p = phases_from_potential(&m, tau).unwrap();
        assert!((p.theta_a2 - 1.0).abs() < 1e-15);
        assert!((p.theta_a4 - 0.5).abs() < 1e-15);
        assert!(p.is_tied());
    }

    #[test]
    fn visibility_target_gives_half_radian() {
        // U τ/ħ = 1 puts the dipole Bessel argument at 1/2
        let tau = 6.582e-13;
        let m = build_potential(HBAR / tau, 0.0, 0.0, 1.0);
        assert!((phases_from_potential(&m, tau).unwrap().theta0 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn phases_round_trip_through_potential() {
        let p = PhaseSet::tied(0.7, -0.3, 0.2);
        let m = potential_from_phases(&p, 2e-12, 3.0).unwrap();
        let back = phases_from_potential(&m, 2e-12).unwrap();
        for (a, b) in [(p.theta0, back.theta0), (p.theta_a2, back.theta_a2), (p.theta_c4, back.theta_c4)] {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((back.global_phase - p.global_phase).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_tau() {
        let m = build_potential(1.0, 0.0, 0.0, 1.0);
        assert_eq!(phases_from_potential(&m, 0.0), Err(PatternError::InvalidInteractionTime(0.0)));
    }
}
