//! Direct Fourier analysis of the phase imprint, independent of the Bessel route.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{DiffractionPattern, PatternError};
use crate::potentials::PotentialModel;
use crate::units::HBAR;

pub const MIN_GRID_POINTS: usize = 4096;
/// Even orders with |amplitude| below this at the edges of the spectrum are dropped.
pub const AMPLITUDE_FLOOR: f64 = 1e-15;

/// FFT spectrum of the imprint, reduced to its even orders.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub pattern: DiffractionPattern,
    /// Largest |amplitude| found at any odd order.
    pub max_odd_amplitude: f64,
}

/// Sample `exp(i U(X) τ/ħ)` on `grid_points` points over one period `2π/k_L`
/// and return its Fourier coefficients; harmonic `q` is diffraction order `q`.
///
/// The potential is evaluated in its product form
/// `U0 cos^2 + UA cos^3 sin + UC cos^2 sin^2`, not through the Fourier
/// coefficients the analytic route uses. The constant `(U0/2 + UC/8) τ/ħ` is
/// removed before exponentiating and reported as the global phase.
pub fn phase_grating_oracle(
    model: &PotentialModel,
    tau: f64,
    grid_points: usize,
) -> Result<OracleResult, PatternError> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(PatternError::InvalidInteractionTime(tau));
    }
    if grid_points < MIN_GRID_POINTS || !grid_points.is_power_of_two() {
        return Err(PatternError::InvalidGrid { got: grid_points });
    }
    let n = grid_points;
    let scale = tau / HBAR;
    let offset = model.u0 / 2.0 + model.uc / 8.0;
    let step = 2.0 * std::f64::consts::PI / n as f64;

    let mut buffer: Vec<Complex64> = (0..n)
        .map(|j| {
            let (s, c) = (step * j as f64).sin_cos();
            let u = model.u0 * c * c + model.ua * c * c * c * s + model.uc * c * c * s * s;
            Complex64::from_polar(1.0, (u - offset) * scale)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buffer);
    let norm = 1.0 / n as f64;
    for c in buffer.iter_mut() {
        *c *= norm;
    }

    let half = (n / 2) as i64;
    let order_of = |idx: usize| if (idx as i64) < half { idx as i64 } else { idx as i64 - n as i64 };
    let mut spectrum: Vec<(i64, Complex64)> = buffer.iter().enumerate().map(|(i, &c)| (order_of(i), c)).collect();
    spectrum.sort_by_key(|&(q, _)| q);

    let max_odd_amplitude = spectrum
        .iter()
        .filter(|(q, _)| q % 2 != 0)
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);

    // Resolved only if the spectrum has died out well before the Nyquist order.
    let edge = spectrum
        .iter()
        .filter(|(q, _)| q.abs() >= half - 8)
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max);
    if edge > 1e-13 {
        return Err(PatternError::GridTooCoarse(n));
    }

    let even: Vec<(i64, Complex64)> = spectrum.into_iter().filter(|(q, _)| q % 2 == 0).collect();
    let first = even.iter().position(|(_, c)| c.norm() >= AMPLITUDE_FLOOR);
    let last = even.iter().rposition(|(_, c)| c.norm() >= AMPLITUDE_FLOOR);
    let (first, last) = match (first, last) {
        (Some(a), Some(b)) => (a, b),
        _ => (even.len() / 2, even.len() / 2),
    };
    let dropped: f64 = even[..first].iter().chain(&even[last + 1..]).map(|(_, c)| c.norm_sqr()).sum();
    let kept = &even[first..=last];
    let truncation_order = kept.iter().map(|(q, _)| q.unsigned_abs() as usize / 2).max().unwrap_or(0);
    let pattern = DiffractionPattern::from_amplitudes(kept.iter().copied(), truncation_order, dropped, offset * scale);
    Ok(OracleResult { pattern, max_odd_amplitude })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffraction::{dipole_pattern, potential_from_phases, PhaseSet};
    use crate::potentials::build_potential;

    const TAU: f64 = 1e-12;
    const K: f64 = 1.256_637_061_435_917e10;

    #[test]
    fn zero_potential_is_single_order() {
        let m = build_potential(0.0, 0.0, 0.0, K);
        let r = phase_grating_oracle(&m, TAU, 4096).unwrap();
        assert_eq!(r.pattern.orders.len(), 1);
        assert_eq!(r.pattern.orders[0].order, 0);
        assert!((r.pattern.orders[0].intensity - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matches_dipole_series() {
        let m = potential_from_phases(&PhaseSet::dipole(0.5), TAU, K).unwrap();
        let r = phase_grating_oracle(&m, TAU, 1 << 14).unwrap();
        let d = dipole_pattern(0.5, 1e-12).unwrap();
        for o in &d.orders {
            let diff = (r.pattern.full_amplitude(o.order) - d.full_amplitude(o.order)).norm();
            assert!(diff < 1e-10, "q={}: {diff}", o.order);
        }
        assert!(r.max_odd_amplitude < 1e-12);
        for o in &r.pattern.orders {
            assert!((o.intensity - r.pattern.intensity(-o.order)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let m = build_potential(0.0, 0.0, 0.0, K);
        assert_eq!(phase_grating_oracle(&m, TAU, 4095), Err(PatternError::InvalidGrid { got: 4095 }));
        assert_eq!(phase_grating_oracle(&m, TAU, 2048), Err(PatternError::InvalidGrid { got: 2048 }));
        assert!(phase_grating_oracle(&m, 0.0, 4096).is_err());
    }

    #[test]
    fn coarse_grid_is_detected() {
        let m = potential_from_phases(&PhaseSet::dipole(1500.0), TAU, K).unwrap();
        assert_eq!(phase_grating_oracle(&m, TAU, 4096), Err(PatternError::GridTooCoarse(4096)));
    }
}
