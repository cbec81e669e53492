//! Permanent multipoles: magnitude estimates and their vanishing time average.
//!
//! A permanent multipole couples linearly to the field, so its interaction
//! oscillates as `cos(ω t)` and averages out, while the induced dipole couples
//! quadratically (`cos^2(ω t)`) and survives with a factor 1/2.

use std::f64::consts::PI;

use thiserror::Error;

use super::LaserGrating;
use crate::units;

pub const MIN_SAMPLES_PER_PERIOD: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MultipoleError {
    #[error("need at least {MIN_SAMPLES_PER_PERIOD} samples per period, got {0}")]
    TooFewSamples(usize),
    #[error("multipole order must be >= 2, got {0}")]
    OrderTooLow(u32),
}

/// Average of `integrand(ω t)` over one optical period.
///
/// Uses equally spaced phases `2π j / N`, which is exact for trigonometric
/// polynomials of degree below `N`.
pub fn time_average<F>(samples_per_period: usize, integrand: F) -> Result<f64, MultipoleError>
where
    F: Fn(f64) -> f64,
{
    if samples_per_period < MIN_SAMPLES_PER_PERIOD {
        return Err(MultipoleError::TooFewSamples(samples_per_period));
    }
    let n = samples_per_period as f64;
    let sum: f64 = (0..samples_per_period).map(|j| integrand(2.0 * PI * j as f64 / n)).sum();
    Ok(sum / n)
}

/// Instantaneous scale `e r0^n k^(n-1) E0` (J) of the n-th permanent multipole.
///
/// `n = 2` is the quadrupole. For `r0 k ≈ 1` every order is comparable to
/// `e r0 E0`, yet each averages to zero over a period.
pub fn multipole_magnitude(order: u32, laser: &LaserGrating) -> Result<f64, MultipoleError> {
    if order < 2 {
        return Err(MultipoleError::OrderTooLow(order));
    }
    let r0 = units::BOHR_RADIUS;
    let k = laser.wave_number();
    Ok(units::E_CHARGE * r0.powi(order as i32) * k.powi(order as i32 - 1) * laser.field_amplitude())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_squared_averages_to_half() {
        let v = time_average(64, |p| p.cos().powi(2)).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn odd_powers_vanish() {
        for n in [1, 3, 5, 7] {
            let v = time_average(64, |p| p.cos().powi(n)).unwrap();
            assert!(v.abs() < 1e-12, "cos^{n}: {v}");
        }
        // the quadrupole/magnetic-dipole coupling times the dipole one
        let v = time_average(16, |p| p.cos().powi(2) * p.cos()).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn rejects_coarse_sampling() {
        assert_eq!(time_average(15, f64::cos), Err(MultipoleError::TooFewSamples(15)));
    }

    #[test]
    fn magnitude_scaling() {
        let l = LaserGrating::new(5e-10, 1e14, 1e-12, 1e-6).unwrap();
        let er0e0 = units::E_CHARGE * units::BOHR_RADIUS * l.field_amplitude();
        let r0k = units::BOHR_RADIUS * l.wave_number();
        let q2 = multipole_magnitude(2, &l).unwrap();
        let q3 = multipole_magnitude(3, &l).unwrap();
        assert!((q2 / er0e0 - r0k).abs() < 1e-12);
        assert!((q3 / q2 - r0k).abs() < 1e-12);
        assert!(q2 / er0e0 > 0.5 && q2 / er0e0 < 1.0);
        assert_eq!(multipole_magnitude(2, &l.with_intensity(0.0)).unwrap(), 0.0);
        assert_eq!(multipole_magnitude(1, &l), Err(MultipoleError::OrderTooLow(1)));
    }
}
