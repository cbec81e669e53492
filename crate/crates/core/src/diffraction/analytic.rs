//! Bessel-series diffraction amplitudes.
//!
//! `exp(iξ cos φ) = Σ i^n J_n(ξ) e^{inφ}` and `exp(iξ sin φ) = Σ J_n(ξ) e^{inφ}`
//! turn each Fourier term of the potential into a series over diffraction
//! orders; the pattern of the full potential is their discrete convolution.

use num_complex::Complex64;

use super::{DiffractionPattern, PatternError, PhaseSet};
use crate::bessel::{BesselSource, Miller, MAX_ORDER};

const MAX_TOLERANCE: f64 = 1e-3;

/// Dipole-only pattern: order `q = 2n` has amplitude `i^n J_n(theta0)`.
pub fn dipole_pattern(theta0: f64, tolerance: f64) -> Result<DiffractionPattern, PatternError> {
    dipole_pattern_with(&Miller, theta0, tolerance)
}

/// Pattern of the full potential: the four-fold convolution over
/// `(n, m, l, r)` with `2n + 2m + 4l + 4r = q` of
/// `i^(n+r) J_n(θ0) J_m(θA2) J_l(θA4) J_r(θC4)`.
pub fn quadrupole_pattern(phases: &PhaseSet, tolerance: f64) -> Result<DiffractionPattern, PatternError> {
    quadrupole_pattern_with(&Miller, phases, tolerance)
}

pub fn dipole_pattern_with<B: BesselSource + ?Sized>(
    bessel: &B,
    theta0: f64,
    tolerance: f64,
) -> Result<DiffractionPattern, PatternError> {
    check_tolerance(tolerance)?;
    if !theta0.is_finite() {
        return Err(PatternError::NonFinitePhase { phase: theta0 });
    }
    let s = TruncatedSeries::new(bessel, theta0, tolerance)?;
    let spectrum = s.spectrum(Kind::Cos, 1);
    Ok(spectrum.into_pattern(s.order, s.tail, theta0))
}

pub fn quadrupole_pattern_with<B: BesselSource + ?Sized>(
    bessel: &B,
    phases: &PhaseSet,
    tolerance: f64,
) -> Result<DiffractionPattern, PatternError> {
    check_tolerance(tolerance)?;
    phases.check_finite()?;
    // The norm of the discarded part is at most the sum of the per-series
    // discarded norms, so a quarter of sqrt(tolerance) per series suffices.
    let budget = tolerance / 16.0;
    let terms = [
        (phases.theta0, Kind::Cos, 1),
        (phases.theta_a2, Kind::Sin, 1),
        (phases.theta_a4, Kind::Sin, 2),
        (phases.theta_c4, Kind::Cos, 2),
    ];
    let mut total = Spectrum::unit();
    let mut order = 0;
    let mut root_tail = 0.0;
    for (xi, kind, stride) in terms {
        let s = TruncatedSeries::new(bessel, xi, budget)?;
        order = order.max(s.order);
        root_tail += s.tail.sqrt();
        total = total.convolve(&s.spectrum(kind, stride));
    }
    Ok(total.into_pattern(order, root_tail * root_tail, phases.global_phase))
}

fn check_tolerance(tolerance: f64) -> Result<(), PatternError> {
    if tolerance > 0.0 && tolerance <= MAX_TOLERANCE {
        Ok(())
    } else {
        Err(PatternError::InvalidTolerance(tolerance))
    }
}

/// Initial truncation index for a Bessel series of argument `xi`.
pub fn initial_truncation(xi: f64) -> usize {
    if xi == 0.0 {
        return 0;
    }
    let a = xi.abs();
    (a + 8.0 * a.cbrt() + 12.0).ceil() as usize
}

#[derive(Clone, Copy)]
enum Kind {
    /// `exp(iξ cos φ)`: coefficient `i^n J_n`.
    Cos,
    /// `exp(iξ sin φ)`: coefficient `J_n`.
    Sin,
}

/// `J_0..=J_N(ξ)` with the probability `Σ_{|n|>N} J_n^2` that was cut off.
struct TruncatedSeries {
    values: Vec<f64>,
    order: usize,
    tail: f64,
}

impl TruncatedSeries {
    fn new<B: BesselSource + ?Sized>(bessel: &B, xi: f64, tolerance: f64) -> Result<Self, PatternError> {
        let mut order = initial_truncation(xi);
        if order == 0 {
            return Ok(Self { values: vec![1.0], order: 0, tail: 0.0 });
        }
        let cap = MAX_ORDER / 2 - 20;
        loop {
            if order > cap {
                return Err(PatternError::TruncationFailed { phase: xi, tolerance, order: cap });
            }
            // The tail is summed out to 2N + 20, far past the super-exponential
            // decay of J_n for n > |ξ|.
            let mut values = bessel.sequence(2 * order + 20, xi)?;
            let tail = 2.0 * values[order + 1..].iter().map(|v| v * v).sum::<f64>();
            if tail <= tolerance {
                values.truncate(order + 1);
                return Ok(Self { values, order, tail });
            }
            order += (order / 4).max(8);
        }
    }

    /// Coefficients on the half-order grid `h = q/2`, series index `n` at `h = stride * n`.
    fn spectrum(&self, kind: Kind, stride: usize) -> Spectrum {
        let n = self.order as i64;
        let len = 2 * stride * self.order + 1;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        for idx in -n..=n {
            let k = idx.unsigned_abs() as usize;
            let j = if idx < 0 && k % 2 == 1 { -self.values[k] } else { self.values[k] };
            let c = match kind {
                Kind::Sin => Complex64::new(j, 0.0),
                Kind::Cos => match idx.rem_euclid(4) {
                    0 => Complex64::new(j, 0.0),
                    1 => Complex64::new(0.0, j),
                    2 => Complex64::new(-j, 0.0),
                    _ => Complex64::new(0.0, -j),
                },
            };
            coeffs[((idx + n) as usize) * stride] = c;
        }
        Spectrum { min_h: -(stride as i64) * n, coeffs }
    }
}

/// Dense coefficients on the half-order grid starting at `min_h`.
struct Spectrum {
    min_h: i64,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    fn unit() -> Self {
        Self { min_h: 0, coeffs: vec![Complex64::new(1.0, 0.0)] }
    }

    fn convolve(&self, other: &Spectrum) -> Spectrum {
        if other.coeffs.len() == 1 && other.min_h == 0 {
            let c = other.coeffs[0];
            return Spectrum { min_h: self.min_h, coeffs: self.coeffs.iter().map(|&a| a * c).collect() };
        }
        if self.coeffs.len() == 1 && self.min_h == 0 {
            return other.convolve(self);
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Spectrum { min_h: self.min_h + other.min_h, coeffs: out }
    }

    fn into_pattern(self, truncation_order: usize, residual: f64, global_phase: f64) -> DiffractionPattern {
        let min_h = self.min_h;
        let amplitudes = self.coeffs.into_iter().enumerate().map(|(i, c)| (2 * (min_h + i as i64), c));
        DiffractionPattern::from_amplitudes(amplitudes, truncation_order, residual, global_phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_grating_single_order() {
        let p = dipole_pattern(0.0, 1e-10).unwrap();
        assert_eq!(p.orders.len(), 1);
        assert_eq!(p.orders[0].order, 0);
        assert_eq!(p.orders[0].intensity, 1.0);
        let q = quadrupole_pattern(&PhaseSet::tied(0.0, 0.0, 0.0), 1e-10).unwrap();
        assert_eq!(q.orders, p.orders);
    }

    #[test]
    fn theta_one_intensities() {
        // J_n(1)^2 from a 40-digit evaluation
        let p = dipole_pattern(1.0, 1e-10).unwrap();
        let want = [(0, 0.585_527_499_513_664_02), (2, 0.193_644_518_014_459_08), (4, 0.013_202_810_849_495_481)];
        for (q, w) in want {
            assert!((p.intensity(q) - w).abs() < 1e-15, "q={q}");
            assert_eq!(p.intensity(-q), p.intensity(q));
        }
        assert!(p.orders.iter().all(|o| o.order % 2 == 0));
    }

    #[test]
    fn amplitudes_carry_powers_of_i() {
        let p = dipole_pattern(0.8, 1e-10).unwrap();
        let j1 = crate::bessel::bessel_j(1, 0.8).unwrap();
        assert_eq!(p.amplitude(2), Complex64::new(0.0, j1));
        assert_eq!(p.amplitude(-2), Complex64::new(0.0, j1));
    }

    #[test]
    fn unitarity_up_to_ten() {
        for i in 0..=40 {
            let theta = 0.25 * i as f64;
            let p = dipole_pattern(theta, 1e-10).unwrap();
            let s = p.total_intensity();
            assert!(s <= 1.0 + 1e-12 && s >= 1.0 - 1e-10, "θ={theta}: {s}");
            assert!(p.truncation_residual <= 1e-10);
        }
    }

    #[test]
    fn residual_bounds_discarded_probability() {
        // Doubling N shows how much probability the first truncation dropped.
        let theta = 6.0;
        let p = dipole_pattern(theta, 1e-3).unwrap();
        let n = p.truncation_order;
        let seq = crate::bessel::bessel_j_sequence(2 * n, theta).unwrap();
        let dropped: f64 = 2.0 * seq[n + 1..].iter().map(|v| v * v).sum::<f64>();
        assert!(p.truncation_residual >= dropped);
    }

    #[test]
    fn quadrupole_reduces_to_dipole_exactly() {
        for theta in [0.1, 1.0, 2.7, -1.9] {
            let d = dipole_pattern(theta, 1e-10).unwrap();
            let q = quadrupole_pattern(&PhaseSet::dipole(theta), 1e-10).unwrap();
            assert_eq!(d.orders, q.orders);
            assert_eq!(d.global_phase, q.global_phase);
        }
    }

    #[test]
    fn quadrupole_only_even_and_unitary() {
        let p = quadrupole_pattern(&PhaseSet::tied(0.0, 1.0, 0.0), 1e-10).unwrap();
        assert!(p.orders.iter().all(|o| o.order % 2 == 0));
        assert!((p.total_intensity() - 1.0).abs() < 1e-12);
        // sin-type gratings are not mirror symmetric in general
        assert!((p.intensity(2) - p.intensity(-2)).abs() > 1e-3);
    }

    #[test]
    fn tolerance_validation() {
        assert_eq!(dipole_pattern(1.0, 0.0), Err(PatternError::InvalidTolerance(0.0)));
        assert_eq!(dipole_pattern(1.0, 2e-3), Err(PatternError::InvalidTolerance(2e-3)));
        assert!(dipole_pattern(f64::NAN, 1e-6).is_err());
    }

    #[test]
    fn huge_phase_is_rejected() {
        assert!(matches!(dipole_pattern(2e4, 1e-6), Err(PatternError::TruncationFailed { .. })));
    }
}
