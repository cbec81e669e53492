use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::atom::{require_non_negative, require_positive, InvalidField};
use crate::units;

/// Light-side inputs: a standing wave of the given wavelength and intensity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserGrating {
    /// m
    pub wavelength: f64,
    /// W/m^2. Zero is allowed and means "no grating".
    pub intensity: f64,
    /// s
    pub pulse_duration: f64,
    /// m
    pub spot_radius: f64,
}

impl LaserGrating {
    pub fn new(wavelength: f64, intensity: f64, pulse_duration: f64, spot_radius: f64) -> Result<Self, InvalidField> {
        let laser = Self { wavelength, intensity, pulse_duration, spot_radius };
        laser.validate()?;
        Ok(laser)
    }

    pub fn validate(&self) -> Result<(), InvalidField> {
        require_positive("wavelength_m", self.wavelength)?;
        require_non_negative("intensity_W_m2", self.intensity)?;
        require_positive("pulse_duration_s", self.pulse_duration)?;
        require_positive("spot_radius_m", self.spot_radius)?;
        Ok(())
    }

    /// `k_L = 2π / λ`, 1/m.
    pub fn wave_number(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// `ω_L = 2π c / λ`, rad/s.
    pub fn angular_frequency(&self) -> f64 {
        2.0 * PI * units::C / self.wavelength
    }

    /// `T_L = 2π / ω_L`, s.
    pub fn optical_period(&self) -> f64 {
        2.0 * PI / self.angular_frequency()
    }

    /// Peak field `E0` in V/m.
    pub fn field_amplitude(&self) -> f64 {
        units::field_from_intensity(self.intensity)
    }

    pub fn with_intensity(self, intensity: f64) -> Self {
        Self { intensity, ..self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let l = LaserGrating::new(5e-10, 1e14, 1e-12, 1e-6).unwrap();
        assert!((l.wave_number() - 1.256_637_061_435_917e10).abs() < 1e-3);
        assert!((l.optical_period() - 5e-10 / units::C).abs() < 1e-30);
        assert_eq!(LaserGrating::new(5e-10, 0.0, 1e-12, 1e-6).unwrap().field_amplitude(), 0.0);
    }

    #[test]
    fn rejects_bad_fields() {
        assert_eq!(LaserGrating::new(0.0, 1.0, 1.0, 1.0).unwrap_err().key, "wavelength_m");
        assert_eq!(LaserGrating::new(1.0, -1.0, 1.0, 1.0).unwrap_err().key, "intensity_W_m2");
        assert_eq!(LaserGrating::new(1.0, 1.0, f64::NAN, 1.0).unwrap_err().key, "pulse_duration_s");
    }
}
