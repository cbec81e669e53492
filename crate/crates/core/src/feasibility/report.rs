use std::fmt::Write;

use serde::{Deserialize, Serialize};

/// Pass/fail thresholds for [`super::plan_experiment`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// Interaction volume for the photon count, m^3.
    pub interaction_volume: f64,
    /// Photons required in that volume.
    pub min_photons: f64,
    /// Largest acceptable Γτ.
    pub max_gamma_tau: f64,
    /// Onset of non-linear polarizabilities, W/m^2.
    pub nonlinear_intensity: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { interaction_volume: 1e-12, min_photons: 1e6, max_gamma_tau: 0.1, nonlinear_intensity: 1e18 }
    }
}

/// Order-of-magnitude estimates quoted for the 5 Å proposal, kept next to
/// the computed numbers for comparison. They are annotations only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceEstimates {
    pub recoil_energy_ev: f64,
    pub target_depth_ev: f64,
    pub required_intensity: f64,
    pub interaction_time: f64,
    /// Stated photon energy at 5 Å; the formula gives about 2.5e3 eV.
    pub photon_energy_ev: f64,
    /// Photon energy used for the sodium cross section.
    pub sodium_photon_energy_ev: f64,
    pub sodium_cross_section: f64,
    pub gamma_tau: f64,
    /// Intensity used to observe the effect with electrons, W/m^2.
    pub electron_kd_intensity: f64,
    /// Typical intensity of resonant atomic Kapitza-Dirac experiments, W/m^2.
    pub resonant_kd_intensity: f64,
    /// Stated photon density at 500 nm and 1e7 W/m^2; the formula gives about 8.4e16.
    pub visible_photon_density: f64,
    pub semiclassical_intensity: f64,
    pub atom_velocity: f64,
}

pub const HEADLINE_ESTIMATES: ReferenceEstimates = ReferenceEstimates {
    recoil_energy_ev: 1e-4,
    target_depth_ev: 1e-3,
    required_intensity: 1e14,
    interaction_time: 1e-12,
    photon_energy_ev: 3e2,
    sodium_photon_energy_ev: 100.0,
    sodium_cross_section: 5e-22,
    gamma_tau: 1e-3,
    electron_kd_intensity: 5e14,
    resonant_kd_intensity: 1e7,
    visible_photon_density: 1e18,
    semiclassical_intensity: 1e11,
    atom_velocity: 1e6,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub diffraction_regime: bool,
    pub visibility: bool,
    pub semiclassical: bool,
    pub low_ionization: bool,
    pub below_nonlinear_threshold: bool,
}

impl Flags {
    pub fn all(&self) -> bool {
        self.diffraction_regime && self.visibility && self.semiclassical && self.low_ionization && self.below_nonlinear_threshold
    }

    fn entries(&self) -> [(&'static str, bool); 5] {
        [
            ("diffraction_regime", self.diffraction_regime),
            ("visibility", self.visibility),
            ("semiclassical", self.semiclassical),
            ("low_ionization", self.low_ionization),
            ("below_nonlinear_threshold", self.below_nonlinear_threshold),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub species: String,
    /// m
    pub wavelength: f64,
    /// W/m^2
    pub intensity: f64,
    pub target_depth_ev: f64,
    /// Exact lightshift depth U0 at the laser intensity, eV.
    pub lightshift_depth_ev: f64,
    /// ε, eV
    pub recoil_energy: f64,
    /// |U0| / ε
    pub regime_ratio: f64,
    /// W/m^2
    pub required_intensity: f64,
    /// τ = ħ / U_target, s
    pub interaction_time: f64,
    /// ħω, eV
    pub photon_energy: f64,
    /// σ(ħω), m^2
    pub cross_section: f64,
    /// Γ, 1/s
    pub ionization_rate: f64,
    pub gamma_tau: f64,
    pub survival_fraction: f64,
    /// 1/m^3
    pub photon_density: f64,
    pub photons_in_volume: f64,
    /// m/s
    pub atom_velocity_needed: f64,
    pub flags: Flags,
    pub thresholds: Thresholds,
    pub intensity_convention: String,
    pub adiabaticity_note: String,
    pub reference: ReferenceEstimates,
}

impl FeasibilityReport {
    pub fn all_pass(&self) -> bool {
        self.flags.all()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable table of computed values next to the reference estimates.
    pub fn table(&self) -> String {
        let r = &self.reference;
        let rows: [(&str, f64, &str, Option<f64>); 13] = [
            ("lightshift depth U0", self.lightshift_depth_ev, "eV", None),
            ("target depth U", self.target_depth_ev, "eV", Some(r.target_depth_ev)),
            ("recoil energy", self.recoil_energy, "eV", Some(r.recoil_energy_ev)),
            ("|U0| / recoil", self.regime_ratio, "", None),
            ("required intensity", self.required_intensity, "W/m^2", Some(r.required_intensity)),
            ("interaction time", self.interaction_time, "s", Some(r.interaction_time)),
            ("photon energy", self.photon_energy, "eV", Some(r.photon_energy_ev)),
            ("cross section", self.cross_section, "m^2", None),
            ("ionization rate", self.ionization_rate, "1/s", None),
            ("gamma * tau", self.gamma_tau, "", Some(r.gamma_tau)),
            ("survival fraction", self.survival_fraction, "", None),
            ("photons in volume", self.photons_in_volume, "", Some(self.thresholds.min_photons)),
            ("atom velocity", self.atom_velocity_needed, "m/s", Some(r.atom_velocity)),
        ];
        let mut s = String::new();
        let _ = writeln!(s, "species {}  wavelength {:e} m  intensity {:e} W/m^2", self.species, self.wavelength, self.intensity);
        let _ = writeln!(s, "{:<22} {:>14} {:<6} {:>10}", "quantity", "value", "unit", "reference");
        for (name, v, unit, reference) in rows {
            let reference = reference.map_or(String::from("-"), |x| format!("{x:.0e}"));
            let _ = writeln!(s, "{name:<22} {v:>14.4e} {unit:<6} {reference:>10}");
        }
        for (name, ok) in self.flags.entries() {
            let _ = writeln!(s, "[{}] {name}", if ok { "PASS" } else { "FAIL" });
        }
        let _ = writeln!(s, "note: {}", self.adiabaticity_note);
        let _ = writeln!(s, "note: {}", self.intensity_convention);
        s
    }
}
