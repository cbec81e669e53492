//! Feasibility of atomic Kapitza-Dirac diffraction in a 5 Angstrom grating.

use kapitza_dirac::feasibility::{plan_experiment, Thresholds};
use kapitza_dirac::potentials::{catalog::Catalog, LaserGrating};
use kapitza_dirac::{feasibility, units};

fn main() {
    let atom = Catalog::builtin().get("Model15").unwrap().clone();
    let u = units::ev_to_joule(1e-3);
    let intensity = feasibility::required_intensity(&atom, u).unwrap();
    let laser = LaserGrating::new(5e-10, intensity, 1e-12, 1e-6).unwrap();

    let report = plan_experiment(&atom, &laser, u, &Thresholds::default()).unwrap();
    print!("{}", report.table());
    println!("all flags pass: {}", report.all_pass());

    // Sodium cross section at 100 eV, the classic estimate.
    let na = Catalog::builtin().get("Na").unwrap().clone();
    let ion = feasibility::ionization_survival(&na, 1e14, 100.0, 1e-12).unwrap();
    println!("Na at 100 eV: sigma {:.1e} m^2, gamma*tau {:.3e}, survival {:.4}", ion.cross_section, ion.gamma_tau, ion.survival);
}
