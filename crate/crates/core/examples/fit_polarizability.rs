//! Recover alpha, A and C of a model atom from its peak intensities.

use kapitza_dirac::diffraction::{phases_from_potential, PhaseSet};
use kapitza_dirac::fitting::{fit_quadrupole, polarizabilities, quadrupole_intensities, LaserContext, ObservedPattern};
use kapitza_dirac::potentials::{catalog::Catalog, LaserGrating, PotentialModel};

fn main() {
    let atom = Catalog::builtin().get("Model15Q").unwrap().clone();
    let laser = LaserGrating::new(5e-10, 3e14, 1e-12, 1e-6).unwrap();
    let tau = 2e-12;
    let truth = phases_from_potential(&PotentialModel::for_species(&atom, &laser), tau).unwrap();

    let orders: Vec<i64> = (-5..=5).map(|h| 2 * h).collect();
    let intensities = quadrupole_intensities([truth.theta0, truth.theta_a2, truth.theta_c4], &orders).unwrap();
    let observed = ObservedPattern::from_intensities(orders.into_iter().zip(intensities)).unwrap();

    let fit = fit_quadrupole(&observed, &PhaseSet::dipole(0.5)).unwrap();
    println!("fit: theta0 {:.9} thetaA2 {:.9} thetaC4 {:.9} (residual {:.1e})", fit.theta0_hat, fit.theta_a2_hat, fit.theta_c4_hat, fit.residual);

    let ctx = LaserContext { intensity: laser.intensity, wavelength: laser.wavelength, interaction_time: tau };
    let est = polarizabilities(&fit, &ctx).unwrap();
    println!("alpha = {:.6e} m^3 (catalog {:.6e})", est.alpha, atom.alpha);
    println!("A_dq  = {:.6} (catalog {})", est.dipole_quadrupole, atom.dipole_quadrupole);
    println!("C_qq  = {:.6} (catalog {})", est.quadrupole_quadrupole, atom.quadrupole_quadrupole);
}
