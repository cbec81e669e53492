//! Induced-quadrupole terms break the +q/-q symmetry of the pattern.

use kapitza_dirac::diffraction::{dipole_pattern, quadrupole_pattern, PhaseSet};

fn main() {
    let theta0 = 0.8;
    let dipole = dipole_pattern(theta0, 1e-12).unwrap();
    let full = quadrupole_pattern(&PhaseSet::tied(theta0, 0.2, -0.05), 1e-12).unwrap();
    println!("{:>4} {:>12} {:>12}", "q", "dipole", "quadrupole");
    for q in (-8..=8).step_by(2) {
        println!("{q:>4} {:>12.6e} {:>12.6e}", dipole.intensity(q), full.intensity(q));
    }
    println!("I(+2) - I(-2) = {:.3e}", full.intensity(2) - full.intensity(-2));
}
