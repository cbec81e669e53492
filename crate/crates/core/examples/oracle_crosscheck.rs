//! Bessel-series amplitudes against a direct FFT of the phase imprint.

use kapitza_dirac::diffraction::{phase_grating_oracle, quadrupole_pattern, PhaseSet, phases_from_potential};
use kapitza_dirac::potentials::{catalog::Catalog, LaserGrating, PotentialModel};

fn main() {
    let atom = Catalog::builtin().get("Model15Q").unwrap().clone();
    let laser = LaserGrating::new(5e-10, 4e14, 1e-12, 1e-6).unwrap();
    let model = PotentialModel::for_species(&atom, &laser);
    let tau = 2e-12;

    let phases: PhaseSet = phases_from_potential(&model, tau).unwrap();
    let analytic = quadrupole_pattern(&phases, 1e-12).unwrap();
    let oracle = phase_grating_oracle(&model, tau, 1 << 14).unwrap();

    println!("{phases:?}");
    let mut worst = 0.0f64;
    for q in (-10..=10).step_by(2) {
        let a = analytic.full_amplitude(q);
        let b = oracle.pattern.full_amplitude(q);
        worst = worst.max((a - b).norm());
        println!("{q:>4}  {:>+.12e} {:>+.12e}i   |diff| {:.1e}", a.re, a.im, (a - b).norm());
    }
    println!("max |diff| = {worst:.2e}, largest odd-order amplitude = {:.2e}", oracle.max_odd_amplitude);
}
