//! Dipole-only Kapitza-Dirac pattern: order 2n carries J_n(theta0)^2.
//!
//! cargo run --example dipole_pattern -- 1.0

use kapitza_dirac::diffraction::dipole_pattern;

fn main() {
    let theta0: f64 = std::env::args().nth(1).map_or(1.0, |s| s.parse().expect("theta0 must be a number"));
    let pattern = dipole_pattern(theta0, 1e-12).expect("pattern");
    println!("theta0 = {theta0}, truncation order {}, residual {:e}", pattern.truncation_order, pattern.truncation_residual);
    for o in pattern.orders.iter().filter(|o| o.intensity > 1e-6) {
        println!("{:>4}  {:.8}", o.order, o.intensity);
    }
    println!("sum = {:.15}", pattern.total_intensity());
}
