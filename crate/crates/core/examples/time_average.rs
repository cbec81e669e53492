//! Why permanent multipoles drop out: their coupling averages to zero over a
//! period, while the induced dipole keeps a factor 1/2.

use kapitza_dirac::potentials::multipole::{multipole_magnitude, time_average};
use kapitza_dirac::potentials::LaserGrating;

fn main() {
    let n = 64;
    println!("<cos>        = {:+.3e}", time_average(n, f64::cos).unwrap());
    println!("<cos^2>      = {:+.15}", time_average(n, |p| p.cos().powi(2)).unwrap());
    println!("<cos^2 cos>  = {:+.3e}", time_average(n, |p| p.cos().powi(3)).unwrap());

    let laser = LaserGrating::new(5e-10, 1e14, 1e-12, 1e-6).unwrap();
    for order in 2..=4 {
        println!("permanent 2^{order}-pole scale: {:.3e} J", multipole_magnitude(order, &laser).unwrap());
    }
}
