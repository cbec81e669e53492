//! J_n(x) for a few orders and arguments, plus the Neumann sum.

use kapitza_dirac::bessel::bessel_j_sequence;

fn main() {
    let xs = [0.5, 1.0, 5.0, 20.0, 100.0];
    print!("{:>3}", "n");
    for x in xs {
        print!(" {x:>22}");
    }
    println!();
    let seqs: Vec<Vec<f64>> = xs.iter().map(|&x| bessel_j_sequence(150, x).unwrap()).collect();
    for n in [0, 1, 2, 5, 10, 30] {
        print!("{n:>3}");
        for s in &seqs {
            print!(" {:>22.15e}", s[n]);
        }
        println!();
    }
    for (x, s) in xs.iter().zip(&seqs) {
        let sum = s[0] * s[0] + 2.0 * s[1..].iter().map(|v| v * v).sum::<f64>();
        println!("x = {x}: J_0^2 + 2 sum J_n^2 - 1 = {:+.1e}", sum - 1.0);
    }
}
