//! Bessel functions of the first kind for integer order.
//!
//! Whole sequences `J_0..=J_n` are produced at once, which is what the
//! diffraction engines need. Small arguments use the ascending power series;
//! everything else uses Miller's downward recurrence, normalized either by the
//! Neumann sum `J_0 + 2 Σ J_2k = 1` or, for large arguments, by the Hankel
//! asymptotic form of `J_0`/`J_1`.

use thiserror::Error;

/// Largest |x| accepted.
pub const MAX_ARGUMENT: f64 = 1e4;
/// Largest |n| accepted.
pub const MAX_ORDER: usize = 20_000;

const SERIES_CUTOFF: f64 = 1.0;
const ASYMPTOTIC_CUTOFF: f64 = 25.0;
const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_FACTOR: f64 = 1e-250;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BesselError {
    #[error("argument {0} outside |x| <= {MAX_ARGUMENT}")]
    ArgumentOutOfRange(f64),
    #[error("order {0} outside |n| <= {MAX_ORDER}")]
    OrderOutOfRange(i64),
}

/// `J_n(x)` for integer `n` (negative orders via `J_{-n} = (-1)^n J_n`).
pub fn bessel_j(n: i32, x: f64) -> Result<f64, BesselError> {
    let order = n.unsigned_abs() as usize;
    if order > MAX_ORDER {
        return Err(BesselError::OrderOutOfRange(n as i64));
    }
    let seq = bessel_j_sequence(order, x)?;
    let v = seq[order];
    Ok(if n < 0 && order % 2 == 1 { -v } else { v })
}

/// `[J_0(x), J_1(x), ..., J_nmax(x)]`.
pub fn bessel_j_sequence(nmax: usize, x: f64) -> Result<Vec<f64>, BesselError> {
    if !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(BesselError::ArgumentOutOfRange(x));
    }
    if nmax > MAX_ORDER {
        return Err(BesselError::OrderOutOfRange(nmax as i64));
    }
    let ax = x.abs();
    let mut seq = if ax == 0.0 {
        let mut s = vec![0.0; nmax + 1];
        s[0] = 1.0;
        s
    } else if ax < SERIES_CUTOFF {
        (0..=nmax).map(|n| ascending_series(n, ax)).collect()
    } else {
        miller(nmax, ax)
    };
    if x < 0.0 {
        for v in seq.iter_mut().skip(1).step_by(2) {
            *v = -*v;
        }
    }
    Ok(seq)
}

/// Bessel-function view used by the pattern engines.
///
/// The default implementation is [`bessel_j_sequence`]; alternative sources
/// are useful for exercising the verification harness.
pub trait BesselSource {
    fn sequence(&self, nmax: usize, x: f64) -> Result<Vec<f64>, BesselError>;
}

/// The library's own Bessel routine.
#[derive(Debug, Clone, Copy, Default)]
pub struct Miller;

impl BesselSource for Miller {
    fn sequence(&self, nmax: usize, x: f64) -> Result<Vec<f64>, BesselError> {
        bessel_j_sequence(nmax, x)
    }
}

fn ascending_series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= half / k as f64;
    }
    if lead == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn miller(nmax: usize, x: f64) -> Vec<f64> {
    let top = (nmax.max(1) as f64).max(x);
    let mut start = (top + 12.0 * x.cbrt() + (60.0 * top).sqrt() + 20.0).ceil() as usize;
    if start % 2 == 1 {
        start += 1;
    }

    let keep = nmax.max(1);
    let mut out = vec![0.0; keep + 1];
    let mut above = 0.0;
    let mut current = 1e-30;
    let mut even_sum = 0.0;
    // Walk k = start ..= 1, producing J_{k-1} from J_k and J_{k+1}.
    for k in (1..=start).rev() {
        if k <= keep {
            out[k] = current;
        }
        if k % 2 == 0 {
            even_sum += current;
        }
        let below = (2.0 * k as f64 / x) * current - above;
        above = current;
        current = below;
        if current.abs() > RESCALE_ABOVE {
            current *= RESCALE_FACTOR;
            above *= RESCALE_FACTOR;
            even_sum *= RESCALE_FACTOR;
            for v in out.iter_mut().skip(k.min(keep + 1)) {
                *v *= RESCALE_FACTOR;
            }
        }
    }
    out[0] = current;

    let scale = if x < ASYMPTOTIC_CUTOFF {
        1.0 / (current + 2.0 * even_sum)
    } else {
        let (j0, j1) = hankel_j0_j1(x);
        if j0.abs() >= j1.abs() {
            j0 / out[0]
        } else {
            j1 / out[1]
        }
    };
    out.truncate(nmax + 1);
    for v in out.iter_mut() {
        *v *= scale;
    }
    out
}

/// Hankel asymptotic expansions of `J_0` and `J_1`, valid for large `x`.
fn hankel_j0_j1(x: f64) -> (f64, f64) {
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(1.0, x);
    let (s, c) = x.sin_cos();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // cos/sin of x - π/4 and x - 3π/4 without forming the shifted argument.
    let (c0, s0) = ((c + s) * r, (s - c) * r);
    let (c1, s1) = ((s - c) * r, -(s + c) * r);
    let amp = (2.0 / (std::f64::consts::PI * x)).sqrt();
    (amp * (p0 * c0 - q0 * s0), amp * (p1 * c1 - q1 * s1))
}

fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() > last || term == 0.0 {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    (p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
        (a - b).abs() <= rel * b.abs() || (a - b).abs() <= abs
    }

    // Reference values from mpmath at 40 significant digits.
    #[test]
    fn large_argument_values() {
        let cases = [
            (0, 1000.0, 0.024_786_686_152_420_174_561_330_73),
            (5, 10000.0, 0.003_638_932_738_303_572_651_006_358),
            (200, 100.0, 2.059_442_493_941_167_872_422_849e-41),
            (150, 180.0, -0.011_242_520_417_510_283_123_024_8),
            (3, 9999.5, -0.006_601_480_091_277_954_564_823_366),
            (100, 10000.0, -0.007_976_516_311_393_374_168_021_44),
            (0, 25.0, 0.096_266_783_275_958_116_173_503_34),
            (1, 30.5, -0.143_494_300_150_970_941_114_985_7),
            (50, 20.0, 4.451_039_284_700_681_616_224_217e-16),
            (40, 7.0, 5.258_381_811_450_635_339_832_03e-27),
        ];
        for (n, x, want) in cases {
            let got = bessel_j(n, x).unwrap();
            assert!(close(got, want, 1e-11, 1e-15), "J_{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn reflection_in_order_and_argument() {
        for &x in &[0.3, 2.5, 17.0, 40.0] {
            for n in 0..12 {
                let p = bessel_j(n, x).unwrap();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(bessel_j(-n, x).unwrap(), sign * p);
                assert_eq!(bessel_j(n, -x).unwrap(), sign * p);
            }
        }
    }

    #[test]
    fn zero_argument() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(7, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(matches!(bessel_j(0, 1.5e4), Err(BesselError::ArgumentOutOfRange(_))));
        assert!(bessel_j(0, f64::NAN).is_err());
        assert!(bessel_j(30_000, 1.0).is_err());
    }

    #[test]
    fn series_and_recurrence_agree_at_cutoff() {
        for n in 0..10 {
            let a = ascending_series(n, 0.999_999);
            let b = miller(n, 1.0)[n];
            assert!(close(a, b, 1e-5, 1e-17));
        }
    }

    #[test]
    fn completeness() {
        for &x in &[0.5, 2.0, 10.0, 60.0] {
            let n = (x as usize) + 60;
            let s = bessel_j_sequence(n, x).unwrap();
            let total: f64 = s[0] * s[0] + 2.0 * s[1..].iter().map(|v| v * v).sum::<f64>();
            assert!((total - 1.0).abs() < 1e-13, "x={x}: {total}");
        }
    }
}
