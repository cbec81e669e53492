//! Parameter sets that produce identical diffraction intensities.
//!
//! Write the imprinted phase as `Re[A1 e^{iφ} + A2 e^{2iφ}]` with `φ = 2kX`,
//! `A1 = θ0 - iθA2` and `A2 = θC4 - iθA4`. Intensities are unchanged by
//!
//! * translations `X -> X + δ/2k`: `A1 -> A1 e^{iδ}`, `A2 -> A2 e^{2iδ}`;
//! * reflection with conjugation: `A1 -> -conj(A1)`, `A2 -> -conj(A2)`,
//!   i.e. `(θ0, θA2, θC4) -> (-θ0, θA2, -θC4)`.
//!
//! With a single `UA` the phases are tied (`θA4 = θA2/2`). Reflection keeps
//! the tie, so `θ0 -> -θ0` together with `θC4 -> -θC4` is an exact
//! degeneracy. A translation keeps the tie only for the roots `δ` of
//! `Im(A2 e^{2iδ}) = Im(A1 e^{iδ})/2`, a degree-two trigonometric equation
//! with `δ = 0` and generically one or three further roots per period, so a
//! tied parameter set normally has a few isolated twins. The canonical
//! representative is the twin with the largest `θ0` (hence `θ0 >= 0`).
//!
//! In the dipole-only case the twins are `±θ0`.

use std::f64::consts::PI;

use num_complex::Complex64;

const SAMPLES: usize = 1440;

/// Every tied parameter set `(θ0, θA2, θC4)` equivalent to `p`, including `p`.
pub fn equivalent_parameters(p: [f64; 3]) -> Vec<[f64; 3]> {
    let reflected = [-p[0], p[1], -p[2]];
    // Exact members first, so near-duplicates from root finding are dropped.
    let mut out: Vec<[f64; 3]> = vec![p];
    if reflected != p {
        out.push(reflected);
    }
    for base in [p, reflected] {
        let a1 = Complex64::new(base[0], -base[1]);
        let a2 = Complex64::new(base[2], -base[1] / 2.0);
        for delta in tie_preserving_shifts(a1, a2).into_iter().skip(1) {
            let s1 = a1 * Complex64::from_polar(1.0, delta);
            let s2 = a2 * Complex64::from_polar(1.0, 2.0 * delta);
            let cand = [s1.re, -s1.im, s2.re];
            let scale = 1e-9 * (1.0 + cand.iter().fold(0.0f64, |m, v| m.max(v.abs())));
            if !out.iter().any(|q| q.iter().zip(&cand).all(|(a, b)| (a - b).abs() < scale)) {
                out.push(cand);
            }
        }
    }
    out
}

/// The representative with the largest `θ0` (ties by `θA2`, then `θC4`).
pub fn canonical_parameters(p: [f64; 3]) -> [f64; 3] {
    equivalent_parameters(p)
        .into_iter()
        .max_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
        .unwrap_or(p)
}

/// Roots in `[0, 2π)` of `g(δ) = Im(A2 e^{2iδ}) - Im(A1 e^{iδ})/2`.
fn tie_preserving_shifts(a1: Complex64, a2: Complex64) -> Vec<f64> {
    let g = |d: f64| (a2 * Complex64::from_polar(1.0, 2.0 * d)).im - 0.5 * (a1 * Complex64::from_polar(1.0, d)).im;
    let mut roots = vec![0.0];
    if a1.norm() == 0.0 && a2.norm() == 0.0 {
        return roots;
    }
    let step = 2.0 * PI / SAMPLES as f64;
    // δ = 0 is a root by construction; search just beyond it.
    let start = 1e-6;
    let mut lo = start;
    let mut g_lo = g(lo);
    for i in 1..=SAMPLES {
        let hi = if i == SAMPLES { 2.0 * PI - 1e-6 } else { start + i as f64 * step };
        let g_hi = g(hi);
        if g_lo == 0.0 {
            roots.push(lo);
        } else if g_lo * g_hi < 0.0 {
            roots.push(bisect(&g, lo, hi, g_lo));
        }
        lo = hi;
        g_lo = g_hi;
        if lo >= 2.0 * PI - 1e-6 {
            break;
        }
    }
    roots
}

fn bisect<F: Fn(f64) -> f64>(g: &F, mut lo: f64, mut hi: f64, mut g_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return mid;
        }
        if g_lo * g_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            g_lo = g_mid;
        }
    }
    0.5 * (lo + hi)
}
