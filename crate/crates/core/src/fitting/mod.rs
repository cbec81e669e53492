//! Recover grating phases from measured peak intensities.
//!
//! Both fits minimise `Σ w_q (I_obs(q) - I_model(q))^2` by damped
//! Gauss-Newton from several starting points and report the canonical
//! member of the symmetry class of the best solution; see [`symmetry`].

pub mod inverse;
pub mod solver;
pub mod symmetry;

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bessel::bessel_j;
use crate::diffraction::{quadrupole_pattern, PatternError, PhaseSet};
pub use inverse::{polarizabilities, LaserContext, PolarizabilityEstimate};
pub use solver::{condition_number, Problem, SolverOptions, SolverOutcome};

/// Truncation tolerance of the forward model inside the fit.
pub const MODEL_TOLERANCE: f64 = 1e-14;
/// Normal matrices worse conditioned than this are reported as degenerate.
pub const DEGENERACY_CONDITION: f64 = 1e10;

const SUM_SLACK: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("line {line}: {reason}")]
    Csv { line: usize, reason: String },
    #[error("order {0} is odd; only even orders are populated")]
    OddOrder(i64),
    #[error("order {0} appears more than once")]
    DuplicateOrder(i64),
    #[error("order {order}: intensity must be finite and >= 0, got {value}")]
    InvalidIntensity { order: i64, value: f64 },
    #[error("order {order}: weight must be finite and > 0, got {value}")]
    InvalidWeight { order: i64, value: f64 },
    #[error("observed intensities sum to {0}, more than 1")]
    TotalExceedsOne(f64),
    #[error("need at least {needed} distinct orders, got {got}")]
    TooFewOrders { needed: usize, got: usize },
    #[error("need at least one +q/-q pair to see the dipole-quadrupole asymmetry")]
    MissingPair,
    #[error("initial phase must be finite, got {0}")]
    InvalidInit(f64),
    #[error("{key} must be finite and > 0, got {value}")]
    InvalidContext { key: &'static str, value: f64 },
    #[error("forward model failed: {0}")]
    Model(#[from] PatternError),
    #[error("could not read {path}: {reason}")]
    Io { path: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservedRow {
    pub order: i64,
    pub intensity: f64,
    pub weight: f64,
}

/// Measured peak intensities, one row per diffraction order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservedPattern {
    rows: Vec<ObservedRow>,
}

impl ObservedPattern {
    pub fn new(rows: Vec<ObservedRow>) -> Result<Self, FitError> {
        let mut seen = BTreeSet::new();
        for r in &rows {
            if r.order % 2 != 0 {
                return Err(FitError::OddOrder(r.order));
            }
            if !seen.insert(r.order) {
                return Err(FitError::DuplicateOrder(r.order));
            }
            if !(r.intensity.is_finite() && r.intensity >= 0.0) {
                return Err(FitError::InvalidIntensity { order: r.order, value: r.intensity });
            }
            if !(r.weight.is_finite() && r.weight > 0.0) {
                return Err(FitError::InvalidWeight { order: r.order, value: r.weight });
            }
        }
        let total: f64 = rows.iter().map(|r| r.intensity).sum();
        if total > 1.0 + SUM_SLACK {
            return Err(FitError::TotalExceedsOne(total));
        }
        Ok(Self { rows })
    }

    /// Unit-weight rows from `(order, intensity)` pairs.
    pub fn from_intensities<I: IntoIterator<Item = (i64, f64)>>(pairs: I) -> Result<Self, FitError> {
        Self::new(pairs.into_iter().map(|(order, intensity)| ObservedRow { order, intensity, weight: 1.0 }).collect())
    }

    /// Parse `order,intensity[,weight]` with a header line.
    pub fn from_csv(text: &str) -> Result<Self, FitError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| FitError::Csv { line: 1, reason: e.to_string() })?.clone();
        let cols: Vec<&str> = header.iter().collect();
        let has_weight = match cols.as_slice() {
            ["order", "intensity"] => false,
            ["order", "intensity", "weight"] => true,
            _ => {
                return Err(FitError::Csv {
                    line: 1,
                    reason: format!("expected header order,intensity[,weight], got {:?}", cols.join(",")),
                })
            }
        };
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| FitError::Csv {
                line: e.position().map_or(0, |p| p.line() as usize),
                reason: e.to_string(),
            })?;
            let line = record.position().map_or(0, |p| p.line() as usize);
            let bad = |what: &str, v: &str| FitError::Csv { line, reason: format!("{what}: cannot parse {v:?}") };
            let order = record[0].parse::<i64>().map_err(|_| bad("order", &record[0]))?;
            let intensity = record[1].parse::<f64>().map_err(|_| bad("intensity", &record[1]))?;
            let weight = if has_weight { record[2].parse::<f64>().map_err(|_| bad("weight", &record[2]))? } else { 1.0 };
            rows.push(ObservedRow { order, intensity, weight });
        }
        Self::new(rows)
    }

    pub fn read_csv(path: &Path) -> Result<Self, FitError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FitError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        Self::from_csv(&text)
    }

    pub fn rows(&self) -> &[ObservedRow] {
        &self.rows
    }

    pub fn orders(&self) -> Vec<i64> {
        self.rows.iter().map(|r| r.order).collect()
    }

    fn intensities(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.intensity).collect()
    }

    fn weights(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.weight).collect()
    }

    fn has_pair(&self) -> bool {
        let orders: BTreeSet<i64> = self.rows.iter().map(|r| r.order).collect();
        orders.iter().any(|&q| q > 0 && orders.contains(&-q))
    }

    /// Every order has a partner `-order` with the same intensity and weight.
    pub fn is_mirror_symmetric(&self) -> bool {
        self.rows.iter().all(|r| {
            self.rows.iter().any(|m| {
                m.order == -r.order
                    && m.weight == r.weight
                    && (m.intensity - r.intensity).abs() <= 1e-12 + 1e-9 * r.intensity.max(m.intensity)
            })
        })
    }

    /// The same rows with `order -> -order`.
    pub fn mirrored(&self) -> Self {
        Self { rows: self.rows.iter().map(|r| ObservedRow { order: -r.order, ..*r }).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub theta0_hat: f64,
    pub theta_a2_hat: f64,
    pub theta_c4_hat: f64,
    /// Weighted sum of squared intensity errors.
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Condition number of `JᵀWJ` at the solution.
    pub condition_number: f64,
    /// One standard error per fitted parameter, scaled by `residual / (n - p)`.
    pub standard_errors: Option<Vec<f64>>,
    pub covariance_note: String,
    pub warnings: Vec<String>,
}

impl FitResult {
    #[cfg(test)]
    fn empty() -> Self {
        Self {
            theta0_hat: 0.0,
            theta_a2_hat: 0.0,
            theta_c4_hat: 0.0,
            residual: 0.0,
            converged: true,
            iterations: 0,
            condition_number: 1.0,
            standard_errors: None,
            covariance_note: String::new(),
            warnings: vec![],
        }
    }

    pub fn phases(&self) -> PhaseSet {
        PhaseSet::tied(self.theta0_hat, self.theta_a2_hat, self.theta_c4_hat)
    }
}

/// Dipole-model intensities `J_{q/2}(θ)^2`.
pub fn dipole_intensities(theta: f64, orders: &[i64]) -> Result<Vec<f64>, FitError> {
    orders
        .iter()
        .map(|&q| {
            let j = bessel_j((q / 2) as i32, theta).map_err(PatternError::from)?;
            Ok(j * j)
        })
        .collect()
}

/// Tied quadrupole-model intensities at the given orders.
pub fn quadrupole_intensities(p: [f64; 3], orders: &[i64]) -> Result<Vec<f64>, FitError> {
    let pattern = quadrupole_pattern(&PhaseSet::tied(p[0], p[1], p[2]), MODEL_TOLERANCE)?;
    Ok(orders.iter().map(|&q| pattern.intensity(q)).collect())
}

/// Fit `θ0` of the dipole model; the result has `θ0 >= 0` and zero quadrupole phases.
pub fn fit_dipole(observed: &ObservedPattern, theta0_init: f64) -> Result<FitResult, FitError> {
    fit_dipole_with(observed, theta0_init, &SolverOptions::default())
}

pub fn fit_dipole_with(observed: &ObservedPattern, theta0_init: f64, opts: &SolverOptions) -> Result<FitResult, FitError> {
    let n = observed.rows.len();
    if n < 2 {
        return Err(FitError::TooFewOrders { needed: 2, got: n });
    }
    if !theta0_init.is_finite() {
        return Err(FitError::InvalidInit(theta0_init));
    }
    let orders = observed.orders();
    let obs = observed.intensities();
    let w = observed.weights();
    let problem = Problem { model: |p: &[f64]| dipole_intensities(p[0], &orders), observed: &obs, weights: &w };

    let mut starts = vec![theta0_init];
    starts.extend((1..=16).map(|i| 0.25 * i as f64));
    let best = best_of(&problem, starts.iter().map(|&s| vec![s]), opts)?;

    let mut theta = best.params[0].abs();
    let mut residual = best.residual;
    // J_n^2 is flat at θ = 0, where Gauss-Newton only creeps; test the boundary.
    if let Some(r0) = problem.residual(&[0.0]) {
        if r0 <= residual {
            theta = 0.0;
            residual = r0;
        }
    }
    let normal = problem.normal_matrix(&[theta], opts.diff_step);
    let mut result = summarize([theta, 0.0, 0.0], 1, residual, &best, normal, n);
    result.covariance_note = format!("{} (dipole model, theta0 only)", result.covariance_note);
    Ok(result)
}

/// Fit `(θ0, θA2, θC4)` of the tied quadrupole model (`θA4 = θA2/2`).
pub fn fit_quadrupole(observed: &ObservedPattern, init: &PhaseSet) -> Result<FitResult, FitError> {
    fit_quadrupole_with(observed, init, &SolverOptions::default())
}

pub fn fit_quadrupole_with(observed: &ObservedPattern, init: &PhaseSet, opts: &SolverOptions) -> Result<FitResult, FitError> {
    let n = observed.rows.len();
    if n < 4 {
        return Err(FitError::TooFewOrders { needed: 4, got: n });
    }
    if !observed.has_pair() {
        return Err(FitError::MissingPair);
    }
    for v in [init.theta0, init.theta_a2, init.theta_c4] {
        if !v.is_finite() {
            return Err(FitError::InvalidInit(v));
        }
    }
    let orders = observed.orders();
    let obs = observed.intensities();
    let w = observed.weights();
    let model = |p: &[f64]| quadrupole_intensities([p[0], p[1], p[2]], &orders);
    let problem = Problem { model, observed: &obs, weights: &w };

    let mut starts = vec![vec![init.theta0, init.theta_a2, init.theta_c4]];
    for t0 in [0.5, 1.5] {
        for ta in [-1.5, -0.5, 0.5, 1.5] {
            for tc in [-1.0, 0.0, 1.0] {
                starts.push(vec![t0, ta, tc]);
            }
        }
    }
    let best = best_of(&problem, starts.into_iter(), opts)?;

    let raw = [best.params[0], best.params[1], best.params[2]];
    let canon = symmetry::canonical_parameters(raw);
    let residual = problem.residual(&canon).unwrap_or(best.residual).min(best.residual);
    let normal = problem.normal_matrix(&canon, opts.diff_step);
    let mut result = summarize(canon, 3, residual, &best, normal, n);

    // (θ0, -θA2, θC4) swaps I_q and I_-q: only the asymmetry fixes the sign of θA2.
    let mirrored = [canon[0], -canon[1], canon[2]];
    let mirror_fits = canon[1].abs() > 1e-6
        && problem.residual(&mirrored).is_some_and(|rm| rm <= residual * (1.0 + 1e-9) + 1e-15);
    if observed.is_mirror_symmetric() || mirror_fits {
        result.warnings.push(format!(
            "thetaA2 sign is undetermined: observations carry no +q/-q asymmetry, so (theta0, thetaA2, thetaC4) = ({:.6}, {:.6}, {:.6}) fits equally well",
            mirrored[0], mirrored[1], mirrored[2]
        ));
    }
    Ok(result)
}

fn best_of<'a, M, I>(problem: &Problem<'a, M>, starts: I, opts: &SolverOptions) -> Result<SolverOutcome, FitError>
where
    M: Fn(&[f64]) -> Result<Vec<f64>, FitError>,
    I: Iterator<Item = Vec<f64>>,
{
    let scale: f64 = problem.observed.iter().zip(problem.weights).map(|(o, w)| w * o * o).sum::<f64>().max(1e-300);
    let mut best: Option<SolverOutcome> = None;
    let mut first_error = None;
    for start in starts {
        if let Err(e) = (problem.model)(&start) {
            first_error.get_or_insert(e);
            continue;
        }
        let Some(out) = problem.solve(&start, opts) else { continue };
        let better = best.as_ref().is_none_or(|b| out.residual < b.residual);
        if better {
            best = Some(out);
        }
        // Nothing beats an exact fit at double precision.
        if best.as_ref().is_some_and(|b| b.residual <= 1e-28 * scale) {
            break;
        }
    }
    best.ok_or_else(|| first_error.unwrap_or(FitError::Model(PatternError::NonFinitePhase { phase: f64::NAN })))
}

fn summarize(
    params: [f64; 3],
    n_params: usize,
    residual: f64,
    outcome: &SolverOutcome,
    normal: Option<nalgebra::DMatrix<f64>>,
    n_obs: usize,
) -> FitResult {
    let mut warnings = Vec::new();
    let mut cond = f64::INFINITY;
    let mut standard_errors = None;
    let mut note = String::from("normal matrix unavailable");
    if let Some(a) = normal {
        cond = condition_number(&a);
        if !(cond <= DEGENERACY_CONDITION) {
            warnings.push(format!("normal matrix is rank-deficient (condition number {cond:.3e}); parameters are degenerate"));
        }
        if n_obs > n_params {
            let s2 = residual / (n_obs - n_params) as f64;
            if let Some(inv) = a.clone().try_inverse() {
                standard_errors = Some((0..n_params).map(|i| (s2 * inv[(i, i)]).max(0.0).sqrt()).collect());
                note = format!("first-order covariance s^2 (J^T W J)^-1 with s^2 = residual / {}", n_obs - n_params);
            } else {
                note = String::from("normal matrix is singular; no covariance");
            }
        } else {
            note = String::from("no spare observations; no covariance");
        }
    }
    if !outcome.converged {
        warnings.push(format!("no convergence after {} iterations", outcome.iterations));
    }
    FitResult {
        theta0_hat: params[0],
        theta_a2_hat: params[1],
        theta_c4_hat: params[2],
        residual,
        converged: outcome.converged,
        iterations: outcome.iterations,
        condition_number: cond,
        standard_errors,
        covariance_note: note,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffraction::dipole_pattern;

    fn synthetic_dipole(theta: f64, orders: &[i64]) -> ObservedPattern {
        let p = dipole_pattern(theta, 1e-14).unwrap();
        ObservedPattern::from_intensities(orders.iter().map(|&q| (q, p.intensity(q)))).unwrap()
    }

    fn synthetic_quad(p: [f64; 3], orders: &[i64]) -> ObservedPattern {
        let i = quadrupole_intensities(p, orders).unwrap();
        ObservedPattern::from_intensities(orders.iter().copied().zip(i)).unwrap()
    }

    const ORDERS: [i64; 9] = [-8, -6, -4, -2, 0, 2, 4, 6, 8];

    #[test]
    fn dipole_round_trip() {
        let obs = synthetic_dipole(1.0, &[0, 2, 4, 6]);
        let fit = fit_dipole(&obs, 0.3).unwrap();
        assert!(fit.converged);
        assert!((fit.theta0_hat - 1.0).abs() < 1e-8, "{}", fit.theta0_hat);
        assert_eq!((fit.theta_a2_hat, fit.theta_c4_hat), (0.0, 0.0));
    }

    #[test]
    fn dipole_sign_is_folded() {
        let obs = synthetic_dipole(1.7, &ORDERS);
        let fit = fit_dipole(&obs, -1.5).unwrap();
        assert!((fit.theta0_hat - 1.7).abs() < 1e-8);
    }

    #[test]
    fn dipole_zero_phase() {
        let obs = synthetic_dipole(0.0, &[0, 2, -2]);
        let fit = fit_dipole(&obs, 1.0).unwrap();
        assert_eq!(fit.theta0_hat, 0.0);
    }

    #[test]
    fn single_order_is_underdetermined() {
        let obs = ObservedPattern::from_intensities([(0, 1.0)]).unwrap();
        assert_eq!(fit_dipole(&obs, 1.0), Err(FitError::TooFewOrders { needed: 2, got: 1 }));
    }

    #[test]
    fn quadrupole_round_trip() {
        let truth = [0.8, 0.2, -0.05];
        let obs = synthetic_quad(truth, &ORDERS);
        let fit = fit_quadrupole(&obs, &PhaseSet::tied(0.5, 0.0, 0.0)).unwrap();
        let want = symmetry::canonical_parameters(truth);
        let got = [fit.theta0_hat, fit.theta_a2_hat, fit.theta_c4_hat];
        for k in 0..3 {
            assert!((got[k] - want[k]).abs() < 1e-6, "{got:?} vs {want:?}");
        }
        assert!(fit.theta0_hat >= 0.0);
        assert!(fit.warnings.is_empty(), "{:?}", fit.warnings);
    }

    #[test]
    fn nested_dipole_data() {
        let obs = synthetic_quad([1.2, 0.0, 0.0], &ORDERS);
        let fit = fit_quadrupole(&obs, &PhaseSet::tied(1.0, 0.1, 0.1)).unwrap();
        assert!((fit.theta0_hat - 1.2).abs() < 1e-6);
        assert!(fit.theta_a2_hat.abs() < 1e-6 && fit.theta_c4_hat.abs() < 1e-6, "{fit:?}");
    }

    #[test]
    fn symmetric_data_warns_about_sign() {
        let truth = [0.8, 0.2, -0.05];
        let i = quadrupole_intensities(truth, &ORDERS).unwrap();
        let avg: Vec<(i64, f64)> = ORDERS.iter().map(|&q| {
            let j = ORDERS.iter().position(|&r| r == -q).unwrap();
            (q, 0.5 * (i[ORDERS.iter().position(|&r| r == q).unwrap()] + i[j]))
        }).collect();
        let obs = ObservedPattern::from_intensities(avg).unwrap();
        let fit = fit_quadrupole(&obs, &PhaseSet::tied(0.8, 0.2, -0.05)).unwrap();
        assert!(fit.warnings.iter().any(|w| w.contains("thetaA2 sign")), "{fit:?}");
    }

    #[test]
    fn quadrupole_preconditions() {
        let obs = ObservedPattern::from_intensities([(0, 0.5), (2, 0.1), (4, 0.1), (6, 0.01)]).unwrap();
        assert_eq!(fit_quadrupole(&obs, &PhaseSet::dipole(1.0)), Err(FitError::MissingPair));
        let obs = ObservedPattern::from_intensities([(0, 0.5), (2, 0.1), (-2, 0.1)]).unwrap();
        assert_eq!(fit_quadrupole(&obs, &PhaseSet::dipole(1.0)), Err(FitError::TooFewOrders { needed: 4, got: 3 }));
    }

    #[test]
    fn observed_pattern_validation() {
        assert_eq!(ObservedPattern::from_intensities([(1, 0.1)]), Err(FitError::OddOrder(1)));
        assert_eq!(ObservedPattern::from_intensities([(2, 0.1), (2, 0.1)]), Err(FitError::DuplicateOrder(2)));
        assert!(matches!(ObservedPattern::from_intensities([(0, -0.1)]), Err(FitError::InvalidIntensity { .. })));
        assert!(matches!(ObservedPattern::from_intensities([(0, 0.7), (2, 0.4)]), Err(FitError::TotalExceedsOne(_))));
        assert!(ObservedPattern::from_intensities([(0, 0.6), (2, 0.4 + 5e-7)]).is_ok());
    }

    #[test]
    fn csv_parsing() {
        let p = ObservedPattern::from_csv("order,intensity,weight\n0,0.5,2\n2,0.2,1\n\n").unwrap();
        assert_eq!(p.rows()[0], ObservedRow { order: 0, intensity: 0.5, weight: 2.0 });
        let p = ObservedPattern::from_csv("order, intensity\n-2,0.1\n").unwrap();
        assert_eq!(p.rows()[0].weight, 1.0);
        assert!(matches!(ObservedPattern::from_csv("q,i\n"), Err(FitError::Csv { line: 1, .. })));
        assert!(matches!(ObservedPattern::from_csv("order,intensity\n0,x\n"), Err(FitError::Csv { line: 2, .. })));
        assert!(matches!(ObservedPattern::from_csv("order,intensity\n0,0.1,3\n"), Err(FitError::Csv { line: 2, .. })));
    }
}
