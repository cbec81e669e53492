//! Damped Gauss-Newton for small weighted least-squares problems.
//!
//! The damping is Marquardt's: `(JᵀWJ + λ D) δ = -JᵀW r` with `D` the
//! diagonal of `JᵀWJ`. A step is accepted only if it lowers the weighted
//! residual, so the accepted residual sequence is strictly decreasing.

use nalgebra::{DMatrix, DVector};

pub const DEFAULT_DIFF_STEP: f64 = 1e-7;
pub const DEFAULT_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub diff_step: f64,
    pub max_iterations: usize,
    /// Converged when the accepted step's max-norm is below this (rad).
    pub step_tolerance: f64,
    /// Converged when the relative residual change is below this.
    pub residual_tolerance: f64,
    /// Trust region: trial steps are shrunk to at most this max-norm.
    pub max_step: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            diff_step: DEFAULT_DIFF_STEP,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            step_tolerance: 1e-10,
            residual_tolerance: 1e-12,
            // Phases are O(1); a wild step would also make the pattern huge.
            max_step: 1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverOutcome {
    pub params: Vec<f64>,
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Weighted residual after every accepted step, starting with the initial one.
    pub history: Vec<f64>,
    /// `JᵀWJ` at the returned parameters.
    pub normal_matrix: DMatrix<f64>,
}

/// Weighted least squares: minimise `Σ w_i (observed_i - model(p)_i)^2`.
pub struct Problem<'a, M> {
    pub model: M,
    pub observed: &'a [f64],
    pub weights: &'a [f64],
}

impl<'a, M, E> Problem<'a, M>
where
    M: Fn(&[f64]) -> Result<Vec<f64>, E>,
{
    /// Weighted residual, or `None` if the model cannot be evaluated there.
    pub fn residual(&self, p: &[f64]) -> Option<f64> {
        let pred = (self.model)(p).ok()?;
        let r: f64 = pred
            .iter()
            .zip(self.observed)
            .zip(self.weights)
            .map(|((m, o), w)| w * (o - m) * (o - m))
            .sum();
        r.is_finite().then_some(r)
    }

    fn linearize(&self, p: &[f64], h: f64) -> Option<(DMatrix<f64>, DVector<f64>)> {
        let base = (self.model)(p).ok()?;
        let n = base.len();
        let mut jac = DMatrix::zeros(n, p.len());
        let mut shifted = p.to_vec();
        for k in 0..p.len() {
            shifted[k] = p[k] + h;
            let up = (self.model)(&shifted).ok()?;
            shifted[k] = p[k];
            for i in 0..n {
                jac[(i, k)] = (up[i] - base[i]) / h;
            }
        }
        let resid = DVector::from_iterator(n, base.iter().zip(self.observed).map(|(m, o)| o - m));
        Some((jac, resid))
    }

    fn normal_equations(&self, jac: &DMatrix<f64>, resid: &DVector<f64>) -> (DMatrix<f64>, DVector<f64>) {
        let w = DVector::from_column_slice(self.weights);
        let mut wj = jac.clone();
        for (i, mut row) in wj.row_iter_mut().enumerate() {
            row *= w[i];
        }
        (jac.transpose() * &wj, wj.transpose() * resid)
    }

    /// `JᵀWJ` at `p`, or `None` if the model fails there.
    pub fn normal_matrix(&self, p: &[f64], h: f64) -> Option<DMatrix<f64>> {
        let (jac, resid) = self.linearize(p, h)?;
        Some(self.normal_equations(&jac, &resid).0)
    }

    pub fn solve(&self, init: &[f64], opts: &SolverOptions) -> Option<SolverOutcome> {
        let mut p = init.to_vec();
        let mut current = self.residual(&p)?;
        let mut history = vec![current];
        let mut lambda = 1e-3;
        let mut converged = current == 0.0;
        let mut iterations = 0;

        while !converged && iterations < opts.max_iterations {
            iterations += 1;
            let Some((jac, resid)) = self.linearize(&p, opts.diff_step) else { break };
            let (a, g) = self.normal_equations(&jac, &resid);
            let max_diag = a.diagonal().max();
            let floor = if max_diag > 0.0 { 1e-9 * max_diag } else { 1e-30 };

            let mut accepted = None;
            for _ in 0..40 {
                let mut damped = a.clone();
                for i in 0..p.len() {
                    damped[(i, i)] += lambda * a[(i, i)].max(floor);
                }
                let step = damped.clone().cholesky().map(|c| c.solve(&g)).or_else(|| damped.lu().solve(&g));
                if let Some(mut step) = step {
                    let size = step.amax();
                    if size > opts.max_step {
                        step *= opts.max_step / size;
                    }
                    let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(x, d)| x + d).collect();
                    if let Some(r) = self.residual(&trial) {
                        if r < current {
                            accepted = Some((trial, r, step.amax()));
                            break;
                        }
                    }
                }
                lambda *= 4.0;
            }
            let Some((trial, r, step_size)) = accepted else {
                // No descent direction left: a stationary point at this precision.
                converged = true;
                break;
            };
            let change = (current - r) / current.max(f64::MIN_POSITIVE);
            p = trial;
            current = r;
            history.push(r);
            lambda = (lambda / 3.0).max(1e-12);
            if step_size < opts.step_tolerance || change < opts.residual_tolerance || r == 0.0 {
                converged = true;
            }
        }

        let normal_matrix = self.normal_matrix(&p, opts.diff_step)?;
        Some(SolverOutcome { params: p, residual: current, converged, iterations, history, normal_matrix })
    }
}

/// 2-norm condition number of a symmetric positive semi-definite matrix.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let eig = m.clone().symmetric_eigen().eigenvalues;
    let max = eig.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let min = eig.iter().fold(f64::INFINITY, |a, &b| a.min(b.abs()));
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fits_an_exponential() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let obs: Vec<f64> = xs.iter().map(|x| 2.0 * (-1.3 * x).exp()).collect();
        let w = vec![1.0; xs.len()];
        let problem = Problem {
            model: |p: &[f64]| -> Result<Vec<f64>, ()> { Ok(xs.iter().map(|x| p[0] * (p[1] * x).exp()).collect()) },
            observed: &obs,
            weights: &w,
        };
        let out = problem.solve(&[1.0, 0.0], &SolverOptions::default()).unwrap();
        assert!(out.converged);
        assert!((out.params[0] - 2.0).abs() < 1e-8);
        assert!((out.params[1] + 1.3).abs() < 1e-8);
        assert!(out.history.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn condition_of_singular_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(condition_number(&m) > 1e10);
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        assert!((condition_number(&m) - 2.0).abs() < 1e-12);
    }
}
