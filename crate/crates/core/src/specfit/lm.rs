//! Damped least squares (Levenberg–Marquardt with Marquardt diagonal scaling)
//! for small dense models.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmConfig {
    pub max_iterations: usize,
    /// Converged when every |Δpᵢ| ≤ tol·(|pᵢ| + tol).
    pub param_tolerance: f64,
    pub initial_lambda: f64,
}

impl Default for LmConfig {
    fn default() -> Self {
        LmConfig {
            max_iterations: 200,
            param_tolerance: 1e-10,
            initial_lambda: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmSolution {
    pub params: Vec<f64>,
    pub ssr: f64,
    pub iterations: usize,
    /// Standard errors from s²·(JᵀJ)⁻¹; NaN when the normal matrix is singular
    /// or there are no degrees of freedom.
    pub std_errors: Vec<f64>,
}

impl LmSolution {
    pub fn residual_rms(&self, n: usize) -> f64 {
        (self.ssr / n as f64).sqrt()
    }
}

/// Minimizes Σ (yᵢ − f(xᵢ; p))². `model(x, p, grad)` returns f and writes ∂f/∂p into `grad`.
pub fn minimize<F>(x: &[f64], y: &[f64], p0: &[f64], config: &LmConfig, model: F) -> Result<LmSolution>
where
    F: Fn(f64, &[f64], &mut [f64]) -> f64,
{
    let n = x.len();
    let k = p0.len();
    let mut p = p0.to_vec();
    let mut jac = DMatrix::<f64>::zeros(n, k);
    let mut resid = DVector::<f64>::zeros(n);
    let mut grad = vec![0.0; k];

    let mut eval = |p: &[f64], jac: Option<&mut DMatrix<f64>>, resid: &mut DVector<f64>| -> f64 {
        let mut ssr = 0.0;
        match jac {
            Some(jac) => {
                for i in 0..n {
                    let f = model(x[i], p, &mut grad);
                    resid[i] = y[i] - f;
                    ssr += resid[i] * resid[i];
                    for j in 0..k {
                        jac[(i, j)] = grad[j];
                    }
                }
            }
            None => {
                for i in 0..n {
                    let f = model(x[i], p, &mut grad);
                    resid[i] = y[i] - f;
                    ssr += resid[i] * resid[i];
                }
            }
        }
        ssr
    };

    let mut ssr = eval(&p, Some(&mut jac), &mut resid);
    if !ssr.is_finite() {
        return Err(Error::Degenerate("model is not finite at the initial guess".into()));
    }
    let mut lambda = config.initial_lambda;
    let mut trial_resid = DVector::<f64>::zeros(n);
    let mut iterations = 0;
    let mut converged = ssr == 0.0;

    while !converged && iterations < config.max_iterations {
        iterations += 1;
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &resid;
        let mut accepted = false;
        while !accepted {
            let mut damped = jtj.clone();
            for j in 0..k {
                let d = jtj[(j, j)].max(1e-300);
                damped[(j, j)] += lambda * d;
            }
            let Some(step) = damped.cholesky().map(|c| c.solve(&jtr)) else {
                lambda *= 10.0;
                if lambda > 1e20 {
                    break;
                }
                continue;
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let trial_ssr = eval(&trial, None, &mut trial_resid);
            if trial_ssr.is_finite() && trial_ssr <= ssr {
                let small = step
                    .iter()
                    .zip(&trial)
                    .all(|(d, q)| d.abs() <= config.param_tolerance * (q.abs() + config.param_tolerance));
                p = trial;
                ssr = eval(&p, Some(&mut jac), &mut resid);
                lambda = (lambda / 10.0).max(1e-15);
                accepted = true;
                converged = small || ssr == 0.0;
            } else {
                lambda *= 10.0;
                if lambda > 1e20 {
                    break;
                }
            }
        }
        if !accepted {
            // No downhill step exists at machine precision: a minimum.
            converged = true;
        }
    }

    if !converged {
        return Err(Error::FitNotConverged {
            iterations,
            residual_rms: (ssr / n as f64).sqrt(),
        });
    }

    let dof = n.saturating_sub(k);
    let std_errors = match (jac.transpose() * &jac).try_inverse() {
        Some(cov) if dof > 0 => {
            let s2 = ssr / dof as f64;
            (0..k).map(|j| (s2 * cov[(j, j)]).max(0.0).sqrt()).collect()
        }
        _ => vec![f64::NAN; k],
    };
    Ok(LmSolution {
        params: p,
        ssr,
        iterations,
        std_errors,
    })
}
