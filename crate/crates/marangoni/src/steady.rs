//! Stationary phase-field states `−Δφ∞ + W'(φ∞) = 0` and distances to them.
//!
//! The stationary problem generally has several solutions (any constant
//! `±1` plus interface-bearing states selected by the boundary trace), so
//! the Newton solver here is deliberately basin-local: it refines whatever
//! the initial guess is closest to. Long runs are compared against the
//! steady state seeded by their own end state.

use crate::coeff::{self, PhysicalParams};
use crate::field::{BoundaryCondition, BoundaryData, ScalarField};
use crate::grid::Grid;
use crate::ops;
use crate::solver;

/// Controls for the damped Newton iteration.
#[derive(Debug, Clone, Copy)]
pub struct SteadySolveConfig {
    /// Max-norm residual below which the iterate counts as converged.
    pub newton_tol: f64,
    /// Newton iteration cap.
    pub max_newton: usize,
    /// Smallest line-search factor tried before giving up on a step.
    pub damping_floor: f64,
}

impl Default for SteadySolveConfig {
    fn default() -> Self {
        SteadySolveConfig {
            newton_tol: 1e-10,
            max_newton: 50,
            damping_floor: 1.0 / 64.0,
        }
    }
}

impl SteadySolveConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.newton_tol > 0.0 && self.newton_tol.is_finite()) {
            return Err(format!(
                "newton_tol must be positive and finite, got {}",
                self.newton_tol
            ));
        }
        if self.max_newton == 0 {
            return Err("max_newton must be at least 1".to_string());
        }
        if !(self.damping_floor > 0.0 && self.damping_floor <= 1.0) {
            return Err(format!(
                "damping_floor must lie in (0, 1], got {}",
                self.damping_floor
            ));
        }
        Ok(())
    }
}

/// Result of a stationary solve. `converged` is informative, not fatal:
/// with several steady states a failed line search simply means the guess
/// sat between basins, and `phi` is the best iterate found.
#[derive(Debug, Clone)]
pub struct SteadySolution {
    pub phi: ScalarField,
    pub converged: bool,
    /// Max-norm of `−Δφ + W'(φ)` at the returned iterate.
    pub residual_linf: f64,
    /// Accepted Newton iterations.
    pub iterations: usize,
    /// Max-norm residual of the guess and of every accepted iterate;
    /// strictly decreasing by construction of the line search.
    pub residual_history: Vec<f64>,
}

/// `−Δφ + W'(φ)` at cells, honoring the boundary trace carried by `phi`.
fn stationary_residual(phi: &ScalarField, params: &PhysicalParams) -> ScalarField {
    let mut r = ops::laplacian(phi);
    for (rv, &pv) in r.values_mut().iter_mut().zip(phi.values()) {
        *rv = -*rv + coeff::double_well(pv, params.eps).1;
    }
    r
}

/// Solve the stationary phase problem with trace `phi_b` by damped Newton.
///
/// The Jacobian is `−Δ + W''(φ)·I` on corrections with zero trace; inner
/// solves use conjugate gradients when `W''(φ) ≥ 0` everywhere (the
/// operator is then definite) and a symmetric-indefinite iteration
/// otherwise. Steps are halved until the max-norm residual strictly
/// decreases; if even the smallest step fails, the best iterate is
/// returned with `converged = false`.
pub fn solve_steady_phase(
    phi_b: BoundaryData,
    initial_guess: &ScalarField,
    grid: &Grid,
    params: &PhysicalParams,
    cfg: &SteadySolveConfig,
) -> SteadySolution {
    cfg.validate().expect("steady solve config must validate");
    params.validate().expect("physical parameters must validate");
    assert_eq!(initial_guess.grid(), grid, "guess must live on the grid");
    assert!(initial_guess.all_finite(), "guess must be finite");
    assert!(
        phi_b.profile().matches(grid),
        "boundary trace must match the grid"
    );

    let n = grid.n_cells();
    let inner_cap = 10 * (grid.nx() + grid.ny());
    let mut phi = ScalarField::new(grid.clone(), phi_b.into_condition());
    phi.values_mut().copy_from_slice(initial_guess.values());

    let mut res = stationary_residual(&phi, params);
    let mut res_norm = res.max_abs();
    let mut history = vec![res_norm];
    let mut iterations = 0;

    for _ in 0..cfg.max_newton {
        if res_norm <= cfg.newton_tol {
            break;
        }
        // Assemble the Jacobian data at the current iterate.
        let w2: Vec<f64> = phi
            .values()
            .iter()
            .map(|&p| coeff::double_well_curvature(p, params.eps))
            .collect();
        let definite = w2.iter().all(|&c| c >= 0.0);
        let apply = |x: &[f64]| -> Vec<f64> {
            let mut xf = ScalarField::new(grid.clone(), BoundaryCondition::HomogeneousDirichlet);
            xf.values_mut().copy_from_slice(x);
            let lap = ops::laplacian(&xf);
            let mut out = Vec::with_capacity(n);
            for k in 0..n {
                out.push(-lap.values()[k] + w2[k] * x[k]);
            }
            out
        };
        let rhs: Vec<f64> = res.values().iter().map(|r| -r).collect();
        let rhs_l2 = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        let inner_tol = 1e-6 * rhs_l2;
        let zero = vec![0.0; n];
        let (delta, stats) = if definite {
            solver::cg(apply, &rhs, &zero, inner_tol, inner_cap)
        } else {
            solver::minres(apply, &rhs, &zero, inner_tol, inner_cap)
        };
        if !stats.converged {
            // An unusable correction: report the best iterate so far.
            break;
        }

        // Backtracking on the max-norm residual.
        let mut alpha = 1.0;
        let mut accepted = false;
        while alpha >= cfg.damping_floor {
            let mut trial = phi.clone();
            for (tv, dv) in trial.values_mut().iter_mut().zip(&delta) {
                *tv += alpha * dv;
            }
            let r_trial = stationary_residual(&trial, params);
            let rn_trial = r_trial.max_abs();
            if rn_trial < res_norm {
                phi = trial;
                res = r_trial;
                res_norm = rn_trial;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
        iterations += 1;
        history.push(res_norm);
    }

    SteadySolution {
        converged: res_norm <= cfg.newton_tol,
        residual_linf: res_norm,
        iterations,
        residual_history: history,
        phi,
    }
}

/// Discrete distance `‖φ − φ∞‖ + ‖Δφ − Δφ∞‖` (both L²), a proxy for the
/// second-order Sobolev distance between trajectory and steady state.
pub fn distance_to_steady(phi: &ScalarField, phi_inf: &ScalarField) -> Result<f64, String> {
    if phi.grid() != phi_inf.grid() {
        return Err("fields live on different grids".to_string());
    }
    let mut diff = phi.clone();
    diff.add_scaled(-1.0, phi_inf);
    let mut lap_diff = ops::laplacian(phi);
    lap_diff.add_scaled(-1.0, &ops::laplacian(phi_inf));
    Ok(diff.norm_l2_sq().sqrt() + lap_diff.norm_l2_sq().sqrt())
}
