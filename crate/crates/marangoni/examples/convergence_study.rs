//! Self-convergence of the temperature transport on a manufactured
//! problem: a single separable mode decaying under constant conductivity,
//! with the phase uniform and the fluid at rest so diffusion is the only
//! active mechanism. Prints the spatial error table (second order) and a
//! Richardson ratio for the first-order time stepping.
//!
//! Usage: `cargo run --example convergence_study`

use std::f64::consts::PI;

use marangoni::coeff::{coefficient_bounds, CoefficientFn, PhysicalParams};
use marangoni::dynamics::{self, AdvectionScheme, SimState, StepConfig};
use marangoni::field::{BoundaryCondition, FaceBc, ScalarField, VectorField};
use marangoni::grid::Grid;

const KAPPA: f64 = 0.1;
const AMP: f64 = 0.8;

fn setting(n: usize) -> (Grid, PhysicalParams, SimState) {
    let grid = Grid::unit(n, n);
    let params = PhysicalParams {
        lambda0: 0.001,
        a: 1.0,
        b: 0.5,
        gamma: 0.1,
        eps: 0.2,
        ra: 0.0,
        ga: 0.0,
        g: 1.0,
        mu: CoefficientFn::Constant(0.01),
        kappa: CoefficientFn::Constant(KAPPA),
    };
    let phi = ScalarField::constant(grid.clone(), 1.0, BoundaryCondition::Dirichlet(1.0));
    let theta = ScalarField::from_fn(grid.clone(), BoundaryCondition::HomogeneousDirichlet, |x, y| {
        AMP * (PI * x).sin() * (PI * y).sin()
    });
    let u = VectorField::new(grid.clone(), FaceBc::NoSlip);
    let p = ScalarField::new(grid.clone(), BoundaryCondition::HomogeneousNeumann);
    let state = SimState::new(u, p, phi, theta).expect("state assembles");
    (grid, params, state)
}

fn advance_to(n: usize, t_end: f64, steps: usize) -> ScalarField {
    let (_, params, mut state) = setting(n);
    let cfg = StepConfig {
        dt: t_end / steps as f64,
        cfl_safety: 0.9,
        helmholtz_tol: 1e-10,
        proj_tol: 1e-10,
        advection: AdvectionScheme::Upwind,
    };
    for _ in 0..steps {
        dynamics::advance(&mut state, &cfg, &params).expect("step succeeds");
    }
    state.theta
}

fn error_at(n: usize, t_end: f64) -> f64 {
    let (grid, params, state) = setting(n);
    let (_, kap_hi) = coefficient_bounds(&params.kappa, state.theta0_linf());
    let dt_max = 0.9 * grid.dx() * grid.dx() / (4.0 * kap_hi);
    let steps = (t_end / dt_max).ceil() as usize;
    let theta = advance_to(n, t_end, steps);
    let decay = (-2.0 * PI * PI * KAPPA * t_end).exp();
    let exact = ScalarField::from_fn(grid, BoundaryCondition::HomogeneousDirichlet, |x, y| {
        AMP * decay * (PI * x).sin() * (PI * y).sin()
    });
    let mut err = theta;
    err.add_scaled(-1.0, &exact);
    err.norm_l2_sq().sqrt()
}

fn main() {
    let t_end = 0.05;
    println!("spatial refinement (step refined with dx^2):");
    println!("{:>6} {:>14} {:>8}", "grid", "L2 error", "order");
    let mut prev: Option<f64> = None;
    for n in [8, 16, 32, 64] {
        let e = error_at(n, t_end);
        match prev {
            Some(p) => println!("{n:>6} {e:>14.6e} {:>8.3}", (p / e).log2()),
            None => println!("{n:>6} {e:>14.6e} {:>8}", "-"),
        }
        prev = Some(e);
    }

    println!();
    println!("temporal refinement on a fixed 16x16 grid:");
    let t_short = 0.048;
    let full = advance_to(16, t_short, 30);
    let half = advance_to(16, t_short, 60);
    let quarter = advance_to(16, t_short, 120);
    let mut d1 = full.clone();
    d1.add_scaled(-1.0, &half);
    let mut d2 = half.clone();
    d2.add_scaled(-1.0, &quarter);
    let e1 = d1.norm_l2_sq().sqrt();
    let e2 = d2.norm_l2_sq().sqrt();
    println!("  |theta_dt - theta_dt/2|   = {e1:.6e}");
    println!("  |theta_dt/2 - theta_dt/4| = {e2:.6e}");
    println!("  Richardson ratio          = {:.3} (2.0 for first order)", e1 / e2);
}
