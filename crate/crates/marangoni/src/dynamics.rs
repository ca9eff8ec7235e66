//! Time integration of the coupled system: convective phase relaxation,
//! Kirchhoff-transformed heat transport, explicit momentum with capillary
//! and buoyancy forcing, and a pressure projection.
//!
//! One step advances, in order, phase → temperature → velocity:
//! - phase: explicit transport and reaction, implicit diffusion
//!   `(I − dt·γ·Δ) φⁿ⁺¹ = φⁿ − dt·uⁿ·∇φⁿ − dt·γ·W′(φⁿ)`, solved by
//!   conjugate gradients warm-started at `φⁿ`;
//! - temperature: transport acts on the Kirchhoff variable `ϑ = ∫₀^θ κ`,
//!   diffusion is implicit with frozen diagonal
//!   `(D⁻¹ + dt·(−Δ)) ϑⁿ⁺¹ = D⁻¹ (ϑⁿ − dt·uⁿ·∇ϑⁿ)`, `D = diag(κ(θⁿ))`
//!   (symmetric positive definite, solved by Jacobi-preconditioned
//!   conjugate gradients), then `θⁿ⁺¹` recovered by the inverse transform;
//! - momentum: fully explicit transport, viscous force with `μ(θⁿ)`,
//!   capillary force from the fresh `φⁿ⁺¹`, `θⁿ⁺¹`, and thermal buoyancy;
//!   the provisional velocity is then projected onto the discretely
//!   divergence-free space through a homogeneous-Neumann Poisson solve.
//!
//! Uniform body forces (the `Ga` part of gravity and the isotropic part of
//! the capillary stress) are exact discrete gradients, which the projection
//! annihilates; they are therefore absorbed into the pressure and never
//! assembled.
//!
//! Both implicit scalar solves are M-matrix systems, so the discrete
//! maximum principles survive the implicit treatment; [`advance`] checks
//! the phase and temperature margins each step and aborts when a violation
//! exceeds 100× the reporting tolerance.

use crate::coeff::{self, PhysicalParams};
use crate::error::SimError;
use crate::field::{BoundaryCondition, FaceBc, ScalarField, VectorField};
use crate::grid::Grid;
use crate::ops;
use crate::solver::{cg, pcg_jacobi, SolveStats};

/// Maximum-principle margin below which a step is flagged in the report.
pub const MP_REPORT_TOL: f64 = 1e-8;
/// Abort factor: a violation beyond `MP_ABORT_FACTOR · MP_REPORT_TOL`
/// stops the run with an invariant error.
pub const MP_ABORT_FACTOR: f64 = 100.0;

/// Transport discretization for every advective term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdvectionScheme {
    /// First-order monotone upwinding (maximum-principle safe).
    Upwind,
    /// Second-order centered differences (no monotonicity guarantee).
    Centered,
}

/// Numerical parameters of a single time step.
#[derive(Debug, Clone)]
pub struct StepConfig {
    pub dt: f64,
    /// Fraction of the tightest stability bound used for the default `dt`.
    pub cfl_safety: f64,
    /// Absolute residual tolerance of the two implicit Helmholtz solves.
    pub helmholtz_tol: f64,
    /// Bound on the post-projection divergence (the Poisson solve stops at
    /// residual `proj_tol / dt`).
    pub proj_tol: f64,
    pub advection: AdvectionScheme,
}

impl StepConfig {
    /// Configuration with the default step: `cfl_safety` (0.9) times the
    /// tightest of the three parabolic/reaction bounds.
    pub fn with_stable_dt(params: &PhysicalParams, grid: &Grid, theta0_linf: f64) -> StepConfig {
        StepConfig {
            dt: 0.9 * stable_dt(params, grid, theta0_linf),
            cfl_safety: 0.9,
            helmholtz_tol: 1e-10,
            proj_tol: 1e-10,
            advection: AdvectionScheme::Upwind,
        }
    }

    /// Check the step against the stability bounds, naming the violated one.
    pub fn validate(
        &self,
        params: &PhysicalParams,
        grid: &Grid,
        theta0_linf: f64,
    ) -> Result<(), String> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(format!("dt must be positive and finite, got {}", self.dt));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(format!(
                "cfl_safety must lie in (0, 1], got {}",
                self.cfl_safety
            ));
        }
        if !(self.helmholtz_tol > 0.0 && self.proj_tol > 0.0) {
            return Err("solver tolerances must be positive".to_string());
        }
        for (name, bound) in dt_bounds(params, grid, theta0_linf) {
            if self.dt > bound * (1.0 + 1e-12) {
                return Err(format!(
                    "dt = {} violates the {name} stability bound {bound:.6e}",
                    self.dt
                ));
            }
        }
        Ok(())
    }
}

/// The three step-size bounds: explicit viscous diffusion, thermal
/// diffusion (a safety margin for the frozen-coefficient splitting), and
/// the phase reaction bound `ε²/(2γ)` that keeps the explicit double-well
/// update monotone. Coefficient suprema are the mollified upper bounds.
pub fn dt_bounds(
    params: &PhysicalParams,
    grid: &Grid,
    theta0_linf: f64,
) -> [(&'static str, f64); 3] {
    let h = grid.h_min();
    let h2 = h * h;
    let (_, mu_hi) = coeff::coefficient_bounds(&params.mu, theta0_linf);
    let (_, ka_hi) = coeff::coefficient_bounds(&params.kappa, theta0_linf);
    [
        ("viscous", h2 / (4.0 * mu_hi)),
        ("thermal", h2 / (4.0 * ka_hi)),
        (
            "phase reaction",
            params.eps * params.eps / (2.0 * params.gamma),
        ),
    ]
}

/// Tightest of the [`dt_bounds`].
pub fn stable_dt(params: &PhysicalParams, grid: &Grid, theta0_linf: f64) -> f64 {
    dt_bounds(params, grid, theta0_linf)
        .iter()
        .map(|(_, b)| *b)
        .fold(f64::INFINITY, f64::min)
}

/// Advective Courant number `dt·(max|u|/dx + max|v|/dy)`.
pub fn advective_cfl(u: &VectorField, dt: f64) -> f64 {
    let g = u.grid();
    let umax = u.u().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let vmax = u.v().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    dt * (umax / g.dx() + vmax / g.dy())
}

/// Full simulation state at one time level.
#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub u: VectorField,
    /// Pressure of the last projection (homogeneous Neumann, mean zero).
    pub p: ScalarField,
    pub phi: ScalarField,
    pub theta: ScalarField,
    theta0: ScalarField,
    theta0_linf: f64,
}

impl SimState {
    /// Assemble an initial state at `t = 0`; the initial temperature is
    /// retained as a snapshot (its sup-norm fixes mollification bounds and
    /// thresholds for the whole run, and the field itself enters the
    /// shifted-temperature norms).
    pub fn new(
        u: VectorField,
        p: ScalarField,
        phi: ScalarField,
        theta: ScalarField,
    ) -> Result<SimState, String> {
        let theta0 = theta.clone();
        SimState::restart(u, p, phi, theta, 0.0, theta0)
    }

    /// Re-assemble a state at time `t` (for restarts the original initial
    /// temperature must be passed, not the current one).
    pub fn restart(
        mut u: VectorField,
        p: ScalarField,
        phi: ScalarField,
        theta: ScalarField,
        t: f64,
        theta0: ScalarField,
    ) -> Result<SimState, String> {
        let g = u.grid().clone();
        if p.grid() != &g || phi.grid() != &g || theta.grid() != &g || theta0.grid() != &g {
            return Err("state fields must share one grid".to_string());
        }
        if u.bc() != FaceBc::NoSlip {
            return Err("velocity must carry the no-slip tag".to_string());
        }
        if !matches!(p.bc(), BoundaryCondition::HomogeneousNeumann) {
            return Err("pressure must carry a homogeneous Neumann condition".to_string());
        }
        if !matches!(theta.bc(), BoundaryCondition::HomogeneousDirichlet)
            || !matches!(theta0.bc(), BoundaryCondition::HomogeneousDirichlet)
        {
            return Err("temperature must carry a homogeneous Dirichlet condition".to_string());
        }
        if matches!(phi.bc(), BoundaryCondition::HomogeneousNeumann) {
            return Err("phase field needs a Dirichlet condition".to_string());
        }
        if !theta0.all_finite() {
            return Err("initial temperature must be finite".to_string());
        }
        let theta0_linf = theta0.max_abs();
        if theta.max_abs() > theta0_linf + MP_REPORT_TOL {
            return Err(
                "current temperature exceeds the initial sup-norm".to_string(),
            );
        }
        u.enforce_no_slip();
        if !(u.all_finite() && p.all_finite() && phi.all_finite() && theta.all_finite()) {
            return Err("state fields must be finite".to_string());
        }
        Ok(SimState {
            t,
            u,
            p,
            phi,
            theta,
            theta0,
            theta0_linf,
        })
    }

    /// Initial temperature snapshot (fixed for the whole run).
    pub fn theta0(&self) -> &ScalarField {
        &self.theta0
    }

    /// Sup-norm of the initial temperature (fixed for the whole run).
    pub fn theta0_linf(&self) -> f64 {
        self.theta0_linf
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }
}

/// Cell-centered viscosity `μ(θ)`.
pub fn viscosity_cells(theta: &ScalarField, params: &PhysicalParams) -> ScalarField {
    let mut out = ScalarField::new(theta.grid().clone(), BoundaryCondition::HomogeneousNeumann);
    for (o, t) in out.values_mut().iter_mut().zip(theta.values()) {
        *o = params.mu.value(*t);
    }
    out
}

/// Capillary stress tensor `λ(θ) ∇φ ⊗ ∇φ`: normal components at cell
/// centers (face gradients averaged inward), shear component at nodes.
pub(crate) fn capillary_tensor(
    phi: &ScalarField,
    theta: &ScalarField,
    params: &PhysicalParams,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let g = phi.grid().clone();
    assert_eq!(&g, theta.grid(), "phase and temperature need a common grid");
    let (nx, ny) = (g.nx(), g.ny());
    let grad = ops::gradient(phi);
    let mut lambda_c = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
    for (o, t) in lambda_c.values_mut().iter_mut().zip(theta.values()) {
        *o = coeff::surface_tension(*t, params);
    }
    let mut t11 = vec![0.0; g.n_cells()];
    let mut t22 = vec![0.0; g.n_cells()];
    for j in 0..ny {
        for i in 0..nx {
            let px = 0.5 * (grad.u_at(i, j) + grad.u_at(i + 1, j));
            let py = 0.5 * (grad.v_at(i, j) + grad.v_at(i, j + 1));
            let lam = lambda_c.at(i, j);
            t11[g.idx(i, j)] = lam * px * px;
            t22[g.idx(i, j)] = lam * py * py;
        }
    }
    let mut t12 = vec![0.0; (nx + 1) * (ny + 1)];
    for j in 0..=ny {
        for i in 0..=nx {
            // node gradient components: averages of the two adjacent face
            // values, one-sided on the walls
            let ja = if j == 0 { 0 } else { j - 1 };
            let jb = if j == ny { ny - 1 } else { j };
            let px = 0.5 * (grad.u_at(i, ja) + grad.u_at(i, jb));
            let ia = if i == 0 { 0 } else { i - 1 };
            let ib = if i == nx { nx - 1 } else { i };
            let py = 0.5 * (grad.v_at(ia, j) + grad.v_at(ib, j));
            let lam = ops::cell_avg_at_node(&lambda_c, i, j);
            t12[j * (nx + 1) + i] = lam * px * py;
        }
    }
    (t11, t22, t12)
}

/// Capillary force `−∇·(λ(θ) ∇φ ⊗ ∇φ)` on velocity faces. The discrete
/// tensor divergence is the exact negative adjoint of the discrete velocity
/// gradient, so `⟨capillary_force, w⟩` equals the tensor/velocity-gradient
/// contraction for every no-slip `w`.
pub fn capillary_force(
    phi: &ScalarField,
    theta: &ScalarField,
    params: &PhysicalParams,
) -> VectorField {
    let g = phi.grid().clone();
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    let (t11, t22, t12) = capillary_tensor(phi, theta, params);
    let mut out = VectorField::new(g.clone(), FaceBc::Free);
    for j in 0..ny {
        for i in 1..nx {
            let f = (t11[g.idx(i, j)] - t11[g.idx(i - 1, j)]) / dx
                + (t12[(j + 1) * (nx + 1) + i] - t12[j * (nx + 1) + i]) / dy;
            out.set_u(i, j, -f);
        }
    }
    for j in 1..ny {
        for i in 0..nx {
            let f = (t12[j * (nx + 1) + i + 1] - t12[j * (nx + 1) + i]) / dx
                + (t22[g.idx(i, j)] - t22[g.idx(i, j - 1)]) / dy;
            out.set_v(i, j, -f);
        }
    }
    out
}

/// Thermal buoyancy `Ra·g·θ·e_y` on vertical-velocity faces (θ averaged to
/// faces). The constant gravity offset `−Ga·g·e_y` is a discrete pressure
/// gradient and is absorbed by the projection, so it is not assembled.
pub fn buoyancy_force(theta: &ScalarField, params: &PhysicalParams) -> VectorField {
    let g = theta.grid().clone();
    let (nx, ny) = (g.nx(), g.ny());
    let scale = params.ra * params.g;
    let mut out = VectorField::new(g, FaceBc::Free);
    for j in 1..ny {
        for i in 0..nx {
            out.set_v(i, j, scale * 0.5 * (theta.at(i, j - 1) + theta.at(i, j)));
        }
    }
    out
}

/// Advective term for a scalar, honoring the configured scheme.
fn advect_scalar(f: &ScalarField, w: &VectorField, scheme: AdvectionScheme) -> ScalarField {
    match scheme {
        AdvectionScheme::Upwind => ops::advect_upwind(f, w),
        AdvectionScheme::Centered => ops::advect_centered(f, w),
    }
}

/// One implicit-diffusion phase update; returns the new phase field and the
/// linear-solver statistics.
pub fn step_phase(
    state: &SimState,
    cfg: &StepConfig,
    params: &PhysicalParams,
) -> Result<(ScalarField, SolveStats), SimError> {
    let g = state.phi.grid().clone();
    let n = g.n_cells();
    let dtg = cfg.dt * params.gamma;
    let adv = advect_scalar(&state.phi, &state.u, cfg.advection);
    // boundary contribution of the implicit operator, moved to the RHS
    let affine = ops::laplacian(&ScalarField::new(g.clone(), state.phi.bc().clone()));
    let mut rhs = vec![0.0; n];
    for k in 0..n {
        let (_, wp) = coeff::double_well(state.phi.values()[k], params.eps);
        rhs[k] = state.phi.values()[k] - cfg.dt * adv.values()[k] - dtg * wp
            + dtg * affine.values()[k];
    }
    let apply = |x: &[f64]| {
        let mut f = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        f.values_mut().copy_from_slice(x);
        let lap = ops::laplacian(&f);
        let mut out = x.to_vec();
        for k in 0..out.len() {
            out[k] -= dtg * lap.values()[k];
        }
        out
    };
    let cap = 10 * (g.nx() + g.ny());
    let (sol, stats) = cg(apply, &rhs, state.phi.values(), cfg.helmholtz_tol, cap);
    if !stats.converged {
        return Err(SimError::Solver(format!(
            "phase Helmholtz solve stalled at residual {:.3e} after {} iterations",
            stats.residual, stats.iterations
        )));
    }
    let mut phi_next = ScalarField::new(g, state.phi.bc().clone());
    phi_next.values_mut().copy_from_slice(&sol);
    Ok((phi_next, stats))
}

/// One implicit-diffusion temperature update in the Kirchhoff variable;
/// returns the new temperature and the linear-solver statistics.
pub fn step_temperature(
    state: &SimState,
    cfg: &StepConfig,
    params: &PhysicalParams,
) -> Result<(ScalarField, SolveStats), SimError> {
    let g = state.theta.grid().clone();
    let (nx, ny) = (g.nx(), g.ny());
    let n = g.n_cells();
    // Kirchhoff variable inherits the homogeneous Dirichlet condition
    // because the transform fixes 0 ↦ 0
    let mut vt = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
    for k in 0..n {
        vt.values_mut()[k] = coeff::kirchhoff(state.theta.values()[k], &params.kappa);
    }
    let adv = advect_scalar(&vt, &state.u, cfg.advection);
    // frozen diagonal D = κ(θⁿ) symmetrizes the implicit operator
    let d: Vec<f64> = state
        .theta
        .values()
        .iter()
        .map(|t| params.kappa.value(*t))
        .collect();
    let mut rhs = vec![0.0; n];
    for k in 0..n {
        rhs[k] = (vt.values()[k] - cfg.dt * adv.values()[k]) / d[k];
    }
    let apply = |x: &[f64]| {
        let mut f = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        f.values_mut().copy_from_slice(x);
        let lap = ops::laplacian(&f);
        let mut out = vec![0.0; x.len()];
        for k in 0..x.len() {
            out[k] = x[k] / d[k] - cfg.dt * lap.values()[k];
        }
        out
    };
    let (rx, ry) = (1.0 / (g.dx() * g.dx()), 1.0 / (g.dy() * g.dy()));
    let mut diag = vec![0.0; n];
    for j in 0..ny {
        for i in 0..nx {
            let mut dlap = 2.0 * (rx + ry);
            if i == 0 {
                dlap += rx;
            }
            if i + 1 == nx {
                dlap += rx;
            }
            if j == 0 {
                dlap += ry;
            }
            if j + 1 == ny {
                dlap += ry;
            }
            diag[g.idx(i, j)] = 1.0 / d[g.idx(i, j)] + cfg.dt * dlap;
        }
    }
    let cap = 10 * (nx + ny);
    let (sol, stats) = pcg_jacobi(apply, &diag, &rhs, vt.values(), cfg.helmholtz_tol, cap);
    if !stats.converged {
        return Err(SimError::Solver(format!(
            "temperature Helmholtz solve stalled at residual {:.3e} after {} iterations",
            stats.residual, stats.iterations
        )));
    }
    let mut theta_next = ScalarField::new(g, BoundaryCondition::HomogeneousDirichlet);
    for k in 0..n {
        theta_next.values_mut()[k] =
            coeff::inverse_kirchhoff(sol[k], &params.kappa).map_err(SimError::Solver)?;
    }
    Ok((theta_next, stats))
}

/// Provisional velocity: explicit transport, viscosity at `θⁿ`, capillary
/// force from the updated scalars, thermal buoyancy.
pub fn step_momentum(
    state: &SimState,
    cfg: &StepConfig,
    params: &PhysicalParams,
    phi_next: &ScalarField,
    theta_next: &ScalarField,
) -> VectorField {
    let mu = viscosity_cells(&state.theta, params);
    let adv = match cfg.advection {
        AdvectionScheme::Upwind => ops::advect_velocity_upwind(&state.u, &state.u),
        AdvectionScheme::Centered => ops::advect_velocity_centered(&state.u, &state.u),
    };
    let visc = ops::viscous_force(&state.u, &mu);
    let capf = capillary_force(phi_next, theta_next, params);
    let buoy = buoyancy_force(theta_next, params);
    let mut us = state.u.clone();
    us.add_scaled(-cfg.dt, &adv);
    us.add_scaled(cfg.dt, &visc);
    us.add_scaled(cfg.dt, &capf);
    us.add_scaled(cfg.dt, &buoy);
    us.enforce_no_slip();
    us
}

/// Project a provisional velocity onto the discretely divergence-free
/// space: solve `Δq = ∇·u*/dt` with homogeneous Neumann data on the
/// mean-zero subspace, then correct `u = u* − dt ∇q`. Wall-normal faces are
/// untouched (the Neumann gradient vanishes there), so no-slip survives
/// exactly. Returns the projected velocity, the pressure, and solver stats.
pub fn project(
    u_star: &VectorField,
    p_warm: &ScalarField,
    dt: f64,
    proj_tol: f64,
) -> Result<(VectorField, ScalarField, SolveStats), SimError> {
    let g = u_star.grid().clone();
    assert_eq!(&g, p_warm.grid(), "projection warm start needs the velocity grid");
    let n = g.n_cells();
    let div = ops::divergence(u_star);
    let mut b: Vec<f64> = div.values().iter().map(|v| -v / dt).collect();
    let mean_b = b.iter().sum::<f64>() / n as f64;
    for v in &mut b {
        *v -= mean_b;
    }
    let mut x0 = p_warm.values().to_vec();
    let mean_x = x0.iter().sum::<f64>() / n as f64;
    for v in &mut x0 {
        *v -= mean_x;
    }
    let apply = |x: &[f64]| {
        let mut f = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
        f.values_mut().copy_from_slice(x);
        let lap = ops::laplacian(&f);
        lap.values().iter().map(|v| -v).collect()
    };
    let cap = 40 * (g.nx() + g.ny());
    let (q, stats) = cg(apply, &b, &x0, proj_tol / dt, cap);
    if !stats.converged {
        return Err(SimError::Solver(format!(
            "pressure projection stalled at residual {:.3e} after {} iterations",
            stats.residual, stats.iterations
        )));
    }
    let mut p = ScalarField::new(g, BoundaryCondition::HomogeneousNeumann);
    p.values_mut().copy_from_slice(&q);
    p.subtract_mean();
    let mut u = u_star.clone();
    u.add_scaled(-dt, &ops::gradient(&p));
    u.enforce_no_slip();
    Ok((u, p, stats))
}

/// Per-step report: solver statistics and maximum-principle margins
/// (`phi_margin = 1 − max|φ|`, `theta_margin = ‖θ₀‖_∞ − ‖θ‖_∞`; negative
/// values measure a violation).
#[derive(Debug, Clone)]
pub struct StepReport {
    pub phase: SolveStats,
    pub temperature: SolveStats,
    pub projection: SolveStats,
    pub phi_margin: f64,
    pub theta_margin: f64,
    /// True when a margin dipped below `−MP_REPORT_TOL` (still short of the
    /// abort threshold).
    pub mp_flagged: bool,
}

/// Advance the state by one step (phase → temperature → momentum →
/// projection), enforcing the advective CFL bound and the two maximum
/// principles.
pub fn advance(
    state: &mut SimState,
    cfg: &StepConfig,
    params: &PhysicalParams,
) -> Result<StepReport, SimError> {
    let cfl = advective_cfl(&state.u, cfg.dt);
    if cfl > 1.0 + 1e-12 {
        return Err(SimError::Invariant(format!(
            "advective CFL number {cfl:.3} exceeds 1 at t = {}",
            state.t
        )));
    }
    let (phi_next, phase_stats) = step_phase(state, cfg, params)?;
    let phi_margin = 1.0 - phi_next.max_abs();
    if phi_margin < -MP_ABORT_FACTOR * MP_REPORT_TOL {
        return Err(SimError::Invariant(format!(
            "phase maximum principle violated by {:.3e} at t = {}",
            -phi_margin, state.t
        )));
    }
    let (theta_next, temp_stats) = step_temperature(state, cfg, params)?;
    let theta_margin = state.theta0_linf - theta_next.max_abs();
    if theta_margin < -MP_ABORT_FACTOR * MP_REPORT_TOL {
        return Err(SimError::Invariant(format!(
            "temperature maximum principle violated by {:.3e} at t = {}",
            -theta_margin, state.t
        )));
    }
    let u_star = step_momentum(state, cfg, params, &phi_next, &theta_next);
    let (u_next, p_next, proj_stats) = project(&u_star, &state.p, cfg.dt, cfg.proj_tol)?;
    if !(u_next.all_finite() && phi_next.all_finite() && theta_next.all_finite()) {
        return Err(SimError::Invariant(format!(
            "non-finite field values at t = {}",
            state.t
        )));
    }
    state.phi = phi_next;
    state.theta = theta_next;
    state.u = u_next;
    state.p = p_next;
    state.t += cfg.dt;
    Ok(StepReport {
        phase: phase_stats,
        temperature: temp_stats,
        projection: proj_stats,
        phi_margin,
        theta_margin,
        mp_flagged: phi_margin < -MP_REPORT_TOL || theta_margin < -MP_REPORT_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::CoefficientFn;
    use crate::synth;
    use crate::testutil::dense_solve;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // ----- oracles -----

    /// Dense matrix of a linear operator given through its application.
    fn dense_from_apply(n: usize, apply: impl Fn(&[f64]) -> Vec<f64>) -> Vec<Vec<f64>> {
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            cols.push(apply(&e));
        }
        let mut a = vec![vec![0.0; n]; n];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                a[i][j] = col[i];
            }
        }
        a
    }

    /// Tensor contraction `⟨T, ∇w⟩` in the quadrature dual to the tensor
    /// divergence: normal parts at cells, shear at nodes.
    fn tensor_contraction(
        w: &VectorField,
        t11: &[f64],
        t22: &[f64],
        t12: &[f64],
    ) -> f64 {
        let g = w.grid();
        let (nx, ny) = (g.nx(), g.ny());
        let (dx, dy) = (g.dx(), g.dy());
        let da = g.cell_area();
        let mut s = 0.0;
        for j in 0..ny {
            for i in 0..nx {
                let ux = (w.u_at(i + 1, j) - w.u_at(i, j)) / dx;
                let vy = (w.v_at(i, j + 1) - w.v_at(i, j)) / dy;
                s += (t11[g.idx(i, j)] * ux + t22[g.idx(i, j)] * vy) * da;
            }
        }
        for j in 0..=ny {
            for i in 0..=nx {
                let sh = ops::uy_at_node(w, i, j) + ops::vx_at_node(w, i, j);
                s += ops::node_weight(g, i, j) * t12[j * (nx + 1) + i] * sh * da;
            }
        }
        s
    }

    fn random_no_slip(grid: &Grid, seed: u64) -> VectorField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut w = VectorField::new(grid.clone(), FaceBc::NoSlip);
        for v in w.u_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        for v in w.v_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        w.enforce_no_slip();
        w
    }

    fn small_params() -> PhysicalParams {
        PhysicalParams {
            lambda0: 0.01,
            a: 1.0,
            b: 0.5,
            gamma: 0.5,
            eps: 0.3,
            ra: 1.0,
            ga: 0.0,
            g: 1.0,
            mu: CoefficientFn::Constant(0.05),
            kappa: CoefficientFn::Constant(0.05),
        }
    }

    fn rest_state(grid: &Grid, phi: ScalarField, theta: ScalarField) -> SimState {
        let u = VectorField::new(grid.clone(), FaceBc::NoSlip);
        let p = ScalarField::new(grid.clone(), BoundaryCondition::HomogeneousNeumann);
        SimState::new(u, p, phi, theta).unwrap()
    }

    // ----- capillary force -----

    #[test]
    fn capillary_force_is_dual_to_tensor_contraction() {
        let g = Grid::new(12, 10, 1.0, 0.8);
        let phi = synth::random_phase(&g, 0.8, 5);
        let theta = synth::gaussian_theta(&g, 0.4, 0.2);
        let params = small_params();
        let force = capillary_force(&phi, &theta, &params);
        let (t11, t22, t12) = capillary_tensor(&phi, &theta, &params);
        for seed in 0..5u64 {
            let w = random_no_slip(&g, 400 + seed);
            let lhs = force.dot(&w);
            let rhs = tensor_contraction(&w, &t11, &t22, &t12);
            let scale = lhs.abs().max(rhs.abs()).max(1e-30);
            assert!(
                (lhs - rhs).abs() / scale < 1e-10,
                "capillary adjoint identity (seed {seed}): {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn capillary_force_of_uniform_phase_vanishes() {
        let g = Grid::unit(8, 8);
        let phi = ScalarField::constant(g.clone(), 1.0, BoundaryCondition::Dirichlet(1.0));
        let theta = synth::gaussian_theta(&g, 0.3, 0.2);
        let f = capillary_force(&phi, &theta, &small_params());
        assert_eq!(f.max_abs(), 0.0, "no interface, no capillary force");
    }

    #[test]
    fn capillary_stripe_is_pure_gradient_under_uniform_tension() {
        let g = Grid::unit(24, 24);
        let phi = synth::stripe_phase(&g, 0.1);
        let theta = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        let params = small_params();
        let f = capillary_force(&phi, &theta, &params);
        // no y-structure: the vertical component vanishes identically and
        // each u row repeats
        for v in f.v() {
            assert_eq!(*v, 0.0);
        }
        for j in 1..24 {
            for i in 0..=24 {
                assert_eq!(f.u_at(i, j), f.u_at(i, 0), "rows must repeat bitwise");
            }
        }
        // a pure x-gradient of a cell function is annihilated by projection
        let mut u_star = VectorField::new(g.clone(), FaceBc::NoSlip);
        let dt = 1e-2;
        u_star.add_scaled(dt, &f);
        u_star.enforce_no_slip();
        let p0 = ScalarField::new(g, BoundaryCondition::HomogeneousNeumann);
        let (u, _, _) = project(&u_star, &p0, dt, 1e-12).unwrap();
        assert!(
            u.max_abs() < 1e-9,
            "uniform-tension planar interface must drive no flow, got {}",
            u.max_abs()
        );
    }

    #[test]
    fn capillary_matches_manual_assembly_for_planar_interface() {
        let g = Grid::unit(16, 16);
        let phi = synth::stripe_phase(&g, 0.15);
        let theta = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        let params = small_params();
        let f = capillary_force(&phi, &theta, &params);
        // independent 1D reassembly in the bottom row
        let lam = params.lambda0 * params.a;
        let dx = g.dx();
        let mut gradx = vec![0.0; 17];
        for i in 0..=16 {
            gradx[i] = if i == 0 {
                (phi.at(0, 0) - phi.ghost_left(0)) / dx
            } else if i == 16 {
                (phi.ghost_right(0) - phi.at(15, 0)) / dx
            } else {
                (phi.at(i, 0) - phi.at(i - 1, 0)) / dx
            };
        }
        let t11: Vec<f64> = (0..16)
            .map(|i| {
                let px = 0.5 * (gradx[i] + gradx[i + 1]);
                lam * px * px
            })
            .collect();
        for i in 1..16 {
            let expect = -(t11[i] - t11[i - 1]) / dx;
            assert!(
                (f.u_at(i, 0) - expect).abs() < 1e-14,
                "manual planar assembly at {i}: {} vs {expect}",
                f.u_at(i, 0)
            );
        }
    }

    // ----- phase step -----

    #[test]
    fn phase_step_matches_dense_oracle() {
        let g = Grid::new(8, 8, 1.0, 1.2);
        let params = small_params();
        let phi = synth::random_phase(&g, 0.8, 11);
        let u = synth::random_vortex(&g, 21, 3, 0.5);
        let p = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
        let theta = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        let state = SimState::new(u, p, phi, theta).unwrap();
        let mut cfg = StepConfig::with_stable_dt(&params, &g, 0.0);
        cfg.helmholtz_tol = 1e-12;
        let (phi_next, stats) = step_phase(&state, &cfg, &params).unwrap();
        assert!(stats.converged);

        // dense reference: assemble (I − dt γ Δ_hom) by basis application
        let n = g.n_cells();
        let dtg = cfg.dt * params.gamma;
        let a = dense_from_apply(n, |x| {
            let mut f = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
            f.values_mut().copy_from_slice(x);
            let lap = ops::laplacian(&f);
            (0..n).map(|k| x[k] - dtg * lap.values()[k]).collect()
        });
        let adv = ops::advect_upwind(&state.phi, &state.u);
        let affine = ops::laplacian(&ScalarField::new(g.clone(), state.phi.bc().clone()));
        let rhs: Vec<f64> = (0..n)
            .map(|k| {
                let (_, wp) = coeff::double_well(state.phi.values()[k], params.eps);
                state.phi.values()[k] - cfg.dt * adv.values()[k] - dtg * wp
                    + dtg * affine.values()[k]
            })
            .collect();
        let exact = dense_solve(&a, &rhs);
        for k in 0..n {
            assert!(
                (phi_next.values()[k] - exact[k]).abs() < 1e-9,
                "phase step disagrees with dense solve at {k}"
            );
        }
    }

    #[test]
    fn phase_step_keeps_pure_state_bitexact() {
        // φ ≡ 1 with matching trace is an exact fixed point: the warm-started
        // solver sees a zero residual and returns the input untouched
        let g = Grid::unit(8, 8);
        let phi = ScalarField::constant(g.clone(), 1.0, BoundaryCondition::Dirichlet(1.0));
        let theta = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        let state = rest_state(&g, phi, theta);
        let params = small_params();
        let cfg = StepConfig::with_stable_dt(&params, &g, 0.0);
        let (phi_next, stats) = step_phase(&state, &cfg, &params).unwrap();
        assert_eq!(stats.iterations, 0, "exact fixed point needs no iterations");
        assert_eq!(phi_next.values(), state.phi.values());
    }

    #[test]
    fn phase_step_respects_the_physical_range() {
        let g = Grid::unit(16, 16);
        let params = small_params();
        let phi = synth::random_phase(&g, 0.9, 31);
        let theta = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        let u = synth::random_vortex(&g, 32, 3, 0.4);
        let p = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
        let mut state = SimState::new(u, p, phi, theta).unwrap();
        let cfg = StepConfig::with_stable_dt(&params, &g, 0.0);
        for _ in 0..20 {
            let (phi_next, _) = step_phase(&state, &cfg, &params).unwrap();
            assert!(
                phi_next.max_abs() <= 1.0 + MP_REPORT_TOL,
                "phase range violated: {}",
                phi_next.max_abs()
            );
            state.phi = phi_next;
        }
    }

    // ----- temperature step -----

    #[test]
    fn temperature_step_matches_constant_kappa_oracle() {
        // constant κ: the scheme reduces to (I + κ dt (−Δ)) θ = θ̃
        let g = Grid::new(8, 8, 1.1, 0.9);
        let kappa0 = 0.8;
        let mut params = small_params();
        params.kappa = CoefficientFn::Constant(kappa0);
        let theta = synth::gaussian_theta(&g, 0.5, 0.25);
        let u = synth::random_vortex(&g, 77, 3, 0.3);
        let p = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
        let phi = ScalarField::constant(g.clone(), 1.0, BoundaryCondition::Dirichlet(1.0));
        let state = SimState::new(u, p, phi, theta).unwrap();
        let mut cfg = StepConfig::with_stable_dt(&params, &g, state.theta0_linf());
        cfg.helmholtz_tol = 1e-13;
        let (theta_next, _) = step_temperature(&state, &cfg, &params).unwrap();

        let n = g.n_cells();
        let a = dense_from_apply(n, |x| {
            let mut f = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
            f.values_mut().copy_from_slice(x);
            let lap = ops::laplacian(&f);
            (0..n)
                .map(|k| x[k] - kappa0 * cfg.dt * lap.values()[k])
                .collect()
        });
        let adv = ops::advect_upwind(&state.theta, &state.u);
        let rhs: Vec<f64> = (0..n)
            .map(|k| state.theta.values()[k] - cfg.dt * adv.values()[k])
            .collect();
        let exact = dense_solve(&a, &rhs);
        for k in 0..n {
            assert!(
                (theta_next.values()[k] - exact[k]).abs() < 1e-8,
                "constant-κ reduction violated at {k}: {} vs {}",
                theta_next.values()[k],
                exact[k]
            );
        }
    }

    #[test]
    fn temperature_step_matches_dense_oracle_for_variable_kappa() {
        let g = Grid::unit(8, 8);
        let mut params = small_params();
        params.kappa = CoefficientFn::Quadratic { c0: 0.5, c1: 0.3 };
        let theta = synth::gaussian_theta(&g, 0.6, 0.3);
        let u = synth::random_vortex(&g, 5, 3, 0.3);
        let p = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
        let phi = ScalarField::constant(g.clone(), -1.0, BoundaryCondition::Dirichlet(-1.0));
        let state = SimState::new(u, p, phi, theta).unwrap();
        let mut cfg = StepConfig::with_stable_dt(&params, &g, state.theta0_linf());
        cfg.helmholtz_tol = 1e-13;
        let (theta_next, _) = step_temperature(&state, &cfg, &params).unwrap();

        // dense solve of the symmetrized system, then pointwise inversion
        let n = g.n_cells();
        let d: Vec<f64> = state
            .theta
            .values()
            .iter()
            .map(|t| params.kappa.value(*t))
            .collect();
        let a = dense_from_apply(n, |x| {
            let mut f = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
            f.values_mut().copy_from_slice(x);
            let lap = ops::laplacian(&f);
            (0..n)
                .map(|k| x[k] / d[k] - cfg.dt * lap.values()[k])
                .collect()
        });
        let mut vt = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        for k in 0..n {
            vt.values_mut()[k] = coeff::kirchhoff(state.theta.values()[k], &params.kappa);
        }
        let adv = ops::advect_upwind(&vt, &state.u);
        let rhs: Vec<f64> = (0..n)
            .map(|k| (vt.values()[k] - cfg.dt * adv.values()[k]) / d[k])
            .collect();
        let sol = dense_solve(&a, &rhs);
        for k in 0..n {
            let expect = coeff::inverse_kirchhoff(sol[k], &params.kappa).unwrap();
            assert!(
                (theta_next.values()[k] - expect).abs() < 1e-8,
                "variable-κ step disagrees with dense solve at {k}"
            );
        }
    }

    #[test]
    fn zero_temperature_stays_exactly_zero() {
        let g = Grid::unit(16, 16);
        let params = small_params();
        let theta = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        let phi = synth::stripe_phase(&g, 0.2);
        let u = synth::random_vortex(&g, 9, 3, 0.4);
        let p = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
        let mut state = SimState::new(u, p, phi, theta).unwrap();
        let cfg = StepConfig::with_stable_dt(&params, &g, 0.0);
        for _ in 0..5 {
            advance(&mut state, &cfg, &params).unwrap();
            for v in state.theta.values() {
                assert_eq!(*v, 0.0, "zero temperature must be preserved bitwise");
            }
        }
    }

    #[test]
    fn temperature_sup_norm_never_grows() {
        let g = Grid::unit(16, 16);
        let mut params = small_params();
        params.kappa = CoefficientFn::Quadratic { c0: 0.05, c1: 0.02 };
        let theta = synth::gaussian_theta(&g, 0.5, 0.2);
        let phi = synth::stripe_phase(&g, 0.2);
        let u = synth::random_vortex(&g, 13, 3, 0.3);
        let p = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
        let mut state = SimState::new(u, p, phi, theta).unwrap();
        let linf0 = state.theta0_linf();
        let cfg = StepConfig::with_stable_dt(&params, &g, linf0);
        for _ in 0..30 {
            let report = advance(&mut state, &cfg, &params).unwrap();
            assert!(
                report.theta_margin >= -MP_REPORT_TOL,
                "temperature margin {} dipped below tolerance",
                report.theta_margin
            );
        }
        assert!(state.theta.max_abs() <= linf0 + MP_REPORT_TOL);
    }

    // ----- projection -----

    #[test]
    fn projection_annihilates_divergence_and_is_idempotent() {
        let g = Grid::unit(16, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let mut u_star = VectorField::new(g.clone(), FaceBc::NoSlip);
        for v in u_star.u_mut() {
            *v = rng.gen_range(-0.5..0.5);
        }
        for v in u_star.v_mut() {
            *v = rng.gen_range(-0.5..0.5);
        }
        u_star.enforce_no_slip();
        let p0 = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
        let dt = 0.02;
        let (u, p, stats) = project(&u_star, &p0, dt, 1e-10).unwrap();
        assert!(stats.converged);
        assert!(u.satisfies_no_slip());
        assert!(
            ops::max_abs_divergence(&u) <= 1e-9,
            "projected divergence too large: {}",
            ops::max_abs_divergence(&u)
        );
        assert!(p.mean().abs() < 1e-12, "pressure must be mean-zero");
        // projecting again changes (almost) nothing
        let (u2, _, _) = project(&u, &p, dt, 1e-10).unwrap();
        let mut diff: f64 = 0.0;
        for (a, b) in u2.u().iter().zip(u.u()) {
            diff = diff.max((a - b).abs());
        }
        for (a, b) in u2.v().iter().zip(u.v()) {
            diff = diff.max((a - b).abs());
        }
        assert!(diff <= 1e-9, "projection must be idempotent, moved by {diff}");
    }

    #[test]
    fn uniform_buoyancy_is_absorbed_by_the_projection() {
        // a θ-independent body force is a discrete pressure gradient
        let g = Grid::unit(16, 16);
        let params = small_params();
        let theta = ScalarField::constant(g.clone(), 0.3, BoundaryCondition::HomogeneousDirichlet);
        let f = buoyancy_force(&theta, &params);
        let dt = 0.01;
        let mut u_star = VectorField::new(g.clone(), FaceBc::NoSlip);
        u_star.add_scaled(dt, &f);
        u_star.enforce_no_slip();
        let p0 = ScalarField::new(g, BoundaryCondition::HomogeneousNeumann);
        let (u, _, _) = project(&u_star, &p0, dt, 1e-12).unwrap();
        assert!(
            u.max_abs() < 1e-9,
            "uniform buoyancy must be pressure-balanced, got {}",
            u.max_abs()
        );
    }

    // ----- coupled stepping -----

    #[test]
    fn kinetic_energy_decays_for_unforced_flow() {
        let g = Grid::unit(32, 32);
        let params = small_params();
        let phi = ScalarField::constant(g.clone(), 1.0, BoundaryCondition::Dirichlet(1.0));
        let theta = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        let u = synth::random_vortex(&g, 17, 2, 0.5);
        let p = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
        let mut state = SimState::new(u, p, phi, theta).unwrap();
        let cfg = StepConfig::with_stable_dt(&params, &g, 0.0);
        let e0 = state.u.norm_l2_sq();
        let mut prev = e0;
        for _ in 0..100 {
            advance(&mut state, &cfg, &params).unwrap();
            let e = state.u.norm_l2_sq();
            assert!(e <= prev * (1.0 + 1e-12), "kinetic energy must not grow");
            prev = e;
        }
        assert!(prev < 0.9 * e0, "viscosity must dissipate energy: {prev} vs {e0}");
    }

    #[test]
    fn advance_aborts_on_cfl_violation() {
        let g = Grid::unit(16, 16);
        let params = small_params();
        let phi = synth::stripe_phase(&g, 0.2);
        let theta = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        let u = synth::random_vortex(&g, 3, 2, 1e4);
        let p = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
        let mut state = SimState::new(u, p, phi, theta).unwrap();
        let cfg = StepConfig::with_stable_dt(&params, &g, 0.0);
        let err = advance(&mut state, &cfg, &params).unwrap_err();
        assert!(matches!(err, SimError::Invariant(_)));
        assert!(err.to_string().contains("CFL"));
    }

    // ----- configuration -----

    #[test]
    fn stable_dt_picks_the_tightest_bound_and_validate_names_it() {
        let g = Grid::unit(16, 16);
        let mut params = small_params();
        params.gamma = 50.0;
        params.eps = 0.05;
        // reaction bound: eps²/(2γ) = 2.5e-5, far below the parabolic bounds
        let bounds = dt_bounds(&params, &g, 0.0);
        let tightest = stable_dt(&params, &g, 0.0);
        assert!((tightest - 2.5e-5).abs() < 1e-12);
        assert_eq!(
            bounds.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0,
            "phase reaction"
        );
        let mut cfg = StepConfig::with_stable_dt(&params, &g, 0.0);
        assert!(cfg.validate(&params, &g, 0.0).is_ok());
        cfg.dt = 2.0 * tightest;
        let msg = cfg.validate(&params, &g, 0.0).unwrap_err();
        assert!(msg.contains("phase reaction"), "message was: {msg}");
    }

    #[test]
    fn dt_bounds_use_mollified_coefficient_suprema() {
        let g = Grid::unit(16, 16);
        let mut params = small_params();
        params.mu = CoefficientFn::Exponential { c0: 0.1, c1: 1.0 };
        let theta0_linf = 0.6;
        let r = theta0_linf / 3.0;
        let mu_hi = 2.0 * params.mu.max_on(-5.0 * r, 5.0 * r);
        let h2 = g.h_min() * g.h_min();
        let bound = dt_bounds(&params, &g, theta0_linf)[0].1;
        assert!((bound - h2 / (4.0 * mu_hi)).abs() < 1e-15);
    }

    #[test]
    fn state_constructor_rejects_inconsistent_inputs() {
        let g = Grid::unit(8, 8);
        let g2 = Grid::unit(8, 12);
        let u = VectorField::new(g.clone(), FaceBc::NoSlip);
        let p = ScalarField::new(g2, BoundaryCondition::HomogeneousNeumann);
        let phi = ScalarField::constant(g.clone(), 1.0, BoundaryCondition::Dirichlet(1.0));
        let theta = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        assert!(SimState::new(u, p, phi, theta).is_err());

        let u = VectorField::new(g.clone(), FaceBc::NoSlip);
        let p = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        let phi = ScalarField::constant(g.clone(), 1.0, BoundaryCondition::Dirichlet(1.0));
        let theta = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousDirichlet);
        assert!(SimState::new(u, p, phi, theta).is_err(), "pressure bc must be Neumann");
    }
}
