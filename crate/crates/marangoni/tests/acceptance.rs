//! Acceptance gate: eleven end-to-end checks of the solver's contract,
//! from the two discrete maximum principles through energy decay, the
//! threshold machinery, and convergence orders. Every test prints one
//! `criterion NN ...: PASS` line on success; a failed assertion names the
//! violated quantity. Tolerances are pinned as constants below.

use std::f64::consts::PI;

use marangoni::coeff::{self, CoefficientFn, PhysicalParams};
use marangoni::diagnostics::{self, DecayVerdict, DiagnosticsRecord, SobolevConstants, Thresholds};
use marangoni::dynamics::{self, AdvectionScheme, SimState, StepConfig};
use marangoni::field::{
    BoundaryCondition, BoundaryData, BoundaryProfile, FaceBc, ScalarField, VectorField,
};
use marangoni::grid::Grid;
use marangoni::ops;
use marangoni::steady::{self, SteadySolveConfig};
use marangoni::synth;

/// Per-step slack on `max|φ|` (criterion 1).
const PHI_MP_TOL: f64 = 1e-8;
/// Per-step slack on `‖θ‖_∞` (criterion 2).
const THETA_MP_TOL: f64 = 1e-10;
/// Isothermal energy may grow by at most this multiple of `dt²` per step.
const ISO_ENERGY_SLACK: f64 = 10.0;
/// Required fraction of steps satisfying the energy-law residual bound.
const ENERGY_PASS_RATE: f64 = 0.99;
/// Sobolev-distance bound between the final phase field and the Newton
/// steady state seeded at it.
const STEADY_DISTANCE_TOL: f64 = 1e-6;
/// The final velocity norm must drop below this fraction of the first
/// recorded nonzero norm.
const VELOCITY_DECAY_FACTOR: f64 = 0.01;
/// Transform-vs-quadrature and round-trip tolerance (criterion 6).
const KIRCHHOFF_TOL: f64 = 1e-10;
/// Relative tolerance of the finite-difference derivative identity.
const DERIVATIVE_TOL: f64 = 1e-9;
/// Post-projection divergence bound (criterion 7).
const DIVERGENCE_TOL: f64 = 1e-9;
/// Exact discrete identities (summation by parts, dense stencil oracle).
const IDENTITY_TOL: f64 = 1e-12;
/// Closed-form threshold values (criterion 8).
const THRESHOLD_TOL: f64 = 1e-12;
/// Mollified coefficient must match its base on the occupied range.
const MOLLIFY_MATCH_TOL: f64 = 1e-9;
/// Plateau and bound slack for the mollified coefficient.
const MOLLIFY_EXACT_TOL: f64 = 1e-12;
/// Minimum observed spatial convergence order (criterion 10).
const MIN_SPATIAL_ORDER: f64 = 1.8;
/// Admissible Richardson ratio for first-order time stepping.
const RICHARDSON_RANGE: (f64, f64) = (1.5, 2.5);
/// Admissible bracket for the estimated Poincaré constant.
const POINCARE_BRACKET: (f64, f64) = (0.2251, 0.5);

// ----- shared construction helpers -----

fn upwind_cfg(dt: f64) -> StepConfig {
    StepConfig {
        dt,
        cfl_safety: 0.9,
        helmholtz_tol: 1e-10,
        proj_tol: 1e-10,
        advection: AdvectionScheme::Upwind,
    }
}

/// State at rest: zero velocity and pressure around the given fields.
fn state_at_rest(grid: &Grid, phi: ScalarField, theta: ScalarField) -> SimState {
    let u = VectorField::new(grid.clone(), FaceBc::NoSlip);
    let p = ScalarField::new(grid.clone(), BoundaryCondition::HomogeneousNeumann);
    SimState::new(u, p, phi, theta).expect("state must assemble")
}

/// Random interior phase with the sampled-tanh trace of a vertical kink.
fn random_phase_with_kink_trace(grid: &Grid, eps: f64, seed: u64) -> ScalarField {
    let mut phi = synth::random_phase(grid, 1.0, seed);
    let lx = grid.lx();
    let profile = BoundaryProfile::from_fn(grid, |x, _| synth::kink_profile(x - 0.5 * lx, eps));
    phi.set_bc(BoundaryCondition::DirichletProfile(profile));
    phi
}

fn zero_theta(grid: &Grid) -> ScalarField {
    ScalarField::new(grid.clone(), BoundaryCondition::HomogeneousDirichlet)
}

/// Setting shared by criteria 1 and 2: 32×32, stiff interface, first-order
/// upwinding, and the step at 90% of the phase reaction bound.
fn maximum_principle_setting() -> (Grid, PhysicalParams, f64) {
    let grid = Grid::unit(32, 32);
    let params = PhysicalParams {
        lambda0: 0.01,
        a: 1.0,
        b: 1.0,
        gamma: 0.3,
        eps: 0.05,
        ra: 1.0,
        ga: 0.0,
        g: 1.0,
        mu: CoefficientFn::Constant(0.02),
        kappa: CoefficientFn::Constant(0.02),
    };
    let dt = 0.9 * params.eps * params.eps / (2.0 * params.gamma);
    (grid, params, dt)
}

/// Setting shared by criteria 4 and 5: estimated embedding constants, an
/// initial temperature scaled to 90% of the admissible sup-norm, and the
/// default stability-derived step.
struct ThresholdRun {
    grid: Grid,
    params: PhysicalParams,
    thresholds: Thresholds,
    state: SimState,
    cfg: StepConfig,
}

fn threshold_setting() -> ThresholdRun {
    let grid = Grid::unit(32, 32);
    let params = PhysicalParams {
        lambda0: 0.001,
        a: 2.0,
        b: 0.5,
        gamma: 0.3,
        eps: 0.2,
        ra: 1.0,
        ga: 0.0,
        g: 1.0,
        mu: CoefficientFn::Constant(0.05),
        kappa: CoefficientFn::Quadratic { c0: 0.05, c1: 0.02 },
    };
    let consts = diagnostics::estimate_constants(&grid, 100, 2024);
    let thresholds = diagnostics::compute_thresholds(&params, consts, 1.0);
    let mut theta = synth::gaussian_theta(&grid, 1.0, 0.2);
    let scale = 0.9 * thresholds.theta2 / theta.max_abs();
    for v in theta.values_mut() {
        *v *= scale;
    }
    let phi = synth::stripe_phase(&grid, params.eps);
    let state = state_at_rest(&grid, phi, theta);
    let cfg = StepConfig::with_stable_dt(&params, &grid, state.theta0_linf());
    cfg.validate(&params, &grid, state.theta0_linf())
        .expect("derived step must satisfy its own bounds");
    ThresholdRun { grid, params, thresholds, state, cfg }
}

/// March `steps` steps, collecting a record every `every` steps (plus the
/// initial one) with the energy-law residual filled in.
fn advance_recorded(run: &mut ThresholdRun, steps: usize, every: usize) -> Vec<DiagnosticsRecord> {
    let ThresholdRun { params, thresholds, state, cfg, .. } = run;
    let mut records = Vec::with_capacity(steps / every + 2);
    let theta_copy = state.theta.clone();
    records.push(diagnostics::collect_record(0, state, &theta_copy, cfg.dt, thresholds, params, 1.0));
    let mut prev = records[0];
    let mut prev_step = 0u64;
    for s in 1..=steps as u64 {
        let theta_before = state.theta.clone();
        dynamics::advance(state, cfg, params).expect("step must succeed");
        if s % every as u64 == 0 {
            let mut rec =
                diagnostics::collect_record(s, state, &theta_before, cfg.dt, thresholds, params, 1.0);
            let elapsed = (s - prev_step) as f64 * cfg.dt;
            rec.energy_law_residual =
                diagnostics::energy_law_residual(&prev, &rec, elapsed, thresholds, params);
            records.push(rec);
            prev = rec;
            prev_step = s;
        }
    }
    records
}

// ----- criteria 1-2: discrete maximum principles -----

#[test]
fn criterion_01_phase_maximum_principle() {
    let (grid, params, dt) = maximum_principle_setting();
    let cfg = upwind_cfg(dt);
    let phi = random_phase_with_kink_trace(&grid, params.eps, 42);
    let mut state = state_at_rest(&grid, phi, zero_theta(&grid));
    cfg.validate(&params, &grid, state.theta0_linf()).expect("step within bounds");
    assert!(state.phi.max_abs() <= 1.0, "initial data must sit in [-1, 1]");
    for step in 1..=2000 {
        dynamics::advance(&mut state, &cfg, &params).expect("step must succeed");
        let m = state.phi.max_abs();
        assert!(
            m <= 1.0 + PHI_MP_TOL,
            "step {step}: max|phi| = {m} exceeds 1 + {PHI_MP_TOL:e}"
        );
    }
    println!("criterion 01 (phase maximum principle over 2000 steps): PASS");
}

#[test]
fn criterion_02_temperature_maximum_principle() {
    let (grid, params, dt) = maximum_principle_setting();
    let cfg = upwind_cfg(dt);
    let phi = random_phase_with_kink_trace(&grid, params.eps, 42);
    let theta = synth::gaussian_theta(&grid, 0.5, 0.15);
    let mut state = state_at_rest(&grid, phi, theta);
    cfg.validate(&params, &grid, state.theta0_linf()).expect("step within bounds");
    let initial = state.theta.max_abs();
    let mut prev = initial;
    for step in 1..=2000 {
        dynamics::advance(&mut state, &cfg, &params).expect("step must succeed");
        let cur = state.theta.max_abs();
        assert!(
            cur <= prev + THETA_MP_TOL,
            "step {step}: theta sup-norm grew from {prev} to {cur}"
        );
        prev = cur;
    }
    assert!(
        prev <= initial + THETA_MP_TOL,
        "final sup-norm {prev} exceeds initial {initial}"
    );
    println!("criterion 02 (temperature sup-norm non-increasing over 2000 steps): PASS");
}

// ----- criterion 3: isothermal energy decay -----

#[test]
fn criterion_03_isothermal_energy_decay() {
    let grid = Grid::unit(32, 32);
    let params = PhysicalParams {
        lambda0: 0.001,
        a: 1.0,
        b: 1.0,
        gamma: 1.0,
        eps: 0.1,
        ra: 0.0,
        ga: 0.0,
        g: 1.0,
        mu: CoefficientFn::Constant(0.02),
        kappa: CoefficientFn::Constant(0.02),
    };
    let dt = 2e-3;
    let cfg = upwind_cfg(dt);
    let phi = synth::bubble_phase(&grid, params.eps);
    let mut state = state_at_rest(&grid, phi, zero_theta(&grid));
    cfg.validate(&params, &grid, 0.0).expect("step within bounds");
    let capillary = params.lambda0 * params.a;
    let energy = |state: &SimState| {
        0.5 * state.u.norm_l2_sq() + capillary * diagnostics::mixing_energy(&state.phi, &params)
    };
    let mut prev = energy(&state);
    for step in 1..=500 {
        dynamics::advance(&mut state, &cfg, &params).expect("step must succeed");
        assert_eq!(state.theta.max_abs(), 0.0, "temperature must stay identically zero");
        let e = energy(&state);
        assert!(
            e <= prev + ISO_ENERGY_SLACK * dt * dt,
            "step {step}: energy rose from {prev} to {e} (slack {:.3e})",
            ISO_ENERGY_SLACK * dt * dt
        );
        prev = e;
    }
    println!("criterion 03 (isothermal kinetic + mixing energy non-increasing): PASS");
}

// ----- criteria 4-5: full energy law below the temperature threshold -----

#[test]
fn criterion_04_energy_law_below_threshold() {
    let mut run = threshold_setting();
    assert!(
        run.state.theta0_linf() <= run.thresholds.theta2,
        "initial temperature must sit below the admissible sup-norm"
    );
    let records = advance_recorded(&mut run, 1000, 1);
    let mut passed = 0usize;
    for pair in records.windows(2) {
        let tol = diagnostics::energy_law_tolerance(run.cfg.dt, &run.grid, pair[0].total_energy);
        if pair[1].energy_law_residual <= tol {
            passed += 1;
        }
    }
    let checked = records.len() - 1;
    let rate = passed as f64 / checked as f64;
    assert!(
        rate >= ENERGY_PASS_RATE,
        "energy-law residual bound held on {passed}/{checked} steps (rate {rate:.4})"
    );
    let e_first = records.first().unwrap().total_energy;
    let e_last = records.last().unwrap().total_energy;
    assert!(e_last <= e_first, "E(T) = {e_last} exceeds E(0) = {e_first}");
    println!(
        "criterion 04 (energy law at 90% of the temperature threshold, rate {rate:.4}): PASS"
    );
}

#[test]
fn criterion_05_long_run_decays_to_steady_state() {
    let mut run = threshold_setting();
    let steps = (50.0 / run.cfg.dt).ceil() as usize;
    let records = advance_recorded(&mut run, steps, 10);

    let window = (records.len() / 10).max(1);
    let verdict = diagnostics::decay_monitor(&records, window);
    assert_eq!(verdict, DecayVerdict::Decaying, "dissipation series must decay");

    let first_moving = records
        .iter()
        .find(|r| r.u_l2_sq > 0.0)
        .expect("buoyancy must set the fluid in motion");
    let last = records.last().unwrap();
    let u_first = first_moving.u_l2_sq.sqrt();
    let u_last = last.u_l2_sq.sqrt();
    assert!(
        u_last <= VELOCITY_DECAY_FACTOR * u_first,
        "velocity norm {u_last:.3e} has not dropped below {VELOCITY_DECAY_FACTOR} × {u_first:.3e}"
    );

    let lx = run.grid.lx();
    let eps = run.params.eps;
    let trace = BoundaryData::new(BoundaryProfile::from_fn(&run.grid, |x, _| {
        synth::kink_profile(x - 0.5 * lx, eps)
    }))
    .expect("kink trace is admissible");
    let sol = steady::solve_steady_phase(
        trace,
        &run.state.phi,
        &run.grid,
        &run.params,
        &SteadySolveConfig::default(),
    );
    assert!(sol.converged, "Newton must converge from the final phase field");
    let dist = steady::distance_to_steady(&run.state.phi, &sol.phi).expect("same grid");
    assert!(
        dist < STEADY_DISTANCE_TOL,
        "distance to the steady state is {dist:.3e}"
    );
    println!(
        "criterion 05 (decay verdict, velocity drop, distance {dist:.3e} to steady state): PASS"
    );
}

// ----- criterion 6: temperature transform identities -----

/// Composite Simpson quadrature of `f` over `[a, b]` with `2n` panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let m = 2 * n;
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for k in 1..m {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// Quadrature oracle for the conductivity antiderivative `∫₀^θ κ(s) ds`.
fn transform_oracle(kappa: &CoefficientFn, theta: f64) -> f64 {
    if theta >= 0.0 {
        simpson(|s| kappa.value(s), 0.0, theta, 2000)
    } else {
        -simpson(|s| kappa.value(s), theta, 0.0, 2000)
    }
}

#[test]
fn criterion_06_temperature_transform_identities() {
    let families = [
        CoefficientFn::Constant(0.7),
        CoefficientFn::Exponential { c0: 0.5, c1: -0.2 },
        CoefficientFn::Quadratic { c0: 0.3, c1: 0.05 },
    ];
    let probes = [-10.0, -4.4, -1.3, -0.2, 0.0, 0.6, 2.7, 7.1, 10.0];

    // Constant conductivity reduces the transform to a plain scaling.
    for &theta in &probes {
        let closed = coeff::kirchhoff(theta, &families[0]);
        assert!(
            (closed - 0.7 * theta).abs() <= KIRCHHOFF_TOL * (1.0 + theta.abs()),
            "constant-coefficient bypass at theta = {theta}: {closed}"
        );
    }

    for kappa in &families {
        // Closed forms against the quadrature oracle.
        for &theta in &probes {
            let closed = coeff::kirchhoff(theta, kappa);
            let oracle = transform_oracle(kappa, theta);
            assert!(
                (closed - oracle).abs() <= KIRCHHOFF_TOL * (1.0 + oracle.abs()),
                "{kappa:?} at theta = {theta}: closed {closed} vs quadrature {oracle}"
            );
        }
        // Round trip over the full working interval.
        for k in 0..=400 {
            let theta = -10.0 + 0.05 * k as f64;
            let chi = coeff::kirchhoff(theta, kappa);
            let back = coeff::inverse_kirchhoff(chi, kappa).expect("inverse exists");
            assert!(
                (back - theta).abs() <= KIRCHHOFF_TOL * (1.0 + theta.abs()),
                "{kappa:?} round trip at theta = {theta}: got {back}"
            );
        }
        // The inverse transform has slope 1/κ(θ).
        let h = 1e-5;
        for &vartheta in &[-2.0, -0.7, 0.1, 1.3, 2.0] {
            let up = coeff::inverse_kirchhoff(vartheta + h, kappa).expect("inverse exists");
            let dn = coeff::inverse_kirchhoff(vartheta - h, kappa).expect("inverse exists");
            let slope = (up - dn) / (2.0 * h);
            let theta = coeff::inverse_kirchhoff(vartheta, kappa).expect("inverse exists");
            let recip = 1.0 / kappa.value(theta);
            assert!(
                (slope - recip).abs() <= DERIVATIVE_TOL * (1.0 + recip.abs()),
                "{kappa:?} inverse slope at {vartheta}: {slope} vs {recip}"
            );
        }
    }
    println!("criterion 06 (transform oracle, round trip, inverse slope): PASS");
}

// ----- criterion 7: projection and discrete operator identities -----

#[test]
fn criterion_07_projection_and_operator_identities() {
    // Projection removes the divergence of tangential-slip test fields.
    let grid = Grid::unit(16, 16);
    let coeffs = [(1.0, 0.3, 0.7, -0.4), (-0.6, 1.1, 0.2, 0.9), (0.4, -0.8, -1.2, 0.5)];
    for (a1, a2, b1, b2) in coeffs {
        let u_star = VectorField::from_fn(
            grid.clone(),
            FaceBc::NoSlip,
            |x, y| (PI * x).sin() * (a1 * (PI * y).cos() + a2 * (2.0 * PI * y).sin()),
            |x, y| (PI * y).sin() * (b1 * (2.0 * PI * x).cos() + b2 * (PI * x).sin()),
        );
        assert!(
            ops::max_abs_divergence(&u_star) > 1e-3,
            "test field must start visibly non-solenoidal"
        );
        let p0 = ScalarField::new(grid.clone(), BoundaryCondition::HomogeneousNeumann);
        let (u, _, _) = dynamics::project(&u_star, &p0, 1e-2, 1e-11).expect("projection converges");
        let div = ops::max_abs_divergence(&u);
        assert!(div <= DIVERGENCE_TOL, "post-projection divergence {div:.3e}");
    }

    // Summation by parts: ⟨∇f, w⟩ = −⟨f, ∇·w⟩ for no-slip w.
    for seed in 0..5 {
        let f = synth::band_limited_scalar(&grid, seed, 5);
        let w = synth::random_vortex(&grid, 100 + seed, 4, 1.0);
        let lhs = ops::gradient(&f).dot(&w);
        let rhs = -f.dot(&ops::divergence(&w));
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        assert!(
            (lhs - rhs).abs() <= IDENTITY_TOL * scale,
            "summation by parts violated: {lhs} vs {rhs}"
        );
    }

    // Dense oracle: the applied Laplacian matches a hand-assembled
    // five-point matrix with mirror (odd-extension) Dirichlet closure.
    let g8 = Grid::unit(8, 8);
    let (nx, ny) = (8usize, 8usize);
    let n = nx * ny;
    let wx = 1.0 / (g8.dx() * g8.dx());
    let wy = 1.0 / (g8.dy() * g8.dy());
    let mut manual = vec![vec![0.0_f64; n]; n];
    for j in 0..ny {
        for i in 0..nx {
            let row = j * nx + i;
            let mut diag = -2.0 * (wx + wy);
            if i > 0 {
                manual[row][row - 1] += wx;
            } else {
                diag -= wx;
            }
            if i + 1 < nx {
                manual[row][row + 1] += wx;
            } else {
                diag -= wx;
            }
            if j > 0 {
                manual[row][row - nx] += wy;
            } else {
                diag -= wy;
            }
            if j + 1 < ny {
                manual[row][row + nx] += wy;
            } else {
                diag -= wy;
            }
            manual[row][row] = diag;
        }
    }
    for col in 0..n {
        let mut e = ScalarField::new(g8.clone(), BoundaryCondition::HomogeneousDirichlet);
        e.values_mut()[col] = 1.0;
        let lap = ops::laplacian(&e);
        for row in 0..n {
            let applied = lap.values()[row];
            let expected = manual[row][col];
            assert!(
                (applied - expected).abs() <= IDENTITY_TOL * (1.0 + expected.abs()),
                "Laplacian entry ({row}, {col}): applied {applied} vs manual {expected}"
            );
        }
    }
    println!("criterion 07 (projection divergence, summation by parts, dense stencil): PASS");
}

// ----- criterion 8: closed-form thresholds -----

#[test]
fn criterion_08_threshold_closed_forms() {
    let params = PhysicalParams {
        lambda0: 1.0,
        a: 2.0,
        b: 1.0,
        gamma: 1.0,
        eps: 0.1,
        ra: 1.0,
        ga: 0.0,
        g: 1.0,
        mu: CoefficientFn::Constant(1.0),
        kappa: CoefficientFn::Constant(1.0),
    };
    let consts = SobolevConstants { c1: 1.0, c2: 1.0, c3: 1.0, c_p: 0.3 };
    let thr = diagnostics::compute_thresholds(&params, consts, 1.0);
    // With unit constants the sup-norm bound is the fixed value
    // (1/(2c₁c₂|b|))·√(aγ μ̲/(2λ₀)) = 0.5, independent of the trial radius.
    assert!(
        (thr.theta1 - 0.5).abs() <= THRESHOLD_TOL,
        "theta1 = {} instead of 0.5",
        thr.theta1
    );
    // Constant conductivity puts no extra constraint on the second bound.
    assert_eq!(thr.theta2, thr.theta1, "constant kappa must give theta2 = theta1");
    // ζ = μ̲κ̲/(4c₃²Θ₂²) = 1/(4·0.25) = 1.
    assert!((thr.zeta - 1.0).abs() <= THRESHOLD_TOL, "zeta = {}", thr.zeta);
    assert_eq!(thr.mu_lo, 1.0);
    assert_eq!(thr.kap_lo, 1.0);
    println!("criterion 08 (closed-form thresholds 0.5/0.5/1.0): PASS");
}

// ----- criterion 9: mollified coefficient window -----

#[test]
fn criterion_09_mollified_coefficient_window() {
    let base = CoefficientFn::Exponential { c0: 0.8, c1: 0.35 };
    let theta0_linf = 1.2;
    let m = coeff::mollify(&base, theta0_linf).expect("mollification exists");
    let r = m.r();
    assert!(
        (r - theta0_linf / 3.0).abs() <= MOLLIFY_EXACT_TOL,
        "transition radius {r}"
    );

    // Identical to the base coefficient on the occupied range.
    for k in 0..100 {
        let s = -theta0_linf + 2.0 * theta0_linf * k as f64 / 99.0;
        let diff = (m.value(s) - base.value(s)).abs();
        assert!(
            diff <= MOLLIFY_MATCH_TOL,
            "mollified value differs by {diff:.3e} at s = {s}"
        );
    }

    // Constant at the lower bound beyond five transition radii.
    for s in [5.0 * r, -5.0 * r, 6.0 * r, -6.0 * r, 10.0, -10.0, 100.0, -100.0] {
        let diff = (m.value(s) - m.lower()).abs();
        assert!(
            diff <= MOLLIFY_EXACT_TOL,
            "plateau violated at s = {s}: off by {diff:.3e}"
        );
    }

    // Globally pinched between its two positive bounds.
    assert!(m.lower() > 0.0, "lower bound must stay positive");
    for k in 0..=600 {
        let s = -15.0 + 0.05 * k as f64;
        let v = m.value(s);
        assert!(
            m.lower() - MOLLIFY_EXACT_TOL <= v && v <= m.upper() + MOLLIFY_EXACT_TOL,
            "value {v} escapes [{}, {}] at s = {s}",
            m.lower(),
            m.upper()
        );
    }
    println!("criterion 09 (mollified coefficient window and bounds): PASS");
}

// ----- criterion 10: manufactured diffusion convergence -----

/// Pure-diffusion setting: uniform phase (no capillary force), zero
/// buoyancy, rest velocity, and a single separable temperature mode.
fn diffusion_setting(n: usize) -> (Grid, PhysicalParams, SimState) {
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
        kappa: CoefficientFn::Constant(0.1),
    };
    let phi = ScalarField::constant(grid.clone(), 1.0, BoundaryCondition::Dirichlet(1.0));
    let theta = ScalarField::from_fn(grid.clone(), BoundaryCondition::HomogeneousDirichlet, |x, y| {
        0.8 * (PI * x).sin() * (PI * y).sin()
    });
    let state = state_at_rest(&grid, phi, theta);
    (grid, params, state)
}

/// March the diffusion setting to `t_end` in `steps` equal steps and
/// return the final temperature field.
fn diffusion_final(n: usize, t_end: f64, steps: usize) -> ScalarField {
    let (grid, params, mut state) = diffusion_setting(n);
    let dt = t_end / steps as f64;
    let cfg = upwind_cfg(dt);
    cfg.validate(&params, &grid, state.theta0_linf()).expect("step within bounds");
    for _ in 0..steps {
        dynamics::advance(&mut state, &cfg, &params).expect("step must succeed");
    }
    assert!((state.t - t_end).abs() <= 1e-12 * steps as f64, "time accumulation drifted");
    state.theta
}

/// L² error at `t_end` against the separable decaying mode.
fn diffusion_error(n: usize, t_end: f64) -> f64 {
    let (grid, params, state) = diffusion_setting(n);
    let (_, kap_hi) = coeff::coefficient_bounds(&params.kappa, state.theta0_linf());
    let dt_max = 0.9 * grid.dx() * grid.dx() / (4.0 * kap_hi);
    let steps = (t_end / dt_max).ceil() as usize;
    let theta = diffusion_final(n, t_end, steps);
    let decay = (-2.0 * PI * PI * 0.1 * t_end).exp();
    let mut err = theta;
    let exact = ScalarField::from_fn(grid, BoundaryCondition::HomogeneousDirichlet, |x, y| {
        0.8 * decay * (PI * x).sin() * (PI * y).sin()
    });
    err.add_scaled(-1.0, &exact);
    err.norm_l2_sq().sqrt()
}

#[test]
fn criterion_10_diffusion_convergence_orders() {
    let t_end = 0.05;
    // Spatial order with the step refined like dx² (refining the grid
    // refines time as well, keeping the temporal error subordinate).
    let e16 = diffusion_error(16, t_end);
    let e32 = diffusion_error(32, t_end);
    let e64 = diffusion_error(64, t_end);
    let order_coarse = (e16 / e32).log2();
    let order_fine = (e32 / e64).log2();
    assert!(
        order_coarse >= MIN_SPATIAL_ORDER && order_fine >= MIN_SPATIAL_ORDER,
        "spatial orders {order_coarse:.3}, {order_fine:.3} (errors {e16:.3e}, {e32:.3e}, {e64:.3e})"
    );

    // Temporal order by Richardson comparison on a fixed 32×32 grid.
    let t_short = 0.048;
    let full = diffusion_final(32, t_short, 60);
    let half = diffusion_final(32, t_short, 120);
    let quarter = diffusion_final(32, t_short, 240);
    let mut d1 = full.clone();
    d1.add_scaled(-1.0, &half);
    let mut d2 = half.clone();
    d2.add_scaled(-1.0, &quarter);
    let ratio = d1.norm_l2_sq().sqrt() / d2.norm_l2_sq().sqrt();
    assert!(
        ratio >= RICHARDSON_RANGE.0 && ratio <= RICHARDSON_RANGE.1,
        "Richardson ratio {ratio:.3} outside {RICHARDSON_RANGE:?}"
    );
    println!(
        "criterion 10 (spatial orders {order_coarse:.2}/{order_fine:.2}, time ratio {ratio:.2}): PASS"
    );
}

// ----- criterion 11: Poincaré constant bracket -----

#[test]
fn criterion_11_poincare_constant_bracket() {
    let grid = Grid::unit(32, 32);
    let consts = diagnostics::estimate_constants(&grid, 100, 7);
    // Sharp constant of the unit square from the fundamental eigenvalue
    // λ₁ = 2π²: c_p = 1/√λ₁ = 1/(π√2).
    let lambda1 = 2.0 * PI * PI;
    let sharp = 1.0 / lambda1.sqrt();
    assert!(
        (sharp - 1.0 / (PI * 2.0_f64.sqrt())).abs() <= 1e-15,
        "eigenvalue bookkeeping broke"
    );
    assert!(
        consts.c_p >= sharp,
        "estimated constant {} fell below the sharp value {sharp}",
        consts.c_p
    );
    assert!(
        consts.c_p >= POINCARE_BRACKET.0 && consts.c_p <= POINCARE_BRACKET.1,
        "estimated Poincaré constant {} outside {POINCARE_BRACKET:?}",
        consts.c_p
    );
    println!(
        "criterion 11 (Poincaré constant {:.4} within bracket, sharp {sharp:.4}): PASS",
        consts.c_p
    );
}
