//! Run orchestration: initial states from presets or snapshots, the
//! stepping loop with periodic diagnostics/snapshot output, the run
//! summary, and a post-hoc audit of a finished output directory.
//!
//! A run writes into its output directory:
//! - `config.txt` — the normalized configuration (audit input),
//! - `diagnostics.csv` — one record per `diagnostics_every` steps, flushed
//!   as it grows,
//! - `snap_<step>_<field>.csv` — full state every `snapshot_every` steps
//!   plus the first and last step,
//! - `summary.txt` — thresholds, final invariant margins, energy-law pass
//!   rate, and the decay verdict, as `key = value` lines.
//!
//! [`audit`] replays every check that does not require re-running the
//! solver: records are recomputed from each complete snapshot and compared
//! column by column, the energy-residual column is recomputed from
//! neighboring rows, and the maximum-principle margins and decay verdict
//! are re-evaluated. All comparisons use [`AUDIT_TOL`].

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{PhiInit, PhiTrace, RunConfig, ThetaInit, VelocityInit};
use crate::diagnostics::{self, DecayVerdict, DiagnosticsRecord, Thresholds};
use crate::dynamics::{self, SimState, StepConfig, MP_REPORT_TOL};
use crate::error::SimError;
use crate::field::{BoundaryCondition, BoundaryProfile, FaceBc, ScalarField, VectorField};
use crate::grid::Grid;
use crate::snapshot::{self, DiagnosticsWriter};
use crate::synth;

/// Relative tolerance of all audit cross-checks.
pub const AUDIT_TOL: f64 = 1e-9;

fn grid_of(config: &RunConfig) -> Grid {
    Grid::new(config.nx, config.ny, config.lx, config.ly)
}

/// Boundary condition of the run's phase field (presets carry their own
/// trace; file-based fields re-declare it through `phi_trace`).
fn phi_condition(config: &RunConfig, grid: &Grid) -> BoundaryCondition {
    let stripe = |grid: &Grid| {
        let lx = grid.lx();
        let eps = config.params.eps;
        BoundaryCondition::DirichletProfile(BoundaryProfile::from_fn(grid, |x, _y| {
            synth::kink_profile(x - 0.5 * lx, eps)
        }))
    };
    match (&config.ic_phi, &config.phi_trace) {
        (PhiInit::Stripe, _) => stripe(grid),
        (PhiInit::Bubble, _) => BoundaryCondition::Dirichlet(-1.0),
        (PhiInit::Random { .. }, _) => BoundaryCondition::HomogeneousDirichlet,
        (PhiInit::File(_), Some(PhiTrace::Stripe)) => stripe(grid),
        (PhiInit::File(_), Some(PhiTrace::Bubble)) => BoundaryCondition::Dirichlet(-1.0),
        (PhiInit::File(_), Some(PhiTrace::Zero)) => BoundaryCondition::HomogeneousDirichlet,
        (PhiInit::File(_), Some(PhiTrace::Constant(v))) => BoundaryCondition::Dirichlet(*v),
        (PhiInit::File(_), None) => unreachable!("rejected at parse time"),
    }
}

/// Companion `v`-component path of a velocity snapshot named `..._u.csv`.
fn v_component_path(u_path: &Path) -> Result<PathBuf, SimError> {
    let name = u_path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| SimError::Config(format!("bad snapshot path {}", u_path.display())))?;
    let stem = name.strip_suffix("_u.csv").ok_or_else(|| {
        SimError::Config(format!(
            "velocity snapshots come in `<name>_u.csv` / `<name>_v.csv` pairs, got {name}"
        ))
    })?;
    Ok(u_path.with_file_name(format!("{stem}_v.csv")))
}

/// Assemble the initial [`SimState`] of a run.
///
/// Preset fields start at `t = 0`; file-based fields carry their snapshot
/// time, and all files must agree on it. The initial-temperature snapshot
/// is the starting temperature itself unless `theta0` names the original
/// one (required for a restart to keep the original thresholds and
/// shifted-temperature norms).
pub fn build_initial_state(config: &RunConfig) -> Result<SimState, SimError> {
    let grid = grid_of(config);
    let mut times: Vec<f64> = Vec::new();

    let phi = match &config.ic_phi {
        PhiInit::Stripe => synth::stripe_phase(&grid, config.params.eps),
        PhiInit::Bubble => synth::bubble_phase(&grid, config.params.eps),
        PhiInit::Random { amplitude, seed } => synth::random_phase(&grid, *amplitude, *seed),
        PhiInit::File(path) => {
            let bc = phi_condition(config, &grid);
            let (f, t) = snapshot::read_scalar_on(path, &grid, bc)?;
            times.push(t);
            f
        }
    };
    let theta = match &config.ic_theta {
        ThetaInit::Zero => ScalarField::new(grid.clone(), BoundaryCondition::HomogeneousDirichlet),
        ThetaInit::Gaussian { amp, sigma } => synth::gaussian_theta(&grid, *amp, *sigma),
        ThetaInit::File(path) => {
            let (f, t) =
                snapshot::read_scalar_on(path, &grid, BoundaryCondition::HomogeneousDirichlet)?;
            times.push(t);
            f
        }
    };
    let u = match &config.ic_u {
        VelocityInit::Zero => VectorField::new(grid.clone(), FaceBc::NoSlip),
        VelocityInit::File(u_path) => {
            let v_path = v_component_path(u_path)?;
            let (w, t) = snapshot::read_vector_on(u_path, &v_path, &grid)?;
            times.push(t);
            w
        }
    };
    let p = ScalarField::new(grid.clone(), BoundaryCondition::HomogeneousNeumann);

    let t0 = match times.first() {
        None => 0.0,
        Some(&t) => {
            if times.iter().any(|s| *s != t) {
                return Err(SimError::Config(format!(
                    "initial-condition snapshots disagree on time: {times:?}"
                )));
            }
            t
        }
    };
    let theta0 = match &config.theta0_file {
        Some(path) => {
            let (f, _) =
                snapshot::read_scalar_on(path, &grid, BoundaryCondition::HomogeneousDirichlet)?;
            f
        }
        None => theta.clone(),
    };
    SimState::restart(u, p, phi, theta, t0, theta0).map_err(SimError::Config)
}

/// Thresholds of a run, either from the configured constants or estimated
/// on the run grid; the flag reports which.
pub fn resolve_thresholds(config: &RunConfig) -> (Thresholds, bool) {
    match config.constants {
        Some(c) => (
            diagnostics::compute_thresholds(&config.params, c, config.omega),
            false,
        ),
        None => {
            let grid = grid_of(config);
            let c = diagnostics::estimate_constants(&grid, config.constants_samples, config.seed);
            (
                diagnostics::compute_thresholds(&config.params, c, config.omega),
                true,
            )
        }
    }
}

/// Records-per-window of the decay monitor: a tenth of the series, at
/// least one record. Kept identical between [`run`] and [`audit`] so both
/// reach the same verdict.
fn decay_window(n_records: usize) -> usize {
    (n_records / 10).max(1)
}

fn decay_verdict_of(records: &[DiagnosticsRecord]) -> DecayVerdict {
    if records.len() < 2 {
        return DecayVerdict::NotYet;
    }
    diagnostics::decay_monitor(records, decay_window(records.len()))
}

/// End-of-run report, also rendered into `summary.txt`.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub thresholds: Thresholds,
    pub constants_estimated: bool,
    pub theta0_linf: f64,
    /// Steps executed by this run (not counting a restart's history).
    pub steps: u64,
    pub final_t: f64,
    pub records: usize,
    /// Final `1 − max|φ|`.
    pub phi_margin: f64,
    /// Final `‖θ₀‖_∞ − ‖θ‖_∞`.
    pub theta_margin: f64,
    /// Steps whose margins dipped below the reporting tolerance.
    pub mp_flagged_steps: u64,
    /// Record-to-record energy-law checks that passed / were made.
    pub energy_passed: usize,
    pub energy_checked: usize,
    pub decay: DecayVerdict,
}

impl RunSummary {
    pub fn energy_pass_rate(&self) -> f64 {
        if self.energy_checked == 0 {
            1.0
        } else {
            self.energy_passed as f64 / self.energy_checked as f64
        }
    }

    /// `key = value` rendering written to `summary.txt`.
    pub fn to_text(&self) -> String {
        let thr = &self.thresholds;
        let c = &thr.constants;
        let mut s = String::new();
        let mut push = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        push("status", "ok".into());
        push("steps", self.steps.to_string());
        push("final_t", format!("{:.12e}", self.final_t));
        push("theta1", format!("{:.12e}", thr.theta1));
        push("theta2", format!("{:.12e}", thr.theta2));
        push("zeta", format!("{:.12e}", thr.zeta));
        push("omega", format!("{:.12e}", thr.omega));
        push("mu_lo", format!("{:.12e}", thr.mu_lo));
        push("mu_hi", format!("{:.12e}", thr.mu_hi));
        push("kap_lo", format!("{:.12e}", thr.kap_lo));
        push("kap_hi", format!("{:.12e}", thr.kap_hi));
        push("c1", format!("{:.12e}", c.c1));
        push("c2", format!("{:.12e}", c.c2));
        push("c3", format!("{:.12e}", c.c3));
        push("c_p", format!("{:.12e}", c.c_p));
        push(
            "constants_source",
            if self.constants_estimated {
                "estimated".into()
            } else {
                "config".into()
            },
        );
        push("theta0_linf", format!("{:.12e}", self.theta0_linf));
        push(
            "theta0_within_theta2",
            (self.theta0_linf <= thr.theta2).to_string(),
        );
        push(
            "theta0_within_theta1",
            (self.theta0_linf <= thr.theta1).to_string(),
        );
        push("phi_margin", format!("{:.12e}", self.phi_margin));
        push("theta_margin", format!("{:.12e}", self.theta_margin));
        push("mp_flagged_steps", self.mp_flagged_steps.to_string());
        push("energy_checked", self.energy_checked.to_string());
        push("energy_passed", self.energy_passed.to_string());
        push(
            "energy_pass_rate",
            format!("{:.6}", self.energy_pass_rate()),
        );
        push("decay_verdict", self.decay.to_string());
        s
    }
}

/// Execute a configured run, writing all artifacts into
/// `config.output_dir`.
///
/// The step is validated against the stability bounds before the first
/// step; a violated bound is a configuration error naming the bound.
/// Invariant aborts (maximum-principle or CFL violations) surface as
/// [`SimError::Invariant`] after flushing the diagnostics written so far.
pub fn run(config: &RunConfig) -> Result<RunSummary, SimError> {
    let grid = grid_of(config);
    let mut state = build_initial_state(config)?;

    let step = StepConfig {
        dt: config.dt.unwrap_or_else(|| {
            config.cfl_safety * dynamics::stable_dt(&config.params, &grid, state.theta0_linf())
        }),
        cfl_safety: config.cfl_safety,
        helmholtz_tol: config.helmholtz_tol,
        proj_tol: config.proj_tol,
        advection: config.advection,
    };
    step.validate(&config.params, &grid, state.theta0_linf())
        .map_err(SimError::Config)?;
    let (thresholds, constants_estimated) = resolve_thresholds(config);

    let dir = &config.output_dir;
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.txt"), config.serialize())?;
    let mut writer = DiagnosticsWriter::create(&dir.join("diagnostics.csv"))?;

    snapshot::write_state(dir, 0, &state)?;
    let first = diagnostics::collect_record(
        0,
        &state,
        &state.theta.clone(),
        step.dt,
        &thresholds,
        &config.params,
        config.eta,
    );
    writer.append(&first)?;
    writer.flush()?;

    let mut records = vec![first];
    let mut prev_rec = first;
    let mut prev_rec_step: u64 = 0;
    let mut last_snap_step: u64 = 0;
    let mut energy_checked = 0usize;
    let mut energy_passed = 0usize;
    let mut mp_flagged_steps = 0u64;
    let mut step_idx: u64 = 0;

    while state.t + 0.5 * step.dt < config.t_end {
        let theta_before = state.theta.clone();
        let report = dynamics::advance(&mut state, &step, &config.params).inspect_err(|_| {
            let _ = writer.flush();
        })?;
        step_idx += 1;
        if report.mp_flagged {
            mp_flagged_steps += 1;
        }

        let done = state.t + 0.5 * step.dt >= config.t_end;
        if step_idx % config.diagnostics_every as u64 == 0 || done {
            let mut rec = diagnostics::collect_record(
                step_idx,
                &state,
                &theta_before,
                step.dt,
                &thresholds,
                &config.params,
                config.eta,
            );
            let elapsed = (step_idx - prev_rec_step) as f64 * step.dt;
            rec.energy_law_residual = diagnostics::energy_law_residual(
                &prev_rec,
                &rec,
                elapsed,
                &thresholds,
                &config.params,
            );
            let tol = diagnostics::energy_law_tolerance(elapsed, &grid, prev_rec.total_energy);
            energy_checked += 1;
            if rec.energy_law_residual <= tol {
                energy_passed += 1;
            }
            writer.append(&rec)?;
            writer.flush()?;
            records.push(rec);
            prev_rec = rec;
            prev_rec_step = step_idx;
        }
        if step_idx % config.snapshot_every as u64 == 0 || done {
            snapshot::write_state(dir, step_idx, &state)?;
            last_snap_step = step_idx;
        }
    }
    if last_snap_step != step_idx {
        snapshot::write_state(dir, step_idx, &state)?;
    }
    writer.flush()?;

    let (phi_margin, theta_margin, _) = diagnostics::max_principle_report(&state);
    let summary = RunSummary {
        thresholds,
        constants_estimated,
        theta0_linf: state.theta0_linf(),
        steps: step_idx,
        final_t: state.t,
        records: records.len(),
        phi_margin,
        theta_margin,
        mp_flagged_steps,
        energy_passed,
        energy_checked,
        decay: decay_verdict_of(&records),
    };
    fs::write(dir.join("summary.txt"), summary.to_text())?;
    Ok(summary)
}

/// Outcome of [`audit`]; `Display` prints one line per check.
#[derive(Debug, Clone)]
pub struct AuditReport {
    pub records: usize,
    pub snapshots_checked: usize,
    /// Steps whose CSV row disagrees with its snapshot or whose columns
    /// break the energy-residual identity.
    pub flagged_rows: Vec<u64>,
    /// Structural findings (unreadable or incomplete snapshots, ordering).
    pub problems: Vec<String>,
    pub max_principle_ok: bool,
    pub phi_range_ok: bool,
    pub energy_passed: usize,
    pub energy_checked: usize,
    pub decay: DecayVerdict,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.flagged_rows.is_empty()
            && self.problems.is_empty()
            && self.max_principle_ok
            && self.phi_range_ok
    }

    pub fn energy_pass_rate(&self) -> f64 {
        if self.energy_checked == 0 {
            1.0
        } else {
            self.energy_passed as f64 / self.energy_checked as f64
        }
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "records = {}", self.records)?;
        writeln!(f, "snapshots_checked = {}", self.snapshots_checked)?;
        if self.flagged_rows.is_empty() {
            writeln!(f, "flagged_rows = none")?;
        } else {
            let rows: Vec<String> = self.flagged_rows.iter().map(u64::to_string).collect();
            writeln!(f, "flagged_rows = {}", rows.join(","))?;
        }
        for p in &self.problems {
            writeln!(f, "problem = {p}")?;
        }
        writeln!(
            f,
            "max_principle = {}",
            if self.max_principle_ok { "pass" } else { "fail" }
        )?;
        writeln!(
            f,
            "phase_range = {}",
            if self.phi_range_ok { "pass" } else { "fail" }
        )?;
        writeln!(f, "energy_pass_rate = {:.6}", self.energy_pass_rate())?;
        writeln!(f, "decay_verdict = {}", self.decay)?;
        writeln!(f, "audit = {}", if self.passed() { "pass" } else { "fail" })
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= AUDIT_TOL * (1.0 + a.abs().max(b.abs()))
}

/// Columns recomputable from a single snapshot (the time-difference
/// columns `theta_t_l2`, `h_functional`, `y_functional`, and
/// `energy_law_residual` are checked through the residual identity
/// instead).
const SNAPSHOT_CHECKED: [&str; 14] = [
    "t",
    "u_l2_sq",
    "grad_u_l2_sq",
    "viscous_dissipation",
    "mixing_energy",
    "total_energy",
    "ac_residual_l2",
    "theta_l2_sq",
    "grad_theta_l2_sq",
    "lap_theta_l2_sq",
    "theta_linf",
    "phi_min",
    "phi_max",
    "div_u_linf",
];

/// Snapshot steps present in a directory, with only complete five-field
/// sets returned; incomplete sets are reported as problems.
fn snapshot_steps(dir: &Path, problems: &mut Vec<String>) -> Result<Vec<u64>, SimError> {
    let mut fields_by_step: std::collections::BTreeMap<u64, Vec<String>> = Default::default();
    for entry in fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name();
        let Some(name) = name.to_str() else { continue };
        let Some(rest) = name.strip_prefix("snap_") else {
            continue;
        };
        let Some(rest) = rest.strip_suffix(".csv") else {
            continue;
        };
        let Some((step, field)) = rest.split_once('_') else {
            problems.push(format!("unrecognized snapshot name {name}"));
            continue;
        };
        match step.parse::<u64>() {
            Ok(step) => fields_by_step
                .entry(step)
                .or_default()
                .push(field.to_string()),
            Err(_) => problems.push(format!("unrecognized snapshot name {name}")),
        }
    }
    let mut steps = Vec::new();
    for (step, mut fields) in fields_by_step {
        fields.sort();
        let mut expected: Vec<String> = snapshot::STATE_FIELDS.iter().map(|s| s.to_string()).collect();
        expected.sort();
        if fields == expected {
            steps.push(step);
        } else {
            problems.push(format!("snapshot set at step {step} is incomplete"));
        }
    }
    Ok(steps)
}

/// Re-verify a finished output directory.
///
/// Reads `config.txt` and `diagnostics.csv`, recomputes thresholds the
/// same way the run did (configured constants, or the deterministic
/// estimate for the configured seed), and checks:
/// - records parse, are finite, and carry strictly increasing steps;
/// - the stored energy-residual column matches the one recomputed from
///   neighboring rows (a corrupted energy value breaks the identity at
///   the corrupted row);
/// - every complete snapshot reproduces its CSV row in the columns of
///   [`SNAPSHOT_CHECKED`];
/// - the maximum-principle margins and the phase range hold in every row;
/// - the decay verdict, re-derived from the full series.
pub fn audit(dir: &Path) -> Result<AuditReport, SimError> {
    let config = crate::config::parse_config(&fs::read_to_string(dir.join("config.txt"))?)?;
    let grid = grid_of(&config);
    let records = snapshot::read_diagnostics(&dir.join("diagnostics.csv"))?;
    if records.is_empty() {
        return Err(SimError::Config(
            "diagnostics.csv holds no records".to_string(),
        ));
    }
    let (thresholds, _) = resolve_thresholds(&config);

    let mut problems: Vec<String> = Vec::new();
    let mut flagged: Vec<u64> = Vec::new();

    // Reference sup-norm of the initial temperature: the pinned snapshot
    // if the run declared one, else the first record (exact for runs that
    // started fresh).
    let theta0_linf = match &config.theta0_file {
        Some(path) => {
            let (f, _) =
                snapshot::read_scalar_on(path, &grid, BoundaryCondition::HomogeneousDirichlet)?;
            f.max_abs()
        }
        None => records[0].theta_linf,
    };
    let dt = config.dt.unwrap_or_else(|| {
        config.cfl_safety * dynamics::stable_dt(&config.params, &grid, theta0_linf)
    });

    // Row structure.
    for pair in records.windows(2) {
        if pair[1].step <= pair[0].step {
            problems.push(format!(
                "record steps not increasing at step {}",
                pair[1].step
            ));
        }
    }
    for rec in &records {
        if !rec.all_finite() {
            flagged.push(rec.step);
        }
    }

    // Energy-residual identity between consecutive rows. A corrupted
    // energy at row k breaks the pairs (k−1,k) and (k,k+1); a corrupted
    // dissipation or residual column breaks only (k−1,k). Either way the
    // first row of a maximal run of failing pairs is the corrupted one.
    let mut energy_checked = 0usize;
    let mut energy_passed = 0usize;
    let mut failing_pairs: Vec<usize> = Vec::new();
    for i in 1..records.len() {
        let (a, b) = (&records[i - 1], &records[i]);
        let elapsed = (b.step - a.step) as f64 * dt;
        let expected =
            diagnostics::energy_law_residual(a, b, elapsed, &thresholds, &config.params);
        if !close(expected, b.energy_law_residual) {
            failing_pairs.push(i);
        }
        energy_checked += 1;
        if expected <= diagnostics::energy_law_tolerance(elapsed, &grid, a.total_energy) {
            energy_passed += 1;
        }
    }
    let mut k = 0;
    while k < failing_pairs.len() {
        let first = failing_pairs[k];
        let mut end = k + 1;
        while end < failing_pairs.len() && failing_pairs[end] == failing_pairs[end - 1] + 1 {
            end += 1;
        }
        flagged.push(records[first].step);
        k = end;
    }

    // Snapshot cross-checks.
    let steps = snapshot_steps(dir, &mut problems)?;
    let mut snapshots_checked = 0usize;
    let check_names: Vec<usize> = SNAPSHOT_CHECKED
        .iter()
        .map(|n| {
            DiagnosticsRecord::FIELD_NAMES
                .iter()
                .position(|f| f == n)
                .expect("column names stay in sync")
                - 1
        })
        .collect();
    for &snap_step in &steps {
        let Some(row) = records.iter().find(|r| r.step == snap_step) else {
            continue;
        };
        let path = |field: &str| snapshot::snapshot_path(dir, snap_step, field);
        let phi_bc = phi_condition(&config, &grid);
        let (phi, t) = snapshot::read_scalar_on(&path("phi"), &grid, phi_bc)?;
        let (theta, _) =
            snapshot::read_scalar_on(&path("theta"), &grid, BoundaryCondition::HomogeneousDirichlet)?;
        let (p, _) =
            snapshot::read_scalar_on(&path("p"), &grid, BoundaryCondition::HomogeneousNeumann)?;
        let (w, _) = snapshot::read_vector_on(&path("u"), &path("v"), &grid)?;
        let state = match SimState::restart(w, p, phi, theta.clone(), t, theta) {
            Ok(s) => s,
            Err(e) => {
                problems.push(format!("snapshot at step {snap_step}: {e}"));
                continue;
            }
        };
        let recomputed = diagnostics::collect_record(
            snap_step,
            &state,
            &state.theta.clone(),
            dt,
            &thresholds,
            &config.params,
            config.eta,
        );
        let (stored, fresh) = (row.float_values(), recomputed.float_values());
        snapshots_checked += 1;
        if check_names.iter().any(|&i| !close(stored[i], fresh[i])) {
            flagged.push(snap_step);
        }
    }

    // Pointwise bounds across all rows.
    let phi_ref = records[0].phi_min.abs().max(records[0].phi_max.abs()).max(1.0);
    let max_principle_ok = records
        .iter()
        .all(|r| r.theta_linf <= theta0_linf + MP_REPORT_TOL);
    let phi_range_ok = records
        .iter()
        .all(|r| r.phi_min.abs().max(r.phi_max.abs()) <= phi_ref + MP_REPORT_TOL);

    flagged.sort_unstable();
    flagged.dedup();
    Ok(AuditReport {
        records: records.len(),
        snapshots_checked,
        flagged_rows: flagged,
        problems,
        max_principle_ok,
        phi_range_ok,
        energy_passed,
        energy_checked,
        decay: decay_verdict_of(&records),
    })
}
