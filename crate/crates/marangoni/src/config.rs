//! Flat `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, no sections. Unknown and
//! duplicate keys are rejected with their line number. Required keys:
//! `nx`, `ny`, `t_end`. Everything else has a documented default:
//!
//! | group | keys (defaults) |
//! |---|---|
//! | grid | `lx`, `ly` (1.0) |
//! | physics | `lambda0` (0.01), `a` (1), `b` (1), `gamma` (1), `eps` (0.1), `ra` (1), `ga` (0), `g` (1), `mu`, `kappa` (`constant:1`) |
//! | stepping | `dt` (0.9 × tightest stability bound), `cfl_safety` (0.9), `helmholtz_tol`, `proj_tol` (1e-10), `advection` (`upwind`) |
//! | run | `t_end`, `snapshot_every` (100), `diagnostics_every` (1), `output_dir` (`out`), `mode` (`full`), `seed` (0) |
//! | initial data | `ic_phi` (`stripe`), `phi_trace` (file-based `ic_phi` only), `ic_theta` (`zero`), `ic_u` (`zero`), `theta0` (unset) |
//! | diagnostics | `omega`, `eta` (1.0), `constants_samples` (100), `c1 c2 c3 c_p` (estimated) |
//!
//! Initial-condition selectors: `ic_phi = stripe | bubble |
//! random(amplitude,seed) | file:<path>`, `ic_theta = zero |
//! gaussian(amp,sigma) | file:<path>`, `ic_u = zero | file:<path>`.
//! Snapshots store cell values only, so a file-based `ic_phi` must name
//! the trace it was generated with: `phi_trace = stripe | bubble | zero |
//! constant:<v>`.
//! `theta0 = file:<path>` pins the *initial* temperature of a restarted
//! run (thresholds and sup-norm bounds refer to it, not to the restart
//! state). `mode = isothermal` forces a zero temperature for the whole
//! run and rejects conflicting temperature keys.
//!
//! [`RunConfig::serialize`] renders a normalized config; parsing its own
//! output reproduces the config exactly (floats are printed in shortest
//! round-trip form).

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::coeff::{CoefficientFn, PhysicalParams};
use crate::diagnostics::SobolevConstants;
use crate::dynamics::AdvectionScheme;
use crate::error::SimError;

/// Phase-field initial condition selector.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiInit {
    /// Vertical interface `tanh((x − lx/2)/(√2 ε))` with matching trace.
    Stripe,
    /// Disk of one phase inside the other, `−1` trace.
    Bubble,
    /// Seeded band-limited field scaled to `amplitude`, zero trace.
    Random { amplitude: f64, seed: u64 },
    /// Cell-centered snapshot (requires a `theta0` companion on restarts).
    File(PathBuf),
}

impl fmt::Display for PhiInit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiInit::Stripe => write!(f, "stripe"),
            PhiInit::Bubble => write!(f, "bubble"),
            PhiInit::Random { amplitude, seed } => write!(f, "random({amplitude},{seed})"),
            PhiInit::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Boundary trace of a file-based phase field.
///
/// Snapshots store cell values only, so a restarted run must re-declare
/// the trace its phase field was generated with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiTrace {
    /// The stripe preset's trace: `tanh((x − lx/2)/(√2 ε))` with the
    /// configured `eps`.
    Stripe,
    /// The bubble preset's trace: constant `−1`.
    Bubble,
    /// Zero trace (the random preset's trace).
    Zero,
    /// Constant trace in `[−1, 1]`.
    Constant(f64),
}

impl fmt::Display for PhiTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiTrace::Stripe => write!(f, "stripe"),
            PhiTrace::Bubble => write!(f, "bubble"),
            PhiTrace::Zero => write!(f, "zero"),
            PhiTrace::Constant(v) => write!(f, "constant:{v}"),
        }
    }
}

/// Temperature initial condition selector.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaInit {
    Zero,
    /// Centered bump `amp · exp(−(r/σ)²/2)`, clipped to zero trace.
    Gaussian { amp: f64, sigma: f64 },
    File(PathBuf),
}

impl fmt::Display for ThetaInit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaInit::Zero => write!(f, "zero"),
            ThetaInit::Gaussian { amp, sigma } => write!(f, "gaussian({amp},{sigma})"),
            ThetaInit::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Velocity initial condition selector.
#[derive(Debug, Clone, PartialEq)]
pub enum VelocityInit {
    Zero,
    /// Pair of `u`/`v` component snapshots; pass the path of the `u` file,
    /// the `v` file is found by name.
    File(PathBuf),
}

impl fmt::Display for VelocityInit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VelocityInit::Zero => write!(f, "zero"),
            VelocityInit::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Run mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    /// Coupled flow, phase, and temperature.
    Full,
    /// Temperature pinned to zero: surface tension is the constant `λ₀a`
    /// and buoyancy vanishes, isolating the flow–phase energy law.
    Isothermal,
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunMode::Full => write!(f, "full"),
            RunMode::Isothermal => write!(f, "isothermal"),
        }
    }
}

/// Fully validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub params: PhysicalParams,
    pub t_end: f64,
    /// Explicit step size; `None` defers to `0.9 ×` the tightest stability
    /// bound, evaluated once the initial temperature is known.
    pub dt: Option<f64>,
    pub cfl_safety: f64,
    pub helmholtz_tol: f64,
    pub proj_tol: f64,
    pub advection: AdvectionScheme,
    pub snapshot_every: usize,
    pub diagnostics_every: usize,
    pub output_dir: PathBuf,
    pub mode: RunMode,
    pub ic_phi: PhiInit,
    /// Trace of a file-based phase field; required iff `ic_phi` is a file.
    pub phi_trace: Option<PhiTrace>,
    pub ic_theta: ThetaInit,
    pub ic_u: VelocityInit,
    /// Initial-temperature snapshot governing thresholds on restarts.
    pub theta0_file: Option<PathBuf>,
    pub omega: f64,
    pub eta: f64,
    /// Interpolation constants; `None` means estimate them on the run grid.
    pub constants: Option<SobolevConstants>,
    pub constants_samples: usize,
    pub seed: u64,
}

fn cfg_err(msg: impl Into<String>) -> SimError {
    SimError::Config(msg.into())
}

/// Key/value store with line numbers and duplicate detection.
struct RawConfig {
    entries: HashMap<String, (usize, String)>,
}

impl RawConfig {
    fn parse(text: &str) -> Result<RawConfig, SimError> {
        let mut entries = HashMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                cfg_err(format!("line {line_no}: expected `key = value`, got `{line}`"))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(cfg_err(format!("line {line_no}: empty key")));
            }
            if let Some((first, _)) = entries.get(&key) {
                return Err(cfg_err(format!(
                    "line {line_no}: duplicate key `{key}` (first set on line {first})"
                )));
            }
            entries.insert(key, (line_no, value));
        }
        Ok(RawConfig { entries })
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn take_parsed<T: FromStr>(&mut self, key: &str, what: &str) -> Result<Option<T>, SimError> {
        match self.take(key) {
            None => Ok(None),
            Some((line, value)) => value.parse::<T>().map(Some).map_err(|_| {
                cfg_err(format!("line {line}: `{key}` needs {what}, got `{value}`"))
            }),
        }
    }

    fn finish(self) -> Result<(), SimError> {
        if let Some((key, (line, _))) = self
            .entries
            .into_iter()
            .min_by_key(|(_, (line, _))| *line)
        {
            return Err(cfg_err(format!("line {line}: unknown key `{key}`")));
        }
        Ok(())
    }
}

/// Split `name(a,b,...)` into its arguments.
fn call_args<'a>(value: &'a str, name: &str) -> Option<Vec<&'a str>> {
    let inner = value
        .strip_prefix(name)?
        .trim()
        .strip_prefix('(')?
        .strip_suffix(')')?;
    Some(inner.split(',').map(str::trim).collect())
}

fn parse_phi_init(value: &str, line: usize) -> Result<PhiInit, SimError> {
    match value {
        "stripe" => return Ok(PhiInit::Stripe),
        "bubble" => return Ok(PhiInit::Bubble),
        _ => {}
    }
    if let Some(path) = value.strip_prefix("file:") {
        return Ok(PhiInit::File(PathBuf::from(path.trim())));
    }
    if let Some(args) = call_args(value, "random") {
        if args.len() != 2 {
            return Err(cfg_err(format!(
                "line {line}: `ic_phi = random(amplitude,seed)` takes 2 arguments"
            )));
        }
        let amplitude: f64 = args[0].parse().map_err(|_| {
            cfg_err(format!("line {line}: bad random amplitude `{}`", args[0]))
        })?;
        let seed: u64 = args[1]
            .parse()
            .map_err(|_| cfg_err(format!("line {line}: bad random seed `{}`", args[1])))?;
        if !(0.0..=1.0).contains(&amplitude) {
            return Err(cfg_err(format!(
                "line {line}: random phase amplitude must lie in [0, 1], got {amplitude}"
            )));
        }
        return Ok(PhiInit::Random { amplitude, seed });
    }
    Err(cfg_err(format!(
        "line {line}: `ic_phi` must be stripe, bubble, random(amplitude,seed), or file:<path>, got `{value}`"
    )))
}

fn parse_phi_trace(value: &str, line: usize) -> Result<PhiTrace, SimError> {
    match value {
        "stripe" => return Ok(PhiTrace::Stripe),
        "bubble" => return Ok(PhiTrace::Bubble),
        "zero" => return Ok(PhiTrace::Zero),
        _ => {}
    }
    if let Some(v) = value.strip_prefix("constant:") {
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| cfg_err(format!("line {line}: bad constant trace `{value}`")))?;
        if !(v.abs() <= 1.0) {
            return Err(cfg_err(format!(
                "line {line}: phase boundary data must satisfy |phi_b| <= 1, got {v}"
            )));
        }
        return Ok(PhiTrace::Constant(v));
    }
    Err(cfg_err(format!(
        "line {line}: `phi_trace` must be stripe, bubble, zero, or constant:<v>, got `{value}`"
    )))
}

fn parse_theta_init(value: &str, line: usize) -> Result<ThetaInit, SimError> {
    if value == "zero" {
        return Ok(ThetaInit::Zero);
    }
    if let Some(path) = value.strip_prefix("file:") {
        return Ok(ThetaInit::File(PathBuf::from(path.trim())));
    }
    if let Some(args) = call_args(value, "gaussian") {
        if args.len() != 2 {
            return Err(cfg_err(format!(
                "line {line}: `ic_theta = gaussian(amp,sigma)` takes 2 arguments"
            )));
        }
        let amp: f64 = args[0]
            .parse()
            .map_err(|_| cfg_err(format!("line {line}: bad gaussian amplitude `{}`", args[0])))?;
        let sigma: f64 = args[1]
            .parse()
            .map_err(|_| cfg_err(format!("line {line}: bad gaussian width `{}`", args[1])))?;
        if !amp.is_finite() {
            return Err(cfg_err(format!(
                "line {line}: gaussian amplitude must be finite"
            )));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(cfg_err(format!(
                "line {line}: gaussian width must be positive, got {sigma}"
            )));
        }
        return Ok(ThetaInit::Gaussian { amp, sigma });
    }
    Err(cfg_err(format!(
        "line {line}: `ic_theta` must be zero, gaussian(amp,sigma), or file:<path>, got `{value}`"
    )))
}

fn parse_velocity_init(value: &str, line: usize) -> Result<VelocityInit, SimError> {
    if value == "zero" {
        return Ok(VelocityInit::Zero);
    }
    if let Some(path) = value.strip_prefix("file:") {
        return Ok(VelocityInit::File(PathBuf::from(path.trim())));
    }
    Err(cfg_err(format!(
        "line {line}: `ic_u` must be zero or file:<path>, got `{value}`"
    )))
}

/// Parse and fully validate a configuration text.
pub fn parse_config(text: &str) -> Result<RunConfig, SimError> {
    let mut raw = RawConfig::parse(text)?;

    fn require<T>(opt: Option<T>, key: &str) -> Result<T, SimError> {
        opt.ok_or_else(|| cfg_err(format!("missing required key `{key}`")))
    }
    let nx = require(raw.take_parsed::<usize>("nx", "a positive integer")?, "nx")?;
    let ny = require(raw.take_parsed::<usize>("ny", "a positive integer")?, "ny")?;
    let lx = raw.take_parsed::<f64>("lx", "a number")?.unwrap_or(1.0);
    let ly = raw.take_parsed::<f64>("ly", "a number")?.unwrap_or(1.0);

    let mut params = PhysicalParams::default();
    if let Some(v) = raw.take_parsed::<f64>("lambda0", "a number")? {
        params.lambda0 = v;
    }
    if let Some(v) = raw.take_parsed::<f64>("a", "a number")? {
        params.a = v;
    }
    if let Some(v) = raw.take_parsed::<f64>("b", "a number")? {
        params.b = v;
    }
    if let Some(v) = raw.take_parsed::<f64>("gamma", "a number")? {
        params.gamma = v;
    }
    if let Some(v) = raw.take_parsed::<f64>("eps", "a number")? {
        params.eps = v;
    }
    if let Some(v) = raw.take_parsed::<f64>("ra", "a number")? {
        params.ra = v;
    }
    if let Some(v) = raw.take_parsed::<f64>("ga", "a number")? {
        params.ga = v;
    }
    if let Some(v) = raw.take_parsed::<f64>("g", "a number")? {
        params.g = v;
    }
    if let Some((line, value)) = raw.take("mu") {
        params.mu = value
            .parse::<CoefficientFn>()
            .map_err(|e| cfg_err(format!("line {line}: mu: {e}")))?;
    }
    if let Some((line, value)) = raw.take("kappa") {
        params.kappa = value
            .parse::<CoefficientFn>()
            .map_err(|e| cfg_err(format!("line {line}: kappa: {e}")))?;
    }

    let t_end = require(raw.take_parsed::<f64>("t_end", "a number")?, "t_end")?;

    let dt = raw.take_parsed::<f64>("dt", "a number")?;
    let cfl_safety = raw
        .take_parsed::<f64>("cfl_safety", "a number")?
        .unwrap_or(0.9);
    let helmholtz_tol = raw
        .take_parsed::<f64>("helmholtz_tol", "a number")?
        .unwrap_or(1e-10);
    let proj_tol = raw
        .take_parsed::<f64>("proj_tol", "a number")?
        .unwrap_or(1e-10);
    let advection = match raw.take("advection") {
        None => AdvectionScheme::Upwind,
        Some((line, value)) => match value.as_str() {
            "upwind" => AdvectionScheme::Upwind,
            "centered" => AdvectionScheme::Centered,
            other => {
                return Err(cfg_err(format!(
                    "line {line}: `advection` must be upwind or centered, got `{other}`"
                )))
            }
        },
    };

    let snapshot_every = raw
        .take_parsed::<usize>("snapshot_every", "a positive integer")?
        .unwrap_or(100);
    let diagnostics_every = raw
        .take_parsed::<usize>("diagnostics_every", "a positive integer")?
        .unwrap_or(1);
    let output_dir = raw
        .take("output_dir")
        .map(|(_, v)| PathBuf::from(v))
        .unwrap_or_else(|| PathBuf::from("out"));
    let mode = match raw.take("mode") {
        None => RunMode::Full,
        Some((line, value)) => match value.as_str() {
            "full" => RunMode::Full,
            "isothermal" => RunMode::Isothermal,
            other => {
                return Err(cfg_err(format!(
                    "line {line}: `mode` must be full or isothermal, got `{other}`"
                )))
            }
        },
    };
    let seed = raw.take_parsed::<u64>("seed", "an integer")?.unwrap_or(0);

    let ic_phi = match raw.take("ic_phi") {
        None => PhiInit::Stripe,
        Some((line, value)) => parse_phi_init(&value, line)?,
    };
    let phi_trace = match raw.take("phi_trace") {
        None => None,
        Some((line, value)) => Some(parse_phi_trace(&value, line)?),
    };
    let ic_theta = match raw.take("ic_theta") {
        None => ThetaInit::Zero,
        Some((line, value)) => parse_theta_init(&value, line)?,
    };
    let ic_u = match raw.take("ic_u") {
        None => VelocityInit::Zero,
        Some((line, value)) => parse_velocity_init(&value, line)?,
    };
    let theta0_file = match raw.take("theta0") {
        None => None,
        Some((line, value)) => match value.strip_prefix("file:") {
            Some(path) => Some(PathBuf::from(path.trim())),
            None => {
                return Err(cfg_err(format!(
                    "line {line}: `theta0` must be file:<path>, got `{value}`"
                )))
            }
        },
    };

    let omega = raw.take_parsed::<f64>("omega", "a number")?.unwrap_or(1.0);
    let eta = raw.take_parsed::<f64>("eta", "a number")?.unwrap_or(1.0);
    let c1 = raw.take_parsed::<f64>("c1", "a number")?;
    let c2 = raw.take_parsed::<f64>("c2", "a number")?;
    let c3 = raw.take_parsed::<f64>("c3", "a number")?;
    let c_p = raw.take_parsed::<f64>("c_p", "a number")?;
    let constants_samples = raw
        .take_parsed::<usize>("constants_samples", "a positive integer")?
        .unwrap_or(100);

    raw.finish()?;

    // Semantic validation.
    if nx < 4 || ny < 4 {
        return Err(cfg_err(format!(
            "grid needs at least 4x4 cells, got {nx}x{ny}"
        )));
    }
    for (name, v) in [("lx", lx), ("ly", ly)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(cfg_err(format!("{name} must be positive, got {v}")));
        }
    }
    params.validate().map_err(cfg_err)?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(cfg_err(format!("t_end must be positive, got {t_end}")));
    }
    if let Some(dt) = dt {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(cfg_err(format!("dt must be positive, got {dt}")));
        }
    }
    if !(cfl_safety > 0.0 && cfl_safety <= 1.0) {
        return Err(cfg_err(format!(
            "cfl_safety must lie in (0, 1], got {cfl_safety}"
        )));
    }
    for (name, v) in [("helmholtz_tol", helmholtz_tol), ("proj_tol", proj_tol)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(cfg_err(format!("{name} must be positive, got {v}")));
        }
    }
    if snapshot_every == 0 {
        return Err(cfg_err("snapshot_every must be at least 1"));
    }
    if diagnostics_every == 0 {
        return Err(cfg_err("diagnostics_every must be at least 1"));
    }
    for (name, v) in [("omega", omega), ("eta", eta)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(cfg_err(format!("{name} must be positive, got {v}")));
        }
    }
    let given = [c1, c2, c3, c_p].iter().filter(|v| v.is_some()).count();
    let constants = match given {
        0 => None,
        4 => {
            let consts = SobolevConstants {
                c1: c1.unwrap(),
                c2: c2.unwrap(),
                c3: c3.unwrap(),
                c_p: c_p.unwrap(),
            };
            consts.validate().map_err(cfg_err)?;
            Some(consts)
        }
        _ => {
            return Err(cfg_err(
                "interpolation constants must be given all together (c1, c2, c3, c_p) or not at all",
            ))
        }
    };
    if constants_samples < 100 {
        return Err(cfg_err(format!(
            "constants_samples must be at least 100, got {constants_samples}"
        )));
    }
    match (&ic_phi, &phi_trace) {
        (PhiInit::File(_), None) => {
            return Err(cfg_err(
                "ic_phi = file:<path> needs a phi_trace (stripe, bubble, zero, or constant:<v>)",
            ))
        }
        (PhiInit::File(_), Some(_)) | (_, None) => {}
        (_, Some(_)) => {
            return Err(cfg_err(
                "phi_trace only applies to a file-based ic_phi (presets carry their own trace)",
            ))
        }
    }
    if mode == RunMode::Isothermal {
        if ic_theta != ThetaInit::Zero {
            return Err(cfg_err(
                "mode = isothermal pins the temperature to zero; remove ic_theta",
            ));
        }
        if theta0_file.is_some() {
            return Err(cfg_err(
                "mode = isothermal pins the temperature to zero; remove theta0",
            ));
        }
    }

    Ok(RunConfig {
        nx,
        ny,
        lx,
        ly,
        params,
        t_end,
        dt,
        cfl_safety,
        helmholtz_tol,
        proj_tol,
        advection,
        snapshot_every,
        diagnostics_every,
        output_dir,
        mode,
        ic_phi,
        phi_trace,
        ic_theta,
        ic_u,
        theta0_file,
        omega,
        eta,
        constants,
        constants_samples,
        seed,
    })
}

impl RunConfig {
    /// Render the fully normalized configuration; parsing the result
    /// reproduces `self` exactly.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        push("nx", self.nx.to_string());
        push("ny", self.ny.to_string());
        push("lx", self.lx.to_string());
        push("ly", self.ly.to_string());
        push("lambda0", self.params.lambda0.to_string());
        push("a", self.params.a.to_string());
        push("b", self.params.b.to_string());
        push("gamma", self.params.gamma.to_string());
        push("eps", self.params.eps.to_string());
        push("ra", self.params.ra.to_string());
        push("ga", self.params.ga.to_string());
        push("g", self.params.g.to_string());
        push("mu", self.params.mu.to_string());
        push("kappa", self.params.kappa.to_string());
        push("t_end", self.t_end.to_string());
        if let Some(dt) = self.dt {
            push("dt", dt.to_string());
        }
        push("cfl_safety", self.cfl_safety.to_string());
        push("helmholtz_tol", self.helmholtz_tol.to_string());
        push("proj_tol", self.proj_tol.to_string());
        push(
            "advection",
            match self.advection {
                AdvectionScheme::Upwind => "upwind".to_string(),
                AdvectionScheme::Centered => "centered".to_string(),
            },
        );
        push("snapshot_every", self.snapshot_every.to_string());
        push("diagnostics_every", self.diagnostics_every.to_string());
        push("output_dir", self.output_dir.display().to_string());
        push("mode", self.mode.to_string());
        push("seed", self.seed.to_string());
        push("ic_phi", self.ic_phi.to_string());
        if let Some(tr) = &self.phi_trace {
            push("phi_trace", tr.to_string());
        }
        push("ic_theta", self.ic_theta.to_string());
        push("ic_u", self.ic_u.to_string());
        if let Some(p) = &self.theta0_file {
            push("theta0", format!("file:{}", p.display()));
        }
        push("omega", self.omega.to_string());
        push("eta", self.eta.to_string());
        push("constants_samples", self.constants_samples.to_string());
        if let Some(c) = &self.constants {
            push("c1", c.c1.to_string());
            push("c2", c.c2.to_string());
            push("c3", c.c3.to_string());
            push("c_p", c.c_p.to_string());
        }
        out
    }
}
