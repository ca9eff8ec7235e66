//! Constitutive laws: model parameters, temperature-dependent coefficient
//! families, the double-well potential, the Eötvös surface-tension law, the
//! cutoff mollification of coefficients, and the Kirchhoff transform of the
//! temperature with its inverse.
//!
//! Coefficient functions are restricted to three closed-form families
//! (constant, exponential, positive quadratic). The restriction guarantees
//! positivity and two continuous derivatives by construction and gives exact
//! antiderivatives for the Kirchhoff transform; tabulated coefficient data
//! is out of scope.

use std::fmt;
use std::str::FromStr;

/// All scalar model coefficients plus the two coefficient functions.
///
/// `lambda0` scales surface tension, `a` and `b` are the Eötvös law
/// coefficients (`λ(θ) = λ₀(a − bθ)`), `gamma` the phase relaxation rate,
/// `eps` the interface width, `ra`/`ga`/`g` the buoyancy constants.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    pub lambda0: f64,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    pub eps: f64,
    pub ra: f64,
    pub ga: f64,
    pub g: f64,
    pub mu: CoefficientFn,
    pub kappa: CoefficientFn,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            lambda0: 0.01,
            a: 1.0,
            b: 1.0,
            gamma: 1.0,
            eps: 0.1,
            ra: 1.0,
            ga: 0.0,
            g: 1.0,
            mu: CoefficientFn::Constant(1.0),
            kappa: CoefficientFn::Constant(1.0),
        }
    }
}

impl PhysicalParams {
    /// Check the sign constraints the model analysis assumes.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.lambda0 > 0.0) {
            return Err(format!("lambda0 must be positive, got {}", self.lambda0));
        }
        if !(self.a > 0.0) {
            return Err(format!("a must be positive, got {}", self.a));
        }
        if self.b == 0.0 {
            return Err("b must be nonzero".to_string());
        }
        if !(self.gamma > 0.0) {
            return Err(format!("gamma must be positive, got {}", self.gamma));
        }
        if !(self.eps > 0.0) {
            return Err(format!("eps must be positive, got {}", self.eps));
        }
        for v in [self.ra, self.ga, self.g, self.b] {
            if !v.is_finite() {
                return Err("physical parameters must be finite".to_string());
            }
        }
        self.mu.validate().map_err(|e| format!("mu: {e}"))?;
        self.kappa.validate().map_err(|e| format!("kappa: {e}"))?;
        Ok(())
    }
}

/// Double-well potential `W(φ) = (φ²−1)²/(4ε²)` and its derivative
/// `W′(φ) = (φ³−φ)/ε²`.
pub fn double_well(phi: f64, eps: f64) -> (f64, f64) {
    debug_assert!(eps > 0.0);
    let e2 = eps * eps;
    let q = phi * phi - 1.0;
    (q * q / (4.0 * e2), phi * q / e2)
}

/// Second derivative `W″(φ) = (3φ² − 1)/ε²` (the Newton/Jacobian weight of
/// the steady solver and the reaction-stability bound).
pub fn double_well_curvature(phi: f64, eps: f64) -> f64 {
    debug_assert!(eps > 0.0);
    (3.0 * phi * phi - 1.0) / (eps * eps)
}

/// Eötvös surface-tension law `λ(θ) = λ₀ (a − b θ)`.
pub fn surface_tension(theta: f64, params: &PhysicalParams) -> f64 {
    params.lambda0 * (params.a - params.b * theta)
}

/// Number of sample points used for interval extrema (1024 intervals,
/// endpoint-inclusive — on symmetric intervals the midpoint 0 is sampled
/// exactly, which makes the extrema exact for all three families).
const EXTREMA_SAMPLES: usize = 1025;

/// Positive temperature-dependent coefficient function.
#[derive(Debug, Clone, PartialEq)]
pub enum CoefficientFn {
    /// `c` with `c > 0`.
    Constant(f64),
    /// `c0 · exp(c1 · s)` with `c0 > 0`.
    Exponential { c0: f64, c1: f64 },
    /// `c0 + c1 · s²` with `c0 > 0`, `c1 ≥ 0`.
    Quadratic { c0: f64, c1: f64 },
}

impl CoefficientFn {
    /// Check positivity (and finiteness) of the family parameters.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            CoefficientFn::Constant(c) => {
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(format!("constant coefficient must be positive, got {c}"));
                }
            }
            CoefficientFn::Exponential { c0, c1 } => {
                if !(*c0 > 0.0 && c0.is_finite()) {
                    return Err(format!("exp coefficient needs c0 > 0, got c0 = {c0}"));
                }
                if !c1.is_finite() {
                    return Err("exp coefficient needs finite c1".to_string());
                }
            }
            CoefficientFn::Quadratic { c0, c1 } => {
                if !(*c0 > 0.0 && c0.is_finite()) {
                    return Err(format!("quad coefficient needs c0 > 0, got c0 = {c0}"));
                }
                if !(*c1 >= 0.0 && c1.is_finite()) {
                    return Err(format!(
                        "quad coefficient needs c1 >= 0 for positivity, got c1 = {c1}"
                    ));
                }
            }
        }
        Ok(())
    }

    /// Coefficient value; positive for every real argument.
    pub fn value(&self, s: f64) -> f64 {
        match self {
            CoefficientFn::Constant(c) => *c,
            CoefficientFn::Exponential { c0, c1 } => c0 * (c1 * s).exp(),
            CoefficientFn::Quadratic { c0, c1 } => c0 + c1 * s * s,
        }
    }

    /// First derivative.
    pub fn deriv(&self, s: f64) -> f64 {
        match self {
            CoefficientFn::Constant(_) => 0.0,
            CoefficientFn::Exponential { c0, c1 } => c0 * c1 * (c1 * s).exp(),
            CoefficientFn::Quadratic { c1, .. } => 2.0 * c1 * s,
        }
    }

    /// Second derivative.
    pub fn deriv2(&self, s: f64) -> f64 {
        match self {
            CoefficientFn::Constant(_) => 0.0,
            CoefficientFn::Exponential { c0, c1 } => c0 * c1 * c1 * (c1 * s).exp(),
            CoefficientFn::Quadratic { c1, .. } => 2.0 * c1,
        }
    }

    /// Minimum over `[lo, hi]`, sampled on an endpoint-inclusive grid.
    pub fn min_on(&self, lo: f64, hi: f64) -> f64 {
        debug_assert!(lo <= hi);
        let mut m = f64::INFINITY;
        for k in 0..EXTREMA_SAMPLES {
            let s = lo + (hi - lo) * k as f64 / (EXTREMA_SAMPLES - 1) as f64;
            m = m.min(self.value(s));
        }
        m
    }

    /// Maximum over `[lo, hi]`, sampled on an endpoint-inclusive grid.
    pub fn max_on(&self, lo: f64, hi: f64) -> f64 {
        debug_assert!(lo <= hi);
        let mut m = f64::NEG_INFINITY;
        for k in 0..EXTREMA_SAMPLES {
            let s = lo + (hi - lo) * k as f64 / (EXTREMA_SAMPLES - 1) as f64;
            m = m.max(self.value(s));
        }
        m
    }

    /// Largest `|d/ds|` over `[lo, hi]` on an endpoint-inclusive grid of
    /// `samples` points.
    pub fn max_abs_deriv_on(&self, lo: f64, hi: f64, samples: usize) -> f64 {
        debug_assert!(lo <= hi && samples >= 2);
        let mut m = 0.0_f64;
        for k in 0..samples {
            let s = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
            m = m.max(self.deriv(s).abs());
        }
        m
    }
}

impl fmt::Display for CoefficientFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientFn::Constant(c) => write!(f, "constant:{c}"),
            CoefficientFn::Exponential { c0, c1 } => write!(f, "exp:{c0},{c1}"),
            CoefficientFn::Quadratic { c0, c1 } => write!(f, "quad:{c0},{c1}"),
        }
    }
}

impl FromStr for CoefficientFn {
    type Err = String;

    /// Parse the configuration syntax `constant:c`, `exp:c0,c1`,
    /// `quad:c0,c1` and validate positivity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("coefficient '{s}' needs the form family:params"))?;
        let nums: Result<Vec<f64>, String> = rest
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("coefficient parameter '{p}' is not a number"))
            })
            .collect();
        let nums = nums?;
        let want = |n: usize| -> Result<(), String> {
            if nums.len() != n {
                Err(format!(
                    "coefficient family '{family}' takes {n} parameter(s), got {}",
                    nums.len()
                ))
            } else {
                Ok(())
            }
        };
        let fun = match family.trim() {
            "constant" => {
                want(1)?;
                CoefficientFn::Constant(nums[0])
            }
            "exp" => {
                want(2)?;
                CoefficientFn::Exponential {
                    c0: nums[0],
                    c1: nums[1],
                }
            }
            "quad" => {
                want(2)?;
                CoefficientFn::Quadratic {
                    c0: nums[0],
                    c1: nums[1],
                }
            }
            other => {
                return Err(format!(
                    "unknown coefficient family '{other}' (expected constant, exp or quad)"
                ))
            }
        };
        fun.validate()?;
        Ok(fun)
    }
}

/// Standard bump `g(s) = exp(1/(s²−1))` on `(−1, 1)`, zero outside.
fn bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (1.0 / (s * s - 1.0)).exp()
    } else {
        0.0
    }
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub(crate) fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, tol, 40)
}

/// Lookup-table resolution for the bump cumulative (1024 intervals).
const CDF_TABLE_INTERVALS: usize = 1024;

/// A coefficient function modified outside the physically visited
/// temperature range: equal to the base inside `|s| ≤ 3r`, equal to the
/// constant `lower` outside `|s| ≥ 5r`, smoothly blended in between, and
/// bounded by `[lower, upper]` everywhere.
#[derive(Debug, Clone)]
pub struct MollifiedCoefficient {
    base: CoefficientFn,
    r: f64,
    lower: f64,
    upper: f64,
    /// normalized cumulative of the bump on [−1, 1] at 1025 uniform nodes
    cdf: Vec<f64>,
    /// normalized bump values at the same nodes (the cumulative's slope,
    /// used for cubic Hermite interpolation between nodes)
    pdf: Vec<f64>,
}

impl MollifiedCoefficient {
    /// Cutoff radius `r` (a third of the initial sup-norm).
    pub fn r(&self) -> f64 {
        self.r
    }
    /// Lower constant: half the base infimum over `|s| ≤ 5r`.
    pub fn lower(&self) -> f64 {
        self.lower
    }
    /// Upper constant: twice the base supremum over `|s| ≤ 5r`.
    pub fn upper(&self) -> f64 {
        self.upper
    }
    pub fn base(&self) -> &CoefficientFn {
        &self.base
    }

    /// Normalized bump cumulative `G(x) = ∫_{−1}^{x} g / ∫_{−1}^{1} g`,
    /// clamped to `[0, 1]`; cubic Hermite interpolation in the cached table
    /// (exact at the nodes, interpolation error well below 1e-9 between
    /// them).
    fn cdf(&self, x: f64) -> f64 {
        if x <= -1.0 {
            return 0.0;
        }
        if x >= 1.0 {
            return 1.0;
        }
        let n = CDF_TABLE_INTERVALS;
        let t = (x + 1.0) * 0.5 * n as f64;
        let i = (t.floor() as usize).min(n - 1);
        let s = t - i as f64;
        let h = 2.0 / n as f64;
        let (p0, p1) = (self.cdf[i], self.cdf[i + 1]);
        let (m0, m1) = (h * self.pdf[i], h * self.pdf[i + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        let val = (2.0 * s3 - 3.0 * s2 + 1.0) * p0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * p1
            + (s3 - s2) * m1;
        val.clamp(0.0, 1.0)
    }

    /// Cutoff function: mollified indicator of `[−4r, 4r]`, identically 1 on
    /// `|s| ≤ 3r` and identically 0 on `|s| ≥ 5r` (exact plateaus thanks to
    /// the clamped cumulative).
    pub fn h(&self, s: f64) -> f64 {
        let hi = self.cdf((s + 4.0 * self.r) / self.r);
        let lo = self.cdf((s - 4.0 * self.r) / self.r);
        (hi - lo).clamp(0.0, 1.0)
    }

    /// Modified coefficient `(base(s) − lower)·h(s) + lower`.
    pub fn value(&self, s: f64) -> f64 {
        (self.base.value(s) - self.lower) * self.h(s) + self.lower
    }
}

/// Uniform bounds `[lower, upper]` of the mollified coefficient for an
/// initial temperature of sup-norm `theta0_linf`: half the infimum and twice
/// the supremum of the base over the mollification window `|s| ≤ 5r`,
/// `r = theta0_linf/3`. A zero sup-norm means the temperature vanishes
/// identically, so the point value at 0 serves as both bounds.
pub fn coefficient_bounds(base: &CoefficientFn, theta0_linf: f64) -> (f64, f64) {
    debug_assert!(theta0_linf >= 0.0);
    if theta0_linf > 0.0 {
        let r = theta0_linf / 3.0;
        (
            0.5 * base.min_on(-5.0 * r, 5.0 * r),
            2.0 * base.max_on(-5.0 * r, 5.0 * r),
        )
    } else {
        (base.value(0.0), base.value(0.0))
    }
}

/// Build the mollified coefficient for an initial temperature of sup-norm
/// `theta0_linf > 0` (the zero case makes the temperature vanish identically
/// and needs no modification; it is rejected here).
pub fn mollify(base: &CoefficientFn, theta0_linf: f64) -> Result<MollifiedCoefficient, String> {
    base.validate()?;
    if !(theta0_linf > 0.0 && theta0_linf.is_finite()) {
        return Err(format!(
            "mollification needs a positive initial sup-norm, got {theta0_linf}"
        ));
    }
    let r = theta0_linf / 3.0;
    let (lower, upper) = coefficient_bounds(base, theta0_linf);
    // cumulative of the bump over [−1, 1], segment by segment
    let n = CDF_TABLE_INTERVALS;
    let mut cdf = Vec::with_capacity(n + 1);
    cdf.push(0.0);
    let mut acc = 0.0;
    for k in 0..n {
        let x0 = -1.0 + 2.0 * k as f64 / n as f64;
        let x1 = -1.0 + 2.0 * (k + 1) as f64 / n as f64;
        acc += adaptive_simpson(&bump, x0, x1, 1e-14);
        cdf.push(acc);
    }
    let total = acc;
    for v in &mut cdf {
        *v /= total;
    }
    let pdf: Vec<f64> = (0..=n)
        .map(|k| bump(-1.0 + 2.0 * k as f64 / n as f64) / total)
        .collect();
    Ok(MollifiedCoefficient {
        base: base.clone(),
        r,
        lower,
        upper,
        cdf,
        pdf,
    })
}

/// Kirchhoff transform `ϑ = ∫₀^θ κ(s) ds` in closed form.
pub fn kirchhoff(theta: f64, kappa: &CoefficientFn) -> f64 {
    match kappa {
        CoefficientFn::Constant(c) => c * theta,
        CoefficientFn::Exponential { c0, c1 } => {
            if *c1 == 0.0 {
                c0 * theta
            } else {
                c0 * (c1 * theta).exp_m1() / c1
            }
        }
        CoefficientFn::Quadratic { c0, c1 } => c0 * theta + c1 * theta * theta * theta / 3.0,
    }
}

/// Iteration budget for the inverse transform; exceeding it signals an
/// internal fault (the transform is strictly increasing, so the safeguarded
/// iteration cannot legitimately stall).
const INVERSE_MAX_ITER: usize = 200;

/// Inverse Kirchhoff transform `θ = χ(ϑ)` by safeguarded Newton/bisection.
/// The iteration runs until the update falls to rounding scale, comfortably
/// inside the guaranteed absolute tolerance of `1e-12` in `θ` (round trips
/// and finite differences of the inverse map stay clean).
pub fn inverse_kirchhoff(vartheta: f64, kappa: &CoefficientFn) -> Result<f64, String> {
    if !vartheta.is_finite() {
        return Err(format!("inverse transform of non-finite value {vartheta}"));
    }
    if vartheta == 0.0 {
        return Ok(0.0);
    }
    // closed-form shortcut for the linear cases
    match kappa {
        CoefficientFn::Constant(c) => return Ok(vartheta / c),
        CoefficientFn::Exponential { c0, c1 } if *c1 == 0.0 => return Ok(vartheta / c0),
        _ => {}
    }
    // bracket the root by doubling outward from zero
    let (mut lo, mut hi) = if vartheta > 0.0 { (0.0, 1.0) } else { (-1.0, 0.0) };
    let mut expansions = 0;
    loop {
        let probe = if vartheta > 0.0 { hi } else { lo };
        let val = kirchhoff(probe, kappa);
        if (vartheta > 0.0 && val >= vartheta) || (vartheta < 0.0 && val <= vartheta) {
            break;
        }
        if vartheta > 0.0 {
            hi *= 2.0;
        } else {
            lo *= 2.0;
        }
        expansions += 1;
        if expansions > 600 {
            return Err("inverse transform target outside the coefficient range".to_string());
        }
    }
    let mut theta = 0.5 * (lo + hi);
    for _ in 0..INVERSE_MAX_ITER {
        let f = kirchhoff(theta, kappa) - vartheta;
        if f == 0.0 {
            return Ok(theta);
        }
        if f > 0.0 {
            hi = theta;
        } else {
            lo = theta;
        }
        let newton = theta - f / kappa.value(theta);
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - theta).abs();
        theta = next;
        if step <= 1e-15 * (1.0 + theta.abs()) {
            return Ok(theta);
        }
    }
    Err(format!(
        "inverse transform did not converge within {INVERSE_MAX_ITER} iterations"
    ))
}
