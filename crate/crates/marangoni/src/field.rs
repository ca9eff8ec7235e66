//! Cell-centered scalar fields and MAC staggered vector fields, with the
//! boundary closures the discrete operators rely on.
//!
//! Ghost-cell conventions (one ghost layer, evaluated on demand):
//! - Dirichlet with wall value `b`: ghost = `2 b − interior` (linear
//!   extrapolation, second order at the wall);
//! - homogeneous Neumann: ghost = interior (zero normal derivative).
//!
//! Boundary traces live at wall midpoints: the left/right traces at
//! `(0, y_j)` / `(lx, y_j)`, the bottom/top traces at `(x_i, 0)` / `(x_i, ly)`.
//! On a rectangle the four profiles meet at corners; callers should supply
//! profiles that agree in the corner limit — discontinuous corner data is not
//! rejected but degrades the accuracy of every operator near that corner.

use crate::grid::Grid;

/// Per-side boundary trace values at wall midpoints.
///
/// `left`/`right` hold `ny` values (indexed by cell row), `bottom`/`top`
/// hold `nx` values (indexed by cell column).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryProfile {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub bottom: Vec<f64>,
    pub top: Vec<f64>,
}

impl BoundaryProfile {
    /// All four sides set to the constant `c`.
    pub fn constant(grid: &Grid, c: f64) -> Self {
        BoundaryProfile {
            left: vec![c; grid.ny()],
            right: vec![c; grid.ny()],
            bottom: vec![c; grid.nx()],
            top: vec![c; grid.nx()],
        }
    }

    /// Sample `f(x, y)` at the wall midpoints of all four sides.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        BoundaryProfile {
            left: (0..grid.ny()).map(|j| f(0.0, grid.cell_y(j))).collect(),
            right: (0..grid.ny()).map(|j| f(grid.lx(), grid.cell_y(j))).collect(),
            bottom: (0..grid.nx()).map(|i| f(grid.cell_x(i), 0.0)).collect(),
            top: (0..grid.nx()).map(|i| f(grid.cell_x(i), grid.ly())).collect(),
        }
    }

    /// Check side lengths against a grid.
    pub fn matches(&self, grid: &Grid) -> bool {
        self.left.len() == grid.ny()
            && self.right.len() == grid.ny()
            && self.bottom.len() == grid.nx()
            && self.top.len() == grid.nx()
    }

    /// Largest absolute trace value over all four sides.
    pub fn max_abs(&self) -> f64 {
        self.left
            .iter()
            .chain(&self.right)
            .chain(&self.bottom)
            .chain(&self.top)
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Phase-field boundary trace, validated to lie in `[−1, 1]`.
///
/// The maximum principle for the phase field only holds when the boundary
/// data stays inside the potential wells, so the bound is enforced at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    profile: BoundaryProfile,
}

impl BoundaryData {
    /// Wrap a profile, rejecting any trace value outside `[−1, 1]`.
    pub fn new(profile: BoundaryProfile) -> Result<Self, String> {
        let m = profile.max_abs();
        if m > 1.0 {
            return Err(format!(
                "phase boundary data must satisfy |phi_b| <= 1, got max |phi_b| = {m}"
            ));
        }
        Ok(BoundaryData { profile })
    }

    pub fn profile(&self) -> &BoundaryProfile {
        &self.profile
    }

    /// Boundary condition carrying this trace.
    pub fn into_condition(self) -> BoundaryCondition {
        BoundaryCondition::DirichletProfile(self.profile)
    }
}

/// Boundary closure of a scalar field.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryCondition {
    /// Zero trace on all four walls.
    HomogeneousDirichlet,
    /// Constant trace on all four walls.
    Dirichlet(f64),
    /// Per-cell trace on each wall.
    DirichletProfile(BoundaryProfile),
    /// Zero normal derivative (used by the pressure/projection potential).
    HomogeneousNeumann,
}

/// Cell-centered scalar field with a boundary condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
    bc: BoundaryCondition,
}

impl ScalarField {
    /// Zero-initialized field.
    pub fn new(grid: Grid, bc: BoundaryCondition) -> Self {
        if let BoundaryCondition::DirichletProfile(p) = &bc {
            assert!(p.matches(&grid), "boundary profile sides must match grid");
        }
        let n = grid.n_cells();
        ScalarField {
            grid,
            values: vec![0.0; n],
            bc,
        }
    }

    /// Constant-valued field.
    pub fn constant(grid: Grid, value: f64, bc: BoundaryCondition) -> Self {
        let mut f = ScalarField::new(grid, bc);
        f.values.fill(value);
        f
    }

    /// Sample `f(x, y)` at cell centers.
    pub fn from_fn(grid: Grid, bc: BoundaryCondition, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut s = ScalarField::new(grid, bc);
        for j in 0..s.grid.ny() {
            for i in 0..s.grid.nx() {
                let v = f(s.grid.cell_x(i), s.grid.cell_y(j));
                s.values[s.grid.idx(i, j)] = v;
            }
        }
        s
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn bc(&self) -> &BoundaryCondition {
        &self.bc
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Replace the boundary condition (values untouched).
    pub fn set_bc(&mut self, bc: BoundaryCondition) {
        if let BoundaryCondition::DirichletProfile(p) = &bc {
            assert!(p.matches(&self.grid), "boundary profile sides must match grid");
        }
        self.bc = bc;
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.grid.idx(i, j);
        self.values[k] = v;
    }

    /// Wall trace on the left boundary at row `j`.
    pub fn trace_left(&self, j: usize) -> f64 {
        match &self.bc {
            BoundaryCondition::HomogeneousDirichlet => 0.0,
            BoundaryCondition::Dirichlet(c) => *c,
            BoundaryCondition::DirichletProfile(p) => p.left[j],
            BoundaryCondition::HomogeneousNeumann => self.at(0, j),
        }
    }

    /// Wall trace on the right boundary at row `j`.
    pub fn trace_right(&self, j: usize) -> f64 {
        match &self.bc {
            BoundaryCondition::HomogeneousDirichlet => 0.0,
            BoundaryCondition::Dirichlet(c) => *c,
            BoundaryCondition::DirichletProfile(p) => p.right[j],
            BoundaryCondition::HomogeneousNeumann => self.at(self.grid.nx() - 1, j),
        }
    }

    /// Wall trace on the bottom boundary at column `i`.
    pub fn trace_bottom(&self, i: usize) -> f64 {
        match &self.bc {
            BoundaryCondition::HomogeneousDirichlet => 0.0,
            BoundaryCondition::Dirichlet(c) => *c,
            BoundaryCondition::DirichletProfile(p) => p.bottom[i],
            BoundaryCondition::HomogeneousNeumann => self.at(i, 0),
        }
    }

    /// Wall trace on the top boundary at column `i`.
    pub fn trace_top(&self, i: usize) -> f64 {
        match &self.bc {
            BoundaryCondition::HomogeneousDirichlet => 0.0,
            BoundaryCondition::Dirichlet(c) => *c,
            BoundaryCondition::DirichletProfile(p) => p.top[i],
            BoundaryCondition::HomogeneousNeumann => self.at(i, self.grid.ny() - 1),
        }
    }

    /// Ghost value in cell `(−1, j)`.
    #[inline]
    pub fn ghost_left(&self, j: usize) -> f64 {
        match &self.bc {
            BoundaryCondition::HomogeneousNeumann => self.at(0, j),
            _ => 2.0 * self.trace_left(j) - self.at(0, j),
        }
    }

    /// Ghost value in cell `(nx, j)`.
    #[inline]
    pub fn ghost_right(&self, j: usize) -> f64 {
        match &self.bc {
            BoundaryCondition::HomogeneousNeumann => self.at(self.grid.nx() - 1, j),
            _ => 2.0 * self.trace_right(j) - self.at(self.grid.nx() - 1, j),
        }
    }

    /// Ghost value in cell `(i, −1)`.
    #[inline]
    pub fn ghost_bottom(&self, i: usize) -> f64 {
        match &self.bc {
            BoundaryCondition::HomogeneousNeumann => self.at(i, 0),
            _ => 2.0 * self.trace_bottom(i) - self.at(i, 0),
        }
    }

    /// Ghost value in cell `(i, ny)`.
    #[inline]
    pub fn ghost_top(&self, i: usize) -> f64 {
        match &self.bc {
            BoundaryCondition::HomogeneousNeumann => self.at(i, self.grid.ny() - 1),
            _ => 2.0 * self.trace_top(i) - self.at(i, self.grid.ny() - 1),
        }
    }

    /// Discrete L² inner product (midpoint rule): `Σ f g dA`.
    pub fn dot(&self, other: &ScalarField) -> f64 {
        assert_eq!(self.grid, other.grid, "inner product needs a common grid");
        let da = self.grid.cell_area();
        let mut s = 0.0;
        for (a, b) in self.values.iter().zip(&other.values) {
            s += a * b;
        }
        s * da
    }

    /// Squared discrete L² norm.
    pub fn norm_l2_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |m, v| m.min(*v))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
    }

    /// Mean value over the domain.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Shift so the mean is exactly the arithmetic zero.
    pub fn subtract_mean(&mut self) {
        let m = self.mean();
        for v in &mut self.values {
            *v -= m;
        }
    }

    /// In-place `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: f64, other: &ScalarField) {
        assert_eq!(self.grid, other.grid);
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += alpha * b;
        }
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Wall tag for a staggered vector field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceBc {
    /// Velocity: all wall faces are exactly zero; tangential ghosts mirror.
    NoSlip,
    /// No constraint (gradients, forces, intermediate fields).
    Free,
}

/// MAC staggered vector field: `u` on vertical faces ((nx+1)×ny), `v` on
/// horizontal faces (nx×(ny+1)).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    u: Vec<f64>,
    v: Vec<f64>,
    bc: FaceBc,
}

impl VectorField {
    /// Zero-initialized field.
    pub fn new(grid: Grid, bc: FaceBc) -> Self {
        let nu = grid.n_u();
        let nv = grid.n_v();
        VectorField {
            grid,
            u: vec![0.0; nu],
            v: vec![0.0; nv],
            bc,
        }
    }

    /// Sample component functions at their face positions. No-slip fields get
    /// their wall faces forced to zero afterwards.
    pub fn from_fn(
        grid: Grid,
        bc: FaceBc,
        fu: impl Fn(f64, f64) -> f64,
        fv: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let mut w = VectorField::new(grid, bc);
        for j in 0..w.grid.ny() {
            for i in 0..=w.grid.nx() {
                let val = fu(w.grid.u_face_x(i), w.grid.cell_y(j));
                w.u[w.grid.uidx(i, j)] = val;
            }
        }
        for j in 0..=w.grid.ny() {
            for i in 0..w.grid.nx() {
                let val = fv(w.grid.cell_x(i), w.grid.v_face_y(j));
                w.v[w.grid.vidx(i, j)] = val;
            }
        }
        if bc == FaceBc::NoSlip {
            w.enforce_no_slip();
        }
        w
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn bc(&self) -> FaceBc {
        self.bc
    }
    pub fn u(&self) -> &[f64] {
        &self.u
    }
    pub fn v(&self) -> &[f64] {
        &self.v
    }
    pub fn u_mut(&mut self) -> &mut [f64] {
        &mut self.u
    }
    pub fn v_mut(&mut self) -> &mut [f64] {
        &mut self.v
    }

    #[inline]
    pub fn u_at(&self, i: usize, j: usize) -> f64 {
        self.u[self.grid.uidx(i, j)]
    }
    #[inline]
    pub fn v_at(&self, i: usize, j: usize) -> f64 {
        self.v[self.grid.vidx(i, j)]
    }
    #[inline]
    pub fn set_u(&mut self, i: usize, j: usize, val: f64) {
        let k = self.grid.uidx(i, j);
        self.u[k] = val;
    }
    #[inline]
    pub fn set_v(&mut self, i: usize, j: usize, val: f64) {
        let k = self.grid.vidx(i, j);
        self.v[k] = val;
    }

    /// Zero the wall faces (`u` on left/right walls, `v` on bottom/top walls).
    pub fn enforce_no_slip(&mut self) {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        for j in 0..ny {
            let k0 = self.grid.uidx(0, j);
            let k1 = self.grid.uidx(nx, j);
            self.u[k0] = 0.0;
            self.u[k1] = 0.0;
        }
        for i in 0..nx {
            let k0 = self.grid.vidx(i, 0);
            let k1 = self.grid.vidx(i, ny);
            self.v[k0] = 0.0;
            self.v[k1] = 0.0;
        }
    }

    /// True when every wall face is exactly zero.
    pub fn satisfies_no_slip(&self) -> bool {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        (0..ny).all(|j| self.u_at(0, j) == 0.0 && self.u_at(nx, j) == 0.0)
            && (0..nx).all(|i| self.v_at(i, 0) == 0.0 && self.v_at(i, ny) == 0.0)
    }

    /// Quadrature weight of a `u` face: ½ on the walls, 1 inside.
    #[inline]
    pub fn u_weight(&self, i: usize) -> f64 {
        if i == 0 || i == self.grid.nx() {
            0.5
        } else {
            1.0
        }
    }

    /// Quadrature weight of a `v` face: ½ on the walls, 1 inside.
    #[inline]
    pub fn v_weight(&self, j: usize) -> f64 {
        if j == 0 || j == self.grid.ny() {
            0.5
        } else {
            1.0
        }
    }

    /// Discrete L² inner product over faces, trapezoidal in the staggered
    /// direction (wall faces carry half weight). Constant fields integrate
    /// exactly: `⟨1, 1⟩ = 2 · area`.
    pub fn dot(&self, other: &VectorField) -> f64 {
        assert_eq!(self.grid, other.grid, "inner product needs a common grid");
        let g = &self.grid;
        let da = g.cell_area();
        let mut s = 0.0;
        for j in 0..g.ny() {
            for i in 0..=g.nx() {
                let k = g.uidx(i, j);
                s += self.u_weight(i) * self.u[k] * other.u[k];
            }
        }
        for j in 0..=g.ny() {
            for i in 0..g.nx() {
                let k = g.vidx(i, j);
                s += self.v_weight(j) * self.v[k] * other.v[k];
            }
        }
        s * da
    }

    /// Squared discrete L² norm.
    pub fn norm_l2_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn max_abs(&self) -> f64 {
        self.u
            .iter()
            .chain(&self.v)
            .fold(0.0_f64, |m, w| m.max(w.abs()))
    }

    /// In-place `self += alpha * other`.
    pub fn add_scaled(&mut self, alpha: f64, other: &VectorField) {
        assert_eq!(self.grid, other.grid);
        for (a, b) in self.u.iter_mut().zip(&other.u) {
            *a += alpha * b;
        }
        for (a, b) in self.v.iter_mut().zip(&other.v) {
            *a += alpha * b;
        }
    }

    pub fn all_finite(&self) -> bool {
        self.u.iter().chain(&self.v).all(|w| w.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> Grid {
        Grid::unit(4, 4)
    }

    #[test]
    fn dirichlet_ghosts_extrapolate_linearly() {
        let f = ScalarField::constant(g(), 3.0, BoundaryCondition::Dirichlet(1.0));
        // ghost = 2*1 − 3 = −1 on every side
        assert_eq!(f.ghost_left(2), -1.0);
        assert_eq!(f.ghost_right(0), -1.0);
        assert_eq!(f.ghost_bottom(1), -1.0);
        assert_eq!(f.ghost_top(3), -1.0);
    }

    #[test]
    fn neumann_ghosts_copy_interior() {
        let f = ScalarField::from_fn(g(), BoundaryCondition::HomogeneousNeumann, |x, y| x + y);
        assert_eq!(f.ghost_left(1), f.at(0, 1));
        assert_eq!(f.ghost_top(2), f.at(2, 3));
    }

    #[test]
    fn profile_ghosts_use_per_cell_traces() {
        let p = BoundaryProfile::from_fn(&g(), |x, y| x - y);
        let f = ScalarField::from_fn(
            g(),
            BoundaryCondition::DirichletProfile(p),
            |x, y| x - y,
        );
        // left wall trace at row 1 is 0 − y_1 = −0.375; interior (0,1) = 0.125 − 0.375
        let expected = 2.0 * (-0.375) - f.at(0, 1);
        assert!((f.ghost_left(1) - expected).abs() < 1e-15);
    }

    #[test]
    fn boundary_data_rejects_out_of_range_traces() {
        let mut p = BoundaryProfile::constant(&g(), 0.5);
        assert!(BoundaryData::new(p.clone()).is_ok());
        p.top[2] = 1.5;
        let err = BoundaryData::new(p).unwrap_err();
        assert!(err.contains("|phi_b| <= 1"));
    }

    #[test]
    fn scalar_inner_product_is_midpoint_rule() {
        let one = ScalarField::constant(g(), 1.0, BoundaryCondition::HomogeneousDirichlet);
        assert!((one.norm_l2_sq() - 1.0).abs() < 1e-15);
        let f = ScalarField::from_fn(g(), BoundaryCondition::HomogeneousDirichlet, |x, _| x);
        // Σ x_i² dA over midpoints of a 4-cell partition of [0,1]
        let exact_midpoint: f64 = (0..4)
            .map(|i| ((i as f64 + 0.5) / 4.0).powi(2) * 0.25)
            .sum();
        assert!((f.norm_l2_sq() - exact_midpoint).abs() < 1e-15);
    }

    #[test]
    fn vector_norm_has_half_weight_walls() {
        let w = VectorField::from_fn(g(), FaceBc::Free, |_, _| 1.0, |_, _| 1.0);
        // trapezoid in the staggered direction integrates constants exactly:
        // each component contributes the domain area
        assert!((w.norm_l2_sq() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn no_slip_zeroes_exactly_the_wall_faces() {
        let mut w = VectorField::from_fn(g(), FaceBc::Free, |_, _| 1.0, |_, _| 1.0);
        w.enforce_no_slip();
        assert!(w.satisfies_no_slip());
        // interior faces untouched
        assert_eq!(w.u_at(1, 0), 1.0);
        assert_eq!(w.v_at(0, 1), 1.0);
    }

    #[test]
    fn from_fn_no_slip_forces_walls() {
        let w = VectorField::from_fn(g(), FaceBc::NoSlip, |_, _| 1.0, |_, _| 1.0);
        assert!(w.satisfies_no_slip());
    }

    #[test]
    fn finiteness_checks_detect_nan() {
        let mut f = ScalarField::new(g(), BoundaryCondition::HomogeneousDirichlet);
        assert!(f.all_finite());
        f.values_mut()[5] = f64::NAN;
        assert!(!f.all_finite());
    }
}
