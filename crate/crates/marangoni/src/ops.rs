//! Discrete differential operators on the staggered grid.
//!
//! All stencils are the standard second-order ones; boundary closures come
//! from the ghost conventions in [`crate::field`]. Operator outputs are data
//! arrays: returned scalar fields carry a homogeneous-Neumann tag (the most
//! inert choice if their ghosts are ever consulted) and returned vector
//! fields are `Free`-tagged.
//!
//! Exact discrete identities (machine precision, verified in tests):
//! - `divergence(gradient(f)) == laplacian(f)` everywhere, for every
//!   boundary-condition variant;
//! - summation by parts `⟨gradient(f), w⟩ = −⟨f, divergence(w)⟩` for no-slip
//!   `w` (wall faces zero kill the boundary terms);
//! - `⟨−laplacian(f), f⟩ = grad_norm_sq(f)` and the variable-coefficient
//!   analogue with [`div_coeff_grad`]/[`weighted_grad_norm_sq`], for
//!   homogeneous-Dirichlet `f`;
//! - `⟨viscous_force(w, μ), w⟩ = −viscous_dissipation(w, μ)` for no-slip `w`.
//!
//! Upwind advection transports the wall trace at inflow walls, differenced
//! over the full spacing: this trades a localized consistency error at inflow
//! wall cells (which carry zero normal velocity under no-slip anyway) for an
//! unconditional discrete maximum principle under the CFL bound
//! `dt·(|u|/dx + |v|/dy) ≤ 1`.

use crate::field::{BoundaryCondition, FaceBc, ScalarField, VectorField};

/// Five-point discrete Laplacian with ghost-cell boundary closure.
pub fn laplacian(f: &ScalarField) -> ScalarField {
    let g = f.grid().clone();
    let (nx, ny) = (g.nx(), g.ny());
    let (dx2, dy2) = (g.dx() * g.dx(), g.dy() * g.dy());
    let mut out = ScalarField::new(g, BoundaryCondition::HomogeneousNeumann);
    for j in 0..ny {
        for i in 0..nx {
            let c = f.at(i, j);
            let w = if i > 0 { f.at(i - 1, j) } else { f.ghost_left(j) };
            let e = if i + 1 < nx { f.at(i + 1, j) } else { f.ghost_right(j) };
            let s = if j > 0 { f.at(i, j - 1) } else { f.ghost_bottom(i) };
            let n = if j + 1 < ny { f.at(i, j + 1) } else { f.ghost_top(i) };
            out.set(i, j, (w - 2.0 * c + e) / dx2 + (s - 2.0 * c + n) / dy2);
        }
    }
    out
}

/// Face-centered gradient, including wall faces through the ghost closure
/// (a homogeneous-Neumann field therefore has exactly zero wall-face
/// gradient, which is what keeps the projection from disturbing no-slip).
pub fn gradient(f: &ScalarField) -> VectorField {
    let g = f.grid().clone();
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    let mut out = VectorField::new(g, FaceBc::Free);
    for j in 0..ny {
        for i in 0..=nx {
            let v = if i == 0 {
                (f.at(0, j) - f.ghost_left(j)) / dx
            } else if i == nx {
                (f.ghost_right(j) - f.at(nx - 1, j)) / dx
            } else {
                (f.at(i, j) - f.at(i - 1, j)) / dx
            };
            out.set_u(i, j, v);
        }
    }
    for j in 0..=ny {
        for i in 0..nx {
            let v = if j == 0 {
                (f.at(i, 0) - f.ghost_bottom(i)) / dy
            } else if j == ny {
                (f.ghost_top(i) - f.at(i, ny - 1)) / dy
            } else {
                (f.at(i, j) - f.at(i, j - 1)) / dy
            };
            out.set_v(i, j, v);
        }
    }
    out
}

/// Cell-centered divergence of a face field.
pub fn divergence(w: &VectorField) -> ScalarField {
    let g = w.grid().clone();
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    let mut out = ScalarField::new(g, BoundaryCondition::HomogeneousNeumann);
    for j in 0..ny {
        for i in 0..nx {
            let d = (w.u_at(i + 1, j) - w.u_at(i, j)) / dx
                + (w.v_at(i, j + 1) - w.v_at(i, j)) / dy;
            out.set(i, j, d);
        }
    }
    out
}

/// Largest absolute cell divergence.
pub fn max_abs_divergence(w: &VectorField) -> f64 {
    divergence(w).max_abs()
}

/// First-order upwind evaluation of the advective term `w·∇f` at cell
/// centers. Monotone under the CFL bound when `w` is discretely
/// divergence-free: one explicit Euler step cannot create new extrema.
pub fn advect_upwind(f: &ScalarField, w: &VectorField) -> ScalarField {
    let g = f.grid().clone();
    assert_eq!(&g, w.grid(), "advection needs a common grid");
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    let mut out = ScalarField::new(g, BoundaryCondition::HomogeneousNeumann);
    for j in 0..ny {
        for i in 0..nx {
            let c = f.at(i, j);
            let dxm = if i > 0 {
                (c - f.at(i - 1, j)) / dx
            } else {
                (c - f.trace_left(j)) / dx
            };
            let dxp = if i + 1 < nx {
                (f.at(i + 1, j) - c) / dx
            } else {
                (f.trace_right(j) - c) / dx
            };
            let dym = if j > 0 {
                (c - f.at(i, j - 1)) / dy
            } else {
                (c - f.trace_bottom(i)) / dy
            };
            let dyp = if j + 1 < ny {
                (f.at(i, j + 1) - c) / dy
            } else {
                (f.trace_top(i) - c) / dy
            };
            let uw = w.u_at(i, j);
            let ue = w.u_at(i + 1, j);
            let vs = w.v_at(i, j);
            let vn = w.v_at(i, j + 1);
            let adv = uw.max(0.0) * dxm
                + ue.min(0.0) * dxp
                + vs.max(0.0) * dym
                + vn.min(0.0) * dyp;
            out.set(i, j, adv);
        }
    }
    out
}

/// Second-order centered evaluation of `w·∇f` (no maximum-principle
/// guarantee; selected by the `advection = centered` configuration).
pub fn advect_centered(f: &ScalarField, w: &VectorField) -> ScalarField {
    let g = f.grid().clone();
    assert_eq!(&g, w.grid(), "advection needs a common grid");
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    let mut out = ScalarField::new(g, BoundaryCondition::HomogeneousNeumann);
    for j in 0..ny {
        for i in 0..nx {
            let west = if i > 0 { f.at(i - 1, j) } else { f.ghost_left(j) };
            let east = if i + 1 < nx { f.at(i + 1, j) } else { f.ghost_right(j) };
            let south = if j > 0 { f.at(i, j - 1) } else { f.ghost_bottom(i) };
            let north = if j + 1 < ny { f.at(i, j + 1) } else { f.ghost_top(i) };
            let uc = 0.5 * (w.u_at(i, j) + w.u_at(i + 1, j));
            let vc = 0.5 * (w.v_at(i, j) + w.v_at(i, j + 1));
            out.set(
                i,
                j,
                uc * (east - west) / (2.0 * dx) + vc * (north - south) / (2.0 * dy),
            );
        }
    }
    out
}

/// Tangential ghost of `u` below the bottom wall at column `i`.
fn u_ghost_below(w: &VectorField, i: usize) -> f64 {
    match w.bc() {
        FaceBc::NoSlip => -w.u_at(i, 0),
        FaceBc::Free => 2.0 * w.u_at(i, 0) - w.u_at(i, 1),
    }
}

/// Tangential ghost of `u` above the top wall at column `i`.
fn u_ghost_above(w: &VectorField, i: usize) -> f64 {
    let ny = w.grid().ny();
    match w.bc() {
        FaceBc::NoSlip => -w.u_at(i, ny - 1),
        FaceBc::Free => 2.0 * w.u_at(i, ny - 1) - w.u_at(i, ny - 2),
    }
}

/// Tangential ghost of `v` left of the left wall at row `j`.
fn v_ghost_left(w: &VectorField, j: usize) -> f64 {
    match w.bc() {
        FaceBc::NoSlip => -w.v_at(0, j),
        FaceBc::Free => 2.0 * w.v_at(0, j) - w.v_at(1, j),
    }
}

/// Tangential ghost of `v` right of the right wall at row `j`.
fn v_ghost_right(w: &VectorField, j: usize) -> f64 {
    let nx = w.grid().nx();
    match w.bc() {
        FaceBc::NoSlip => -w.v_at(nx - 1, j),
        FaceBc::Free => 2.0 * w.v_at(nx - 1, j) - w.v_at(nx - 2, j),
    }
}

/// `∂u/∂y` at node `(i, j)`, `i` in `0..=nx`, `j` in `0..=ny`.
pub(crate) fn uy_at_node(w: &VectorField, i: usize, j: usize) -> f64 {
    let g = w.grid();
    let dy = g.dy();
    if j == 0 {
        (w.u_at(i, 0) - u_ghost_below(w, i)) / dy
    } else if j == g.ny() {
        (u_ghost_above(w, i) - w.u_at(i, g.ny() - 1)) / dy
    } else {
        (w.u_at(i, j) - w.u_at(i, j - 1)) / dy
    }
}

/// `∂v/∂x` at node `(i, j)`.
pub(crate) fn vx_at_node(w: &VectorField, i: usize, j: usize) -> f64 {
    let g = w.grid();
    let dx = g.dx();
    if i == 0 {
        (w.v_at(0, j) - v_ghost_left(w, j)) / dx
    } else if i == g.nx() {
        (v_ghost_right(w, j) - w.v_at(g.nx() - 1, j)) / dx
    } else {
        (w.v_at(i, j) - w.v_at(i - 1, j)) / dx
    }
}

/// Average of the (up to four) cell values around node `(i, j)`.
pub(crate) fn cell_avg_at_node(f: &ScalarField, i: usize, j: usize) -> f64 {
    let g = f.grid();
    let mut s = 0.0;
    let mut n = 0u32;
    let ci_lo = i.saturating_sub(1);
    let cj_lo = j.saturating_sub(1);
    for cj in cj_lo..=j.min(g.ny() - 1) {
        for ci in ci_lo..=i.min(g.nx() - 1) {
            if (ci + 1 == i || ci == i) && (cj + 1 == j || cj == j) {
                s += f.at(ci, cj);
                n += 1;
            }
        }
    }
    s / n as f64
}

/// Tensor-trapezoid quadrature weight of node `(i, j)`: ½ per wall index.
pub(crate) fn node_weight(grid: &crate::grid::Grid, i: usize, j: usize) -> f64 {
    let wx = if i == 0 || i == grid.nx() { 0.5 } else { 1.0 };
    let wy = if j == 0 || j == grid.ny() { 0.5 } else { 1.0 };
    wx * wy
}

/// First-order upwind evaluation of `adv·∇w` on the faces of a no-slip
/// velocity field (wall faces of the result are zero). Tangential
/// wall-adjacent differences transport the zero wall trace over the full
/// spacing, mirroring the scalar upwind rule.
pub fn advect_velocity_upwind(w: &VectorField, adv: &VectorField) -> VectorField {
    let g = w.grid().clone();
    assert_eq!(&g, adv.grid(), "advection needs a common grid");
    assert_eq!(w.bc(), FaceBc::NoSlip, "velocity self-advection expects no-slip");
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    let mut out = VectorField::new(g, FaceBc::Free);
    for j in 0..ny {
        for i in 1..nx {
            let c = w.u_at(i, j);
            let a = adv.u_at(i, j);
            let b = 0.25
                * (adv.v_at(i - 1, j)
                    + adv.v_at(i, j)
                    + adv.v_at(i - 1, j + 1)
                    + adv.v_at(i, j + 1));
            let dxm = (c - w.u_at(i - 1, j)) / dx;
            let dxp = (w.u_at(i + 1, j) - c) / dx;
            let dym = if j > 0 { (c - w.u_at(i, j - 1)) / dy } else { c / dy };
            let dyp = if j + 1 < ny {
                (w.u_at(i, j + 1) - c) / dy
            } else {
                -c / dy
            };
            out.set_u(
                i,
                j,
                a.max(0.0) * dxm + a.min(0.0) * dxp + b.max(0.0) * dym + b.min(0.0) * dyp,
            );
        }
    }
    for j in 1..ny {
        for i in 0..nx {
            let c = w.v_at(i, j);
            let b = adv.v_at(i, j);
            let a = 0.25
                * (adv.u_at(i, j - 1)
                    + adv.u_at(i + 1, j - 1)
                    + adv.u_at(i, j)
                    + adv.u_at(i + 1, j));
            let dym = (c - w.v_at(i, j - 1)) / dy;
            let dyp = (w.v_at(i, j + 1) - c) / dy;
            let dxm = if i > 0 { (c - w.v_at(i - 1, j)) / dx } else { c / dx };
            let dxp = if i + 1 < nx {
                (w.v_at(i + 1, j) - c) / dx
            } else {
                -c / dx
            };
            out.set_v(
                i,
                j,
                a.max(0.0) * dxm + a.min(0.0) * dxp + b.max(0.0) * dym + b.min(0.0) * dyp,
            );
        }
    }
    out
}

/// Second-order centered evaluation of `adv·∇w` on the faces of a no-slip
/// velocity field (wall faces of the result are zero); tangential ghosts
/// come from the mirror closure.
pub fn advect_velocity_centered(w: &VectorField, adv: &VectorField) -> VectorField {
    let g = w.grid().clone();
    assert_eq!(&g, adv.grid(), "advection needs a common grid");
    assert_eq!(w.bc(), FaceBc::NoSlip, "velocity self-advection expects no-slip");
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    let mut out = VectorField::new(g, FaceBc::Free);
    for j in 0..ny {
        for i in 1..nx {
            let a = adv.u_at(i, j);
            let b = 0.25
                * (adv.v_at(i - 1, j)
                    + adv.v_at(i, j)
                    + adv.v_at(i - 1, j + 1)
                    + adv.v_at(i, j + 1));
            let ux = (w.u_at(i + 1, j) - w.u_at(i - 1, j)) / (2.0 * dx);
            let south = if j > 0 { w.u_at(i, j - 1) } else { u_ghost_below(w, i) };
            let north = if j + 1 < ny {
                w.u_at(i, j + 1)
            } else {
                u_ghost_above(w, i)
            };
            out.set_u(i, j, a * ux + b * (north - south) / (2.0 * dy));
        }
    }
    for j in 1..ny {
        for i in 0..nx {
            let b = adv.v_at(i, j);
            let a = 0.25
                * (adv.u_at(i, j - 1)
                    + adv.u_at(i + 1, j - 1)
                    + adv.u_at(i, j)
                    + adv.u_at(i + 1, j));
            let vy = (w.v_at(i, j + 1) - w.v_at(i, j - 1)) / (2.0 * dy);
            let west = if i > 0 { w.v_at(i - 1, j) } else { v_ghost_left(w, j) };
            let east = if i + 1 < nx {
                w.v_at(i + 1, j)
            } else {
                v_ghost_right(w, j)
            };
            out.set_v(i, j, a * (east - west) / (2.0 * dx) + b * vy);
        }
    }
    out
}

/// Divergence of the viscous stress `2 μ 𝒟w` evaluated on faces, with `μ`
/// given at cell centers (node values are neighborhood averages). For
/// no-slip `w` the pairing `⟨viscous_force(w, μ), w⟩` equals
/// `−viscous_dissipation(w, μ)` exactly.
pub fn viscous_force(w: &VectorField, mu_cells: &ScalarField) -> VectorField {
    let g = w.grid().clone();
    assert_eq!(&g, mu_cells.grid(), "viscosity needs the velocity grid");
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    // normal stresses at cell centers
    let mut t11 = vec![0.0; g.n_cells()];
    let mut t22 = vec![0.0; g.n_cells()];
    for j in 0..ny {
        for i in 0..nx {
            let mu = mu_cells.at(i, j);
            t11[g.idx(i, j)] = 2.0 * mu * (w.u_at(i + 1, j) - w.u_at(i, j)) / dx;
            t22[g.idx(i, j)] = 2.0 * mu * (w.v_at(i, j + 1) - w.v_at(i, j)) / dy;
        }
    }
    // shear stress at nodes
    let mut t12 = vec![0.0; (nx + 1) * (ny + 1)];
    for j in 0..=ny {
        for i in 0..=nx {
            let mu = cell_avg_at_node(mu_cells, i, j);
            t12[j * (nx + 1) + i] = mu * (uy_at_node(w, i, j) + vx_at_node(w, i, j));
        }
    }
    let mut out = VectorField::new(g.clone(), FaceBc::Free);
    for j in 0..ny {
        for i in 1..nx {
            let f = (t11[g.idx(i, j)] - t11[g.idx(i - 1, j)]) / dx
                + (t12[(j + 1) * (nx + 1) + i] - t12[j * (nx + 1) + i]) / dy;
            out.set_u(i, j, f);
        }
    }
    for j in 1..ny {
        for i in 0..nx {
            let f = (t12[j * (nx + 1) + i + 1] - t12[j * (nx + 1) + i]) / dx
                + (t22[g.idx(i, j)] - t22[g.idx(i, j - 1)]) / dy;
            out.set_v(i, j, f);
        }
    }
    out
}

/// Discrete `2 ∫ μ |𝒟w|² dx`, in the quadrature dual to [`viscous_force`]:
/// normal parts at cells (full weight), shear part at nodes
/// (tensor-trapezoid weights).
pub fn viscous_dissipation(w: &VectorField, mu_cells: &ScalarField) -> f64 {
    let g = w.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    let da = g.cell_area();
    let mut s = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let ux = (w.u_at(i + 1, j) - w.u_at(i, j)) / dx;
            let vy = (w.v_at(i, j + 1) - w.v_at(i, j)) / dy;
            s += 2.0 * mu_cells.at(i, j) * (ux * ux + vy * vy) * da;
        }
    }
    for j in 0..=ny {
        for i in 0..=nx {
            let mu = cell_avg_at_node(mu_cells, i, j);
            let sh = uy_at_node(w, i, j) + vx_at_node(w, i, j);
            s += node_weight(g, i, j) * mu * sh * sh * da;
        }
    }
    s
}

/// Cell-centered `|𝒟w|²` (squared Frobenius norm of the symmetric gradient),
/// the shear part averaged from the four surrounding nodes.
pub fn symmetric_gradient_norm_sq(w: &VectorField) -> ScalarField {
    let g = w.grid().clone();
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    let mut shear_sq = vec![0.0; (nx + 1) * (ny + 1)];
    for j in 0..=ny {
        for i in 0..=nx {
            let sh = uy_at_node(w, i, j) + vx_at_node(w, i, j);
            shear_sq[j * (nx + 1) + i] = sh * sh;
        }
    }
    let mut out = ScalarField::new(g.clone(), BoundaryCondition::HomogeneousNeumann);
    for j in 0..ny {
        for i in 0..nx {
            let ux = (w.u_at(i + 1, j) - w.u_at(i, j)) / dx;
            let vy = (w.v_at(i, j + 1) - w.v_at(i, j)) / dy;
            let avg = 0.25
                * (shear_sq[j * (nx + 1) + i]
                    + shear_sq[j * (nx + 1) + i + 1]
                    + shear_sq[(j + 1) * (nx + 1) + i]
                    + shear_sq[(j + 1) * (nx + 1) + i + 1]);
            out.set(i, j, ux * ux + vy * vy + 0.5 * avg);
        }
    }
    out
}

/// Coefficient value on `u` face `(i, j)`: adjacent-cell average inside,
/// the wall-adjacent cell value on the walls.
fn coeff_on_u_face(c: &ScalarField, i: usize, j: usize) -> f64 {
    let nx = c.grid().nx();
    if i == 0 {
        c.at(0, j)
    } else if i == nx {
        c.at(nx - 1, j)
    } else {
        0.5 * (c.at(i - 1, j) + c.at(i, j))
    }
}

/// Coefficient value on `v` face `(i, j)`.
fn coeff_on_v_face(c: &ScalarField, i: usize, j: usize) -> f64 {
    let ny = c.grid().ny();
    if j == 0 {
        c.at(i, 0)
    } else if j == ny {
        c.at(i, ny - 1)
    } else {
        0.5 * (c.at(i, j - 1) + c.at(i, j))
    }
}

/// Conservative variable-coefficient diffusion `∇·(κ ∇f)` with `κ` at cell
/// centers (face values by adjacent-cell averaging). Reduces to
/// [`laplacian`] exactly when `κ ≡ 1`.
pub fn div_coeff_grad(f: &ScalarField, coeff_cells: &ScalarField) -> ScalarField {
    let g = f.grid().clone();
    assert_eq!(&g, coeff_cells.grid(), "coefficient needs the field grid");
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    let grad = gradient(f);
    let mut out = ScalarField::new(g, BoundaryCondition::HomogeneousNeumann);
    for j in 0..ny {
        for i in 0..nx {
            let fe = coeff_on_u_face(coeff_cells, i + 1, j) * grad.u_at(i + 1, j);
            let fw = coeff_on_u_face(coeff_cells, i, j) * grad.u_at(i, j);
            let fn_ = coeff_on_v_face(coeff_cells, i, j + 1) * grad.v_at(i, j + 1);
            let fs = coeff_on_v_face(coeff_cells, i, j) * grad.v_at(i, j);
            out.set(i, j, (fe - fw) / dx + (fn_ - fs) / dy);
        }
    }
    out
}

/// Discrete `‖∇f‖²`: face-gradient squares with half weight on wall faces
/// (equivalently, face-gradient squares averaged to cells). Dual to the
/// Laplacian: `⟨−laplacian(f), f⟩ = grad_norm_sq(f)` exactly for
/// homogeneous-Dirichlet `f`.
pub fn grad_norm_sq(f: &ScalarField) -> f64 {
    let g = f.grid();
    let da = g.cell_area();
    let grad = gradient(f);
    let mut s = 0.0;
    for j in 0..g.ny() {
        for i in 0..=g.nx() {
            let w = if i == 0 || i == g.nx() { 0.5 } else { 1.0 };
            let v = grad.u_at(i, j);
            s += w * v * v * da;
        }
    }
    for j in 0..=g.ny() {
        for i in 0..g.nx() {
            let w = if j == 0 || j == g.ny() { 0.5 } else { 1.0 };
            let v = grad.v_at(i, j);
            s += w * v * v * da;
        }
    }
    s
}

/// Discrete `∫ κ |∇f|² dx` in the quadrature dual to [`div_coeff_grad`]:
/// `⟨−div_coeff_grad(f, κ), f⟩ = weighted_grad_norm_sq(f, κ)` exactly for
/// homogeneous-Dirichlet `f`.
pub fn weighted_grad_norm_sq(f: &ScalarField, coeff_cells: &ScalarField) -> f64 {
    let g = f.grid();
    assert_eq!(g, coeff_cells.grid(), "coefficient needs the field grid");
    let da = g.cell_area();
    let grad = gradient(f);
    let mut s = 0.0;
    for j in 0..g.ny() {
        for i in 0..=g.nx() {
            let w = if i == 0 || i == g.nx() { 0.5 } else { 1.0 };
            let v = grad.u_at(i, j);
            s += w * coeff_on_u_face(coeff_cells, i, j) * v * v * da;
        }
    }
    for j in 0..=g.ny() {
        for i in 0..g.nx() {
            let w = if j == 0 || j == g.ny() { 0.5 } else { 1.0 };
            let v = grad.v_at(i, j);
            s += w * coeff_on_v_face(coeff_cells, i, j) * v * v * da;
        }
    }
    s
}

/// Discrete `‖∇w‖²` of a velocity field: normal derivatives at cells,
/// tangential derivatives at nodes with tensor-trapezoid weights.
pub fn grad_vector_norm_sq(w: &VectorField) -> f64 {
    let g = w.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let (dx, dy) = (g.dx(), g.dy());
    let da = g.cell_area();
    let mut s = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let ux = (w.u_at(i + 1, j) - w.u_at(i, j)) / dx;
            let vy = (w.v_at(i, j + 1) - w.v_at(i, j)) / dy;
            s += (ux * ux + vy * vy) * da;
        }
    }
    for j in 0..=ny {
        for i in 0..=nx {
            let uy = uy_at_node(w, i, j);
            let vx = vx_at_node(w, i, j);
            s += node_weight(g, i, j) * (uy * uy + vx * vx) * da;
        }
    }
    s
}
