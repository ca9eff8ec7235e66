//! Uniform MAC staggered grid on a rectangle.
//!
//! Cell centers carry scalars; `u` lives on vertical faces (including the
//! left/right walls) and `v` on horizontal faces (including bottom/top walls):
//!
//! - scalars: `nx * ny` values, center of cell `(i, j)` at
//!   `((i + 1/2) dx, (j + 1/2) dy)`;
//! - `u`: `(nx + 1) * ny` values, face `(i, j)` at `(i dx, (j + 1/2) dy)`;
//! - `v`: `nx * (ny + 1)` values, face `(i, j)` at `((i + 1/2) dx, j dy)`.

/// Uniform staggered grid over `[0, lx] x [0, ly]` with `nx * ny` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nx: usize,
    ny: usize,
    lx: f64,
    ly: f64,
    dx: f64,
    dy: f64,
}

impl Grid {
    /// Build a grid. Requires at least 4 cells per direction and positive
    /// extents; `dx` and `dy` are the exact quotients `lx/nx`, `ly/ny`.
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Self {
        assert!(nx >= 4 && ny >= 4, "grid needs at least 4x4 cells");
        assert!(
            lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite(),
            "domain extents must be positive and finite"
        );
        Grid {
            nx,
            ny,
            lx,
            ly,
            dx: lx / nx as f64,
            dy: ly / ny as f64,
        }
    }

    /// Unit square helper used throughout tests and examples.
    pub fn unit(nx: usize, ny: usize) -> Self {
        Grid::new(nx, ny, 1.0, 1.0)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn lx(&self) -> f64 {
        self.lx
    }
    pub fn ly(&self) -> f64 {
        self.ly
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn dy(&self) -> f64 {
        self.dy
    }

    /// Number of scalar (cell-centered) unknowns.
    pub fn n_cells(&self) -> usize {
        self.nx * self.ny
    }
    /// Number of `u` faces.
    pub fn n_u(&self) -> usize {
        (self.nx + 1) * self.ny
    }
    /// Number of `v` faces.
    pub fn n_v(&self) -> usize {
        self.nx * (self.ny + 1)
    }
    /// Cell area, the quadrature weight for all discrete integrals.
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    /// Flat index of cell `(i, j)`, row-major in `j`.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny);
        j * self.nx + i
    }

    /// Flat index of `u` face `(i, j)`, `i` in `0..=nx`.
    #[inline]
    pub fn uidx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.nx && j < self.ny);
        j * (self.nx + 1) + i
    }

    /// Flat index of `v` face `(i, j)`, `j` in `0..=ny`.
    #[inline]
    pub fn vidx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j <= self.ny);
        j * self.nx + i
    }

    /// x coordinate of the center of cell column `i`.
    #[inline]
    pub fn cell_x(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dx
    }

    /// y coordinate of the center of cell row `j`.
    #[inline]
    pub fn cell_y(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dy
    }

    /// x coordinate of `u` face column `i` (0 on the left wall).
    #[inline]
    pub fn u_face_x(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    /// y coordinate of `v` face row `j` (0 on the bottom wall).
    #[inline]
    pub fn v_face_y(&self, j: usize) -> f64 {
        j as f64 * self.dy
    }

    /// Smaller of the two mesh widths; enters stability bounds.
    pub fn h_min(&self) -> f64 {
        self.dx.min(self.dy)
    }
}
