//! Synthetic field generators: smooth deterministic probes, seeded
//! band-limited random fields, exactly divergence-free velocities built from
//! stream functions, and the initial-condition presets of the runner.
//!
//! Random fields are sine series with spectrally decaying random
//! coefficients, so they vanish on the boundary and stay resolution-robust;
//! velocities come from node stream functions, which makes the discrete
//! divergence vanish to rounding and the wall-normal faces vanish exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{BoundaryCondition, BoundaryProfile, FaceBc, ScalarField, VectorField};
use crate::grid::Grid;

/// Lowest Dirichlet mode `sin(πx/lx)·sin(πy/ly)`, amplitude 1.
pub fn fundamental_mode(grid: &Grid) -> ScalarField {
    let (lx, ly) = (grid.lx(), grid.ly());
    ScalarField::from_fn(grid.clone(), BoundaryCondition::HomogeneousDirichlet, |x, y| {
        (std::f64::consts::PI * x / lx).sin() * (std::f64::consts::PI * y / ly).sin()
    })
}

/// Seeded band-limited random field: sine series over the first
/// `modes × modes` Dirichlet modes with coefficients `U(−1,1)/(k² + l²)`,
/// normalized to sup-norm 1. Vanishes on the boundary.
pub fn band_limited_scalar(grid: &Grid, seed: u64, modes: usize) -> ScalarField {
    assert!(modes >= 1, "need at least one mode");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = Vec::with_capacity(modes * modes);
    for k in 1..=modes {
        for l in 1..=modes {
            let c: f64 = rng.gen_range(-1.0..1.0);
            coeffs.push(c / (k * k + l * l) as f64);
        }
    }
    let (lx, ly) = (grid.lx(), grid.ly());
    let mut f = ScalarField::from_fn(grid.clone(), BoundaryCondition::HomogeneousDirichlet, |x, y| {
        let mut s = 0.0;
        let mut idx = 0;
        for k in 1..=modes {
            for l in 1..=modes {
                s += coeffs[idx]
                    * (k as f64 * std::f64::consts::PI * x / lx).sin()
                    * (l as f64 * std::f64::consts::PI * y / ly).sin();
                idx += 1;
            }
        }
        s
    });
    let m = f.max_abs();
    if m > 0.0 {
        let inv = 1.0 / m;
        for v in f.values_mut() {
            *v *= inv;
        }
    }
    f
}

/// Velocity from a stream function sampled at grid nodes:
/// `u = ∂ψ/∂y`, `v = −∂ψ/∂x` by exact face differences. The discrete
/// divergence of the result is zero to rounding, and wall-normal faces are
/// exactly zero whenever ψ vanishes on the boundary.
pub fn stream_function_velocity(grid: &Grid, psi: impl Fn(f64, f64) -> f64) -> VectorField {
    let (nx, ny) = (grid.nx(), grid.ny());
    let (dx, dy) = (grid.dx(), grid.dy());
    let node = |i: usize, j: usize| psi(i as f64 * dx, j as f64 * dy);
    let mut w = VectorField::new(grid.clone(), FaceBc::NoSlip);
    for j in 0..ny {
        for i in 0..=nx {
            let val = (node(i, j + 1) - node(i, j)) / dy;
            w.set_u(i, j, val);
        }
    }
    for j in 0..=ny {
        for i in 0..nx {
            let val = -(node(i + 1, j) - node(i, j)) / dx;
            w.set_v(i, j, val);
        }
    }
    w.enforce_no_slip();
    w
}

/// Seeded random vortex blend: stream function built from the first
/// `modes × modes` Dirichlet modes, rescaled so the largest face speed is
/// `amplitude`. Exactly divergence-free and no-slip.
pub fn random_vortex(grid: &Grid, seed: u64, modes: usize, amplitude: f64) -> VectorField {
    assert!(modes >= 1, "need at least one mode");
    assert!(amplitude >= 0.0, "amplitude must be nonnegative");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = Vec::with_capacity(modes * modes);
    for k in 1..=modes {
        for l in 1..=modes {
            let c: f64 = rng.gen_range(-1.0..1.0);
            coeffs.push(c / (k * k + l * l) as f64);
        }
    }
    let (lx, ly) = (grid.lx(), grid.ly());
    let mut w = stream_function_velocity(grid, |x, y| {
        let mut s = 0.0;
        let mut idx = 0;
        for k in 1..=modes {
            for l in 1..=modes {
                s += coeffs[idx]
                    * (k as f64 * std::f64::consts::PI * x / lx).sin()
                    * (l as f64 * std::f64::consts::PI * y / ly).sin();
                idx += 1;
            }
        }
        s
    });
    let m = w.max_abs();
    if m > 0.0 {
        let scale = amplitude / m;
        for v in w.u_mut() {
            *v *= scale;
        }
        for v in w.v_mut() {
            *v *= scale;
        }
    }
    w
}

/// Hyperbolic-tangent profile value for an interface of width parameter
/// `eps` at signed distance `d` (the steady planar connection profile).
pub fn kink_profile(d: f64, eps: f64) -> f64 {
    (d / (std::f64::consts::SQRT_2 * eps)).tanh()
}

/// Vertical-interface preset: `φ = tanh((x − lx/2)/(√2 ε))`, constant in y,
/// with the matching boundary trace.
pub fn stripe_phase(grid: &Grid, eps: f64) -> ScalarField {
    let lx = grid.lx();
    let profile = BoundaryProfile::from_fn(grid, |x, _y| kink_profile(x - 0.5 * lx, eps));
    ScalarField::from_fn(
        grid.clone(),
        BoundaryCondition::DirichletProfile(profile),
        |x, _y| kink_profile(x - 0.5 * lx, eps),
    )
}

/// Circular-inclusion preset: a disk of the `+1` phase of radius
/// `lx·0.25` centered in the box inside a `−1` background; boundary trace
/// `−1`.
pub fn bubble_phase(grid: &Grid, eps: f64) -> ScalarField {
    let (lx, ly) = (grid.lx(), grid.ly());
    let r0 = 0.25 * lx.min(ly);
    ScalarField::from_fn(grid.clone(), BoundaryCondition::Dirichlet(-1.0), |x, y| {
        let r = ((x - 0.5 * lx).powi(2) + (y - 0.5 * ly).powi(2)).sqrt();
        kink_profile(r0 - r, eps)
    })
}

/// Seeded random phase preset with sup-norm `amplitude` (must stay within
/// the physical range `[−1, 1]`); zero boundary trace.
pub fn random_phase(grid: &Grid, amplitude: f64, seed: u64) -> ScalarField {
    assert!(
        (0.0..=1.0).contains(&amplitude),
        "random phase amplitude must lie in [0, 1]"
    );
    let mut f = band_limited_scalar(grid, seed, 6);
    for v in f.values_mut() {
        *v *= amplitude;
    }
    f
}

/// Centered Gaussian temperature preset `amp·exp(−(r/σ)²/2)` with
/// homogeneous Dirichlet boundary.
pub fn gaussian_theta(grid: &Grid, amp: f64, sigma: f64) -> ScalarField {
    assert!(sigma > 0.0, "gaussian width must be positive");
    let (lx, ly) = (grid.lx(), grid.ly());
    ScalarField::from_fn(grid.clone(), BoundaryCondition::HomogeneousDirichlet, |x, y| {
        let r2 = (x - 0.5 * lx).powi(2) + (y - 0.5 * ly).powi(2);
        amp * (-0.5 * r2 / (sigma * sigma)).exp()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops;

    #[test]
    fn fundamental_mode_peaks_at_center() {
        let g = Grid::unit(32, 32);
        let f = fundamental_mode(&g);
        assert!(f.max_abs() <= 1.0 + 1e-12);
        let mid = f.at(15, 15).max(f.at(16, 16));
        assert!(mid > 0.99, "center value {mid} should be near 1");
    }

    #[test]
    fn band_limited_fields_are_seeded_and_normalized() {
        let g = Grid::unit(24, 16);
        let a = band_limited_scalar(&g, 42, 5);
        let b = band_limited_scalar(&g, 42, 5);
        let c = band_limited_scalar(&g, 43, 5);
        assert_eq!(a.values(), b.values(), "same seed must reproduce bitwise");
        assert_ne!(a.values(), c.values(), "different seeds must differ");
        assert!((a.max_abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn stream_function_velocity_is_divergence_free_and_no_slip() {
        let g = Grid::new(20, 28, 1.5, 0.75);
        let w = random_vortex(&g, 9, 4, 2.0);
        assert!(w.satisfies_no_slip());
        assert!(ops::max_abs_divergence(&w) < 1e-11);
        assert!((w.max_abs() - 2.0).abs() < 1e-12, "amplitude normalization");
    }

    #[test]
    fn rigid_rotation_stream_function_gives_linear_velocity() {
        // ψ = (x² + y²)/2 → u = y, v = −x
        let g = Grid::unit(16, 16);
        let w = stream_function_velocity(&g, |x, y| 0.5 * (x * x + y * y));
        // interior faces carry the exact linear profile
        let dy = g.dy();
        let uval = w.u_at(4, 3);
        assert!((uval - (3.5 * dy)).abs() < 1e-13);
        // wall-normal faces were clamped to honor the no-slip tag
        assert!(w.satisfies_no_slip());
    }

    #[test]
    fn phase_presets_stay_in_physical_range() {
        let g = Grid::unit(32, 32);
        for f in [
            stripe_phase(&g, 0.1),
            bubble_phase(&g, 0.1),
            random_phase(&g, 0.4, 7),
        ] {
            assert!(f.max_abs() <= 1.0 + 1e-12, "phase preset out of range");
        }
        let s = stripe_phase(&g, 0.05);
        assert!(s.at(0, 5) < -0.9 && s.at(31, 5) > 0.9, "stripe orientation");
        // y-invariance of the stripe
        for j in 1..32 {
            assert_eq!(s.at(10, j), s.at(10, 0));
        }
    }

    #[test]
    fn gaussian_theta_amplitude_and_symmetry() {
        let g = Grid::unit(32, 32);
        let t = gaussian_theta(&g, 0.5, 0.1);
        assert!(t.max_abs() <= 0.5 + 1e-12);
        assert!((t.at(5, 9) - t.at(26, 22)).abs() < 1e-12, "central symmetry");
    }
}
