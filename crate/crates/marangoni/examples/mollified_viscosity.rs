//! The mollified coefficient construction: outside five transition radii
//! of the occupied temperature range the coefficient is frozen at a
//! positive floor, leaving the physics on `|s| ≤ ‖θ₀‖_∞` untouched while
//! keeping global positivity. Prints the blend and its effect on the
//! explicit stability bounds.
//!
//! Usage: `cargo run --example mollified_viscosity`

use marangoni::coeff::{coefficient_bounds, mollify, CoefficientFn, PhysicalParams};
use marangoni::dynamics::dt_bounds;
use marangoni::grid::Grid;

fn main() {
    let base = CoefficientFn::Exponential { c0: 0.9, c1: 0.4 };
    let theta0_linf = 1.0;
    let m = mollify(&base, theta0_linf).expect("mollification exists");
    let r = m.r();

    println!("base viscosity 0.9*exp(0.4 s), occupied range |s| <= {theta0_linf}");
    println!("transition radius r = {r:.4}; identity up to 3r, floor beyond 5r");
    println!();
    println!("{:>8} {:>12} {:>12} {:>8}", "s", "base", "mollified", "blend");
    for s in [-3.0, -5.0 * r, -4.0 * r, -1.0, 0.0, 1.0, 4.0 * r, 5.0 * r, 3.0] {
        println!("{:>8.3} {:>12.6} {:>12.6} {:>8.3}", s, base.value(s), m.value(s), m.h(s));
    }
    println!();
    println!("floor  (global minimum) = {:.6}", m.lower());
    println!("ceiling (global maximum) = {:.6}", m.upper());

    let (lo, hi) = coefficient_bounds(&base, theta0_linf);
    println!("working bounds fed to the step-size rule: [{lo:.6}, {hi:.6}]");
    println!();

    let params = PhysicalParams {
        lambda0: 0.001,
        a: 1.0,
        b: 1.0,
        gamma: 0.5,
        eps: 0.2,
        ra: 1.0,
        ga: 0.0,
        g: 1.0,
        mu: base,
        kappa: CoefficientFn::Constant(0.05),
    };
    let grid = Grid::unit(32, 32);
    println!("resulting step bounds on a 32x32 unit grid:");
    for (name, bound) in dt_bounds(&params, &grid, theta0_linf) {
        println!("  {name:<16} dt <= {bound:.6e}");
    }
}
