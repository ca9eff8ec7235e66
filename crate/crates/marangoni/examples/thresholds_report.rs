//! Admissibility thresholds across coefficient laws: estimates the
//! embedding constants once, then reports how the two temperature
//! sup-norm thresholds, the gradient weight, and the coefficient bounds
//! react to the viscosity/conductivity families and to the sensitivity
//! of surface tension to temperature.
//!
//! Usage: `cargo run --example thresholds_report`

use marangoni::coeff::{CoefficientFn, PhysicalParams};
use marangoni::diagnostics::{compute_thresholds, estimate_constants};
use marangoni::grid::Grid;

fn main() {
    let grid = Grid::unit(24, 24);
    let consts = estimate_constants(&grid, 100, 1);
    println!(
        "estimated constants on a 24x24 unit grid: c1 = {:.3}, c2 = {:.3}, c3 = {:.3}, c_p = {:.3}",
        consts.c1, consts.c2, consts.c3, consts.c_p
    );
    println!();

    let base = PhysicalParams {
        lambda0: 0.001,
        a: 2.0,
        b: 0.5,
        gamma: 0.3,
        eps: 0.2,
        ra: 1.0,
        ga: 0.0,
        g: 1.0,
        mu: CoefficientFn::Constant(0.05),
        kappa: CoefficientFn::Constant(0.05),
    };

    let cases: Vec<(&str, PhysicalParams)> = vec![
        ("constant mu, constant kappa", base.clone()),
        (
            "constant mu, quadratic kappa",
            PhysicalParams { kappa: CoefficientFn::Quadratic { c0: 0.05, c1: 0.02 }, ..base.clone() },
        ),
        (
            "exponential mu, quadratic kappa",
            PhysicalParams {
                mu: CoefficientFn::Exponential { c0: 0.05, c1: -0.3 },
                kappa: CoefficientFn::Quadratic { c0: 0.05, c1: 0.02 },
                ..base.clone()
            },
        ),
        ("stronger tension sensitivity (b = 2)", PhysicalParams { b: 2.0, ..base.clone() }),
    ];

    println!(
        "{:<38} {:>8} {:>8} {:>10} {:>10} {:>10}",
        "setting", "theta1", "theta2", "zeta", "mu range", "kap range"
    );
    for (label, params) in cases {
        let thr = compute_thresholds(&params, consts, 1.0);
        println!(
            "{:<38} {:>8.4} {:>8.4} {:>10.3e} {:>10} {:>10}",
            label,
            thr.theta1,
            thr.theta2,
            thr.zeta,
            format!("{:.3}-{:.3}", thr.mu_lo, thr.mu_hi),
            format!("{:.3}-{:.3}", thr.kap_lo, thr.kap_hi),
        );
    }
    println!();
    println!("theta2 <= theta1 always; a variable conductivity or a larger |b| tightens them.");
}
