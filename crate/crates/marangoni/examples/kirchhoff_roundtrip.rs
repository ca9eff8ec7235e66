//! The temperature transform that linearizes `∇·(κ(θ)∇θ)`: closed-form
//! antiderivatives for the three conductivity families, the guaranteed
//! inverse, and the derivative identity `dθ/dϑ = 1/κ(θ)`. Prints the
//! worst round-trip error over a wide interval for each family.
//!
//! Usage: `cargo run --example kirchhoff_roundtrip`

use marangoni::coeff::{inverse_kirchhoff, kirchhoff, CoefficientFn};

fn main() {
    let families = [
        ("constant 0.7", CoefficientFn::Constant(0.7)),
        ("exponential 0.5*exp(-0.2 s)", CoefficientFn::Exponential { c0: 0.5, c1: -0.2 }),
        ("quadratic 0.3 + 0.05 s^2", CoefficientFn::Quadratic { c0: 0.3, c1: 0.05 }),
    ];

    println!("{:<30} {:>14} {:>14}", "family", "max |back-theta|", "max slope err");
    for (label, kappa) in &families {
        let mut worst_rt = 0.0_f64;
        for k in 0..=800 {
            let theta = -10.0 + 0.025 * k as f64;
            let chi = kirchhoff(theta, kappa);
            let back = inverse_kirchhoff(chi, kappa).expect("inverse exists");
            worst_rt = worst_rt.max((back - theta).abs());
        }

        // Centered difference of the inverse against 1/kappa.
        let h = 1e-5;
        let mut worst_slope = 0.0_f64;
        for &vt in &[-2.0, -0.5, 0.0, 0.8, 2.0] {
            let up = inverse_kirchhoff(vt + h, kappa).expect("inverse exists");
            let dn = inverse_kirchhoff(vt - h, kappa).expect("inverse exists");
            let theta = inverse_kirchhoff(vt, kappa).expect("inverse exists");
            let slope = (up - dn) / (2.0 * h);
            worst_slope = worst_slope.max((slope - 1.0 / kappa.value(theta)).abs());
        }
        println!("{label:<30} {worst_rt:>14.3e} {worst_slope:>14.3e}");
    }
    println!();
    println!("a sample trip for the quadratic family:");
    let kappa = &families[2].1;
    for theta in [-3.0, -1.0, 0.0, 2.0] {
        let chi = kirchhoff(theta, kappa);
        let back = inverse_kirchhoff(chi, kappa).expect("inverse exists");
        println!("  theta = {theta:>5.1}  ->  transformed {chi:>9.4}  ->  back {back:>18.15}");
    }
}
