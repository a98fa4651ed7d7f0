//! The quadrature weights and their independent oracle.
//!
//! Every closed-form weight is an integral of a Lagrange basis against the
//! exponential kernel; the verification module integrates those definitions
//! by adaptive quadrature, which is the ground truth the closed forms are
//! tested against.
//!
//! ```bash
//! cargo run --example kernel_weights_oracle
//! ```

use cfpc::problem::make_setup;
use cfpc::verify::quadrature_oracle;
use cfpc::weights::{linear_weights, quadratic_weights};

fn main() -> cfpc::Result<()> {
    let setup = make_setup(0.8, 1.0)?; // beta = 4
    let beta = setup.beta();
    let h = 1.0 / 40.0;
    let lag = 3usize;
    let t_target = (lag + 1) as f64 * h; // interval [0, h], target 4h

    let quad = quadratic_weights(&setup, h, lag)?;
    // Interior basis polynomials on [0, h] with nodes -h, 0, h.
    type Basis = Box<dyn Fn(f64) -> f64>;
    let bases: [(&str, f64, Basis); 3] = [
        (
            "back ",
            quad.back,
            Box::new(move |s: f64| s * (s - h) / (2.0 * h * h)),
        ),
        (
            "left ",
            quad.left,
            Box::new(move |s: f64| (h + s) * (h - s) / (h * h)),
        ),
        (
            "right",
            quad.right,
            Box::new(move |s: f64| (h + s) * s / (2.0 * h * h)),
        ),
    ];
    println!("quadratic weights at beta = {beta}, h = 1/40, lag = {lag}:");
    for (name, closed, basis) in &bases {
        let oracle = quadrature_oracle(
            &|s| basis(s) * (-beta * (t_target - s)).exp(),
            (0.0, h),
            1e-13,
        )?;
        println!(
            "  {name}: closed {closed:+.15e}  oracle {oracle:+.15e}  rel {:.1e}",
            (closed / oracle - 1.0).abs()
        );
    }

    // Partition of unity: the weights of one interval sum to its kernel mass.
    let lin = linear_weights(&setup, h, lag)?;
    let mass = quadrature_oracle(&|s| (-beta * (t_target - s)).exp(), (0.0, h), 1e-13)?;
    println!("\nlinear pair sum   {:+.15e}", lin.left + lin.right);
    println!("kernel mass       {mass:+.15e}");
    println!(
        "quadratic sum     {:+.15e}",
        quad.back + quad.left + quad.right
    );
    Ok(())
}
