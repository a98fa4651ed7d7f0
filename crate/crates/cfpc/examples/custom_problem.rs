//! Defining your own fractional Cauchy problem.
//!
//! Any `f(t, y)` works; attach an exact solution only if you want error
//! metrics. Here: a fractional relaxation equation with periodic forcing,
//! `D^a y = -y + sin(2 pi t)`, `y(0) = 1`, no closed-form solution.
//!
//! Two practical constraints on the data:
//!
//! * the exponential kernel carries no mass at zero lag, so a continuous
//!   solution requires compatible data, `f(0, y0) = 0`; otherwise the true
//!   solution of the underlying integral equation jumps at t = 0 and the
//!   grid spends its first steps resolving that layer;
//! * the single predict-correct pass is not an exact implicit solve, so the
//!   feedback weight `(1 - a)/M(a) * df/dy` has to stay below one in
//!   magnitude or the pass amplifies instead of contracting.
//!
//! `-y + cos(2 pi t)` with `y(0) = 1` satisfies both.
//!
//! ```bash
//! cargo run --release --example custom_problem
//! ```

use std::f64::consts::PI;

use cfpc::problem::{make_setup, OdeProblem, TimeGrid};

fn main() -> cfpc::Result<()> {
    let setup = make_setup(0.7, 1.0)?;
    let problem = OdeProblem::new(setup, 1.0, |t: f64, y: f64| -y + (2.0 * PI * t).cos());

    let grid = TimeGrid::new(2.0, 200)?;
    let fast = cfpc::solve_fpq(&problem, &grid)?;

    // Cross-check with the second-order solver: both should agree to the
    // schemes' accuracy even without an exact solution at hand.
    let second_order = cfpc::solve_fpl(&problem, &grid)?;
    let mut max_gap = 0.0f64;
    for (a, b) in fast.values.iter().zip(&second_order.values) {
        max_gap = max_gap.max((a - b).abs());
    }

    println!("   t      y (quadratic)   y (linear)");
    for j in (0..=grid.n_steps()).step_by(25) {
        println!(
            "{:5.2}  {:14.9}  {:14.9}",
            grid.node(j),
            fast.value(j),
            second_order.value(j)
        );
    }
    println!("\nlargest gap between the two orders: {max_gap:.3e}");
    println!(
        "auxiliary start-up values: y(h/4) = {:.9}, y(h/2) = {:.9}",
        fast.y_quarter, fast.y_half
    );
    Ok(())
}
