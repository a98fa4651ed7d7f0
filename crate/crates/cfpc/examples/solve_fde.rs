//! Getting started: solve a built-in nonlinear fractional benchmark problem
//! and compare against its exact solution.
//!
//! ```bash
//! cargo run --release --example solve_fde
//! ```

use cfpc::problem::{builtin_problem, OdeExample, TimeGrid};
use cfpc::verify::error_metrics;

fn main() -> cfpc::Result<()> {
    // Order 0.5, exact solution e^-t - 1 + t on [0, 1].
    let problem = builtin_problem(OdeExample::Ex1, 0.5)?;
    let grid = TimeGrid::new(1.0, 40)?;

    // O(N) fast solver with quadratic interpolation (third order in h).
    let traj = cfpc::solve_fpq(&problem, &grid)?;

    println!("   t        computed        exact           error");
    for j in (0..=grid.n_steps()).step_by(8) {
        let t = grid.node(j);
        let exact = problem.exact_at(t).unwrap();
        println!(
            "{t:6.3}  {:14.10}  {exact:14.10}  {:10.3e}",
            traj.value(j),
            (traj.value(j) - exact).abs()
        );
    }

    let report = error_metrics(&traj, |t| problem.exact_at(t).unwrap(), 0.5)?;
    println!(
        "\nE_max = {:.3e}   E_L2 = {:.3e}   (N = {})",
        report.e_max,
        report.e_l2,
        grid.n_steps()
    );
    Ok(())
}
