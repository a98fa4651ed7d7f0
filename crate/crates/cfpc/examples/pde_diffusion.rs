//! Time-fractional diffusion: central differences in space, fast quadratic
//! predictor-corrector in time, one tridiagonal solve per stage.
//!
//! Spatial refinement study at a fine fixed time step (second order in tau).
//!
//! ```bash
//! cargo run --release --example pde_diffusion
//! ```

use cfpc::pde::{builtin_pde_problem, pde_error_metrics, solve_pde, PdeExample, SpaceGrid};
use cfpc::problem::{Scheme, TimeGrid};

fn main() -> cfpc::Result<()> {
    // Exact solution (1 - t^4) x^2 (x - 1)^2, homogeneous boundaries.
    let problem = builtin_pde_problem(PdeExample::Ex5, 0.5)?;
    let time = TimeGrid::new(1.0, 2000)?;

    println!("{:<10} {:>12} {:>6}", "tau", "E^x_max", "roc");
    let mut prev: Option<cfpc::pde::PdeErrorReport> = None;
    for m in [10usize, 20, 40, 80, 160] {
        let space = SpaceGrid::new(0.0, 1.0, m)?;
        let field = solve_pde(&problem, &space, &time, Scheme::Fpq)?;
        let mut report = pde_error_metrics(&field, |x, t| problem.exact_at(x, t).unwrap(), 0.5)?;
        if let Some(p) = &prev {
            report = report.with_roc_from(p);
        }
        println!(
            "1/{m:<8} {:>12.3e} {:>6}",
            report.e_x_max,
            report
                .roc_x
                .map(|r| format!("{r:.2}"))
                .unwrap_or_else(|| "-".into())
        );
        prev = Some(report);
    }
    Ok(())
}
