//! Time-fractional advection-diffusion with coupled steps tau = h^(3/2),
//! so the h^3 temporal error dominates and the observed rate is ~3.
//!
//! ```bash
//! cargo run --release --example pde_advection_diffusion
//! ```

use cfpc::pde::{builtin_pde_problem, pde_error_metrics, solve_pde, PdeExample, SpaceGrid};
use cfpc::problem::{Scheme, TimeGrid};

fn main() -> cfpc::Result<()> {
    // Exact solution cos(3 pi x) (e^-t - 1 + t + t sin(pi t)).
    let problem = builtin_pde_problem(PdeExample::Ex4, 0.5)?;

    println!("{:<8} {:<10} {:>12} {:>6}", "h", "tau", "E^t_max", "roc");
    let mut prev: Option<cfpc::pde::PdeErrorReport> = None;
    for n in [10usize, 20, 40, 80] {
        let time = TimeGrid::new(1.0, n)?;
        let m_cells = (time.h().powf(1.5).recip()).round() as usize;
        let space = SpaceGrid::new(0.0, 1.0, m_cells)?;
        let field = solve_pde(&problem, &space, &time, Scheme::Fpq)?;
        let mut report = pde_error_metrics(&field, |x, t| problem.exact_at(x, t).unwrap(), 0.5)?;
        if let Some(p) = &prev {
            report = report.with_roc_from(p);
        }
        println!(
            "1/{n:<6} 1/{m_cells:<8} {:>12.3e} {:>6}",
            report.e_t_max,
            report
                .roc_t
                .map(|r| format!("{r:.2}"))
                .unwrap_or_else(|| "-".into())
        );
        prev = Some(report);
    }
    println!(
        "\nboundary columns stay exact; interior rows solve two tridiagonal systems per step."
    );
    Ok(())
}
