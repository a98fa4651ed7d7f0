//! Fast-memory vs full-history solvers: identical trajectories, very
//! different cost. The standard schemes re-walk all past intervals each step
//! (O(N^2) total); the fast ones advance a running history integral in O(1)
//! per step.
//!
//! ```bash
//! cargo run --release --example fast_vs_standard
//! ```

use std::time::Instant;

use cfpc::problem::{builtin_problem, OdeExample, TimeGrid};

fn main() -> cfpc::Result<()> {
    let problem = builtin_problem(OdeExample::Ex2, 0.5)?;

    for n in [640usize, 2560, 10240] {
        let grid = TimeGrid::new(1.0, n)?;

        let t0 = Instant::now();
        let standard = cfpc::solve_cpq(&problem, &grid)?;
        let t_standard = t0.elapsed().as_secs_f64();

        let t0 = Instant::now();
        let fast = cfpc::solve_fpq(&problem, &grid)?;
        let t_fast = t0.elapsed().as_secs_f64();

        let scale = standard.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let gap = standard
            .values
            .iter()
            .zip(&fast.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);

        println!(
            "N = {n:>6}: standard {t_standard:>9.4} s, fast {t_fast:>9.5} s ({:>6.1}x), \
             node-wise agreement {:.1e}",
            t_standard / t_fast,
            gap / scale
        );
    }
    println!("\nthe two histories are the same sum, reassociated; agreement is roundoff-level.");
    Ok(())
}
