//! CPU-time scaling study: run the N = 10 * 2^k ladder for the standard and
//! fast quadratic solvers and fit log-log slopes (expected ~2 and ~1).
//!
//! ```bash
//! cargo run --release --example timing_slopes
//! ```

use cfpc::bench::{run_sweep, ExampleId, SweepConfig};
use cfpc::problem::Scheme;

fn main() {
    let mut config = SweepConfig::new(ExampleId::Ex1);
    config.schemes = vec![Scheme::Cpq, Scheme::Fpq];
    config.timing = true;
    config.k_range = (2, 10); // raise to (2, 12) for the full ladder

    let outcome = run_sweep(&config);
    if let Some((cell, e)) = &outcome.failure {
        eprintln!("timing sweep failed at {cell}: {e}");
        std::process::exit(2);
    }

    for fit in &outcome.timing_fits {
        println!("{}:", fit.scheme.label());
        println!("  {:>8} {:>12}", "N", "seconds");
        for (n, s) in &fit.points {
            println!("  {:>8.0} {:>12.6}", n, s);
        }
        println!("  fitted log-log slope: {:.3}\n", fit.slope);
    }
    println!("O(N^2) history summation vs O(N) recurrence, visible as slopes ~2 vs ~1.");
}
