//! The start-up cascade: quarter/half-step bootstrap giving third-order
//! accurate values at t = h and t = 2h, so the multistep extrapolations can
//! begin at full order.
//!
//! ```bash
//! cargo run --example startup_cascade
//! ```

use cfpc::problem::{builtin_problem, OdeExample};
use cfpc::startup::startup;

fn main() -> cfpc::Result<()> {
    let problem = builtin_problem(OdeExample::Ex2, 0.5)?;
    let exact = |t: f64| problem.exact_at(t).unwrap();

    println!(
        "{:<8} {:>12} {:>12} {:>12} {:>12}",
        "h", "|E(h/4)|", "|E(h/2)|", "|E(h)|", "|E(2h)|"
    );
    let mut prev: Option<f64> = None;
    for n in [10usize, 20, 40, 80] {
        let h = 1.0 / n as f64;
        let s = startup(&problem, h)?;
        let e1 = (s.y1 - exact(h)).abs();
        println!(
            "1/{n:<6} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}",
            (s.y_quarter - exact(0.25 * h)).abs(),
            (s.y_half - exact(0.5 * h)).abs(),
            e1,
            (s.y2 - exact(2.0 * h)).abs(),
        );
        if let Some(p) = prev {
            println!("{:>33} refinement ratio at t = h: {:.1}", "", p / e1);
        }
        prev = Some(e1);
    }
    println!("\nratios of 8 or more mean at least third-order start-up accuracy.");
    Ok(())
}
