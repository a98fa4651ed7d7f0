//! Convergence-table reproduction: sweep a halving ladder of step sizes and
//! print maximum/L2 errors with observed rates, like the benchmark tables.
//!
//! ```bash
//! cargo run --release --example convergence_table
//! ```

use cfpc::bench::{parse_ladder, run_sweep, ExampleId, SweepConfig};
use cfpc::problem::Scheme;

fn main() {
    let mut config = SweepConfig::new(ExampleId::Ex1);
    config.schemes = vec![Scheme::Fpl, Scheme::Fpq];
    config.alphas = vec![0.2, 0.5, 0.8];
    config.h_values = parse_ladder("1/10..1/320").unwrap();

    let outcome = run_sweep(&config);
    if let Some((cell, e)) = &outcome.failure {
        eprintln!("sweep failed at {cell}: {e}");
        std::process::exit(2);
    }

    let mut current = (String::new(), f64::NAN);
    println!(
        "{:<8} {:>10} {:>6} {:>10} {:>6}",
        "h", "E_max", "roc", "E_L2", "roc"
    );
    for r in &outcome.records {
        let header = (r.scheme.label().to_string(), r.alpha);
        if header != current {
            println!("-- {} alpha = {}", header.0, header.1);
            current = header;
        }
        let fmt_roc = |v: Option<f64>| v.map(|r| format!("{r:.2}")).unwrap_or_else(|| "-".into());
        println!(
            "1/{:<6} {:>10.2e} {:>6} {:>10.2e} {:>6}",
            (1.0 / r.h).round() as u64,
            r.e_max.unwrap(),
            fmt_roc(r.roc_max),
            r.e_l2.unwrap(),
            fmt_roc(r.roc_l2),
        );
    }
    println!("\nsecond order for the linear scheme, third order for the quadratic one.");
}
