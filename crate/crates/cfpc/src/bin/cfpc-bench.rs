//! Benchmark harness: error tables, convergence rates and timing ladders for
//! the built-in examples, emitted as CSV.

use std::process::ExitCode;

use cfpc::bench::{
    parse_fraction, parse_k_range, parse_ladder, run_sweep, write_csv, ExampleId, SweepConfig,
};
use cfpc::error::Error;

const USAGE: &str = "\
Usage: cfpc-bench --example {ex1|ex2|ex4|ex5} [options]

Options:
  --example <id>          built-in problem: ex1, ex2 (scalar), ex4, ex5 (PDE)
  --scheme <list>         comma list of cpl,cpq,fpl,fpq
                          (default: all four; PDE: cpq,fpq)
  --alpha <list>          comma list of fractional orders in (0,1), default 0.5
  --h <frac>              single time step, e.g. 1/40 or 0.025
  --h-levels <a..b>       halving ladder, e.g. 1/10..1/320
  --tau <frac>            single spatial step (PDE)
  --tau-levels <a..b>     spatial halving ladder (PDE)
  --couple <rule>         tau=h^3/2, h=tau^2/3 or none
                          (default: tau=h^3/2 for PDE examples, none otherwise;
                          passing --tau/--tau-levels without --couple uses none)
  --timing                run the N = 10*2^k CPU-time ladder instead of tables
  --k <lo..hi>            timing ladder range, default 2..12
  --max-k <int>           hard cap on k (default 12; standard schemes get slow)
  --seed-exact-startup    PDE only: take start-up levels from the exact solution
  --out <path.csv>        write CSV here instead of stdout
  --help                  this text

Exit status: 0 on success, 1 on a usage error, 2 on a solver failure
(partial results are still flushed, the failing cell carries empty metrics).";

struct CliOptions {
    config: SweepConfig,
    out: Option<String>,
}

fn parse_args(args: &[String]) -> Result<CliOptions, Error> {
    let mut example: Option<ExampleId> = None;
    let mut schemes: Option<Vec<cfpc::Scheme>> = None;
    let mut alphas: Option<Vec<f64>> = None;
    let mut h_values: Option<Vec<f64>> = None;
    let mut tau_values: Option<Vec<f64>> = None;
    let mut couple: Option<cfpc::bench::Couple> = None;
    let mut timing = false;
    let mut k_range: Option<(u32, u32)> = None;
    let mut max_k: Option<u32> = None;
    let mut seed_exact = false;
    let mut out = None;

    let mut iter = args.iter();
    let value_of = |flag: &str, iter: &mut std::slice::Iter<String>| -> Result<String, Error> {
        iter.next()
            .cloned()
            .ok_or_else(|| Error::Usage(format!("{flag} needs a value")))
    };
    while let Some(arg) = iter.next() {
        match arg.as_str() {
            "--example" => example = Some(value_of("--example", &mut iter)?.parse()?),
            "--scheme" => {
                let list = value_of("--scheme", &mut iter)?;
                schemes = Some(
                    list.split(',')
                        .map(|s| s.trim().parse())
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            "--alpha" => {
                let list = value_of("--alpha", &mut iter)?;
                alphas = Some(
                    list.split(',')
                        .map(|s| {
                            s.trim()
                                .parse::<f64>()
                                .map_err(|_| Error::Usage(format!("bad alpha '{s}'")))
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            "--h" => h_values = Some(vec![parse_fraction(&value_of("--h", &mut iter)?)?]),
            "--h-levels" => h_values = Some(parse_ladder(&value_of("--h-levels", &mut iter)?)?),
            "--tau" => tau_values = Some(vec![parse_fraction(&value_of("--tau", &mut iter)?)?]),
            "--tau-levels" => {
                tau_values = Some(parse_ladder(&value_of("--tau-levels", &mut iter)?)?)
            }
            "--couple" => couple = Some(value_of("--couple", &mut iter)?.parse()?),
            "--timing" => timing = true,
            "--k" => k_range = Some(parse_k_range(&value_of("--k", &mut iter)?)?),
            "--max-k" => {
                max_k = Some(
                    value_of("--max-k", &mut iter)?
                        .parse()
                        .map_err(|_| Error::Usage("bad --max-k value".into()))?,
                )
            }
            "--seed-exact-startup" => seed_exact = true,
            "--out" => out = Some(value_of("--out", &mut iter)?),
            "--help" | "-h" => return Err(Error::Usage("help".into())),
            other => return Err(Error::Usage(format!("unknown flag '{other}'"))),
        }
    }

    let example = example.ok_or_else(|| Error::Usage("--example is required".into()))?;
    let mut config = SweepConfig::new(example);
    if let Some(s) = schemes {
        config.schemes = s;
    }
    if let Some(a) = alphas {
        config.alphas = a;
    }
    if let Some(h) = h_values {
        config.h_values = h;
    }
    if let Some(tau) = tau_values {
        config.tau_values = tau;
        // A fixed spatial step without an explicit rule means no coupling.
        if couple.is_none() {
            couple = Some(cfpc::bench::Couple::None);
        }
    }
    if let Some(c) = couple {
        config.couple = c;
    }
    config.timing = timing;
    if let Some(k) = k_range {
        config.k_range = k;
    }
    if let Some(k) = max_k {
        config.max_k = k;
    }
    config.seed_exact_startup = seed_exact;
    Ok(CliOptions { config, out })
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let options = match parse_args(&args) {
        Ok(options) => options,
        Err(e) => {
            if matches!(&e, Error::Usage(msg) if msg == "help") {
                println!("{USAGE}");
                return ExitCode::SUCCESS;
            }
            eprintln!("{e}\n\n{USAGE}");
            return ExitCode::from(1);
        }
    };

    let outcome = run_sweep(&options.config);
    if let Some((cell, Error::Usage(msg))) = &outcome.failure {
        eprintln!("usage error ({cell}): {msg}\n\n{USAGE}");
        return ExitCode::from(1);
    }

    let csv = write_csv(&outcome.records);
    match &options.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &csv) {
                eprintln!("cannot write {path}: {e}");
                return ExitCode::from(2);
            }
        }
        None => print!("{csv}"),
    }

    for fit in &outcome.timing_fits {
        eprintln!("# timing {}", fit.scheme.label());
        for (n, seconds) in &fit.points {
            eprintln!(
                "#   log N = {:.4}  log seconds = {:.4}",
                n.ln(),
                seconds.ln()
            );
        }
        eprintln!("# fitted log-log slope: {:.3}", fit.slope);
    }

    match outcome.failure {
        None => ExitCode::SUCCESS,
        Some((cell, e)) => {
            eprintln!("solver failure at cell {cell}: {e}");
            ExitCode::from(2)
        }
    }
}
