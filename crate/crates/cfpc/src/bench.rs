//! Benchmark sweeps: error tables, CSV emission and timing ladders.
//!
//! A sweep runs one built-in example over scheme/order/step combinations and
//! emits one record per cell, with observed convergence rates filled in
//! against the previous halved-step cell of the same lane. Timing sweeps
//! instead run the `N = 10 * 2^k` ladder and fit the log-log slope of CPU
//! time against `N` (the fit skips `k < 2` by default; the first ladder rungs
//! are dominated by warm-up noise).

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::fast::{solve_fpl, solve_fpq};
use crate::pde::{builtin_pde_problem, pde_error_metrics, solve_pde_with, PdeExample, SpaceGrid};
use crate::problem::{builtin_problem, OdeExample, OdeProblem, Scheme, TimeGrid, Trajectory};
use crate::solver::{solve_cpl, solve_cpq};
use crate::verify::error_metrics;

/// Dispatches to the scalar solver selected by `scheme`.
pub fn solve_ode(problem: &OdeProblem, grid: &TimeGrid, scheme: Scheme) -> Result<Trajectory> {
    match scheme {
        Scheme::Cpl => solve_cpl(problem, grid),
        Scheme::Cpq => solve_cpq(problem, grid),
        Scheme::Fpl => solve_fpl(problem, grid),
        Scheme::Fpq => solve_fpq(problem, grid),
    }
}

/// All built-in benchmark problems addressable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleId {
    Ex1,
    Ex2,
    Ex4,
    Ex5,
}

impl ExampleId {
    pub fn flag(&self) -> &'static str {
        match self {
            ExampleId::Ex1 => "ex1",
            ExampleId::Ex2 => "ex2",
            ExampleId::Ex4 => "ex4",
            ExampleId::Ex5 => "ex5",
        }
    }

    pub fn is_pde(&self) -> bool {
        matches!(self, ExampleId::Ex4 | ExampleId::Ex5)
    }

    fn ode(&self) -> Option<OdeExample> {
        match self {
            ExampleId::Ex1 => Some(OdeExample::Ex1),
            ExampleId::Ex2 => Some(OdeExample::Ex2),
            _ => None,
        }
    }

    fn pde(&self) -> Option<PdeExample> {
        match self {
            ExampleId::Ex4 => Some(PdeExample::Ex4),
            ExampleId::Ex5 => Some(PdeExample::Ex5),
            _ => None,
        }
    }
}

impl std::str::FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex1" => Ok(ExampleId::Ex1),
            "ex2" => Ok(ExampleId::Ex2),
            "ex4" => Ok(ExampleId::Ex4),
            "ex5" => Ok(ExampleId::Ex5),
            other => Err(Error::Usage(format!(
                "unknown example '{other}' (expected ex1, ex2, ex4 or ex5)"
            ))),
        }
    }
}

/// Step-size coupling used by the PDE convergence tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Couple {
    #[default]
    None,
    /// `tau = h^(3/2)` (temporal-order studies).
    TauFromH,
    /// `h = tau^(2/3)` (spatial-order studies).
    HFromTau,
}

impl std::str::FromStr for Couple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Couple::None),
            "tau=h^3/2" => Ok(Couple::TauFromH),
            "h=tau^2/3" => Ok(Couple::HFromTau),
            other => Err(Error::Usage(format!(
                "unknown coupling '{other}' (expected tau=h^3/2, h=tau^2/3 or none)"
            ))),
        }
    }
}

/// One sweep cell: grid parameters, error metrics and wall-clock time.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub example: ExampleId,
    pub scheme: Scheme,
    pub alpha: f64,
    pub h: f64,
    pub tau: Option<f64>,
    pub e_max: Option<f64>,
    pub e_l2: Option<f64>,
    pub e_x_max: Option<f64>,
    pub e_t_max: Option<f64>,
    pub roc_max: Option<f64>,
    pub roc_l2: Option<f64>,
    pub cpu_seconds: f64,
}

/// Exact CSV column set, in order.
pub const CSV_HEADER: &str =
    "example,scheme,alpha,h,tau,e_max,e_l2,e_x_max,e_t_max,roc_max,roc_l2,cpu_seconds";

fn fmt_f17(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_sci6(v: f64) -> String {
    format!("{v:.5e}")
}

fn fmt_opt(v: Option<f64>, f: impl Fn(f64) -> String) -> String {
    v.map(f).unwrap_or_default()
}

impl BenchRecord {
    pub fn to_csv_line(&self) -> String {
        let mut line = String::new();
        let _ = write!(
            line,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.example.flag(),
            self.scheme.flag(),
            self.alpha,
            fmt_f17(self.h),
            fmt_opt(self.tau, fmt_f17),
            fmt_opt(self.e_max, fmt_sci6),
            fmt_opt(self.e_l2, fmt_sci6),
            fmt_opt(self.e_x_max, fmt_sci6),
            fmt_opt(self.e_t_max, fmt_sci6),
            fmt_opt(self.roc_max, |r| format!("{r:.4}")),
            fmt_opt(self.roc_l2, |r| format!("{r:.4}")),
            self.cpu_seconds
        );
        line
    }

    pub fn from_csv_line(line: &str) -> Result<BenchRecord> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 12 {
            return Err(Error::Usage(format!(
                "CSV record has {} fields, expected 12",
                fields.len()
            )));
        }
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse::<f64>()
                    .map(Some)
                    .map_err(|e| Error::Usage(format!("bad CSV number '{s}': {e}")))
            }
        };
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| Error::Usage(format!("bad CSV number '{s}': {e}")))
        };
        Ok(BenchRecord {
            example: fields[0].parse()?,
            scheme: fields[1].parse()?,
            alpha: num(fields[2])?,
            h: num(fields[3])?,
            tau: opt(fields[4])?,
            e_max: opt(fields[5])?,
            e_l2: opt(fields[6])?,
            e_x_max: opt(fields[7])?,
            e_t_max: opt(fields[8])?,
            roc_max: opt(fields[9])?,
            roc_l2: opt(fields[10])?,
            cpu_seconds: num(fields[11])?,
        })
    }
}

/// Serializes records under the fixed header.
pub fn write_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

/// Parses text produced by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<BenchRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == CSV_HEADER => {}
        other => {
            return Err(Error::Usage(format!(
                "missing or unexpected CSV header: {other:?}"
            )))
        }
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(BenchRecord::from_csv_line)
        .collect()
}

/// Parses "1/NUM" (exact table notation) or a plain decimal.
pub fn parse_fraction(s: &str) -> Result<f64> {
    if let Some(denym) = s.strip_prefix("1/") {
        let den: f64 = denym
            .parse()
            .map_err(|_| Error::Usage(format!("bad fraction '{s}'")))?;
        if !(den > 0.0) {
            return Err(Error::Usage(format!("bad fraction '{s}'")));
        }
        return Ok(1.0 / den);
    }
    let v: f64 = s
        .parse()
        .map_err(|_| Error::Usage(format!("bad step value '{s}'")))?;
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Usage(format!(
            "step value must be positive, got '{s}'"
        )));
    }
    Ok(v)
}

/// Parses "start..end" into the halving ladder start, start/2, ..., end.
pub fn parse_ladder(s: &str) -> Result<Vec<f64>> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::Usage(format!("ladder '{s}' must look like 1/10..1/320")))?;
    let start = parse_fraction(lo)?;
    let end = parse_fraction(hi)?;
    if end > start {
        return Err(Error::Usage(format!(
            "ladder '{s}' must go from coarse to fine"
        )));
    }
    let mut values = vec![start];
    let mut current = start;
    while current > end * 1.5 {
        current *= 0.5;
        values.push(current);
        if values.len() > 64 {
            return Err(Error::Usage(format!("ladder '{s}' is too long")));
        }
    }
    if (current - end).abs() > 1e-9 * end {
        return Err(Error::Usage(format!(
            "ladder end {hi} is not reached from {lo} by halving"
        )));
    }
    Ok(values)
}

/// Parses "lo..hi" (inclusive) into a k-range for the timing ladder.
pub fn parse_k_range(s: &str) -> Result<(u32, u32)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::Usage(format!("k range '{s}' must look like 0..12")))?;
    let lo: u32 = lo
        .parse()
        .map_err(|_| Error::Usage(format!("bad k range '{s}'")))?;
    let hi: u32 = hi
        .parse()
        .map_err(|_| Error::Usage(format!("bad k range '{s}'")))?;
    if hi < lo || hi > 20 {
        return Err(Error::Usage(format!("bad k range '{s}'")));
    }
    Ok((lo, hi))
}

/// Full description of one sweep.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub example: ExampleId,
    pub schemes: Vec<Scheme>,
    pub alphas: Vec<f64>,
    pub h_values: Vec<f64>,
    pub tau_values: Vec<f64>,
    pub couple: Couple,
    pub timing: bool,
    pub k_range: (u32, u32),
    pub max_k: u32,
    pub seed_exact_startup: bool,
}

impl SweepConfig {
    /// Sensible defaults for the given example; callers override fields.
    pub fn new(example: ExampleId) -> Self {
        let (schemes, h_values, couple) = if example.is_pde() {
            (
                vec![Scheme::Cpq, Scheme::Fpq],
                parse_ladder("1/10..1/160").unwrap(),
                Couple::TauFromH,
            )
        } else {
            (
                Scheme::ALL.to_vec(),
                parse_ladder("1/10..1/320").unwrap(),
                Couple::None,
            )
        };
        Self {
            example,
            schemes,
            alphas: vec![0.5],
            h_values,
            tau_values: Vec::new(),
            couple,
            timing: false,
            k_range: (2, 12),
            max_k: 12,
            seed_exact_startup: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() || self.alphas.is_empty() {
            return Err(Error::Usage("empty scheme or alpha list".into()));
        }
        for &alpha in &self.alphas {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Error::Usage(format!("alpha {alpha} outside (0,1)")));
            }
        }
        if self.example.is_pde() {
            if self.timing {
                return Err(Error::Usage(
                    "timing sweeps run on the scalar examples (ex1, ex2)".into(),
                ));
            }
            if let Some(s) = self.schemes.iter().find(|s| !s.is_quadratic()) {
                return Err(Error::Usage(format!(
                    "{} does not apply to PDE examples (use cpq or fpq)",
                    s.flag()
                )));
            }
            if self.couple == Couple::None && self.tau_values.is_empty() {
                return Err(Error::Usage(
                    "PDE sweeps need --tau/--tau-levels or a coupling rule".into(),
                ));
            }
        } else if self.seed_exact_startup {
            return Err(Error::Usage(
                "--seed-exact-startup applies to PDE examples only".into(),
            ));
        } else if !self.tau_values.is_empty() || self.couple != Couple::None {
            return Err(Error::Usage(
                "spatial steps apply to PDE examples only".into(),
            ));
        }
        Ok(())
    }
}

/// Fitted timing ladder of one scheme.
#[derive(Debug, Clone)]
pub struct TimingFit {
    pub scheme: Scheme,
    /// `(N, seconds)` pairs, every ladder rung that ran.
    pub points: Vec<(f64, f64)>,
    /// Least-squares slope of `log(seconds)` vs `log(N)` over the rungs with
    /// `k >= 2`.
    pub slope: f64,
}

/// Everything a sweep produced. `failure` marks the first failing cell; the
/// records gathered before it (plus a marker record with empty metrics) are
/// still present so partial results can be flushed.
#[derive(Debug)]
pub struct SweepOutcome {
    pub records: Vec<BenchRecord>,
    pub timing_fits: Vec<TimingFit>,
    pub failure: Option<(String, Error)>,
}

/// Least-squares slope of `log(seconds)` against `log(N)`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 4 {
        return Err(Error::Domain(format!(
            "slope fit needs at least 4 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(n, s)| !(n > 0.0 && s > 0.0)) {
        return Err(Error::Domain("slope fit needs positive inputs".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, s)| (n.ln(), s.ln())).collect();
    let count = logs.len() as f64;
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / count;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in logs {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    if var == 0.0 {
        return Err(Error::Domain("slope fit needs distinct N values".into()));
    }
    Ok(cov / var)
}

/// Wall-clock measurement: one warm-up pass, then timed passes repeated until
/// at least ~25 ms have elapsed (so small solves are not pure timer noise);
/// reports seconds per pass.
fn measure<F: FnMut() -> Result<()>>(mut run: F) -> Result<f64> {
    run()?;
    let min_seconds = 0.025;
    let mut reps: u64 = 1;
    loop {
        let start = Instant::now();
        for _ in 0..reps {
            run()?;
        }
        let elapsed = start.elapsed().as_secs_f64();
        if elapsed >= min_seconds {
            return Ok((elapsed / reps as f64).max(1e-12));
        }
        let grow = (min_seconds / elapsed.max(1e-9)).ceil() as u64;
        reps = reps.saturating_mul(grow.clamp(2, 64)).min(10_000_000);
    }
}

fn ode_grid(h: f64) -> Result<TimeGrid> {
    let n = (1.0 / h).round() as usize;
    if n < 4 {
        return Err(Error::Usage(format!("step {h} leaves fewer than 4 steps")));
    }
    TimeGrid::new(1.0, n)
}

fn run_ode_cell(
    example: OdeExample,
    id: ExampleId,
    scheme: Scheme,
    alpha: f64,
    h: f64,
) -> Result<BenchRecord> {
    let problem = builtin_problem(example, alpha)?;
    let grid = ode_grid(h)?;
    let start = Instant::now();
    let traj = solve_ode(&problem, &grid, scheme)?;
    let cpu_seconds = start.elapsed().as_secs_f64().max(1e-12);
    let report = error_metrics(&traj, |t| problem.exact_at(t).unwrap(), alpha)?;
    Ok(BenchRecord {
        example: id,
        scheme,
        alpha,
        h: grid.h(),
        tau: None,
        e_max: Some(report.e_max),
        e_l2: Some(report.e_l2),
        e_x_max: None,
        e_t_max: None,
        roc_max: None,
        roc_l2: None,
        cpu_seconds,
    })
}

fn run_pde_cell(
    example: PdeExample,
    id: ExampleId,
    scheme: Scheme,
    alpha: f64,
    h: f64,
    tau_target: f64,
    seed_exact: bool,
) -> Result<BenchRecord> {
    let problem = builtin_pde_problem(example, alpha)?;
    let n = (1.0 / h).round().max(4.0) as usize;
    let time = TimeGrid::new(1.0, n)?;
    let m = (1.0 / tau_target).round().max(3.0) as usize;
    let space = SpaceGrid::new(0.0, 1.0, m)?;
    let start = Instant::now();
    let field = solve_pde_with(&problem, &space, &time, scheme, seed_exact)?;
    let cpu_seconds = start.elapsed().as_secs_f64().max(1e-12);
    let report = pde_error_metrics(&field, |x, t| problem.exact_at(x, t).unwrap(), alpha)?;
    Ok(BenchRecord {
        example: id,
        scheme,
        alpha,
        h: time.h(),
        tau: Some(space.tau()),
        e_max: None,
        e_l2: None,
        e_x_max: Some(report.e_x_max),
        e_t_max: Some(report.e_t_max),
        roc_max: None,
        roc_l2: None,
        cpu_seconds,
    })
}

fn marker_record(
    config: &SweepConfig,
    scheme: Scheme,
    alpha: f64,
    h: f64,
    tau: Option<f64>,
) -> BenchRecord {
    BenchRecord {
        example: config.example,
        scheme,
        alpha,
        h,
        tau,
        e_max: None,
        e_l2: None,
        e_x_max: None,
        e_t_max: None,
        roc_max: None,
        roc_l2: None,
        cpu_seconds: 1e-12,
    }
}

/// Runs a whole sweep. Solver failures abort the remaining cells but leave
/// the completed records (and a metric-less marker for the failing cell) in
/// the outcome.
pub fn run_sweep(config: &SweepConfig) -> SweepOutcome {
    let mut outcome = SweepOutcome {
        records: Vec::new(),
        timing_fits: Vec::new(),
        failure: None,
    };
    if let Err(e) = config.validate() {
        outcome.failure = Some(("configuration".into(), e));
        return outcome;
    }
    if config.timing {
        run_timing_sweep(config, &mut outcome);
    } else if config.example.is_pde() {
        run_pde_sweep(config, &mut outcome);
    } else {
        run_ode_sweep(config, &mut outcome);
    }
    outcome
}

fn run_ode_sweep(config: &SweepConfig, outcome: &mut SweepOutcome) {
    let example = config.example.ode().unwrap();
    for &alpha in &config.alphas {
        for &scheme in &config.schemes {
            let mut previous: Option<BenchRecord> = None;
            for &h in &config.h_values {
                match run_ode_cell(example, config.example, scheme, alpha, h) {
                    Ok(mut record) => {
                        if let Some(prev) = &previous {
                            record.roc_max = crate::verify::rate_of_convergence(
                                prev.e_max.unwrap(),
                                record.e_max.unwrap(),
                                prev.h,
                                record.h,
                            );
                            record.roc_l2 = crate::verify::rate_of_convergence(
                                prev.e_l2.unwrap(),
                                record.e_l2.unwrap(),
                                prev.h,
                                record.h,
                            );
                        }
                        previous = Some(record.clone());
                        outcome.records.push(record);
                    }
                    Err(e) => {
                        outcome
                            .records
                            .push(marker_record(config, scheme, alpha, h, None));
                        outcome.failure =
                            Some((format!("{} alpha={alpha} h={h}", scheme.flag()), e));
                        return;
                    }
                }
            }
        }
    }
}

fn pde_cells(config: &SweepConfig) -> Vec<(f64, f64)> {
    match config.couple {
        Couple::TauFromH => config.h_values.iter().map(|&h| (h, h.powf(1.5))).collect(),
        Couple::HFromTau => {
            let taus = if config.tau_values.is_empty() {
                config.h_values.clone()
            } else {
                config.tau_values.clone()
            };
            taus.iter().map(|&tau| (tau.powf(2.0 / 3.0), tau)).collect()
        }
        Couple::None => {
            let mut cells = Vec::new();
            for &h in &config.h_values {
                for &tau in &config.tau_values {
                    cells.push((h, tau));
                }
            }
            cells
        }
    }
}

fn run_pde_sweep(config: &SweepConfig, outcome: &mut SweepOutcome) {
    let example = config.example.pde().unwrap();
    let cells = pde_cells(config);
    for &alpha in &config.alphas {
        for &scheme in &config.schemes {
            let mut previous: Option<BenchRecord> = None;
            for &(h, tau) in &cells {
                match run_pde_cell(
                    example,
                    config.example,
                    scheme,
                    alpha,
                    h,
                    tau,
                    config.seed_exact_startup,
                ) {
                    Ok(mut record) => {
                        if let Some(prev) = &previous {
                            // Positional pairing: roc_max tracks e_x_max
                            // against tau, roc_l2 tracks e_t_max against h.
                            record.roc_max = crate::verify::rate_of_convergence(
                                prev.e_x_max.unwrap(),
                                record.e_x_max.unwrap(),
                                prev.tau.unwrap(),
                                record.tau.unwrap(),
                            );
                            record.roc_l2 = crate::verify::rate_of_convergence(
                                prev.e_t_max.unwrap(),
                                record.e_t_max.unwrap(),
                                prev.h,
                                record.h,
                            );
                        }
                        previous = Some(record.clone());
                        outcome.records.push(record);
                    }
                    Err(e) => {
                        outcome
                            .records
                            .push(marker_record(config, scheme, alpha, h, Some(tau)));
                        outcome.failure = Some((
                            format!("{} alpha={alpha} h={h} tau={tau}", scheme.flag()),
                            e,
                        ));
                        return;
                    }
                }
            }
        }
    }
}

fn run_timing_sweep(config: &SweepConfig, outcome: &mut SweepOutcome) {
    let example = config.example.ode().unwrap();
    let (k_lo, k_hi) = config.k_range;
    let k_hi = k_hi.min(config.max_k);
    for &alpha in &config.alphas {
        for &scheme in &config.schemes {
            let mut points = Vec::new();
            let mut fit_points = Vec::new();
            for k in k_lo..=k_hi {
                let n = 10usize << k;
                let problem = match builtin_problem(example, alpha) {
                    Ok(p) => p,
                    Err(e) => {
                        outcome.failure = Some((format!("k={k}"), e));
                        return;
                    }
                };
                let grid = match TimeGrid::new(1.0, n) {
                    Ok(g) => g,
                    Err(e) => {
                        outcome.failure = Some((format!("k={k}"), e));
                        return;
                    }
                };
                let seconds = match measure(|| solve_ode(&problem, &grid, scheme).map(|_| ())) {
                    Ok(s) => s,
                    Err(e) => {
                        outcome
                            .records
                            .push(marker_record(config, scheme, alpha, grid.h(), None));
                        outcome.failure =
                            Some((format!("{} alpha={alpha} N={n}", scheme.flag()), e));
                        return;
                    }
                };
                // Error columns are still meaningful; reuse the solve.
                let record = match run_ode_cell(example, config.example, scheme, alpha, grid.h()) {
                    Ok(mut r) => {
                        r.cpu_seconds = seconds;
                        r
                    }
                    Err(e) => {
                        outcome.failure =
                            Some((format!("{} alpha={alpha} N={n}", scheme.flag()), e));
                        return;
                    }
                };
                outcome.records.push(record);
                points.push((n as f64, seconds));
                if k >= 2 {
                    fit_points.push((n as f64, seconds));
                }
            }
            if let Ok(slope) = fit_loglog_slope(&fit_points) {
                outcome.timing_fits.push(TimingFit {
                    scheme,
                    points,
                    slope,
                });
            }
        }
    }
}
