//! Standard predictor-corrector solvers with full history summation.
//!
//! Each step re-walks every past interval, so a whole solve costs O(N^2);
//! the [`crate::fast`] variants replace that walk with a recurrence. Both
//! families perform exactly one predict-evaluate-correct-evaluate pass per
//! step. The quadratic schemes extrapolate the cached right-hand-side values
//! `f(t_j, y_j)` to the new time; the linear ones evaluate `f` at the
//! linearly extrapolated state instead.

use crate::error::{Error, Result};
use crate::problem::{OdeProblem, Scheme, TimeGrid, Trajectory};
use crate::startup::{startup, startup_core};
use crate::weights::{
    first_interval_weights, linear_denominator, linear_weights, quadratic_denominator,
    quadratic_weights,
};

pub(crate) fn ensure_step_finite(scheme: Scheme, index: usize, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation(format!(
            "{} produced {value} at node {index}",
            scheme.label()
        )))
    }
}

/// Kernel decay factors `exp(-beta k h)` for `k = 0..=n`.
pub(crate) fn decay_powers(beta: f64, h: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| (-beta * k as f64 * h).exp()).collect()
}

/// Second-order scheme: linear interpolation of the history; the predictor
/// evaluates the right-hand side at the linearly extrapolated state
/// `2 y_n - y_(n-1)` (second-order accurate, like extrapolating the stored
/// right-hand-side values, but reproducing the published benchmark tables).
pub fn solve_cpl(problem: &OdeProblem, grid: &TimeGrid) -> Result<Trajectory> {
    let n_steps = grid.n_steps();
    if n_steps < 2 {
        return Err(Error::Domain(
            "the linear scheme needs at least two steps".into(),
        ));
    }
    let h = grid.h();
    let setup = *problem.setup();
    let beta = setup.beta();
    let c = setup.rhs_factor();
    let y0 = problem.y0();

    let start = startup_core(problem, h)?;
    let w = linear_weights(&setup, h, 0)?;
    let denom = linear_denominator(&setup, h);
    assert!(denom > 0.0);
    let powers = decay_powers(beta, h, n_steps);

    let mut ys = Vec::with_capacity(n_steps + 1);
    ys.extend([y0, start.y1]);

    for n in 1..n_steps {
        let t_next = grid.node(n + 1);
        // Oldest interval first: its weight carries the strongest decay, so
        // the sum accumulates the small terms before the large ones.
        let mut hist = 0.0;
        for j in 0..n {
            hist += powers[n - j] * (w.left * ys[j] + w.right * ys[j + 1]);
        }
        hist += w.left * ys[n];
        let tail = y0 * powers[n + 1];
        let f_extrapolated = problem.rhs(t_next, 2.0 * ys[n] - ys[n - 1]);
        let predicted = (tail + c * f_extrapolated + beta * hist) / denom;
        ensure_step_finite(Scheme::Cpl, n + 1, predicted)?;
        let f_predicted = problem.rhs(t_next, predicted);
        let corrected = (tail + c * f_predicted + beta * hist) / denom;
        ensure_step_finite(Scheme::Cpl, n + 1, corrected)?;
        ys.push(corrected);
    }

    Ok(Trajectory {
        grid: *grid,
        values: ys,
        y_quarter: start.y_quarter,
        y_half: start.y_half,
        scheme: Scheme::Cpl,
    })
}

/// Third-order scheme: quadratic interpolation of the history (half-node
/// basis on the opening interval), predictor extrapolated from the last
/// three cached values.
pub fn solve_cpq(problem: &OdeProblem, grid: &TimeGrid) -> Result<Trajectory> {
    let n_steps = grid.n_steps();
    if n_steps < 3 {
        return Err(Error::Domain(
            "the quadratic scheme needs at least three steps".into(),
        ));
    }
    let h = grid.h();
    let setup = *problem.setup();
    let beta = setup.beta();
    let c = setup.rhs_factor();
    let y0 = problem.y0();

    let start = startup(problem, h)?;
    let first = first_interval_weights(&setup, h, h)?;
    let q = quadratic_weights(&setup, h, 0)?;
    let denom = quadratic_denominator(&setup, h);
    assert!(denom > 0.0);
    let powers = decay_powers(beta, h, n_steps);

    let mut ys = Vec::with_capacity(n_steps + 1);
    let mut fs = Vec::with_capacity(n_steps + 1);
    ys.extend([y0, start.y1, start.y2]);
    fs.extend([start.f0, start.f1, start.f2]);

    for n in 2..n_steps {
        let t_next = grid.node(n + 1);
        let mut hist =
            powers[n] * (first.start * y0 + first.half * start.y_half + first.end * ys[1]);
        for j in 1..n {
            hist += powers[n - j] * (q.back * ys[j - 1] + q.left * ys[j] + q.right * ys[j + 1]);
        }
        hist += q.back * ys[n - 1] + q.left * ys[n];
        let tail = y0 * powers[n + 1];
        let predicted =
            (tail + c * (fs[n - 2] - 3.0 * fs[n - 1] + 3.0 * fs[n]) + beta * hist) / denom;
        ensure_step_finite(Scheme::Cpq, n + 1, predicted)?;
        let f_predicted = problem.rhs(t_next, predicted);
        let corrected = (tail + c * f_predicted + beta * hist) / denom;
        ensure_step_finite(Scheme::Cpq, n + 1, corrected)?;
        ys.push(corrected);
        fs.push(ensure_step_finite(
            Scheme::Cpq,
            n + 1,
            problem.rhs(t_next, corrected),
        )?);
    }

    Ok(Trajectory {
        grid: *grid,
        values: ys,
        y_quarter: start.y_quarter,
        y_half: start.y_half,
        scheme: Scheme::Cpq,
    })
}
