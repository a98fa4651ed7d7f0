//! Start-up cascade supplying the first steps of the multistep schemes.
//!
//! The predictor extrapolations need two or three known right-hand-side
//! values, so a solve cannot begin at full order from `y0` alone. The cascade
//! bootstraps them on a refined opening grid: a single linear step to `h/4`, a
//! half-node quadratic step to `h/2` (nodes `0, h/4, h/2`), one to `h` (nodes
//! `0, h/2, h`) and finally a regular quadratic step to `2h`. Each stage is
//! one predict-evaluate-correct-evaluate pass whose predictor extrapolates the
//! stored right-hand-side values to the new time.
//!
//! The extrapolation coefficients come straight from the Lagrange bases: the
//! quadratic through nodes `0, L/2, L` evaluated at `2L` gives
//! `3 f(0) - 8 f(L/2) + 6 f(L)` (coefficients sum to one), which is used both
//! for the jump `h/2 -> h` over the quarter grid and `h -> 2h` over the half
//! grid. Errors at `t_1`, `t_2` come out O(h^3), enough to start the quadratic
//! scheme at full order and more than the linear scheme needs.

use crate::error::{Error, Result};
use crate::problem::OdeProblem;
use crate::weights::{
    half_node_weights, linear_denominator, linear_weights, quadratic_denominator, quadratic_weights,
};

/// Values and cached right-hand sides produced by the cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StartupValues {
    pub y_quarter: f64,
    pub y_half: f64,
    pub y1: f64,
    pub y2: f64,
    pub f0: f64,
    pub f_quarter: f64,
    pub f_half: f64,
    pub f1: f64,
    pub f2: f64,
}

/// Stages one to three: everything up to `y_1`. The linear solver starts
/// here; stage four would only compute a `y_2` it must not use.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StartupCore {
    pub y_quarter: f64,
    pub y_half: f64,
    pub y1: f64,
    pub f0: f64,
    pub f_quarter: f64,
    pub f_half: f64,
    pub f1: f64,
}

fn ensure_finite(stage: &str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Evaluation(format!(
            "start-up stage {stage} produced {value}"
        )))
    }
}

pub(crate) fn startup_core(problem: &OdeProblem, h: f64) -> Result<StartupCore> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!(
            "step size must be positive, got {h}"
        )));
    }
    let setup = *problem.setup();
    let beta = setup.beta();
    let c = setup.rhs_factor();
    let y0 = problem.y0();
    let f0 = ensure_finite("1 (f at origin)", problem.rhs(0.0, y0))?;

    // Stage 1: linear step over [0, h/4].
    let quarter = 0.25 * h;
    let w1 = linear_weights(&setup, quarter, 0)?;
    let d1 = linear_denominator(&setup, quarter);
    debug_assert!(d1 > 0.0);
    let tail1 = y0 * (-beta * quarter).exp();
    let hist1 = beta * w1.left * y0;
    let y_qp = (tail1 + c * problem.rhs(quarter, y0) + hist1) / d1;
    ensure_finite("1 (predictor)", y_qp)?;
    let y_quarter = (tail1 + c * problem.rhs(quarter, y_qp) + hist1) / d1;
    ensure_finite("1 (corrector)", y_quarter)?;
    let f_quarter = ensure_finite("1 (cache)", problem.rhs(quarter, y_quarter))?;

    // Stage 2: half-node quadratic step over [0, h/2] with nodes 0, h/4, h/2.
    let half = 0.5 * h;
    let w2 = half_node_weights(&setup, half);
    let d2 = 1.0 - beta * w2.end;
    debug_assert!(d2 > 0.0);
    let tail2 = y0 * (-beta * half).exp();
    let hist2 = beta * (w2.start * y0 + w2.half * y_quarter);
    let y_hp = (tail2 + c * (2.0 * f_quarter - f0) + hist2) / d2;
    ensure_finite("2 (predictor)", y_hp)?;
    let y_half = (tail2 + c * problem.rhs(half, y_hp) + hist2) / d2;
    ensure_finite("2 (corrector)", y_half)?;
    let f_half = ensure_finite("2 (cache)", problem.rhs(half, y_half))?;

    // Stage 3: half-node quadratic step over [0, h] with nodes 0, h/2, h;
    // the predictor extrapolates f from the quarter grid.
    let w3 = half_node_weights(&setup, h);
    let d3 = 1.0 - beta * w3.end;
    debug_assert!(d3 > 0.0);
    let tail3 = y0 * (-beta * h).exp();
    let hist3 = beta * (w3.start * y0 + w3.half * y_half);
    let y1p = (tail3 + c * (3.0 * f0 - 8.0 * f_quarter + 6.0 * f_half) + hist3) / d3;
    ensure_finite("3 (predictor)", y1p)?;
    let y1 = (tail3 + c * problem.rhs(h, y1p) + hist3) / d3;
    ensure_finite("3 (corrector)", y1)?;
    let f1 = ensure_finite("3 (cache)", problem.rhs(h, y1))?;

    Ok(StartupCore {
        y_quarter,
        y_half,
        y1,
        f0,
        f_quarter,
        f_half,
        f1,
    })
}

/// Runs the full four-stage cascade, returning the auxiliary quarter/half
/// values, `y_1`, `y_2` and the cached right-hand sides.
pub fn startup(problem: &OdeProblem, h: f64) -> Result<StartupValues> {
    let core = startup_core(problem, h)?;
    let setup = *problem.setup();
    let beta = setup.beta();
    let c = setup.rhs_factor();
    let y0 = problem.y0();

    // Stage 4: regular quadratic step to 2h. History over [0, h] keeps the
    // half-node basis (one extra decay factor for the longer lag); [h, 2h]
    // is interpolated on the nodes 0, h, 2h like any interior interval.
    let decay = (-beta * h).exp();
    let w3 = half_node_weights(&setup, h);
    let q = quadratic_weights(&setup, h, 0)?;
    let d4 = quadratic_denominator(&setup, h);
    debug_assert!(d4 > 0.0);
    let tail4 = y0 * (-2.0 * beta * h).exp();
    let hist4 = beta
        * (decay * (w3.start * y0 + w3.half * core.y_half + w3.end * core.y1)
            + q.back * y0
            + q.left * core.y1);
    let extrap = 3.0 * core.f0 - 8.0 * core.f_half + 6.0 * core.f1;
    let y2p = (tail4 + c * extrap + hist4) / d4;
    ensure_finite("4 (predictor)", y2p)?;
    let y2 = (tail4 + c * problem.rhs(2.0 * h, y2p) + hist4) / d4;
    ensure_finite("4 (corrector)", y2)?;
    let f2 = ensure_finite("4 (cache)", problem.rhs(2.0 * h, y2))?;

    Ok(StartupValues {
        y_quarter: core.y_quarter,
        y_half: core.y_half,
        y1: core.y1,
        y2,
        f0: core.f0,
        f_quarter: core.f_quarter,
        f_half: core.f_half,
        f1: core.f1,
        f2,
    })
}
