//! Fast-memory solvers: O(1) history work per step.
//!
//! The history integral up to the previous node,
//! `Y_mem(t_(n+1)) = int_0^(t_n) y(s) exp(-b (t_(n+1) - s)) ds`,
//! obeys the recurrence
//! `Y_mem(t_(n+1)) = e^(-b h) Y_mem(t_n) + int_(t_(n-1))^(t_n) y(s) e^(-b (t_(n+1)-s)) ds`
//! because shifting the target by one step multiplies the kernel by a
//! constant. Interpolating the increment on the same nodes the standard
//! schemes use for that interval makes the fast and standard history sums
//! algebraically identical, so the two solver families agree to roundoff.

use crate::error::{Error, Result};
use crate::problem::{FractionalSetup, OdeProblem, Scheme, TimeGrid, Trajectory};
use crate::solver::ensure_step_finite;
use crate::startup::{startup, startup_core};
use crate::weights::{
    first_interval_weights, linear_denominator, linear_weights, quadratic_denominator,
    quadratic_weights, LinearWeights, QuadraticWeights,
};

/// Running value of the history integral `Y_mem`, advanced one step at a
/// time. Also caches the per-step decay factor and the lag-zero increment
/// weights of its `(beta, h)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryState {
    value: f64,
    target_index: usize,
    decay: f64,
    lin: LinearWeights,
    quad: QuadraticWeights,
}

/// Node values feeding one increment interval, oldest first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MemoryIncrement {
    /// `[y_(n-1), y_n]`, interpolated linearly on the increment interval.
    Linear([f64; 2]),
    /// `[y_(n-2), y_(n-1), y_n]`, interpolated quadratically on the nodes
    /// `t_(n-2), t_(n-1), t_n`.
    Quadratic([f64; 3]),
}

impl MemoryState {
    /// Empty history targeting node 1 (the integral over `[t_0, t_0]`).
    pub fn new(setup: &FractionalSetup, h: f64) -> Result<Self> {
        Ok(Self {
            value: 0.0,
            target_index: 1,
            decay: (-setup.beta() * h).exp(),
            lin: linear_weights(setup, h, 0)?,
            quad: quadratic_weights(setup, h, 0)?,
        })
    }

    /// Directly integrated history targeting node 3: half-node basis on
    /// `[0, h]`, regular quadratic basis on `[h, 2h]`. The quadratic
    /// recurrence needs a node two steps behind each increment interval, so
    /// this is its earliest well-defined state.
    pub fn bootstrap_quadratic(
        setup: &FractionalSetup,
        h: f64,
        y0: f64,
        y_half: f64,
        y1: f64,
        y2: f64,
    ) -> Result<Self> {
        let first = first_interval_weights(setup, h, h)?;
        let mut state = Self::new(setup, h)?;
        let opening = first.start * y0 + first.half * y_half + first.end * y1;
        let second = state.quad.back * y0 + state.quad.left * y1 + state.quad.right * y2;
        state.value = state.decay * (state.decay * opening + second);
        state.target_index = 3;
        Ok(state)
    }

    /// Current value of the history integral aimed at [`Self::target_index`].
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Node index the stored integral is aimed at.
    pub fn target_index(&self) -> usize {
        self.target_index
    }
}

/// Advances the history integral by one step: the increment covers
/// `[t_(newest-1), t_newest]` and the returned state targets `newest + 1`.
///
/// Fails with a state error unless `newest_index` equals the state's current
/// target (the recurrence cannot skip or repeat steps).
pub fn memory_update(
    state: &MemoryState,
    newest_index: usize,
    increment: MemoryIncrement,
) -> Result<MemoryState> {
    if newest_index != state.target_index {
        return Err(Error::State(format!(
            "memory targets node {} but the increment ends at node {newest_index}",
            state.target_index
        )));
    }
    let contribution = match increment {
        MemoryIncrement::Linear([prev, curr]) => state.lin.left * prev + state.lin.right * curr,
        MemoryIncrement::Quadratic([back, prev, curr]) => {
            if newest_index < 2 {
                return Err(Error::State(
                    "quadratic increments need a node two steps back".into(),
                ));
            }
            state.quad.back * back + state.quad.left * prev + state.quad.right * curr
        }
    };
    let mut next = *state;
    // Lag-one weights are the lag-zero ones times the decay, so the whole
    // update collapses to one multiplication.
    next.value = state.decay * (state.value + contribution);
    next.target_index = state.target_index + 1;
    if !next.value.is_finite() {
        return Err(Error::Evaluation(format!(
            "memory update produced {} at node {}",
            next.value, next.target_index
        )));
    }
    Ok(next)
}

/// Fast counterpart of [`crate::solver::solve_cpl`]; identical contract, the
/// history term is maintained by [`memory_update`].
pub fn solve_fpl(problem: &OdeProblem, grid: &TimeGrid) -> Result<Trajectory> {
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

    let mut ys = Vec::with_capacity(n_steps + 1);
    ys.extend([y0, start.y1]);
    let mut memory = MemoryState::new(&setup, h)?;

    for n in 1..n_steps {
        let t_next = grid.node(n + 1);
        memory = memory_update(&memory, n, MemoryIncrement::Linear([ys[n - 1], ys[n]]))?;
        debug_assert_eq!(memory.target_index(), n + 1);
        let hist = memory.value() + w.left * ys[n];
        let tail = y0 * (-beta * t_next).exp();
        let f_extrapolated = problem.rhs(t_next, 2.0 * ys[n] - ys[n - 1]);
        let predicted = (tail + c * f_extrapolated + beta * hist) / denom;
        ensure_step_finite(Scheme::Fpl, n + 1, predicted)?;
        let f_predicted = problem.rhs(t_next, predicted);
        let corrected = (tail + c * f_predicted + beta * hist) / denom;
        ensure_step_finite(Scheme::Fpl, n + 1, corrected)?;
        ys.push(corrected);
    }

    Ok(Trajectory {
        grid: *grid,
        values: ys,
        y_quarter: start.y_quarter,
        y_half: start.y_half,
        scheme: Scheme::Fpl,
    })
}

/// Fast counterpart of [`crate::solver::solve_cpq`]; identical contract, the
/// history term is bootstrapped by direct integration up to node 3 and
/// maintained by [`memory_update`] afterwards.
pub fn solve_fpq(problem: &OdeProblem, grid: &TimeGrid) -> Result<Trajectory> {
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
    let q = quadratic_weights(&setup, h, 0)?;
    let denom = quadratic_denominator(&setup, h);
    assert!(denom > 0.0);

    let mut ys = Vec::with_capacity(n_steps + 1);
    let mut fs = Vec::with_capacity(n_steps + 1);
    ys.extend([y0, start.y1, start.y2]);
    fs.extend([start.f0, start.f1, start.f2]);
    let mut memory =
        MemoryState::bootstrap_quadratic(&setup, h, y0, start.y_half, start.y1, start.y2)?;

    for n in 2..n_steps {
        if n > 2 {
            memory = memory_update(
                &memory,
                n,
                MemoryIncrement::Quadratic([ys[n - 2], ys[n - 1], ys[n]]),
            )?;
        }
        debug_assert_eq!(memory.target_index(), n + 1);
        let t_next = grid.node(n + 1);
        let hist = memory.value() + q.back * ys[n - 1] + q.left * ys[n];
        let tail = y0 * (-beta * t_next).exp();
        let predicted =
            (tail + c * (fs[n - 2] - 3.0 * fs[n - 1] + 3.0 * fs[n]) + beta * hist) / denom;
        ensure_step_finite(Scheme::Fpq, n + 1, predicted)?;
        let f_predicted = problem.rhs(t_next, predicted);
        let corrected = (tail + c * f_predicted + beta * hist) / denom;
        ensure_step_finite(Scheme::Fpq, n + 1, corrected)?;
        ys.push(corrected);
        fs.push(ensure_step_finite(
            Scheme::Fpq,
            n + 1,
            problem.rhs(t_next, corrected),
        )?);
    }

    Ok(Trajectory {
        grid: *grid,
        values: ys,
        y_quarter: start.y_quarter,
        y_half: start.y_half,
        scheme: Scheme::Fpq,
    })
}
