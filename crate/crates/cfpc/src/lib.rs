//! Predictor-corrector solvers for nonlinear fractional differential equations
//! with the Caputo-Fabrizio (exponential-kernel) derivative.
//!
//! The fractional model `D^a y(t) = f(t, y(t))`, `y(0) = y0`, with order
//! `a in (0,1)`, is equivalent to the Volterra integral equation
//!
//! ```text
//! y(t) = g(t, y(t)) + b * int_0^t y(s) exp(-b (t - s)) ds,
//! g(t, y) = (1 - a) / M(a) * f(t, y) + y0 * exp(-b t),    b = a / (1 - a).
//! ```
//!
//! This crate discretizes that equation on a uniform grid with kernel-weighted
//! Lagrange quadrature and a single predict-evaluate-correct-evaluate pass per
//! step. Four solvers are provided:
//!
//! * [`solve_cpl`] - second order, linear interpolation, O(N^2) history
//!   summation
//! * [`solve_cpq`] - third order, quadratic interpolation, O(N^2) history
//!   summation
//! * [`solve_fpl`] / [`solve_fpq`] - the same schemes with the history
//!   integral maintained by an O(1)-per-step recurrence, so a whole solve
//!   costs O(N)
//!
//! The exponential kernel factorizes across one step,
//! `exp(-b (t + h - s)) = exp(-b h) * exp(-b (t - s))`, which is what makes the
//! running history integral updatable in constant time. Fast and standard
//! solvers evaluate algebraically identical sums and agree to roundoff.
//!
//! The [`pde`] module extends the quadratic schemes to time-fractional
//! sub-diffusion and advection-diffusion equations (central differences in
//! space, one tridiagonal solve per predictor/corrector stage). The [`verify`]
//! module holds the independent oracles (adaptive quadrature, direct-sum
//! history evaluation, dense elimination) that every closed form in this crate
//! is tested against, plus the error metrics and convergence-rate helpers used
//! by the benchmark harness in [`mod@bench`].
//!
//! See the `examples/` directory for runnable entry points, one per
//! capability, and the `cfpc-bench` binary for table/timing sweeps.

// Guards written as `!(x > 0.0)` are deliberate: they reject NaN along with
// the out-of-range values, which `x <= 0.0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod fast;
pub mod pde;
pub mod problem;
pub mod solver;
pub mod startup;
pub mod verify;
pub mod weights;

pub use bench::solve_ode;
pub use error::{Error, Result};
pub use fast::{solve_fpl, solve_fpq, MemoryState};
pub use problem::{builtin_problem, g_eval, make_setup};
pub use problem::{FractionalSetup, OdeProblem, Scheme, TimeGrid, Trajectory};
pub use solver::{solve_cpl, solve_cpq};
pub use startup::{startup, StartupValues};
