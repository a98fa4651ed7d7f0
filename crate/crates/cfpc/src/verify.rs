//! Independent oracles and error metrics.
//!
//! Everything here is deliberately implemented without reusing the closed
//! forms it is meant to check: weights are integrated by adaptive quadrature,
//! the fast memory recurrence is compared against a direct weight-by-weight
//! summation, and the tridiagonal solver against dense elimination.

use crate::error::{Error, Result};
use crate::problem::{FractionalSetup, Scheme, Trajectory};
use crate::weights::{first_interval_weights, linear_weights, quadratic_weights};

/// Lowest relative tolerance the quadrature oracle accepts.
pub const MIN_QUADRATURE_TOL: f64 = 1e-14;

const MAX_QUADRATURE_DEPTH: u32 = 60;

/// Adaptive Simpson integration of a continuous integrand over `[a, b]`,
/// refined until the local error estimates drop below `rel_tol` relative to
/// the whole integral.
pub fn quadrature_oracle(
    integrand: &dyn Fn(f64) -> f64,
    range: (f64, f64),
    rel_tol: f64,
) -> Result<f64> {
    let (a, b) = range;
    if rel_tol < MIN_QUADRATURE_TOL {
        return Err(Error::Domain(format!(
            "relative tolerance {rel_tol} below the supported floor {MIN_QUADRATURE_TOL}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    if !(b > a) {
        return Err(Error::Domain(format!("reversed range [{a}, {b}]")));
    }
    let fa = integrand(a);
    let fb = integrand(b);
    let m = 0.5 * (a + b);
    let fm = integrand(m);
    let whole = simpson(a, b, fa, fm, fb);
    let scale = whole.abs().max(1e-300);
    adaptive(integrand, a, b, fa, fm, fb, whole, rel_tol * scale, 0)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * eps {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_QUADRATURE_DEPTH {
        return Err(Error::Convergence(format!(
            "quadrature did not settle on [{a}, {b}] after {MAX_QUADRATURE_DEPTH} refinements"
        )));
    }
    let l = adaptive(f, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1)?;
    let r = adaptive(f, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1)?;
    Ok(l + r)
}

/// Kernel-weighted integral of a basis/value expansion used by the memory
/// oracle and the fast-memory tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpOrder {
    Linear,
    Quadratic,
}

/// Direct, recurrence-free evaluation of the running history integral
/// `Y_mem(t_target) = int_0^{t_(target-1)} (interpolant of y)(s) e^(-b (t_target - s)) ds`
/// by summing every interval's quadrature weights.
///
/// `values[j]` holds `y_j` for `j = 0..=target-1`; the quadratic order also
/// needs the half node `y_half` once more than one interval is covered.
pub fn memory_oracle(
    values: &[f64],
    y_half: Option<f64>,
    setup: &FractionalSetup,
    h: f64,
    target: usize,
    order: InterpOrder,
) -> Result<f64> {
    if target == 0 {
        return Err(Error::Domain("memory target index must be positive".into()));
    }
    let n = target - 1;
    if values.len() < n + 1 {
        return Err(Error::Dimension(format!(
            "need {} node values to integrate up to t_{n}, got {}",
            n + 1,
            values.len()
        )));
    }
    if n == 0 {
        return Ok(0.0);
    }
    match order {
        InterpOrder::Linear => {
            let mut sum = 0.0;
            for j in 0..n {
                let w = linear_weights(setup, h, n - j)?;
                sum += w.left * values[j] + w.right * values[j + 1];
            }
            Ok(sum)
        }
        InterpOrder::Quadratic => {
            let y_half = y_half.ok_or_else(|| {
                Error::Domain("quadratic memory evaluation needs the half-node value".into())
            })?;
            let first = first_interval_weights(setup, h, target as f64 * h)?;
            let mut sum = first.start * values[0] + first.half * y_half + first.end * values[1];
            for j in 1..n {
                let w = quadratic_weights(setup, h, n - j)?;
                sum += w.back * values[j - 1] + w.left * values[j] + w.right * values[j + 1];
            }
            Ok(sum)
        }
    }
}

/// Observed convergence rate between two grids, `log(e_c/e_f) / log(h_c/h_f)`
/// (base-2 ratio under exact halving). `None` when either error is not a
/// positive finite number.
pub fn rate_of_convergence(e_coarse: f64, e_fine: f64, h_coarse: f64, h_fine: f64) -> Option<f64> {
    if !(e_coarse > 0.0 && e_fine > 0.0 && h_coarse > h_fine && h_fine > 0.0) {
        return None;
    }
    Some((e_coarse / e_fine).ln() / (h_coarse / h_fine).ln())
}

/// Maximum and discrete-L2 errors of one trajectory, with optional observed
/// convergence rates against a coarser run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub e_max: f64,
    pub e_l2: f64,
    pub roc_max: Option<f64>,
    pub roc_l2: Option<f64>,
    pub n_steps: usize,
    pub h: f64,
    pub alpha: f64,
    pub scheme: Scheme,
}

impl ErrorReport {
    /// Fills the rate columns from a coarser-grid report of the same scheme.
    pub fn with_roc_from(mut self, coarser: &ErrorReport) -> ErrorReport {
        self.roc_max = rate_of_convergence(coarser.e_max, self.e_max, coarser.h, self.h);
        self.roc_l2 = rate_of_convergence(coarser.e_l2, self.e_l2, coarser.h, self.h);
        self
    }
}

/// Compares a trajectory against an exact solution on its own grid:
/// `e_max = max_n |y(t_n) - y_n|`, `e_l2 = (h sum |.|^2)^(1/2)`.
pub fn error_metrics(
    traj: &Trajectory,
    exact: impl Fn(f64) -> f64,
    alpha: f64,
) -> Result<ErrorReport> {
    let n = traj.grid.n_steps();
    if traj.values.len() != n + 1 {
        return Err(Error::Dimension(format!(
            "trajectory holds {} values for {} steps",
            traj.values.len(),
            n
        )));
    }
    let h = traj.grid.h();
    let mut e_max = 0.0f64;
    let mut sq = 0.0f64;
    for (j, &y) in traj.values.iter().enumerate() {
        let err = (exact(traj.grid.node(j)) - y).abs();
        e_max = e_max.max(err);
        sq += err * err;
    }
    let e_l2 = (h * sq).sqrt();
    debug_assert!(e_l2 <= e_max * (traj.grid.t_end() + h).sqrt() * (1.0 + 1e-12));
    Ok(ErrorReport {
        e_max,
        e_l2,
        roc_max: None,
        roc_l2: None,
        n_steps: n,
        h,
        alpha,
        scheme: traj.scheme,
    })
}

/// Dense Gaussian elimination with partial pivoting; the ground truth for the
/// tridiagonal solver. `matrix` is row-major, square.
pub fn dense_solve(matrix: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension(
            "matrix/right-hand side size mismatch".into(),
        ));
    }
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pivot == 0.0 {
            return Err(Error::SingularMatrix { row: col });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let lead = a[col].clone();
        for r in col + 1..n {
            let factor = a[r][col] / lead[col];
            if factor != 0.0 {
                for (entry, &lv) in a[r][col..].iter_mut().zip(&lead[col..]) {
                    *entry -= factor * lv;
                }
                b[r] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Fractional derivative of a function with known classical derivative,
/// evaluated straight from the defining integral
/// `M(a)/(1-a) int_0^t y'(s) e^(-b (t-s)) ds` by adaptive quadrature.
/// Ground truth for the manufactured forcing terms.
pub fn cf_derivative_oracle(
    setup: &FractionalSetup,
    y_prime: &dyn Fn(f64) -> f64,
    t: f64,
    rel_tol: f64,
) -> Result<f64> {
    let beta = setup.beta();
    let integral = quadrature_oracle(&|s| y_prime(s) * (-beta * (t - s)).exp(), (0.0, t), rel_tol)?;
    Ok(setup.m_alpha() / (1.0 - setup.alpha()) * integral)
}
