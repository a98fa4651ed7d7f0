//! Exponential-kernel quadrature weights.
//!
//! Every weight in the crate is an integral of a Lagrange basis polynomial
//! against the kernel `exp(-beta (target - s))` over one grid interval. With
//! the substitution `s = interval_start + u` each of them reduces to the three
//! moments
//!
//! ```text
//! mu_p = int_0^L u^p exp(-beta (L - u)) du = L^(p+1) * phi_p(beta L),
//! phi0(z) = (1 - e^-z) / z,
//! phi1(z) = (z - 1 + e^-z) / z^2,
//! phi2(z) = (z^2 - 2z + 2 - 2 e^-z) / z^3,
//! ```
//!
//! times `exp(-beta * lag)` for the distance between the interval's right end
//! and the target time. The `phi_p` closed forms subtract nearly equal
//! quantities as `z -> 0`; below [`PHI_SERIES_CUTOFF`] they are evaluated by
//! truncated Taylor series instead (the terms decay at least geometrically
//! there, so the fixed-length sum is accurate to machine precision).

use crate::error::{Error, Result};
use crate::problem::FractionalSetup;

/// Switch point between series and `expm1`-based evaluation of the
/// `phi_p` functions.
///
/// The direct form of `phi2` loses roughly seven digits near `z = 1e-3`, so
/// the series range is kept wide; at `z = 0.5` the 18-term series still
/// resolves below `1e-16` relative while the direct forms have already
/// regained full precision.
pub const PHI_SERIES_CUTOFF: f64 = 0.5;

const PHI_SERIES_TERMS: u32 = 18;

/// Sum of `(-z)^k / (k + m)!` over `k = 0..PHI_SERIES_TERMS`.
fn phi_series(z: f64, m: u32) -> f64 {
    let mut term = 1.0 / (1..=m).product::<u32>() as f64;
    let mut sum = term;
    for k in 0..PHI_SERIES_TERMS - 1 {
        term *= -z / (m + k + 1) as f64;
        sum += term;
    }
    sum
}

/// `(1 - e^-z) / z`, the kernel mass of one unit interval.
pub fn phi0(z: f64) -> f64 {
    if z < PHI_SERIES_CUTOFF {
        phi_series(z, 1)
    } else {
        -f64::exp_m1(-z) / z
    }
}

/// `(z - 1 + e^-z) / z^2`.
pub fn phi1(z: f64) -> f64 {
    if z < PHI_SERIES_CUTOFF {
        phi_series(z, 2)
    } else {
        (z + f64::exp_m1(-z)) / (z * z)
    }
}

/// `(z^2 - 2z + 2 - 2 e^-z) / z^3`.
pub fn phi2(z: f64) -> f64 {
    if z < PHI_SERIES_CUTOFF {
        2.0 * phi_series(z, 3)
    } else {
        (z * z - 2.0 * (z + f64::exp_m1(-z))) / (z * z * z)
    }
}

/// `(z^3 - 3z^2 + 6z - 6 + 6 e^-z) / z^4`; the cubic moment used by the
/// quartic manufactured forcing.
pub(crate) fn phi3(z: f64) -> f64 {
    if z < PHI_SERIES_CUTOFF {
        6.0 * phi_series(z, 4)
    } else {
        (z * z * z - 3.0 * (z * z - 2.0 * (z + f64::exp_m1(-z)))) / (z * z * z * z)
    }
}

/// Weights of the linear interpolant on one interval `[t_j, t_j + h]`,
/// integrated against the kernel aimed at a target `lag` steps past the
/// interval's right end.
///
/// `left` multiplies the value at `t_j`, `right` the value at `t_j + h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearWeights {
    pub left: f64,
    pub right: f64,
}

/// Weights of the quadratic interpolant on an interior interval
/// `[t_j, t_j + h]` with nodes `t_j - h`, `t_j`, `t_j + h`.
///
/// `back` multiplies the value one node behind the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticWeights {
    pub back: f64,
    pub left: f64,
    pub right: f64,
}

/// Weights of the quadratic interpolant on the opening interval `[0, L]`
/// with nodes `0`, `L/2`, `L` (the start-up half node).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstIntervalWeights {
    pub start: f64,
    pub half: f64,
    pub end: f64,
}

fn check_step(h: f64) -> Result<()> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!(
            "step size must be positive, got {h}"
        )));
    }
    Ok(())
}

fn lag_factor(setup: &FractionalSetup, h: f64, lag: usize) -> f64 {
    (-setup.beta() * lag as f64 * h).exp()
}

/// Linear weights at the given lag; translation invariant, so the pair for
/// interval `j` targeting node `n + 1` is obtained with `lag = n - j`.
pub fn linear_weights(setup: &FractionalSetup, h: f64, lag: usize) -> Result<LinearWeights> {
    check_step(h)?;
    let z = setup.beta() * h;
    let decay = lag_factor(setup, h, lag);
    Ok(LinearWeights {
        left: decay * h * (phi0(z) - phi1(z)),
        right: decay * h * phi1(z),
    })
}

/// Interior quadratic weights at the given lag.
pub fn quadratic_weights(setup: &FractionalSetup, h: f64, lag: usize) -> Result<QuadraticWeights> {
    check_step(h)?;
    let z = setup.beta() * h;
    let decay = lag_factor(setup, h, lag);
    let (p0, p1, p2) = (phi0(z), phi1(z), phi2(z));
    Ok(QuadraticWeights {
        back: decay * 0.5 * h * (p2 - p1),
        left: decay * h * (p0 - p2),
        right: decay * 0.5 * h * (p1 + p2),
    })
}

/// Half-node weights over `[0, h]` aimed at `target_time >= h`.
pub fn first_interval_weights(
    setup: &FractionalSetup,
    h: f64,
    target_time: f64,
) -> Result<FirstIntervalWeights> {
    check_step(h)?;
    if target_time < h {
        return Err(Error::Domain(format!(
            "first-interval target {target_time} lies before the interval end {h}"
        )));
    }
    let decay = (-setup.beta() * (target_time - h)).exp();
    Ok(half_node_weights(setup, h).scaled(decay))
}

/// Lag-zero half-node weights over an interval of length `len` (target at the
/// right end). Used directly by the start-up cascade, whose stages integrate
/// over `[0, h/2]` and `[0, h]`.
pub(crate) fn half_node_weights(setup: &FractionalSetup, len: f64) -> FirstIntervalWeights {
    let z = setup.beta() * len;
    let (p0, p1, p2) = (phi0(z), phi1(z), phi2(z));
    FirstIntervalWeights {
        start: len * (p0 - 3.0 * p1 + 2.0 * p2),
        half: 4.0 * len * (p1 - p2),
        end: len * (2.0 * p2 - p1),
    }
}

impl FirstIntervalWeights {
    pub(crate) fn scaled(self, factor: f64) -> Self {
        Self {
            start: factor * self.start,
            half: factor * self.half,
            end: factor * self.end,
        }
    }
}

/// Bracket factor `1 - beta * right_weight` of the linear corrector; equals
/// `(1 - e^-z)/z`, strictly positive for every `z > 0`.
pub fn linear_denominator(setup: &FractionalSetup, h: f64) -> f64 {
    phi0(setup.beta() * h)
}

/// Bracket factor `1 - beta * right_weight` of the quadratic corrector;
/// expands to `1 - (5/12) z + (1/8) z^2 + O(z^3)` and stays positive for all
/// `z > 0` (it is at least 47/72 on the step sizes the schemes are meant for).
pub fn quadratic_denominator(setup: &FractionalSetup, h: f64) -> f64 {
    let z = setup.beta() * h;
    1.0 - 0.5 * z * (phi1(z) + phi2(z))
}

fn check_hat_range(range: (f64, f64), target: f64) -> Result<f64> {
    let (a, b) = range;
    if !(b > a) {
        return Err(Error::Domain(format!(
            "integration range [{a}, {b}] is empty or reversed"
        )));
    }
    if a < 0.0 || b > target {
        return Err(Error::Domain(format!(
            "integration range [{a}, {b}] must lie inside [0, {target}]"
        )));
    }
    Ok(b - a)
}

/// Kernel integral of the linear Lagrange basis attached to `node_c` (other
/// node `node_d`) over `range`, aimed at `target`.
pub fn b_hat(
    setup: &FractionalSetup,
    node_c: f64,
    node_d: f64,
    range: (f64, f64),
    target: f64,
) -> Result<f64> {
    let len = check_hat_range(range, target)?;
    let den = node_c - node_d;
    if den == 0.0 {
        return Err(Error::Domain(format!(
            "coincident interpolation nodes at t = {node_c}"
        )));
    }
    let z = setup.beta() * len;
    let mu0 = len * phi0(z);
    let mu1 = len * len * phi1(z);
    let shift = range.0 - node_d;
    let tail = (-setup.beta() * (target - range.1)).exp();
    Ok(tail * (shift * mu0 + mu1) / den)
}

/// Kernel integral of the quadratic Lagrange basis attached to `node_c`
/// (other nodes `node_d`, `node_e`) over `range`, aimed at `target`.
pub fn a_hat(
    setup: &FractionalSetup,
    node_c: f64,
    node_d: f64,
    node_e: f64,
    range: (f64, f64),
    target: f64,
) -> Result<f64> {
    let len = check_hat_range(range, target)?;
    let den = (node_c - node_d) * (node_c - node_e);
    if den == 0.0 || node_d == node_e {
        return Err(Error::Domain(format!(
            "coincident interpolation nodes among {node_c}, {node_d}, {node_e}"
        )));
    }
    let z = setup.beta() * len;
    let mu0 = len * phi0(z);
    let mu1 = len * len * phi1(z);
    let mu2 = len * len * len * phi2(z);
    let sd = range.0 - node_d;
    let se = range.0 - node_e;
    let tail = (-setup.beta() * (target - range.1)).exp();
    Ok(tail * (sd * se * mu0 + (sd + se) * mu1 + mu2) / den)
}

/// Which interpolant a [`WeightRow`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    Linear,
    QuadraticInterior,
    QuadraticFirstInterval,
}

/// One interval's quadrature coefficients for one target node, in node order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightRow {
    pub target_index: usize,
    pub interval_index: usize,
    pub kind: WeightKind,
    pub coefficients: Vec<f64>,
}

impl WeightRow {
    /// Builds the row for interval `interval_index = j` (covering
    /// `[t_j, t_{j+1}]`) targeting node `target_index = n + 1 > j`.
    pub fn build(
        setup: &FractionalSetup,
        h: f64,
        kind: WeightKind,
        target_index: usize,
        interval_index: usize,
    ) -> Result<Self> {
        if target_index <= interval_index {
            return Err(Error::Domain(format!(
                "target node {target_index} does not lie past interval {interval_index}"
            )));
        }
        let lag = target_index - interval_index - 1;
        let coefficients = match kind {
            WeightKind::Linear => {
                let w = linear_weights(setup, h, lag)?;
                vec![w.left, w.right]
            }
            WeightKind::QuadraticInterior => {
                if interval_index == 0 {
                    return Err(Error::Domain(
                        "interior quadratic rows need an interval index of at least 1".into(),
                    ));
                }
                let w = quadratic_weights(setup, h, lag)?;
                vec![w.back, w.left, w.right]
            }
            WeightKind::QuadraticFirstInterval => {
                if interval_index != 0 {
                    return Err(Error::Domain(
                        "half-node rows exist only on the first interval".into(),
                    ));
                }
                let w = first_interval_weights(setup, h, target_index as f64 * h)?;
                vec![w.start, w.half, w.end]
            }
        };
        Ok(Self {
            target_index,
            interval_index,
            kind,
            coefficients,
        })
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.coefficients.iter().sum()
    }

    /// Exact kernel mass of the row's interval,
    /// `int exp(-beta (t_target - s)) ds = e^(-beta k h) (1 - e^(-beta h)) / beta`;
    /// the coefficient sum must reproduce it because Lagrange bases sum to one.
    pub fn kernel_integral(&self, setup: &FractionalSetup, h: f64) -> f64 {
        let lag = (self.target_index - self.interval_index - 1) as f64;
        (-setup.beta() * lag * h).exp() * h * phi0(setup.beta() * h)
    }
}
