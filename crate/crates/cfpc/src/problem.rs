//! Fractional setup, time grids, problem descriptions and the built-in
//! benchmark problems.

use crate::error::{Error, Result};

/// Order, derived kernel rate and normalization of the fractional operator.
///
/// For order `alpha in (0,1)` the kernel rate is `beta = alpha / (1 - alpha)`
/// and every kernel evaluation in the crate reads `exp(-beta (t - s))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalSetup {
    alpha: f64,
    beta: f64,
    m_alpha: f64,
}

impl FractionalSetup {
    /// Builds a setup, validating `0 < alpha < 1` and `m_alpha > 0`.
    pub fn new(alpha: f64, m_alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!(
                "fractional order must lie in (0,1), got {alpha}"
            )));
        }
        if !(m_alpha > 0.0) {
            return Err(Error::Domain(format!(
                "normalization must be positive, got {m_alpha}"
            )));
        }
        Ok(Self {
            alpha,
            beta: alpha / (1.0 - alpha),
            m_alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Kernel rate `alpha / (1 - alpha)`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m_alpha(&self) -> f64 {
        self.m_alpha
    }

    /// Weight `(1 - alpha) / M(alpha)` multiplying the right-hand side in the
    /// transformed integral equation.
    pub fn rhs_factor(&self) -> f64 {
        (1.0 - self.alpha) / self.m_alpha
    }
}

/// Constructs a [`FractionalSetup`]; `beta` is computed exactly as
/// `alpha / (1 - alpha)`.
pub fn make_setup(alpha: f64, m_alpha: f64) -> Result<FractionalSetup> {
    FractionalSetup::new(alpha, m_alpha)
}

/// Uniform time grid on `[0, t_end]` with `n_steps` steps of size
/// `h = t_end / n_steps`; node `j` sits at `j * h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_end: f64,
    n_steps: usize,
    h: f64,
}

impl TimeGrid {
    pub fn new(t_end: f64, n_steps: usize) -> Result<Self> {
        if !(t_end > 0.0) {
            return Err(Error::Domain(format!(
                "grid end time must be positive, got {t_end}"
            )));
        }
        if n_steps == 0 {
            return Err(Error::Domain("grid needs at least one step".into()));
        }
        Ok(Self {
            t_end,
            n_steps,
            h: t_end / n_steps as f64,
        })
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn node(&self, j: usize) -> f64 {
        j as f64 * self.h
    }
}

/// Which of the four solvers produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Standard predictor-corrector, linear interpolation (second order).
    Cpl,
    /// Standard predictor-corrector, quadratic interpolation (third order).
    Cpq,
    /// Fast-memory variant of [`Scheme::Cpl`].
    Fpl,
    /// Fast-memory variant of [`Scheme::Cpq`].
    Fpq,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Cpl, Scheme::Cpq, Scheme::Fpl, Scheme::Fpq];

    /// Display label matching the benchmark tables.
    pub fn label(&self) -> &'static str {
        match self {
            Scheme::Cpl => "C-PC-L",
            Scheme::Cpq => "C-PC-Q",
            Scheme::Fpl => "F-PC-L",
            Scheme::Fpq => "F-PC-Q",
        }
    }

    /// Flag value used on the command line and in CSV output.
    pub fn flag(&self) -> &'static str {
        match self {
            Scheme::Cpl => "cpl",
            Scheme::Cpq => "cpq",
            Scheme::Fpl => "fpl",
            Scheme::Fpq => "fpq",
        }
    }

    pub fn is_fast(&self) -> bool {
        matches!(self, Scheme::Fpl | Scheme::Fpq)
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self, Scheme::Cpq | Scheme::Fpq)
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cpl" => Ok(Scheme::Cpl),
            "cpq" => Ok(Scheme::Cpq),
            "fpl" => Ok(Scheme::Fpl),
            "fpq" => Ok(Scheme::Fpq),
            other => Err(Error::Usage(format!(
                "unknown scheme '{other}' (expected cpl, cpq, fpl or fpq)"
            ))),
        }
    }
}

type Rhs = dyn Fn(f64, f64) -> f64 + Send + Sync;
type ExactFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A scalar fractional Cauchy problem `D^a y = f(t, y)`, `y(0) = y0`.
///
/// The right-hand side must be evaluable for all `t` in the solve interval and
/// finite `y`; it is assumed Lipschitz in `y` (not checked). An exact solution
/// may be attached for benchmarking; solvers never read it.
pub struct OdeProblem {
    setup: FractionalSetup,
    y0: f64,
    rhs: Box<Rhs>,
    exact: Option<Box<ExactFn>>,
}

impl OdeProblem {
    pub fn new(
        setup: FractionalSetup,
        y0: f64,
        rhs: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            setup,
            y0,
            rhs: Box::new(rhs),
            exact: None,
        }
    }

    pub fn with_exact(mut self, exact: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.exact = Some(Box::new(exact));
        self
    }

    pub fn setup(&self) -> &FractionalSetup {
        &self.setup
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    /// Evaluates `f(t, y)`.
    pub fn rhs(&self, t: f64, y: f64) -> f64 {
        (self.rhs)(t, y)
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_at(&self, t: f64) -> Option<f64> {
        self.exact.as_ref().map(|e| e(t))
    }
}

impl std::fmt::Debug for OdeProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OdeProblem")
            .field("setup", &self.setup)
            .field("y0", &self.y0)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

/// Transformed right-hand side
/// `g(t, y) = (1 - a)/M(a) * f(t, y) + y0 * exp(-b t)`.
pub fn g_eval(problem: &OdeProblem, t: f64, y: f64) -> Result<f64> {
    let f = problem.rhs(t, y);
    if !f.is_finite() {
        return Err(Error::Evaluation(format!(
            "right-hand side returned {f} at t = {t}, y = {y}"
        )));
    }
    let setup = problem.setup();
    Ok(setup.rhs_factor() * f + problem.y0 * (-setup.beta() * t).exp())
}

/// Computed solution values on the time grid, plus the auxiliary quarter- and
/// half-step values produced by the start-up cascade.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    pub y_quarter: f64,
    pub y_half: f64,
    pub scheme: Scheme,
}

impl Trajectory {
    /// Value at node `j`.
    pub fn value(&self, j: usize) -> f64 {
        self.values[j]
    }
}

/// Identifiers of the built-in scalar benchmark problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OdeExample {
    /// Exact solution `exp(-t) - 1 + t` on `[0, 1]`.
    Ex1,
    /// Exact solution `t cos t` on `[0, 1]`.
    Ex2,
}

/// Half-width of the window around `alpha = 1/2` inside which the first
/// built-in problem switches to its dedicated forcing branch. The generic
/// branch divides by `beta - 1`, which vanishes there; orders very close to
/// (but outside) the window still lose forcing digits gradually, roughly
/// `eps / |alpha - 1/2|` relative.
pub const EX1_BRANCH_WINDOW: f64 = 1e-12;

/// Builds one of the built-in benchmark problems (`M(alpha) = 1`), exact
/// solution attached.
pub fn builtin_problem(id: OdeExample, alpha: f64) -> Result<OdeProblem> {
    let setup = FractionalSetup::new(alpha, 1.0)?;
    let beta = setup.beta();
    let m = setup.m_alpha();
    match id {
        OdeExample::Ex1 => {
            let problem = if (alpha - 0.5).abs() <= EX1_BRANCH_WINDOW {
                OdeProblem::new(setup, 0.0, move |t: f64, y: f64| {
                    let e = (-t).exp();
                    let exact = e - 1.0 + t;
                    -2.0 * m * (e - 1.0 + t * e) + y * y - exact * exact
                })
            } else {
                OdeProblem::new(setup, 0.0, move |t: f64, y: f64| {
                    let e = (-t).exp();
                    let ebt = (-beta * t).exp();
                    let drive = -m / (beta * (beta - 1.0) * (alpha - 1.0))
                        * ((ebt - 1.0) - beta * (e - 1.0));
                    let exact = e - 1.0 + t;
                    drive + y * y - exact * exact
                })
            };
            Ok(problem.with_exact(|t: f64| (-t).exp() - 1.0 + t))
        }
        OdeExample::Ex2 => {
            let scale = m / ((beta * beta + 1.0).powi(2) * (alpha - 1.0));
            let problem = OdeProblem::new(setup, 0.0, move |t: f64, y: f64| {
                let ebt = (-beta * t).exp();
                let (s, c) = t.sin_cos();
                let drive = scale
                    * (beta.powi(3) * (ebt - c + t * s) - beta * beta * (2.0 * s + t * c) - t * c
                        + beta * (c - ebt + t * s));
                let exact = t * c;
                drive + y * y - exact * exact
            });
            Ok(problem.with_exact(|t: f64| t * t.cos()))
        }
    }
}

impl std::str::FromStr for OdeExample {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ex1" => Ok(OdeExample::Ex1),
            "ex2" => Ok(OdeExample::Ex2),
            other => Err(Error::Usage(format!("unknown ODE example '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn setup_beta_values() {
        assert_eq!(make_setup(0.5, 1.0).unwrap().beta(), 1.0);
        assert_eq!(make_setup(0.2, 1.0).unwrap().beta(), 0.25);
        assert_eq!(make_setup(0.8, 1.0).unwrap().beta(), 0.8 / (1.0 - 0.8));
    }

    #[test]
    fn setup_rejects_bad_parameters() {
        assert!(make_setup(0.0, 1.0).is_err());
        assert!(make_setup(1.0, 1.0).is_err());
        assert!(make_setup(-0.3, 1.0).is_err());
        assert!(make_setup(0.5, 0.0).is_err());
        assert!(make_setup(0.5, -2.0).is_err());
    }

    #[test]
    fn g_eval_zero_forcing_decays_from_y0() {
        let setup = make_setup(0.3, 1.0).unwrap();
        let problem = OdeProblem::new(setup, 2.5, |_, _| 0.0);
        let beta = setup.beta();
        for &t in &[0.0, 0.17, 0.9] {
            let g = g_eval(&problem, t, 1.0).unwrap();
            assert!((g - 2.5 * (-beta * t).exp()).abs() <= 1e-15 * 2.5);
        }
    }

    #[test]
    fn g_eval_at_origin_is_exact() {
        let setup = make_setup(0.7, 2.0).unwrap();
        let problem = OdeProblem::new(setup, -1.25, |t, y| 3.0 * t + y);
        let g = g_eval(&problem, 0.0, 4.0).unwrap();
        assert_eq!(g, setup.rhs_factor() * 4.0 + (-1.25));
    }

    #[test]
    fn g_eval_propagates_non_finite_rhs() {
        let setup = make_setup(0.5, 1.0).unwrap();
        let problem = OdeProblem::new(setup, 0.0, |_, _| f64::NAN);
        assert!(matches!(
            g_eval(&problem, 0.1, 0.0),
            Err(Error::Evaluation(_))
        ));
    }

    #[test]
    fn builtin_exact_values() {
        let p1 = builtin_problem(OdeExample::Ex1, 0.5).unwrap();
        assert!((p1.exact_at(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        let p2 = builtin_problem(OdeExample::Ex2, 0.2).unwrap();
        assert!((p2.exact_at(1.0).unwrap() - 1.0f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn ex1_rhs_vanishes_at_origin() {
        // -2(e^0 - 1 + 0) + 0^2 - (e^0 - 1 + 0)^2 = 0 on the half branch,
        // and with it the transformed right-hand side at the origin.
        let p = builtin_problem(OdeExample::Ex1, 0.5).unwrap();
        assert_eq!(p.rhs(0.0, 0.0), 0.0);
        assert_eq!(g_eval(&p, 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn ex1_special_branch_window() {
        let p = builtin_problem(OdeExample::Ex1, 0.5 + 0.5e-12).unwrap();
        // Inside the window the half-order branch is used; the generic branch
        // would blow up through its (beta - 1) denominator.
        assert!(p.rhs(0.3, 0.0).abs() < 1.0);
    }

    #[test]
    fn builtin_rhs_finite_along_exact_solution() {
        for &alpha in &[0.2, 0.5, 0.8] {
            for id in [OdeExample::Ex1, OdeExample::Ex2] {
                let p = builtin_problem(id, alpha).unwrap();
                for j in 0..=50 {
                    let t = j as f64 / 50.0;
                    let y = p.exact_at(t).unwrap();
                    assert!(p.rhs(t, y).is_finite(), "{id:?} alpha={alpha} t={t}");
                }
            }
        }
    }

    #[test]
    fn builtin_forcings_satisfy_the_derivative_identity() {
        // Along the exact solution the nonlinear terms cancel, so the
        // manufactured forcing must equal the fractional derivative of the
        // exact solution, integrated here from its very definition.
        use crate::verify::cf_derivative_oracle;
        for &alpha in &[0.2, 0.5, 0.8] {
            let setup = make_setup(alpha, 1.0).unwrap();
            let p1 = builtin_problem(OdeExample::Ex1, alpha).unwrap();
            let p2 = builtin_problem(OdeExample::Ex2, alpha).unwrap();
            for &t in &[0.04, 0.31, 0.77, 1.0] {
                let drive = p1.rhs(t, p1.exact_at(t).unwrap());
                let oracle =
                    cf_derivative_oracle(&setup, &|s: f64| 1.0 - (-s).exp(), t, 1e-13).unwrap();
                assert!(
                    (drive - oracle).abs() <= 1e-10 * oracle.abs().max(1e-3),
                    "ex1 alpha={alpha} t={t}: {drive} vs {oracle}"
                );
                let drive = p2.rhs(t, p2.exact_at(t).unwrap());
                let oracle =
                    cf_derivative_oracle(&setup, &|s: f64| s.cos() - s * s.sin(), t, 1e-13)
                        .unwrap();
                assert!(
                    (drive - oracle).abs() <= 1e-10 * oracle.abs().max(1e-3),
                    "ex2 alpha={alpha} t={t}: {drive} vs {oracle}"
                );
            }
        }
    }

    #[test]
    fn problems_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<FractionalSetup>();
        assert_send_sync::<OdeProblem>();
        assert_send_sync::<Trajectory>();
        assert_send_sync::<crate::pde::PdeProblem>();
    }

    #[test]
    fn grid_is_uniform() {
        let grid = TimeGrid::new(1.0, 7).unwrap();
        for j in 0..7 {
            assert!((grid.node(j + 1) - grid.node(j) - grid.h()).abs() < 1e-15);
        }
        assert_eq!(grid.node(0), 0.0);
        assert!(TimeGrid::new(0.0, 4).is_err());
        assert!(TimeGrid::new(1.0, 0).is_err());
    }
}
