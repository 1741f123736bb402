//! Domain types shared by all modules: problems, options, iterate state,
//! results.

use serde::{Deserialize, Serialize};

use crate::{norm_inf, Error};

/// A smooth unconstrained minimization problem.
///
/// Evaluators must be re-entrant (no hidden mutable state); the bench module
/// runs problems concurrently. Vectors are dense contiguous `f64`.
pub struct ObjectiveProblem {
    pub name: String,
    /// Dimension, `n >= 1`.
    pub n: usize,
    /// Start point, length `n`.
    pub x0: Vec<f64>,
    /// Known optimal value, for reporting only.
    pub f_star: Option<f64>,
    f: Box<ValueFn>,
    grad: Box<GradFn>,
}

type ValueFn = dyn Fn(&[f64]) -> f64 + Send + Sync;
type GradFn = dyn Fn(&[f64]) -> Vec<f64> + Send + Sync;

impl ObjectiveProblem {
    pub fn new(
        name: impl Into<String>,
        x0: Vec<f64>,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        let n = x0.len();
        assert!(n >= 1, "problem dimension must be >= 1");
        ObjectiveProblem {
            name: name.into(),
            n,
            x0,
            f_star: None,
            f: Box::new(f),
            grad: Box::new(grad),
        }
    }

    pub fn with_f_star(mut self, f_star: f64) -> Self {
        self.f_star = Some(f_star);
        self
    }

    /// Replaces the start point (used by the interactive demo).
    pub fn with_x0(mut self, x0: Vec<f64>) -> Self {
        assert_eq!(x0.len(), self.n);
        self.x0 = x0;
        self
    }

    #[inline]
    pub fn f(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.n);
        (self.f)(x)
    }

    #[inline]
    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        let g = (self.grad)(x);
        debug_assert_eq!(g.len(), self.n);
        g
    }
}

impl std::fmt::Debug for ObjectiveProblem {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fm.debug_struct("ObjectiveProblem")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("f_star", &self.f_star)
            .finish()
    }
}

/// Self-scaling parameter strategy for the memoryless quasi-Newton direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauStrategy {
    /// tau = 1 when the quadratic-likeness and closeness tests both hold,
    /// tau_B otherwise.
    Adaptive,
    /// tau_B = s^T y / ||s||^2
    B,
    /// tau_H = ||y||^2 / s^T y
    H,
    /// tau = 1
    One,
}

/// Search direction scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionScheme {
    /// Projected memoryless quasi-Newton direction on span{g, s}.
    Smcg,
    /// Hager–Zhang two-term beta.
    Hz,
    /// Dai–Kou beta.
    Dk,
    /// d = -g every step.
    Steepest,
}

/// All solver parameters. Deserializable from JSON with these exact field
/// names; missing fields take the defaults below.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    /// Termination tolerance on ||g||_inf.
    pub eps_grad: f64,
    /// Near-parallel cutoff for omega_bar, in (0,1).
    pub xi1: f64,
    /// Truncation floor factor when g^T s <= 0.
    pub xi2: f64,
    /// Upper clamp on the truncation floor factor l.
    pub xi2_bar: f64,
    /// Lower clamp on the truncation floor factor l.
    pub xi2_bbar: f64,
    /// Quadratic-likeness threshold on mu_k.
    pub xi3: f64,
    /// Quadratic-likeness threshold on max(mu_k, mu_{k-1}).
    pub xi4: f64,
    /// Step-size closeness bound on ||s||^2.
    pub xi5: f64,
    /// Gradient closeness bound on ||g||^2.
    pub xi6: f64,
    /// Lower orthogonality-restart band edge factor.
    pub eta1: f64,
    /// Upper orthogonality-restart band edge factor.
    pub eta2: f64,
    /// Line-search sufficient decrease parameter, 0 < delta < sigma.
    pub delta: f64,
    /// Line-search curvature parameter, delta < sigma < 1.
    pub sigma: f64,
    /// Relative relaxation epsilon in the improved Wolfe condition.
    pub eps_f: f64,
    /// Tolerance on the r / r_bar quadratic-likeness measures.
    pub eps1: f64,
    /// Restart after this many iterations since the last restart.
    pub max_restart: usize,
    /// Restart after this many consecutive quadratic-like iterations.
    pub min_quad: usize,
    /// Initial-step extrapolation factor.
    pub phi: f64,
    /// Scale of the summable relaxation sequence eta_bar_k.
    pub eta_bar_scale: f64,
    /// Iteration cap.
    pub max_iter: usize,
    pub tau_strategy: TauStrategy,
    pub direction_scheme: DirectionScheme,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            eps_grad: 1e-6,
            xi1: 0.75,
            xi2: 0.5,
            xi2_bar: 10.0,
            xi2_bbar: 0.2,
            xi3: 7.5e-5,
            xi4: 9e-4,
            xi5: 0.9,
            xi6: 10.0,
            eta1: 0.99,
            eta2: 3.0,
            delta: 0.1,
            sigma: 0.9,
            eps_f: 1e-6,
            eps1: 1e-8,
            max_restart: 80,
            min_quad: 80,
            phi: 2.0,
            eta_bar_scale: 0.1,
            max_iter: 200_000,
            tau_strategy: TauStrategy::Adaptive,
            direction_scheme: DirectionScheme::Smcg,
        }
    }
}

/// Checks option invariants; reports the first violated constraint.
pub fn validate_options(opts: SolverOptions) -> Result<SolverOptions, Error> {
    fn fail(msg: &str) -> Result<SolverOptions, Error> {
        Err(Error::InvalidOptions(msg.to_string()))
    }
    if !(opts.eps_grad > 0.0) {
        return fail("eps_grad > 0 violated");
    }
    if !(opts.delta > 0.0) {
        return fail("delta > 0 violated");
    }
    if !(opts.delta < opts.sigma) {
        return fail("delta < sigma violated");
    }
    if !(opts.sigma < 1.0) {
        return fail("sigma < 1 violated");
    }
    if !(opts.xi1 > 0.0 && opts.xi1 < 1.0) {
        return fail("xi1 in (0,1) violated");
    }
    for (name, v) in [
        ("xi2", opts.xi2),
        ("xi2_bar", opts.xi2_bar),
        ("xi2_bbar", opts.xi2_bbar),
        ("xi3", opts.xi3),
        ("xi4", opts.xi4),
        ("xi5", opts.xi5),
        ("xi6", opts.xi6),
    ] {
        if !(v > 0.0) {
            return Err(Error::InvalidOptions(format!("{name} > 0 violated")));
        }
    }
    if !(opts.xi3 < opts.xi4) {
        return fail("xi3 < xi4 violated");
    }
    if !(opts.eta1 > 0.0) {
        return fail("eta1 > 0 violated");
    }
    if !(opts.eta2 > 0.0) {
        return fail("eta2 > 0 violated");
    }
    if !(opts.eps_f >= 0.0) {
        return fail("eps_f >= 0 violated");
    }
    if !(opts.eps1 >= 0.0) {
        return fail("eps1 >= 0 violated");
    }
    if opts.max_restart == 0 {
        return fail("max_restart >= 1 violated");
    }
    if opts.min_quad == 0 {
        return fail("min_quad >= 1 violated");
    }
    if !(opts.phi > 0.0) {
        return fail("phi > 0 violated");
    }
    if !(opts.eta_bar_scale > 0.0) {
        return fail("eta_bar_scale > 0 violated");
    }
    if opts.max_iter == 0 {
        return fail("max_iter >= 1 violated");
    }
    Ok(opts)
}

/// Rolling iterate window maintained by the solver.
///
/// For `k >= 1`: `s_prev = x_k - x_{k-1}`, `y_prev = g_k - g_{k-1}`, and on
/// any step accepted under the improved Wolfe exit, `s_prev^T y_prev > 0`.
#[derive(Debug, Clone)]
pub struct IterateState {
    pub k: usize,
    pub x: Vec<f64>,
    pub f_k: f64,
    pub g_k: Vec<f64>,
    pub f_prev: f64,
    pub g_prev: Vec<f64>,
    pub s_prev: Vec<f64>,
    pub y_prev: Vec<f64>,
    pub d_prev: Vec<f64>,
    pub alpha_prev: f64,
    /// mu of the step before the latest one; +inf until two steps exist.
    pub mu_prev: f64,
    /// Iterations since the last counter restart (IterRestart).
    pub iter_restart: usize,
    /// Consecutive quadratic-like iterations (IterQuad).
    pub iter_quad: usize,
}

impl IterateState {
    pub fn initial(x: Vec<f64>, f: f64, g: Vec<f64>) -> Self {
        IterateState {
            k: 0,
            x,
            f_k: f,
            g_k: g,
            f_prev: f64::INFINITY,
            g_prev: Vec::new(),
            s_prev: Vec::new(),
            y_prev: Vec::new(),
            d_prev: Vec::new(),
            alpha_prev: 0.0,
            mu_prev: f64::INFINITY,
            iter_restart: 0,
            iter_quad: 0,
        }
    }

    /// Advances the window after accepting step `alpha` along `d`.
    ///
    /// `s_prev` is stored as the componentwise product `alpha * d[i]` and
    /// `y_prev` as `g_new - g_k`, both bitwise-reproducible from the inputs.
    /// `mu_fresh` is the quadratic-likeness measure of the step just taken;
    /// the previous fresh value rolls into `mu_prev`.
    pub fn advance(
        &mut self,
        x_new: Vec<f64>,
        f_new: f64,
        g_new: Vec<f64>,
        d: Vec<f64>,
        alpha: f64,
        mu_fresh_old: f64,
    ) {
        let s: Vec<f64> = d.iter().map(|&di| alpha * di).collect();
        let y: Vec<f64> = g_new
            .iter()
            .zip(self.g_k.iter())
            .map(|(&gn, &go)| gn - go)
            .collect();
        self.f_prev = self.f_k;
        self.g_prev = std::mem::take(&mut self.g_k);
        self.s_prev = s;
        self.y_prev = y;
        self.d_prev = d;
        self.alpha_prev = alpha;
        self.mu_prev = mu_fresh_old;
        self.x = x_new;
        self.f_k = f_new;
        self.g_k = g_new;
        self.k += 1;
    }

    #[inline]
    pub fn gnorm_inf(&self) -> f64 {
        norm_inf(&self.g_k)
    }
}

/// Final outcome of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverStatus {
    Converged,
    MaxIter,
    LineSearchFailure,
}

#[derive(Debug)]
pub struct SolverResult {
    pub x_final: Vec<f64>,
    pub f_final: f64,
    pub gnorm_inf: f64,
    pub n_iter: usize,
    pub n_f: usize,
    pub n_g: usize,
    pub status: SolverStatus,
    /// Running sum of (g^T d)^2 / ||d||^2 over accepted steps.
    pub zoutendijk: f64,
    /// Per-iteration diagnostics when requested.
    pub trace: Option<Vec<crate::solver::IterationRecord>>,
}
