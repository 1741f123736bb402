//! Subspace minimization conjugate gradient (SMCG) for smooth unconstrained
//! minimization.
//!
//! The search direction is obtained by projecting the scaled Perry–Shanno
//! memoryless quasi-Newton direction onto the two-dimensional subspace
//! `span{g_k, s_{k-1}}`, so no estimate of `g_k^T B_k g_k` is ever needed.
//! The driver pairs the direction with an improved Wolfe line search,
//! Powell-style orthogonality restarts, and quadratic-likeness restart
//! counters. Hager–Zhang and Dai–Kou beta formulas are included as baseline
//! schemes running under the identical line search, which makes the crate
//! usable as a small benchmarking harness for nonlinear CG variants.
//!
//! ```
//! use smcg::{problems, solver, model::SolverOptions};
//!
//! let problem = problems::rosenbrock(2);
//! let opts = SolverOptions::default();
//! let result = solver::solve(&problem, &opts).unwrap();
//! assert!(result.gnorm_inf <= opts.eps_grad);
//! ```
//!
//! Modules:
//! - [`model`]: problems, options, iterate state, results.
//! - [`direction`]: the projected direction, truncation, restarts, scaling.
//! - [`linesearch`]: improved Wolfe search with the summable relaxation.
//! - [`solver`]: the iterate loop with restart counters.
//! - [`problems`]: analytic test corpus and gradient auditing.
//! - [`bench`]: run matrices, Dolan–Moré profiles, CSV/JSON/SVG output.

// validation comparisons are written negated (e.g. `!(x > 0.0)`) so NaN
// inputs fail them; rewriting with the opposite operator would accept NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod checks;
pub mod direction;
pub mod linesearch;
pub mod model;
pub mod problems;
pub mod solver;

mod error;
pub use error::Error;

/// Euclidean dot product.
#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Squared Euclidean norm.
#[inline]
pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

/// Infinity norm.
#[inline]
pub(crate) fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, &v| m.max(v.abs()))
}
