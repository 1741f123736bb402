//! The iterate loop: direction dispatch, restart counters, quadratic-likeness
//! measures, termination, and per-iteration tracing.

use serde::Serialize;

use crate::direction::{self, DirectionKind, DirectionOutcome, RestartReason};
use crate::linesearch::{self, LineSearchStatus};
use crate::model::{
    validate_options, DirectionScheme, IterateState, ObjectiveProblem, SolverOptions, SolverResult,
    SolverStatus,
};
use crate::{dot, norm_inf, norm_sq, Error};

/// One completed iteration: post-step values, the step taken, and the
/// direction that produced it. Serializes to one JSON object per line.
#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub k: usize,
    /// f at the new iterate.
    pub f: f64,
    /// ||g||_inf at the new iterate.
    pub gnorm_inf: f64,
    pub alpha: f64,
    pub direction_kind: String,
    pub u: f64,
    pub v: f64,
    pub tau: f64,
    /// g_k^T d_k of the step just taken.
    pub gtd: f64,
    pub n_f_cum: usize,
    pub n_g_cum: usize,
}

/// Serializes a trace as JSON lines, one record per line.
pub fn trace_to_json_lines(trace: &[IterationRecord]) -> String {
    let mut out = String::new();
    for rec in trace {
        out.push_str(&serde_json::to_string(rec).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Quadratic-likeness measures of the last step:
/// r = 2 (f - f_prev) / ((g + g_prev)^T s) - 1 and
/// r_bar = f - f_prev - (g_prev^T s + g^T s) / 2.
/// Both vanish on exact quadratics. A degenerate r-denominator yields +inf
/// ("not quadratic-like").
pub fn r_measures(f_prev: f64, f: f64, g_prev: &[f64], g: &[f64], s: &[f64]) -> (f64, f64) {
    let gs = dot(g, s);
    let gps = dot(g_prev, s);
    let denom = gs + gps;
    let r = if denom == 0.0 {
        f64::INFINITY
    } else {
        2.0 * (f - f_prev) / denom - 1.0
    };
    let r_bar = f - f_prev - 0.5 * (gps + gs);
    (r, r_bar)
}

/// Step 4 of the iterate loop: IterRestart always advances; IterQuad counts
/// consecutive quadratic-like steps and resets otherwise.
pub fn update_counters(state: &mut IterateState, r: f64, r_bar: f64, opts: &SolverOptions) {
    state.iter_restart += 1;
    if r.abs() <= opts.eps1 || r_bar.abs() <= opts.eps1 {
        state.iter_quad += 1;
    } else {
        state.iter_quad = 0;
    }
}

/// Descent guard for the beta-based baselines.
const BASELINE_DESCENT_GUARD: f64 = 1e-12;

/// Computes the next direction for the configured scheme. Beta-based
/// baselines restart to -g when the direction loses descent.
pub fn direction_dispatch(state: &IterateState, opts: &SolverOptions) -> DirectionOutcome {
    match opts.direction_scheme {
        DirectionScheme::Smcg => direction::smcg_direction(state, opts),
        DirectionScheme::Steepest => {
            let reason = (state.k == 0).then_some(RestartReason::FirstIter);
            DirectionOutcome::steepest(&state.g_k, reason)
        }
        DirectionScheme::Hz | DirectionScheme::Dk => {
            if state.k == 0 {
                return DirectionOutcome::steepest(&state.g_k, Some(RestartReason::FirstIter));
            }
            let beta = match opts.direction_scheme {
                DirectionScheme::Hz => direction::beta_hz(&state.g_k, &state.d_prev, &state.y_prev),
                _ => direction::beta_dk(&state.g_k, &state.d_prev, &state.y_prev),
            };
            let beta = match beta {
                Ok(b) if b.is_finite() => b,
                _ => {
                    return DirectionOutcome::steepest(
                        &state.g_k,
                        Some(RestartReason::CurvatureFail),
                    )
                }
            };
            let d: Vec<f64> = state
                .g_k
                .iter()
                .zip(&state.d_prev)
                .map(|(&gi, &dpi)| -gi + beta * dpi)
                .collect();
            let gtd = dot(&state.g_k, &d);
            let gn = norm_sq(&state.g_k).sqrt();
            let dn = norm_sq(&d).sqrt();
            if !(gtd < -BASELINE_DESCENT_GUARD * gn * dn) {
                return DirectionOutcome::steepest(&state.g_k, Some(RestartReason::CurvatureFail));
            }
            // d = -g + beta d_prev = u g + v s with u = -1, v = beta / alpha_prev
            DirectionOutcome {
                d,
                kind: DirectionKind::Subspace,
                u: -1.0,
                v_raw: beta / state.alpha_prev,
                v: beta / state.alpha_prev,
                eta: f64::NAN,
                l: f64::NAN,
                omega_bar: f64::NAN,
                tau: f64::NAN,
                gtd,
                t_dl: f64::NAN,
                restart_reason: None,
            }
        }
    }
}

/// Raw data of one accepted step, handed to an observer before the state
/// window advances (plus the advanced state for window audits).
pub struct StepObservation<'a> {
    pub k: usize,
    pub x: &'a [f64],
    pub d: &'a [f64],
    pub alpha: f64,
    pub f_before: f64,
    pub f_after: f64,
    pub g_before: &'a [f64],
    pub g_after: &'a [f64],
    pub eta_bar: f64,
    pub gtd: f64,
    pub ls_status: LineSearchStatus,
    pub direction_kind: DirectionKind,
    pub restart_reason: Option<RestartReason>,
    pub state_after: &'a IterateState,
}

pub type StepObserver<'a> = &'a mut dyn FnMut(&StepObservation<'_>);

/// Minimizes `problem` under `opts`.
pub fn solve(problem: &ObjectiveProblem, opts: &SolverOptions) -> Result<SolverResult, Error> {
    solve_full(problem, opts, false, None)
}

/// As [`solve`], collecting a per-iteration trace.
pub fn solve_traced(
    problem: &ObjectiveProblem,
    opts: &SolverOptions,
) -> Result<SolverResult, Error> {
    solve_full(problem, opts, true, None)
}

fn kind_label(out: &DirectionOutcome) -> String {
    match (out.kind, out.restart_reason) {
        (DirectionKind::Subspace, _) => "subspace".to_string(),
        (DirectionKind::SteepestRestart, None) => "steepest".to_string(),
        (DirectionKind::SteepestRestart, Some(r)) => {
            format!(
                "steepest:{}",
                serde_json::to_value(r).unwrap().as_str().unwrap()
            )
        }
    }
}

/// Full-control entry point: optional trace collection and an optional
/// per-accepted-step observer for external verification.
pub fn solve_full(
    problem: &ObjectiveProblem,
    opts: &SolverOptions,
    collect_trace: bool,
    mut observer: Option<StepObserver<'_>>,
) -> Result<SolverResult, Error> {
    let opts = validate_options(opts.clone())?;
    let mut n_f = 0usize;
    let mut n_g = 0usize;

    let x0 = problem.x0.clone();
    let f0 = problem.f(&x0);
    n_f += 1;
    if !f0.is_finite() {
        return Err(Error::NonFinite("the start point".into()));
    }
    let g0 = problem.grad(&x0);
    n_g += 1;

    let mut state = IterateState::initial(x0, f0, g0);
    let mut trace = collect_trace.then(Vec::new);
    let mut zoutendijk = 0.0;

    if state.gnorm_inf() <= opts.eps_grad {
        return Ok(finish(
            state,
            SolverStatus::Converged,
            0,
            n_f,
            n_g,
            zoutendijk,
            trace,
        ));
    }

    let f_start = f0;
    // mu of the latest completed step; rolls into state.mu_prev on advance
    let mut mu_fresh = f64::INFINITY;
    let mut dir = direction_dispatch(&state, &opts);
    let mut failed_streak = 0usize;
    let mut force_steepest = false;

    for k in 0..opts.max_iter {
        let alpha0 = match linesearch::initial_step(k, &state, &dir.d, &opts) {
            Ok(a) => a,
            Err(_) => {
                // rounding produced a non-descent direction; restart once
                if failed_streak >= 1 {
                    return Ok(finish(
                        state,
                        SolverStatus::LineSearchFailure,
                        k,
                        n_f,
                        n_g,
                        zoutendijk,
                        trace,
                    ));
                }
                failed_streak += 1;
                dir = DirectionOutcome::steepest(&state.g_k, Some(RestartReason::CurvatureFail));
                continue;
            }
        };
        let eb = linesearch::eta_bar(k, f_start, &opts);
        let ls = linesearch::search(
            problem, &state.x, state.f_k, &state.g_k, &dir.d, alpha0, eb, &opts,
        );
        n_f += ls.n_f;
        n_g += ls.n_g;

        if ls.status == LineSearchStatus::Failed {
            failed_streak += 1;
            if failed_streak >= 2 {
                return Ok(finish(
                    state,
                    SolverStatus::LineSearchFailure,
                    k,
                    n_f,
                    n_g,
                    zoutendijk,
                    trace,
                ));
            }
            dir = DirectionOutcome::steepest(&state.g_k, Some(RestartReason::CurvatureFail));
            continue;
        }
        failed_streak = 0;
        if ls.status == LineSearchStatus::FallbackBest {
            force_steepest = true;
        }

        let alpha = ls.alpha;
        let d = std::mem::take(&mut dir.d);
        let x_new: Vec<f64> = state
            .x
            .iter()
            .zip(&d)
            .map(|(&xi, &di)| xi + alpha * di)
            .collect();
        let s: Vec<f64> = d.iter().map(|&di| alpha * di).collect();
        let y: Vec<f64> = ls
            .g_new
            .iter()
            .zip(&state.g_k)
            .map(|(&gn, &go)| gn - go)
            .collect();

        zoutendijk += dir.gtd * dir.gtd / norm_sq(&d);

        // Step 4 measures from the step just taken
        let (r, r_bar) = r_measures(state.f_k, ls.f_new, &state.g_k, &ls.g_new, &s);
        let mu_new = direction::mu_measure(state.f_k, ls.f_new, &ls.g_new, &s, &y);

        let f_before = state.f_k;
        let g_before = observer.is_some().then(|| state.g_k.clone());
        state.advance(x_new, ls.f_new, ls.g_new, d, alpha, mu_fresh);
        mu_fresh = mu_new;

        if let Some(obs) = observer.as_mut() {
            obs(&StepObservation {
                k,
                x: &state.x,
                d: &state.d_prev,
                alpha,
                f_before,
                f_after: state.f_k,
                g_before: g_before.as_ref().expect("cloned when observing"),
                g_after: &state.g_k,
                eta_bar: eb,
                gtd: dir.gtd,
                ls_status: ls.status,
                direction_kind: dir.kind,
                restart_reason: dir.restart_reason,
                state_after: &state,
            });
        }
        if let Some(tr) = trace.as_mut() {
            tr.push(IterationRecord {
                k,
                f: state.f_k,
                gnorm_inf: state.gnorm_inf(),
                alpha,
                direction_kind: kind_label(&dir),
                u: dir.u,
                v: dir.v,
                tau: dir.tau,
                gtd: dir.gtd,
                n_f_cum: n_f,
                n_g_cum: n_g,
            });
        }

        if state.gnorm_inf() <= opts.eps_grad {
            return Ok(finish(
                state,
                SolverStatus::Converged,
                k + 1,
                n_f,
                n_g,
                zoutendijk,
                trace,
            ));
        }

        update_counters(&mut state, r, r_bar, &opts);

        // Step 5: counter restart first, then the configured scheme
        dir = if state.iter_restart == opts.max_restart
            || (state.iter_quad == opts.min_quad && state.iter_quad == state.iter_restart)
        {
            state.iter_restart = 0;
            state.iter_quad = 0;
            DirectionOutcome::steepest(&state.g_k, Some(RestartReason::CounterRestart))
        } else if force_steepest {
            force_steepest = false;
            DirectionOutcome::steepest(&state.g_k, Some(RestartReason::CurvatureFail))
        } else {
            direction_dispatch(&state, &opts)
        };
    }
    let n_iter = opts.max_iter;
    Ok(finish(
        state,
        SolverStatus::MaxIter,
        n_iter,
        n_f,
        n_g,
        zoutendijk,
        trace,
    ))
}

fn finish(
    state: IterateState,
    status: SolverStatus,
    n_iter: usize,
    n_f: usize,
    n_g: usize,
    zoutendijk: f64,
    trace: Option<Vec<IterationRecord>>,
) -> SolverResult {
    SolverResult {
        gnorm_inf: norm_inf(&state.g_k),
        x_final: state.x,
        f_final: state.f_k,
        n_iter,
        n_f,
        n_g,
        status,
        zoutendijk,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems;

    #[test]
    fn r_measures_quadratic_and_quartic() {
        // exact quadratic f = x^2/2 from 1 to 0.25
        let (r, rb) = r_measures(0.5, 0.03125, &[1.0], &[0.25], &[-0.75]);
        assert!(r.abs() < 1e-14, "r = {r:e}");
        assert!(rb.abs() < 1e-14, "rb = {rb:e}");
        // quartic f = x^4 from 1 to 0: r = -0.5, r_bar = 1
        let (r, rb) = r_measures(1.0, 0.0, &[4.0], &[0.0], &[-1.0]);
        assert!((r - (-0.5)).abs() < 1e-15);
        assert!((rb - 1.0).abs() < 1e-15);
        // degenerate denominator
        let (r, _) = r_measures(1.0, 0.0, &[1.0], &[-1.0], &[1.0]);
        assert!(r.is_infinite());
    }

    #[test]
    fn counter_updates() {
        let opts = SolverOptions::default();
        let mut st = IterateState::initial(vec![0.0], 1.0, vec![1.0]);
        update_counters(&mut st, 0.0, 5.0, &opts);
        assert_eq!((st.iter_restart, st.iter_quad), (1, 1));
        update_counters(&mut st, 0.5, 1.0, &opts);
        assert_eq!((st.iter_restart, st.iter_quad), (2, 0));
        update_counters(&mut st, 1.0, 0.0, &opts);
        assert_eq!((st.iter_restart, st.iter_quad), (3, 1));
    }

    #[test]
    fn sphere_converges_fast() {
        // f = ||x||^2/2: the first direction points at the minimizer
        let p = ObjectiveProblem::new(
            "half_sphere",
            vec![3.0, -4.0],
            |x: &[f64]| 0.5 * (x[0] * x[0] + x[1] * x[1]),
            |x: &[f64]| x.to_vec(),
        );
        let r = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, SolverStatus::Converged);
        assert!(r.n_iter <= 2, "took {} iterations", r.n_iter);
        assert!(r.gnorm_inf <= 1e-6);
    }

    #[test]
    fn rosenbrock_two_dim_converges() {
        let p = problems::rosenbrock(2);
        let r = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, SolverStatus::Converged);
        assert!((r.x_final[0] - 1.0).abs() < 1e-4);
        assert!((r.x_final[1] - 1.0).abs() < 1e-4);
        assert!(r.zoutendijk.is_finite());
    }

    #[test]
    fn all_schemes_solve_wood() {
        for scheme in [
            DirectionScheme::Smcg,
            DirectionScheme::Hz,
            DirectionScheme::Dk,
        ] {
            let opts = SolverOptions {
                direction_scheme: scheme,
                ..SolverOptions::default()
            };
            let r = solve(&problems::wood(), &opts).unwrap();
            assert_eq!(r.status, SolverStatus::Converged, "{scheme:?}");
        }
    }

    #[test]
    fn steepest_scheme_always_uses_negative_gradient() {
        let opts = SolverOptions {
            direction_scheme: DirectionScheme::Steepest,
            max_iter: 50,
            ..SolverOptions::default()
        };
        let p = problems::beale();
        let mut checked = 0;
        let mut obs = |o: &StepObservation<'_>| {
            for (di, gi) in o.d.iter().zip(o.g_before) {
                assert_eq!(*di, -*gi);
            }
            checked += 1;
        };
        let _ = solve_full(&p, &opts, false, Some(&mut obs)).unwrap();
        assert!(checked > 0);
    }

    #[test]
    fn already_converged_start() {
        let p = ObjectiveProblem::new(
            "flat_at_origin",
            vec![0.0, 0.0],
            |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>(),
            |x: &[f64]| x.iter().map(|v| 2.0 * v).collect(),
        );
        let r = solve(&p, &SolverOptions::default()).unwrap();
        assert_eq!(r.status, SolverStatus::Converged);
        assert_eq!(r.n_iter, 0);
    }

    #[test]
    fn max_iter_status() {
        let opts = SolverOptions {
            max_iter: 3,
            ..SolverOptions::default()
        };
        let r = solve(&problems::rosenbrock(2), &opts).unwrap();
        assert_eq!(r.status, SolverStatus::MaxIter);
        assert_eq!(r.n_iter, 3);
    }

    #[test]
    fn trace_is_recorded_and_serializes() {
        let r = solve_traced(&problems::beale(), &SolverOptions::default()).unwrap();
        let trace = r.trace.as_ref().unwrap();
        assert_eq!(trace.len(), r.n_iter);
        // terminating record is the first one at or below the tolerance
        let below: Vec<_> = trace.iter().filter(|t| t.gnorm_inf <= 1e-6).collect();
        assert_eq!(below.len(), 1);
        assert_eq!(below[0].k, trace.last().unwrap().k);
        let jsonl = trace_to_json_lines(trace);
        assert_eq!(jsonl.lines().count(), trace.len());
        let first: serde_json::Value = serde_json::from_str(jsonl.lines().next().unwrap()).unwrap();
        assert_eq!(first["k"], 0);
        assert_eq!(first["direction_kind"], "steepest:first_iter");
    }

    #[test]
    fn determinism_bitwise_traces() {
        let p = problems::trigonometric(10);
        let a = solve_traced(&p, &SolverOptions::default()).unwrap();
        let b = solve_traced(&p, &SolverOptions::default()).unwrap();
        let ja = trace_to_json_lines(a.trace.as_ref().unwrap());
        let jb = trace_to_json_lines(b.trace.as_ref().unwrap());
        assert_eq!(ja, jb);
        assert_eq!(a.n_f, b.n_f);
        assert_eq!(a.n_g, b.n_g);
    }

    #[test]
    fn counter_restart_fires_on_quadratic() {
        // on an exact quadratic every step is quadratic-like, so after
        // min_quad steps IterQuad == IterRestart == min_quad triggers the
        // Step 5.1 restart with d = -g and both counters reset
        let p = problems::make_quadratic(problems::QuadraticSpec {
            n: 30,
            cond: 1e4,
            seed: 4,
        })
        .unwrap();
        let opts = SolverOptions::default();
        let mut restart_seen = false;
        let mut obs = |o: &StepObservation<'_>| {
            if o.restart_reason == Some(RestartReason::CounterRestart) {
                restart_seen = true;
                assert_eq!(o.direction_kind, DirectionKind::SteepestRestart);
                for (di, gi) in o.d.iter().zip(o.g_before) {
                    assert_eq!(*di, -*gi);
                }
            }
        };
        let r = solve_full(&p, &opts, false, Some(&mut obs)).unwrap();
        assert_eq!(r.status, SolverStatus::Converged);
        assert!(restart_seen, "expected a MinQuad counter restart");
    }

    #[test]
    fn monotone_with_relaxation() {
        let p = problems::powell_singular(20);
        let opts = SolverOptions::default();
        let mut ok = true;
        let mut obs = |o: &StepObservation<'_>| {
            if o.f_after > o.f_before + o.eta_bar {
                ok = false;
            }
        };
        let r = solve_full(&p, &opts, false, Some(&mut obs)).unwrap();
        assert!(ok, "f_{{k+1}} <= f_k + eta_bar_k violated");
        assert!(r.zoutendijk.is_finite());
    }

    #[test]
    fn state_window_round_trips_bitwise() {
        let p = problems::rosenbrock(2);
        let opts = SolverOptions::default();
        let mut obs = |o: &StepObservation<'_>| {
            let st = o.state_after;
            for i in 0..o.d.len() {
                assert_eq!(st.s_prev[i].to_bits(), (o.alpha * o.d[i]).to_bits());
                assert_eq!(
                    st.y_prev[i].to_bits(),
                    (o.g_after[i] - o.g_before[i]).to_bits()
                );
            }
        };
        solve_full(&p, &opts, false, Some(&mut obs)).unwrap();
    }
}
