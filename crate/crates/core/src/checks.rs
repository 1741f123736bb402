//! Runtime invariant and property battery backing `bench check`.
//!
//! Each check returns pass/fail with a short detail string; the CLI prints
//! one line per check and exits nonzero if any fail. The deeper acceptance
//! suite with independent oracles lives in the integration tests.

use crate::direction::{
    self, dai_liao_t, eigen_diagnostics, gtd_closed_form, omega_bar, perry_shanno, project_uv,
    project_uv_rewritten, smcg_direction, DirectionKind,
};
use crate::linesearch::LineSearchStatus;
use crate::model::{validate_options, IterateState, SolverOptions, SolverStatus};
use crate::problems::{self, QuadraticProblem, QuadraticSpec, SplitMix64};
use crate::solver::{self, StepObservation};
use crate::{bench, dot, norm_sq};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Draws (g, s, y) with s^T y > 0, a healthy s-y angle, and omega_bar
/// bounded away from 1, at mixed scales.
pub struct SampleGen {
    rng: SplitMix64,
    pub n: usize,
}

impl SampleGen {
    pub fn new(seed: u64, n: usize) -> Self {
        SampleGen {
            rng: SplitMix64::new(seed),
            n,
        }
    }

    pub fn draw(&mut self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        loop {
            let scale_g = 10f64.powf(self.rng.uniform(-3.0, 3.0));
            let scale_s = 10f64.powf(self.rng.uniform(-3.0, 3.0));
            let g: Vec<f64> = (0..self.n)
                .map(|_| scale_g * self.rng.uniform(-1.0, 1.0))
                .collect();
            let s: Vec<f64> = (0..self.n)
                .map(|_| scale_s * self.rng.uniform(-1.0, 1.0))
                .collect();
            let mut y: Vec<f64> = (0..self.n)
                .map(|_| scale_s * self.rng.uniform(-1.0, 1.0))
                .collect();
            if dot(&s, &y) < 0.0 {
                y.iter_mut().for_each(|v| *v = -*v);
            }
            let (ns, ny) = (norm_sq(&s).sqrt(), norm_sq(&y).sqrt());
            if ns == 0.0 || ny == 0.0 || norm_sq(&g) == 0.0 {
                continue;
            }
            if dot(&s, &y) < 0.05 * ns * ny {
                continue;
            }
            if omega_bar(&g, &s).unwrap() > 0.75 {
                continue;
            }
            return (g, s, y);
        }
    }
}

fn rel_close(a: f64, b: f64, rtol: f64, scale_floor: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()).max(1e-3 * scale_floor)
}

fn check_options() -> CheckOutcome {
    let ok_default = validate_options(SolverOptions::default()).is_ok();
    let bad = SolverOptions {
        delta: 0.5,
        sigma: 0.5,
        ..SolverOptions::default()
    };
    let rejected = validate_options(bad).is_err();
    outcome(
        "options_validation",
        ok_default && rejected,
        "defaults accepted, delta=sigma rejected".into(),
    )
}

fn check_projection(samples: usize) -> CheckOutcome {
    let mut gen = SampleGen::new(0xC0FFEE, 5);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (g, s, y) = gen.draw();
        let tau = 1.0 + gen.rng.next_f64();
        let dps = perry_shanno(&g, &s, &y, tau).unwrap();
        let (u, v) = project_uv(&g, &s, &y, tau).unwrap();
        let (u2, v2) = project_uv_rewritten(&g, &s, &y, tau).unwrap();
        if !rel_close(u, u2, 1e-10, u.abs() + 1.0) || !rel_close(v, v2, 1e-10, v.abs() + 1.0) {
            return outcome(
                "projection_forms",
                false,
                format!("forms differ: {u} vs {u2}"),
            );
        }
        let res: Vec<f64> = dps
            .iter()
            .zip(g.iter().zip(&s))
            .map(|(&di, (&gi, &si))| di - u * gi - v * si)
            .collect();
        let tol = 1e-9 * norm_sq(&dps).sqrt() * norm_sq(&g).sqrt().max(norm_sq(&s).sqrt());
        let e = dot(&res, &g).abs().max(dot(&res, &s).abs());
        worst = worst.max(if tol > 0.0 { e / tol } else { 0.0 });
        if e > tol {
            return outcome("projection_orthogonality", false, format!("residual {e:e}"));
        }
    }
    outcome(
        "projection_orthogonality",
        true,
        format!("{samples} samples, worst residual {worst:.2e} of tolerance"),
    )
}

fn check_descent(samples: usize) -> CheckOutcome {
    let mut gen = SampleGen::new(0xDE5CE17, 5);
    for _ in 0..samples {
        let (g, s, y) = gen.draw();
        let sy = dot(&s, &y);
        for tau in [sy / norm_sq(&s), norm_sq(&y) / sy, 1.0] {
            let (u, v) = project_uv(&g, &s, &y, tau).unwrap();
            let gtd = u * norm_sq(&g) + v * dot(&g, &s);
            if !(gtd < 0.0) {
                return outcome("descent_untuncated", false, format!("g^T d = {gtd:e}"));
            }
            let eig = eigen_diagnostics(&g, &s, &y, tau).unwrap();
            let closed = gtd_closed_form(&g, &s, &y, tau).unwrap();
            if !rel_close(gtd, closed, 1e-9, norm_sq(&g)) {
                return outcome(
                    "descent_closed_form",
                    false,
                    format!("{gtd:e} vs {closed:e}"),
                );
            }
            if !(-closed >= eig.lambda_min * norm_sq(&g) * (1.0 - 1e-9)) {
                return outcome("descent_lambda_min", false, "bound violated".into());
            }
            if eig.p < 1.0 - 1e-12 || eig.lambda_min <= 0.0 {
                return outcome("descent_eigen_range", false, format!("p={}", eig.p));
            }
        }
    }
    outcome(
        "descent_untruncated",
        true,
        format!("{samples} samples x 3 tau choices, zero violations"),
    )
}

fn check_assembled_descent(samples: usize) -> CheckOutcome {
    let mut gen = SampleGen::new(0xA55E_B1ED, 5);
    let opts = SolverOptions::default();
    for _ in 0..samples {
        let (g, s, y) = gen.draw();
        let g_prev: Vec<f64> = g.iter().zip(&y).map(|(&gi, &yi)| gi - yi).collect();
        let n = g.len();
        let state = IterateState {
            k: 1,
            x: vec![0.0; n],
            f_k: 0.0,
            g_k: g.clone(),
            f_prev: 1.0,
            g_prev,
            s_prev: s,
            y_prev: y,
            d_prev: vec![0.0; n],
            alpha_prev: 1.0,
            mu_prev: f64::INFINITY,
            iter_restart: 1,
            iter_quad: 0,
        };
        let out = smcg_direction(&state, &opts);
        if !(out.gtd <= -1e-12 * norm_sq(&g)) {
            return outcome(
                "sufficient_descent",
                false,
                format!("g^T d = {:e} kind {:?}", out.gtd, out.kind),
            );
        }
        if out.kind == DirectionKind::Subspace {
            for (i, di) in out.d.iter().enumerate() {
                let expect = out.u * g[i] + out.v * state.s_prev[i];
                if *di != expect {
                    return outcome("subspace_composition", false, "d != u g + v s".into());
                }
            }
        }
    }
    outcome(
        "sufficient_descent_truncated",
        true,
        format!("{samples} assembled directions, zero violations"),
    )
}

fn check_hs_reduction(samples: usize) -> CheckOutcome {
    let mut rng = SplitMix64::new(0x45ED);
    for _ in 0..samples {
        // exactly orthogonal supports: g in the first two coords, s in the
        // last two, so g^T s = 0 in floating point
        let g = vec![rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), 0.0, 0.0];
        let s = vec![0.0, 0.0, rng.uniform(-2.0, 2.0), rng.uniform(1.0, 2.0)];
        let mut y: Vec<f64> = (0..4).map(|_| rng.uniform(-1.0, 1.0)).collect();
        if dot(&s, &y) <= 0.1 {
            y[3] += 2.0 / s[3];
        }
        let tau = 0.5 + rng.next_f64();
        let (u, v) = match project_uv(&g, &s, &y, tau) {
            Ok(uv) => uv,
            Err(_) => continue,
        };
        let v_hs = dot(&g, &y) / dot(&s, &y);
        if (u + 1.0).abs() > 1e-12 || !rel_close(v, v_hs, 1e-12, v_hs.abs() + 1.0) {
            return outcome("hs_reduction", false, format!("u={u}, v={v}, hs={v_hs}"));
        }
    }
    outcome(
        "hs_reduction",
        true,
        format!("{samples} exact-line-search samples reduce to HS"),
    )
}

fn check_dai_liao(samples: usize) -> CheckOutcome {
    let mut gen = SampleGen::new(0xDA11A0, 5);
    for _ in 0..samples {
        let (g, s, y) = gen.draw();
        let tau = 0.5 + 2.0 * gen.rng.next_f64();
        let (u, v) = project_uv(&g, &s, &y, tau).unwrap();
        let d: Vec<f64> = g.iter().zip(&s).map(|(&gi, &si)| u * gi + v * si).collect();
        let t = dai_liao_t(&g, &s, &y, tau).unwrap();
        let lhs = dot(&d, &y);
        let rhs = t * dot(&g, &s);
        let floor = norm_sq(&d).sqrt() * norm_sq(&y).sqrt();
        if !rel_close(lhs, rhs, 1e-9, floor) {
            return outcome("dai_liao_identity", false, format!("{lhs:e} vs {rhs:e}"));
        }
    }
    outcome(
        "dai_liao_identity",
        true,
        format!("d^T y = t g^T s on {samples} samples"),
    )
}

/// Validation loop for the two-dimensional finite-termination property:
/// exact Cauchy first step, then unit steps on the raw projected direction
/// with tau = 1; the third gradient must vanish.
fn check_quadratic_termination(instances: usize) -> CheckOutcome {
    let mut rng = SplitMix64::new(0x7E21);
    for i in 0..instances {
        let q = QuadraticProblem::new(QuadraticSpec {
            n: 2,
            cond: 10f64.powf(rng.uniform(0.0, 4.0)),
            seed: 9000 + i as u64,
        })
        .unwrap();
        let mut x = vec![rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)];
        let mut g = q.grad(&x);
        let g0_norm = norm_sq(&g).sqrt();
        let tol = 1e-8 * g0_norm.max(1.0);
        // exact Cauchy step
        let ag = q.apply_a(&g);
        let alpha0 = norm_sq(&g) / dot(&g, &ag);
        let mut s: Vec<f64> = g.iter().map(|&gi| -alpha0 * gi).collect();
        x = x.iter().zip(&s).map(|(&xi, &si)| xi + si).collect();
        let mut g_new = q.grad(&x);
        let mut terminated = false;
        for _ in 0..2 {
            if norm_sq(&g_new).sqrt() <= tol {
                terminated = true;
                break;
            }
            let y: Vec<f64> = g_new.iter().zip(&g).map(|(&a, &b)| a - b).collect();
            let (u, v) = match project_uv(&g_new, &s, &y, 1.0) {
                Ok(uv) => uv,
                Err(_) => break,
            };
            let d: Vec<f64> = g_new
                .iter()
                .zip(&s)
                .map(|(&gi, &si)| u * gi + v * si)
                .collect();
            x = x.iter().zip(&d).map(|(&xi, &di)| xi + di).collect();
            g = g_new;
            g_new = q.grad(&x);
            s = d;
        }
        terminated = terminated || norm_sq(&g_new).sqrt() <= tol;
        if !terminated {
            return outcome(
                "quadratic_termination_2d",
                false,
                format!("instance {i}: ||g_3|| = {:e}", norm_sq(&g_new).sqrt()),
            );
        }
    }
    outcome(
        "quadratic_termination_2d",
        true,
        format!("{instances} seeded instances terminate within three steps"),
    )
}

fn check_linesearch_contract() -> CheckOutcome {
    let opts = SolverOptions::default();
    let mut violations = 0usize;
    let mut steps = 0usize;
    for p in [
        problems::rosenbrock(2),
        problems::beale(),
        problems::wood(),
        problems::trigonometric(10),
    ] {
        let mut obs = |o: &StepObservation<'_>| {
            steps += 1;
            let bound = o.f_before
                + (opts.eps_f * o.f_before.abs()).min(opts.delta * o.alpha * o.gtd + o.eta_bar);
            let dphi = dot(o.g_after, o.d);
            match o.ls_status {
                LineSearchStatus::ExactWolfe | LineSearchStatus::ImprovedWolfe => {
                    if !(o.f_after <= bound && dphi >= opts.sigma * o.gtd) {
                        violations += 1;
                    }
                    let sty = dot(o.state_after.s_prev.as_slice(), &o.state_after.y_prev);
                    if !(sty > 0.0) {
                        violations += 1;
                    }
                }
                _ => {}
            }
        };
        let _ = solver::solve_full(&p, &opts, false, Some(&mut obs));
    }
    outcome(
        "linesearch_contract",
        violations == 0,
        format!("{steps} accepted steps re-verified, {violations} violations"),
    )
}

fn check_quadratic_measures() -> CheckOutcome {
    let opts = SolverOptions::default();
    let mut worst: f64 = 0.0;
    for seed in [3u64, 7, 11] {
        let q = QuadraticProblem::homogeneous(QuadraticSpec {
            n: 20,
            cond: 100.0,
            seed,
        })
        .unwrap();
        let p = q.into_problem(format!("homog_{seed}"));
        let mut obs = |o: &StepObservation<'_>| {
            let st = o.state_after;
            let mu =
                direction::mu_measure(o.f_before, o.f_after, o.g_after, &st.s_prev, &st.y_prev);
            let (r, rb) =
                solver::r_measures(o.f_before, o.f_after, o.g_before, o.g_after, &st.s_prev);
            worst = worst.max(mu).max(r.abs()).max(rb.abs());
        };
        let res = solver::solve_full(&p, &opts, false, Some(&mut obs)).unwrap();
        if res.status != SolverStatus::Converged {
            return outcome("quadratic_measures", false, "quadratic run failed".into());
        }
    }
    outcome(
        "quadratic_measures",
        worst <= 1e-10,
        format!("max |mu|,|r|,|r_bar| = {worst:.2e}"),
    )
}

fn check_profile_fixture() -> CheckOutcome {
    let mk = |solver: &str, problem: &str, nf: usize| bench::RunRecord {
        solver: solver.into(),
        problem: problem.into(),
        n_iter: 1,
        n_f: nf,
        n_g: nf,
        t_cpu: 0.0,
        success: true,
        final_gnorm: 1e-8,
    };
    let records = vec![
        mk("A", "p1", 2),
        mk("A", "p2", 4),
        mk("B", "p1", 4),
        mk("B", "p2", 4),
    ];
    let (profiles, _) = bench::perf_profile(&records, bench::Metric::Nf);
    let rho_at = |name: &str, tau: f64| {
        profiles
            .iter()
            .find(|p| p.solver == name)
            .unwrap()
            .points
            .iter()
            .rfind(|pt| pt.tau <= tau)
            .unwrap()
            .rho
    };
    let ok = rho_at("A", 1.0) == 1.0 && rho_at("B", 1.0) == 0.5 && rho_at("B", 2.0) == 1.0;
    outcome(
        "profile_fixture",
        ok,
        "two-solver hand-computed distribution".into(),
    )
}

/// Runs the whole battery. `quick` shrinks the sample counts.
pub fn run_all(quick: bool) -> Vec<CheckOutcome> {
    let n = if quick { 1000 } else { 10_000 };
    vec![
        check_options(),
        check_projection(n),
        check_descent(n),
        check_assembled_descent(n),
        check_hs_reduction(n.min(2000)),
        check_dai_liao(n),
        check_quadratic_termination(if quick { 50 } else { 200 }),
        check_linesearch_contract(),
        check_quadratic_measures(),
        check_profile_fixture(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_passes_quick() {
        for c in run_all(true) {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
