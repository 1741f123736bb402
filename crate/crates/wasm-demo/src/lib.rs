//! Interactive browser demo for the subspace minimization CG solver.
//!
//! Three operations are exported over wasm-bindgen, all returning JSON
//! strings so the page needs no binding glue beyond `JSON.parse`:
//!
//! - [`field_grid`]: objective values on a rectangle, for contour shading;
//! - [`run_trajectory`]: the iterate path of a chosen scheme / tau strategy
//!   from a clicked start point;
//! - [`mini_profile`]: a small in-browser benchmark matrix rendered as
//!   performance profiles.
//!
//! Build with `wasm-pack build crates/wasm-demo --target web` and serve the
//! `www/` directory next to the generated `pkg/`.

use serde_json::json;
use wasm_bindgen::prelude::*;

use smcg::bench::{self, Metric, RunRecord};
use smcg::linesearch::LineSearchStatus;
use smcg::model::{ObjectiveProblem, SolverOptions, SolverStatus};
use smcg::problems;
use smcg::solver::{self, StepObservation};

/// Demo problems: 2-D corpus members with a sensible viewing rectangle.
const DEMO_VIEWS: [(&str, [f64; 4]); 5] = [
    ("rosenbrock_2", [-2.0, 2.0, -1.0, 3.0]),
    ("beale", [-4.5, 4.5, -4.5, 4.5]),
    ("quad_n2_k10", [-2.0, 2.0, -2.0, 2.0]),
    ("quad_n2_k1000", [-2.0, 2.0, -2.0, 2.0]),
    ("quad_n2_k100000", [-2.0, 2.0, -2.0, 2.0]),
];

fn demo_problem(name: &str) -> Option<ObjectiveProblem> {
    DEMO_VIEWS.iter().find(|(n, _)| *n == name)?;
    problems::corpus()
        .into_iter()
        .find(|p| p.name == name && p.n == 2)
}

/// Lists the 2-D demo problems with their view boxes and start points.
#[wasm_bindgen]
pub fn demo_problems() -> String {
    let list: Vec<_> = DEMO_VIEWS
        .iter()
        .filter_map(|(name, view)| {
            let p = demo_problem(name)?;
            Some(json!({
                "name": name,
                "view": view,
                "x0": p.x0,
                "f_star": p.f_star,
            }))
        })
        .collect();
    json!(list).to_string()
}

/// Objective values on an nx-by-ny grid over [x_lo, x_hi] x [y_lo, y_hi],
/// row-major with y varying slowest. Returns an empty vector for unknown
/// names.
#[wasm_bindgen]
pub fn field_grid(
    name: &str,
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
    nx: u32,
    ny: u32,
) -> Vec<f64> {
    let Some(p) = demo_problem(name) else {
        return Vec::new();
    };
    let mut out = Vec::with_capacity((nx * ny) as usize);
    for j in 0..ny {
        let y = y_lo + (y_hi - y_lo) * j as f64 / (ny - 1).max(1) as f64;
        for i in 0..nx {
            let x = x_lo + (x_hi - x_lo) * i as f64 / (nx - 1).max(1) as f64;
            out.push(p.f(&[x, y]));
        }
    }
    out
}

/// Runs one solver configuration from (sx, sy) and returns the iterate
/// path with per-step diagnostics as JSON.
#[wasm_bindgen]
pub fn run_trajectory(
    name: &str,
    scheme: &str,
    tau: &str,
    sx: f64,
    sy: f64,
    tol: f64,
    max_iter: u32,
) -> String {
    let Some(p) = demo_problem(name) else {
        return json!({"error": format!("unknown problem '{name}'")}).to_string();
    };
    let p = p.with_x0(vec![sx, sy]);
    let mut opts = match bench::solver_options(scheme, &SolverOptions::default()) {
        Ok(o) => o,
        Err(e) => return json!({"error": e.to_string()}).to_string(),
    };
    if scheme == "smcg" {
        // the tau selector applies to the subspace scheme only
        let named: SolverOptions =
            match serde_json::from_str(&format!("{{\"tau_strategy\": \"{tau}\"}}")) {
                Ok(o) => o,
                Err(_) => {
                    return json!({"error": format!("unknown tau strategy '{tau}'")}).to_string()
                }
            };
        opts.tau_strategy = named.tau_strategy;
    }
    opts.eps_grad = tol;
    opts.max_iter = max_iter as usize;

    let mut path = vec![vec![sx, sy]];
    let mut steps = Vec::new();
    let mut obs = |o: &StepObservation<'_>| {
        path.push(o.x.to_vec());
        steps.push(json!({
            "k": o.k,
            "f": o.f_after,
            "alpha": o.alpha,
            "restart": o.restart_reason.is_some(),
            "fallback": o.ls_status == LineSearchStatus::FallbackBest,
        }));
    };
    match solver::solve_full(&p, &opts, false, Some(&mut obs)) {
        Ok(res) => json!({
            "status": match res.status {
                SolverStatus::Converged => "converged",
                SolverStatus::MaxIter => "max_iter",
                SolverStatus::LineSearchFailure => "line_search_failure",
            },
            "n_iter": res.n_iter,
            "n_f": res.n_f,
            "n_g": res.n_g,
            "f_final": res.f_final,
            "gnorm_inf": res.gnorm_inf,
            "path": path,
            "steps": steps,
        })
        .to_string(),
        Err(e) => json!({"error": e.to_string()}).to_string(),
    }
}

/// Problems small enough for an in-browser benchmark.
const MINI_CORPUS: [&str; 10] = [
    "rosenbrock_2",
    "beale",
    "wood",
    "trig_10",
    "powell_20",
    "quartic_25",
    "penalty1_10",
    "quad_n2_k1000",
    "quad_n20_k10",
    "quad_n20_k1000",
];

/// Runs the four direction schemes over a small problem set and returns
/// Dolan–Moré profiles for the requested metric (iter | nf | ng |
/// nf_plus_3ng) as JSON step functions.
#[wasm_bindgen]
pub fn mini_profile(metric: &str) -> String {
    let metric = match Metric::parse(metric) {
        Ok(m) => m,
        Err(e) => return json!({"error": e.to_string()}).to_string(),
    };
    let corpus = problems::corpus();
    let mut records = Vec::new();
    for solver_name in ["smcg", "hz", "dk", "steepest"] {
        let mut opts = bench::solver_options(solver_name, &SolverOptions::default()).unwrap();
        opts.max_iter = 20_000;
        for pname in MINI_CORPUS {
            let p = corpus
                .iter()
                .find(|p| p.name == pname)
                .expect("demo corpus");
            let rec = match solver::solve(p, &opts) {
                Ok(res) => RunRecord {
                    solver: solver_name.to_string(),
                    problem: pname.to_string(),
                    n_iter: res.n_iter,
                    n_f: res.n_f,
                    n_g: res.n_g,
                    t_cpu: 0.0,
                    success: res.status == SolverStatus::Converged,
                    final_gnorm: res.gnorm_inf,
                },
                Err(_) => RunRecord {
                    solver: solver_name.to_string(),
                    problem: pname.to_string(),
                    n_iter: 0,
                    n_f: 0,
                    n_g: 0,
                    t_cpu: 0.0,
                    success: false,
                    final_gnorm: f64::INFINITY,
                },
            };
            records.push(rec);
        }
    }
    let (profiles, _) = bench::perf_profile(&records, metric);
    let solved: Vec<_> = ["smcg", "hz", "dk", "steepest"]
        .iter()
        .map(|s| {
            let n = records
                .iter()
                .filter(|r| &r.solver == s && r.success)
                .count();
            json!({"solver": s, "solved": n})
        })
        .collect();
    json!({
        "problems": MINI_CORPUS.len(),
        "solved": solved,
        "profiles": profiles.iter().map(|p| json!({
            "solver": p.solver,
            "points": p.points.iter().map(|pt| [pt.tau, pt.rho]).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_problem_listing() {
        let v: serde_json::Value = serde_json::from_str(&demo_problems()).unwrap();
        let list = v.as_array().unwrap();
        assert_eq!(list.len(), 5);
        assert_eq!(list[0]["name"], "rosenbrock_2");
        assert_eq!(list[0]["x0"][0], -1.2);
    }

    #[test]
    fn grid_shape_and_values() {
        let g = field_grid("rosenbrock_2", -2.0, 2.0, -1.0, 3.0, 16, 8);
        assert_eq!(g.len(), 128);
        assert!(g.iter().all(|v| v.is_finite()));
        // the minimum cell should be near (1, 1)
        assert!(field_grid("nope", 0.0, 1.0, 0.0, 1.0, 4, 4).is_empty());
    }

    #[test]
    fn trajectory_converges_and_reports_path() {
        let out = run_trajectory("rosenbrock_2", "smcg", "adaptive", -1.2, 1.0, 1e-6, 20_000);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["status"], "converged", "{out}");
        let path = v["path"].as_array().unwrap();
        assert_eq!(path.len(), v["n_iter"].as_u64().unwrap() as usize + 1);
        let last = path.last().unwrap().as_array().unwrap();
        assert!((last[0].as_f64().unwrap() - 1.0).abs() < 1e-3);
        assert!((last[1].as_f64().unwrap() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn trajectory_rejects_unknown_configuration() {
        let v: serde_json::Value = serde_json::from_str(&run_trajectory(
            "beale", "nope", "adaptive", 0.0, 0.0, 1e-6, 10,
        ))
        .unwrap();
        assert!(v["error"].is_string());
        let v: serde_json::Value = serde_json::from_str(&run_trajectory(
            "beale", "smcg", "bogus", 0.0, 0.0, 1e-6, 10,
        ))
        .unwrap();
        assert!(v["error"].is_string());
    }

    #[test]
    fn mini_profile_structure() {
        let v: serde_json::Value = serde_json::from_str(&mini_profile("nf_plus_3ng")).unwrap();
        let profiles = v["profiles"].as_array().unwrap();
        assert_eq!(profiles.len(), 4);
        for p in profiles {
            let pts = p["points"].as_array().unwrap();
            assert!(!pts.is_empty());
            let mut last = 0.0;
            for pt in pts {
                let rho = pt[1].as_f64().unwrap();
                assert!(rho >= last && rho <= 1.0);
                last = rho;
            }
        }
        // the subspace scheme solves everything in the mini corpus
        let smcg_solved = v["solved"]
            .as_array()
            .unwrap()
            .iter()
            .find(|s| s["solver"] == "smcg")
            .unwrap()["solved"]
            .as_u64()
            .unwrap();
        assert_eq!(smcg_solved, 10);
    }
}
