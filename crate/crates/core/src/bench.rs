//! Benchmark harness: runs a (solver x problem) matrix, records per-run
//! metrics, and turns them into Dolan–Moré performance profiles with CSV,
//! JSON, and SVG output.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::model::{DirectionScheme, ObjectiveProblem, SolverOptions, SolverStatus, TauStrategy};
use crate::{problems, solver, Error};

/// One (solver, problem) run.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunRecord {
    pub solver: String,
    pub problem: String,
    pub n_iter: usize,
    pub n_f: usize,
    pub n_g: usize,
    /// Seconds spent inside the solve call.
    pub t_cpu: f64,
    pub success: bool,
    pub final_gnorm: f64,
}

/// Cost measure used for the profile ratios. The composite nf + 3 ng
/// reflects that a gradient evaluation typically costs a few function
/// evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Iter,
    Nf,
    Ng,
    NfPlus3Ng,
    Time,
}

impl Metric {
    pub fn parse(s: &str) -> Result<Metric, Error> {
        match s {
            "iter" => Ok(Metric::Iter),
            "nf" => Ok(Metric::Nf),
            "ng" => Ok(Metric::Ng),
            "nf_plus_3ng" => Ok(Metric::NfPlus3Ng),
            "time" => Ok(Metric::Time),
            other => Err(Error::Parse {
                path: "--metric".into(),
                msg: format!("unknown metric '{other}' (iter|nf|ng|nf_plus_3ng|time)"),
            }),
        }
    }

    fn value(self, r: &RunRecord) -> f64 {
        match self {
            Metric::Iter => r.n_iter as f64,
            Metric::Nf => r.n_f as f64,
            Metric::Ng => r.n_g as f64,
            Metric::NfPlus3Ng => (r.n_f + 3 * r.n_g) as f64,
            Metric::Time => r.t_cpu,
        }
    }
}

/// Registered solver names: the projected-subspace method with each tau
/// strategy, the two beta baselines, and steepest descent.
pub const SOLVER_NAMES: [&str; 7] = ["smcg", "smcg_b", "smcg_h", "smcg_1", "hz", "dk", "steepest"];

/// Options for a named solver, on top of a base configuration.
pub fn solver_options(name: &str, base: &SolverOptions) -> Result<SolverOptions, Error> {
    let mut opts = base.clone();
    let (scheme, tau) = match name {
        "smcg" => (DirectionScheme::Smcg, TauStrategy::Adaptive),
        "smcg_b" => (DirectionScheme::Smcg, TauStrategy::B),
        "smcg_h" => (DirectionScheme::Smcg, TauStrategy::H),
        "smcg_1" => (DirectionScheme::Smcg, TauStrategy::One),
        "hz" => (DirectionScheme::Hz, base.tau_strategy),
        "dk" => (DirectionScheme::Dk, base.tau_strategy),
        "steepest" => (DirectionScheme::Steepest, base.tau_strategy),
        other => return Err(Error::UnknownSolver(other.to_string())),
    };
    opts.direction_scheme = scheme;
    opts.tau_strategy = tau;
    Ok(opts)
}

/// A run-matrix request. `problems` may be the single entry "all".
#[derive(Debug, Clone)]
pub struct MatrixConfig {
    pub solvers: Vec<String>,
    pub problems: Vec<String>,
    pub tol: f64,
    pub max_iter: usize,
    pub jobs: usize,
    pub seed: u64,
    pub base: SolverOptions,
}

impl Default for MatrixConfig {
    fn default() -> Self {
        MatrixConfig {
            solvers: vec!["smcg".into()],
            problems: vec!["all".into()],
            tol: 1e-6,
            max_iter: 50_000,
            jobs: 1,
            seed: problems::DEFAULT_SEED,
            base: SolverOptions::default(),
        }
    }
}

fn effective_jobs(requested: usize) -> usize {
    if let Ok(v) = std::env::var("BENCH_JOBS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    requested.max(1)
}

/// Runs every (solver, problem) pair. Names are validated before any run;
/// individual failures are recorded and never abort the matrix. Records
/// come back sorted by (solver, problem) regardless of scheduling.
pub fn run_matrix(cfg: &MatrixConfig) -> Result<Vec<RunRecord>, Error> {
    let corpus = problems::corpus_seeded(cfg.seed);
    let selected: Vec<&ObjectiveProblem> = if cfg.problems.len() == 1 && cfg.problems[0] == "all" {
        corpus.iter().collect()
    } else {
        let mut picked = Vec::new();
        for name in &cfg.problems {
            let p = corpus
                .iter()
                .find(|p| &p.name == name)
                .ok_or_else(|| Error::UnknownProblem(name.clone()))?;
            picked.push(p);
        }
        picked
    };
    let mut option_sets = Vec::new();
    for name in &cfg.solvers {
        let mut opts = solver_options(name, &cfg.base)?;
        opts.eps_grad = cfg.tol;
        opts.max_iter = cfg.max_iter;
        option_sets.push((name.clone(), opts));
    }

    let pairs: Vec<(usize, usize)> = (0..option_sets.len())
        .flat_map(|si| (0..selected.len()).map(move |pi| (si, pi)))
        .collect();
    let next = AtomicUsize::new(0);
    let records = Mutex::new(Vec::with_capacity(pairs.len()));
    let jobs = effective_jobs(cfg.jobs).min(pairs.len().max(1));

    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        if i >= pairs.len() {
            break;
        }
        let (si, pi) = pairs[i];
        let (name, opts) = &option_sets[si];
        let problem = selected[pi];
        let start = Instant::now();
        let rec = match solver::solve(problem, opts) {
            Ok(res) => RunRecord {
                solver: name.clone(),
                problem: problem.name.clone(),
                n_iter: res.n_iter,
                n_f: res.n_f,
                n_g: res.n_g,
                t_cpu: start.elapsed().as_secs_f64(),
                success: res.status == SolverStatus::Converged,
                final_gnorm: res.gnorm_inf,
            },
            Err(_) => RunRecord {
                solver: name.clone(),
                problem: problem.name.clone(),
                n_iter: 0,
                n_f: 0,
                n_g: 0,
                t_cpu: start.elapsed().as_secs_f64(),
                success: false,
                final_gnorm: f64::INFINITY,
            },
        };
        records.lock().unwrap().push(rec);
    };

    if jobs <= 1 {
        worker();
    } else {
        std::thread::scope(|scope| {
            for _ in 0..jobs {
                scope.spawn(worker);
            }
        });
    }

    let mut records = records.into_inner().unwrap();
    records.sort_by(|a, b| (&a.solver, &a.problem).cmp(&(&b.solver, &b.problem)));
    Ok(records)
}

/// One point of the cumulative ratio distribution.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProfilePoint {
    pub tau: f64,
    pub rho: f64,
}

/// The step function rho_s(tau) of one solver, sampled at every breakpoint.
#[derive(Debug, Clone, Serialize)]
pub struct SolverProfile {
    pub solver: String,
    pub points: Vec<ProfilePoint>,
}

/// Dolan–Moré performance profiles: for each problem p,
/// r_{p,s} = m_{p,s} / min_s m_{p,s} (failures get +inf, ties all get 1),
/// and rho_s(tau) is the fraction of problems with r_{p,s} <= tau.
/// Problems on which the metric is zero for every solver are excluded;
/// their names are returned as warnings.
pub fn perf_profile(records: &[RunRecord], metric: Metric) -> (Vec<SolverProfile>, Vec<String>) {
    let mut solvers: Vec<&str> = Vec::new();
    let mut problem_names: Vec<&str> = Vec::new();
    for r in records {
        if !solvers.contains(&r.solver.as_str()) {
            solvers.push(&r.solver);
        }
        if !problem_names.contains(&r.problem.as_str()) {
            problem_names.push(&r.problem);
        }
    }

    let mut excluded = Vec::new();
    // ratios[s][p]
    let mut ratios: Vec<Vec<f64>> = vec![Vec::new(); solvers.len()];
    for &pname in &problem_names {
        let runs: Vec<Option<&RunRecord>> = solvers
            .iter()
            .map(|&s| records.iter().find(|r| r.solver == s && r.problem == pname))
            .collect();
        let best = runs
            .iter()
            .flatten()
            .filter(|r| r.success)
            .map(|r| metric.value(r))
            .fold(f64::INFINITY, f64::min);
        if best == 0.0 {
            let all_zero = runs
                .iter()
                .flatten()
                .filter(|r| r.success)
                .all(|r| metric.value(r) == 0.0);
            if all_zero {
                excluded.push(format!("{pname}: metric is zero for all solvers"));
                continue;
            }
        }
        for (si, run) in runs.iter().enumerate() {
            let ratio = match run {
                Some(r) if r.success => {
                    let m = metric.value(r);
                    if m == best {
                        1.0 // ties with the minimum give ratio 1
                    } else if best == 0.0 {
                        f64::INFINITY
                    } else {
                        m / best
                    }
                }
                _ => f64::INFINITY,
            };
            ratios[si].push(ratio);
        }
    }

    let included = ratios.first().map_or(0, Vec::len);
    let mut breakpoints: Vec<f64> = ratios
        .iter()
        .flatten()
        .copied()
        .filter(|r| r.is_finite())
        .collect();
    breakpoints.push(1.0);
    breakpoints.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breakpoints.dedup();

    let profiles = solvers
        .iter()
        .enumerate()
        .map(|(si, &name)| {
            let points = breakpoints
                .iter()
                .map(|&tau| {
                    let count = ratios[si].iter().filter(|&&r| r <= tau).count();
                    ProfilePoint {
                        tau,
                        rho: if included == 0 {
                            0.0
                        } else {
                            count as f64 / included as f64
                        },
                    }
                })
                .collect();
            SolverProfile {
                solver: name.to_string(),
                points,
            }
        })
        .collect();
    (profiles, excluded)
}

const CSV_HEADER: &str = "solver,problem,n_iter,n_f,n_g,t_cpu,success,final_gnorm";

pub fn records_to_csv(records: &[RunRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{:.6},{},{:e}\n",
            r.solver, r.problem, r.n_iter, r.n_f, r.n_g, r.t_cpu, r.success, r.final_gnorm
        ));
    }
    out
}

pub fn records_from_csv(text: &str, path: &str) -> Result<Vec<RunRecord>, Error> {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    if header.trim() != CSV_HEADER {
        return Err(Error::Parse {
            path: path.into(),
            msg: format!("unexpected header '{header}'"),
        });
    }
    let mut out = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 8 {
            return Err(Error::Parse {
                path: path.into(),
                msg: format!("line {}: expected 8 columns", lineno + 2),
            });
        }
        let parse_err = |what: &str| Error::Parse {
            path: path.into(),
            msg: format!("line {}: bad {what}", lineno + 2),
        };
        out.push(RunRecord {
            solver: cols[0].to_string(),
            problem: cols[1].to_string(),
            n_iter: cols[2].parse().map_err(|_| parse_err("n_iter"))?,
            n_f: cols[3].parse().map_err(|_| parse_err("n_f"))?,
            n_g: cols[4].parse().map_err(|_| parse_err("n_g"))?,
            t_cpu: cols[5].parse().map_err(|_| parse_err("t_cpu"))?,
            success: cols[6].parse().map_err(|_| parse_err("success"))?,
            final_gnorm: cols[7].parse().map_err(|_| parse_err("final_gnorm"))?,
        });
    }
    Ok(out)
}

pub fn profile_to_csv(profiles: &[SolverProfile]) -> String {
    let mut out = String::from("solver,tau,rho\n");
    for p in profiles {
        for pt in &p.points {
            out.push_str(&format!("{},{},{}\n", p.solver, pt.tau, pt.rho));
        }
    }
    out
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Renders the profiles as a standalone SVG: one polyline per solver on a
/// log2 tau axis, plus axes and a legend.
pub fn profile_to_svg(profiles: &[SolverProfile], title: &str) -> String {
    let (w, h) = (760.0, 520.0);
    let (ml, mr, mt, mb) = (60.0, 20.0, 40.0, 50.0);
    let (pw, ph) = (w - ml - mr, h - mt - mb);
    let tau_max = profiles
        .iter()
        .flat_map(|p| p.points.iter().map(|pt| pt.tau))
        .fold(2.0_f64, f64::max);
    let lmax = tau_max.log2();
    let xpos = |tau: f64| ml + pw * (tau.log2() / lmax).clamp(0.0, 1.0);
    let ypos = |rho: f64| mt + ph * (1.0 - rho);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{title}</text>\n",
        ml + pw / 2.0
    ));
    // frame and y ticks
    svg.push_str(&format!(
        "<rect x=\"{ml}\" y=\"{mt}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"#333\"/>\n"
    ));
    for i in 0..=4 {
        let rho = i as f64 / 4.0;
        let y = ypos(rho);
        svg.push_str(&format!(
            "<line x1=\"{ml}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#ddd\"/>\n",
            ml + pw
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{rho:.2}</text>\n",
            ml - 6.0,
            y + 4.0
        ));
    }
    // x ticks at powers of two
    let mut t = 1.0f64;
    while t <= tau_max {
        let x = xpos(t);
        svg.push_str(&format!(
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"#999\"/>\n",
            mt + ph,
            mt + ph + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{t:.0}</text>\n",
            mt + ph + 20.0
        ));
        t *= 2.0;
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">performance ratio tau (log2)</text>\n",
        ml + pw / 2.0,
        h - 12.0
    ));

    for (i, p) in profiles.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = String::new();
        let mut prev_rho = None;
        for pt in &p.points {
            if let Some(pr) = prev_rho {
                // horizontal run up to this breakpoint keeps the step shape
                pts.push_str(&format!("{:.2},{:.2} ", xpos(pt.tau), ypos(pr)));
            }
            pts.push_str(&format!("{:.2},{:.2} ", xpos(pt.tau), ypos(pt.rho)));
            prev_rho = Some(pt.rho);
        }
        // extend the last level to the right edge
        if let Some(pr) = prev_rho {
            pts.push_str(&format!("{:.2},{:.2} ", ml + pw, ypos(pr)));
        }
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            pts.trim_end()
        ));
        // legend entry
        let ly = mt + 16.0 + 18.0 * i as f64;
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"3\"/>\n",
            ml + 10.0,
            ml + 34.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-family=\"sans-serif\" font-size=\"13\">{}</text>\n",
            ml + 40.0,
            ly + 4.0,
            p.solver
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn write_file(path: &str, contents: &str) -> Result<(), Error> {
    let mut file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_string(),
        source,
    })?;
    file.write_all(contents.as_bytes())
        .map_err(|source| Error::Io {
            path: path.to_string(),
            source,
        })
}

pub fn emit_records_csv(records: &[RunRecord], path: &str) -> Result<(), Error> {
    write_file(path, &records_to_csv(records))
}

pub fn emit_records_json(records: &[RunRecord], path: &str) -> Result<(), Error> {
    let json = serde_json::to_string_pretty(records).expect("records serialize");
    write_file(path, &json)
}

pub fn read_records_csv(path: &str) -> Result<Vec<RunRecord>, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_string(),
        source,
    })?;
    records_from_csv(&text, path)
}

pub fn emit_profile_csv(profiles: &[SolverProfile], path: &str) -> Result<(), Error> {
    write_file(path, &profile_to_csv(profiles))
}

pub fn emit_profile_svg(profiles: &[SolverProfile], title: &str, path: &str) -> Result<(), Error> {
    write_file(path, &profile_to_svg(profiles, title))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(solver: &str, problem: &str, nf: usize, success: bool) -> RunRecord {
        RunRecord {
            solver: solver.into(),
            problem: problem.into(),
            n_iter: nf / 2,
            n_f: nf,
            n_g: nf,
            t_cpu: 0.001,
            success,
            final_gnorm: if success { 1e-7 } else { 1e-2 },
        }
    }

    #[test]
    fn profile_hand_computed_fixture() {
        // costs {A: (2, 4), B: (4, 4)}, all solved:
        // rho_A(1) = 1.0, rho_B(1) = 0.5, rho_B(2) = 1.0
        let records = vec![
            rec("A", "p1", 2, true),
            rec("A", "p2", 4, true),
            rec("B", "p1", 4, true),
            rec("B", "p2", 4, true),
        ];
        let (profiles, warn) = perf_profile(&records, Metric::Nf);
        assert!(warn.is_empty());
        assert_eq!(profiles.len(), 2);
        let at =
            |p: &SolverProfile, tau: f64| p.points.iter().rfind(|pt| pt.tau <= tau).unwrap().rho;
        let a = profiles.iter().find(|p| p.solver == "A").unwrap();
        let b = profiles.iter().find(|p| p.solver == "B").unwrap();
        assert_eq!(at(a, 1.0), 1.0);
        assert_eq!(at(b, 1.0), 0.5);
        assert_eq!(at(b, 2.0), 1.0);
    }

    #[test]
    fn single_solver_profile_is_constant_at_solved_fraction() {
        let records = vec![
            rec("A", "p1", 2, true),
            rec("A", "p2", 6, true),
            rec("A", "p3", 6, false),
        ];
        let (profiles, _) = perf_profile(&records, Metric::Nf);
        let a = &profiles[0];
        for pt in &a.points {
            assert!((pt.rho - 2.0 / 3.0).abs() < 1e-15, "rho at {}", pt.tau);
        }
    }

    #[test]
    fn failing_solver_has_zero_profile() {
        let records = vec![rec("A", "p1", 2, true), rec("B", "p1", 9, false)];
        let (profiles, _) = perf_profile(&records, Metric::Nf);
        let b = profiles.iter().find(|p| p.solver == "B").unwrap();
        assert!(b.points.iter().all(|pt| pt.rho == 0.0));
    }

    #[test]
    fn profiles_are_monotone_in_unit_interval() {
        let records = vec![
            rec("A", "p1", 3, true),
            rec("A", "p2", 9, true),
            rec("B", "p1", 5, true),
            rec("B", "p2", 4, true),
            rec("C", "p1", 5, false),
            rec("C", "p2", 4, true),
        ];
        for metric in [Metric::Iter, Metric::Nf, Metric::NfPlus3Ng] {
            let (profiles, _) = perf_profile(&records, metric);
            for p in &profiles {
                let mut last = 0.0;
                for pt in &p.points {
                    assert!(pt.rho >= last && (0.0..=1.0).contains(&pt.rho));
                    last = pt.rho;
                }
            }
            // someone attains the minimum on every solved problem
            let rho1_sum: f64 = profiles.iter().map(|p| p.points[0].rho).sum();
            assert!(rho1_sum >= 0.5);
        }
    }

    #[test]
    fn all_zero_metric_excludes_problem_with_warning() {
        let mut r1 = rec("A", "p1", 0, true);
        r1.n_iter = 0;
        let mut r2 = rec("B", "p1", 0, true);
        r2.n_iter = 0;
        let records = vec![r1, r2, rec("A", "p2", 2, true), rec("B", "p2", 3, true)];
        let (profiles, warn) = perf_profile(&records, Metric::Iter);
        assert_eq!(warn.len(), 1);
        assert!(warn[0].contains("p1"));
        // only p2 remains
        let a = profiles.iter().find(|p| p.solver == "A").unwrap();
        assert_eq!(a.points.last().unwrap().rho, 1.0);
    }

    #[test]
    fn csv_round_trip() {
        let records = vec![rec("smcg", "beale", 31, true), rec("hz", "wood", 77, false)];
        let csv = records_to_csv(&records);
        assert!(csv.starts_with(CSV_HEADER));
        assert_eq!(csv.lines().count(), 3);
        let back = records_from_csv(&csv, "test").unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn json_round_trip() {
        let records = vec![rec("smcg", "beale", 31, true)];
        let json = serde_json::to_string(&records).unwrap();
        let back: Vec<RunRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, records);
    }

    #[test]
    fn svg_contains_polylines_and_legend() {
        let records = vec![
            rec("A", "p1", 2, true),
            rec("A", "p2", 4, true),
            rec("B", "p1", 4, true),
            rec("B", "p2", 4, true),
        ];
        let (profiles, _) = perf_profile(&records, Metric::Nf);
        let svg = profile_to_svg(&profiles, "test profile");
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains(">A</text>"));
        assert!(svg.contains(">B</text>"));
        assert!(svg.contains("</svg>"));
    }

    #[test]
    fn matrix_runs_and_is_deterministic() {
        let cfg = MatrixConfig {
            solvers: vec!["smcg".into(), "steepest".into()],
            problems: vec!["rosenbrock_2".into(), "beale".into()],
            tol: 1e-6,
            max_iter: 5000,
            ..MatrixConfig::default()
        };
        let a = run_matrix(&cfg).unwrap();
        assert_eq!(a.len(), 4);
        let b = run_matrix(&cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.solver, y.solver);
            assert_eq!(x.problem, y.problem);
            assert_eq!(x.n_iter, y.n_iter);
            assert_eq!(x.n_f, y.n_f);
            assert_eq!(x.n_g, y.n_g);
            // t_cpu may differ
        }
    }

    #[test]
    fn matrix_tolerates_failures_and_parallelism() {
        // steepest on an ill-conditioned quadratic under a tight cap fails;
        // the matrix still completes
        let cfg = MatrixConfig {
            solvers: vec!["steepest".into(), "smcg".into()],
            problems: vec!["quad_n20_k100000".into()],
            tol: 1e-6,
            max_iter: 60,
            jobs: 4,
            ..MatrixConfig::default()
        };
        let recs = run_matrix(&cfg).unwrap();
        assert_eq!(recs.len(), 2);
        let steepest = recs.iter().find(|r| r.solver == "steepest").unwrap();
        assert!(!steepest.success);
    }

    #[test]
    fn matrix_rejects_unknown_names() {
        let cfg = MatrixConfig {
            solvers: vec!["nope".into()],
            ..MatrixConfig::default()
        };
        assert!(matches!(run_matrix(&cfg), Err(Error::UnknownSolver(_))));
        let cfg = MatrixConfig {
            problems: vec!["nope".into()],
            ..MatrixConfig::default()
        };
        assert!(matches!(run_matrix(&cfg), Err(Error::UnknownProblem(_))));
    }
}
