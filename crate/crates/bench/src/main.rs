//! Benchmark CLI: runs (solver x problem) matrices, emits Dolan–Moré
//! performance profiles, and exposes the library's invariant battery.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use smcg::bench::{self, MatrixConfig, Metric};
use smcg::model::SolverOptions;
use smcg::problems;

#[derive(Parser)]
#[command(name = "bench")]
#[command(about = "Benchmark harness for subspace minimization CG solvers")]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Run a (solver x problem) matrix and record per-run metrics
    Run {
        /// Comma-separated solver names (smcg, smcg_b, smcg_h, smcg_1, hz, dk, steepest)
        #[arg(long, default_value = "smcg,hz,dk,steepest")]
        solvers: String,
        /// Comma-separated problem names, or "all" for the built-in corpus
        #[arg(long, default_value = "all")]
        problems: String,
        /// Termination tolerance on ||g||_inf
        #[arg(long, default_value = "1e-6")]
        tol: f64,
        /// Iteration cap per run
        #[arg(long, default_value = "50000")]
        max_iter: usize,
        /// Output CSV path
        #[arg(long, default_value = "results.csv")]
        out: String,
        /// Also mirror the records to a JSON file
        #[arg(long)]
        json: Option<String>,
        /// Worker threads over (solver, problem) pairs; BENCH_JOBS overrides
        #[arg(long, default_value = "1")]
        jobs: usize,
        /// Seed for the generated quadratic instances
        #[arg(long, default_value_t = problems::DEFAULT_SEED)]
        seed: u64,
        /// JSON file with solver options overriding the defaults
        #[arg(long)]
        options: Option<String>,
    },
    /// Turn recorded runs into performance profiles
    Profile {
        /// Cost metric: iter | nf | ng | nf_plus_3ng | time
        #[arg(long, default_value = "nf_plus_3ng")]
        metric: String,
        /// Input records CSV (from `bench run`)
        #[arg(long = "in")]
        input: String,
        /// SVG output path
        #[arg(long)]
        svg: Option<String>,
        /// Profile CSV output path (solver,tau,rho)
        #[arg(long)]
        csv: Option<String>,
    },
    /// List registered solvers and corpus problems
    List {
        /// Seed for the generated quadratic instances
        #[arg(long, default_value_t = problems::DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the full invariant/property suite and report pass/fail per check
    Check {
        /// Reduced sample counts for a fast smoke pass
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Commands::Run {
            solvers,
            problems,
            tol,
            max_iter,
            out,
            json,
            jobs,
            seed,
            options,
        } => {
            let base = match options {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {path}"))?;
                    let opts: SolverOptions =
                        serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
                    smcg::model::validate_options(opts)?
                }
                None => SolverOptions::default(),
            };
            let cfg = MatrixConfig {
                solvers: split(&solvers),
                problems: split(&problems),
                tol,
                max_iter,
                jobs,
                seed,
                base,
            };
            let records = bench::run_matrix(&cfg)?;
            bench::emit_records_csv(&records, &out)?;
            if let Some(path) = json {
                bench::emit_records_json(&records, &path)?;
            }
            let solved = records.iter().filter(|r| r.success).count();
            println!(
                "{} runs, {} converged, records written to {}",
                records.len(),
                solved,
                out
            );
            for r in &records {
                if !r.success {
                    println!(
                        "  unsolved: {:>9} on {:<16} final ||g|| = {:.3e}",
                        r.solver, r.problem, r.final_gnorm
                    );
                }
            }
        }
        Commands::Profile {
            metric,
            input,
            svg,
            csv,
        } => {
            let metric = Metric::parse(&metric)?;
            let records = bench::read_records_csv(&input)?;
            let (profiles, warnings) = bench::perf_profile(&records, metric);
            for w in &warnings {
                eprintln!("warning: excluded {w}");
            }
            if let Some(path) = &csv {
                bench::emit_profile_csv(&profiles, path)?;
                println!("profile CSV written to {path}");
            }
            if let Some(path) = &svg {
                let title = format!("performance profile ({})", metric_label(metric));
                bench::emit_profile_svg(&profiles, &title, path)?;
                println!("profile SVG written to {path}");
            }
            if csv.is_none() && svg.is_none() {
                // print rho at a few landmark ratios
                println!("{:<10} rho(1)  rho(2)  rho(4)  rho(max)", "solver");
                for p in &profiles {
                    let at = |tau: f64| {
                        p.points
                            .iter()
                            .rfind(|pt| pt.tau <= tau)
                            .map_or(0.0, |pt| pt.rho)
                    };
                    let last = p.points.last().map_or(0.0, |pt| pt.rho);
                    println!(
                        "{:<10} {:.3}   {:.3}   {:.3}   {:.3}",
                        p.solver,
                        at(1.0),
                        at(2.0),
                        at(4.0),
                        last
                    );
                }
            }
        }
        Commands::List { seed } => {
            println!("solvers:");
            for s in bench::SOLVER_NAMES {
                println!("  {s}");
            }
            println!("problems (seed {seed}):");
            for p in problems::corpus_seeded(seed) {
                println!("  {:<18} n = {}", p.name, p.n);
            }
        }
        Commands::Check { quick } => {
            let outcomes = smcg::checks::run_all(quick);
            let mut failed = 0;
            for c in &outcomes {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                println!("{tag}  {:<28} {}", c.name, c.detail);
                if !c.passed {
                    failed += 1;
                }
            }
            if failed > 0 {
                bail!("{failed} of {} checks failed", outcomes.len());
            }
            println!("all {} checks passed", outcomes.len());
        }
    }
    Ok(())
}

fn split(list: &str) -> Vec<String> {
    list.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn metric_label(metric: Metric) -> &'static str {
    match metric {
        Metric::Iter => "iterations",
        Metric::Nf => "function evaluations",
        Metric::Ng => "gradient evaluations",
        Metric::NfPlus3Ng => "nf + 3 ng",
        Metric::Time => "cpu time",
    }
}
