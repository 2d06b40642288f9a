use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use clap::Args;
use rayon::prelude::*;
use serde_json::json;

use super::{Format, EXIT_ERROR, EXIT_INFEASIBLE, EXIT_OK, RUN_SCHEMA};
use crate::graph::surplus_dynamic_stations;
use crate::ils::{report, IlsError, IlsParams, IlsResult};
use crate::model::io::{read_instance, write_solution, INSTANCE_SCHEMA, SOLUTION_SCHEMA};
use crate::model::{Instance, Solution};

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Instance file; repeat for a batch.
    #[arg(long, required = true, num_args = 1..)]
    pub instance: Vec<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Wall-clock limit in seconds; 0 disables it.
    #[arg(long, default_value_t = 60.0)]
    pub time_limit: f64,
    #[arg(long)]
    pub max_iterations: Option<u64>,
    /// Stop once the best cost is at or below this value.
    #[arg(long)]
    pub target: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub phi: usize,
    #[arg(long, default_value_t = 10)]
    pub xi_max: usize,
    #[arg(long, default_value_t = 2)]
    pub zeta: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 250_000)]
    pub beta_min: u64,
    #[arg(long, default_value_t = 4)]
    pub kappa: usize,
    #[arg(long, env = "INDUCT_THREADS", default_value_t = 1)]
    pub threads: usize,
    /// Log every search step.
    #[arg(long)]
    pub trace: bool,
    /// Summary format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

impl SolveArgs {
    pub fn params(&self, parallel: bool) -> IlsParams {
        IlsParams {
            phi: self.phi,
            xi_max: self.xi_max,
            zeta: self.zeta,
            epsilon: self.epsilon,
            kappa: self.kappa,
            beta_min: self.beta_min,
            time_limit: (self.time_limit > 0.0).then(|| Duration::from_secs_f64(self.time_limit)),
            max_iterations: self.max_iterations,
            target: self.target,
            seed: self.seed,
            parallel,
            trace: self.trace,
            ..IlsParams::default()
        }
    }
}

enum Outcome {
    Solved(Box<IlsResult>),
    Infeasible(u64),
}

struct Run {
    stem: String,
    path: PathBuf,
    instance: Option<Instance>,
    outcome: Result<Outcome>,
    wall: Duration,
}

fn stems(paths: &[PathBuf]) -> Vec<String> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    paths
        .iter()
        .map(|p| {
            let stem = p.file_stem().map_or("instance".into(), |s| s.to_string_lossy().into_owned());
            let n = seen.entry(stem.clone()).or_insert(0);
            *n += 1;
            if *n == 1 {
                stem
            } else {
                format!("{stem}-{n}")
            }
        })
        .collect()
}

fn solve_one(path: &Path, stem: String, params: IlsParams) -> Run {
    let start = Instant::now();
    let instance = match read_instance(path) {
        Ok(i) => i,
        Err(e) => {
            return Run {
                stem,
                path: path.to_path_buf(),
                instance: None,
                outcome: Err(anyhow::Error::new(e).context(format!("reading {}", path.display()))),
                wall: start.elapsed(),
            }
        }
    };
    let outcome = match crate::ils::run(&instance, params) {
        Ok(r) => Ok(Outcome::Solved(Box::new(r))),
        Err(IlsError::NoFeasibleInitialization { draws }) => Ok(Outcome::Infeasible(draws)),
        Err(e) => Err(e.into()),
    };
    Run { stem, path: path.to_path_buf(), instance: Some(instance), outcome, wall: start.elapsed() }
}

fn costs_csv(instance: &Instance, solution: &Solution) -> String {
    let mut out = String::from("scope,infrastructure,consumption,recharge,total\n");
    for p in &solution.plans {
        let name = &instance.vehicles[p.vehicle].name;
        let _ = writeln!(out, "{name},0,{:.9},{:.9},{:.9}", p.consumption_cost, p.recharge_cost, p.cost());
    }
    let cons: f64 = solution.plans.iter().map(|p| p.consumption_cost).sum();
    let rech: f64 = solution.plans.iter().map(|p| p.recharge_cost).sum();
    let _ = writeln!(out, "total,{:.9},{cons:.9},{rech:.9},{:.9}", solution.infrastructure_cost, solution.total_cost);
    out
}

fn params_json(p: &IlsParams) -> serde_json::Value {
    json!({
        "phi": p.phi,
        "xi_max": p.xi_max,
        "zeta": p.zeta,
        "epsilon": p.epsilon,
        "kappa": p.kappa,
        "beta_min": p.beta_min,
        "time_limit_s": p.time_limit.map(|d| d.as_secs_f64()),
        "max_iterations": p.max_iterations,
        "target": p.target,
        "seed": p.seed,
        "max_init_draws": p.max_init_draws,
        "parallel": p.parallel,
        "trace": p.trace,
    })
}

fn write_outputs(out: &Path, run: &Run, params: &IlsParams, threads: usize) -> Result<()> {
    let instance = run.instance.as_ref().expect("only called for parsed instances");
    let file = |ext: &str| out.join(format!("{}.{ext}", run.stem));
    let surplus = surplus_dynamic_stations(instance);
    let mut meta = json!({
        "schema": RUN_SCHEMA,
        "instance_schema": INSTANCE_SCHEMA,
        "solution_schema": SOLUTION_SCHEMA,
        "version": env!("CARGO_PKG_VERSION"),
        "instance": instance.name,
        "instance_path": run.path.display().to_string(),
        "seed": params.seed,
        "params": params_json(params),
        "threads": threads,
        "wall_time_s": run.wall.as_secs_f64(),
        "conservative_pruning": !surplus.is_empty(),
        "surplus_dynamic_stations": surplus,
    });
    match run.outcome.as_ref().expect("only called for finished runs") {
        Outcome::Solved(r) => {
            write_solution(&file("solution.json"), instance, &r.solution)?;
            fs::write(file("costs.csv"), costs_csv(instance, &r.solution))?;
            fs::write(file("trajectory.csv"), report::trajectory_csv(&r.stats))?;
            fs::write(file("operators.csv"), report::operators_csv(&r.stats))?;
            meta["status"] = json!("feasible");
            meta["total_cost"] = json!(r.solution.total_cost);
            meta["iterations"] = json!(r.stats.iterations);
            meta["evaluations"] = json!(r.stats.eval.requests);
            meta["stopped_by"] = json!(r.stats.stopped_by.name());
            meta["search_time_s"] = json!(r.stats.elapsed.as_secs_f64());
            meta["trajectory_elapsed_s"] = json!(r.stats.trajectory.iter().map(|p| p.elapsed.as_secs_f64()).collect::<Vec<_>>());
        }
        Outcome::Infeasible(draws) => {
            meta["status"] = json!("infeasible");
            meta["init_draws"] = json!(draws);
        }
    }
    fs::write(file("meta.json"), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

fn summary(run: &Run, format: Format) -> String {
    let name = &run.stem;
    match (&run.outcome, format) {
        (Ok(Outcome::Solved(r)), Format::Text) => {
            let s = &r.solution;
            format!(
                "{name}: total {:.6} (infrastructure {:.6}, operation {:.6}), built {}, {} iterations, stopped by {}\n",
                s.total_cost,
                s.infrastructure_cost,
                s.operational_cost,
                s.configuration.to_bits(),
                r.stats.iterations,
                r.stats.stopped_by.name()
            )
        }
        (Ok(Outcome::Infeasible(d)), Format::Text) => format!("{name}: no feasible configuration after {d} draws\n"),
        (Err(e), Format::Text) => format!("{name}: error: {e:#}\n"),
        (_, Format::Csv) => aggregate_row(run),
    }
}

const AGGREGATE_HEADER: &str = "instance,status,total,infrastructure,operational,configuration,iterations,evaluations,stopped_by\n";

fn aggregate_row(run: &Run) -> String {
    match &run.outcome {
        Ok(Outcome::Solved(r)) => {
            let s = &r.solution;
            format!(
                "{},feasible,{:.9},{:.9},{:.9},{},{},{},{}\n",
                run.stem,
                s.total_cost,
                s.infrastructure_cost,
                s.operational_cost,
                s.configuration.to_bits(),
                r.stats.iterations,
                r.stats.eval.requests,
                r.stats.stopped_by.name()
            )
        }
        Ok(Outcome::Infeasible(_)) => format!("{},infeasible,,,,,,,\n", run.stem),
        Err(_) => format!("{},error,,,,,,,\n", run.stem),
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let threads = args.threads.max(1);
    let batch = args.instance.len() > 1;
    let params = args.params(threads > 1 && !batch);
    params.validate()?;
    let names = stems(&args.instance);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let runs: Vec<Run> = pool.install(|| {
        args.instance
            .par_iter()
            .zip(names)
            .map(|(p, stem)| solve_one(p, stem, params.clone()))
            .collect()
    });
    let mut code = EXIT_OK;
    let mut stdout = String::new();
    if args.format == Format::Csv {
        stdout.push_str(AGGREGATE_HEADER);
    }
    for run in &runs {
        match &run.outcome {
            Ok(outcome) => {
                write_outputs(&args.out, run, &params, threads)?;
                if matches!(outcome, Outcome::Infeasible(_)) && code == EXIT_OK {
                    code = EXIT_INFEASIBLE;
                }
            }
            Err(e) => {
                log::error!("{}: {e:#}", run.path.display());
                code = EXIT_ERROR;
            }
        }
        stdout.push_str(&summary(run, args.format));
    }
    if batch {
        let mut agg = String::from(AGGREGATE_HEADER);
        for run in &runs {
            agg.push_str(&aggregate_row(run));
        }
        fs::write(args.out.join("aggregate.csv"), agg)?;
    }
    print!("{stdout}");
    Ok(code)
}
