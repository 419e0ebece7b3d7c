use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use mmm_core::bounds::{mmlb_with, MmlbConfig};
use mmm_core::deadline::Deadline;
use mmm_core::exact::{brute_force_pool, dp_knapsack, export_master_lp, rcg, DpVariant, RcgConfig};
use mmm_core::experiment::{aggregate, generate, run_experiment, write_aggregate_csv, write_csv, ExperimentConfig, Family};
use mmm_core::heuristics::{heur1, heur2, heurps};
use mmm_core::instance::{InstanceFile, PoolFile, ScenarioFile};
use mmm_core::minmax::minmax;
use mmm_core::scenario::evaluate_pool;
use mmm_core::{Cost, SolutionPool};

/// Min-max-min robust optimization under discrete budgeted uncertainty
#[derive(Parser, Debug)]
#[command(author, version, about, long_about = None)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Knapsack,
    ShortestPath,
    Selection,
    Unconstrained,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Knapsack => Family::Knapsack,
            FamilyArg::ShortestPath => Family::ShortestPath,
            FamilyArg::Selection => Family::Selection,
            FamilyArg::Unconstrained => Family::Unconstrained,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Mm,
    Heur1,
    Heur2,
    Heurps,
    Rcg,
    Dp,
    Brute,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random instance file
    Generate {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Item count, or node count for shortest path
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Budget stored in the file
        #[arg(long, default_value_t = 0)]
        gamma: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute a pool of K solutions
    Solve {
        instance: PathBuf,
        #[arg(long)]
        gamma: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Seed of the Pareto-scenario baseline
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Wall-clock limit in seconds for row-and-column generation
        #[arg(long)]
        time_limit: Option<f64>,
        /// Write the pool here
        #[arg(long)]
        pool_out: Option<PathBuf>,
        /// Write the row-and-column generation trace as CSV
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Max-min lower bound
    Bound {
        instance: PathBuf,
        #[arg(long)]
        gamma: Option<usize>,
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Worst case of a pool file
    Evaluate {
        instance: PathBuf,
        pool: PathBuf,
        #[arg(long)]
        gamma: Option<usize>,
    },
    /// Run an experiment config and write result rows as CSV
    Experiment {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write per-cell means
        #[arg(long)]
        aggregate: Option<PathBuf>,
    },
    /// Export the restricted master over a scenario file in LP format
    ExportLp {
        instance: PathBuf,
        #[arg(long)]
        scenarios: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        gamma: Option<usize>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn load(path: &Path) -> anyhow::Result<InstanceFile> {
    InstanceFile::load(path).with_context(|| format!("reading {}", path.display()))
}

fn show(value: Cost, scale: Cost) -> String {
    if scale == 1 {
        value.to_string()
    } else {
        format!("{value} ({:.4} in instance units)", value as f64 / scale as f64)
    }
}

fn main() -> anyhow::Result<()> {
    let args = Args::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();

    match args.command {
        Command::Generate {
            family,
            size,
            seed,
            gamma,
            output,
        } => {
            let mut file = generate(family.into(), size, seed)?;
            if gamma > file.n {
                bail!("gamma {gamma} exceeds n = {}", file.n);
            }
            file.gamma = gamma;
            match output {
                Some(path) => file.save(&path)?,
                None => writeln!(out, "{}", file.to_json()?)?,
            }
        }
        Command::Solve {
            instance,
            gamma,
            k,
            method,
            seed,
            time_limit,
            pool_out,
            trace,
        } => {
            let file = load(&instance)?;
            let (p, set) = file.build(gamma)?;
            let mut extra = Vec::new();
            let pool: SolutionPool = match method {
                MethodArg::Mm => {
                    let r = minmax(&p, &set)?;
                    SolutionPool::repeat(r.solution, k)
                }
                MethodArg::Heur1 => heur1(&p, &set, k, None)?.pool,
                MethodArg::Heur2 => {
                    let r = heur2(&p, &set, k)?;
                    extra.push(format!("optimal {}", r.optimal));
                    r.pool
                }
                MethodArg::Heurps => heurps(&p, &set, k, seed)?.pool,
                MethodArg::Rcg => {
                    let cfg = RcgConfig {
                        deadline: Deadline::from_secs(time_limit),
                        ..Default::default()
                    };
                    let r = rcg(&p, &set, k, &cfg)?;
                    extra.push(format!("lower_bound {}", show(r.state.lower_bound, file.cost_scale)));
                    extra.push(format!("iterations {}", r.state.iterations));
                    extra.push(format!("time_limited {}", r.result.limited));
                    if let Some(path) = trace {
                        let mut w = fs::File::create(&path)?;
                        writeln!(w, "iteration,lower_bound,upper_bound,scenarios,elapsed_secs")?;
                        for t in &r.state.trace {
                            writeln!(
                                w,
                                "{},{},{},{},{}",
                                t.iteration, t.lower_bound, t.upper_bound, t.scenarios, t.elapsed_secs
                            )?;
                        }
                    }
                    r.result.pool
                }
                MethodArg::Dp => dp_knapsack(&p, &set, k, DpVariant::Min)?.result.pool,
                MethodArg::Brute => brute_force_pool(&p, &set, k)?.pool,
            };
            let eval = evaluate_pool(&set, &pool)?;
            writeln!(out, "value {}", show(eval.value, file.cost_scale))?;
            writeln!(out, "worst_scenario {}", eval.worst_scenario)?;
            for line in extra {
                writeln!(out, "{line}")?;
            }
            for (i, x) in pool.solutions().iter().enumerate() {
                writeln!(out, "x{} {x}", i + 1)?;
            }
            if let Some(path) = pool_out {
                PoolFile::new(&pool).save(&path)?;
            }
        }
        Command::Bound {
            instance,
            gamma,
            time_limit,
        } => {
            let file = load(&instance)?;
            let (p, set) = file.build(gamma)?;
            let cfg = MmlbConfig {
                deadline: Deadline::from_secs(time_limit),
                ..Default::default()
            };
            let r = mmlb_with(&p, &set, &cfg)?;
            writeln!(out, "lower_bound {}", show(r.value, file.cost_scale))?;
            writeln!(out, "scenario {}", r.scenario)?;
            writeln!(out, "solution {}", r.solution)?;
            writeln!(out, "iterations {}", r.state.iterations)?;
            writeln!(out, "time_limited {}", r.limited)?;
        }
        Command::Evaluate { instance, pool, gamma } => {
            let file = load(&instance)?;
            let (p, set) = file.build(gamma)?;
            let pool = PoolFile::load(&pool)?.pool()?;
            if let Some(x) = pool.solutions().iter().find(|x| !p.is_feasible(x)) {
                bail!("pool member {x} is infeasible");
            }
            let eval = evaluate_pool(&set, &pool)?;
            writeln!(out, "value {}", show(eval.value, file.cost_scale))?;
            writeln!(out, "worst_scenario {}", eval.worst_scenario)?;
            writeln!(out, "argmin {}", eval.argmin_index + 1)?;
        }
        Command::Experiment {
            config,
            output,
            aggregate: agg_path,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let rows = run_experiment(&cfg)?;
            match output {
                Some(path) => write_csv(&rows, fs::File::create(path)?)?,
                None => write_csv(&rows, &mut out)?,
            }
            if let Some(path) = agg_path {
                write_aggregate_csv(&aggregate(&rows), fs::File::create(path)?)?;
            }
        }
        Command::ExportLp {
            instance,
            scenarios,
            k,
            gamma,
            output,
        } => {
            let file = load(&instance)?;
            let (p, set) = file.build(gamma)?;
            let list = ScenarioFile::load(&scenarios)?.scenarios()?;
            let costs = list
                .iter()
                .map(|s| set.induced_cost(s))
                .collect::<Result<Vec<_>, _>>()?;
            let stats = export_master_lp(&p, &costs, k, &output)?;
            writeln!(out, "variables {}", stats.variables)?;
            writeln!(out, "constraints {}", stats.constraints)?;
        }
    }
    Ok(())
}
