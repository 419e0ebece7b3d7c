//! Batch experiments: generate instances, run methods over budgets and pool
//! sizes, and report gaps against the max-min lower bound as CSV.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{mmlb_with, MmlbConfig};
use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::exact::{brute_force_pool, dp_knapsack, rcg, DpVariant, RcgConfig};
use crate::generate::{gen_knapsack, gen_selection, gen_shortest_path, gen_unconstrained};
use crate::heuristics::{heur1, heur2, heurps};
use crate::instance::InstanceFile;
use crate::minmax::minmax;
use crate::model::{BudgetedSet, Cost};
use crate::problems::DeterministicProblem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Knapsack,
    ShortestPath,
    Selection,
    Unconstrained,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Knapsack => "knapsack",
            Family::ShortestPath => "shortest-path",
            Family::Selection => "selection",
            Family::Unconstrained => "unconstrained",
        })
    }
}

/// Generates the instance of `family` with generator size `size`. Selection
/// picks half of the items (rounded down, at least one).
pub fn generate(family: Family, size: usize, seed: u64) -> Result<InstanceFile> {
    match family {
        Family::Knapsack => gen_knapsack(size, seed),
        Family::ShortestPath => gen_shortest_path(size, seed),
        Family::Selection => gen_selection(size, (size / 2).max(1), seed),
        Family::Unconstrained => gen_unconstrained(size, seed),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mm,
    Heur1,
    Heur2,
    Heurps,
    Rcg,
    Dp,
    Mmlb,
    Brute,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Mm => "MM",
            Method::Heur1 => "Heur1",
            Method::Heur2 => "Heur2",
            Method::Heurps => "HeurPS",
            Method::Rcg => "RCG",
            Method::Dp => "DP",
            Method::Mmlb => "MMLB",
            Method::Brute => "Brute",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn default_methods() -> Vec<Method> {
    vec![Method::Mm, Method::Heur1, Method::Heur2, Method::Heurps]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    /// Item count (node count for shortest path) per generated instance.
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub gammas: Vec<usize>,
    pub ks: Vec<usize>,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    /// Wall-clock limit per run in seconds, for the iterative methods.
    #[serde(default)]
    pub time_limit_secs: Option<f64>,
    #[serde(default)]
    pub heurps_seed: u64,
    #[serde(default = "yes")]
    pub parallel: bool,
}

fn yes() -> bool {
    true
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}

/// One run. `value` and bounds are in integer cost units; divide by `scale`
/// for instance units. Gaps are `100 (value - lower_bound) / lower_bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub family: Family,
    pub size: usize,
    pub n: usize,
    pub gamma: usize,
    pub k: usize,
    pub method: String,
    pub value: Option<Cost>,
    /// The max-min lower bound of the instance.
    pub lower_bound: Option<Cost>,
    pub gap_percent: Option<f64>,
    /// The method's own proven bound (row-and-column generation).
    pub method_bound: Option<Cost>,
    pub opt_gap_percent: Option<f64>,
    pub iterations: Option<usize>,
    pub elapsed_secs: f64,
    pub time_limited: bool,
    pub optimal: bool,
    pub scale: Cost,
    pub error: Option<String>,
}

fn gap(value: Cost, lb: Cost) -> Option<f64> {
    (lb > 0).then(|| 100.0 * (value - lb) as f64 / lb as f64)
}

#[derive(Clone, Debug, Default)]
struct Outcome {
    value: Cost,
    method_bound: Option<Cost>,
    iterations: Option<usize>,
    limited: bool,
    optimal: bool,
}

struct Prepared {
    id: String,
    size: usize,
    file: InstanceFile,
}

fn run_method(
    method: Method,
    p: &DeterministicProblem,
    set: &BudgetedSet,
    k: usize,
    config: &ExperimentConfig,
) -> Result<Outcome> {
    let deadline = Deadline::from_secs(config.time_limit_secs);
    let plain = |value| Outcome {
        value,
        ..Default::default()
    };
    Ok(match method {
        Method::Mm => plain(minmax(p, set)?.value),
        Method::Heur1 => plain(heur1(p, set, k, None)?.value()),
        Method::Heur2 => {
            let r = heur2(p, set, k)?;
            Outcome {
                value: r.value(),
                optimal: r.optimal,
                ..Default::default()
            }
        }
        Method::Heurps => plain(heurps(p, set, k, config.heurps_seed)?.value()),
        Method::Rcg => {
            let cfg = RcgConfig {
                deadline,
                ..Default::default()
            };
            let r = rcg(p, set, k, &cfg)?;
            Outcome {
                value: r.result.value(),
                method_bound: Some(r.state.lower_bound),
                iterations: Some(r.state.iterations),
                limited: r.result.limited,
                optimal: !r.result.limited,
            }
        }
        Method::Dp => {
            let r = dp_knapsack(p, set, k, DpVariant::Min)?;
            Outcome {
                value: r.result.value(),
                optimal: true,
                ..Default::default()
            }
        }
        Method::Mmlb => {
            let r = mmlb_with(
                p,
                set,
                &MmlbConfig {
                    deadline,
                    ..Default::default()
                },
            )?;
            Outcome {
                value: r.value,
                iterations: Some(r.state.iterations),
                limited: r.limited,
                ..Default::default()
            }
        }
        Method::Brute => Outcome {
            optimal: true,
            ..plain(brute_force_pool(p, set, k)?.value())
        },
    })
}

/// Runs every instance x budget x pool size x method. Failures become rows
/// with `error` set. Rows are sorted by instance, budget, pool size, method.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    if config.ks.contains(&0) {
        return Err(Error::Invalid("pool sizes must be positive".into()));
    }
    let mut prepared = Vec::new();
    for &size in &config.sizes {
        for &seed in &config.seeds {
            prepared.push(Prepared {
                id: format!("{}-{size}-{seed}", config.family),
                size,
                file: generate(config.family, size, seed)?,
            });
        }
    }
    let mut jobs = Vec::new();
    for (i, _) in prepared.iter().enumerate() {
        for &gamma in &config.gammas {
            for &k in &config.ks {
                for &m in &config.methods {
                    jobs.push((i, gamma, k, m));
                }
            }
        }
    }
    let bounds: Vec<((usize, usize), Option<Cost>)> = {
        let pairs: Vec<(usize, usize)> = (0..prepared.len())
            .flat_map(|i| config.gammas.iter().map(move |&g| (i, g)))
            .collect();
        let lb = |&(i, g): &(usize, usize)| {
            let bound = prepared[i].file.build(Some(g)).ok().and_then(|(p, set)| {
                let cfg = MmlbConfig {
                    deadline: Deadline::from_secs(config.time_limit_secs),
                    ..Default::default()
                };
                mmlb_with(&p, &set, &cfg).ok().map(|r| r.value)
            });
            ((i, g), bound)
        };
        if config.parallel {
            pairs.par_iter().map(lb).collect()
        } else {
            pairs.iter().map(lb).collect()
        }
    };
    let bound_of = |i: usize, g: usize| {
        bounds
            .iter()
            .find(|(key, _)| *key == (i, g))
            .and_then(|(_, b)| *b)
    };

    let run = |&(i, gamma, k, method): &(usize, usize, usize, Method)| {
        let inst = &prepared[i];
        let lb = bound_of(i, gamma);
        let start = Instant::now();
        let outcome = inst
            .file
            .build(Some(gamma))
            .and_then(|(p, set)| run_method(method, &p, &set, k, config));
        let elapsed_secs = start.elapsed().as_secs_f64();
        let mut row = ResultRow {
            instance: inst.id.clone(),
            family: config.family,
            size: inst.size,
            n: inst.file.n,
            gamma,
            k,
            method: method.label().into(),
            value: None,
            lower_bound: lb,
            gap_percent: None,
            method_bound: None,
            opt_gap_percent: None,
            iterations: None,
            elapsed_secs,
            time_limited: false,
            optimal: false,
            scale: inst.file.cost_scale,
            error: None,
        };
        match outcome {
            Ok(o) => {
                row.value = Some(o.value);
                row.gap_percent = lb.and_then(|lb| gap(o.value, lb));
                row.method_bound = o.method_bound;
                row.opt_gap_percent = o.method_bound.and_then(|b| gap(o.value, b));
                row.iterations = o.iterations;
                row.time_limited = o.limited;
                row.optimal = o.optimal;
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        (i, gamma, k, method, row)
    };
    let mut rows: Vec<_> = if config.parallel {
        jobs.par_iter().map(run).collect()
    } else {
        jobs.iter().map(run).collect()
    };
    rows.sort_by_key(|(i, g, k, m, _)| (*i, *g, *k, *m));
    Ok(rows.into_iter().map(|(.., r)| r).collect())
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(text: &str) -> Result<Vec<ResultRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(e.to_string()))
}

/// Means over seeds for one table cell, rounded to one decimal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub family: Family,
    pub size: usize,
    pub gamma: usize,
    pub k: usize,
    pub method: String,
    pub runs: usize,
    /// Runs that finished without error and without hitting a limit.
    pub solved: usize,
    pub mean_gap_percent: Option<f64>,
    pub mean_opt_gap_percent: Option<f64>,
    pub mean_elapsed_secs: f64,
    pub mean_iterations: Option<f64>,
}

fn one_decimal(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}

fn mean(v: &[f64]) -> Option<f64> {
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

pub fn aggregate(rows: &[ResultRow]) -> Vec<AggregateRow> {
    let mut keys: Vec<(Family, usize, usize, usize, String)> = rows
        .iter()
        .map(|r| (r.family, r.size, r.gamma, r.k, r.method.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(family, size, gamma, k, method)| {
            let cell: Vec<&ResultRow> = rows
                .iter()
                .filter(|r| (r.family, r.size, r.gamma, r.k) == (family, size, gamma, k) && r.method == method)
                .collect();
            let gaps: Vec<f64> = cell.iter().filter_map(|r| r.gap_percent).collect();
            let opt: Vec<f64> = cell.iter().filter_map(|r| r.opt_gap_percent).collect();
            let iters: Vec<f64> = cell.iter().filter_map(|r| r.iterations.map(|v| v as f64)).collect();
            let times: Vec<f64> = cell.iter().map(|r| r.elapsed_secs).collect();
            AggregateRow {
                family,
                size,
                gamma,
                k,
                method,
                runs: cell.len(),
                solved: cell
                    .iter()
                    .filter(|r| r.error.is_none() && !r.time_limited)
                    .count(),
                mean_gap_percent: mean(&gaps).map(one_decimal),
                mean_opt_gap_percent: mean(&opt).map(one_decimal),
                mean_elapsed_secs: one_decimal(mean(&times).unwrap_or(0.0)),
                mean_iterations: mean(&iters).map(one_decimal),
            }
        })
        .collect()
}

pub fn write_aggregate_csv<W: Write>(rows: &[AggregateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
