//! Min-max-min robust combinatorial optimization under discrete budgeted
//! uncertainty.
//!
//! Given a feasible set `X` and the budgeted set `U` (nominal costs, nonnegative
//! deviations, at most `gamma` components deviating at once), the goal is to
//! prepare `K` solutions minimizing `max_{c in U} min_k c^T x^(k)`.
//!
//! - [`problems`]: deterministic oracles and enumerators.
//! - [`scenario`]: the exact adversary that prices a pool.
//! - [`minmax`]: classical min-max reductions to deterministic solves.
//! - [`heuristics`]: the partition heuristics and the Pareto-scenario baseline.
//! - [`exact`]: row-and-column generation, the knapsack label DP and brute force.
//! - [`bounds`]: the max-min lower bound.
//! - [`instance`], [`generate`], [`experiment`]: files, generators and the
//!   experiment runner behind the `mmm` binary.

pub mod bounds;
pub mod deadline;
pub mod error;
pub mod exact;
pub mod experiment;
pub mod generate;
pub mod heuristics;
pub mod instance;
pub mod minmax;
pub mod model;
pub mod problems;
pub mod scenario;

pub use error::{Error, Result};
pub use model::{BudgetedSet, Cost, EvaluationResult, Scenario, Solution, SolutionPool};
pub use problems::DeterministicProblem;
