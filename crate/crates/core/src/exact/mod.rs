//! Exact methods: row-and-column generation with a set-partition master,
//! the two-solution knapsack label DP, and the brute-force pool oracle.

pub mod brute;
pub mod dp;
pub mod lp;
pub mod master;
pub mod rcg;

pub use brute::{brute_force_pool, brute_force_pool_with, BruteConfig};
pub use dp::{dp_knapsack, DeviationRecords, DpLabel, DpResult, DpVariant, MAX_DP_LABELS};
pub use lp::{export_master_lp, write_master_lp, LpStats};
pub use master::{solve_master, MasterConfig, MasterResult};
pub use rcg::{rcg, RcgConfig, RcgResult, RcgState, TraceRow};

use crate::model::{Cost, EvaluationResult, SolutionPool};

/// A pool with its exact worst case. `limited` marks a run stopped by a
/// time or iteration limit; `lower_bound` is then the proven bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactResult {
    pub pool: SolutionPool,
    pub evaluation: EvaluationResult,
    pub lower_bound: Option<Cost>,
    pub limited: bool,
}

impl ExactResult {
    pub fn value(&self) -> Cost {
        self.evaluation.value
    }
}
