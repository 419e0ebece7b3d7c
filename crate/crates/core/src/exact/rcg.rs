//! Row-and-column generation: the master over a growing scenario list gives
//! lower bounds, the adversary on the master's pool gives upper bounds and
//! the next scenario.

use std::time::Instant;

use crate::deadline::Deadline;
use crate::error::{check_dim, Error, Result};
use crate::model::{BudgetedSet, Cost, Scenario, SolutionPool};
use crate::problems::DeterministicProblem;
use crate::scenario::{worst_case_scenario_with, AdversaryConfig};

use super::master::{solve_master, MasterConfig};
use super::ExactResult;

#[derive(Clone, Copy, Debug)]
pub struct RcgConfig {
    pub max_iterations: usize,
    pub deadline: Deadline,
    pub enumeration_cutoff: u64,
    pub adversary: AdversaryConfig,
}

impl Default for RcgConfig {
    fn default() -> Self {
        Self {
            max_iterations: 10_000,
            deadline: Deadline::none(),
            enumeration_cutoff: MasterConfig::default().enumeration_cutoff,
            adversary: AdversaryConfig::default(),
        }
    }
}

/// One completed master/adversary round.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub lower_bound: Cost,
    pub upper_bound: Cost,
    pub scenarios: usize,
    pub elapsed_secs: f64,
}

#[derive(Clone, Debug)]
pub struct RcgState {
    pub scenarios: Vec<Scenario>,
    pub lower_bound: Cost,
    pub upper_bound: Cost,
    pub incumbent: Option<SolutionPool>,
    pub iterations: usize,
    pub trace: Vec<TraceRow>,
}

#[derive(Clone, Debug)]
pub struct RcgResult {
    pub result: ExactResult,
    pub state: RcgState,
}

impl RcgResult {
    /// Relative gap between the bounds in percent, `100 (UB - LB) / LB`.
    pub fn opt_gap_percent(&self) -> Option<f64> {
        let (lb, ub) = (self.state.lower_bound, self.state.upper_bound);
        (lb > 0).then(|| 100.0 * (ub - lb) as f64 / lb as f64)
    }
}

/// Exact min-max-min optimum unless an iteration or time limit stops the
/// loop, in which case the best pool is returned with `limited` set.
pub fn rcg(p: &DeterministicProblem, set: &BudgetedSet, k: usize, config: &RcgConfig) -> Result<RcgResult> {
    check_dim("uncertainty set", p.n(), set.n())?;
    if k == 0 {
        return Err(Error::Precondition("K must be at least 1".into()));
    }
    let start = Instant::now();
    let master_config = MasterConfig {
        enumeration_cutoff: config.enumeration_cutoff,
        deadline: config.deadline,
    };
    let mut state = RcgState {
        scenarios: vec![set.nominal()],
        lower_bound: Cost::MIN,
        upper_bound: Cost::MAX,
        incumbent: None,
        iterations: 0,
        trace: Vec::new(),
    };
    let mut costs = vec![set.c_hat().to_vec()];
    let mut best_eval = None;
    loop {
        // the first round is a single deterministic solve and always runs
        let stop = state.iterations > 0
            && (state.iterations >= config.max_iterations || config.deadline.expired());
        let master = if stop {
            None
        } else {
            solve_master(p, &costs, k, &master_config)?
        };
        let Some(master) = master else {
            let pool = state.incumbent.clone().expect("first round completed");
            let evaluation = best_eval.expect("first round completed");
            return Ok(RcgResult {
                result: ExactResult {
                    pool,
                    evaluation,
                    lower_bound: Some(state.lower_bound),
                    limited: true,
                },
                state,
            });
        };
        debug_assert!(master.value >= state.lower_bound);
        state.lower_bound = state.lower_bound.max(master.value);
        let worst = worst_case_scenario_with(set, master.pool.solutions(), &config.adversary)?;
        if worst.value < state.upper_bound {
            state.upper_bound = worst.value;
            state.incumbent = Some(master.pool.clone());
            best_eval = Some(worst.clone());
        }
        state.iterations += 1;
        state.trace.push(TraceRow {
            iteration: state.iterations,
            lower_bound: state.lower_bound,
            upper_bound: state.upper_bound,
            scenarios: state.scenarios.len(),
            elapsed_secs: start.elapsed().as_secs_f64(),
        });
        if state.lower_bound >= state.upper_bound {
            debug_assert_eq!(state.lower_bound, state.upper_bound);
            return Ok(RcgResult {
                result: ExactResult {
                    pool: state.incumbent.clone().expect("set above"),
                    evaluation: best_eval.expect("set above"),
                    lower_bound: Some(state.lower_bound),
                    limited: false,
                },
                state,
            });
        }
        // a scenario already in the list costs at most the master value,
        // which would have closed the gap
        if state.scenarios.contains(&worst.worst_scenario) {
            return Err(Error::Internal(format!(
                "scenario {} generated twice with LB {} < UB {}",
                worst.worst_scenario, state.lower_bound, state.upper_bound
            )));
        }
        costs.push(set.induced_cost(&worst.worst_scenario)?);
        state.scenarios.push(worst.worst_scenario);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::mmlb;
    use crate::exact::brute::brute_force_pool;

    fn sel() -> (DeterministicProblem, BudgetedSet) {
        let p = DeterministicProblem::selection(6, 3).unwrap();
        let u = BudgetedSet::new(vec![3, 1, 4, 1, 5, 9], vec![2, 7, 1, 8, 2, 8], 2).unwrap();
        (p, u)
    }

    #[test]
    fn matches_brute_force() {
        let (p, u) = sel();
        for k in 1..=3 {
            let r = rcg(&p, &u, k, &RcgConfig::default()).unwrap();
            assert!(!r.result.limited);
            assert_eq!(r.result.value(), brute_force_pool(&p, &u, k).unwrap().value());
            let lbs: Vec<Cost> = r.state.trace.iter().map(|t| t.lower_bound).collect();
            assert!(lbs.windows(2).all(|w| w[0] <= w[1]));
            assert!(r.state.trace.iter().all(|t| t.lower_bound <= t.upper_bound));
        }
    }

    #[test]
    fn first_master_is_nominal_optimum() {
        let (p, u) = sel();
        let cfg = RcgConfig {
            max_iterations: 1,
            ..Default::default()
        };
        let r = rcg(&p, &u, 2, &cfg).unwrap();
        let (x, v) = p.solve(u.c_hat()).unwrap();
        assert_eq!(r.state.trace[0].lower_bound, v);
        assert!(r.result.pool.solutions().iter().all(|s| *s == x));
        assert!(r.result.limited || r.result.value() == v);
    }

    #[test]
    fn large_k_pinches_at_the_lower_bound() {
        let (p, u) = sel();
        let r = rcg(&p, &u, 20, &RcgConfig::default()).unwrap();
        assert_eq!(r.result.value(), mmlb(&p, &u).unwrap().value);
    }
}
