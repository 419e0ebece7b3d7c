//! The max-min lower bound `max_{c in U} min_{x in X} c^T x` by row
//! generation over a growing solution list.

use crate::deadline::Deadline;
use crate::error::{check_dim, Result};
use crate::model::{BudgetedSet, Cost, Scenario, Solution};
use crate::problems::DeterministicProblem;
use crate::scenario::worst_case_scenario;

#[derive(Clone, Copy, Debug)]
pub struct MmlbConfig {
    pub max_iterations: usize,
    pub deadline: Deadline,
}

impl Default for MmlbConfig {
    fn default() -> Self {
        Self {
            max_iterations: 100_000,
            deadline: Deadline::none(),
        }
    }
}

/// Loop state: generated solutions and the last scenario-side optimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MmlbState {
    pub solutions: Vec<Solution>,
    pub scenario: Scenario,
    pub scenario_value: Cost,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MmlbResult {
    /// Exact bound, or the best certified value when `limited`.
    pub value: Cost,
    /// Scenario whose deterministic optimum equals `value`.
    pub scenario: Scenario,
    /// Deterministic optimum at `scenario`.
    pub solution: Solution,
    pub limited: bool,
    pub state: MmlbState,
}

pub fn mmlb(p: &DeterministicProblem, set: &BudgetedSet) -> Result<MmlbResult> {
    mmlb_with(p, set, &MmlbConfig::default())
}

pub fn mmlb_with(p: &DeterministicProblem, set: &BudgetedSet, config: &MmlbConfig) -> Result<MmlbResult> {
    check_dim("uncertainty set", p.n(), set.n())?;
    let (x0, v0) = p.solve(set.c_hat())?;
    let mut best = (v0, set.nominal(), x0.clone());
    let mut state = MmlbState {
        solutions: vec![x0],
        scenario: set.nominal(),
        scenario_value: v0,
        iterations: 0,
    };
    loop {
        let limited = state.iterations >= config.max_iterations || config.deadline.expired();
        if limited {
            let (value, scenario, solution) = best;
            return Ok(MmlbResult {
                value,
                scenario,
                solution,
                limited: true,
                state,
            });
        }
        state.iterations += 1;
        let worst = worst_case_scenario(set, &state.solutions)?;
        let c = set.induced_cost(&worst.worst_scenario)?;
        let (x, v) = p.solve(&c)?;
        debug_assert!(worst.value <= state.scenario_value || state.iterations == 1);
        state.scenario = worst.worst_scenario.clone();
        state.scenario_value = worst.value;
        if v > best.0 {
            best = (v, worst.worst_scenario.clone(), x.clone());
        }
        if v >= worst.value {
            debug_assert_eq!(v, worst.value);
            return Ok(MmlbResult {
                value: v,
                scenario: worst.worst_scenario,
                solution: x,
                limited: false,
                state,
            });
        }
        state.solutions.push(x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minmax::all_scenarios;

    fn brute(p: &DeterministicProblem, set: &BudgetedSet) -> Cost {
        let xs = p.enumerate_feasible(1 << 16).unwrap();
        all_scenarios(set)
            .iter()
            .map(|s| {
                let c = set.induced_cost(s).unwrap();
                xs.iter().map(|x| x.cost(&c)).min().unwrap()
            })
            .max()
            .unwrap()
    }

    #[test]
    fn matches_double_enumeration() {
        let p = DeterministicProblem::min_knapsack(vec![4, 3, 5, 2, 6, 1, 3], 10).unwrap();
        for g in 0..=4 {
            let u = BudgetedSet::new(vec![7, 4, 9, 3, 8, 2, 5], vec![6, 2, 9, 3, 1, 2, 4], g).unwrap();
            let r = mmlb(&p, &u).unwrap();
            assert_eq!(r.value, brute(&p, &u), "gamma {g}");
            assert!(!r.limited);
            let c = u.induced_cost(&r.scenario).unwrap();
            assert_eq!(r.solution.cost(&c), r.value);
            assert_eq!(p.solve(&c).unwrap().1, r.value);
        }
    }

    #[test]
    fn zero_budget_is_nominal() {
        let p = DeterministicProblem::selection(5, 2).unwrap();
        let u = BudgetedSet::new(vec![3, 1, 4, 1, 5], vec![2, 7, 1, 8, 2], 0).unwrap();
        let r = mmlb(&p, &u).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.state.iterations, 1);
    }

    #[test]
    fn iteration_limit_keeps_a_valid_bound() {
        let p = DeterministicProblem::selection(6, 3).unwrap();
        let u = BudgetedSet::new(vec![3, 1, 4, 1, 5, 9], vec![2, 7, 1, 8, 2, 8], 3).unwrap();
        let exact = mmlb(&p, &u).unwrap().value;
        let cfg = MmlbConfig {
            max_iterations: 1,
            ..Default::default()
        };
        let r = mmlb_with(&p, &u, &cfg).unwrap();
        assert!(r.value <= exact);
    }
}
