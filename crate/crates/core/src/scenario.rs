//! The adversary: exact `max_{c in U} min_k c^T x^(k)` over a finite list of
//! solutions.
//!
//! This one engine prices a pool (`cost(x)`), generates scenarios for
//! row-and-column generation and solves the scenario side of the max-min
//! bound. Among optimal deviation patterns the colexicographically smallest
//! `delta` is returned: patterns compare as binary numbers with `delta_0` the
//! least significant digit, so `e_0` beats `e_1` and `0` beats everything.

use crate::error::{check_dim, Error, Result};
use crate::model::{BudgetedSet, Cost, EvaluationResult, Scenario, Solution, SolutionPool};

/// Default cutoff for [`brute_force_scenarios`].
pub const BRUTE_FORCE_CUTOFF: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdversaryConfig {
    /// Enumerate all admissible scenarios instead of branching when there
    /// are at most this many. Zero forces branch-and-bound.
    pub exhaustive_cutoff: u128,
}

impl Default for AdversaryConfig {
    fn default() -> Self {
        Self {
            exhaustive_cutoff: 256,
        }
    }
}

pub fn worst_case_scenario(set: &BudgetedSet, pool: &[Solution]) -> Result<EvaluationResult> {
    worst_case_scenario_with(set, pool, &AdversaryConfig::default())
}

pub fn evaluate_pool(set: &BudgetedSet, pool: &SolutionPool) -> Result<EvaluationResult> {
    worst_case_scenario(set, pool.solutions())
}

pub fn worst_case_scenario_with(
    set: &BudgetedSet,
    pool: &[Solution],
    cfg: &AdversaryConfig,
) -> Result<EvaluationResult> {
    check_pool(set, pool)?;
    if set.scenario_count() <= cfg.exhaustive_cutoff {
        return brute_force_scenarios(set, pool, cfg.exhaustive_cutoff);
    }
    let adv = Adversary::new(set, pool);
    let mut status = vec![Status::Free; adv.len()];
    let root = adv
        .search(&status, Goal::Maximize)
        .expect("the root node is always feasible");
    let (value, mut witness) = root;

    // Colexicographic refinement: walk components from the highest index
    // down and keep delta_i = 0 whenever some completion still reaches the optimum.
    let mut by_index: Vec<usize> = (0..adv.len()).collect();
    by_index.sort_by_key(|&p| std::cmp::Reverse(adv.cand[p]));
    for p in by_index {
        if !witness[p] {
            status[p] = Status::Zero;
            continue;
        }
        status[p] = Status::Zero;
        match adv.search(&status, Goal::Reach(value)) {
            Some((_, w)) => witness = w,
            None => status[p] = Status::One,
        }
    }

    let ones: Vec<usize> = (0..adv.len())
        .filter(|&p| witness[p])
        .map(|p| adv.cand[p])
        .collect();
    finish(set, pool, Scenario::from_indices(set.n(), &ones), value)
}

/// Exhaustive oracle over every admissible `delta`.
pub fn brute_force_scenarios(
    set: &BudgetedSet,
    pool: &[Solution],
    cutoff: u128,
) -> Result<EvaluationResult> {
    check_pool(set, pool)?;
    let count = set.scenario_count();
    if count > cutoff {
        return Err(Error::Capacity {
            what: format!("{count} admissible scenarios"),
            limit: cutoff.min(u64::MAX as u128) as u64,
            hint: "use the branch-and-bound adversary",
        });
    }
    let n = set.n();
    let base: Vec<Cost> = pool.iter().map(|x| x.cost(set.c_hat())).collect();
    let mut best: Option<(Cost, Vec<bool>)> = None;
    let mut delta = vec![false; n];
    let mut partial = base;
    brute_rec(set, pool, 0, set.gamma(), &mut delta, &mut partial, &mut best);
    let (value, delta) = best.expect("delta = 0 is always admissible");
    finish(set, pool, Scenario::new(delta), value)
}

fn brute_rec(
    set: &BudgetedSet,
    pool: &[Solution],
    i: usize,
    budget: usize,
    delta: &mut Vec<bool>,
    partial: &mut Vec<Cost>,
    best: &mut Option<(Cost, Vec<bool>)>,
) {
    if i == set.n() {
        let v = *partial.iter().min().unwrap();
        let better = match best {
            None => true,
            Some((b, bd)) => v > *b || (v == *b && colex_less(delta, bd)),
        };
        if better {
            *best = Some((v, delta.clone()));
        }
        return;
    }
    brute_rec(set, pool, i + 1, budget, delta, partial, best);
    if budget > 0 {
        let d = set.d()[i];
        delta[i] = true;
        for (k, x) in pool.iter().enumerate() {
            if x.x()[i] {
                partial[k] += d;
            }
        }
        brute_rec(set, pool, i + 1, budget - 1, delta, partial, best);
        for (k, x) in pool.iter().enumerate() {
            if x.x()[i] {
                partial[k] -= d;
            }
        }
        delta[i] = false;
    }
}

/// `a < b` with the last component as the most significant digit.
pub fn colex_less(a: &[bool], b: &[bool]) -> bool {
    a.iter().rev().cmp(b.iter().rev()).is_lt()
}

fn check_pool(set: &BudgetedSet, pool: &[Solution]) -> Result<()> {
    if pool.is_empty() {
        return Err(Error::Invalid("cannot evaluate an empty pool".into()));
    }
    for x in pool {
        check_dim("pool solution", set.n(), x.len())?;
    }
    Ok(())
}

fn finish(
    set: &BudgetedSet,
    pool: &[Solution],
    scenario: Scenario,
    value: Cost,
) -> Result<EvaluationResult> {
    let c = set.induced_cost(&scenario)?;
    let pool = SolutionPool::new(pool.to_vec())?;
    let (v, argmin_index) = pool.objective_at_cost(&c);
    if v != value {
        return Err(Error::Internal(format!(
            "adversary value {value} does not re-evaluate ({v})"
        )));
    }
    Ok(EvaluationResult {
        value,
        worst_scenario: scenario,
        argmin_index,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Free,
    Zero,
    One,
}

#[derive(Clone, Copy, Debug)]
enum Goal {
    Maximize,
    /// Stop at the first pattern reaching the target.
    Reach(Cost),
}

/// Branch-and-bound over the components that can raise at least one pool
/// cost, in non-increasing order of their largest effect.
struct Adversary {
    gamma: usize,
    base: Vec<Cost>,
    /// Original component index for each branching position.
    cand: Vec<usize>,
    /// gain[p][k] = d_i * x_i^(k) for component cand[p].
    gain: Vec<Vec<Cost>>,
    /// Per solution: positive gains with their positions, largest first.
    sorted: Vec<Vec<(Cost, usize)>>,
}

struct SearchState<'s> {
    status: &'s [Status],
    goal: Goal,
    best: Cost,
    best_set: Option<Vec<usize>>,
    chosen: Vec<usize>,
    done: bool,
}

impl Adversary {
    fn new(set: &BudgetedSet, pool: &[Solution]) -> Self {
        let base: Vec<Cost> = pool.iter().map(|x| x.cost(set.c_hat())).collect();
        let mut cand: Vec<(Cost, usize)> = (0..set.n())
            .map(|i| {
                let m = pool.iter().map(|x| if x.x()[i] { set.d()[i] } else { 0 }).max();
                (m.unwrap_or(0), i)
            })
            .filter(|&(m, _)| m > 0)
            .collect();
        cand.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let cand: Vec<usize> = cand.into_iter().map(|(_, i)| i).collect();
        let gain: Vec<Vec<Cost>> = cand
            .iter()
            .map(|&i| {
                pool.iter()
                    .map(|x| if x.x()[i] { set.d()[i] } else { 0 })
                    .collect()
            })
            .collect();
        let sorted = (0..pool.len())
            .map(|k| {
                let mut v: Vec<(Cost, usize)> = gain
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| g[k] > 0)
                    .map(|(p, g)| (g[k], p))
                    .collect();
                v.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
                v
            })
            .collect();
        Self {
            gamma: set.gamma(),
            base,
            cand,
            gain,
            sorted,
        }
    }

    fn len(&self) -> usize {
        self.cand.len()
    }

    /// Returns the best (or first reaching) value and its pattern over
    /// positions, honoring the fixed statuses.
    fn search(&self, status: &[Status], goal: Goal) -> Option<(Cost, Vec<bool>)> {
        let mut partial = self.base.clone();
        let mut budget = self.gamma;
        for (p, s) in status.iter().enumerate() {
            if *s == Status::One {
                if budget == 0 {
                    return None;
                }
                budget -= 1;
                for (k, v) in partial.iter_mut().enumerate() {
                    *v += self.gain[p][k];
                }
            }
        }
        let mut st = SearchState {
            status,
            goal,
            best: Cost::MIN,
            best_set: None,
            chosen: Vec::new(),
            done: false,
        };
        self.dfs(0, budget, &mut partial, &mut st);
        let set = st.best_set?;
        let mut pattern: Vec<bool> = st.status.iter().map(|s| *s == Status::One).collect();
        for p in set {
            pattern[p] = true;
        }
        Some((st.best, pattern))
    }

    fn dfs(&self, pos: usize, budget: usize, partial: &mut [Cost], st: &mut SearchState<'_>) {
        let value = *partial.iter().min().unwrap();
        match st.goal {
            Goal::Maximize => {
                if value > st.best {
                    st.best = value;
                    st.best_set = Some(st.chosen.clone());
                }
            }
            Goal::Reach(target) => {
                if value >= target {
                    st.best = value;
                    st.best_set = Some(st.chosen.clone());
                    st.done = true;
                    return;
                }
            }
        }
        if budget == 0 {
            return;
        }
        let Some(p) = (pos..self.len()).find(|&p| st.status[p] == Status::Free) else {
            return;
        };
        let bound = self.bound(p, budget, partial, st.status);
        let prune = match st.goal {
            Goal::Maximize => bound <= st.best,
            Goal::Reach(target) => bound < target,
        };
        if prune {
            return;
        }

        for (v, g) in partial.iter_mut().zip(&self.gain[p]) {
            *v += g;
        }
        st.chosen.push(p);
        self.dfs(p + 1, budget - 1, partial, st);
        st.chosen.pop();
        for (v, g) in partial.iter_mut().zip(&self.gain[p]) {
            *v -= g;
        }
        if st.done {
            return;
        }
        self.dfs(p + 1, budget, partial, st);
    }

    /// `min_k [partial_k + sum of the budget largest free gains at positions >= pos]`.
    fn bound(&self, pos: usize, budget: usize, partial: &[Cost], status: &[Status]) -> Cost {
        let mut bound = Cost::MAX;
        for (k, list) in self.sorted.iter().enumerate() {
            let extra: Cost = list
                .iter()
                .filter(|&&(_, p)| p >= pos && status[p] == Status::Free)
                .take(budget)
                .map(|&(g, _)| g)
                .sum();
            bound = bound.min(partial[k] + extra);
        }
        bound
    }
}
