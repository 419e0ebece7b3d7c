use crate::error::{check_dim, Error, Result};
use crate::minmax::all_scenarios;
use crate::model::{BudgetedSet, Cost, Solution, SolutionPool};
use crate::problems::DeterministicProblem;
use crate::scenario::evaluate_pool;

use super::ExactResult;

#[derive(Clone, Copy, Debug)]
pub struct BruteConfig {
    pub max_solutions: u64,
    pub max_scenarios: u128,
    /// Cap on the number of solution multisets.
    pub max_pools: u128,
}

impl Default for BruteConfig {
    fn default() -> Self {
        Self {
            max_solutions: 1 << 16,
            max_scenarios: 1 << 16,
            max_pools: 1_000_000_000,
        }
    }
}

/// Drops solutions that strictly contain another feasible solution. Exact
/// when every scenario cost is nonnegative: the smaller one is never worse.
fn inclusion_minimal(xs: Vec<Solution>) -> Vec<Solution> {
    let masks: Vec<Vec<usize>> = xs.iter().map(|x| x.ones().collect()).collect();
    let keep: Vec<bool> = (0..xs.len())
        .map(|a| {
            !(0..xs.len()).any(|b| {
                b != a
                    && masks[b].len() < masks[a].len()
                    && masks[b].iter().all(|&i| xs[a].x()[i])
            })
        })
        .collect();
    xs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(x, _)| x).collect()
}

fn multisets(n: u128, k: u128) -> u128 {
    // C(n + k - 1, k), saturating
    let mut r: u128 = 1;
    for j in 0..k {
        r = match r.checked_mul(n + j) {
            Some(v) => v / (j + 1),
            None => return u128::MAX,
        };
    }
    r
}

/// Optimal pool of `k` solutions by enumerating every multiset of feasible
/// solutions against every scenario. Ground truth for small instances.
pub fn brute_force_pool(p: &DeterministicProblem, set: &BudgetedSet, k: usize) -> Result<ExactResult> {
    brute_force_pool_with(p, set, k, &BruteConfig::default())
}

pub fn brute_force_pool_with(
    p: &DeterministicProblem,
    set: &BudgetedSet,
    k: usize,
    config: &BruteConfig,
) -> Result<ExactResult> {
    check_dim("uncertainty set", p.n(), set.n())?;
    if k == 0 {
        return Err(Error::Precondition("K must be at least 1".into()));
    }
    if set.scenario_count() > config.max_scenarios {
        return Err(Error::Capacity {
            what: format!("{} scenarios", set.scenario_count()),
            limit: config.max_scenarios.min(u64::MAX as u128) as u64,
            hint: "brute force is for small instances",
        });
    }
    let mut xs = p.enumerate_feasible(config.max_solutions)?;
    if xs.is_empty() {
        return Err(Error::Infeasible("empty feasible set".into()));
    }
    if set.c_hat().iter().all(|&c| c >= 0) {
        xs = inclusion_minimal(xs);
    }
    let pools = multisets(xs.len() as u128, k as u128);
    if pools > config.max_pools {
        return Err(Error::Capacity {
            what: format!("{pools} solution multisets"),
            limit: config.max_pools.min(u64::MAX as u128) as u64,
            hint: "brute force is for small instances",
        });
    }

    let scenarios = all_scenarios(set);
    let costs: Vec<Vec<Cost>> = scenarios
        .iter()
        .map(|s| set.induced_cost(s))
        .collect::<Result<_>>()?;
    // table[x][s] = cost of solution x in scenario s
    let table: Vec<Vec<Cost>> = xs
        .iter()
        .map(|x| costs.iter().map(|c| x.cost(c)).collect())
        .collect();
    let floor: Vec<Cost> = (0..scenarios.len())
        .map(|s| table.iter().map(|row| row[s]).min().expect("nonempty"))
        .collect();

    let mut search = Search {
        table: &table,
        floor: &floor,
        k,
        chosen: Vec::with_capacity(k),
        best: None,
    };
    let running = vec![Cost::MAX; scenarios.len()];
    search.run(0, &running);
    let (_, picks) = search.best.expect("at least one multiset");
    let pool = SolutionPool::new(picks.into_iter().map(|j| xs[j].clone()).collect())?;
    let evaluation = evaluate_pool(set, &pool)?;
    Ok(ExactResult {
        pool,
        evaluation,
        lower_bound: None,
        limited: false,
    })
}

struct Search<'a> {
    table: &'a [Vec<Cost>],
    floor: &'a [Cost],
    k: usize,
    chosen: Vec<usize>,
    best: Option<(Cost, Vec<usize>)>,
}

impl Search<'_> {
    fn run(&mut self, from: usize, running: &[Cost]) {
        if self.chosen.len() == self.k {
            let v = *running.iter().max().expect("nonempty");
            if self.best.as_ref().is_none_or(|(b, _)| v < *b) {
                self.best = Some((v, self.chosen.clone()));
            }
            return;
        }
        // whatever is added, scenario s costs at least min(running, floor)
        if let Some((b, _)) = &self.best {
            let lb = running
                .iter()
                .zip(self.floor)
                .map(|(&r, &f)| r.min(f))
                .max()
                .expect("nonempty");
            if lb >= *b {
                return;
            }
        }
        let mut next = vec![0; running.len()];
        for j in from..self.table.len() {
            for (s, v) in next.iter_mut().enumerate() {
                *v = running[s].min(self.table[j][s]);
            }
            self.chosen.push(j);
            self.run(j, &next);
            self.chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::mmlb;
    use crate::minmax::minmax;

    #[test]
    fn single_solution_is_minmax() {
        let p = DeterministicProblem::selection(6, 3).unwrap();
        let u = BudgetedSet::new(vec![3, 1, 4, 1, 5, 9], vec![2, 7, 1, 8, 2, 8], 2).unwrap();
        let r = brute_force_pool(&p, &u, 1).unwrap();
        assert_eq!(r.value(), minmax(&p, &u).unwrap().value);
    }

    #[test]
    fn many_solutions_reach_the_lower_bound() {
        let p = DeterministicProblem::selection(4, 2).unwrap();
        let u = BudgetedSet::new(vec![3, 1, 4, 1], vec![2, 7, 1, 8], 2).unwrap();
        let r = brute_force_pool(&p, &u, 6).unwrap();
        assert_eq!(r.value(), mmlb(&p, &u).unwrap().value);
    }

    #[test]
    fn minimal_filter() {
        let xs = ["110", "100", "011", "111"]
            .iter()
            .map(|s| Solution::new(crate::model::parse_bits(s).unwrap()))
            .collect();
        let kept: Vec<String> = inclusion_minimal(xs).iter().map(|x| x.to_string()).collect();
        assert_eq!(kept, ["100", "011"]);
    }

    #[test]
    fn negative_costs_skip_the_filter() {
        let p = DeterministicProblem::unconstrained(3);
        let u = BudgetedSet::new(vec![-1, 2, 0], vec![0, 0, 3], 1).unwrap();
        let r = brute_force_pool(&p, &u, 1).unwrap();
        assert_eq!(r.value(), -1);
    }

    #[test]
    fn capacity() {
        let p = DeterministicProblem::unconstrained(12);
        let u = BudgetedSet::new(vec![1; 12], vec![1; 12], 2).unwrap();
        let cfg = BruteConfig {
            max_solutions: 100,
            ..Default::default()
        };
        assert!(matches!(
            brute_force_pool_with(&p, &u, 2, &cfg),
            Err(Error::Capacity { .. })
        ));
        assert_eq!(multisets(3, 2), 6);
    }
}
