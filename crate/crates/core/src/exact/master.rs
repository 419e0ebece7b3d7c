//! Restricted master over a finite scenario list: split the scenarios into at
//! most `K` groups and give every group its own min-max solution.

use std::collections::HashMap;

use crate::deadline::Deadline;
use crate::error::{Error, Result};
use crate::model::{Cost, Solution, SolutionPool};
use crate::problems::{DeterministicProblem, Fixing};

/// Scenario lists longer than this are rejected (groups are bitmasks).
pub const MAX_MASTER_SCENARIOS: usize = 64;

#[derive(Clone, Copy, Debug)]
pub struct MasterConfig {
    /// Group min-max is solved by enumeration when the feasible set has at
    /// most this many elements, by branch-and-bound otherwise.
    pub enumeration_cutoff: u64,
    pub deadline: Deadline,
}

impl Default for MasterConfig {
    fn default() -> Self {
        Self {
            enumeration_cutoff: 4096,
            deadline: Deadline::none(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasterResult {
    pub pool: SolutionPool,
    pub value: Cost,
    /// `assignment[j]` is the pool index serving scenario `j`.
    pub assignment: Vec<usize>,
}

/// Exact optimum of `min_{x^1..x^K} max_j min_k (c^j)^T x^k` over the given
/// cost vectors. Returns `Ok(None)` when the deadline expires first.
pub fn solve_master(
    p: &DeterministicProblem,
    costs: &[Vec<Cost>],
    k: usize,
    config: &MasterConfig,
) -> Result<Option<MasterResult>> {
    if costs.is_empty() {
        return Err(Error::Precondition("the master needs at least one scenario".into()));
    }
    if k == 0 {
        return Err(Error::Precondition("K must be at least 1".into()));
    }
    if costs.len() > MAX_MASTER_SCENARIOS {
        return Err(Error::Capacity {
            what: format!("{} master scenarios", costs.len()),
            limit: MAX_MASTER_SCENARIOS as u64,
            hint: "export the master as an LP file",
        });
    }
    for c in costs {
        crate::error::check_dim("cost vector", p.n(), c.len())?;
    }
    let m = costs.len();
    // branch on the most expensive scenarios first so the bound bites early
    let mut order: Vec<(Cost, usize)> = Vec::with_capacity(m);
    for (j, c) in costs.iter().enumerate() {
        order.push((p.solve(c)?.1, j));
    }
    order.sort_by_key(|&(v, j)| (std::cmp::Reverse(v), j));
    let sorted: Vec<Vec<Cost>> = order.iter().map(|&(_, j)| costs[j].clone()).collect();
    let mut groups = GroupSolver::new(p, &sorted, config)?;
    let singles: Vec<Cost> = match (0..m).map(|j| groups.value(1 << j)).collect() {
        Ok(v) => v,
        Err(e) => return e.into_result(),
    };

    let masks = if m <= k {
        // one scenario per solution is optimal: any group costs at least its members
        (0..m).map(|j| 1u64 << j).collect()
    } else {
        let mut search = PartitionSearch {
            groups: &mut groups,
            k,
            singles_tail: suffix_max(&singles),
            masks: Vec::with_capacity(k),
            best: None,
        };
        if let Err(e) = search.run(0, Cost::MIN) {
            return e.into_result();
        }
        search.best.expect("some partition exists").1
    };

    let mut solutions = Vec::with_capacity(k);
    let mut value = Cost::MIN;
    let mut assignment = vec![0; m];
    for (g, &mask) in masks.iter().enumerate() {
        let (v, x) = match groups.solve(mask) {
            Ok(r) => r,
            Err(e) => return e.into_result(),
        };
        value = value.max(v);
        solutions.push(x);
        for (pos, &(_, j)) in order.iter().enumerate() {
            if mask >> pos & 1 == 1 {
                assignment[j] = g;
            }
        }
    }
    while solutions.len() < k {
        solutions.push(solutions.last().expect("nonempty").clone());
    }
    Ok(Some(MasterResult {
        pool: SolutionPool::new(solutions)?,
        value,
        assignment,
    }))
}

fn suffix_max(v: &[Cost]) -> Vec<Cost> {
    let mut out = vec![Cost::MIN; v.len() + 1];
    for j in (0..v.len()).rev() {
        out[j] = out[j + 1].max(v[j]);
    }
    out
}

enum Stop {
    Deadline,
    Failed(Error),
}

impl Stop {
    fn into_result<T>(self) -> Result<Option<T>> {
        match self {
            Stop::Deadline => Ok(None),
            Stop::Failed(e) => Err(e),
        }
    }
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Failed(e)
    }
}

/// Set partitions as restricted growth strings, pruned by the largest group
/// value so far and by the singleton values of unassigned scenarios.
struct PartitionSearch<'a, 'p> {
    groups: &'a mut GroupSolver<'p>,
    k: usize,
    singles_tail: Vec<Cost>,
    masks: Vec<u64>,
    best: Option<(Cost, Vec<u64>)>,
}

impl PartitionSearch<'_, '_> {
    fn run(&mut self, j: usize, partial: Cost) -> std::result::Result<(), Stop> {
        let m = self.singles_tail.len() - 1;
        if j == m {
            if self.best.as_ref().is_none_or(|(b, _)| partial < *b) {
                self.best = Some((partial, self.masks.clone()));
            }
            return Ok(());
        }
        if let Some((b, _)) = &self.best {
            if partial.max(self.singles_tail[j]) >= *b {
                return Ok(());
            }
        }
        if self.groups.config.deadline.expired() {
            return Err(Stop::Deadline);
        }
        let bit = 1u64 << j;
        if self.masks.len() < self.k {
            let v = self.groups.value(bit)?;
            self.masks.push(bit);
            self.run(j + 1, partial.max(v))?;
            self.masks.pop();
        }
        for g in 0..self.masks.len() {
            let merged = self.masks[g] | bit;
            let v = self.groups.value(merged)?;
            if self.best.as_ref().is_some_and(|(b, _)| partial.max(v) >= *b) {
                continue;
            }
            let old = self.masks[g];
            self.masks[g] = merged;
            self.run(j + 1, partial.max(v))?;
            self.masks[g] = old;
        }
        Ok(())
    }
}

/// Memoized `min_x max_{j in group} (c^j)^T x` per scenario bitmask.
struct GroupSolver<'p> {
    p: &'p DeterministicProblem,
    costs: &'p [Vec<Cost>],
    config: &'p MasterConfig,
    /// `table[j][x]` when the feasible set was small enough to list.
    listed: Option<(Vec<Solution>, Vec<Vec<Cost>>)>,
    memo: HashMap<u64, (Cost, Solution)>,
}

impl<'p> GroupSolver<'p> {
    fn new(p: &'p DeterministicProblem, costs: &'p [Vec<Cost>], config: &'p MasterConfig) -> Result<Self> {
        let listed = match p.enumerate_feasible(config.enumeration_cutoff) {
            Ok(xs) => {
                let table = costs
                    .iter()
                    .map(|c| xs.iter().map(|x| x.cost(c)).collect())
                    .collect();
                Some((xs, table))
            }
            Err(Error::Capacity { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(Self {
            p,
            costs,
            config,
            listed,
            memo: HashMap::new(),
        })
    }

    fn value(&mut self, mask: u64) -> std::result::Result<Cost, Stop> {
        Ok(self.solve(mask)?.0)
    }

    fn solve(&mut self, mask: u64) -> std::result::Result<(Cost, Solution), Stop> {
        if let Some(r) = self.memo.get(&mask) {
            return Ok(r.clone());
        }
        let members: Vec<usize> = (0..self.costs.len()).filter(|&j| mask >> j & 1 == 1).collect();
        let r = if let [j] = members[..] {
            let (x, v) = self.p.solve(&self.costs[j])?;
            (v, x)
        } else if let Some((xs, table)) = &self.listed {
            let mut best: Option<(Cost, usize)> = None;
            for t in 0..xs.len() {
                let v = members.iter().map(|&j| table[j][t]).max().expect("nonempty");
                if best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, t));
                }
            }
            let (v, t) = best.ok_or_else(|| Error::Infeasible("empty feasible set".into()))?;
            (v, xs[t].clone())
        } else {
            let costs: Vec<&[Cost]> = members.iter().map(|&j| &self.costs[j][..]).collect();
            group_branch_and_bound(self.p, &costs, self.config.deadline)?
        };
        self.memo.insert(mask, r.clone());
        Ok(r)
    }
}

fn worst(costs: &[&[Cost]], x: &Solution) -> Cost {
    costs.iter().map(|c| x.cost(c)).max().expect("nonempty")
}

/// `min_x max_j (c^j)^T x` by branching on variables. Each node is bounded by
/// the largest per-scenario restricted optimum; a node whose per-scenario
/// optima coincide is solved outright.
fn group_branch_and_bound(
    p: &DeterministicProblem,
    costs: &[&[Cost]],
    deadline: Deadline,
) -> std::result::Result<(Cost, Solution), Stop> {
    let mut incumbent: Option<(Cost, Solution)> = None;
    for c in costs {
        let (x, _) = p.solve(c)?;
        let v = worst(costs, &x);
        if incumbent.as_ref().is_none_or(|(b, _)| v < *b) {
            incumbent = Some((v, x));
        }
    }
    let mut fix: Vec<Fixing> = vec![None; p.n()];
    node(p, costs, &mut fix, &mut incumbent, deadline)?;
    Ok(incumbent.expect("seeded"))
}

fn node(
    p: &DeterministicProblem,
    costs: &[&[Cost]],
    fix: &mut Vec<Fixing>,
    incumbent: &mut Option<(Cost, Solution)>,
    deadline: Deadline,
) -> std::result::Result<(), Stop> {
    if deadline.expired() {
        return Err(Stop::Deadline);
    }
    let mut bound = Cost::MIN;
    let mut lead: Option<Solution> = None;
    let mut sols: Vec<Option<Solution>> = Vec::with_capacity(costs.len());
    for c in costs {
        let Some((v, x)) = p.restricted_bound(c, fix)? else {
            return Ok(());
        };
        if v > bound {
            bound = v;
            lead = x.clone();
        }
        sols.push(x);
    }
    let best = incumbent.as_ref().map(|(b, _)| *b);
    if best.is_some_and(|b| bound >= b) {
        return Ok(());
    }
    for x in sols.iter().flatten() {
        let v = worst(costs, x);
        if incumbent.as_ref().is_none_or(|(b, _)| v < *b) {
            *incumbent = Some((v, x.clone()));
        }
    }
    if let Some(first) = sols[0].as_ref() {
        if sols.iter().all(|s| s.as_ref() == Some(first)) {
            // one solution is optimal for every scenario, hence for the group
            return Ok(());
        }
    }
    let free: Vec<usize> = (0..fix.len()).filter(|&i| fix[i].is_none()).collect();
    if free.is_empty() {
        let x = Solution::new(fix.iter().map(|f| f == &Some(true)).collect());
        if p.is_feasible(&x) {
            let v = worst(costs, &x);
            if incumbent.as_ref().is_none_or(|(b, _)| v < *b) {
                *incumbent = Some((v, x));
            }
        }
        return Ok(());
    }
    let split = free
        .iter()
        .copied()
        .find(|&i| {
            let mut vals = sols.iter().flatten().map(|x| x.x()[i]);
            let first = vals.next();
            sols.iter().any(|s| s.is_none()) || vals.any(|v| Some(v) != first)
        })
        .unwrap_or(free[0]);
    let prefer = lead.as_ref().is_some_and(|x| x.x()[split]);
    for value in [prefer, !prefer] {
        fix[split] = Some(value);
        node(p, costs, fix, incumbent, deadline)?;
    }
    fix[split] = None;
    Ok(())
}
