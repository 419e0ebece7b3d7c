//! Deterministic problem oracles `min_{x in X} c^T x` and small-instance
//! enumerators.
//!
//! Tie-breaking: unconstrained, selection and min-knapsack always return the
//! lexicographically smallest optimal `x` (zeros preferred at low indices).
//! Shortest path does the same when the instance has at most
//! [`SP_LEX_CUTOFF`] cost components; above it the path is the one produced by
//! Dijkstra's fixed scan order (smallest node index first, strict improvement
//! only).

mod knapsack;
mod shortest_path;

pub use shortest_path::{Arc, Graph, SP_LEX_CUTOFF};

use crate::error::{check_dim, Error, Result};
use crate::model::{Cost, Solution};

/// Variable fixing used by restricted solves: `None` is free.
pub type Fixing = Option<bool>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemKind {
    /// `X = {0,1}^n`.
    Unconstrained,
    /// Exactly `p` items.
    Selection { p: usize },
    /// Covering knapsack `sum w_i x_i >= threshold`.
    MinKnapsack { weights: Vec<Cost>, threshold: Cost },
    /// Simple s-t paths; `x` is indexed by cost component.
    ShortestPath(Graph),
}

/// A feasible set `X` over `n` binary variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicProblem {
    kind: ProblemKind,
    n: usize,
}

impl DeterministicProblem {
    pub fn unconstrained(n: usize) -> Self {
        Self {
            kind: ProblemKind::Unconstrained,
            n,
        }
    }

    pub fn selection(n: usize, p: usize) -> Result<Self> {
        if p == 0 || p >= n {
            return Err(Error::Invalid(format!(
                "selection needs 0 < p < n, got p = {p}, n = {n}"
            )));
        }
        Ok(Self {
            kind: ProblemKind::Selection { p },
            n,
        })
    }

    pub fn min_knapsack(weights: Vec<Cost>, threshold: Cost) -> Result<Self> {
        if let Some(i) = weights.iter().position(|&w| w <= 0) {
            return Err(Error::Invalid(format!("weight w[{i}] must be positive")));
        }
        let total: Cost = weights.iter().sum();
        if threshold < 0 || threshold > total {
            return Err(Error::Invalid(format!(
                "threshold {threshold} must lie in [0, {total}]"
            )));
        }
        Ok(Self {
            n: weights.len(),
            kind: ProblemKind::MinKnapsack { weights, threshold },
        })
    }

    pub fn shortest_path(graph: Graph) -> Result<Self> {
        graph.validate()?;
        Ok(Self {
            n: graph.components(),
            kind: ProblemKind::ShortestPath(graph),
        })
    }

    pub fn kind(&self) -> &ProblemKind {
        &self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Short family name used in files and reports.
    pub fn family(&self) -> &'static str {
        match self.kind {
            ProblemKind::Unconstrained => "unconstrained",
            ProblemKind::Selection { .. } => "selection",
            ProblemKind::MinKnapsack { .. } => "knapsack",
            ProblemKind::ShortestPath(_) => "shortest-path",
        }
    }

    /// Whether every cost vector the solvers hand to this problem must be
    /// nonnegative.
    pub fn requires_nonnegative_costs(&self) -> bool {
        matches!(self.kind, ProblemKind::ShortestPath(_))
    }

    pub fn is_feasible(&self, x: &Solution) -> bool {
        if x.len() != self.n {
            return false;
        }
        match &self.kind {
            ProblemKind::Unconstrained => true,
            ProblemKind::Selection { p } => x.ones().count() == *p,
            ProblemKind::MinKnapsack { weights, threshold } => {
                x.ones().map(|i| weights[i]).sum::<Cost>() >= *threshold
            }
            ProblemKind::ShortestPath(g) => g.is_simple_path(x.x()),
        }
    }

    /// Optimal solution of `min_{x in X} c^T x` and its objective.
    pub fn solve(&self, c: &[Cost]) -> Result<(Solution, Cost)> {
        check_dim("cost vector", self.n, c.len())?;
        let x = match &self.kind {
            ProblemKind::Unconstrained => Solution::new(c.iter().map(|&v| v < 0).collect()),
            ProblemKind::Selection { p } => {
                let free: Vec<usize> = (0..self.n).collect();
                Solution::from_indices(self.n, &pick_cheapest(c, &free, *p))
            }
            ProblemKind::MinKnapsack { weights, threshold } => {
                knapsack::solve_covering(weights, *threshold, c, None)
                    .ok_or_else(|| Error::Infeasible("knapsack threshold unreachable".into()))?
            }
            ProblemKind::ShortestPath(g) => g.solve(c)?,
        };
        let obj = x.cost(c);
        Ok((x, obj))
    }

    /// Lower bound on `min { c^T x : x in X, x agrees with fix }`.
    ///
    /// Returns `None` when the restriction is provably infeasible. Otherwise
    /// the bound comes with a consistent solution attaining it whenever the
    /// bound is exact; every kind except shortest path with forced arcs is
    /// always exact.
    pub fn restricted_bound(
        &self,
        c: &[Cost],
        fix: &[Fixing],
    ) -> Result<Option<(Cost, Option<Solution>)>> {
        check_dim("cost vector", self.n, c.len())?;
        check_dim("fixing vector", self.n, fix.len())?;
        let exact = |x: Solution| {
            let v = x.cost(c);
            Some((v, Some(x)))
        };
        Ok(match &self.kind {
            ProblemKind::Unconstrained => exact(Solution::new(
                (0..self.n)
                    .map(|i| fix[i].unwrap_or(c[i] < 0))
                    .collect(),
            )),
            ProblemKind::Selection { p } => {
                let forced: Vec<usize> = (0..self.n).filter(|&i| fix[i] == Some(true)).collect();
                let free: Vec<usize> = (0..self.n).filter(|&i| fix[i].is_none()).collect();
                if forced.len() > *p || forced.len() + free.len() < *p {
                    None
                } else {
                    let mut ones = forced;
                    ones.extend(pick_cheapest(c, &free, p - ones.len()));
                    exact(Solution::from_indices(self.n, &ones))
                }
            }
            ProblemKind::MinKnapsack { weights, threshold } => {
                knapsack::solve_covering(weights, *threshold, c, Some(fix)).and_then(exact)
            }
            ProblemKind::ShortestPath(g) => g.restricted_bound(c, fix)?,
        })
    }

    /// Every feasible solution exactly once, in lexicographic order.
    /// Fails with a capacity error once more than `cap` solutions exist.
    pub fn enumerate_feasible(&self, cap: u64) -> Result<Vec<Solution>> {
        let mut out = Vec::new();
        let overflow = || Error::Capacity {
            what: "feasible set".into(),
            limit: cap,
            hint: "use a non-enumerative method",
        };
        match &self.kind {
            ProblemKind::Unconstrained => {
                if self.n >= 64 || (1u64 << self.n) > cap {
                    return Err(overflow());
                }
                for mask in 0..(1u64 << self.n) {
                    // bit n-1-i of the counter is x_i, so counting order is lexicographic
                    out.push(Solution::new(
                        (0..self.n).map(|i| mask >> (self.n - 1 - i) & 1 == 1).collect(),
                    ));
                }
            }
            ProblemKind::Selection { p } => {
                if crate::model::binomial(self.n, *p) > cap as u128 {
                    return Err(overflow());
                }
                let mut x = vec![false; self.n];
                enumerate_selection(&mut x, 0, *p, &mut out);
            }
            ProblemKind::MinKnapsack { weights, threshold } => {
                let mut suffix = vec![0; self.n + 1];
                for i in (0..self.n).rev() {
                    suffix[i] = suffix[i + 1] + weights[i];
                }
                let mut x = vec![false; self.n];
                let ok = enumerate_knapsack(
                    weights, *threshold, &suffix, &mut x, 0, 0, cap, &mut out,
                );
                if !ok {
                    return Err(overflow());
                }
            }
            ProblemKind::ShortestPath(g) => {
                if !g.enumerate_paths(cap, &mut out) {
                    return Err(overflow());
                }
                out.sort();
            }
        }
        if out.len() as u64 > cap {
            return Err(overflow());
        }
        Ok(out)
    }
}

/// `count` indices out of `free` with the smallest costs. Ties prefer the
/// larger index, which keeps the resulting `x` lexicographically smallest.
fn pick_cheapest(c: &[Cost], free: &[usize], count: usize) -> Vec<usize> {
    let mut order = free.to_vec();
    order.sort_by(|&a, &b| c[a].cmp(&c[b]).then(b.cmp(&a)));
    order.truncate(count);
    order.sort_unstable();
    order
}

fn enumerate_selection(x: &mut Vec<bool>, i: usize, left: usize, out: &mut Vec<Solution>) {
    let n = x.len();
    if left == 0 {
        out.push(Solution::new(x.clone()));
        return;
    }
    if n - i < left {
        return;
    }
    enumerate_selection(x, i + 1, left, out);
    x[i] = true;
    enumerate_selection(x, i + 1, left - 1, out);
    x[i] = false;
}

#[allow(clippy::too_many_arguments)]
fn enumerate_knapsack(
    w: &[Cost],
    threshold: Cost,
    suffix: &[Cost],
    x: &mut Vec<bool>,
    i: usize,
    acc: Cost,
    cap: u64,
    out: &mut Vec<Solution>,
) -> bool {
    if acc + suffix[i] < threshold {
        return true;
    }
    if i == x.len() {
        out.push(Solution::new(x.clone()));
        return out.len() as u64 <= cap;
    }
    if !enumerate_knapsack(w, threshold, suffix, x, i + 1, acc, cap, out) {
        return false;
    }
    x[i] = true;
    let ok = enumerate_knapsack(w, threshold, suffix, x, i + 1, acc + w[i], cap, out);
    x[i] = false;
    ok
}
