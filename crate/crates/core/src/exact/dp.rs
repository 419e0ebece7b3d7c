//! Label dynamic program for two knapsack solutions under budgeted
//! uncertainty. Labels summarize a pair of partial solutions by weights,
//! nominal costs and the deviations an adversary could still hit.

use std::collections::HashMap;

use crate::error::{check_dim, Error, Result};
use crate::model::{BudgetedSet, Cost, Solution, SolutionPool};
use crate::problems::{DeterministicProblem, ProblemKind};
use crate::scenario::evaluate_pool;

use super::ExactResult;

/// Labels a run may create before it gives up with a capacity error.
pub const MAX_DP_LABELS: usize = 2_000_000;

/// What the adversary needs to know about the chosen items.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DeviationRecords {
    /// Budget one: largest deviation in the first solution, in the second,
    /// and in both.
    Single { d1: Cost, d2: Cost, d12: Cost },
    /// Larger budgets: the up to `gamma` largest deviations among
    /// first-only, second-only and shared items, in descending order.
    Top {
        only1: Vec<Cost>,
        only2: Vec<Cost>,
        both: Vec<Cost>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpLabel {
    pub w1: Cost,
    pub w2: Cost,
    pub c1: Cost,
    pub c2: Cost,
    pub records: DeviationRecords,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    First,
    Second,
    Both,
}

impl DpLabel {
    fn root(gamma: usize) -> Self {
        let records = if gamma == 1 {
            DeviationRecords::Single { d1: 0, d2: 0, d12: 0 }
        } else {
            DeviationRecords::Top {
                only1: Vec::new(),
                only2: Vec::new(),
                both: Vec::new(),
            }
        };
        Self {
            w1: 0,
            w2: 0,
            c1: 0,
            c2: 0,
            records,
        }
    }

    /// Worst case over the budgeted set of the better of the two partial
    /// solutions.
    pub fn cost(&self, gamma: usize) -> Cost {
        match &self.records {
            DeviationRecords::Single { d1, d2, d12 } => (self.c1 + d1)
                .min(self.c2)
                .max((self.c1 + d12).min(self.c2 + d12))
                .max(self.c1.min(self.c2 + d2)),
            DeviationRecords::Top { only1, only2, both } => {
                let prefix = |vals: &[Cost]| {
                    let mut s = vec![0];
                    for &v in vals {
                        s.push(s.last().unwrap() + v);
                    }
                    s
                };
                let (p1, p2, p12) = (prefix(only1), prefix(only2), prefix(both));
                let mut best = Cost::MIN;
                for c in 0..p12.len().min(gamma + 1) {
                    for a in 0..p1.len().min(gamma - c + 1) {
                        let b = (gamma - c - a).min(p2.len() - 1);
                        let v = (self.c1 + p1[a] + p12[c]).min(self.c2 + p2[b] + p12[c]);
                        best = best.max(v);
                    }
                }
                best
            }
        }
    }

    fn extend(&self, step: Step, i: usize, weight: Cost, cap: Cost, c_hat: Cost, d: &[Cost], gamma: usize) -> Self {
        let mut s = self.clone();
        let (one, two) = match step {
            Step::First => (true, false),
            Step::Second => (false, true),
            Step::Both => (true, true),
        };
        if one {
            s.w1 = (s.w1 + weight).min(cap);
            s.c1 += c_hat;
        }
        if two {
            s.w2 = (s.w2 + weight).min(cap);
            s.c2 += c_hat;
        }
        match &mut s.records {
            DeviationRecords::Single { d1, d2, d12 } => {
                if one {
                    *d1 = (*d1).max(d[i]);
                }
                if two {
                    *d2 = (*d2).max(d[i]);
                }
                if one && two {
                    *d12 = (*d12).max(d[i]);
                }
            }
            DeviationRecords::Top { only1, only2, both } => {
                let list = match step {
                    Step::First => only1,
                    Step::Second => only2,
                    Step::Both => both,
                };
                let at = list.iter().position(|&v| v < d[i]).unwrap_or(list.len());
                list.insert(at, d[i]);
                list.truncate(gamma);
            }
        }
        s
    }
}

/// Which printed selection rule to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DpVariant {
    /// Covering knapsack `sum w_i x_i >= W`; the label of minimum cost wins.
    Min,
    /// Packing knapsack `sum w_i x_i <= capacity`; the label of maximum cost
    /// wins, as the selection step is printed.
    PrintedMax { capacity: Cost },
}

#[derive(Clone, Debug)]
pub struct DpResult {
    pub result: ExactResult,
    pub label: DpLabel,
    /// Labels created over the whole run, after dominance.
    pub labels: usize,
}

struct Node {
    parent: usize,
    item: usize,
    step: Step,
}

/// Exact optimum for `K = 2` on a knapsack instance.
pub fn dp_knapsack(p: &DeterministicProblem, set: &BudgetedSet, k: usize, variant: DpVariant) -> Result<DpResult> {
    check_dim("uncertainty set", p.n(), set.n())?;
    let ProblemKind::MinKnapsack { weights, threshold } = p.kind() else {
        return Err(Error::Unsupported(format!(
            "the label DP needs a knapsack instance, got {}",
            p.family()
        )));
    };
    if k != 2 {
        return Err(Error::Unsupported(format!("the label DP handles K = 2 only, got {k}")));
    }
    let gamma = set.gamma();
    if gamma == 0 {
        return Err(Error::Precondition("the label DP needs gamma >= 1".into()));
    }
    let minimize = variant == DpVariant::Min;
    let cap = match variant {
        DpVariant::Min => *threshold,
        DpVariant::PrintedMax { capacity } => capacity,
    };
    let (c_hat, d) = (set.c_hat(), set.d());

    // arena of back pointers; index 0 is the root
    let mut arena = vec![Node {
        parent: usize::MAX,
        item: usize::MAX,
        step: Step::Both,
    }];
    let mut layer: Vec<(DpLabel, usize)> = vec![(DpLabel::root(gamma), 0)];
    let mut created = 1;
    for (i, &w) in weights.iter().enumerate() {
        let mut next: Vec<Option<(DpLabel, usize)>> = Vec::with_capacity(layer.len() * 2);
        let mut by_key: HashMap<(Cost, Cost, DeviationRecords), Vec<usize>> = HashMap::new();
        let mut offer = |label: DpLabel, node: usize, next: &mut Vec<Option<(DpLabel, usize)>>| -> bool {
            let key = (label.w1, label.w2, label.records.clone());
            let slots = by_key.entry(key).or_default();
            let beats = |a: &DpLabel, b: &DpLabel| {
                if minimize {
                    a.c1 <= b.c1 && a.c2 <= b.c2
                } else {
                    a.c1 >= b.c1 && a.c2 >= b.c2
                }
            };
            if slots
                .iter()
                .any(|&s| next[s].as_ref().is_some_and(|(o, _)| beats(o, &label)))
            {
                return false;
            }
            slots.retain(|&s| {
                let dominated = next[s].as_ref().is_some_and(|(o, _)| beats(&label, o));
                if dominated {
                    next[s] = None;
                }
                !dominated
            });
            slots.push(next.len());
            next.push(Some((label, node)));
            true
        };
        for (label, node) in &layer {
            offer(label.clone(), *node, &mut next);
            for step in [Step::First, Step::Second, Step::Both] {
                // covering weights saturate at the threshold; packing weights must not
                let limit = if minimize { cap } else { Cost::MAX };
                let grown = label.extend(step, i, w, limit, c_hat[i], d, gamma);
                if !minimize && (grown.w1 > cap || grown.w2 > cap) {
                    continue;
                }
                let id = arena.len();
                if offer(grown, id, &mut next) {
                    arena.push(Node {
                        parent: *node,
                        item: i,
                        step,
                    });
                    created += 1;
                    if created > MAX_DP_LABELS {
                        return Err(Error::Capacity {
                            what: format!("DP labels at item {} of {}", i + 1, weights.len()),
                            limit: MAX_DP_LABELS as u64,
                            hint: "use row-and-column generation",
                        });
                    }
                }
            }
        }
        layer = next.into_iter().flatten().collect();
    }

    let mut best: Option<(Cost, usize)> = None;
    for (j, (label, _)) in layer.iter().enumerate() {
        if minimize && (label.w1 < cap || label.w2 < cap) {
            continue;
        }
        let v = label.cost(gamma);
        let better = match best {
            None => true,
            Some((b, _)) => (minimize && v < b) || (!minimize && v > b),
        };
        if better {
            best = Some((v, j));
        }
    }
    let Some((value, j)) = best else {
        return Err(Error::Infeasible("no pair of knapsack solutions".into()));
    };
    let (label, mut node) = layer.swap_remove(j);
    let n = p.n();
    let (mut x1, mut x2) = (vec![false; n], vec![false; n]);
    while node != 0 {
        let nd = &arena[node];
        match nd.step {
            Step::First => x1[nd.item] = true,
            Step::Second => x2[nd.item] = true,
            Step::Both => {
                x1[nd.item] = true;
                x2[nd.item] = true;
            }
        }
        node = nd.parent;
    }
    let pool = SolutionPool::new(vec![Solution::new(x1), Solution::new(x2)])?;
    let evaluation = evaluate_pool(set, &pool)?;
    if evaluation.value != value {
        return Err(Error::Internal(format!(
            "label cost {value} differs from the pool's worst case {}",
            evaluation.value
        )));
    }
    Ok(DpResult {
        result: ExactResult {
            pool,
            evaluation,
            lower_bound: None,
            limited: false,
        },
        label,
        labels: created,
    })
}
