//! Random small instances and brute-force oracles shared by the integration
//! tests. The oracles only use feasibility checks and cost arithmetic from
//! the library, never its solvers.

#![allow(dead_code)]

use mmm_core::problems::Graph;
use mmm_core::{BudgetedSet, Cost, DeterministicProblem, Solution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Unconstrained,
    Selection,
    Knapsack,
    ShortestPath,
}

pub const KINDS: [Kind; 4] = [Kind::Unconstrained, Kind::Selection, Kind::Knapsack, Kind::ShortestPath];

/// Random problem with `n_min..=n_max` cost components (shortest path: the
/// edge count lands in that range as closely as the graph allows).
pub fn problem(kind: Kind, r: &mut TestRng, n_min: usize, n_max: usize) -> DeterministicProblem {
    let n = r.gen_range(n_min..=n_max);
    match kind {
        Kind::Unconstrained => DeterministicProblem::unconstrained(n),
        Kind::Selection => DeterministicProblem::selection(n, r.gen_range(1..n)).unwrap(),
        Kind::Knapsack => {
            let w: Vec<Cost> = (0..n).map(|_| r.gen_range(1..=10)).collect();
            let total: Cost = w.iter().sum();
            let threshold = r.gen_range(1..=total * 2 / 3);
            DeterministicProblem::min_knapsack(w, threshold).unwrap()
        }
        Kind::ShortestPath => {
            // a spine 0-1-...-(v-1) plus random chords, at most n edges
            let nodes = r.gen_range(3..=(n.min(7)));
            let mut edges: Vec<(usize, usize)> = (0..nodes - 1).map(|i| (i, i + 1)).collect();
            let mut tries = 0;
            while edges.len() < n && tries < 200 {
                tries += 1;
                let a = r.gen_range(0..nodes);
                let b = r.gen_range(0..nodes);
                let e = (a.min(b), a.max(b));
                if a != b && !edges.contains(&e) {
                    edges.push(e);
                }
            }
            // shuffle component order so the spine is not always first
            for i in (1..edges.len()).rev() {
                let j = r.gen_range(0..=i);
                edges.swap(i, j);
            }
            DeterministicProblem::shortest_path(Graph::undirected(nodes, 0, nodes - 1, &edges)).unwrap()
        }
    }
}

/// Random budgeted set for `p`; shortest path gets nonnegative nominal costs.
pub fn uncertainty(p: &DeterministicProblem, r: &mut TestRng, gamma: usize) -> BudgetedSet {
    let n = p.n();
    let signed = p.family() == "unconstrained";
    let c: Vec<Cost> = (0..n)
        .map(|_| if signed { r.gen_range(-10..=10) } else { r.gen_range(0..=20) })
        .collect();
    let d: Vec<Cost> = (0..n).map(|_| r.gen_range(0..=15)).collect();
    BudgetedSet::new(c, d, gamma.min(n)).unwrap()
}

/// Every feasible solution, by filtering all of `{0,1}^n`, in lexicographic order.
pub fn feasible(p: &DeterministicProblem) -> Vec<Solution> {
    let n = p.n();
    (0..1u32 << n)
        .map(|m| Solution::new((0..n).map(|i| m >> (n - 1 - i) & 1 == 1).collect()))
        .filter(|x| p.is_feasible(x))
        .collect()
}

/// Every deviation pattern with at most `gamma` ones.
pub fn deltas(n: usize, gamma: usize) -> Vec<Vec<bool>> {
    (0..1u32 << n)
        .filter(|m| m.count_ones() as usize <= gamma)
        .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect())
        .collect()
}

pub fn cost_at(set: &BudgetedSet, delta: &[bool]) -> Vec<Cost> {
    (0..set.n())
        .map(|i| set.c_hat()[i] + if delta[i] { set.d()[i] } else { 0 })
        .collect()
}

fn dot(c: &[Cost], x: &Solution) -> Cost {
    x.x().iter().zip(c).filter(|(b, _)| **b).map(|(_, v)| v).sum()
}

/// `a` before `b` when compared as binary numbers with index 0 least significant.
pub fn colex_before(a: &[bool], b: &[bool]) -> bool {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return !a[i];
        }
    }
    false
}

/// Worst case of a pool and the colexicographically first maximizer.
pub fn worst(set: &BudgetedSet, pool: &[Solution]) -> (Cost, Vec<bool>) {
    let mut best: Option<(Cost, Vec<bool>)> = None;
    for delta in deltas(set.n(), set.gamma()) {
        let c = cost_at(set, &delta);
        let v = pool.iter().map(|x| dot(&c, x)).min().unwrap();
        let better = match &best {
            None => true,
            Some((b, bd)) => v > *b || (v == *b && colex_before(&delta, bd)),
        };
        if better {
            best = Some((v, delta));
        }
    }
    best.unwrap()
}

/// `min_x max_{delta in member}` by double enumeration.
pub fn minmax_over<F: Fn(&[bool]) -> bool>(p: &DeterministicProblem, set: &BudgetedSet, member: F) -> Cost {
    let costs: Vec<Vec<Cost>> = deltas(set.n(), set.gamma())
        .into_iter()
        .filter(|d| member(d))
        .map(|d| cost_at(set, &d))
        .collect();
    feasible(p)
        .iter()
        .map(|x| costs.iter().map(|c| dot(c, x)).max().unwrap())
        .min()
        .unwrap()
}

/// `max_delta min_x`.
pub fn maxmin(p: &DeterministicProblem, set: &BudgetedSet) -> Cost {
    let xs = feasible(p);
    deltas(set.n(), set.gamma())
        .iter()
        .map(|d| {
            let c = cost_at(set, d);
            xs.iter().map(|x| dot(&c, x)).min().unwrap()
        })
        .max()
        .unwrap()
}

/// Optimal pool value over all non-decreasing index tuples of the full
/// feasible set. Only for tiny instances.
pub fn best_pool(p: &DeterministicProblem, set: &BudgetedSet, k: usize) -> Cost {
    let xs = feasible(p);
    let costs: Vec<Vec<Cost>> = deltas(set.n(), set.gamma()).iter().map(|d| cost_at(set, d)).collect();
    let table: Vec<Vec<Cost>> = xs.iter().map(|x| costs.iter().map(|c| dot(c, x)).collect()).collect();
    fn rec(table: &[Vec<Cost>], from: usize, left: usize, run: &[Cost], best: &mut Cost) {
        if left == 0 {
            *best = (*best).min(*run.iter().max().unwrap());
            return;
        }
        for j in from..table.len() {
            let next: Vec<Cost> = run.iter().zip(&table[j]).map(|(a, b)| *a.min(b)).collect();
            rec(table, j, left - 1, &next, best);
        }
    }
    let mut best = Cost::MAX;
    rec(&table, 0, k, &vec![Cost::MAX; costs.len()], &mut best);
    best
}

/// `k` random feasible solutions (repeats allowed).
pub fn random_pool(p: &DeterministicProblem, r: &mut TestRng, k: usize) -> Vec<Solution> {
    let xs = feasible(p);
    (0..k).map(|_| xs[r.gen_range(0..xs.len())].clone()).collect()
}
