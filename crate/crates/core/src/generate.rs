//! Seeded random instances. All randomness comes from one ChaCha8 stream per
//! instance, seeded with `seed_from_u64(seed)`, and draws happen in the
//! order documented on each generator.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{InstanceFile, Provenance};
use crate::model::{BudgetedSet, Cost};
use crate::problems::{DeterministicProblem, Graph};

/// Integer cost units per unit of Euclidean distance. Distances are rounded
/// to `1e-4` and doubled so that halving the deviation stays exact.
pub const DISTANCE_SCALE: Cost = 20_000;

/// Neighbors per node in the shortest-path graph.
pub const NEAREST_NEIGHBORS: usize = 4;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn stamp(mut f: InstanceFile, generator: &str, seed: u64) -> InstanceFile {
    f.provenance = Some(Provenance {
        generator: generator.into(),
        seed,
        rng: "ChaCha8".into(),
    });
    f
}

/// Min-knapsack: draws `c_1..c_n`, then `w_1..w_n` uniform on `1..=100`,
/// then `d_i` uniform on `1..=c_i`. Threshold `floor(0.35 sum w)`.
pub fn gen_knapsack(n: usize, seed: u64) -> Result<InstanceFile> {
    if n == 0 {
        return Err(Error::Precondition("need n >= 1".into()));
    }
    let mut r = rng(seed);
    let c: Vec<Cost> = (0..n).map(|_| r.gen_range(1..=100)).collect();
    let w: Vec<Cost> = (0..n).map(|_| r.gen_range(1..=100)).collect();
    let d: Vec<Cost> = c.iter().map(|&ci| r.gen_range(1..=ci)).collect();
    let threshold = w.iter().sum::<Cost>() * 35 / 100;
    let p = DeterministicProblem::min_knapsack(w, threshold)?;
    let set = BudgetedSet::new(c, d, 0)?;
    Ok(stamp(InstanceFile::new(&p, &set), "knapsack", seed))
}

/// Shortest path: draws `x, y` per node uniform on `[0, 10)`. Edges join
/// every node to its four nearest neighbors plus consecutive nodes in
/// x-order; the source has the smallest x, the target the largest.
/// Edge costs are scaled distances and deviations half of them.
pub fn gen_shortest_path(nodes: usize, seed: u64) -> Result<InstanceFile> {
    if nodes < 3 {
        return Err(Error::Precondition("need at least 3 nodes".into()));
    }
    let mut r = rng(seed);
    let pts: Vec<(f64, f64)> = (0..nodes)
        .map(|_| (r.gen_range(0.0..10.0), r.gen_range(0.0..10.0)))
        .collect();
    let dist = |a: usize, b: usize| ((pts[a].0 - pts[b].0).powi(2) + (pts[a].1 - pts[b].1).powi(2)).sqrt();

    let mut edges = BTreeSet::new();
    for a in 0..nodes {
        let mut others: Vec<usize> = (0..nodes).filter(|&b| b != a).collect();
        others.sort_by(|&u, &v| dist(a, u).total_cmp(&dist(a, v)).then(u.cmp(&v)));
        for &b in others.iter().take(NEAREST_NEIGHBORS) {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let mut by_x: Vec<usize> = (0..nodes).collect();
    by_x.sort_by(|&u, &v| pts[u].0.total_cmp(&pts[v].0).then(u.cmp(&v)));
    for w in by_x.windows(2) {
        edges.insert((w[0].min(w[1]), w[0].max(w[1])));
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    let c: Vec<Cost> = edges
        .iter()
        .map(|&(a, b)| 2 * (dist(a, b) * 1e4).round() as Cost)
        .collect();
    let d: Vec<Cost> = c.iter().map(|&v| v / 2).collect();
    let graph = Graph::undirected(nodes, by_x[0], by_x[nodes - 1], &edges);
    let p = DeterministicProblem::shortest_path(graph)?;
    let set = BudgetedSet::new(c, d, 0)?;
    let mut f = InstanceFile::new(&p, &set);
    f.cost_scale = DISTANCE_SCALE;
    Ok(stamp(f, "shortest-path", seed))
}

/// Selection of `p` items: draws `c_i` uniform on `1..=100`, then `d_i` on `0..=c_i`.
pub fn gen_selection(n: usize, p: usize, seed: u64) -> Result<InstanceFile> {
    let prob = DeterministicProblem::selection(n, p)?;
    let mut r = rng(seed);
    let c: Vec<Cost> = (0..n).map(|_| r.gen_range(1..=100)).collect();
    let d: Vec<Cost> = c.iter().map(|&ci| r.gen_range(0..=ci)).collect();
    let set = BudgetedSet::new(c, d, 0)?;
    Ok(stamp(InstanceFile::new(&prob, &set), "selection", seed))
}

/// Unconstrained: draws `c_i` uniform on `-50..=50`, then `d_i` on `0..=50`.
pub fn gen_unconstrained(n: usize, seed: u64) -> Result<InstanceFile> {
    if n == 0 {
        return Err(Error::Precondition("need n >= 1".into()));
    }
    let mut r = rng(seed);
    let c: Vec<Cost> = (0..n).map(|_| r.gen_range(-50..=50)).collect();
    let d: Vec<Cost> = (0..n).map(|_| r.gen_range(0..=50)).collect();
    let set = BudgetedSet::new(c, d, 0)?;
    Ok(stamp(
        InstanceFile::new(&DeterministicProblem::unconstrained(n), &set),
        "unconstrained",
        seed,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::ProblemSpec;

    #[test]
    fn knapsack_bounds_and_determinism() {
        let f = gen_knapsack(50, 3).unwrap();
        let ProblemSpec::Knapsack { weights, threshold } = &f.problem else {
            panic!()
        };
        assert!(weights.iter().all(|&w| (1..=100).contains(&w)));
        assert!(f.c_hat.iter().all(|&c| (1..=100).contains(&c)));
        assert!(f.d.iter().zip(&f.c_hat).all(|(&d, &c)| 1 <= d && d <= c));
        assert!(*threshold <= 35 * 50);
        assert_eq!(*threshold, weights.iter().sum::<Cost>() * 35 / 100);
        assert_eq!(f.to_json().unwrap(), gen_knapsack(50, 3).unwrap().to_json().unwrap());
        assert_ne!(f, gen_knapsack(50, 4).unwrap());
    }

    #[test]
    fn shortest_path_shape() {
        for nodes in [3, 20, 50] {
            let f = gen_shortest_path(nodes, 11).unwrap();
            assert!(f.d.iter().zip(&f.c_hat).all(|(&d, &c)| 2 * d == c));
            let (p, u) = f.build(Some(3.min(f.n))).unwrap();
            // a path exists: the deterministic solve succeeds
            let (x, _) = p.solve(u.c_hat()).unwrap();
            assert!(p.is_feasible(&x));
            assert_eq!(f, gen_shortest_path(nodes, 11).unwrap());
        }
        let f = gen_shortest_path(50, 1).unwrap();
        assert!(f.n >= 49 && f.n <= 50 * 4);
    }

    #[test]
    fn other_families_build() {
        gen_selection(8, 3, 1).unwrap().build(Some(2)).unwrap();
        gen_unconstrained(8, 1).unwrap().build(Some(2)).unwrap();
        assert!(gen_selection(3, 3, 1).is_err());
    }
}
