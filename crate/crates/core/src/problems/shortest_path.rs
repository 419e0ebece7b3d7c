use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::Fixing;
use crate::error::{Error, Result};
use crate::model::{Cost, Solution};

/// Instances with at most this many cost components get the
/// lexicographically smallest shortest path; larger ones keep Dijkstra's.
pub const SP_LEX_CUTOFF: usize = 64;

/// A directed arc. An undirected edge is stored as two opposite arcs that
/// share one cost component, so a deviation hits both directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub nodes: usize,
    pub source: usize,
    pub target: usize,
    pub arcs: Vec<Arc>,
}

impl Graph {
    /// Undirected graph; edge `e` becomes cost component `e`.
    pub fn undirected(nodes: usize, source: usize, target: usize, edges: &[(usize, usize)]) -> Self {
        let arcs = edges
            .iter()
            .enumerate()
            .flat_map(|(e, &(u, v))| {
                [
                    Arc { from: u, to: v, component: e },
                    Arc { from: v, to: u, component: e },
                ]
            })
            .collect();
        Self {
            nodes,
            source,
            target,
            arcs,
        }
    }

    pub fn components(&self) -> usize {
        self.arcs.iter().map(|a| a.component + 1).max().unwrap_or(0)
    }

    pub(super) fn validate(&self) -> Result<()> {
        if self.source == self.target {
            return Err(Error::Invalid("source and target coincide".into()));
        }
        if self.source >= self.nodes || self.target >= self.nodes {
            return Err(Error::Invalid("source or target out of range".into()));
        }
        let m = self.components();
        let mut owners: Vec<Vec<&Arc>> = vec![Vec::new(); m];
        for a in &self.arcs {
            if a.from >= self.nodes || a.to >= self.nodes || a.from == a.to {
                return Err(Error::Invalid(format!("bad arc {a:?}")));
            }
            owners[a.component].push(a);
        }
        for (e, arcs) in owners.iter().enumerate() {
            match arcs.as_slice() {
                [_] => {}
                [a, b] if a.from == b.to && a.to == b.from => {}
                [] => return Err(Error::Invalid(format!("component {e} has no arc"))),
                _ => {
                    return Err(Error::Invalid(format!(
                        "component {e} must belong to one arc or to two opposite arcs"
                    )))
                }
            }
        }
        if self.dijkstra(&vec![0; m], &vec![false; m]).is_none() {
            return Err(Error::Infeasible("no path from source to target".into()));
        }
        Ok(())
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for (k, a) in self.arcs.iter().enumerate() {
            adj[a.from].push(k);
        }
        adj
    }

    /// Shortest path avoiding `removed` components. Returns the distance and
    /// the component incidence vector.
    fn dijkstra(&self, c: &[Cost], removed: &[bool]) -> Option<(Cost, Vec<bool>)> {
        let adj = self.adjacency();
        let mut dist = vec![Cost::MAX; self.nodes];
        let mut pred = vec![usize::MAX; self.nodes];
        let mut done = vec![false; self.nodes];
        let mut heap = BinaryHeap::new();
        dist[self.source] = 0;
        heap.push(Reverse((0, self.source)));
        while let Some(Reverse((du, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            if u == self.target {
                break;
            }
            for &k in &adj[u] {
                let a = &self.arcs[k];
                if removed[a.component] || done[a.to] {
                    continue;
                }
                let nd = du + c[a.component];
                if nd < dist[a.to] {
                    dist[a.to] = nd;
                    pred[a.to] = k;
                    heap.push(Reverse((nd, a.to)));
                }
            }
        }
        if !done[self.target] {
            return None;
        }
        let mut x = vec![false; c.len()];
        let mut v = self.target;
        while v != self.source {
            let a = &self.arcs[pred[v]];
            x[a.component] = true;
            v = a.from;
        }
        Some((dist[self.target], x))
    }

    pub(super) fn solve(&self, c: &[Cost]) -> Result<Solution> {
        if let Some(i) = c.iter().position(|&v| v < 0) {
            return Err(Error::Precondition(format!(
                "shortest path needs nonnegative costs, c[{i}] = {}",
                c[i]
            )));
        }
        let m = c.len();
        let mut removed = vec![false; m];
        let (opt, mut x) = self
            .dijkstra(c, &removed)
            .ok_or_else(|| Error::Infeasible("no path from source to target".into()))?;
        if m <= SP_LEX_CUTOFF {
            // Greedily forbid components in index order while the optimum survives;
            // what remains is the lexicographically smallest optimal path.
            for e in 0..m {
                removed[e] = true;
                match self.dijkstra(c, &removed) {
                    Some((d, y)) if d == opt => x = y,
                    _ => removed[e] = false,
                }
            }
        }
        Ok(Solution::new(x))
    }

    pub(super) fn restricted_bound(
        &self,
        c: &[Cost],
        fix: &[Fixing],
    ) -> Result<Option<(Cost, Option<Solution>)>> {
        if c.iter().any(|&v| v < 0) {
            return Err(Error::Precondition("shortest path needs nonnegative costs".into()));
        }
        let removed: Vec<bool> = fix.iter().map(|f| *f == Some(false)).collect();
        let forced: Vec<usize> = (0..c.len()).filter(|&e| fix[e] == Some(true)).collect();
        let mut relaxed = c.to_vec();
        let mut base = 0;
        for &e in &forced {
            base += c[e];
            relaxed[e] = 0;
        }
        let Some((d, x)) = self.dijkstra(&relaxed, &removed) else {
            return Ok(None);
        };
        let consistent = forced.iter().all(|&e| x[e]);
        Ok(Some((base + d, consistent.then(|| Solution::new(x)))))
    }

    /// Whether `x` is the component set of a node-simple source-target path.
    pub(super) fn is_simple_path(&self, x: &[bool]) -> bool {
        let wanted = x.iter().filter(|&&b| b).count();
        let adj = self.adjacency();
        let mut used = vec![false; x.len()];
        let mut seen = vec![false; self.nodes];
        let mut v = self.source;
        let mut steps = 0;
        seen[v] = true;
        loop {
            if v == self.target {
                return steps == wanted;
            }
            let mut next = adj[v]
                .iter()
                .map(|&k| &self.arcs[k])
                .filter(|a| x[a.component] && !used[a.component]);
            let Some(a) = next.next() else { return false };
            if next.next().is_some() || seen[a.to] {
                return false;
            }
            used[a.component] = true;
            seen[a.to] = true;
            v = a.to;
            steps += 1;
        }
    }

    /// Collects all simple paths; `false` once more than `cap` were found.
    pub(super) fn enumerate_paths(&self, cap: u64, out: &mut Vec<Solution>) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes];
        let mut x = vec![false; self.components()];
        seen[self.source] = true;
        self.paths_from(self.source, &adj, &mut seen, &mut x, cap, out)
    }

    fn paths_from(
        &self,
        v: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        x: &mut [bool],
        cap: u64,
        out: &mut Vec<Solution>,
    ) -> bool {
        if v == self.target {
            out.push(Solution::new(x.to_vec()));
            return out.len() as u64 <= cap;
        }
        for &k in &adj[v] {
            let a = self.arcs[k];
            if seen[a.to] {
                continue;
            }
            seen[a.to] = true;
            x[a.component] = true;
            let ok = self.paths_from(a.to, adj, seen, x, cap, out);
            x[a.component] = false;
            seen[a.to] = false;
            if !ok {
                return false;
            }
        }
        true
    }
}
