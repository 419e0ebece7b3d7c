//! CPLEX LP-format export of the linearized master.
//!
//! Variables (all indices 1-based): `omega` (free), `x_k_i` (binary),
//! `y_k_j` (binary, scenario `j` served by solution `k`), `w_k_j_i >= 0`
//! standing for `y_k_j * x_k_i`. Shortest-path instances add binary arc
//! flows `f_k_a` for arc `a` of the stored arc list. Consecutive solutions are
//! ordered by `sum_i i x_k_i + 1 <= sum_i i x_(k+1)_i`, so pools with repeated
//! solutions are excluded.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::Cost;
use crate::problems::{DeterministicProblem, ProblemKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpStats {
    pub variables: usize,
    pub constraints: usize,
}

struct Model {
    text: String,
    rows: usize,
}

impl Model {
    /// Appends `name: terms sense rhs`, wrapping long expressions.
    fn row(&mut self, name: &str, terms: &[(Cost, String)], sense: &str, rhs: Cost) {
        let _ = write!(self.text, " {name}:");
        let mut written = 0;
        for (coef, var) in terms.iter().filter(|(c, _)| *c != 0) {
            if written > 0 && written % 8 == 0 {
                self.text.push_str("\n   ");
            }
            let sign = if *coef < 0 { '-' } else { '+' };
            match coef.unsigned_abs() {
                1 => {
                    let _ = write!(self.text, " {sign} {var}");
                }
                a => {
                    let _ = write!(self.text, " {sign} {a} {var}");
                }
            }
            written += 1;
        }
        if written == 0 {
            self.text.push_str(" 0 omega");
        }
        let _ = writeln!(self.text, " {sense} {rhs}");
        self.rows += 1;
    }
}

/// Writes the master for scenario cost vectors `costs` and `k` solutions.
/// The `sym_*` rows order the solutions by strictly increasing weighted
/// index sum, so the model assumes at least `k` distinct feasible solutions.
pub fn write_master_lp<W: Write>(
    p: &DeterministicProblem,
    costs: &[Vec<Cost>],
    k: usize,
    out: &mut W,
) -> Result<LpStats> {
    if costs.is_empty() || k == 0 {
        return Err(Error::Precondition("need at least one scenario and K >= 1".into()));
    }
    let n = p.n();
    for c in costs {
        crate::error::check_dim("cost vector", n, c.len())?;
    }
    let m = costs.len();
    let x = |k: usize, i: usize| format!("x_{}_{}", k + 1, i + 1);
    let y = |k: usize, j: usize| format!("y_{}_{}", k + 1, j + 1);
    let w = |k: usize, j: usize, i: usize| format!("w_{}_{}_{}", k + 1, j + 1, i + 1);
    let negative = costs.iter().flatten().any(|&c| c < 0);

    let mut model = Model {
        text: String::new(),
        rows: 0,
    };
    for j in 0..m {
        let mut terms = vec![(1, "omega".to_string())];
        for kk in 0..k {
            for i in 0..n {
                terms.push((-costs[j][i], w(kk, j, i)));
            }
        }
        model.row(&format!("scen_{}", j + 1), &terms, ">=", 0);
    }
    for j in 0..m {
        let terms: Vec<_> = (0..k).map(|kk| (1, y(kk, j))).collect();
        model.row(&format!("assign_{}", j + 1), &terms, "=", 1);
    }
    for kk in 0..k {
        for j in 0..m {
            for i in 0..n {
                let tag = format!("{}_{}_{}", kk + 1, j + 1, i + 1);
                let (wv, xv, yv) = (w(kk, j, i), x(kk, i), y(kk, j));
                model.row(
                    &format!("link_{tag}"),
                    &[(1, wv.clone()), (-1, xv.clone()), (-1, yv.clone())],
                    ">=",
                    -1,
                );
                if negative {
                    // with negative costs w must not exceed its factors
                    model.row(&format!("linkx_{tag}"), &[(1, wv.clone()), (-1, xv)], "<=", 0);
                    model.row(&format!("linky_{tag}"), &[(1, wv), (-1, yv)], "<=", 0);
                }
            }
        }
    }

    let mut flows = Vec::new();
    for kk in 0..k {
        match p.kind() {
            ProblemKind::Unconstrained => {}
            ProblemKind::Selection { p: count } => {
                let terms: Vec<_> = (0..n).map(|i| (1, x(kk, i))).collect();
                model.row(&format!("select_{}", kk + 1), &terms, "=", *count as Cost);
            }
            ProblemKind::MinKnapsack { weights, threshold } => {
                let terms: Vec<_> = (0..n).map(|i| (weights[i], x(kk, i))).collect();
                model.row(&format!("cover_{}", kk + 1), &terms, ">=", *threshold);
            }
            ProblemKind::ShortestPath(g) => {
                let f = |a: usize| format!("f_{}_{}", kk + 1, a + 1);
                for v in 0..g.nodes {
                    let mut terms = Vec::new();
                    for (a, arc) in g.arcs.iter().enumerate() {
                        if arc.from == v {
                            terms.push((1, f(a)));
                        }
                        if arc.to == v {
                            terms.push((-1, f(a)));
                        }
                    }
                    let rhs = if v == g.source {
                        1
                    } else if v == g.target {
                        -1
                    } else {
                        0
                    };
                    model.row(&format!("flow_{}_{}", kk + 1, v + 1), &terms, "=", rhs);
                }
                for e in 0..n {
                    let mut terms = vec![(1, x(kk, e))];
                    for (a, arc) in g.arcs.iter().enumerate() {
                        if arc.component == e {
                            terms.push((-1, f(a)));
                        }
                    }
                    model.row(&format!("arc_{}_{}", kk + 1, e + 1), &terms, "=", 0);
                }
                flows.extend((0..g.arcs.len()).map(f));
            }
        }
    }
    for kk in 0..k.saturating_sub(1) {
        let mut terms: Vec<_> = (0..n).map(|i| (i as Cost + 1, x(kk, i))).collect();
        terms.extend((0..n).map(|i| (-(i as Cost + 1), x(kk + 1, i))));
        model.row(&format!("sym_{}", kk + 1), &terms, "<=", -1);
    }

    let mut binaries: Vec<String> = Vec::new();
    for kk in 0..k {
        binaries.extend((0..n).map(|i| x(kk, i)));
    }
    for kk in 0..k {
        binaries.extend((0..m).map(|j| y(kk, j)));
    }
    binaries.extend(flows);
    let mut continuous = Vec::new();
    for kk in 0..k {
        for j in 0..m {
            continuous.extend((0..n).map(|i| w(kk, j, i)));
        }
    }

    writeln!(out, "\\ min-max-min master: {m} scenarios, K = {k}, n = {n}")?;
    writeln!(out, "Minimize\n obj: omega\nSubject To")?;
    out.write_all(model.text.as_bytes())?;
    writeln!(out, "Bounds\n omega free")?;
    for v in &continuous {
        writeln!(out, " {v} >= 0")?;
    }
    writeln!(out, "Binaries")?;
    for chunk in binaries.chunks(10) {
        writeln!(out, " {}", chunk.join(" "))?;
    }
    writeln!(out, "End")?;
    Ok(LpStats {
        variables: 1 + binaries.len() + continuous.len(),
        constraints: model.rows,
    })
}

pub fn export_master_lp(
    p: &DeterministicProblem,
    costs: &[Vec<Cost>],
    k: usize,
    path: &Path,
) -> Result<LpStats> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    let stats = write_master_lp(p, costs, k, &mut file)?;
    file.flush()?;
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Graph;

    fn lp(p: &DeterministicProblem, costs: &[Vec<Cost>], k: usize) -> (String, LpStats) {
        let mut buf = Vec::new();
        let s = write_master_lp(p, costs, k, &mut buf).unwrap();
        (String::from_utf8(buf).unwrap(), s)
    }

    #[test]
    fn variable_count() {
        let p = DeterministicProblem::selection(4, 2).unwrap();
        let costs = vec![vec![1, 2, 3, 4], vec![4, 3, 2, 1], vec![2, 2, 2, 2]];
        let (text, s) = lp(&p, &costs, 2);
        let (k, n, m) = (2, 4, 3);
        assert_eq!(s.variables, 1 + k * n + k * m + k * m * n);
        assert!(text.contains(" sym_1: + x_1_1 + 2 x_1_2 + 3 x_1_3 + 4 x_1_4 - x_2_1"));
        assert!(text.contains(" select_2: + x_2_1 + x_2_2 + x_2_3 + x_2_4 = 2"));
        assert!(text.contains(" link_2_3_4: + w_2_3_4 - x_2_4 - y_2_3 >= -1"));
        assert!(!text.contains("linkx"));
        assert!(text.trim_end().ends_with("End"));
    }

    #[test]
    fn degenerate_sizes() {
        let p = DeterministicProblem::min_knapsack(vec![2, 3], 3).unwrap();
        let (text, s) = lp(&p, &[vec![5, -1]], 1);
        assert_eq!(s.variables, 1 + 2 + 1 + 2);
        assert!(text.contains(" assign_1: + y_1_1 = 1"));
        assert!(text.contains(" scen_1: + omega - 5 w_1_1_1 + w_1_1_2 >= 0"));
        assert!(text.contains("linkx_1_1_2"));
        assert!(!text.contains("sym_"));
    }

    #[test]
    fn shortest_path_flows() {
        let g = Graph::undirected(3, 0, 2, &[(0, 2), (0, 1), (1, 2)]);
        let p = DeterministicProblem::shortest_path(g).unwrap();
        let (text, s) = lp(&p, &[vec![1, 1, 1]], 1);
        assert_eq!(s.variables, 1 + 3 + 1 + 3 + 6);
        assert!(text.contains(" flow_1_1: + f_1_1 - f_1_2 + f_1_3 - f_1_4 = 1"));
        assert!(text.contains(" arc_1_2: + x_1_2 - f_1_3 - f_1_4 = 0"));
    }
}
