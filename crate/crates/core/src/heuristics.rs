//! Polynomial heuristics for the min-max-min problem: the ordered partition
//! heuristic, the deviation-branching heuristic and the random Pareto
//! scenario baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::minmax::{default_ordering, minmax_fixed, minmax_heur1_cell, FixedBudgetedSet, Heur1Cell, MinMaxResult};
use crate::model::{BudgetedSet, Cost, EvaluationResult, Solution, SolutionPool};
use crate::problems::DeterministicProblem;
use crate::scenario::evaluate_pool;

/// A pool produced by a heuristic together with its exact worst case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicResult {
    pub pool: SolutionPool,
    pub evaluation: EvaluationResult,
    /// Set by the branching heuristic when it proved its pool optimal.
    pub optimal: bool,
}

impl HeuristicResult {
    pub fn value(&self) -> Cost {
        self.evaluation.value
    }
}

fn check_k(set: &BudgetedSet, k: usize) -> Result<()> {
    if k == 0 || k > set.n() {
        return Err(Error::Precondition(format!(
            "need 1 <= K <= n, got K = {k} with n = {}",
            set.n()
        )));
    }
    Ok(())
}

fn finish(set: &BudgetedSet, solutions: Vec<Solution>, optimal: bool) -> Result<HeuristicResult> {
    let pool = SolutionPool::new(solutions)?;
    let evaluation = evaluate_pool(set, &pool)?;
    Ok(HeuristicResult {
        pool,
        evaluation,
        optimal,
    })
}

/// Partition heuristic: split the scenarios along `ordering` (default:
/// non-decreasing deviation) into `k` blocks and solve each cell exactly.
/// The value is the pool's worst case over the whole set.
pub fn heur1(
    p: &DeterministicProblem,
    set: &BudgetedSet,
    k: usize,
    ordering: Option<Vec<usize>>,
) -> Result<HeuristicResult> {
    check_dim("uncertainty set", p.n(), set.n())?;
    check_k(set, k)?;
    if set.gamma() == 0 {
        let (x, _) = p.solve(set.c_hat())?;
        return finish(set, vec![x; k], false);
    }
    let ordering = ordering.unwrap_or_else(|| default_ordering(set));
    let cells: Vec<Heur1Cell> = (1..=k)
        .map(|j| Heur1Cell::new(set.clone(), k, j, ordering.clone()))
        .collect::<Result<_>>()?;
    let solutions: Vec<Solution> = cells
        .par_iter()
        .map(|cell| minmax_heur1_cell(p, cell).map(|r| r.solution))
        .collect::<Result<_>>()?;
    finish(set, solutions, false)
}

/// One live set of the branching heuristic with its cached min-max optimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionCell {
    pub set: FixedBudgetedSet,
    pub result: MinMaxResult,
    /// Creation counter; smaller is older.
    pub age: usize,
}

impl PartitionCell {
    pub fn is_fully_fixed(&self) -> bool {
        self.set.is_fully_fixed()
    }
}

/// The live list of the branching heuristic. Cells always partition the
/// full budgeted set.
#[derive(Clone, Debug)]
pub struct PartitionState {
    cells: Vec<PartitionCell>,
    created: usize,
}

impl PartitionState {
    pub fn new(p: &DeterministicProblem, set: &BudgetedSet) -> Result<Self> {
        check_dim("uncertainty set", p.n(), set.n())?;
        let root = FixedBudgetedSet::new(set.clone());
        let result = minmax_fixed(p, &root)?;
        Ok(Self {
            cells: vec![PartitionCell {
                set: root,
                result,
                age: 0,
            }],
            created: 1,
        })
    }

    pub fn cells(&self) -> &[PartitionCell] {
        &self.cells
    }

    pub fn max_value(&self) -> Cost {
        self.cells.iter().map(|c| c.result.value).max().expect("never empty")
    }

    /// Whether a cell of maximum value holds a single scenario; then the
    /// pool matches the max-min lower bound.
    pub fn proves_optimal(&self) -> bool {
        let top = self.max_value();
        self.cells
            .iter()
            .any(|c| c.result.value == top && c.is_fully_fixed())
    }

    /// Index of the cell to split next: maximum value, not fully fixed,
    /// oldest first.
    fn pick(&self) -> Option<usize> {
        (0..self.cells.len())
            .filter(|&j| !self.cells[j].is_fully_fixed())
            .max_by_key(|&j| (self.cells[j].result.value, std::cmp::Reverse(self.cells[j].age)))
    }

    fn branch_index(cell: &PartitionCell) -> usize {
        let d = cell.set.base().d();
        let used = cell
            .result
            .solution
            .ones()
            .filter(|&i| cell.set.status(i).is_none())
            .max_by_key(|&i| (d[i], std::cmp::Reverse(i)));
        used.unwrap_or_else(|| {
            cell.set
                .unfixed()
                .max_by_key(|&i| (d[i], std::cmp::Reverse(i)))
                .expect("a cell that is not fully fixed has a free index")
        })
    }

    /// Splits one cell into its forced and forbidden children. Returns
    /// `false` when every cell is fully fixed.
    pub fn branch_once(&mut self, p: &DeterministicProblem) -> Result<bool> {
        let Some(j) = self.pick() else {
            return Ok(false);
        };
        let i = Self::branch_index(&self.cells[j]);
        let parent = self.cells.remove(j);
        let plus = parent.set.fix_one(i)?;
        let minus = parent.set.fix_zero(i)?;
        let (rp, rm) = rayon::join(|| minmax_fixed(p, &plus), || minmax_fixed(p, &minus));
        self.cells.push(PartitionCell {
            set: plus,
            result: rp?,
            age: self.created,
        });
        self.cells.push(PartitionCell {
            set: minus,
            result: rm?,
            age: self.created + 1,
        });
        self.created += 2;
        Ok(true)
    }

    pub fn solutions(&self) -> Vec<Solution> {
        self.cells.iter().map(|c| c.result.solution.clone()).collect()
    }
}

/// Branching heuristic: repeatedly split the most expensive cell on the
/// deviation its min-max solution is most exposed to, until `k` cells exist.
pub fn heur2(p: &DeterministicProblem, set: &BudgetedSet, k: usize) -> Result<HeuristicResult> {
    check_k(set, k)?;
    let mut state = PartitionState::new(p, set)?;
    while state.cells().len() < k {
        if state.proves_optimal() || !state.branch_once(p)? {
            break;
        }
    }
    let optimal = state.proves_optimal();
    let mut solutions = state.solutions();
    // stopped early: repeat the last solution to fill the pool
    while solutions.len() < k {
        solutions.push(solutions.last().expect("nonempty").clone());
    }
    finish(set, solutions, optimal)
}

/// Scenario maximizing `lambda^T c` over the set: deviate on the `gamma`
/// largest positive `lambda_i d_i`, ties to the smaller index.
fn pareto_scenario(set: &BudgetedSet, lambda: &[f64]) -> Vec<Cost> {
    let d = set.d();
    let mut order: Vec<usize> = (0..set.n()).filter(|&i| lambda[i] * d[i] as f64 > 0.0).collect();
    order.sort_by(|&a, &b| {
        let (wa, wb) = (lambda[a] * d[a] as f64, lambda[b] * d[b] as f64);
        wb.total_cmp(&wa).then(a.cmp(&b))
    });
    let mut c = set.c_hat().to_vec();
    for &i in order.iter().take(set.gamma()) {
        c[i] += d[i];
    }
    c
}

/// Baseline: deterministic optima at `k` random Pareto scenarios. Weights
/// are drawn from ChaCha8 seeded with `seed`.
pub fn heurps(p: &DeterministicProblem, set: &BudgetedSet, k: usize, seed: u64) -> Result<HeuristicResult> {
    check_dim("uncertainty set", p.n(), set.n())?;
    if k == 0 {
        return Err(Error::Precondition("K must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..set.n()).map(|_| rng.gen::<f64>()).collect())
        .collect();
    let solutions: Vec<Solution> = weights
        .par_iter()
        .map(|lambda| p.solve(&pareto_scenario(set, lambda)).map(|(x, _)| x))
        .collect::<Result<_>>()?;
    finish(set, solutions, false)
}
