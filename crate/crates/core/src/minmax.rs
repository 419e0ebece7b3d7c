//! Classical min-max problems over budgeted-type sets, reduced to
//! polynomially many deterministic solves.
//!
//! Two set shapes are supported: a budgeted set with some deviations fixed to
//! one or zero ([`FixedBudgetedSet`], used by the branching heuristic) and the
//! ordered-block cells of the partition heuristic ([`Heur1Cell`]).

use std::collections::HashSet;

use crate::error::{check_dim, Error, Result};
use crate::model::{BudgetedSet, Cost, Scenario, Solution};
use crate::problems::DeterministicProblem;

fn pos(v: Cost) -> Cost {
    v.max(0)
}

/// Optimal min-max solution over some uncertainty subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinMaxResult {
    pub solution: Solution,
    pub value: Cost,
}

/// A budgeted set with deviations forced on (`fixed_one`) or off (`fixed_zero`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedBudgetedSet {
    base: BudgetedSet,
    fixed_one: Vec<usize>,
    fixed_zero: Vec<usize>,
}

impl FixedBudgetedSet {
    pub fn new(base: BudgetedSet) -> Self {
        Self {
            base,
            fixed_one: Vec::new(),
            fixed_zero: Vec::new(),
        }
    }

    pub fn with_fixings(base: BudgetedSet, fixed_one: &[usize], fixed_zero: &[usize]) -> Result<Self> {
        let mut f = Self::new(base);
        for &i in fixed_one {
            f = f.fix_one(i)?;
        }
        for &i in fixed_zero {
            f = f.fix_zero(i)?;
        }
        Ok(f)
    }

    pub fn base(&self) -> &BudgetedSet {
        &self.base
    }

    pub fn fixed_one(&self) -> &[usize] {
        &self.fixed_one
    }

    pub fn fixed_zero(&self) -> &[usize] {
        &self.fixed_zero
    }

    pub fn status(&self, i: usize) -> Option<bool> {
        if self.fixed_one.contains(&i) {
            Some(true)
        } else if self.fixed_zero.contains(&i) {
            Some(false)
        } else {
            None
        }
    }

    /// Remaining budget `gamma - |fixed_one|`.
    pub fn effective_gamma(&self) -> usize {
        self.base.gamma() - self.fixed_one.len()
    }

    fn check_free(&self, i: usize) -> Result<()> {
        if i >= self.base.n() {
            return Err(Error::Invalid(format!("index {i} out of range")));
        }
        if self.status(i).is_some() {
            return Err(Error::Invalid(format!("index {i} is already fixed")));
        }
        Ok(())
    }

    /// The child set with `delta_i = 1`.
    pub fn fix_one(&self, i: usize) -> Result<Self> {
        self.check_free(i)?;
        if self.effective_gamma() == 0 {
            return Err(Error::Invalid("no budget left to force a deviation".into()));
        }
        let mut f = self.clone();
        f.fixed_one.push(i);
        f.fixed_one.sort_unstable();
        Ok(f)
    }

    /// The child set with `delta_i = 0`.
    pub fn fix_zero(&self, i: usize) -> Result<Self> {
        self.check_free(i)?;
        let mut f = self.clone();
        f.fixed_zero.push(i);
        f.fixed_zero.sort_unstable();
        Ok(f)
    }

    pub fn unfixed(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.base.n()).filter(|&i| self.status(i).is_none())
    }

    /// A single scenario remains: the budget is spent or nothing is free.
    pub fn is_fully_fixed(&self) -> bool {
        self.effective_gamma() == 0 || self.unfixed().next().is_none()
    }

    /// The equivalent plain budgeted set: forced deviations are folded into
    /// the nominal costs and fixed components lose their deviation.
    pub fn effective(&self) -> BudgetedSet {
        let n = self.base.n();
        let mut c_hat = self.base.c_hat().to_vec();
        let mut d = self.base.d().to_vec();
        for i in 0..n {
            match self.status(i) {
                Some(true) => {
                    c_hat[i] += d[i];
                    d[i] = 0;
                }
                Some(false) => d[i] = 0,
                None => {}
            }
        }
        BudgetedSet::new(c_hat, d, self.effective_gamma()).expect("effective set stays valid")
    }

    pub fn contains(&self, s: &Scenario) -> bool {
        s.len() == self.base.n()
            && s.deviations() <= self.base.gamma()
            && self.fixed_one.iter().all(|&i| s.delta()[i])
            && self.fixed_zero.iter().all(|&i| !s.delta()[i])
    }
}

/// Min-max over a (fixed) budgeted set: the best of
/// `alpha * gamma' + min_x (c_hat' + (d' - alpha)_+)^T x` over
/// `alpha in {d'_i} + {0}`. Ties keep the smallest `alpha`.
pub fn minmax_fixed(p: &DeterministicProblem, set: &FixedBudgetedSet) -> Result<MinMaxResult> {
    check_dim("uncertainty set", p.n(), set.base().n())?;
    let eff = set.effective();
    let gamma = eff.gamma() as Cost;
    let mut alphas: Vec<Cost> = eff.d().to_vec();
    alphas.push(0);
    alphas.sort_unstable();
    alphas.dedup();

    let mut best: Option<MinMaxResult> = None;
    let mut cost = vec![0; eff.n()];
    for alpha in alphas {
        for (i, c) in cost.iter_mut().enumerate() {
            *c = eff.c_hat()[i] + pos(eff.d()[i] - alpha);
        }
        let (x, v) = p.solve(&cost)?;
        let value = alpha * gamma + v;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(MinMaxResult { solution: x, value });
        }
    }
    Ok(best.expect("alpha = 0 is always a candidate"))
}

/// Classical min-max over the whole budgeted set.
pub fn minmax(p: &DeterministicProblem, set: &BudgetedSet) -> Result<MinMaxResult> {
    minmax_fixed(p, &FixedBudgetedSet::new(set.clone()))
}

/// Indices sorted by non-decreasing deviation, ties by index.
pub fn default_ordering(set: &BudgetedSet) -> Vec<usize> {
    let mut order: Vec<usize> = (0..set.n()).collect();
    order.sort_by_key(|&i| (set.d()[i], i));
    order
}

/// Cell `k` (1-based) of the `K`-block partition along an ordering: the
/// first `(k-1)t` ordered components never deviate, at least one of the
/// next block does, and at most `gamma` deviate overall. The last cell's
/// block runs to the end of the ordering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Heur1Cell {
    base: BudgetedSet,
    k: usize,
    cells: usize,
    t: usize,
    ordering: Vec<usize>,
}

impl Heur1Cell {
    pub fn new(base: BudgetedSet, cells: usize, k: usize, ordering: Vec<usize>) -> Result<Self> {
        let n = base.n();
        if cells == 0 || cells > n {
            return Err(Error::Precondition(format!(
                "the partition needs 1 <= K <= n, got K = {cells}, n = {n}"
            )));
        }
        if k == 0 || k > cells {
            return Err(Error::Precondition(format!("cell index {k} outside 1..={cells}")));
        }
        check_dim("ordering", n, ordering.len())?;
        let mut seen = vec![false; n];
        for &i in &ordering {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Invalid("ordering is not a permutation".into()));
            }
        }
        Ok(Self {
            t: n / cells,
            base,
            k,
            cells,
            ordering,
        })
    }

    pub fn base(&self) -> &BudgetedSet {
        &self.base
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    fn middle_range(&self) -> (usize, usize) {
        let start = (self.k - 1) * self.t;
        let end = if self.k == self.cells {
            self.base.n()
        } else {
            self.k * self.t
        };
        (start, end)
    }

    /// Components whose deviation is forced off.
    pub fn prefix(&self) -> &[usize] {
        &self.ordering[..self.middle_range().0]
    }

    /// Components of which at least one deviates.
    pub fn middle(&self) -> &[usize] {
        let (a, b) = self.middle_range();
        &self.ordering[a..b]
    }

    pub fn tail(&self) -> &[usize] {
        &self.ordering[self.middle_range().1..]
    }

    pub fn contains(&self, s: &Scenario) -> bool {
        s.len() == self.base.n()
            && s.deviations() <= self.base.gamma()
            && self.prefix().iter().all(|&i| !s.delta()[i])
            && self.middle().iter().any(|&i| s.delta()[i])
    }

    /// Candidate dual pairs `(alpha, beta)` in scan order: `(a, 0)` for all
    /// `a` ascending, then `(a, a)`, then `(a, (a - d_i)_+)` for every middle
    /// component; repeated pairs are dropped.
    pub fn candidates(&self) -> Vec<(Cost, Cost)> {
        let d = self.base.d();
        let mut alphas: Vec<Cost> = self
            .middle()
            .iter()
            .chain(self.tail())
            .map(|&i| d[i])
            .collect();
        alphas.push(0);
        alphas.sort_unstable();
        alphas.dedup();

        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut push = |pair: (Cost, Cost)| {
            if seen.insert(pair) {
                out.push(pair);
            }
        };
        for &a in &alphas {
            push((a, 0));
        }
        for &a in &alphas {
            push((a, a));
        }
        for &a in &alphas {
            for &i in self.middle() {
                push((a, pos(a - d[i])));
            }
        }
        out
    }

    /// Number of distinct alpha values.
    pub fn alpha_count(&self) -> usize {
        let mut a: Vec<Cost> = self
            .middle()
            .iter()
            .chain(self.tail())
            .map(|&i| self.base.d()[i])
            .collect();
        a.push(0);
        a.sort_unstable();
        a.dedup();
        a.len()
    }
}

/// Min-max over one partition cell via its dual kink points: for every
/// candidate pair solve the deterministic problem with cost `c_hat + w` and
/// add the offset `alpha*gamma - beta + m*(beta - alpha)_+`, where `m` is the
/// size of the cell's middle block. The first minimum in scan order wins.
pub fn minmax_heur1_cell(p: &DeterministicProblem, cell: &Heur1Cell) -> Result<MinMaxResult> {
    let base = cell.base();
    check_dim("uncertainty set", p.n(), base.n())?;
    if base.gamma() == 0 {
        return Err(Error::Precondition(
            "a partition cell is empty when the budget is zero".into(),
        ));
    }
    let gamma = base.gamma() as Cost;
    let m = cell.middle().len() as Cost;
    let d = base.d();
    let mut best: Option<MinMaxResult> = None;
    let mut cost = base.c_hat().to_vec();
    for (alpha, beta) in cell.candidates() {
        for &i in cell.prefix() {
            cost[i] = base.c_hat()[i];
        }
        for &i in cell.middle() {
            cost[i] = base.c_hat()[i] + pos(d[i] + beta - alpha) - pos(beta - alpha);
        }
        for &i in cell.tail() {
            cost[i] = base.c_hat()[i] + pos(d[i] - alpha);
        }
        let (x, v) = p.solve(&cost)?;
        let value = alpha * gamma - beta + m * pos(beta - alpha) + v;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(MinMaxResult { solution: x, value });
        }
    }
    Ok(best.expect("(0, 0) is always a candidate"))
}

/// All deviation patterns of a cell; meant for small test instances.
pub fn enumerate_cell_scenarios(cell: &Heur1Cell, cap: u128) -> Result<Vec<Scenario>> {
    let base = cell.base();
    if base.scenario_count() > cap {
        return Err(Error::Capacity {
            what: format!("{} admissible scenarios", base.scenario_count()),
            limit: cap.min(u64::MAX as u128) as u64,
            hint: "cell enumeration is for small instances",
        });
    }
    Ok(all_scenarios(base)
        .into_iter()
        .filter(|s| cell.contains(s))
        .collect())
}

/// Every admissible scenario of a budgeted set in lexicographic order.
pub(crate) fn all_scenarios(set: &BudgetedSet) -> Vec<Scenario> {
    fn rec(i: usize, left: usize, delta: &mut Vec<bool>, out: &mut Vec<Scenario>) {
        if i == delta.len() {
            out.push(Scenario::new(delta.clone()));
            return;
        }
        rec(i + 1, left, delta, out);
        if left > 0 {
            delta[i] = true;
            rec(i + 1, left - 1, delta, out);
            delta[i] = false;
        }
    }
    let mut out = Vec::new();
    rec(0, set.gamma(), &mut vec![false; set.n()], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_minmax<F: Fn(&Scenario) -> bool>(
        p: &DeterministicProblem,
        set: &BudgetedSet,
        member: F,
    ) -> Cost {
        let scen: Vec<Vec<Cost>> = all_scenarios(set)
            .into_iter()
            .filter(|s| member(s))
            .map(|s| set.induced_cost(&s).unwrap())
            .collect();
        p.enumerate_feasible(1 << 20)
            .unwrap()
            .iter()
            .map(|x| scen.iter().map(|c| x.cost(c)).max().unwrap())
            .min()
            .unwrap()
    }

    #[test]
    fn selection_example() {
        let p = DeterministicProblem::selection(3, 1).unwrap();
        let u = BudgetedSet::new(vec![4, 5, 6], vec![5, 1, 0], 1).unwrap();
        let r = minmax(&p, &u).unwrap();
        assert_eq!(r.value, 6);
        assert_eq!(brute_minmax(&p, &u, |_| true), 6);
    }

    #[test]
    fn saturated_and_empty_budget() {
        let p = DeterministicProblem::selection(4, 2).unwrap();
        let u = BudgetedSet::new(vec![4, 1, 6, 2], vec![1, 7, 0, 2], 3).unwrap();
        // three components can deviate and three have d > 0: full deviation
        let full: Vec<Cost> = u.c_hat().iter().zip(u.d()).map(|(c, d)| c + d).collect();
        assert_eq!(minmax(&p, &u).unwrap().value, p.solve(&full).unwrap().1);
        let u0 = u.with_gamma(0).unwrap();
        assert_eq!(minmax(&p, &u0).unwrap().value, p.solve(u.c_hat()).unwrap().1);
    }

    #[test]
    fn fixings_fold_into_costs() {
        let u = BudgetedSet::new(vec![1, 2, 3], vec![4, 5, 6], 2).unwrap();
        let f = FixedBudgetedSet::new(u.clone()).fix_one(1).unwrap().fix_zero(2).unwrap();
        let e = f.effective();
        assert_eq!(e.c_hat(), &[1, 7, 3]);
        assert_eq!(e.d(), &[4, 0, 0]);
        assert_eq!(e.gamma(), 1);
        assert!(!f.is_fully_fixed());
        let g = f.fix_one(0).unwrap();
        assert!(g.is_fully_fixed());
        assert!(g.fix_one(0).is_err());
        assert!(f.fix_zero(1).is_err());
        let h = FixedBudgetedSet::new(u.with_gamma(1).unwrap()).fix_one(0).unwrap();
        assert!(h.fix_one(1).is_err());
    }

    #[test]
    fn fixed_minmax_matches_enumeration() {
        let p = DeterministicProblem::min_knapsack(vec![3, 5, 2, 4, 6], 9).unwrap();
        let u = BudgetedSet::new(vec![5, 3, 8, 2, 7], vec![4, 6, 1, 5, 3], 2).unwrap();
        for (one, zero) in [(vec![], vec![]), (vec![1], vec![]), (vec![3], vec![0, 4]), (vec![0, 2], vec![])] {
            let f = FixedBudgetedSet::with_fixings(u.clone(), &one, &zero).unwrap();
            let r = minmax_fixed(&p, &f).unwrap();
            assert_eq!(r.value, brute_minmax(&p, &u, |s| f.contains(s)), "{one:?} {zero:?}");
            assert!(p.is_feasible(&r.solution));
        }
    }

    #[test]
    fn cell_blocks() {
        let u = BudgetedSet::new(vec![0; 5], vec![1; 5], 2).unwrap();
        let order = vec![4, 3, 2, 1, 0];
        let c1 = Heur1Cell::new(u.clone(), 2, 1, order.clone()).unwrap();
        assert_eq!((c1.prefix(), c1.middle(), c1.tail()), (&[][..], &[4, 3][..], &[2, 1, 0][..]));
        let c2 = Heur1Cell::new(u.clone(), 2, 2, order.clone()).unwrap();
        assert_eq!((c2.prefix(), c2.middle(), c2.tail()), (&[4, 3][..], &[2, 1, 0][..], &[][..]));
        assert!(Heur1Cell::new(u.clone(), 6, 1, order.clone()).is_err());
        assert!(Heur1Cell::new(u.clone(), 2, 3, order).is_err());
        assert!(Heur1Cell::new(u, 2, 1, vec![0, 0, 1, 2, 3]).is_err());
    }

    #[test]
    fn cell_scenarios_example() {
        let u = BudgetedSet::new(vec![0; 4], vec![1; 4], 2).unwrap();
        let id = vec![0, 1, 2, 3];
        let u1 = enumerate_cell_scenarios(&Heur1Cell::new(u.clone(), 2, 1, id.clone()).unwrap(), 1000).unwrap();
        let u2 = enumerate_cell_scenarios(&Heur1Cell::new(u.clone(), 2, 2, id).unwrap(), 1000).unwrap();
        let s = |v: &[Scenario]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(s(&u1), ["0100", "0101", "0110", "1000", "1001", "1010", "1100"]);
        assert_eq!(s(&u2), ["0001", "0010", "0011"]);
    }

    #[test]
    fn zero_candidate_weights() {
        let u = BudgetedSet::new(vec![1, 2, 3, 4], vec![3, 1, 4, 1], 2).unwrap();
        let cell = Heur1Cell::new(u, 2, 2, vec![0, 1, 2, 3]).unwrap();
        let cands = cell.candidates();
        assert_eq!(cands[0], (0, 0));
        assert!(cands.len() <= cell.alpha_count() * (2 + cell.middle().len()));
    }

    #[test]
    fn zero_budget_cell_is_rejected() {
        let p = DeterministicProblem::selection(4, 1).unwrap();
        let u = BudgetedSet::new(vec![1; 4], vec![1; 4], 0).unwrap();
        let cell = Heur1Cell::new(u, 2, 1, vec![0, 1, 2, 3]).unwrap();
        assert!(matches!(minmax_heur1_cell(&p, &cell), Err(Error::Precondition(_))));
    }

    #[test]
    fn cell_minmax_selection_example() {
        let p = DeterministicProblem::selection(4, 1).unwrap();
        let u = BudgetedSet::new(vec![3, 1, 4, 1], vec![5, 9, 2, 6], 2).unwrap();
        let id = vec![0, 1, 2, 3];
        for k in 1..=2 {
            let cell = Heur1Cell::new(u.clone(), 2, k, id.clone()).unwrap();
            let r = minmax_heur1_cell(&p, &cell).unwrap();
            assert_eq!(r.value, brute_minmax(&p, &u, |s| cell.contains(s)), "cell {k}");
        }
    }
}
