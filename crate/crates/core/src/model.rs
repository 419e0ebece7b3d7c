//! Core domain types: the discrete budgeted uncertainty set, scenarios,
//! solutions and solution pools.
//!
//! All costs are integers in a declared cost unit (see [`Cost`]). Every
//! comparison made by the solvers is therefore exact.

use std::fmt;

use crate::error::{check_dim, Error, Result};

/// Exact cost value. Instances with fractional data are scaled to a common
/// integer unit when they are generated or loaded.
pub type Cost = i64;

/// Discrete budgeted uncertainty set: every component is either its nominal
/// cost or nominal plus deviation, and at most `gamma` components deviate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetedSet {
    c_hat: Vec<Cost>,
    d: Vec<Cost>,
    gamma: usize,
}

impl BudgetedSet {
    pub fn new(c_hat: Vec<Cost>, d: Vec<Cost>, gamma: usize) -> Result<Self> {
        check_dim("deviation vector", c_hat.len(), d.len())?;
        if let Some(i) = d.iter().position(|&v| v < 0) {
            return Err(Error::Invalid(format!(
                "deviation d[{i}] = {} is negative",
                d[i]
            )));
        }
        if gamma > c_hat.len() {
            return Err(Error::Invalid(format!(
                "budget {gamma} exceeds the number of items {}",
                c_hat.len()
            )));
        }
        Ok(Self { c_hat, d, gamma })
    }

    /// Same nominal costs and deviations with another budget.
    pub fn with_gamma(&self, gamma: usize) -> Result<Self> {
        Self::new(self.c_hat.clone(), self.d.clone(), gamma)
    }

    pub fn n(&self) -> usize {
        self.c_hat.len()
    }

    pub fn c_hat(&self) -> &[Cost] {
        &self.c_hat
    }

    pub fn d(&self) -> &[Cost] {
        &self.d
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    /// The nominal scenario (no deviation).
    pub fn nominal(&self) -> Scenario {
        Scenario::zero(self.n())
    }

    pub fn check_scenario(&self, s: &Scenario) -> Result<()> {
        check_dim("scenario", self.n(), s.len())?;
        if s.deviations() > self.gamma {
            return Err(Error::Invalid(format!(
                "scenario deviates {} components but the budget is {}",
                s.deviations(),
                self.gamma
            )));
        }
        Ok(())
    }

    /// Cost vector `c_hat + delta * d` of a scenario.
    pub fn induced_cost(&self, s: &Scenario) -> Result<Vec<Cost>> {
        self.check_scenario(s)?;
        Ok(self
            .c_hat
            .iter()
            .zip(&self.d)
            .zip(s.delta())
            .map(|((&c, &d), &on)| if on { c + d } else { c })
            .collect())
    }

    /// Number of admissible scenarios, `sum_{g <= gamma} C(n, g)`, saturating.
    pub fn scenario_count(&self) -> u128 {
        scenario_count(self.n(), self.gamma)
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

pub(crate) fn scenario_count(n: usize, gamma: usize) -> u128 {
    (0..=gamma.min(n)).fold(0u128, |acc, g| acc.saturating_add(binomial(n, g)))
}

/// A deviation pattern `delta`; `delta[i]` means component `i` deviates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scenario {
    delta: Vec<bool>,
}

impl Scenario {
    pub fn new(delta: Vec<bool>) -> Self {
        Self { delta }
    }

    pub fn zero(n: usize) -> Self {
        Self {
            delta: vec![false; n],
        }
    }

    pub fn from_indices(n: usize, ones: &[usize]) -> Self {
        let mut delta = vec![false; n];
        for &i in ones {
            delta[i] = true;
        }
        Self { delta }
    }

    pub fn delta(&self) -> &[bool] {
        &self.delta
    }

    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn deviations(&self) -> usize {
        self.delta.iter().filter(|&&b| b).count()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.delta
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bits(f, &self.delta)
    }
}

/// A binary decision vector. Feasibility is checked by the owning
/// [`DeterministicProblem`](crate::problems::DeterministicProblem).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Solution {
    x: Vec<bool>,
}

impl Solution {
    pub fn new(x: Vec<bool>) -> Self {
        Self { x }
    }

    pub fn from_indices(n: usize, ones: &[usize]) -> Self {
        let mut x = vec![false; n];
        for &i in ones {
            x[i] = true;
        }
        Self { x }
    }

    pub fn x(&self) -> &[bool] {
        &self.x
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.x
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    /// `c^T x`; lengths must agree.
    pub fn cost(&self, c: &[Cost]) -> Cost {
        debug_assert_eq!(c.len(), self.x.len());
        self.ones().map(|i| c[i]).sum()
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bits(f, &self.x)
    }
}

fn write_bits(f: &mut fmt::Formatter<'_>, bits: &[bool]) -> fmt::Result {
    for &b in bits {
        f.write_str(if b { "1" } else { "0" })?;
    }
    Ok(())
}

/// Parses a `0`/`1` string as written by the `Display` impls.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|ch| match ch {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
        })
        .collect()
}

/// An ordered K-tuple of solutions. Duplicates are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionPool {
    solutions: Vec<Solution>,
}

impl SolutionPool {
    pub fn new(solutions: Vec<Solution>) -> Result<Self> {
        let Some(first) = solutions.first() else {
            return Err(Error::Invalid("a solution pool needs at least one solution".into()));
        };
        let n = first.len();
        for s in &solutions {
            check_dim("pool solution", n, s.len())?;
        }
        Ok(Self { solutions })
    }

    /// `k` copies of one solution.
    pub fn repeat(solution: Solution, k: usize) -> Self {
        assert!(k >= 1, "pool size must be positive");
        Self {
            solutions: vec![solution; k],
        }
    }

    pub fn solutions(&self) -> &[Solution] {
        &self.solutions
    }

    pub fn k(&self) -> usize {
        self.solutions.len()
    }

    pub fn n(&self) -> usize {
        self.solutions[0].len()
    }

    pub fn into_solutions(self) -> Vec<Solution> {
        self.solutions
    }

    /// Inner minimum `min_k c^T x^(k)` at a scenario. Ties go to the
    /// smallest index. Returns `(value, argmin)` with a zero-based index.
    pub fn objective_at(&self, set: &BudgetedSet, s: &Scenario) -> Result<(Cost, usize)> {
        check_dim("pool", set.n(), self.n())?;
        let c = set.induced_cost(s)?;
        Ok(self.objective_at_cost(&c))
    }

    pub fn objective_at_cost(&self, c: &[Cost]) -> (Cost, usize) {
        let mut best = (self.solutions[0].cost(c), 0);
        for (k, x) in self.solutions.iter().enumerate().skip(1) {
            let v = x.cost(c);
            if v < best.0 {
                best = (v, k);
            }
        }
        best
    }
}

/// Worst-case value of a pool together with the scenario attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationResult {
    pub value: Cost,
    pub worst_scenario: Scenario,
    /// Zero-based index of the pool solution that is cheapest at the worst scenario.
    pub argmin_index: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_cost_cases() {
        let u = BudgetedSet::new(vec![1, 2], vec![3, 4], 1).unwrap();
        assert_eq!(u.induced_cost(&Scenario::zero(2)).unwrap(), vec![1, 2]);
        assert_eq!(
            u.induced_cost(&Scenario::new(vec![false, true])).unwrap(),
            vec![1, 6]
        );
        let full = u.with_gamma(2).unwrap();
        assert_eq!(
            full.induced_cost(&Scenario::new(vec![true, true])).unwrap(),
            vec![4, 6]
        );
    }

    #[test]
    fn induced_cost_rejects_bad_scenarios() {
        let u = BudgetedSet::new(vec![1, 2], vec![3, 4], 1).unwrap();
        assert!(matches!(
            u.induced_cost(&Scenario::zero(3)),
            Err(Error::Dimension { .. })
        ));
        assert!(u.induced_cost(&Scenario::new(vec![true, true])).is_err());
    }

    #[test]
    fn set_invariants() {
        assert!(BudgetedSet::new(vec![1, 2], vec![-1, 0], 1).is_err());
        assert!(BudgetedSet::new(vec![1, 2], vec![1, 0], 3).is_err());
        assert!(BudgetedSet::new(vec![1], vec![1, 0], 0).is_err());
        assert!(BudgetedSet::new(vec![], vec![], 0).is_ok());
    }

    #[test]
    fn pool_objective_examples() {
        let u = BudgetedSet::new(vec![1, 2, 3], vec![2, 2, 2], 1).unwrap();
        let x1 = Solution::new(vec![true, true, false]);
        let x2 = Solution::new(vec![false, true, true]);
        let pool = SolutionPool::new(vec![x1.clone(), x2]).unwrap();
        let e1 = Scenario::from_indices(3, &[0]);
        assert_eq!(pool.objective_at(&u, &e1).unwrap(), (5, 0));

        let single = SolutionPool::new(vec![x1.clone()]).unwrap();
        assert_eq!(single.objective_at(&u, &e1).unwrap(), (5, 0));

        let dup = SolutionPool::repeat(x1, 2);
        assert_eq!(dup.objective_at(&u, &e1).unwrap(), (5, 0));
    }

    #[test]
    fn empty_pool_is_rejected() {
        assert!(SolutionPool::new(vec![]).is_err());
        let r = SolutionPool::new(vec![Solution::zero_len(), Solution::new(vec![true])]);
        assert!(r.is_err());
    }

    impl Solution {
        fn zero_len() -> Self {
            Solution::new(vec![])
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(scenario_count(4, 2), 1 + 4 + 6);
        assert_eq!(scenario_count(3, 5), 8);
    }

    #[test]
    fn bit_strings() {
        let s = Scenario::from_indices(4, &[1, 3]);
        assert_eq!(s.to_string(), "0101");
        assert_eq!(parse_bits("0101").unwrap(), s.delta());
        assert!(parse_bits("01x").is_err());
    }
}
