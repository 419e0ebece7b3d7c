//! Versioned JSON files for instances, solution pools and scenario lists.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{parse_bits, BudgetedSet, Cost, Scenario, Solution, SolutionPool};
use crate::problems::{DeterministicProblem, Graph, ProblemKind};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProblemSpec {
    Unconstrained,
    Selection { p: usize },
    /// Covering knapsack `sum w_i x_i >= threshold`.
    Knapsack { weights: Vec<Cost>, threshold: Cost },
    ShortestPath { graph: Graph },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub seed: u64,
    pub rng: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema: u32,
    pub problem: ProblemSpec,
    pub n: usize,
    pub c_hat: Vec<Cost>,
    pub d: Vec<Cost>,
    pub gamma: usize,
    /// Integer cost units per instance unit (distances are stored scaled).
    #[serde(default = "one")]
    pub cost_scale: Cost,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

fn one() -> Cost {
    1
}

impl InstanceFile {
    pub fn new(p: &DeterministicProblem, set: &BudgetedSet) -> Self {
        let problem = match p.kind() {
            ProblemKind::Unconstrained => ProblemSpec::Unconstrained,
            ProblemKind::Selection { p } => ProblemSpec::Selection { p: *p },
            ProblemKind::MinKnapsack { weights, threshold } => ProblemSpec::Knapsack {
                weights: weights.clone(),
                threshold: *threshold,
            },
            ProblemKind::ShortestPath(g) => ProblemSpec::ShortestPath { graph: g.clone() },
        };
        Self {
            schema: SCHEMA_VERSION,
            problem,
            n: set.n(),
            c_hat: set.c_hat().to_vec(),
            d: set.d().to_vec(),
            gamma: set.gamma(),
            cost_scale: 1,
            provenance: None,
        }
    }

    /// Validated problem and uncertainty set; `gamma` overrides the stored budget.
    pub fn build(&self, gamma: Option<usize>) -> Result<(DeterministicProblem, BudgetedSet)> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported instance schema {}", self.schema)));
        }
        let p = match &self.problem {
            ProblemSpec::Unconstrained => DeterministicProblem::unconstrained(self.n),
            ProblemSpec::Selection { p } => DeterministicProblem::selection(self.n, *p)?,
            ProblemSpec::Knapsack { weights, threshold } => {
                DeterministicProblem::min_knapsack(weights.clone(), *threshold)?
            }
            ProblemSpec::ShortestPath { graph } => DeterministicProblem::shortest_path(graph.clone())?,
        };
        crate::error::check_dim("instance size", self.n, p.n())?;
        let set = BudgetedSet::new(self.c_hat.clone(), self.d.clone(), gamma.unwrap_or(self.gamma))?;
        crate::error::check_dim("uncertainty set", p.n(), set.n())?;
        if p.requires_nonnegative_costs() && self.c_hat.iter().any(|&c| c < 0) {
            return Err(Error::Invalid("shortest-path costs must be nonnegative".into()));
        }
        Ok((p, set))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: Self = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        f.build(None)?;
        Ok(f)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Solutions as 0/1 strings, one per pool member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoolFile {
    pub schema: u32,
    pub n: usize,
    pub solutions: Vec<String>,
}

impl PoolFile {
    pub fn new(pool: &SolutionPool) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            n: pool.n(),
            solutions: pool.solutions().iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn pool(&self) -> Result<SolutionPool> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported pool schema {}", self.schema)));
        }
        let sols = self
            .solutions
            .iter()
            .map(|s| {
                let x = parse_bits(s)?;
                crate::error::check_dim("pool solution", self.n, x.len())?;
                Ok(Solution::new(x))
            })
            .collect::<Result<Vec<_>>>()?;
        SolutionPool::new(sols)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&std::fs::read_to_string(path)?).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Deviation patterns as 0/1 strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub schema: u32,
    pub n: usize,
    pub scenarios: Vec<String>,
}

impl ScenarioFile {
    pub fn new(n: usize, scenarios: &[Scenario]) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            n,
            scenarios: scenarios.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported scenario schema {}", self.schema)));
        }
        self.scenarios
            .iter()
            .map(|s| {
                let delta = parse_bits(s)?;
                crate::error::check_dim("scenario", self.n, delta.len())?;
                Ok(Scenario::new(delta))
            })
            .collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&std::fs::read_to_string(path)?).map_err(|e| Error::Parse(e.to_string()))
    }
}
