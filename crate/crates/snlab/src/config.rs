//! JSON-facing run configuration: operator spec, requested number kinds,
//! scheme declarations, budgets, and output selection.

use std::collections::BTreeSet;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::Budget;
use crate::schemes::{Scheme, SupportLevels};
use crate::space::Space;
use crate::zoo::OperatorSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NumberKind {
    #[serde(rename = "alpha")]
    Alpha,
    #[serde(rename = "delta")]
    Delta,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "tau")]
    Tau,
    #[serde(rename = "alphaQ")]
    AlphaQ,
    #[serde(rename = "deltaQ")]
    DeltaQ,
}

impl NumberKind {
    pub fn name(&self) -> &'static str {
        match self {
            NumberKind::Alpha => "alpha",
            NumberKind::Delta => "delta",
            NumberKind::C => "c",
            NumberKind::Tau => "tau",
            NumberKind::AlphaQ => "alphaQ",
            NumberKind::DeltaQ => "deltaQ",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BudgetConfig {
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_iters")]
    pub iters: usize,
}

fn default_restarts() -> usize {
    Budget::default().restarts
}

fn default_iters() -> usize {
    Budget::default().iters
}

impl Default for BudgetConfig {
    fn default() -> Self {
        BudgetConfig {
            restarts: default_restarts(),
            iters: default_iters(),
        }
    }
}

impl From<BudgetConfig> for Budget {
    fn from(b: BudgetConfig) -> Budget {
        Budget {
            restarts: b.restarts,
            iters: b.iters,
        }
    }
}

/// Declarative scheme description; `levels`/`dual` are lists of coordinate
/// supports per level and only apply to the custom kind.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SchemeSpec {
    Subspace,
    Coordinate,
    Custom {
        levels: Vec<Vec<Vec<usize>>>,
        #[serde(default)]
        dual: Option<Vec<Vec<Vec<usize>>>>,
    },
}

fn to_support_levels(raw: &[Vec<Vec<usize>>]) -> SupportLevels {
    raw.iter()
        .map(|level| {
            level
                .iter()
                .map(|s| s.iter().copied().collect::<BTreeSet<usize>>())
                .collect()
        })
        .collect()
}

impl SchemeSpec {
    pub fn build(&self, space: Space) -> Scheme {
        match self {
            SchemeSpec::Subspace => Scheme::subspace(space),
            SchemeSpec::Coordinate => Scheme::coordinate(space),
            SchemeSpec::Custom { levels, dual } => Scheme::custom(
                space,
                to_support_levels(levels),
                dual.as_deref().map(to_support_levels),
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl Default for OutputFormat {
    fn default() -> Self {
        OutputFormat::Json
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub operator: OperatorSpec,
    pub numbers: Vec<NumberKind>,
    pub n_max: usize,
    #[serde(default)]
    pub scheme: Option<SchemeSpec>,
    #[serde(default)]
    pub net_size: Option<usize>,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.numbers.is_empty() {
            return Err(Error::InvalidConfig("numbers list is empty".into()));
        }
        if self.numbers.contains(&NumberKind::Tau) && self.net_size.is_none() {
            return Err(Error::InvalidConfig(
                "tau requires net_size (M)".into(),
            ));
        }
        let needs_scheme = self
            .numbers
            .iter()
            .any(|k| matches!(k, NumberKind::AlphaQ | NumberKind::DeltaQ));
        if needs_scheme && self.scheme.is_none() {
            return Err(Error::InvalidConfig(
                "alphaQ/deltaQ require a scheme spec".into(),
            ));
        }
        if let Some(SchemeSpec::Custom { levels, .. }) = &self.scheme {
            if levels.is_empty() {
                return Err(Error::InvalidConfig("custom scheme has no levels".into()));
            }
        }
        Ok(())
    }

    pub fn budget(&self) -> Budget {
        self.budget.into()
    }
}

/// Batch of operators sharing one analysis configuration; each operator
/// becomes a row group in the table output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BatchConfig {
    pub operators: Vec<OperatorSpec>,
    pub numbers: Vec<NumberKind>,
    pub n_max: usize,
    #[serde(default)]
    pub scheme: Option<SchemeSpec>,
    #[serde(default)]
    pub net_size: Option<usize>,
    #[serde(default)]
    pub budget: BudgetConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl BatchConfig {
    pub fn run_config(&self, index: usize) -> RunConfig {
        RunConfig {
            operator: self.operators[index].clone(),
            numbers: self.numbers.clone(),
            n_max: self.n_max,
            scheme: self.scheme.clone(),
            net_size: self.net_size,
            budget: self.budget,
            seed: self.seed.wrapping_add(index as u64),
            tolerance: None,
            format: OutputFormat::Csv,
            out: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::WeightSeq;

    fn base_config() -> RunConfig {
        RunConfig {
            operator: OperatorSpec::Diagonal {
                weights: WeightSeq::List(vec![3.0, 1.0]),
                n: 2,
                p: crate::exponent::Exponent::two(),
            },
            numbers: vec![NumberKind::Alpha],
            n_max: 2,
            scheme: None,
            net_size: None,
            budget: BudgetConfig::default(),
            seed: 0,
            tolerance: None,
            format: OutputFormat::Json,
            out: None,
        }
    }

    #[test]
    fn tau_requires_net_size() {
        let mut cfg = base_config();
        cfg.numbers = vec![NumberKind::Tau];
        assert!(cfg.validate().is_err());
        cfg.net_size = Some(16);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn scheme_kinds_require_scheme() {
        let mut cfg = base_config();
        cfg.numbers = vec![NumberKind::DeltaQ];
        assert!(cfg.validate().is_err());
        cfg.scheme = Some(SchemeSpec::Coordinate);
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = base_config();
        let s = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back.n_max, 2);
        assert_eq!(back.numbers, vec![NumberKind::Alpha]);
    }

    #[test]
    fn custom_scheme_spec_builds() {
        let spec = SchemeSpec::Custom {
            levels: vec![vec![vec![]], vec![vec![0], vec![1]]],
            dual: None,
        };
        let scheme = spec.build(Space::new(2, crate::exponent::Exponent::two()).unwrap());
        assert_eq!(scheme.kind_name(), "custom");
    }
}
