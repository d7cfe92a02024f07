//! Statistical tests, nutrition and menu-transform baselines, pair mining,
//! and the randomized pairwise evaluation harness.

mod eval;
mod nutrition;
mod pairs;
mod stats;
mod transform;

pub use eval::{
    pairs_to_csv, presentation_order, run_pairwise_eval, EvalReport, Order, PairComparison, PairOutcome, Position,
    StratumAccuracy,
};
pub use nutrition::{nutrition_rank, NutritionPopulation, SensoryDimension};
pub use pairs::{mine_pairs, MinedPair, RatedItem};
pub use stats::{bonferroni, chi_squared_gof, quartile_strata, welch_t_test, ChiSquared, TTest};
pub use transform::{transform_menu, MenuTransform};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("samples need at least two values each, got {0} and {1}")]
    SampleTooSmall(usize, usize),
    #[error("both samples have zero variance")]
    DegenerateSamples,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("need at least 4 values for quartiles, got {0}")]
    TooFewForQuartiles(usize),
    #[error("{dimension} needs a normalization population")]
    MissingPopulation { dimension: SensoryDimension },
    #[error("only {found} significant pairs, {wanted} requested")]
    NotEnoughPairs { found: usize, wanted: usize },
    #[error("duplicate item id `{0}`")]
    DuplicateId(String),
    #[error("no pairs to evaluate")]
    NoPairs,
    #[error("predictor produced no valid answers ({0} invalid)")]
    NoValidPredictions(usize),
    #[error("transform `{0}` left the menu empty")]
    EmptyTransform(MenuTransform),
    #[error(transparent)]
    Domain(#[from] crate::domain::DomainError),
}

/// One side of a pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::A => "a",
            Side::B => "b",
        }
    }
}

impl std::str::FromStr for Side {
    type Err = AnalyticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(Side::A),
            "b" => Ok(Side::B),
            other => Err(AnalyticsError::InvalidArgument(format!(
                "side must be `a` or `b`, got `{other}`"
            ))),
        }
    }
}
