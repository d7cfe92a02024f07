//! Nutrition-label baseline for sensory comparisons. Each dimension is
//! predicted from an amount-per-serving density; the product with the higher
//! density is ranked higher.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AnalyticsError, Side};
use crate::domain::NutritionFacts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensoryDimension {
    OverallSatisfaction,
    Meatiness,
    Greasiness,
    Juiciness,
    Sweetness,
    Saltiness,
    PurchaseIntent,
}

impl SensoryDimension {
    pub const ALL: [SensoryDimension; 7] = [
        SensoryDimension::OverallSatisfaction,
        SensoryDimension::Meatiness,
        SensoryDimension::Greasiness,
        SensoryDimension::Juiciness,
        SensoryDimension::Sweetness,
        SensoryDimension::Saltiness,
        SensoryDimension::PurchaseIntent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SensoryDimension::OverallSatisfaction => "overall_satisfaction",
            SensoryDimension::Meatiness => "meatiness",
            SensoryDimension::Greasiness => "greasiness",
            SensoryDimension::Juiciness => "juiciness",
            SensoryDimension::Sweetness => "sweetness",
            SensoryDimension::Saltiness => "saltiness",
            SensoryDimension::PurchaseIntent => "purchase_intent",
        }
    }
}

impl fmt::Display for SensoryDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SensoryDimension {
    type Err = AnalyticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        Self::ALL
            .into_iter()
            .find(|d| d.name() == key)
            .ok_or_else(|| AnalyticsError::InvalidArgument(format!("unknown sensory dimension `{s}`")))
    }
}

fn density(amount: f64, facts: &NutritionFacts) -> f64 {
    amount / facts.serving_size
}

/// Maximum fat and sodium densities over the products being compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NutritionPopulation {
    pub max_fat_density: f64,
    pub max_sodium_density: f64,
}

impl NutritionPopulation {
    pub fn new<'a>(facts: impl IntoIterator<Item = &'a NutritionFacts>) -> Self {
        facts.into_iter().fold(
            Self {
                max_fat_density: 0.0,
                max_sodium_density: 0.0,
            },
            |acc, f| Self {
                max_fat_density: acc.max_fat_density.max(density(f.fat, f)),
                max_sodium_density: acc.max_sodium_density.max(density(f.sodium, f)),
            },
        )
    }

    fn normalized(&self, facts: &NutritionFacts) -> f64 {
        let scale = |v: f64, max: f64| if max > 0.0 { v / max } else { 0.0 };
        let fat = scale(density(facts.fat, facts), self.max_fat_density);
        let sodium = scale(density(facts.sodium, facts), self.max_sodium_density);
        (fat + sodium) / 2.0
    }
}

/// Which of `a` and `b` ranks higher on `dimension`. Exact ties go to `a`.
pub fn nutrition_rank(
    dimension: SensoryDimension,
    a: &NutritionFacts,
    b: &NutritionFacts,
    population: Option<&NutritionPopulation>,
) -> Result<Side, AnalyticsError> {
    let value = |f: &NutritionFacts| -> Result<f64, AnalyticsError> {
        Ok(match dimension {
            SensoryDimension::Greasiness | SensoryDimension::Juiciness => density(f.fat, f),
            SensoryDimension::Meatiness => density(f.protein, f),
            SensoryDimension::Sweetness => density(f.sugar, f),
            SensoryDimension::Saltiness => density(f.sodium, f),
            SensoryDimension::OverallSatisfaction | SensoryDimension::PurchaseIntent => population
                .ok_or(AnalyticsError::MissingPopulation { dimension })?
                .normalized(f),
        })
    };
    Ok(if value(b)? > value(a)? { Side::B } else { Side::A })
}
