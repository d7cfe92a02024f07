//! Per-recipe impacts, the proportional choice model, and linearized
//! expected-impact constraints.
//!
//! Scores here are always normalized (`rating / 10`) and aligned with the
//! ground set by index.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{DomainError, Impact, ImpactTable, Recipe};

#[derive(Debug, Error)]
pub enum ImpactError {
    #[error("recipe `{recipe}`: cannot resolve main ingredient `{ingredient}`")]
    Unresolved { recipe: String, ingredient: String },
    #[error("selection is empty")]
    EmptySelection,
    #[error("index {index} is out of range for {len} items")]
    OutOfRange { index: usize, len: usize },
    #[error("reduction ratio must be finite and non-negative, got {0}")]
    InvalidRatio(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dimension {
    Emissions,
    Animals,
}

impl Dimension {
    pub const ALL: [Dimension; 2] = [Dimension::Emissions, Dimension::Animals];

    pub fn of(self, impact: &Impact) -> f64 {
        match self {
            Dimension::Emissions => impact.emissions,
            Dimension::Animals => impact.animals,
        }
    }
}

/// Impacts of each ground-set recipe, taken from its main ingredient.
#[derive(Debug, Clone, PartialEq)]
pub struct RecipeImpacts {
    values: Vec<Impact>,
}

impl RecipeImpacts {
    pub fn new(values: Vec<Impact>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, i: usize) -> &Impact {
        &self.values[i]
    }

    pub fn values(&self, dimension: Dimension) -> Vec<f64> {
        self.values.iter().map(|v| dimension.of(v)).collect()
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        Self::new(order.iter().map(|&i| self.values[i]).collect())
    }
}

pub fn resolve_impacts(recipes: &[Recipe], table: &ImpactTable) -> Result<RecipeImpacts, ImpactError> {
    recipes
        .iter()
        .map(|r| {
            table.lookup(r.main_ingredient()).map_err(|e| match e {
                DomainError::UnknownIngredient(ingredient) | DomainError::MissingImputation(ingredient) => {
                    ImpactError::Unresolved {
                        recipe: r.id.clone(),
                        ingredient,
                    }
                }
                other => ImpactError::Unresolved {
                    recipe: r.id.clone(),
                    ingredient: other.to_string(),
                },
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(RecipeImpacts::new)
}

fn check_selection(selection: &[usize], len: usize) -> Result<(), ImpactError> {
    if selection.is_empty() {
        return Err(ImpactError::EmptySelection);
    }
    match selection.iter().find(|&&i| i >= len) {
        Some(&index) => Err(ImpactError::OutOfRange { index, len }),
        None => Ok(()),
    }
}

/// Probability of each selected item being chosen, proportional to its score.
pub fn choice_distribution(scores: &[f64], selection: &[usize]) -> Result<Vec<f64>, ImpactError> {
    check_selection(selection, scores.len())?;
    let total: f64 = selection.iter().map(|&i| scores[i]).sum();
    Ok(selection.iter().map(|&i| scores[i] / total).collect())
}

/// Choice-weighted mean impact of a selection.
pub fn expected_impact(
    selection: &[usize],
    scores: &[f64],
    impacts: &RecipeImpacts,
    dimension: Dimension,
) -> Result<f64, ImpactError> {
    check_selection(selection, scores.len().min(impacts.len()))?;
    let (weighted, total) = selection.iter().fold((0.0, 0.0), |(w, t), &i| {
        (w + scores[i] * dimension.of(impacts.get(i)), t + scores[i])
    });
    Ok(weighted / total)
}

/// `Σ a_i x_i ≤ 0` with `a_i = p_i (l_i − T)` and `T = C · E[l(x_O)]`.
///
/// Equivalent to `E[l(x)] ≤ T` for any selection with positive total score.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearConstraint {
    pub dimension: Dimension,
    pub ratio: f64,
    pub threshold: f64,
    pub coefficients: Vec<f64>,
}

impl LinearConstraint {
    pub fn lhs(&self, selection: &[usize]) -> f64 {
        selection.iter().map(|&i| self.coefficients[i]).sum()
    }

    pub fn is_satisfied(&self, selection: &[usize], tolerance: f64) -> bool {
        self.lhs(selection) <= tolerance
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            coefficients: order.iter().map(|&i| self.coefficients[i]).collect(),
            ..self.clone()
        }
    }
}

pub fn linearize_constraint(
    scores: &[f64],
    impacts: &RecipeImpacts,
    ratio: f64,
    original: &[usize],
    dimension: Dimension,
) -> Result<LinearConstraint, ImpactError> {
    if !(ratio.is_finite() && ratio >= 0.0) {
        return Err(ImpactError::InvalidRatio(ratio));
    }
    let threshold = ratio * expected_impact(original, scores, impacts, dimension)?;
    let coefficients = scores
        .iter()
        .enumerate()
        .map(|(i, &p)| p * (dimension.of(impacts.get(i)) - threshold))
        .collect();
    Ok(LinearConstraint {
        dimension,
        ratio,
        threshold,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::bundled;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn impacts(emissions: &[f64]) -> RecipeImpacts {
        RecipeImpacts::new(
            emissions
                .iter()
                .map(|&e| Impact {
                    emissions: e,
                    animals: 0.0,
                })
                .collect(),
        )
    }

    #[test]
    fn resolves_main_ingredients() {
        let table = bundled::impact_table();
        let menu = bundled::original_menu();
        let resolved = resolve_impacts(menu.recipes(), &table).unwrap();
        assert_eq!(resolved.len(), 36);
        // o36 Inari Taco is tofu-led; o07 duck takes turkey's animal count.
        assert_eq!(resolved.get(35).emissions, 3.16);
        assert_eq!(resolved.get(6).animals, table.lookup("turkey").unwrap().animals);

        let mut odd = menu.recipes()[0].clone();
        odd.ingredients = vec!["dragonfruit".into()];
        match resolve_impacts(&[odd], &table) {
            Err(ImpactError::Unresolved { recipe, ingredient }) => {
                assert_eq!((recipe.as_str(), ingredient.as_str()), ("o01", "dragonfruit"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn choice_examples() {
        assert_eq!(
            choice_distribution(&[0.8, 0.4, 0.4], &[0, 1, 2]).unwrap(),
            vec![0.5, 0.25, 0.25]
        );
        assert_eq!(choice_distribution(&[0.3], &[0]).unwrap(), vec![1.0]);
        let uniform = choice_distribution(&[0.6; 5], &[0, 1, 2, 3, 4]).unwrap();
        assert!(uniform.iter().all(|&p| (p - 0.2).abs() < 1e-15));
        assert!(matches!(
            choice_distribution(&[0.5], &[]),
            Err(ImpactError::EmptySelection)
        ));
    }

    #[test]
    fn expectation_examples() {
        let sel = [0, 1, 2];
        let e = expected_impact(
            &sel,
            &[0.8, 0.4, 0.4],
            &impacts(&[100.0, 10.0, 10.0]),
            Dimension::Emissions,
        )
        .unwrap();
        assert_eq!(e, 55.0);
        let c = expected_impact(&sel, &[0.9, 0.2, 0.5], &impacts(&[7.5; 3]), Dimension::Emissions).unwrap();
        assert!((c - 7.5).abs() < 1e-12);
    }

    #[test]
    fn expectation_matches_luce_summation() {
        let scores = [0.9, 0.3, 0.7, 0.1, 0.5, 1.0];
        let l = [40.0, 3.0, 12.5, 0.5, 99.0, 2.0];
        let sel = [0, 2, 3, 5];
        // Oracle: enumerate outcomes, probability of each = p_i / Σ p.
        let z: f64 = sel.iter().map(|&i| scores[i]).sum();
        let oracle: f64 = sel.iter().map(|&i| (scores[i] / z) * l[i]).sum();
        let got = expected_impact(&sel, &scores, &impacts(&l), Dimension::Emissions).unwrap();
        assert!((got - oracle).abs() < 1e-12);
    }

    #[test]
    fn linearization_example() {
        let c = linearize_constraint(
            &[0.8, 0.4],
            &impacts(&[60.0, 20.0]),
            0.25,
            &[0, 1],
            Dimension::Emissions,
        )
        .unwrap();
        let t = 35.0 / 3.0;
        assert!((c.threshold - t).abs() < 1e-12);
        assert!((c.coefficients[0] - 0.8 * (60.0 - t)).abs() < 1e-12);
        assert!((c.coefficients[1] - 0.4 * (20.0 - t)).abs() < 1e-12);
    }

    #[test]
    fn self_comparison_is_tight() {
        let c = linearize_constraint(
            &[0.8, 0.4, 0.6],
            &impacts(&[60.0, 20.0, 5.0]),
            1.0,
            &[0, 1, 2],
            Dimension::Emissions,
        )
        .unwrap();
        assert!(c.lhs(&[0, 1, 2]).abs() < 1e-12);
    }

    #[test]
    fn invalid_ratio() {
        assert!(matches!(
            linearize_constraint(&[0.5], &impacts(&[1.0]), -0.1, &[0], Dimension::Emissions),
            Err(ImpactError::InvalidRatio(_))
        ));
    }

    fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
        (1u32..1 << n).map(move |mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
    }

    #[test]
    fn six_item_exhaustive_equivalence() {
        let scores = [0.9, 0.3, 0.7, 0.1, 0.5, 1.0];
        let imp = impacts(&[40.0, 3.0, 12.5, 0.5, 99.0, 2.0]);
        let c = linearize_constraint(&scores, &imp, 0.4, &[0, 1, 4], Dimension::Emissions).unwrap();
        for sel in subsets(6) {
            let fractional = expected_impact(&sel, &scores, &imp, Dimension::Emissions).unwrap() <= c.threshold;
            assert_eq!(c.lhs(&sel) <= 0.0, fractional, "{sel:?}");
        }
    }

    #[test]
    fn random_eight_item_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let scores: Vec<f64> = (0..8).map(|_| rng.gen_range(1..=10) as f64 / 10.0).collect();
            let imp = impacts(&(0..8).map(|_| rng.gen_range(0.0..100.0)).collect::<Vec<_>>());
            let ratio = rng.gen_range(0.1..1.5);
            let c = linearize_constraint(&scores, &imp, ratio, &[0, 1, 2, 3], Dimension::Emissions).unwrap();
            for sel in subsets(8) {
                let e = expected_impact(&sel, &scores, &imp, Dimension::Emissions).unwrap();
                // Skip knife-edge subsets where rounding decides both sides.
                if (e - c.threshold).abs() < 1e-9 {
                    continue;
                }
                assert_eq!(c.lhs(&sel) <= 0.0, e <= c.threshold);
            }
        }
    }

    proptest! {
        #[test]
        fn distribution_sums_to_one(scores in proptest::collection::vec(0.1f64..=1.0, 1..20)) {
            let sel: Vec<usize> = (0..scores.len()).collect();
            let total: f64 = choice_distribution(&scores, &sel).unwrap().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn distribution_is_scale_invariant(scores in proptest::collection::vec(0.1f64..=1.0, 1..12), k in 0.01f64..100.0) {
            let sel: Vec<usize> = (0..scores.len()).collect();
            let scaled: Vec<f64> = scores.iter().map(|s| s * k).collect();
            let a = choice_distribution(&scores, &sel).unwrap();
            let b = choice_distribution(&scaled, &sel).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
