//! The menu-selection integer quadratic program.
//!
//! Maximize `Σ p_i x_i − λ Σ_{i<j} s_ij x_i x_j` subject to `Σ x_i = K` and a
//! list of linear constraints `Σ a_i x_i ≤ 0`. Pairs are counted once.
//!
//! Three solvers share one objective routine and one tie-break rule (higher
//! objective wins; exact ties go to the lexicographically smaller index set):
//! [`solve_exhaustive`] enumerates, [`solve_exact`] is depth-first
//! branch-and-bound, and [`solve_heuristic`] is greedy plus 1-swap search.

mod branch_bound;
mod exhaustive;
mod heuristic;
mod proposition;

use std::cmp::Ordering;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::impact::{linearize_constraint, Dimension, ImpactError, LinearConstraint, RecipeImpacts};
use crate::similarity::SimilarityMatrix;

pub use branch_bound::{solve_exact, solve_exact_with, ExactOptions};
pub use exhaustive::{count_subsets, solve_exhaustive, solve_exhaustive_with, DEFAULT_SUBSET_BUDGET};
pub use heuristic::solve_heuristic;
pub use proposition::{verify_proposition1, BoundReport};

/// Absolute tolerance for constraint slack and objective comparisons.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("selection has {got} items, expected {expected}")]
    WrongCardinality { got: usize, expected: usize },
    #[error("{subsets} candidate subsets exceed the enumeration budget of {budget}")]
    BudgetExceeded { subsets: u128, budget: u128 },
    #[error("no feasible selection exists")]
    Infeasible,
    #[error("heuristic found no feasible selection (infeasibility not proven)")]
    InfeasibilityUnproven,
    #[error("branch-and-bound stopped after {nodes} nodes without proving optimality")]
    NodeLimit {
        nodes: u64,
        incumbent: Option<Box<MenuSolution>>,
    },
    #[error(transparent)]
    Impact(#[from] ImpactError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MenuProblem {
    scores: Vec<f64>,
    similarity: SimilarityMatrix,
    lambda: f64,
    k: usize,
    constraints: Vec<LinearConstraint>,
    original: Vec<usize>,
}

impl MenuProblem {
    pub fn new(
        scores: Vec<f64>,
        similarity: SimilarityMatrix,
        lambda: f64,
        k: usize,
        constraints: Vec<LinearConstraint>,
        original: Vec<usize>,
    ) -> Result<Self, OptimizeError> {
        let n = scores.len();
        let invalid = |m: String| Err(OptimizeError::InvalidProblem(m));
        if k == 0 || k > n {
            return invalid(format!("K = {k} must be in 1..={n}"));
        }
        if similarity.n() != n {
            return invalid(format!(
                "similarity matrix is {0}x{0}, expected {n}x{n}",
                similarity.n()
            ));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return invalid(format!("lambda must be finite and non-negative, got {lambda}"));
        }
        if scores.iter().any(|s| !s.is_finite() || *s < 0.0) {
            return invalid("scores must be finite and non-negative".into());
        }
        for i in 0..n {
            for j in 0..n {
                let s = similarity.get(i, j);
                if !(0.0..=1.0).contains(&s) || s != similarity.get(j, i) || (i == j && s != 0.0) {
                    return invalid(format!("similarity ({i}, {j}) = {s} breaks the matrix invariants"));
                }
            }
        }
        if let Some(c) = constraints.iter().find(|c| c.coefficients.len() != n) {
            return invalid(format!(
                "{:?} constraint has {} coefficients",
                c.dimension,
                c.coefficients.len()
            ));
        }
        if original.iter().any(|&i| i >= n) {
            return invalid("original menu index out of range".into());
        }
        Ok(Self {
            scores,
            similarity,
            lambda,
            k,
            constraints,
            original,
        })
    }

    /// Builds the constrained instance: each `(dimension, C)` limit becomes
    /// `E[l(x)] ≤ C · E[l(x_O)]`, linearized against the original menu.
    pub fn with_impact_limits(
        scores: Vec<f64>,
        similarity: SimilarityMatrix,
        lambda: f64,
        k: usize,
        impacts: &RecipeImpacts,
        original: Vec<usize>,
        limits: &[(Dimension, f64)],
    ) -> Result<Self, OptimizeError> {
        if impacts.len() != scores.len() {
            return Err(OptimizeError::InvalidProblem(format!(
                "{} impacts for {} items",
                impacts.len(),
                scores.len()
            )));
        }
        let constraints = limits
            .iter()
            .map(|&(dim, ratio)| linearize_constraint(&scores, impacts, ratio, &original, dim))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(scores, similarity, lambda, k, constraints, original)
    }

    pub fn n(&self) -> usize {
        self.scores.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn similarity(&self) -> &SimilarityMatrix {
        &self.similarity
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn original(&self) -> &[usize] {
        &self.original
    }

    /// Same problem with true scores swapped in (used for bound checks).
    pub fn with_scores(&self, scores: Vec<f64>) -> Result<Self, OptimizeError> {
        Self::new(
            scores,
            self.similarity.clone(),
            self.lambda,
            self.k,
            self.constraints.clone(),
            self.original.clone(),
        )
    }

    /// Reindexes so that new item `m` is old item `order[m]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let mut inverse = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let mut original: Vec<usize> = self.original.iter().map(|&i| inverse[i]).collect();
        original.sort_unstable();
        Self {
            scores: order.iter().map(|&i| self.scores[i]).collect(),
            similarity: self.similarity.permuted(order),
            lambda: self.lambda,
            k: self.k,
            constraints: self.constraints.iter().map(|c| c.permuted(order)).collect(),
            original,
        }
    }

    pub fn is_feasible(&self, selection: &[usize]) -> bool {
        selection.len() == self.k && self.constraints.iter().all(|c| c.is_satisfied(selection, TOLERANCE))
    }

    /// Objective of a sorted selection. Summation order is fixed so every
    /// solver gets bit-identical values for the same set.
    fn objective_unchecked(&self, selection: &[usize]) -> f64 {
        let linear: f64 = selection.iter().map(|&i| self.scores[i]).sum();
        let mut pairs = 0.0;
        for (a, &i) in selection.iter().enumerate() {
            for &j in &selection[a + 1..] {
                pairs += self.similarity.get(i, j);
            }
        }
        linear - self.lambda * pairs
    }

    fn solution(
        &self,
        mut selection: Vec<usize>,
        certificate: Certificate,
        nodes: u64,
        wall_time: Duration,
    ) -> MenuSolution {
        selection.sort_unstable();
        let objective = self.objective_unchecked(&selection);
        let total: f64 = selection.iter().map(|&i| self.scores[i]).sum();
        let expected = self
            .constraints
            .iter()
            .map(|c| ExpectedImpact {
                dimension: c.dimension,
                // Σ a_i = Σ p_i l_i − T Σ p_i, so E[l] = T + lhs / Σ p_i.
                value: c.threshold + c.lhs(&selection) / total,
                threshold: c.threshold,
                slack: -c.lhs(&selection),
            })
            .collect();
        MenuSolution {
            selection,
            objective,
            expected,
            certificate,
            stats: SolverStats { nodes, wall_time },
        }
    }
}

/// Objective of `selection` (any order) under `problem`.
pub fn objective(problem: &MenuProblem, selection: &[usize]) -> Result<f64, OptimizeError> {
    if selection.len() != problem.k {
        return Err(OptimizeError::WrongCardinality {
            got: selection.len(),
            expected: problem.k,
        });
    }
    let mut sorted = selection.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != selection.len() || sorted.last().is_some_and(|&i| i >= problem.n()) {
        return Err(OptimizeError::InvalidProblem(
            "selection has repeated or out-of-range indices".into(),
        ));
    }
    Ok(problem.objective_unchecked(&sorted))
}

/// `true` if `(obj, sel)` beats the incumbent under the shared tie-break.
pub(crate) fn improves(obj: f64, sel: &[usize], best: Option<(f64, &[usize])>) -> bool {
    match best {
        None => true,
        Some((best_obj, best_sel)) => match obj.partial_cmp(&best_obj) {
            Some(Ordering::Greater) => true,
            Some(Ordering::Equal) => sel < best_sel,
            _ => false,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectedImpact {
    pub dimension: Dimension,
    pub value: f64,
    pub threshold: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverStats {
    pub nodes: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MenuSolution {
    /// Sorted ground-set indices.
    pub selection: Vec<usize>,
    pub objective: f64,
    pub expected: Vec<ExpectedImpact>,
    pub certificate: Certificate,
    pub stats: SolverStats,
}

impl MenuSolution {
    pub fn expected_impact(&self, dimension: Dimension) -> Option<f64> {
        self.expected.iter().find(|e| e.dimension == dimension).map(|e| e.value)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn four_item(lambda: f64, s12: f64) -> MenuProblem {
        let sim = SimilarityMatrix::from_fn(4, |i, j| if (i, j) == (0, 1) { s12 } else { 0.0 });
        MenuProblem::new(vec![0.9, 0.8, 0.7, 0.1], sim, lambda, 2, vec![], vec![0, 1]).unwrap()
    }

    #[test]
    fn objective_examples() {
        // Items are 1-based in the worked examples; {1,3} -> [0, 2].
        assert!((objective(&four_item(0.5, 0.0), &[0, 2]).unwrap() - 1.6).abs() < 1e-12);
        assert!((objective(&four_item(0.5, 0.9), &[0, 1]).unwrap() - 1.25).abs() < 1e-12);
        let p = four_item(0.0, 0.9);
        assert!((objective(&p, &[0, 1]).unwrap() - 1.7).abs() < 1e-12);
    }

    #[test]
    fn objective_rejects_wrong_cardinality() {
        assert!(matches!(
            objective(&four_item(0.5, 0.0), &[0]),
            Err(OptimizeError::WrongCardinality { got: 1, expected: 2 })
        ));
        assert!(objective(&four_item(0.5, 0.0), &[1, 1]).is_err());
    }

    #[test]
    fn problem_validation() {
        let sim = SimilarityMatrix::zeros(3);
        assert!(MenuProblem::new(vec![0.5; 3], sim.clone(), 1.0, 4, vec![], vec![]).is_err());
        assert!(MenuProblem::new(vec![0.5; 3], sim.clone(), -1.0, 2, vec![], vec![]).is_err());
        assert!(MenuProblem::new(vec![0.5; 2], sim.clone(), 1.0, 2, vec![], vec![]).is_err());
        assert!(MenuProblem::new(vec![0.5; 3], sim, 1.0, 2, vec![], vec![]).is_ok());
    }

    #[test]
    fn improves_tie_break() {
        assert!(improves(1.0, &[0, 1], None));
        assert!(improves(2.0, &[3, 4], Some((1.0, &[0, 1]))));
        assert!(improves(1.0, &[0, 1], Some((1.0, &[0, 2]))));
        assert!(!improves(1.0, &[0, 2], Some((1.0, &[0, 1]))));
    }
}
