//! Empirical check of the estimation-error bound: optimizing against scores
//! that are within ε of the truth loses at most 2Kε of true objective.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{objective, solve_exact, MenuProblem, OptimizeError, TOLERANCE};
use crate::similarity::SimilarityMatrix;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub lambda: f64,
    pub epsilon: f64,
    pub trials: usize,
    pub seed: u64,
    pub max_gap: f64,
    pub mean_gap: f64,
    /// Trials where the estimated optimum differed from the true optimum.
    pub mismatched_selections: usize,
    pub bound: f64,
    pub pass: bool,
}

/// Runs `trials` random cardinality-only instances. Each draws true scores
/// `p ~ U[0,1]^n`, estimates `p̂ = clamp(p + U[−ε, ε], 0, 1)` and shared
/// similarities `s ~ U[0,1]`, solves both exactly, and records the true-score
/// gap between the two optima.
pub fn verify_proposition1(
    n: usize,
    k: usize,
    lambda: f64,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<BoundReport, OptimizeError> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(OptimizeError::InvalidProblem(format!(
            "epsilon must be in [0, 1], got {epsilon}"
        )));
    }
    if trials == 0 {
        return Err(OptimizeError::InvalidProblem("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut max_gap, mut total_gap, mut mismatched) = (0.0f64, 0.0, 0);
    for _ in 0..trials {
        let truth: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
        let estimate: Vec<f64> = truth
            .iter()
            .map(|&p| (p + rng.gen_range(-epsilon..=epsilon)).clamp(0.0, 1.0))
            .collect();
        let sim = SimilarityMatrix::from_fn(n, |_, _| rng.gen_range(0.0..=1.0));
        let true_problem = MenuProblem::new(truth.clone(), sim, lambda, k, vec![], vec![])?;
        let estimated_problem = true_problem.with_scores(estimate)?;

        let best = solve_exact(&true_problem)?;
        let chosen = solve_exact(&estimated_problem)?;
        let gap = (objective(&true_problem, &chosen.selection)? - best.objective).abs();
        if chosen.selection != best.selection {
            mismatched += 1;
        }
        max_gap = max_gap.max(gap);
        total_gap += gap;
    }
    let bound = 2.0 * k as f64 * epsilon;
    Ok(BoundReport {
        n,
        k,
        lambda,
        epsilon,
        trials,
        seed,
        max_gap,
        mean_gap: total_gap / trials as f64,
        mismatched_selections: mismatched,
        bound,
        pass: max_gap <= bound + TOLERANCE,
    })
}
