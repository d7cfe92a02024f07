//! The bundled 56-item ground set with K = 36, λ = 100 and the 0.25 / 1.0 limits.

use menuopt_core::domain::bundled;
use menuopt_core::impact::{expected_impact, resolve_impacts, Dimension};
use menuopt_core::optimizer::{solve_exact_with, solve_heuristic, ExactOptions, MenuProblem, OptimizeError};
use menuopt_core::similarity::similarity_matrix;

/// Fixed pseudo-random scores in {0.1, ..., 1.0}.
fn score(id: &str) -> f64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in id.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    (1 + h % 10) as f64 / 10.0
}

fn problem() -> (MenuProblem, Vec<f64>, menuopt_core::impact::RecipeImpacts) {
    let orig = bundled::original_menu();
    let all = orig.union(&bundled::generated_recipes(), "ground").unwrap();
    assert_eq!(all.len(), 56);
    let scores: Vec<f64> = all.recipes().iter().map(|r| score(&r.id)).collect();
    let impacts = resolve_impacts(all.recipes(), &bundled::impact_table()).unwrap();
    let sim = similarity_matrix(all.recipes()).unwrap();
    let p = MenuProblem::with_impact_limits(
        scores.clone(),
        sim,
        100.0,
        36,
        &impacts,
        (0..orig.len()).collect(),
        &[(Dimension::Emissions, 0.25), (Dimension::Animals, 1.0)],
    )
    .unwrap();
    (p, scores, impacts)
}

#[test]
fn heuristic_meets_both_limits() {
    let (p, scores, impacts) = problem();
    let original: Vec<usize> = (0..36).collect();
    let s = solve_heuristic(&p, 1, 8).unwrap();
    assert_eq!(s.selection.len(), 36);
    assert!(p.is_feasible(&s.selection));
    for (dim, ratio) in [(Dimension::Emissions, 0.25), (Dimension::Animals, 1.0)] {
        let before = expected_impact(&original, &scores, &impacts, dim).unwrap();
        let after = expected_impact(&s.selection, &scores, &impacts, dim).unwrap();
        assert!(after <= ratio * before + 1e-9, "{dim:?}: {after} vs {before}");
        assert!((s.expected_impact(dim).unwrap() - after).abs() < 1e-9);
    }
}

#[test]
fn node_limited_search_keeps_seeded_incumbent() {
    let (p, _, _) = problem();
    let h = solve_heuristic(&p, 1, 8).unwrap();
    let opts = ExactOptions {
        node_limit: Some(20_000),
        incumbent: Some(h.selection.clone()),
    };
    match solve_exact_with(&p, &opts) {
        Err(OptimizeError::NodeLimit {
            incumbent: Some(best), ..
        }) => {
            assert!(best.objective >= h.objective);
            assert!(p.is_feasible(&best.selection));
        }
        Ok(exact) => assert!(exact.objective >= h.objective),
        Err(e) => panic!("{e}"),
    }
}
