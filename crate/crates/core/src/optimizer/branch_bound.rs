//! Depth-first branch-and-bound over include/exclude decisions in index order.
//!
//! Nodes are visited include-first, so leaves appear in lexicographic order
//! and the first optimum found is the lexicographically smallest one.
//!
//! Upper bound at a node with `r` picks left from candidates `d..n`:
//!
//! ```text
//! committed objective + top-r over candidates j of
//!     p_j − λ·Σ_{i chosen} s_ij − (λ/2)·(sum of the r−1 smallest s_jk, k ∈ d..n, k ≠ j)
//! ```
//!
//! The cross term with already-chosen items is exact. Each future pair is
//! charged half to each endpoint and every endpoint pays at least its `r−1`
//! cheapest partners, so the bound never underestimates. With `λ = 0` it
//! reduces to the committed sum plus the `r` largest remaining scores.

use std::time::Instant;

use super::{improves, Certificate, MenuProblem, MenuSolution, OptimizeError, TOLERANCE};

#[derive(Debug, Clone, Default)]
pub struct ExactOptions {
    /// Stop after this many nodes and report the incumbent.
    pub node_limit: Option<u64>,
    /// A known feasible selection used as the initial incumbent.
    pub incumbent: Option<Vec<usize>>,
}

pub fn solve_exact(problem: &MenuProblem) -> Result<MenuSolution, OptimizeError> {
    solve_exact_with(problem, &ExactOptions::default())
}

pub fn solve_exact_with(problem: &MenuProblem, options: &ExactOptions) -> Result<MenuSolution, OptimizeError> {
    let start = Instant::now();
    let mut search = Search::new(problem, options.node_limit);
    if let Some(sel) = &options.incumbent {
        let mut sel = sel.clone();
        sel.sort_unstable();
        if problem.is_feasible(&sel) {
            search.best = Some((problem.objective_unchecked(&sel), sel));
        }
    }
    let completed = search.run();
    let nodes = search.nodes;
    let best = search.best.take();
    match (completed, best) {
        (true, Some((_, sel))) => Ok(problem.solution(sel, Certificate::Exact, nodes, start.elapsed())),
        (true, None) => Err(OptimizeError::Infeasible),
        (false, best) => Err(OptimizeError::NodeLimit {
            nodes,
            incumbent: best
                .map(|(_, sel)| Box::new(problem.solution(sel, Certificate::Heuristic, nodes, start.elapsed()))),
        }),
    }
}

struct Search<'a> {
    problem: &'a MenuProblem,
    node_limit: Option<u64>,
    nodes: u64,
    best: Option<(f64, Vec<usize>)>,
    chosen: Vec<usize>,
    linear: f64,
    pairs: f64,
    /// Σ s_ij over chosen i, for every j.
    cross: Vec<f64>,
    /// Running Σ a_i over chosen i, per constraint.
    lhs: Vec<f64>,
    /// partner_floor[d][j - d][m]: sum of the m smallest s_jk over k in d..n, k ≠ j.
    partner_floor: Vec<Vec<Vec<f64>>>,
    /// coef_floor[c][d][m]: sum of the m smallest coefficients of constraint c over d..n.
    coef_floor: Vec<Vec<Vec<f64>>>,
    scratch: Vec<f64>,
}

fn prefix_sums(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(values.len() + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for v in values {
        acc += v;
        out.push(acc);
    }
    out
}

impl<'a> Search<'a> {
    fn new(problem: &'a MenuProblem, node_limit: Option<u64>) -> Self {
        let n = problem.n();
        let sim = problem.similarity();
        let partner_floor = if problem.lambda() > 0.0 {
            (0..n)
                .map(|d| {
                    (d..n)
                        .map(|j| prefix_sums((d..n).filter(|&k| k != j).map(|k| sim.get(j, k)).collect()))
                        .collect()
                })
                .collect()
        } else {
            Vec::new()
        };
        let coef_floor = problem
            .constraints()
            .iter()
            .map(|c| (0..n).map(|d| prefix_sums(c.coefficients[d..].to_vec())).collect())
            .collect();
        Self {
            problem,
            node_limit,
            nodes: 0,
            best: None,
            chosen: Vec::with_capacity(problem.k()),
            linear: 0.0,
            pairs: 0.0,
            cross: vec![0.0; n],
            lhs: vec![0.0; problem.constraints().len()],
            partner_floor,
            coef_floor,
            scratch: Vec::with_capacity(n),
        }
    }

    /// Returns `false` if the node limit interrupted the search.
    fn run(&mut self) -> bool {
        self.visit(0)
    }

    fn visit(&mut self, depth: usize) -> bool {
        self.nodes += 1;
        if self.node_limit.is_some_and(|limit| self.nodes > limit) {
            return false;
        }
        let n = self.problem.n();
        let remaining = self.problem.k() - self.chosen.len();
        if remaining == 0 {
            self.leaf();
            return true;
        }
        if n - depth < remaining || !self.constraints_reachable(depth, remaining) {
            return true;
        }
        if let Some(best) = self.best.as_ref().map(|(o, _)| *o) {
            if self.upper_bound(depth, remaining) + TOLERANCE < best {
                return true;
            }
        }
        self.include(depth);
        let finished = self.visit(depth + 1);
        self.exclude_last(depth);
        finished && self.visit(depth + 1)
    }

    fn leaf(&mut self) {
        if !self.problem.is_feasible(&self.chosen) {
            return;
        }
        let obj = self.problem.objective_unchecked(&self.chosen);
        if improves(obj, &self.chosen, self.best.as_ref().map(|(o, s)| (*o, s.as_slice()))) {
            self.best = Some((obj, self.chosen.clone()));
        }
    }

    fn constraints_reachable(&self, depth: usize, remaining: usize) -> bool {
        self.lhs
            .iter()
            .zip(&self.coef_floor)
            .all(|(lhs, floor)| lhs + floor[depth][remaining] <= 2.0 * TOLERANCE)
    }

    fn upper_bound(&mut self, depth: usize, remaining: usize) -> f64 {
        let p = self.problem;
        let lambda = p.lambda();
        self.scratch.clear();
        for j in depth..p.n() {
            let mut v = p.scores()[j];
            if lambda > 0.0 {
                v -= lambda * (self.cross[j] + 0.5 * self.partner_floor[depth][j - depth][remaining - 1]);
            }
            self.scratch.push(v);
        }
        let r = remaining;
        if r < self.scratch.len() {
            self.scratch.select_nth_unstable_by(r - 1, |a, b| b.total_cmp(a));
        }
        let future: f64 = self.scratch[..r].iter().sum();
        self.linear - lambda * self.pairs + future
    }

    fn include(&mut self, j: usize) {
        let p = self.problem;
        self.linear += p.scores()[j];
        self.pairs += self.cross[j];
        for (k, c) in self.cross.iter_mut().enumerate() {
            *c += p.similarity().get(j, k);
        }
        for (lhs, c) in self.lhs.iter_mut().zip(p.constraints()) {
            *lhs += c.coefficients[j];
        }
        self.chosen.push(j);
    }

    fn exclude_last(&mut self, j: usize) {
        let p = self.problem;
        self.chosen.pop();
        for (k, c) in self.cross.iter_mut().enumerate() {
            *c -= p.similarity().get(j, k);
        }
        self.pairs -= self.cross[j];
        self.linear -= p.scores()[j];
        for (lhs, c) in self.lhs.iter_mut().zip(p.constraints()) {
            *lhs -= c.coefficients[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::testing::random_problem;
    use crate::optimizer::{objective, solve_exhaustive};
    use crate::similarity::SimilarityMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn linear_objective_picks_top_k() {
        let p = MenuProblem::new(
            vec![0.3, 0.9, 0.3, 0.7, 0.9],
            SimilarityMatrix::zeros(5),
            0.0,
            3,
            vec![],
            vec![],
        )
        .unwrap();
        let s = solve_exact(&p).unwrap();
        assert_eq!(s.selection, vec![1, 3, 4]);
        let p = MenuProblem::new(
            vec![0.5, 0.9, 0.5, 0.5],
            SimilarityMatrix::zeros(4),
            0.0,
            2,
            vec![],
            vec![],
        )
        .unwrap();
        assert_eq!(solve_exact(&p).unwrap().selection, vec![0, 1]);
    }

    #[test]
    fn matches_oracle_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(4..=11);
            let k = rng.gen_range(1..=n.min(6));
            let (lambda, m) = (rng.gen_range(0.0..2.0), rng.gen_range(0..=2));
            let p = random_problem(&mut rng, n, k, lambda, m);
            match (solve_exhaustive(&p), solve_exact(&p)) {
                (Ok(a), Ok(b)) => {
                    assert_eq!(a.selection, b.selection);
                    assert!((a.objective - b.objective).abs() <= 1e-9);
                }
                (Err(OptimizeError::Infeasible), Err(OptimizeError::Infeasible)) => {}
                (a, b) => panic!("disagree: {a:?} vs {b:?}"),
            }
        }
    }

    #[test]
    fn bound_is_admissible_at_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let lambda = rng.gen_range(0.0..3.0);
            let p = random_problem(&mut rng, 9, 4, lambda, 0);
            let best = solve_exhaustive(&p).unwrap().objective;
            let mut s = Search::new(&p, None);
            assert!(s.upper_bound(0, 4) + 1e-12 >= best);
        }
    }

    #[test]
    fn node_limit_reports_incumbent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_problem(&mut rng, 14, 7, 1.0, 0);
        let opts = ExactOptions {
            node_limit: Some(5),
            incumbent: None,
        };
        match solve_exact_with(&p, &opts) {
            Err(OptimizeError::NodeLimit { nodes, .. }) => assert!(nodes > 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn seeded_incumbent_keeps_tie_break() {
        let p = MenuProblem::new(vec![0.5; 6], SimilarityMatrix::zeros(6), 0.0, 3, vec![], vec![]).unwrap();
        let opts = ExactOptions {
            node_limit: None,
            incumbent: Some(vec![5, 4, 3]),
        };
        let s = solve_exact_with(&p, &opts).unwrap();
        assert_eq!(s.selection, vec![0, 1, 2]);
        assert_eq!(s.objective, objective(&p, &[0, 1, 2]).unwrap());
    }
}
