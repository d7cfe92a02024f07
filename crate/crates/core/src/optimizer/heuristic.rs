//! Greedy construction followed by best-improvement 1-swap local search.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{improves, Certificate, MenuProblem, MenuSolution, OptimizeError, TOLERANCE};

/// Restart 0 is plain greedy; later restarts seed the construction with a
/// random feasible first item drawn from `seed`.
pub fn solve_heuristic(problem: &MenuProblem, seed: u64, restarts: usize) -> Result<MenuSolution, OptimizeError> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut moves = 0u64;
    for restart in 0..=restarts {
        let mut state = State::new(problem);
        let first = if restart == 0 {
            None
        } else {
            let mut order: Vec<usize> = (0..problem.n()).collect();
            order.shuffle(&mut rng);
            order.into_iter().find(|&j| state.optimistically_feasible(j))
        };
        if let Some(j) = first {
            state.add(j);
        }
        if !state.construct() {
            continue;
        }
        moves += state.local_search();
        let mut sel = state.chosen.clone();
        sel.sort_unstable();
        if !problem.is_feasible(&sel) {
            continue;
        }
        let obj = problem.objective_unchecked(&sel);
        if improves(obj, &sel, best.as_ref().map(|(o, s)| (*o, s.as_slice()))) {
            best = Some((obj, sel));
        }
    }
    let (_, sel) = best.ok_or(OptimizeError::InfeasibilityUnproven)?;
    Ok(problem.solution(sel, Certificate::Heuristic, moves, start.elapsed()))
}

struct State<'a> {
    problem: &'a MenuProblem,
    chosen: Vec<usize>,
    in_set: Vec<bool>,
    cross: Vec<f64>,
    lhs: Vec<f64>,
    /// Item indices sorted by ascending coefficient, per constraint.
    coef_order: Vec<Vec<usize>>,
}

impl<'a> State<'a> {
    fn new(problem: &'a MenuProblem) -> Self {
        let coef_order = problem
            .constraints()
            .iter()
            .map(|c| {
                let mut idx: Vec<usize> = (0..problem.n()).collect();
                idx.sort_by(|&a, &b| c.coefficients[a].total_cmp(&c.coefficients[b]).then(a.cmp(&b)));
                idx
            })
            .collect();
        Self {
            problem,
            chosen: Vec::with_capacity(problem.k()),
            in_set: vec![false; problem.n()],
            cross: vec![0.0; problem.n()],
            lhs: vec![0.0; problem.constraints().len()],
            coef_order,
        }
    }

    fn add(&mut self, j: usize) {
        self.chosen.push(j);
        self.in_set[j] = true;
        for (k, c) in self.cross.iter_mut().enumerate() {
            *c += self.problem.similarity().get(j, k);
        }
        for (lhs, c) in self.lhs.iter_mut().zip(self.problem.constraints()) {
            *lhs += c.coefficients[j];
        }
    }

    fn remove(&mut self, j: usize) {
        let pos = self.chosen.iter().position(|&c| c == j).expect("item is chosen");
        self.chosen.swap_remove(pos);
        self.in_set[j] = false;
        for (k, c) in self.cross.iter_mut().enumerate() {
            *c -= self.problem.similarity().get(j, k);
        }
        for (lhs, c) in self.lhs.iter_mut().zip(self.problem.constraints()) {
            *lhs -= c.coefficients[j];
        }
    }

    /// After adding `j`, can each constraint still be met by the cheapest completion?
    fn optimistically_feasible(&self, j: usize) -> bool {
        let after = self.problem.k() - self.chosen.len() - 1;
        self.problem.constraints().iter().enumerate().all(|(ci, c)| {
            let completion: f64 = self.coef_order[ci]
                .iter()
                .filter(|&&i| i != j && !self.in_set[i])
                .take(after)
                .map(|&i| c.coefficients[i])
                .sum();
            self.lhs[ci] + c.coefficients[j] + completion <= TOLERANCE
        })
    }

    fn gain(&self, j: usize) -> f64 {
        self.problem.scores()[j] - self.problem.lambda() * self.cross[j]
    }

    /// Fills up to K items by best marginal gain. `false` on a dead end.
    fn construct(&mut self) -> bool {
        while self.chosen.len() < self.problem.k() {
            let next = (0..self.problem.n())
                .filter(|&j| !self.in_set[j] && self.optimistically_feasible(j))
                .fold(None::<(usize, f64)>, |best, j| {
                    let g = self.gain(j);
                    match best {
                        Some((_, bg)) if bg >= g => best,
                        _ => Some((j, g)),
                    }
                });
            match next {
                Some((j, _)) => self.add(j),
                None => return false,
            }
        }
        true
    }

    /// Applies improving feasible swaps until none remain. Returns the move count.
    fn local_search(&mut self) -> u64 {
        let p = self.problem;
        let mut moves = 0;
        loop {
            let mut best: Option<(usize, usize, f64)> = None;
            let mut outs = self.chosen.clone();
            outs.sort_unstable();
            for &out in &outs {
                for inn in (0..p.n()).filter(|&j| !self.in_set[j]) {
                    let feasible = self
                        .lhs
                        .iter()
                        .zip(p.constraints())
                        .all(|(lhs, c)| lhs - c.coefficients[out] + c.coefficients[inn] <= TOLERANCE);
                    if !feasible {
                        continue;
                    }
                    let delta = p.scores()[inn]
                        - p.scores()[out]
                        - p.lambda() * ((self.cross[inn] - p.similarity().get(inn, out)) - self.cross[out]);
                    if delta > 1e-12 && best.is_none_or(|(_, _, d)| delta > d) {
                        best = Some((out, inn, delta));
                    }
                }
            }
            match best {
                Some((out, inn, _)) => {
                    self.remove(out);
                    self.add(inn);
                    moves += 1;
                }
                None => return moves,
            }
        }
    }
}
