use std::time::Instant;

use super::{improves, Certificate, MenuProblem, MenuSolution, OptimizeError};

pub const DEFAULT_SUBSET_BUDGET: u128 = 2_000_000;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn count_subsets(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Enumerates every K-subset. Test oracle for the other solvers.
pub fn solve_exhaustive(problem: &MenuProblem) -> Result<MenuSolution, OptimizeError> {
    solve_exhaustive_with(problem, DEFAULT_SUBSET_BUDGET)
}

pub fn solve_exhaustive_with(problem: &MenuProblem, budget: u128) -> Result<MenuSolution, OptimizeError> {
    let start = Instant::now();
    let (n, k) = (problem.n(), problem.k());
    let subsets = count_subsets(n, k);
    if subsets > budget {
        return Err(OptimizeError::BudgetExceeded { subsets, budget });
    }
    let mut current: Vec<usize> = (0..k).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut visited = 0u64;
    loop {
        visited += 1;
        if problem.is_feasible(&current) {
            let obj = problem.objective_unchecked(&current);
            if improves(obj, &current, best.as_ref().map(|(o, s)| (*o, s.as_slice()))) {
                best = Some((obj, current.clone()));
            }
        }
        // Advance to the next combination in lexicographic order.
        let Some(pos) = (0..k).rev().find(|&i| current[i] < n - k + i) else {
            break;
        };
        current[pos] += 1;
        for i in pos + 1..k {
            current[i] = current[i - 1] + 1;
        }
    }
    let (_, selection) = best.ok_or(OptimizeError::Infeasible)?;
    Ok(problem.solution(selection, Certificate::Exact, visited, start.elapsed()))
}
