//! Ratcliff/Obershelp gestalt matching and ingredient overlap.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::domain::Recipe;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SimilarityError {
    #[error("ingredient overlap is undefined for two empty sets")]
    EmptySets,
    #[error("a similarity matrix needs at least two items, got {0}")]
    TooFewItems(usize),
}

/// Longest common block inside `a[alo..ahi]` x `b[blo..bhi]`.
///
/// Among blocks of maximal length, returns the one starting earliest in `a`,
/// then earliest in `b`. Returns `(i, j, size)`.
fn longest_match(a: &[char], b: &[char], alo: usize, ahi: usize, blo: usize, bhi: usize) -> (usize, usize, usize) {
    let (mut best_i, mut best_j, mut best) = (alo, blo, 0);
    // cur[j - blo + 1]: length of the common run ending at a[i], b[j]
    let width = bhi - blo + 1;
    let mut prev = vec![0usize; width];
    let mut cur = vec![0usize; width];
    for (i, ca) in a.iter().enumerate().take(ahi).skip(alo) {
        for j in blo..bhi {
            let k = if *ca == b[j] { prev[j - blo] + 1 } else { 0 };
            cur[j - blo + 1] = k;
            if k > best {
                best = k;
                best_i = i + 1 - k;
                best_j = j + 1 - k;
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    (best_i, best_j, best)
}

/// Total number of characters in matching blocks, found by recursively
/// taking the longest block and recursing on both unmatched sides.
pub fn matching_characters(a: &[char], b: &[char]) -> usize {
    let mut total = 0;
    let mut stack = vec![(0, a.len(), 0, b.len())];
    while let Some((alo, ahi, blo, bhi)) = stack.pop() {
        if alo >= ahi || blo >= bhi {
            continue;
        }
        let (i, j, k) = longest_match(a, b, alo, ahi, blo, bhi);
        if k == 0 {
            continue;
        }
        total += k;
        stack.push((alo, i, blo, j));
        stack.push((i + k, ahi, j + k, bhi));
    }
    total
}

/// Gestalt similarity `2M / (|a| + |b|)` on case-folded input.
///
/// No junk heuristics are applied. Two empty strings compare as 1.0.
pub fn gestalt_ratio(a: &str, b: &str) -> f64 {
    let a: Vec<char> = a.to_lowercase().chars().collect();
    let b: Vec<char> = b.to_lowercase().chars().collect();
    let length = a.len() + b.len();
    if length == 0 {
        return 1.0;
    }
    2.0 * matching_characters(&a, &b) as f64 / length as f64
}

/// `|a ∩ b| / |a ∪ b|`.
pub fn ingredient_overlap<S: AsRef<str> + Ord>(a: &BTreeSet<S>, b: &BTreeSet<S>) -> Result<f64, SimilarityError> {
    let shared = a.intersection(b).count();
    let union = a.len() + b.len() - shared;
    if union == 0 {
        return Err(SimilarityError::EmptySets);
    }
    Ok(shared as f64 / union as f64)
}

/// Text fed to the matcher: lowercased title, then the ingredient list.
pub fn projection(recipe: &Recipe) -> String {
    format!("{}; {}", recipe.title.to_lowercase(), recipe.ingredients.join(", "))
}

/// Symmetric, zero-diagonal matrix of pairwise ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    /// Builds from the upper triangle: `f(i, j)` is only called for `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = f(i, j);
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Self { n, values }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            values: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    /// Reindexes so that new item `k` is old item `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self::from_fn(order.len(), |i, j| self.get(order[i], order[j]))
    }

    /// Row-major CSV with the item ids as header.
    pub fn to_csv(&self, ids: &[&str]) -> String {
        let mut out = ids.join(",");
        out.push('\n');
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{}", self.get(i, j)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn similarity_matrix(recipes: &[Recipe]) -> Result<SimilarityMatrix, SimilarityError> {
    if recipes.len() < 2 {
        return Err(SimilarityError::TooFewItems(recipes.len()));
    }
    let texts: Vec<String> = recipes.iter().map(projection).collect();
    Ok(SimilarityMatrix::from_fn(texts.len(), |i, j| {
        gestalt_ratio(&texts[i], &texts[j])
    }))
}
