//! Mining item pairs with similar ingredients but significantly different ratings.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use super::stats::welch_t_test;
use super::{AnalyticsError, Side};
use crate::similarity::ingredient_overlap;

/// A corpus item: an ingredient set and its individual review ratings.
#[derive(Debug, Clone, PartialEq)]
pub struct RatedItem {
    pub id: String,
    pub ingredients: BTreeSet<String>,
    pub ratings: Vec<f64>,
}

impl RatedItem {
    pub fn mean_rating(&self) -> f64 {
        self.ratings.iter().sum::<f64>() / self.ratings.len() as f64
    }
}

/// `id_a < id_b` always; `truth` names the item with the higher mean rating.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinedPair {
    pub id_a: String,
    pub id_b: String,
    pub overlap: f64,
    pub p_value: f64,
    pub truth: Side,
    pub gap: f64,
}

/// Ranks all pairs by ingredient overlap (descending, ties by id) and keeps
/// the first `min_pairs` whose ratings differ at Welch `p < alpha`.
pub fn mine_pairs(corpus: &[RatedItem], min_pairs: usize, alpha: f64) -> Result<Vec<MinedPair>, AnalyticsError> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(AnalyticsError::InvalidArgument(format!(
            "alpha must be in (0, 1], got {alpha}"
        )));
    }
    let mut seen = HashSet::new();
    for item in corpus {
        if !seen.insert(item.id.as_str()) {
            return Err(AnalyticsError::DuplicateId(item.id.clone()));
        }
        if item.ratings.len() < 2 {
            return Err(AnalyticsError::InvalidArgument(format!(
                "item `{}` needs at least two ratings",
                item.id
            )));
        }
    }
    // Sorting by id first makes the output independent of corpus order.
    let mut items: Vec<&RatedItem> = corpus.iter().collect();
    items.sort_by(|a, b| a.id.cmp(&b.id));

    let mut candidates = Vec::new();
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            // Two empty ingredient sets carry no overlap signal.
            let overlap = ingredient_overlap(&items[i].ingredients, &items[j].ingredients).unwrap_or(0.0);
            candidates.push((overlap, i, j));
        }
    }
    candidates.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut out = Vec::with_capacity(min_pairs);
    for (overlap, i, j) in candidates {
        if out.len() == min_pairs {
            break;
        }
        let (a, b) = (items[i], items[j]);
        let Ok(test) = welch_t_test(&a.ratings, &b.ratings) else {
            continue;
        };
        if test.p >= alpha {
            continue;
        }
        let (ma, mb) = (a.mean_rating(), b.mean_rating());
        out.push(MinedPair {
            id_a: a.id.clone(),
            id_b: b.id.clone(),
            overlap,
            p_value: test.p,
            truth: if ma >= mb { Side::A } else { Side::B },
            gap: (ma - mb).abs(),
        });
    }
    if out.len() < min_pairs {
        return Err(AnalyticsError::NotEnoughPairs {
            found: out.len(),
            wanted: min_pairs,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn item(id: &str, ingredients: &[String], ratings: &[f64]) -> RatedItem {
        RatedItem {
            id: id.into(),
            ingredients: ingredients.iter().cloned().collect(),
            ratings: ratings.to_vec(),
        }
    }

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    const HIGH: [f64; 6] = [8.0, 9.0, 8.0, 9.0, 9.0, 8.0];
    const LOW: [f64; 6] = [4.0, 5.0, 5.0, 4.0, 5.0, 4.0];
    const MID: [f64; 6] = [6.0, 7.0, 6.0, 7.0, 6.0, 7.0];

    /// Ten planted pairs (overlap 9/11, ratings far apart), ten identical-ingredient
    /// pairs with equal ratings, and ten low-overlap pairs with different ratings.
    fn planted_corpus() -> (Vec<RatedItem>, BTreeSet<(String, String)>) {
        let mut corpus = Vec::new();
        let mut planted = BTreeSet::new();
        for f in 0..10 {
            let base = names(&format!("p{f}_"), 10);
            let mut other = base[..9].to_vec();
            other.push(format!("p{f}_extra"));
            let (a, b) = (format!("plant{f:02}a"), format!("plant{f:02}b"));
            corpus.push(item(&a, &base, &HIGH));
            corpus.push(item(&b, &other, &LOW));
            planted.insert((a, b));

            let same = names(&format!("d{f}_"), 6);
            corpus.push(item(&format!("dup{f:02}a"), &same, &MID));
            corpus.push(item(&format!("dup{f:02}b"), &same, &[7.0, 6.0, 7.0, 6.0, 7.0, 6.0]));

            let mut x = names(&format!("x{f}_"), 12);
            let mut y = names(&format!("y{f}_"), 12);
            x.push("salt".into());
            y.push("salt".into());
            corpus.push(item(&format!("far{f:02}a"), &x, &HIGH));
            corpus.push(item(&format!("far{f:02}b"), &y, &LOW));
        }
        (corpus, planted)
    }

    #[test]
    fn recovers_planted_pairs() {
        let (corpus, planted) = planted_corpus();
        let mined = mine_pairs(&corpus, 10, 0.05).unwrap();
        let got: BTreeSet<(String, String)> = mined.iter().map(|p| (p.id_a.clone(), p.id_b.clone())).collect();
        assert_eq!(got, planted);
        for p in &mined {
            assert_eq!(p.truth, Side::A);
            assert!((p.gap - 4.0).abs() < 1e-12);
            assert!((p.overlap - 9.0 / 11.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_distributions_yield_nothing() {
        let corpus: Vec<RatedItem> = (0..6)
            .map(|i| item(&format!("r{i}"), &names("i", 4 + i), &MID))
            .collect();
        assert!(matches!(
            mine_pairs(&corpus, 1, 0.05),
            Err(AnalyticsError::NotEnoughPairs { found: 0, wanted: 1 })
        ));
    }

    #[test]
    fn alpha_one_ranks_by_overlap_only() {
        // Every pair differs a little in mean, so p < 1 for all of them.
        let corpus = vec![
            item("a", &names("i", 4), &[5.0, 6.0, 7.0]),
            item("b", &names("i", 5), &[5.0, 6.0, 7.5]),
            item("c", &names("i", 8), &[5.0, 6.0, 8.0]),
        ];
        let mined = mine_pairs(&corpus, 3, 1.0).unwrap();
        let order: Vec<(&str, &str)> = mined.iter().map(|p| (p.id_a.as_str(), p.id_b.as_str())).collect();
        // Overlaps: a-b 4/5, b-c 5/8, a-c 4/8.
        assert_eq!(order, vec![("a", "b"), ("b", "c"), ("a", "c")]);
        assert_eq!(mined[0].truth, Side::B);
    }

    #[test]
    fn input_validation() {
        let ok = item("a", &names("i", 2), &[1.0, 2.0]);
        assert!(matches!(
            mine_pairs(&[ok.clone(), ok.clone()], 1, 0.05),
            Err(AnalyticsError::DuplicateId(_))
        ));
        let short = item("b", &names("i", 2), &[1.0]);
        assert!(mine_pairs(&[ok.clone(), short], 1, 0.05).is_err());
        assert!(mine_pairs(&[ok], 1, 0.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn invariant_under_reordering(seed in any::<u64>()) {
            let (mut corpus, _) = planted_corpus();
            let reference = mine_pairs(&corpus, 25, 0.05).unwrap();
            corpus.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(mine_pairs(&corpus, 25, 0.05).unwrap(), reference);
        }
    }
}
