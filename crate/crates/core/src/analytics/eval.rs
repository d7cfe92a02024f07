//! Pairwise evaluation: present each pair in a seeded random order, map the
//! predictor's positional answer back to a side, and test accuracy against chance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::stats::{bonferroni, chi_squared_gof, quartile_strata};
use super::{AnalyticsError, Side};

#[derive(Debug, Clone, PartialEq)]
pub struct PairComparison<T> {
    pub id_a: String,
    pub id_b: String,
    pub item_a: T,
    pub item_b: T,
    pub truth: Side,
    /// Ground-truth score difference.
    pub gap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    Ab,
    Ba,
}

/// A predictor's answer: the item shown first or second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairOutcome {
    pub id_a: String,
    pub id_b: String,
    pub presented_order: Order,
    /// `None` when the predictor failed on this pair.
    pub prediction: Option<Side>,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratumAccuracy {
    pub stratum: u8,
    pub n: usize,
    pub correct: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub n: usize,
    pub correct: usize,
    pub invalid: usize,
    pub accuracy: f64,
    pub chi2: f64,
    pub p_value: f64,
    pub alpha: f64,
    pub m_tests: usize,
    pub alpha_corrected: f64,
    pub significant: bool,
    /// Empty when fewer than four pairs were answered.
    pub quartiles: Vec<StratumAccuracy>,
    pub outcomes: Vec<PairOutcome>,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Order in which pair `index` is shown. Each pair has its own stream, so the
/// order does not depend on how many pairs came before it.
pub fn presentation_order(seed: u64, index: usize) -> Order {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    if rng.gen::<bool>() {
        Order::Ba
    } else {
        Order::Ab
    }
}

pub fn run_pairwise_eval<T, E, F>(
    pairs: &[PairComparison<T>],
    mut predictor: F,
    seed: u64,
    alpha: f64,
    m_tests: usize,
) -> Result<EvalReport, AnalyticsError>
where
    F: FnMut(&T, &T) -> Result<Position, E>,
{
    if pairs.is_empty() {
        return Err(AnalyticsError::NoPairs);
    }
    let alpha_corrected = bonferroni(alpha, m_tests)?;
    let outcomes: Vec<PairOutcome> = pairs
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let order = presentation_order(seed, i);
            let (first, second) = match order {
                Order::Ab => (&pair.item_a, &pair.item_b),
                Order::Ba => (&pair.item_b, &pair.item_a),
            };
            let prediction = predictor(first, second).ok().map(|pos| match (order, pos) {
                (Order::Ab, Position::First) | (Order::Ba, Position::Second) => Side::A,
                _ => Side::B,
            });
            PairOutcome {
                id_a: pair.id_a.clone(),
                id_b: pair.id_b.clone(),
                presented_order: order,
                prediction,
                gap: pair.gap,
            }
        })
        .collect();

    let answered: Vec<(bool, f64)> = outcomes
        .iter()
        .zip(pairs)
        .filter_map(|(o, p)| o.prediction.map(|s| (s == p.truth, p.gap)))
        .collect();
    let invalid = pairs.len() - answered.len();
    if answered.is_empty() {
        return Err(AnalyticsError::NoValidPredictions(invalid));
    }
    let n = answered.len();
    let correct = answered.iter().filter(|(c, _)| *c).count();
    let test = chi_squared_gof(correct as u64, n as u64, 0.5)?;

    let quartiles = if n >= 4 {
        let gaps: Vec<f64> = answered.iter().map(|(_, g)| *g).collect();
        let strata = quartile_strata(&gaps)?;
        (1..=4u8)
            .map(|s| {
                let members: Vec<bool> = strata
                    .iter()
                    .zip(&answered)
                    .filter(|(st, _)| **st == s)
                    .map(|(_, (c, _))| *c)
                    .collect();
                let correct = members.iter().filter(|c| **c).count();
                StratumAccuracy {
                    stratum: s,
                    n: members.len(),
                    correct,
                    accuracy: if members.is_empty() {
                        0.0
                    } else {
                        correct as f64 / members.len() as f64
                    },
                }
            })
            .collect()
    } else {
        Vec::new()
    };

    Ok(EvalReport {
        n,
        correct,
        invalid,
        accuracy: correct as f64 / n as f64,
        chi2: test.stat,
        p_value: test.p,
        alpha,
        m_tests,
        alpha_corrected,
        significant: test.p < alpha_corrected,
        quartiles,
        outcomes,
    })
}

/// `id_a,id_b,truth,gap` with a header row.
pub fn pairs_to_csv<T>(pairs: &[PairComparison<T>]) -> String {
    let mut out = String::from("id_a,id_b,truth,gap\n");
    for p in pairs {
        out.push_str(&format!("{},{},{},{}\n", p.id_a, p.id_b, p.truth.as_str(), p.gap));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    type Pair = PairComparison<(Side, f64)>;

    /// Payload is (the side this item is on, its score).
    fn pairs(n: usize) -> Vec<Pair> {
        (0..n)
            .map(|i| {
                let (sa, sb) = if i % 3 == 0 {
                    (2.0, 5.0 + i as f64)
                } else {
                    (6.0 + i as f64, 1.0)
                };
                PairComparison {
                    id_a: format!("a{i}"),
                    id_b: format!("b{i}"),
                    item_a: (Side::A, sa),
                    item_b: (Side::B, sb),
                    truth: if sa > sb { Side::A } else { Side::B },
                    gap: (sa - sb).abs(),
                }
            })
            .collect()
    }

    fn oracle(x: &(Side, f64), y: &(Side, f64)) -> Result<Position, ()> {
        Ok(if x.1 >= y.1 { Position::First } else { Position::Second })
    }

    #[test]
    fn ground_truth_predictor_is_perfect_for_any_seed() {
        let ps = pairs(40);
        for seed in 0..20 {
            let r = run_pairwise_eval(&ps, oracle, seed, 0.05, 1).unwrap();
            assert_eq!(r.accuracy, 1.0);
            assert!(r.significant);
            assert_eq!(r.invalid, 0);
            assert!(r.quartiles.iter().all(|q| q.accuracy == 1.0));
        }
    }

    #[test]
    fn always_first_follows_presentation_order() {
        let ps = pairs(200);
        let r = run_pairwise_eval(&ps, |_, _| Ok::<_, ()>(Position::First), 7, 0.05, 1).unwrap();
        let expected = ps
            .iter()
            .enumerate()
            .filter(|(i, p)| {
                let first = match presentation_order(7, *i) {
                    Order::Ab => Side::A,
                    Order::Ba => Side::B,
                };
                first == p.truth
            })
            .count();
        assert_eq!(r.correct, expected);
        // Both orders actually occur.
        let ba = (0..200).filter(|&i| presentation_order(7, i) == Order::Ba).count();
        assert!(ba > 50 && ba < 150, "{ba}");
    }

    #[test]
    fn sixty_four_percent_of_five_hundred_is_significant() {
        // Payload: (side, whether the predictor should get this pair right).
        let ps: Vec<PairComparison<(Side, bool)>> = (0..500)
            .map(|i| PairComparison {
                id_a: format!("a{i}"),
                id_b: format!("b{i}"),
                item_a: (Side::A, i < 320),
                item_b: (Side::B, i < 320),
                truth: Side::A,
                gap: i as f64,
            })
            .collect();
        let predictor = |x: &(Side, bool), _: &(Side, bool)| {
            let want = if x.1 { Side::A } else { Side::B };
            Ok::<_, ()>(if x.0 == want { Position::First } else { Position::Second })
        };
        let r = run_pairwise_eval(&ps, predictor, 3, 0.05, 1).unwrap();
        assert_eq!((r.correct, r.n), (320, 500));
        assert!((r.accuracy - 0.64).abs() < 1e-12);
        assert!((r.chi2 - 39.2).abs() < 1e-9);
        assert!(r.significant);
        let six = run_pairwise_eval(&ps, predictor, 3, 0.05, 6).unwrap();
        assert!(six.significant);
        assert_eq!(six.quartiles.iter().map(|q| q.n).sum::<usize>(), 500);
    }

    #[test]
    fn invalid_answers_are_excluded() {
        let ps = pairs(12);
        let mut calls = 0;
        let r = run_pairwise_eval(
            &ps,
            |x, y| {
                calls += 1;
                if calls % 4 == 0 {
                    Err("malformed")
                } else {
                    oracle(x, y).map_err(|_| "unreachable")
                }
            },
            1,
            0.05,
            1,
        )
        .unwrap();
        assert_eq!(r.invalid, 3);
        assert_eq!(r.n, 9);
        assert_eq!(r.correct, 9);
        assert_eq!(r.outcomes.iter().filter(|o| o.prediction.is_none()).count(), 3);
        assert!(matches!(
            run_pairwise_eval(&ps, |_, _| Err::<Position, _>(()), 1, 0.05, 1),
            Err(AnalyticsError::NoValidPredictions(12))
        ));
        assert!(matches!(
            run_pairwise_eval(&Vec::<Pair>::new(), oracle, 1, 0.05, 1),
            Err(AnalyticsError::NoPairs)
        ));
    }

    #[test]
    fn csv_export() {
        let ps = pairs(2);
        assert_eq!(pairs_to_csv(&ps), "id_a,id_b,truth,gap\na0,b0,b,3\na1,b1,a,6\n");
    }
}
