//! Recipe rating backends.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;

use menuopt_core::domain::{DomainError, Recipe, ScoreVector};
use thiserror::Error;

use crate::client::{ChatCompletion, ChatError, ChatRequest};
use crate::parse::{parse_ratings, ParseError};
use crate::templates::{PromptTemplate, TemplateName};

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("nothing to score")]
    Empty,
    #[error("chunk {chunk}: {source}")]
    Chat {
        chunk: usize,
        #[source]
        source: ChatError,
    },
    #[error("chunk {chunk}: {source}")]
    Parse {
        chunk: usize,
        #[source]
        source: ParseError,
    },
    #[error("no rating for recipe `{0}`")]
    Missing(String),
    #[error("backend returned {found} ratings for {expected} recipes")]
    Length { expected: usize, found: usize },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Rates recipes on the 1-10 scale, one value per input in input order.
pub trait ScorerBackend: Send + Sync {
    fn score(&self, recipes: &[Recipe]) -> Result<Vec<f64>, ScoreError>;
}

/// Deterministic stand-in: `1 + FNV-1a(id) mod 10`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HashScorer;

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl ScorerBackend for HashScorer {
    fn score(&self, recipes: &[Recipe]) -> Result<Vec<f64>, ScoreError> {
        Ok(recipes
            .iter()
            .map(|r| (1 + fnv1a(r.id.as_bytes()) % 10) as f64)
            .collect())
    }
}

/// Looks ratings up by recipe id.
#[derive(Debug, Clone)]
pub struct TableScorer(BTreeMap<String, f64>);

impl TableScorer {
    pub fn new(scores: &ScoreVector) -> Self {
        Self(scores.iter().map(|(k, v)| (k.to_string(), v)).collect())
    }
}

impl ScorerBackend for TableScorer {
    fn score(&self, recipes: &[Recipe]) -> Result<Vec<f64>, ScoreError> {
        recipes
            .iter()
            .map(|r| {
                self.0
                    .get(&r.id)
                    .copied()
                    .ok_or_else(|| ScoreError::Missing(r.id.clone()))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RatingText {
    #[default]
    TitleOnly,
    TitleAndDescription,
}

/// Rates through a chat model using the rating prompt, one request per chunk.
pub struct RemoteScorer {
    pub client: Arc<dyn ChatCompletion>,
    pub model: String,
    pub chunk_size: usize,
    pub concurrency: usize,
    pub text: RatingText,
}

impl RemoteScorer {
    pub fn new(client: Arc<dyn ChatCompletion>, model: impl Into<String>) -> Self {
        Self {
            client,
            model: model.into(),
            chunk_size: 60,
            concurrency: 4,
            text: RatingText::TitleOnly,
        }
    }

    pub fn request(&self, chunk: &[Recipe]) -> ChatRequest {
        let lines: Vec<String> = chunk
            .iter()
            .map(|r| match self.text {
                RatingText::TitleOnly => r.title.clone(),
                RatingText::TitleAndDescription => format!("{}. {}", r.title, r.description),
            })
            .collect();
        let r = chunk.len().to_string();
        let recipes = lines.join("\n");
        let prompt = PromptTemplate::get(TemplateName::RateRecipes)
            .render(&BTreeMap::from([("r", r.as_str()), ("recipes", recipes.as_str())]))
            .expect("rating template bindings are complete");
        ChatRequest::single(&self.model, prompt)
    }

    fn score_chunk(&self, index: usize, chunk: &[Recipe]) -> Result<Vec<f64>, ScoreError> {
        let response = self
            .client
            .complete(&self.request(chunk))
            .map_err(|source| ScoreError::Chat { chunk: index, source })?;
        parse_ratings(&response.content, chunk.len()).map_err(|source| ScoreError::Parse { chunk: index, source })
    }
}

impl ScorerBackend for RemoteScorer {
    fn score(&self, recipes: &[Recipe]) -> Result<Vec<f64>, ScoreError> {
        let chunks: Vec<&[Recipe]> = recipes.chunks(self.chunk_size.max(1)).collect();
        type Slot = Option<Result<Vec<f64>, ScoreError>>;
        let results: Mutex<Vec<Slot>> = Mutex::new((0..chunks.len()).map(|_| None).collect());
        let next = AtomicUsize::new(0);
        let workers = self.concurrency.clamp(1, chunks.len().max(1));
        thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(chunk) = chunks.get(i) else { break };
                    let r = self.score_chunk(i, chunk);
                    results.lock().unwrap()[i] = Some(r);
                });
            }
        });
        let mut out = Vec::with_capacity(recipes.len());
        for r in results.into_inner().unwrap() {
            out.extend(r.expect("every chunk was scored")?);
        }
        Ok(out)
    }
}

/// Scores `recipes` and checks the backend contract.
pub fn score_recipes(backend: &dyn ScorerBackend, recipes: &[Recipe]) -> Result<ScoreVector, ScoreError> {
    if recipes.is_empty() {
        return Err(ScoreError::Empty);
    }
    let values = backend.score(recipes)?;
    if values.len() != recipes.len() {
        return Err(ScoreError::Length {
            expected: recipes.len(),
            found: values.len(),
        });
    }
    let ratings: BTreeMap<String, f64> = recipes.iter().map(|r| r.id.clone()).zip(values).collect();
    Ok(ScoreVector::for_recipes(ratings, recipes)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::client::{response_body, ChatResponse, ReplayClient, TranscriptEntry};
    use menuopt_core::domain::bundled;

    fn recipes(n: usize) -> Vec<Recipe> {
        bundled::original_menu().recipes()[..n].to_vec()
    }

    #[test]
    fn hash_scorer_is_deterministic() {
        let rs = recipes(3);
        let a = score_recipes(&HashScorer, &rs).unwrap();
        assert_eq!(a, score_recipes(&HashScorer, &rs).unwrap());
        assert_eq!(a.len(), 3);
        // Reference FNV-1a values computed independently.
        assert_eq!(fnv1a(b"o01"), 0x1928ea19210cba01);
        assert_eq!(a.rating("o01"), Some(2.0));
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn table_scorer_returns_fixture_values() {
        let rs = recipes(3);
        let table = ScoreVector::new(BTreeMap::from([
            ("o01".to_string(), 7.0),
            ("o02".to_string(), 2.5),
            ("o03".to_string(), 10.0),
        ]))
        .unwrap();
        let got = score_recipes(&TableScorer::new(&table), &rs).unwrap();
        assert_eq!(got, table);
        assert!(matches!(
            score_recipes(&TableScorer::new(&table), &recipes(4)),
            Err(ScoreError::Missing(id)) if id == "o04"
        ));
    }

    /// Answers each rating request with its recipe count, so the chunk can be identified.
    struct Echo;

    impl ChatCompletion for Echo {
        fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, ChatError> {
            let prompt = &request.messages[0].content;
            let titles: Vec<&str> = prompt.lines().skip(1).collect();
            // Rating = 1 + title length mod 10, so results depend on the recipe, not the chunk.
            let values: Vec<String> = titles.iter().map(|t| (1 + t.len() % 10).to_string()).collect();
            Ok(ChatResponse {
                content: values.join(", "),
                finish_reason: None,
                usage: None,
                attempts: 1,
            })
        }
    }

    #[test]
    fn chunking_preserves_order() {
        let rs = bundled::original_menu().recipes().to_vec();
        let expected: Vec<f64> = rs.iter().map(|r| (1 + r.title.len() % 10) as f64).collect();
        for (chunk_size, concurrency) in [(1, 1), (5, 3), (7, 8), (36, 2), (100, 4)] {
            let scorer = RemoteScorer {
                chunk_size,
                concurrency,
                ..RemoteScorer::new(Arc::new(Echo), "m")
            };
            assert_eq!(scorer.score(&rs).unwrap(), expected, "chunk {chunk_size}");
        }
    }

    #[test]
    fn rating_text_switch() {
        let rs = recipes(2);
        let mut scorer = RemoteScorer::new(Arc::new(Echo), "m");
        let title_only = scorer.request(&rs).messages[0].content.clone();
        assert!(title_only.ends_with("\nChicken Curry Ramen\nPork Ribs"));
        scorer.text = RatingText::TitleAndDescription;
        let with_desc = scorer.request(&rs).messages[0].content.clone();
        assert!(with_desc.contains("\nChicken Curry Ramen. Japanese fried chicken"));
    }

    #[test]
    fn replayed_transcript() {
        let rs = recipes(4);
        let scorer = RemoteScorer {
            chunk_size: 2,
            ..RemoteScorer::new(Arc::new(Echo), "gpt-test")
        };
        let entries = vec![
            TranscriptEntry {
                request_hash: scorer.request(&rs[..2]).hash(),
                response_body: response_body("8, 6"),
            },
            TranscriptEntry {
                request_hash: scorer.request(&rs[2..]).hash(),
                response_body: response_body("Ratings: 9, 7.5"),
            },
        ];
        let replay = RemoteScorer {
            chunk_size: 2,
            ..RemoteScorer::new(Arc::new(ReplayClient::new(entries)), "gpt-test")
        };
        let s = score_recipes(&replay, &rs).unwrap();
        assert_eq!(
            rs.iter().map(|r| s.rating(&r.id).unwrap()).collect::<Vec<_>>(),
            vec![8.0, 6.0, 9.0, 7.5]
        );
    }

    #[test]
    fn chunk_errors_carry_context() {
        let rs = recipes(4);
        let entries = vec![TranscriptEntry {
            request_hash: RemoteScorer {
                chunk_size: 2,
                ..RemoteScorer::new(Arc::new(Echo), "m")
            }
            .request(&rs[..2])
            .hash(),
            response_body: response_body("8"),
        }];
        let scorer = RemoteScorer {
            chunk_size: 2,
            ..RemoteScorer::new(Arc::new(ReplayClient::new(entries)), "m")
        };
        match scorer.score(&rs) {
            Err(ScoreError::Parse {
                chunk: 0,
                source: ParseError::CountMismatch { expected: 2, found: 1 },
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(score_recipes(&scorer, &[]), Err(ScoreError::Empty)));
    }
}
