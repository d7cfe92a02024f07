//! LLM access for menu design: the committed prompt texts, an
//! OpenAI-compatible chat client with retry and transcript replay, response
//! parsers, the recipe-generation correction loop, and rating backends.

pub mod client;
pub mod generate;
pub mod parse;
pub mod scorer;
pub mod templates;

pub use client::{ChatClient, ChatCompletion, ChatError, ChatMessage, ChatRequest, ChatResponse, ReplayClient};
pub use generate::{generate_with_retries, GenerateError, GenerationRequest, MAX_ATTEMPTS};
pub use parse::{parse_pair_choice, parse_ratings, parse_recipes, validate_ingredients, RecipeDraft, Violation};
pub use scorer::{score_recipes, HashScorer, RatingText, RemoteScorer, ScoreError, ScorerBackend, TableScorer};
pub use templates::{PromptTemplate, TemplateError, TemplateName};
