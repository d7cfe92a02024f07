//! Recipe generation with a bounded correction loop.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::client::{ChatCompletion, ChatError, ChatMessage, ChatRequest};
use crate::parse::{parse_recipes, validate_ingredients, RecipeDraft};
use crate::templates::{PromptTemplate, TemplateError, TemplateName};

pub const MAX_ATTEMPTS: usize = 5;

/// What went wrong with one response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttemptFailure {
    pub attempt: usize,
    pub problems: Vec<String>,
}

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error("chat request failed on attempt {attempt}: {source}")]
    Chat {
        attempt: usize,
        #[source]
        source: ChatError,
    },
    #[error("no valid response after {} attempts", .0.len())]
    Exhausted(Vec<AttemptFailure>),
    #[error("max_attempts must be at least 1")]
    NoAttempts,
}

#[derive(Debug, Clone)]
pub struct GenerationRequest<'a> {
    pub model: &'a str,
    pub template: TemplateName,
    pub bindings: BTreeMap<String, String>,
    pub whitelist: &'a BTreeSet<String>,
    pub expected_count: usize,
    pub max_attempts: usize,
}

fn check(text: &str, expected: usize, whitelist: &BTreeSet<String>) -> Result<Vec<RecipeDraft>, Vec<String>> {
    let drafts = parse_recipes(text).map_err(|e| vec![e.to_string()])?;
    let mut problems = Vec::new();
    if drafts.len() != expected {
        problems.push(format!("expected {expected} recipes, got {}", drafts.len()));
    }
    problems.extend(validate_ingredients(&drafts, whitelist).into_iter().map(|v| {
        format!(
            "`{}` uses `{}`, which is not an allowed ingredient",
            v.title, v.ingredient
        )
    }));
    if problems.is_empty() {
        Ok(drafts)
    } else {
        Err(problems)
    }
}

fn correction(problems: &[String]) -> String {
    let mut msg = String::from("Your response has the following problems:\n");
    for p in problems {
        msg.push_str("- ");
        msg.push_str(p);
        msg.push('\n');
    }
    msg.push_str("Please output the full corrected list of recipes in the required format.");
    msg
}

/// Sends the rendered prompt; after each failing response, appends it and a
/// list of the problems to the conversation and asks again. At most
/// `max_attempts` requests are issued.
pub fn generate_with_retries(
    client: &dyn ChatCompletion,
    request: &GenerationRequest<'_>,
) -> Result<Vec<RecipeDraft>, GenerateError> {
    if request.max_attempts == 0 {
        return Err(GenerateError::NoAttempts);
    }
    let prompt = PromptTemplate::get(request.template).render(&request.bindings)?;
    let mut chat = ChatRequest::single(request.model, prompt);
    let mut failures = Vec::new();
    for attempt in 1..=request.max_attempts {
        let response = client
            .complete(&chat)
            .map_err(|source| GenerateError::Chat { attempt, source })?;
        match check(&response.content, request.expected_count, request.whitelist) {
            Ok(drafts) => return Ok(drafts),
            Err(problems) => {
                chat.messages.push(ChatMessage::assistant(response.content));
                chat.messages.push(ChatMessage::user(correction(&problems)));
                failures.push(AttemptFailure { attempt, problems });
            }
        }
    }
    Err(GenerateError::Exhausted(failures))
}
