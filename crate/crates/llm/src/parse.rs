//! Parsing model output: rating lists, recipe blocks, pairwise answers.

use std::collections::BTreeSet;

use menuopt_core::domain::{normalize_ingredient, Menu};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("expected {expected} ratings, got {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("rating {0} is outside [1, 10]")]
    OutOfRange(f64),
    #[error("`{0}` is not a number")]
    NotANumber(String),
    #[error("response uses forbidden formatting character `{0}`")]
    Formatting(char),
    #[error("recipe block {block} has {lines} lines, expected 3")]
    MalformedBlock { block: usize, lines: usize },
    #[error("recipe `{0}` lists no ingredients")]
    NoIngredients(String),
    #[error("expected `1` or `2`, got `{0}`")]
    InvalidChoice(String),
}

/// Splits a rating list such as `"8, 5, 9"`. A leading wrapper ending in a
/// colon (`"Ratings: 8, 5, 9"`), a wrapper on its own line, and a trailing
/// period are tolerated.
pub fn parse_ratings(text: &str, expected: usize) -> Result<Vec<f64>, ParseError> {
    let mut body = text.trim();
    let lines: Vec<&str> = body.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if lines.len() > 1 {
        // Keep the line carrying the list; ties go to the first.
        body = lines
            .iter()
            .copied()
            .rev()
            .max_by_key(|l| l.matches(',').count())
            .unwrap_or(body);
    }
    if let Some(pos) = body.rfind(':') {
        body = &body[pos + 1..];
    }
    let body = body.trim().trim_end_matches('.').trim();
    let values = body
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| ParseError::NotANumber(tok.to_string()))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    if values.len() != expected {
        return Err(ParseError::CountMismatch {
            expected,
            found: values.len(),
        });
    }
    if let Some(v) = values.iter().find(|v| !(1.0..=10.0).contains(*v)) {
        return Err(ParseError::OutOfRange(*v));
    }
    Ok(values)
}

/// A generated recipe before it is given an id and origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecipeDraft {
    pub title: String,
    /// Normalized, in order of usage.
    pub ingredients: Vec<String>,
    pub description: String,
}

impl RecipeDraft {
    pub fn main_ingredient(&self) -> &str {
        &self.ingredients[0]
    }
}

/// Blank-line separated blocks of title, ingredient list, description.
pub fn parse_recipes(text: &str) -> Result<Vec<RecipeDraft>, ParseError> {
    if let Some(c) = text.chars().find(|c| matches!(c, '*' | '#' | '_')) {
        return Err(ParseError::Formatting(c));
    }
    let mut blocks: Vec<Vec<&str>> = vec![Vec::new()];
    for line in text.lines().map(str::trim) {
        if line.is_empty() {
            if !blocks.last().unwrap().is_empty() {
                blocks.push(Vec::new());
            }
        } else {
            blocks.last_mut().unwrap().push(line);
        }
    }
    blocks.retain(|b| !b.is_empty());
    blocks
        .into_iter()
        .enumerate()
        .map(|(i, block)| {
            let [title, ingredients, description] = block[..] else {
                return Err(ParseError::MalformedBlock {
                    block: i + 1,
                    lines: block.len(),
                });
            };
            let ingredients: Vec<String> = ingredients
                .trim_end_matches('.')
                .split(',')
                .map(normalize_ingredient)
                .filter(|s| !s.is_empty())
                .collect();
            if ingredients.is_empty() {
                return Err(ParseError::NoIngredients(title.to_string()));
            }
            Ok(RecipeDraft {
                title: title.to_string(),
                ingredients,
                description: description.to_string(),
            })
        })
        .collect()
}

/// Ingredients that may be added beyond those already on the menu.
pub const ALLOWED_ADDITIONS: [&str; 6] = ["tofu", "lentils", "mushrooms", "chickpeas", "eggs", "cheese"];

pub fn generation_whitelist(menu: &Menu) -> BTreeSet<String> {
    menu.recipes()
        .iter()
        .flat_map(|r| r.ingredients.iter().cloned())
        .chain(ALLOWED_ADDITIONS.iter().map(|s| s.to_string()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub title: String,
    pub ingredient: String,
}

/// Every ingredient not in `whitelist` after normalization, in draft order.
pub fn validate_ingredients(drafts: &[RecipeDraft], whitelist: &BTreeSet<String>) -> Vec<Violation> {
    drafts
        .iter()
        .flat_map(|d| {
            d.ingredients
                .iter()
                .map(|i| normalize_ingredient(i))
                .filter(|i| !whitelist.contains(i))
                .map(|ingredient| Violation {
                    title: d.title.clone(),
                    ingredient,
                })
        })
        .collect()
}

/// First non-empty line must be exactly `1` or `2`, optionally followed by a period.
pub fn parse_pair_choice(text: &str) -> Result<u8, ParseError> {
    let line = text.lines().map(str::trim).find(|l| !l.is_empty()).unwrap_or("");
    match line.trim_end_matches('.') {
        "1" => Ok(1),
        "2" => Ok(2),
        _ => Err(ParseError::InvalidChoice(line.to_string())),
    }
}
