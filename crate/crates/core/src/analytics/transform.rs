//! Menu-level baselines: drop or swap beef, or restrict/reorder to vegetarian items.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::domain::{classify_vegetarian, MeatLexicon, Menu, Recipe};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MenuTransform {
    RemoveBeef,
    VegetarianSubset,
    VegetarianFirst,
    BeefToChicken,
}

impl MenuTransform {
    pub const ALL: [MenuTransform; 4] = [
        MenuTransform::RemoveBeef,
        MenuTransform::VegetarianSubset,
        MenuTransform::VegetarianFirst,
        MenuTransform::BeefToChicken,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MenuTransform::RemoveBeef => "remove_beef",
            MenuTransform::VegetarianSubset => "vegetarian_subset",
            MenuTransform::VegetarianFirst => "vegetarian_first",
            MenuTransform::BeefToChicken => "beef_to_chicken",
        }
    }
}

impl fmt::Display for MenuTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MenuTransform {
    type Err = AnalyticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        Self::ALL
            .into_iter()
            .find(|t| t.name() == key)
            .ok_or_else(|| AnalyticsError::InvalidArgument(format!("unknown transform `{s}`")))
    }
}

/// A recipe counts as vegetarian only if it is flagged so and the lexicon agrees.
fn is_vegetarian(recipe: &Recipe, lexicon: &MeatLexicon) -> bool {
    recipe.vegetarian && classify_vegetarian(recipe, lexicon)
}

pub fn transform_menu(menu: &Menu, transform: MenuTransform, lexicon: &MeatLexicon) -> Result<Menu, AnalyticsError> {
    let recipes = menu.recipes();
    let out: Vec<Recipe> = match transform {
        MenuTransform::RemoveBeef => recipes
            .iter()
            .filter(|r| r.main_ingredient() != "beef")
            .cloned()
            .collect(),
        MenuTransform::VegetarianSubset => recipes.iter().filter(|r| is_vegetarian(r, lexicon)).cloned().collect(),
        MenuTransform::VegetarianFirst => {
            let (veg, rest): (Vec<&Recipe>, Vec<&Recipe>) = recipes.iter().partition(|r| is_vegetarian(r, lexicon));
            veg.into_iter().chain(rest).cloned().collect()
        }
        MenuTransform::BeefToChicken => recipes.iter().map(beef_to_chicken).collect(),
    };
    if out.is_empty() {
        return Err(AnalyticsError::EmptyTransform(transform));
    }
    Ok(Menu::new(format!("{}_{}", menu.name(), transform), out)?)
}

fn beef_to_chicken(recipe: &Recipe) -> Recipe {
    let mut ingredients: Vec<String> = Vec::with_capacity(recipe.ingredients.len());
    for i in &recipe.ingredients {
        let swapped = replace_word(i, "beef", "chicken");
        if !ingredients.contains(&swapped) {
            ingredients.push(swapped);
        }
    }
    Recipe {
        title: replace_word(&recipe.title, "beef", "chicken"),
        description: replace_word(&recipe.description, "beef", "chicken"),
        ingredients,
        ..recipe.clone()
    }
}

/// Replaces whole-word, case-insensitive occurrences of `from` (lowercase)
/// with `to`, copying the capitalization of the first letter.
fn replace_word(text: &str, from: &str, to: &str) -> String {
    let lower = text.to_lowercase();
    // Lowercasing may change byte lengths outside ASCII; fall back to no-op then.
    if lower.len() != text.len() {
        return text.to_string();
    }
    let is_word = |c: Option<char>| c.is_some_and(char::is_alphanumeric);
    let mut out = String::with_capacity(text.len());
    let mut pos = 0;
    while let Some(off) = lower[pos..].find(from) {
        let start = pos + off;
        let end = start + from.len();
        let before = text[..start].chars().next_back();
        let after = text[end..].chars().next();
        out.push_str(&text[pos..start]);
        if is_word(before) || is_word(after) {
            out.push_str(&text[start..end]);
        } else if text[start..].starts_with(|c: char| c.is_uppercase()) {
            let mut chars = to.chars();
            out.extend(chars.next().map(|c| c.to_ascii_uppercase()));
            out.push_str(chars.as_str());
        } else {
            out.push_str(to);
        }
        pos = end;
    }
    out.push_str(&text[pos..]);
    out
}
