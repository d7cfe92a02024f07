//! Committed prompt texts. Placeholders are `{name}`; everything else is
//! reproduced verbatim.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TemplateError {
    #[error("template `{template}` needs a value for `{placeholder}`")]
    MissingBinding {
        template: TemplateName,
        placeholder: String,
    },
    #[error("template `{template}` has no placeholder `{placeholder}`")]
    UnknownBinding {
        template: TemplateName,
        placeholder: String,
    },
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemplateName {
    GenerateRecipes,
    RateRecipes,
    DirectRevision,
    SensoryPairwise,
    RecipePairwise,
    ExperimentalDesign,
    StyleStandardization,
}

impl TemplateName {
    pub const ALL: [TemplateName; 7] = [
        TemplateName::GenerateRecipes,
        TemplateName::RateRecipes,
        TemplateName::DirectRevision,
        TemplateName::SensoryPairwise,
        TemplateName::RecipePairwise,
        TemplateName::ExperimentalDesign,
        TemplateName::StyleStandardization,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateName::GenerateRecipes => "generate_recipes",
            TemplateName::RateRecipes => "rate_recipes",
            TemplateName::DirectRevision => "direct_revision",
            TemplateName::SensoryPairwise => "sensory_pairwise",
            TemplateName::RecipePairwise => "recipe_pairwise",
            TemplateName::ExperimentalDesign => "experimental_design",
            TemplateName::StyleStandardization => "style_standardization",
        }
    }
}

impl fmt::Display for TemplateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TemplateName {
    type Err = TemplateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| TemplateError::UnknownTemplate(s.to_string()))
    }
}

const GENERATE_RECIPES: &str = "\
You are a brilliant chef experienced at creating sustainable and delicious food. Here is a menu: {original_menu}
Please generate ({k}) new, delicious, and diverse vegan or vegetarian dishes from this set of ingredients. You are also allowed to use tofu, lentils, mushrooms, chickpeas, eggs, and cheese.
Patrons will be American omnivores.
Please output in same format as this example:
Tofu curry ramen
Fried tofu, noodles, curry broth, pak choi, pickled onions.
Appealing description.
The ingredients must be in order of usage, i.e the main ingredient must come first.
Very important: you must only use ingredients in the original menu or the list above. For every ingredient, there must be an exact match in the original menu or the list above.
Do not worsen CO2 emissions, cost, nutrition, or preparation time. Emissions will be computed based on the main (first) ingredient.
Do not include any stars, asterisks, hashtags, underscores. Do not number the recipes. Do not include any text other than recipe information, e.g. do not say 'Here are the recipes'.";

const RATE_RECIPES: &str = "\
Here are {r} recipes. Please rate them on a scale of 1-10 based on standard American omnivore taste preferences, 1 being unappealing and 10 being appealing. Output only a comma-separated list of {r} numbers, from 1 to 10.
{recipes}";

const DIRECT_REVISION: &str = "\
You are a brilliant chef experienced at creating sustainable and delicious food.
Here is a menu: {original_menu}
Please generate a revised menu, with the same number of recipes ({n}) and no new ingredients other than tofu, lentils, mushrooms, chickpeas, eggs, and cheese.
Design the menu to achieve at least a 75% CO2 emissions reduction in people's choices while maintaining or improving patron satisfaction with their set of choices.
Patrons will be American omnivores. Emissions will be computed based on the main (first) ingredient.
Please output each recipe in same format as this example:
Tofu curry ramen
Fried tofu, noodles, curry broth, pak choi, pickled onions.
Appealing description.
The ingredients must be in order of usage, i.e the main ingredient must come first.
Very important: you must only use ingredients in the original menu or the list above. For every ingredient, there must be an exact match in the original menu or the list above.
Do not worsen cost, nutrition, animal welfare (number of animals used, computed based on the first ingredient), or preparation time.
Do not include any stars, asterisks, hashtags, underscores. Do not number the recipes. Do not include any text other than recipe information, e.g. do not say 'Here are the recipes'.";

const SENSORY_PAIRWISE: &str = "\
You are an expert plant-based meat food scientist. Here are the ingredient lists of two {category} products.
Product 1: {ingredient_list_1}
Product 2: {ingredient_list_2}
Additionally, here are the nutrition facts for product 1: {nutrition_facts_1}.
And here are the nutrition facts for product 2: {nutrition_facts_2}.
Now, suppose that a group of 100 omnivores eats both products in a blind taste test. Which do you predict would be ranked higher on the dimension of {dimension}? Please output a single character, either 1 or 2 on the first line.";

const RECIPE_PAIRWISE: &str = "\
You are an expert online recipe writer. Which online recipe would people prefer, recipe 1 or recipe 2?

Output a number only (1 or 2). You must choose one. If unsure, provide your best guess.

Recipe 1: {recipe_1}

Recipe 2: {recipe_2}

Answer:";

const EXPERIMENTAL_DESIGN: &str = "\
You are an expert plant-based meat food scientist. You have devised a {category} product with the following ingredient list: {ingredient_list}.
Additionally, it has the following nutritional information: {nutrition_facts}.
You ran a blind taste test of American omnivores and received the following quantitative feedback on your product: {quantitative_feedback}.
Additionally, you received the following qualitative feedback about what people liked: {positive_feedback}.
You also received the following qualitative feedback about what people disliked: {negative_feedback}.
What changes would you consider making to your product? Could you design a set of experiments on the key areas that need improvement? You will be evaluated on metrics including accuracy and specificity.";

const STYLE_STANDARDIZATION: &str = "\
You are a writing assistant specializing in editing writing produced by food scientists. I will give you some text to edit.
Instructions:
1. Convert all suggestions to a numbered list, with a title for each suggestion. Do not include any content that is not part of the numbered list.
2. Do not change the length.
3. Remove any references to the author\u{2019}s personal experience or to other writing.
4. Rewrite it as if it could have come from either a human or LLM.
5. Use complete sentences.
6. Do not add any prefix like 'Here is the edited text'. Just output the edited text.
7. Do not add or remove any of the meaning, unless necessary for following instruction #3.
8. Do not use asterisks.
Here is the text:
{original_text}";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PromptTemplate {
    pub name: TemplateName,
    pub body: &'static str,
}

enum Piece<'a> {
    Text(&'a str),
    Slot(&'a str),
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_')
}

/// Splits a body into literal text and `{name}` slots.
fn pieces(body: &str) -> Vec<Piece<'_>> {
    let mut out = Vec::new();
    let mut rest = body;
    while let Some(open) = rest.find('{') {
        match rest[open..].find('}') {
            Some(len) if is_ident(&rest[open + 1..open + len]) => {
                out.push(Piece::Text(&rest[..open]));
                out.push(Piece::Slot(&rest[open + 1..open + len]));
                rest = &rest[open + len + 1..];
            }
            _ => {
                out.push(Piece::Text(&rest[..=open]));
                rest = &rest[open + 1..];
            }
        }
    }
    out.push(Piece::Text(rest));
    out
}

impl PromptTemplate {
    pub fn get(name: TemplateName) -> Self {
        let body = match name {
            TemplateName::GenerateRecipes => GENERATE_RECIPES,
            TemplateName::RateRecipes => RATE_RECIPES,
            TemplateName::DirectRevision => DIRECT_REVISION,
            TemplateName::SensoryPairwise => SENSORY_PAIRWISE,
            TemplateName::RecipePairwise => RECIPE_PAIRWISE,
            TemplateName::ExperimentalDesign => EXPERIMENTAL_DESIGN,
            TemplateName::StyleStandardization => STYLE_STANDARDIZATION,
        };
        Self { name, body }
    }

    pub fn placeholders(&self) -> BTreeSet<&'static str> {
        pieces(self.body)
            .into_iter()
            .filter_map(|p| match p {
                Piece::Slot(s) => Some(s),
                Piece::Text(_) => None,
            })
            .collect()
    }

    /// Substitutes every placeholder. Bound values are inserted as-is and
    /// never re-scanned.
    pub fn render<K, V>(&self, bindings: &BTreeMap<K, V>) -> Result<String, TemplateError>
    where
        K: AsRef<str> + Ord,
        V: AsRef<str>,
    {
        let slots = self.placeholders();
        if let Some(k) = bindings.keys().find(|k| !slots.contains(k.as_ref())) {
            return Err(TemplateError::UnknownBinding {
                template: self.name,
                placeholder: k.as_ref().to_string(),
            });
        }
        let lookup: BTreeMap<&str, &str> = bindings.iter().map(|(k, v)| (k.as_ref(), v.as_ref())).collect();
        let mut out = String::with_capacity(self.body.len());
        for piece in pieces(self.body) {
            match piece {
                Piece::Text(t) => out.push_str(t),
                Piece::Slot(s) => match lookup.get(s) {
                    Some(v) => out.push_str(v),
                    None => {
                        return Err(TemplateError::MissingBinding {
                            template: self.name,
                            placeholder: s.to_string(),
                        })
                    }
                },
            }
        }
        Ok(out)
    }
}

/// Convenience for literal binding lists.
pub fn bindings<'a>(pairs: &[(&'a str, &'a str)]) -> BTreeMap<&'a str, &'a str> {
    pairs.iter().copied().collect()
}
