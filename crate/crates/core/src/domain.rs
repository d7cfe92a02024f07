//! Recipes, menus, impact tables, scores and recorded choices.
//!
//! Every type here is validated on construction and immutable afterwards.
//! Ingredient names are the join key across the crate, so they all pass
//! through [`normalize_ingredient`] before being stored.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("{path}: parse error at line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },
    #[error("recipe `{id}`: {message}")]
    InvalidRecipe { id: String, message: String },
    #[error("duplicate recipe id `{0}`")]
    DuplicateId(String),
    #[error("menu `{0}` has no recipes")]
    EmptyMenu(String),
    #[error("impact for `{ingredient}` must be a finite non-negative number, got {value}")]
    NegativeImpact { ingredient: String, value: f64 },
    #[error("imputation for `{ingredient}` names donor `{donor}`, which has no complete entry")]
    MissingDonor { ingredient: String, donor: String },
    #[error("`{0}` has a blank impact field but no imputation donor")]
    MissingImputation(String),
    #[error("no impact data for ingredient `{0}`")]
    UnknownIngredient(String),
    #[error("unknown recipe id `{0}`")]
    UnknownId(String),
    #[error("rating for `{id}` is {rating}, outside [1, 10]")]
    RatingOutOfRange { id: String, rating: f64 },
    #[error("invalid nutrition facts for `{id}`: {message}")]
    InvalidNutrition { id: String, message: String },
    #[error("choice by `{participant}` names `{recipe}`, which is not on menu `{menu}`")]
    InvalidChoice {
        participant: String,
        menu: String,
        recipe: String,
    },
    #[error("meat lexicon is empty")]
    EmptyLexicon,
}

pub type Result<T, E = DomainError> = std::result::Result<T, E>;

/// Lowercase, trim and collapse internal whitespace.
pub fn normalize_ingredient(name: &str) -> String {
    name.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Original,
    Generated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    pub id: String,
    pub title: String,
    pub description: String,
    /// Ordered by usage; the first entry is the main ingredient.
    pub ingredients: Vec<String>,
    pub origin: Origin,
    pub vegetarian: bool,
    pub vegan: bool,
}

impl Recipe {
    /// Normalizes ingredient names and checks the recipe invariants.
    pub fn validated(mut self) -> Result<Self> {
        let fail = |message: &str| DomainError::InvalidRecipe {
            id: self.id.clone(),
            message: message.to_string(),
        };
        if self.id.trim().is_empty() {
            return Err(fail("empty id"));
        }
        if self.ingredients.is_empty() {
            return Err(fail("ingredient list is empty"));
        }
        if self.vegan && !self.vegetarian {
            return Err(fail("vegan recipes must also be vegetarian"));
        }
        let normalized: Vec<String> = self.ingredients.iter().map(|i| normalize_ingredient(i)).collect();
        if normalized.iter().any(String::is_empty) {
            return Err(fail("blank ingredient name"));
        }
        self.ingredients = normalized;
        Ok(self)
    }

    pub fn main_ingredient(&self) -> &str {
        &self.ingredients[0]
    }
}

/// An ordered, id-unique list of recipes. Display order is significant.
#[derive(Debug, Clone, PartialEq)]
pub struct Menu {
    name: String,
    recipes: Vec<Recipe>,
}

impl Menu {
    pub fn new(name: impl Into<String>, recipes: Vec<Recipe>) -> Result<Self> {
        let name = name.into();
        if recipes.is_empty() {
            return Err(DomainError::EmptyMenu(name));
        }
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(recipes.len());
        for recipe in recipes {
            let recipe = recipe.validated()?;
            if !seen.insert(recipe.id.clone()) {
                return Err(DomainError::DuplicateId(recipe.id));
            }
            out.push(recipe);
        }
        Ok(Self { name, recipes: out })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn recipes(&self) -> &[Recipe] {
        &self.recipes
    }

    pub fn len(&self) -> usize {
        self.recipes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.recipes.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Recipe> {
        self.recipes.iter().find(|r| r.id == id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.get(id).is_some()
    }

    /// Concatenates two menus, keeping order. Fails on shared ids.
    pub fn union(&self, other: &Menu, name: impl Into<String>) -> Result<Menu> {
        let mut recipes = self.recipes.clone();
        recipes.extend(other.recipes.iter().cloned());
        Menu::new(name, recipes)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.recipes).expect("recipes serialize");
        s.push('\n');
        s
    }

    pub fn from_json_str(name: impl Into<String>, text: &str, path: &Path) -> Result<Self> {
        let recipes: Vec<Recipe> = serde_json::from_str(text).map_err(|e| parse_error(path, &e))?;
        Menu::new(name, recipes)
    }
}

fn parse_error(path: &Path, e: &serde_json::Error) -> DomainError {
    DomainError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| DomainError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a menu JSON file; the menu is named after the file stem.
pub fn load_menu(path: &Path) -> Result<Menu> {
    let text = read(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "menu".to_string());
    Menu::from_json_str(name, &text, path)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Impact {
    /// kg CO2eq per kg.
    pub emissions: f64,
    /// Animals killed per kg.
    pub animals: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct ImpactEntry {
    emissions: Option<f64>,
    animals: Option<f64>,
}

/// Per-ingredient impacts with donor imputation.
///
/// An ingredient without its own row resolves entirely to its donor. A row
/// with a blank field takes that field from its donor and keeps the other.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactTable {
    entries: BTreeMap<String, ImpactEntry>,
    imputations: BTreeMap<String, String>,
}

impl ImpactTable {
    pub fn builder() -> ImpactTableBuilder {
        ImpactTableBuilder::default()
    }

    pub fn lookup(&self, ingredient: &str) -> Result<Impact> {
        let key = normalize_ingredient(ingredient);
        let donor = self.imputations.get(&key).map(|d| &self.entries[d]);
        match (self.entries.get(&key), donor) {
            (Some(entry), donor) => {
                // Builder guarantees blanks only occur alongside a complete donor.
                let emissions = entry
                    .emissions
                    .or_else(|| donor.and_then(|d| d.emissions))
                    .ok_or_else(|| DomainError::MissingImputation(key.clone()))?;
                let animals = entry
                    .animals
                    .or_else(|| donor.and_then(|d| d.animals))
                    .ok_or_else(|| DomainError::MissingImputation(key.clone()))?;
                Ok(Impact { emissions, animals })
            }
            (None, Some(d)) => Ok(Impact {
                emissions: d.emissions.expect("donor is complete"),
                animals: d.animals.expect("donor is complete"),
            }),
            (None, None) => Err(DomainError::UnknownIngredient(key)),
        }
    }

    pub fn contains(&self, ingredient: &str) -> bool {
        let key = normalize_ingredient(ingredient);
        self.entries.contains_key(&key) || self.imputations.contains_key(&key)
    }

    pub fn imputations(&self) -> &BTreeMap<String, String> {
        &self.imputations
    }
}

#[derive(Debug, Default)]
pub struct ImpactTableBuilder {
    entries: BTreeMap<String, ImpactEntry>,
    imputations: BTreeMap<String, String>,
}

impl ImpactTableBuilder {
    pub fn entry(mut self, ingredient: &str, emissions: Option<f64>, animals: Option<f64>) -> Self {
        self.entries
            .insert(normalize_ingredient(ingredient), ImpactEntry { emissions, animals });
        self
    }

    pub fn impute(mut self, ingredient: &str, donor: &str) -> Self {
        self.imputations
            .insert(normalize_ingredient(ingredient), normalize_ingredient(donor));
        self
    }

    pub fn build(self) -> Result<ImpactTable> {
        for (name, entry) in &self.entries {
            for value in [entry.emissions, entry.animals].into_iter().flatten() {
                if !(value.is_finite() && value >= 0.0) {
                    return Err(DomainError::NegativeImpact {
                        ingredient: name.clone(),
                        value,
                    });
                }
            }
        }
        for (name, donor) in &self.imputations {
            let complete = self
                .entries
                .get(donor)
                .is_some_and(|d| d.emissions.is_some() && d.animals.is_some());
            if !complete {
                return Err(DomainError::MissingDonor {
                    ingredient: name.clone(),
                    donor: donor.clone(),
                });
            }
        }
        for (name, entry) in &self.entries {
            let partial = entry.emissions.is_none() || entry.animals.is_none();
            if partial && !self.imputations.contains_key(name) {
                return Err(DomainError::MissingImputation(name.clone()));
            }
        }
        Ok(ImpactTable {
            entries: self.entries,
            imputations: self.imputations,
        })
    }
}

fn csv_error(path: &Path, message: impl std::fmt::Display) -> DomainError {
    DomainError::Csv {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn expect_header(path: &Path, reader: &mut csv::Reader<&[u8]>, expected: &[&str]) -> Result<()> {
    let headers = reader.headers().map_err(|e| csv_error(path, e))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(csv_error(
            path,
            format!("expected header `{}`, found `{}`", expected.join(","), got.join(",")),
        ));
    }
    Ok(())
}

fn parse_optional_number(path: &Path, line: u64, field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        return Ok(None);
    }
    field
        .parse::<f64>()
        .map(Some)
        .map_err(|_| csv_error(path, format!("line {line}: `{field}` is not a number")))
}

fn parse_number(path: &Path, line: u64, field: &str) -> Result<f64> {
    parse_optional_number(path, line, field)?
        .ok_or_else(|| csv_error(path, format!("line {line}: missing numeric field")))
}

/// Parses the impact CSV (and optional imputation CSV) from text.
pub fn parse_impact_table(
    impacts: &str,
    impacts_path: &Path,
    imputations: Option<(&str, &Path)>,
) -> Result<ImpactTable> {
    let mut builder = ImpactTable::builder();
    let mut reader = csv_reader(impacts);
    expect_header(
        impacts_path,
        &mut reader,
        &["ingredient", "kg_co2e_per_kg", "animals_per_kg"],
    )?;
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(impacts_path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let emissions = parse_optional_number(impacts_path, line, &record[1])?;
        let animals = parse_optional_number(impacts_path, line, &record[2])?;
        builder = builder.entry(&record[0], emissions, animals);
    }
    if let Some((text, path)) = imputations {
        let mut reader = csv_reader(text);
        expect_header(path, &mut reader, &["ingredient", "donor"])?;
        for record in reader.records() {
            let record = record.map_err(|e| csv_error(path, e))?;
            builder = builder.impute(&record[0], &record[1]);
        }
    }
    builder.build()
}

pub fn load_impact_table(path: &Path, imputations: Option<&Path>) -> Result<ImpactTable> {
    let text = read(path)?;
    let imputation_text = imputations.map(read).transpose()?;
    parse_impact_table(&text, path, imputation_text.as_deref().zip(imputations))
}

/// Per-item nutrition facts, amounts per serving.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NutritionFacts {
    pub serving_size: f64,
    pub fat: f64,
    pub protein: f64,
    pub sugar: f64,
    /// Milligrams per serving.
    pub sodium: f64,
}

impl NutritionFacts {
    pub fn new(serving_size: f64, fat: f64, protein: f64, sugar: f64, sodium: f64) -> Result<Self> {
        let facts = Self {
            serving_size,
            fat,
            protein,
            sugar,
            sodium,
        };
        facts.check("<unnamed>")?;
        Ok(facts)
    }

    fn check(&self, id: &str) -> Result<()> {
        let fail = |message: &str| DomainError::InvalidNutrition {
            id: id.to_string(),
            message: message.to_string(),
        };
        if !(self.serving_size.is_finite() && self.serving_size > 0.0) {
            return Err(fail("serving size must be positive"));
        }
        for v in [self.fat, self.protein, self.sugar, self.sodium] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(fail("amounts must be non-negative"));
            }
        }
        Ok(())
    }
}

pub fn parse_nutrition(text: &str, path: &Path) -> Result<BTreeMap<String, NutritionFacts>> {
    let mut reader = csv_reader(text);
    expect_header(
        path,
        &mut reader,
        &[
            "product_id",
            "serving_size_g",
            "fat_g",
            "protein_g",
            "sugar_g",
            "sodium_mg",
        ],
    )?;
    let mut out = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let n = |i: usize| parse_number(path, line, &record[i]);
        let facts = NutritionFacts {
            serving_size: n(1)?,
            fat: n(2)?,
            protein: n(3)?,
            sugar: n(4)?,
            sodium: n(5)?,
        };
        facts.check(&record[0])?;
        if out.insert(record[0].to_string(), facts).is_some() {
            return Err(DomainError::DuplicateId(record[0].to_string()));
        }
    }
    Ok(out)
}

pub fn load_nutrition(path: &Path) -> Result<BTreeMap<String, NutritionFacts>> {
    parse_nutrition(&read(path)?, path)
}

/// Ratings on the 1-10 scale keyed by recipe id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoreVector {
    ratings: BTreeMap<String, f64>,
}

impl ScoreVector {
    pub fn new(ratings: BTreeMap<String, f64>) -> Result<Self> {
        for (id, &rating) in &ratings {
            if !(1.0..=10.0).contains(&rating) {
                return Err(DomainError::RatingOutOfRange { id: id.clone(), rating });
            }
        }
        Ok(Self { ratings })
    }

    /// Validates that every id belongs to `recipes`.
    pub fn for_recipes(ratings: BTreeMap<String, f64>, recipes: &[Recipe]) -> Result<Self> {
        let known: HashSet<&str> = recipes.iter().map(|r| r.id.as_str()).collect();
        if let Some(id) = ratings.keys().find(|id| !known.contains(id.as_str())) {
            return Err(DomainError::UnknownId(id.clone()));
        }
        Self::new(ratings)
    }

    pub fn rating(&self, id: &str) -> Option<f64> {
        self.ratings.get(id).copied()
    }

    /// `rating / 10`, in [0.1, 1.0].
    pub fn normalized(&self, id: &str) -> Option<f64> {
        self.rating(id).map(|r| r / 10.0)
    }

    pub fn len(&self) -> usize {
        self.ratings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.ratings.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Normalized scores aligned with `recipes`. Fails on the first missing id.
    pub fn aligned(&self, recipes: &[Recipe]) -> Result<Vec<f64>> {
        recipes
            .iter()
            .map(|r| {
                self.normalized(&r.id)
                    .ok_or_else(|| DomainError::UnknownId(r.id.clone()))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.ratings).expect("scores serialize");
        s.push('\n');
        s
    }
}

pub fn load_scores(path: &Path, recipes: &[Recipe]) -> Result<ScoreVector> {
    let text = read(path)?;
    let ratings: BTreeMap<String, f64> = serde_json::from_str(&text).map_err(|e| parse_error(path, &e))?;
    ScoreVector::for_recipes(ratings, recipes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceRecord {
    pub participant_id: String,
    pub menu: String,
    pub recipe_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChoiceLog {
    records: Vec<ChoiceRecord>,
}

impl ChoiceLog {
    pub fn new(records: Vec<ChoiceRecord>, menus: &[Menu]) -> Result<Self> {
        for rec in &records {
            let on_menu = menus
                .iter()
                .find(|m| m.name() == rec.menu)
                .is_some_and(|m| m.contains(&rec.recipe_id));
            if !on_menu {
                return Err(DomainError::InvalidChoice {
                    participant: rec.participant_id.clone(),
                    menu: rec.menu.clone(),
                    recipe: rec.recipe_id.clone(),
                });
            }
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[ChoiceRecord] {
        &self.records
    }

    /// Number of times each recipe was chosen on `menu`.
    pub fn order_counts(&self, menu: &str) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for rec in self.records.iter().filter(|r| r.menu == menu) {
            *counts.entry(rec.recipe_id.clone()).or_insert(0) += 1;
        }
        counts
    }
}

pub fn load_choices(path: &Path, menus: &[Menu]) -> Result<ChoiceLog> {
    let text = read(path)?;
    let mut reader = csv_reader(&text);
    expect_header(path, &mut reader, &["participant_id", "menu", "recipe_id"])?;
    let records = reader
        .deserialize()
        .collect::<std::result::Result<Vec<ChoiceRecord>, _>>()
        .map_err(|e| csv_error(path, e))?;
    ChoiceLog::new(records, menus)
}

/// Ingredient names that mark a recipe as non-vegetarian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeatLexicon(BTreeSet<String>);

impl MeatLexicon {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set: BTreeSet<String> = names
            .into_iter()
            .map(|s| normalize_ingredient(s.as_ref()))
            .filter(|s| !s.is_empty())
            .collect();
        if set.is_empty() {
            return Err(DomainError::EmptyLexicon);
        }
        Ok(Self(set))
    }

    /// One name per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    pub fn contains(&self, ingredient: &str) -> bool {
        self.0.contains(&normalize_ingredient(ingredient))
    }
}

pub fn classify_vegetarian(recipe: &Recipe, lexicon: &MeatLexicon) -> bool {
    !recipe.ingredients.iter().any(|i| lexicon.contains(i))
}

/// Data assets compiled into the crate.
pub mod bundled {
    use super::*;

    pub const ORIGINAL_MENU: &str = include_str!("../data/original_menu.json");
    pub const GENERATED_RECIPES: &str = include_str!("../data/generated_recipes.json");
    pub const IMPACTS: &str = include_str!("../data/impacts.csv");
    pub const IMPUTATIONS: &str = include_str!("../data/imputations.csv");
    pub const MEAT_LEXICON: &str = include_str!("../data/meat_lexicon.txt");

    /// Directory holding the bundled data files on disk.
    pub fn data_dir() -> PathBuf {
        PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data"))
    }

    pub fn original_menu() -> Menu {
        Menu::from_json_str("original_menu", ORIGINAL_MENU, Path::new("original_menu.json"))
            .expect("bundled original menu is valid")
    }

    pub fn generated_recipes() -> Menu {
        Menu::from_json_str(
            "generated_recipes",
            GENERATED_RECIPES,
            Path::new("generated_recipes.json"),
        )
        .expect("bundled generated recipes are valid")
    }

    pub fn impact_table() -> ImpactTable {
        parse_impact_table(
            IMPACTS,
            Path::new("impacts.csv"),
            Some((IMPUTATIONS, Path::new("imputations.csv"))),
        )
        .expect("bundled impact table is valid")
    }

    pub fn meat_lexicon() -> MeatLexicon {
        MeatLexicon::parse(MEAT_LEXICON).expect("bundled lexicon is non-empty")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn recipe(id: &str, ingredients: &[&str]) -> Recipe {
        Recipe {
            id: id.into(),
            title: id.to_uppercase(),
            description: String::new(),
            ingredients: ingredients.iter().map(|s| s.to_string()).collect(),
            origin: Origin::Original,
            vegetarian: false,
            vegan: false,
        }
    }

    fn temp_file(contents: &str, suffix: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(suffix).tempfile().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn bundled_original_menu_has_36_items_17_vegetarian() {
        let path = bundled::data_dir().join("original_menu.json");
        let menu = load_menu(&path).unwrap();
        assert_eq!(menu.len(), 36);
        assert_eq!(menu.recipes().iter().filter(|r| r.vegetarian).count(), 17);
        assert_eq!(menu.name(), "original_menu");
    }

    #[test]
    fn empty_menu_rejected() {
        let f = temp_file("[]", ".json");
        assert!(matches!(load_menu(f.path()), Err(DomainError::EmptyMenu(_))));
    }

    #[test]
    fn duplicate_id_named_in_error() {
        let r = serde_json::to_string(&vec![recipe("r1", &["tofu"]), recipe("r1", &["beef"])]).unwrap();
        let f = temp_file(&r, ".json");
        match load_menu(f.path()) {
            Err(DomainError::DuplicateId(id)) => assert_eq!(id, "r1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_error_reports_line() {
        let f = temp_file("[\n  {\"id\": \"a\",\n  oops\n]", ".json");
        match load_menu(f.path()) {
            Err(DomainError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ingredients_are_normalized() {
        let menu = Menu::new("m", vec![recipe("a", &["  Fried   TOFU ", "Noodles"])]).unwrap();
        assert_eq!(menu.recipes()[0].ingredients, vec!["fried tofu", "noodles"]);
    }

    #[test]
    fn recipe_invariants() {
        assert!(Menu::new("m", vec![recipe("a", &[])]).is_err());
        assert!(Menu::new("m", vec![recipe("a", &["tofu", "  "])]).is_err());
        let mut r = recipe("a", &["tofu"]);
        r.vegan = true;
        assert!(Menu::new("m", vec![r]).is_err());
    }

    #[test]
    fn impact_rows_and_imputation() {
        let table = parse_impact_table(
            "ingredient,kg_co2e_per_kg,animals_per_kg\ntofu,3.2,0.0\nturkey,10.9,0.05\n",
            Path::new("t.csv"),
            Some(("ingredient,donor\nduck,turkey\n", Path::new("i.csv"))),
        )
        .unwrap();
        assert_eq!(
            table.lookup("tofu").unwrap(),
            Impact {
                emissions: 3.2,
                animals: 0.0
            }
        );
        assert_eq!(table.lookup("duck").unwrap(), table.lookup("turkey").unwrap());
        assert_eq!(table.lookup(" Duck ").unwrap().emissions, 10.9);
        assert!(matches!(
            table.lookup("dragonfruit"),
            Err(DomainError::UnknownIngredient(_))
        ));
    }

    #[test]
    fn blank_field_is_filled_from_donor() {
        let table = parse_impact_table(
            "ingredient,kg_co2e_per_kg,animals_per_kg\nlamb,39.72,\nturkey,9.87,0.1\n",
            Path::new("t.csv"),
            Some(("ingredient,donor\nlamb,turkey\n", Path::new("i.csv"))),
        )
        .unwrap();
        assert_eq!(
            table.lookup("lamb").unwrap(),
            Impact {
                emissions: 39.72,
                animals: 0.1
            }
        );
    }

    #[test]
    fn negative_impact_rejected() {
        let err = parse_impact_table(
            "ingredient,kg_co2e_per_kg,animals_per_kg\nbeef,-1,0.1\n",
            Path::new("t.csv"),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, DomainError::NegativeImpact { .. }));
    }

    #[test]
    fn impact_table_structure_errors() {
        let missing_header = parse_impact_table("tofu,3.2,0\n", Path::new("t.csv"), None).unwrap_err();
        assert!(matches!(missing_header, DomainError::Csv { .. }));
        let absent_donor = parse_impact_table(
            "ingredient,kg_co2e_per_kg,animals_per_kg\ntofu,3.2,0\n",
            Path::new("t.csv"),
            Some(("ingredient,donor\nduck,turkey\n", Path::new("i.csv"))),
        )
        .unwrap_err();
        assert!(matches!(absent_donor, DomainError::MissingDonor { .. }));
        let blank_without_donor = parse_impact_table(
            "ingredient,kg_co2e_per_kg,animals_per_kg\nlamb,39.72,\n",
            Path::new("t.csv"),
            None,
        )
        .unwrap_err();
        assert!(matches!(blank_without_donor, DomainError::MissingImputation(_)));
    }

    #[test]
    fn bundled_table_resolves_every_main_ingredient() {
        let table = bundled::impact_table();
        for menu in [bundled::original_menu(), bundled::generated_recipes()] {
            for r in menu.recipes() {
                assert!(table.lookup(r.main_ingredient()).is_ok(), "{}", r.id);
            }
        }
        assert_eq!(
            table.lookup("duck").unwrap().animals,
            table.lookup("turkey").unwrap().animals
        );
    }

    #[test]
    fn scores_load_and_validate() {
        let menu = Menu::new("m", vec![recipe("r1", &["tofu"])]).unwrap();
        let ok = temp_file(r#"{"r1": 8}"#, ".json");
        let scores = load_scores(ok.path(), menu.recipes()).unwrap();
        assert_eq!(scores.rating("r1"), Some(8.0));
        assert_eq!(scores.normalized("r1"), Some(0.8));

        let high = temp_file(r#"{"r1": 11}"#, ".json");
        assert!(matches!(
            load_scores(high.path(), menu.recipes()),
            Err(DomainError::RatingOutOfRange { .. })
        ));
        let unknown = temp_file(r#"{"zz": 5}"#, ".json");
        assert!(matches!(
            load_scores(unknown.path(), menu.recipes()),
            Err(DomainError::UnknownId(id)) if id == "zz"
        ));
    }

    #[test]
    fn classify_with_lexicon() {
        let lex = MeatLexicon::new(["beef", "chicken", "pork"]).unwrap();
        assert!(classify_vegetarian(&recipe("a", &["tofu", "noodles"]), &lex));
        assert!(!classify_vegetarian(&recipe("b", &["chicken", "noodles"]), &lex));
        assert!(MeatLexicon::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn bundled_flags_agree_with_lexicon() {
        let lex = bundled::meat_lexicon();
        for r in bundled::original_menu().recipes() {
            assert_eq!(classify_vegetarian(r, &lex), r.vegetarian, "{}", r.title);
        }
    }

    #[test]
    fn choices_must_reference_menu_items() {
        let menu = Menu::new("orig", vec![recipe("r1", &["tofu"])]).unwrap();
        let good = temp_file("participant_id,menu,recipe_id\np1,orig,r1\np2,orig,r1\n", ".csv");
        let log = load_choices(good.path(), std::slice::from_ref(&menu)).unwrap();
        assert_eq!(log.order_counts("orig")["r1"], 2);
        let bad = temp_file("participant_id,menu,recipe_id\np1,orig,r9\n", ".csv");
        assert!(matches!(
            load_choices(bad.path(), &[menu]),
            Err(DomainError::InvalidChoice { .. })
        ));
    }

    #[test]
    fn nutrition_csv() {
        let facts = parse_nutrition(
            "product_id,serving_size_g,fat_g,protein_g,sugar_g,sodium_mg\np1,113,18,20,1,380\n",
            Path::new("n.csv"),
        )
        .unwrap();
        assert_eq!(facts["p1"].protein, 20.0);
        assert!(parse_nutrition(
            "product_id,serving_size_g,fat_g,protein_g,sugar_g,sodium_mg\np1,0,18,20,1,380\n",
            Path::new("n.csv"),
        )
        .is_err());
    }
}
