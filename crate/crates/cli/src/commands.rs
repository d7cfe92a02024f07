//! Subcommand implementations. Each writes its outputs under `out_dir` and
//! returns the paths it wrote.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use menuopt_core::analytics::{
    mine_pairs, nutrition_rank, run_pairwise_eval, transform_menu, EvalReport, MenuTransform, NutritionPopulation,
    PairComparison, Position, RatedItem, SensoryDimension, Side,
};
use menuopt_core::domain::{
    bundled, classify_vegetarian, load_impact_table, load_menu, load_nutrition, load_scores, parse_impact_table,
    ImpactTable, MeatLexicon, Menu, NutritionFacts, Origin, Recipe, ScoreVector,
};
use menuopt_core::impact::{expected_impact, resolve_impacts, Dimension};
use menuopt_core::optimizer::{
    solve_exact_with, solve_heuristic, verify_proposition1, BoundReport, Certificate, ExactOptions, MenuProblem,
    MenuSolution, OptimizeError,
};
use menuopt_core::similarity::similarity_matrix;
use menuopt_llm::client::{ChatResponse, ReplayClient};
use menuopt_llm::generate::{generate_with_retries, GenerationRequest, MAX_ATTEMPTS};
use menuopt_llm::parse::generation_whitelist;
use menuopt_llm::{
    score_recipes, ChatClient, ChatCompletion, ChatError, ChatRequest, HashScorer, RemoteScorer, ScorerBackend,
    TableScorer, TemplateName,
};
use serde::{Deserialize, Serialize};

use crate::config::{Backend, RunConfig};

pub const API_KEY_VAR: &str = "LLM_API_KEY";

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn load_original(cfg: &RunConfig) -> Result<Menu> {
    match &cfg.menu {
        Some(p) => load_menu(p).context("loading original menu"),
        None => Ok(bundled::original_menu()),
    }
}

fn load_table(cfg: &RunConfig) -> Result<ImpactTable> {
    let table = match (&cfg.impacts, &cfg.imputations) {
        (Some(impacts), imputations) => load_impact_table(impacts, imputations.as_deref()),
        (None, Some(imputations)) => {
            let text = fs::read_to_string(imputations).with_context(|| format!("reading {}", imputations.display()))?;
            parse_impact_table(bundled::IMPACTS, Path::new("impacts.csv"), Some((&text, imputations)))
        }
        (None, None) => Ok(bundled::impact_table()),
    };
    table.context("loading impact table")
}

fn chat_client(cfg: &RunConfig) -> Result<Arc<dyn ChatCompletion>> {
    if let Some(path) = &cfg.transcript {
        return Ok(Arc::new(ReplayClient::load(path)?));
    }
    let key =
        std::env::var(API_KEY_VAR).map_err(|_| anyhow!("{API_KEY_VAR} is not set; the remote backend needs it"))?;
    Ok(Arc::new(ChatClient::http(&cfg.endpoint, Some(key))))
}

/// Offline stand-in for generation: replies with the first `n` bundled
/// generated recipes in the prompt's output format.
pub struct FixtureGenerator {
    reply: String,
}

impl FixtureGenerator {
    pub fn new(n: usize) -> Self {
        let reply = bundled::generated_recipes()
            .recipes()
            .iter()
            .take(n)
            .map(recipe_block)
            .collect::<Vec<_>>()
            .join("\n\n");
        Self { reply }
    }
}

impl ChatCompletion for FixtureGenerator {
    fn complete(&self, _request: &ChatRequest) -> Result<ChatResponse, ChatError> {
        Ok(ChatResponse {
            content: self.reply.clone(),
            finish_reason: Some("stop".into()),
            usage: None,
            attempts: 1,
        })
    }
}

/// Title, ingredient line, description: the format the generation prompt asks for.
fn recipe_block(r: &Recipe) -> String {
    format!("{}\n{}.\n{}", r.title, r.ingredients.join(", "), r.description)
}

fn generate(cfg: &RunConfig, original: &Menu, lexicon: &MeatLexicon) -> Result<Vec<Recipe>> {
    if let Some(p) = &cfg.generated {
        return Ok(load_menu(p).context("loading generated recipes")?.recipes().to_vec());
    }
    if cfg.n_generate == 0 {
        return Ok(Vec::new());
    }
    let client: Arc<dyn ChatCompletion> = match cfg.backend {
        Backend::Mock => Arc::new(FixtureGenerator::new(cfg.n_generate)),
        Backend::Remote => chat_client(cfg)?,
    };
    let whitelist = generation_whitelist(original);
    let menu_text = original
        .recipes()
        .iter()
        .map(recipe_block)
        .collect::<Vec<_>>()
        .join("\n\n");
    let request = GenerationRequest {
        model: &cfg.model,
        template: TemplateName::GenerateRecipes,
        bindings: BTreeMap::from([
            ("original_menu".to_string(), menu_text),
            ("k".to_string(), cfg.n_generate.to_string()),
        ]),
        whitelist: &whitelist,
        expected_count: cfg.n_generate,
        max_attempts: MAX_ATTEMPTS,
    };
    let drafts = generate_with_retries(client.as_ref(), &request).context("generating recipes")?;
    drafts
        .into_iter()
        .enumerate()
        .map(|(i, d)| {
            let mut r = Recipe {
                id: format!("g{:02}", i + 1),
                title: d.title,
                description: d.description,
                ingredients: d.ingredients,
                origin: Origin::Generated,
                vegetarian: false,
                vegan: false,
            };
            r.vegetarian = classify_vegetarian(&r, lexicon);
            Ok(r.validated()?)
        })
        .collect()
}

/// Original menu followed by the generated candidates.
fn ground_set(cfg: &RunConfig) -> Result<(Menu, Menu)> {
    let original = load_original(cfg)?;
    let generated = generate(cfg, &original, &bundled::meat_lexicon())?;
    let mut recipes = original.recipes().to_vec();
    recipes.extend(generated);
    let ground = Menu::new("ground_set", recipes).context("building ground set")?;
    Ok((original, ground))
}

fn scorer(cfg: &RunConfig, ground: &Menu) -> Result<Box<dyn ScorerBackend>> {
    Ok(match cfg.backend {
        Backend::Mock => match &cfg.scores {
            Some(p) => Box::new(TableScorer::new(
                &load_scores(p, ground.recipes()).context("loading scores")?,
            )),
            None => Box::new(HashScorer),
        },
        Backend::Remote => Box::new(RemoteScorer {
            chunk_size: cfg.chunk_size,
            ..RemoteScorer::new(chat_client(cfg)?, cfg.model.clone())
        }),
    })
}

fn score_ground(cfg: &RunConfig, ground: &Menu) -> Result<ScoreVector> {
    let backend = scorer(cfg, ground)?;
    score_recipes(backend.as_ref(), ground.recipes()).context("scoring recipes")
}

#[derive(Debug, Serialize)]
pub struct SolutionFile {
    pub selection: Vec<String>,
    pub objective: f64,
    pub expected_emissions: f64,
    pub expected_animals: f64,
    pub original_expected_emissions: f64,
    pub original_expected_animals: f64,
    pub emissions_ratio: f64,
    pub certificate: Certificate,
    pub stats: SolutionStats,
    pub parameters: Parameters,
}

/// Counts only; wall time is left out so reruns are byte-identical.
#[derive(Debug, Serialize)]
pub struct SolutionStats {
    pub heuristic_moves: u64,
    pub exact_nodes: u64,
    pub exact_completed: bool,
}

#[derive(Debug, Serialize)]
pub struct Parameters {
    pub n: usize,
    pub k: usize,
    pub lambda: f64,
    pub c_emissions: f64,
    pub c_welfare: f64,
    pub exact_budget: u64,
    pub restarts: usize,
    pub seed: u64,
}

pub struct OptimizeOutput {
    pub solution: PathBuf,
    pub menu: PathBuf,
    pub report: PathBuf,
    pub summary: SolutionFile,
}

/// Heuristic first, then branch-and-bound seeded with its answer and capped
/// at `exact_budget` nodes. A completed search certifies optimality;
/// otherwise the best menu found is reported as heuristic.
fn solve(problem: &MenuProblem, cfg: &RunConfig) -> Result<(MenuSolution, SolutionStats)> {
    let heuristic = match solve_heuristic(problem, cfg.seed, cfg.restarts) {
        Ok(s) => Some(s),
        Err(OptimizeError::InfeasibilityUnproven) => None,
        Err(e) => return Err(e.into()),
    };
    let moves = heuristic.as_ref().map_or(0, |h| h.stats.nodes);
    let opts = ExactOptions {
        node_limit: Some(cfg.exact_budget),
        incumbent: heuristic.as_ref().map(|h| h.selection.clone()),
    };
    let stats = |nodes, exact_completed| SolutionStats {
        heuristic_moves: moves,
        exact_nodes: nodes,
        exact_completed,
    };
    match solve_exact_with(problem, &opts) {
        Ok(s) => {
            let nodes = s.stats.nodes;
            Ok((s, stats(nodes, true)))
        }
        Err(OptimizeError::Infeasible) => bail!("no feasible menu exists under the impact limits"),
        Err(OptimizeError::NodeLimit { nodes, incumbent }) => {
            // The search was seeded with the heuristic answer, so its incumbent is at least as good.
            match incumbent.map(|b| *b).or(heuristic) {
                Some(s) => Ok((
                    MenuSolution {
                        certificate: Certificate::Heuristic,
                        ..s
                    },
                    stats(nodes, false),
                )),
                None => bail!("no feasible menu found within {nodes} nodes (infeasibility not proven)"),
            }
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_optimize(cfg: &RunConfig) -> Result<OptimizeOutput> {
    let (original, ground) = ground_set(cfg)?;
    if cfg.k > ground.len() {
        bail!("k = {} exceeds the ground set size {}", cfg.k, ground.len());
    }
    let scores = score_ground(cfg, &ground)?;
    let p = scores.aligned(ground.recipes())?;
    let impacts = resolve_impacts(ground.recipes(), &load_table(cfg)?).context("resolving impacts")?;
    let sim = similarity_matrix(ground.recipes()).context("computing similarity")?;
    let original_idx: Vec<usize> = (0..original.len()).collect();
    let problem = MenuProblem::with_impact_limits(
        p.clone(),
        sim,
        cfg.lambda,
        cfg.k,
        &impacts,
        original_idx.clone(),
        &[
            (Dimension::Emissions, cfg.c_emissions),
            (Dimension::Animals, cfg.c_welfare),
        ],
    )
    .context("building problem")?;
    let (solution, stats) = solve(&problem, cfg).context("solving")?;

    let e = |sel: &[usize], dim| expected_impact(sel, &p, &impacts, dim);
    let (orig_e, orig_a) = (
        e(&original_idx, Dimension::Emissions)?,
        e(&original_idx, Dimension::Animals)?,
    );
    let (sol_e, sol_a) = (
        e(&solution.selection, Dimension::Emissions)?,
        e(&solution.selection, Dimension::Animals)?,
    );
    let recipes = ground.recipes();
    let summary = SolutionFile {
        selection: solution.selection.iter().map(|&i| recipes[i].id.clone()).collect(),
        objective: solution.objective,
        expected_emissions: sol_e,
        expected_animals: sol_a,
        original_expected_emissions: orig_e,
        original_expected_animals: orig_a,
        emissions_ratio: if orig_e > 0.0 { sol_e / orig_e } else { 0.0 },
        certificate: solution.certificate,
        stats,
        parameters: Parameters {
            n: ground.len(),
            k: cfg.k,
            lambda: cfg.lambda,
            c_emissions: cfg.c_emissions,
            c_welfare: cfg.c_welfare,
            exact_budget: cfg.exact_budget,
            restarts: cfg.restarts,
            seed: cfg.seed,
        },
    };

    // Generated items first, then by predicted rating, highest first.
    let mut order = solution.selection.clone();
    order.sort_by(|&a, &b| {
        let gen = |i: usize| recipes[i].origin != Origin::Generated;
        gen(a).cmp(&gen(b)).then(p[b].total_cmp(&p[a])).then(a.cmp(&b))
    });
    let menu = Menu::new("optimized_menu", order.iter().map(|&i| recipes[i].clone()).collect())?;

    let dir = &cfg.out_dir;
    let solution_path = write(dir, "solution.json", &to_json(&summary))?;
    let menu_path = write(dir, "menu.json", &menu.to_json())?;
    let report_path = write(dir, "report.txt", &report(&summary, &menu, &scores))?;
    Ok(OptimizeOutput {
        solution: solution_path,
        menu: menu_path,
        report: report_path,
        summary,
    })
}

fn report(s: &SolutionFile, menu: &Menu, scores: &ScoreVector) -> String {
    let mut out = String::new();
    let pr = &s.parameters;
    let _ = writeln!(out, "Optimized menu: {} of {} candidates", pr.k, pr.n);
    let _ = writeln!(
        out,
        "lambda = {}, emissions limit = {} x original, animal limit = {} x original",
        pr.lambda, pr.c_emissions, pr.c_welfare
    );
    let cert = match s.certificate {
        Certificate::Exact => "exact (search completed)",
        Certificate::Heuristic => "heuristic (exact search budget exhausted; optimality not proven)",
    };
    let _ = writeln!(out, "certificate: {cert}");
    let _ = writeln!(out, "objective: {:.6}", s.objective);
    let _ = writeln!(
        out,
        "expected emissions: {:.4} kg CO2e/kg (original {:.4}, ratio {:.4})",
        s.expected_emissions, s.original_expected_emissions, s.emissions_ratio
    );
    let _ = writeln!(
        out,
        "expected animals:   {:.6} per kg (original {:.6})",
        s.expected_animals, s.original_expected_animals
    );
    let generated = menu.recipes().iter().filter(|r| r.origin == Origin::Generated).count();
    let _ = writeln!(
        out,
        "generated items: {generated}, vegetarian items: {}",
        menu.recipes().iter().filter(|r| r.vegetarian).count()
    );
    let _ = writeln!(out);
    for (i, r) in menu.recipes().iter().enumerate() {
        let tag = if r.origin == Origin::Generated { "new" } else { "   " };
        let rating = scores.rating(&r.id).unwrap_or(f64::NAN);
        let _ = writeln!(
            out,
            "{:>2}. [{tag}] {:<45} rating {rating:>4}  main: {}",
            i + 1,
            r.title,
            r.main_ingredient()
        );
    }
    out
}

#[derive(Debug, Clone)]
pub struct BoundArgs {
    pub n: usize,
    pub k: usize,
    pub lambda: f64,
    pub epsilon: f64,
    pub trials: usize,
}

impl Default for BoundArgs {
    fn default() -> Self {
        Self {
            n: 10,
            k: 5,
            lambda: 1.0,
            epsilon: 0.1,
            trials: 1000,
        }
    }
}

/// Writes the report, then fails if the bound was violated.
pub fn cmd_verify_bound(cfg: &RunConfig, args: &BoundArgs) -> Result<(PathBuf, BoundReport)> {
    let report = verify_proposition1(args.n, args.k, args.lambda, args.epsilon, args.trials, cfg.seed)
        .context("verifying estimation-error bound")?;
    let path = write(&cfg.out_dir, "bound_report.json", &to_json(&report))?;
    if !report.pass {
        bail!(
            "bound violated: max gap {} exceeds 2K*epsilon = {} (report in {})",
            report.max_gap,
            report.bound,
            path.display()
        );
    }
    Ok((path, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Predictor {
    /// Answers from the pairs file's truth column.
    Truth,
    /// Nutrition-label baseline on the chosen dimension.
    Nutrition,
}

#[derive(Debug, Clone)]
pub struct EvalArgs {
    pub pairs: PathBuf,
    pub items: PathBuf,
    pub predictor: Predictor,
    pub dimension: SensoryDimension,
    pub alpha: f64,
    pub m_tests: usize,
}

#[derive(Deserialize)]
struct PairRow {
    id_a: String,
    id_b: String,
    truth: String,
    gap: f64,
}

type Item = (String, NutritionFacts);

fn load_pairs(path: &Path, items: &BTreeMap<String, NutritionFacts>) -> Result<Vec<PairComparison<Item>>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (i, row) in reader.deserialize::<PairRow>().enumerate() {
        let line = i + 2;
        let row = row.with_context(|| format!("{}: malformed row at line {line}", path.display()))?;
        let truth: Side = row
            .truth
            .parse()
            .with_context(|| format!("{}: line {line}", path.display()))?;
        if !(row.gap.is_finite() && row.gap >= 0.0) {
            bail!("{}: line {line}: gap must be non-negative", path.display());
        }
        let get = |id: &str| {
            items
                .get(id)
                .map(|f| (id.to_string(), *f))
                .ok_or_else(|| anyhow!("{}: line {line}: unknown item `{id}`", path.display()))
        };
        out.push(PairComparison {
            item_a: get(&row.id_a)?,
            item_b: get(&row.id_b)?,
            id_a: row.id_a,
            id_b: row.id_b,
            truth,
            gap: row.gap,
        });
    }
    Ok(out)
}

pub fn cmd_eval_pairs(cfg: &RunConfig, args: &EvalArgs) -> Result<(PathBuf, EvalReport)> {
    let items = load_nutrition(&args.items).context("loading item facts")?;
    let pairs = load_pairs(&args.pairs, &items)?;
    let winners: BTreeSet<(String, String)> = pairs
        .iter()
        .map(|p| match p.truth {
            Side::A => (p.id_a.clone(), p.id_b.clone()),
            Side::B => (p.id_b.clone(), p.id_a.clone()),
        })
        .collect();
    let population = NutritionPopulation::new(items.values());
    let report = run_pairwise_eval(
        &pairs,
        |first: &Item, second: &Item| -> Result<Position> {
            let side = match args.predictor {
                Predictor::Truth => {
                    if winners.contains(&(first.0.clone(), second.0.clone())) {
                        Side::A
                    } else {
                        Side::B
                    }
                }
                Predictor::Nutrition => nutrition_rank(args.dimension, &first.1, &second.1, Some(&population))?,
            };
            Ok(match side {
                Side::A => Position::First,
                Side::B => Position::Second,
            })
        },
        cfg.seed,
        args.alpha,
        args.m_tests,
    )
    .context("evaluating pairs")?;
    let path = write(&cfg.out_dir, "eval_report.json", &report.to_json())?;
    Ok((path, report))
}

pub fn cmd_generate(cfg: &RunConfig) -> Result<PathBuf> {
    let original = load_original(cfg)?;
    let recipes = generate(cfg, &original, &bundled::meat_lexicon())?;
    let menu = Menu::new("generated_recipes", recipes).context("no recipes generated")?;
    write(&cfg.out_dir, "generated.json", &menu.to_json())
}

pub fn cmd_score(cfg: &RunConfig) -> Result<PathBuf> {
    let (_, ground) = ground_set(cfg)?;
    let scores = score_ground(cfg, &ground)?;
    write(&cfg.out_dir, "scores.json", &scores.to_json())
}

pub fn cmd_similarity(cfg: &RunConfig) -> Result<PathBuf> {
    let (_, ground) = ground_set(cfg)?;
    let sim = similarity_matrix(ground.recipes()).context("computing similarity")?;
    let ids: Vec<&str> = ground.recipes().iter().map(|r| r.id.as_str()).collect();
    write(&cfg.out_dir, "similarity.csv", &sim.to_csv(&ids))
}

#[derive(Deserialize)]
struct CorpusEntry {
    id: String,
    ingredients: Vec<String>,
    ratings: Vec<f64>,
}

pub fn cmd_mine_pairs(cfg: &RunConfig, corpus: &Path, min_pairs: usize, alpha: f64) -> Result<PathBuf> {
    let text = fs::read_to_string(corpus).with_context(|| format!("reading {}", corpus.display()))?;
    let entries: Vec<CorpusEntry> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", corpus.display()))?;
    let items: Vec<RatedItem> = entries
        .into_iter()
        .map(|e| RatedItem {
            id: e.id,
            ingredients: e
                .ingredients
                .iter()
                .map(|i| menuopt_core::domain::normalize_ingredient(i))
                .collect(),
            ratings: e.ratings,
        })
        .collect();
    let mined = mine_pairs(&items, min_pairs, alpha).context("mining pairs")?;
    let mut csv = String::from("id_a,id_b,truth,gap\n");
    for p in &mined {
        let _ = writeln!(csv, "{},{},{},{}", p.id_a, p.id_b, p.truth.as_str(), p.gap);
    }
    write(&cfg.out_dir, "mined_pairs.json", &to_json(&mined))?;
    write(&cfg.out_dir, "pairs.csv", &csv)
}

pub fn cmd_transform(cfg: &RunConfig, transform: MenuTransform) -> Result<PathBuf> {
    let menu = load_original(cfg)?;
    let out = transform_menu(&menu, transform, &bundled::meat_lexicon()).context("transforming menu")?;
    write(&cfg.out_dir, &format!("{transform}.json"), &out.to_json())
}
