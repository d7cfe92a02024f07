//! Run configuration: built-in defaults, then an optional TOML file, then flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Mock,
    Remote,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// `None` means the bundled data set.
    pub menu: Option<PathBuf>,
    pub generated: Option<PathBuf>,
    pub impacts: Option<PathBuf>,
    pub imputations: Option<PathBuf>,
    /// Fixed ratings for the mock backend, keyed by recipe id.
    pub scores: Option<PathBuf>,
    /// Recorded responses served instead of live requests on the remote backend.
    pub transcript: Option<PathBuf>,
    pub k: usize,
    pub n_generate: usize,
    pub lambda: f64,
    pub c_emissions: f64,
    pub c_welfare: f64,
    pub exact_budget: u64,
    pub restarts: usize,
    pub seed: u64,
    pub backend: Backend,
    pub endpoint: String,
    pub model: String,
    pub chunk_size: usize,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            menu: None,
            generated: None,
            impacts: None,
            imputations: None,
            scores: None,
            transcript: None,
            k: 36,
            n_generate: 20,
            lambda: 100.0,
            c_emissions: 0.25,
            c_welfare: 1.0,
            exact_budget: 2_000_000,
            restarts: 16,
            seed: 0,
            backend: Backend::Mock,
            endpoint: "https://api.openai.com/v1".into(),
            model: "gpt-4o".into(),
            chunk_size: 60,
            out_dir: PathBuf::from("out"),
        }
    }
}

/// Config file contents. Relative paths resolve against the file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    menu: Option<PathBuf>,
    generated: Option<PathBuf>,
    impacts: Option<PathBuf>,
    imputations: Option<PathBuf>,
    scores: Option<PathBuf>,
    transcript: Option<PathBuf>,
    k: Option<usize>,
    n_generate: Option<usize>,
    lambda: Option<f64>,
    c_emissions: Option<f64>,
    c_welfare: Option<f64>,
    exact_budget: Option<u64>,
    restarts: Option<usize>,
    seed: Option<u64>,
    backend: Option<Backend>,
    endpoint: Option<String>,
    model: Option<String>,
    chunk_size: Option<usize>,
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML file with any of the settings below; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Original menu JSON (default: bundled 36-item menu).
    #[arg(long, global = true)]
    pub menu: Option<PathBuf>,
    /// Generated-recipe JSON used instead of live generation.
    #[arg(long, global = true)]
    pub generated: Option<PathBuf>,
    #[arg(long, global = true)]
    pub impacts: Option<PathBuf>,
    #[arg(long, global = true)]
    pub imputations: Option<PathBuf>,
    /// Ratings JSON for the mock backend.
    #[arg(long, global = true)]
    pub scores: Option<PathBuf>,
    /// Recorded chat transcript for the remote backend.
    #[arg(long, global = true)]
    pub transcript: Option<PathBuf>,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Number of recipes to generate.
    #[arg(long, global = true)]
    pub generate: Option<usize>,
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[arg(long = "c-emissions", global = true)]
    pub c_emissions: Option<f64>,
    #[arg(long = "c-welfare", global = true)]
    pub c_welfare: Option<f64>,
    /// Node budget for the exact solver.
    #[arg(long = "exact-budget", global = true)]
    pub exact_budget: Option<u64>,
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, global = true)]
    pub backend: Option<Backend>,
    #[arg(long, global = true)]
    pub endpoint: Option<String>,
    #[arg(long, global = true)]
    pub model: Option<String>,
    #[arg(long = "chunk-size", global = true)]
    pub chunk_size: Option<usize>,
    #[arg(long = "out-dir", global = true)]
    pub out_dir: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:expr, $src:expr; $($field:ident),* $(,)?) => {
        $( if let Some(v) = $src.$field { $dst.$field = v; } )*
    };
}

macro_rules! overlay_opt {
    ($dst:expr, $src:expr; $($field:ident),* $(,)?) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field; } )*
    };
}

impl RunConfig {
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &args.config {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            let file: FileConfig =
                toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
            cfg.apply_file(file, path.parent().unwrap_or(Path::new(".")));
        }
        let a = args.clone();
        overlay_opt!(cfg, a; menu, generated, impacts, imputations, scores, transcript);
        overlay!(cfg, a; k, lambda, c_emissions, c_welfare, exact_budget, restarts, seed, backend, endpoint, model, chunk_size, out_dir);
        if let Some(n) = a.generate {
            cfg.n_generate = n;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, file: FileConfig, base: &Path) {
        let rel = |p: Option<PathBuf>| p.map(|p| if p.is_absolute() { p } else { base.join(p) });
        let f = FileConfig {
            menu: rel(file.menu),
            generated: rel(file.generated),
            impacts: rel(file.impacts),
            imputations: rel(file.imputations),
            scores: rel(file.scores),
            transcript: rel(file.transcript),
            out_dir: rel(file.out_dir),
            ..file
        };
        overlay_opt!(self, f; menu, generated, impacts, imputations, scores, transcript);
        overlay!(self, f; k, n_generate, lambda, c_emissions, c_welfare, exact_budget, restarts, seed, backend, endpoint, model, chunk_size, out_dir);
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            bail!("k must be at least 1");
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            bail!("lambda must be finite and non-negative, got {}", self.lambda);
        }
        for (name, c) in [("c-emissions", self.c_emissions), ("c-welfare", self.c_welfare)] {
            if c.is_nan() || c < 0.0 {
                bail!("{name} must be non-negative, got {c}");
            }
        }
        if self.chunk_size == 0 {
            bail!("chunk-size must be at least 1");
        }
        Ok(())
    }
}
