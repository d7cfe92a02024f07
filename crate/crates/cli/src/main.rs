use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use menuopt_cli::commands::{self, BoundArgs, EvalArgs, Predictor};
use menuopt_cli::config::{RunArgs, RunConfig};
use menuopt_core::analytics::{MenuTransform, SensoryDimension};

/// LLM-guided constrained menu design.
#[derive(Parser)]
#[command(name = "menuopt", version)]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate candidates, score, and select a menu under the impact limits.
    Optimize,
    /// Generate candidate recipes only.
    Generate,
    /// Score the original menu plus candidates.
    Score,
    /// Write the pairwise similarity matrix of the ground set.
    Similarity,
    /// Check the estimation-error bound on random instances.
    VerifyBound {
        #[arg(long = "bound-n", default_value_t = 10)]
        n: usize,
        #[arg(long = "bound-k", default_value_t = 5)]
        k: usize,
        #[arg(long = "bound-lambda", default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Mine high-overlap pairs with a significant rating difference.
    MinePairs {
        /// JSON array of {id, ingredients, ratings}.
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long = "min-pairs", default_value_t = 1)]
        min_pairs: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Score a pairwise predictor against ground truth.
    EvalPairs {
        /// CSV with columns id_a,id_b,truth,gap.
        #[arg(long)]
        pairs: PathBuf,
        /// Nutrition CSV for the items referenced by the pairs.
        #[arg(long)]
        items: PathBuf,
        #[arg(long, value_enum, default_value_t = Predictor::Nutrition)]
        predictor: Predictor,
        #[arg(long, default_value = "overall-satisfaction")]
        dimension: SensoryDimension,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Number of tests sharing the Bonferroni correction.
        #[arg(long = "m-tests", default_value_t = 1)]
        m_tests: usize,
    },
    /// Apply a rule-based rewrite to the original menu.
    Transform {
        #[arg(long)]
        transform: MenuTransform,
    },
}

fn run(cli: Cli) -> Result<()> {
    let cfg = RunConfig::resolve(&cli.run)?;
    match cli.command {
        Command::Optimize => {
            let out = commands::cmd_optimize(&cfg)?;
            print!("{}", std::fs::read_to_string(&out.report)?);
            println!(
                "wrote {}, {}, {}",
                out.solution.display(),
                out.menu.display(),
                out.report.display()
            );
        }
        Command::Generate => println!("wrote {}", commands::cmd_generate(&cfg)?.display()),
        Command::Score => println!("wrote {}", commands::cmd_score(&cfg)?.display()),
        Command::Similarity => println!("wrote {}", commands::cmd_similarity(&cfg)?.display()),
        Command::VerifyBound {
            n,
            k,
            lambda,
            epsilon,
            trials,
        } => {
            let args = BoundArgs {
                n,
                k,
                lambda,
                epsilon,
                trials,
            };
            let (path, r) = commands::cmd_verify_bound(&cfg, &args)?;
            println!(
                "max gap {:.6} <= bound {:.6} over {} trials ({} changed selections); wrote {}",
                r.max_gap,
                r.bound,
                r.trials,
                r.mismatched_selections,
                path.display()
            );
        }
        Command::MinePairs {
            corpus,
            min_pairs,
            alpha,
        } => {
            println!(
                "wrote {}",
                commands::cmd_mine_pairs(&cfg, &corpus, min_pairs, alpha)?.display()
            )
        }
        Command::EvalPairs {
            pairs,
            items,
            predictor,
            dimension,
            alpha,
            m_tests,
        } => {
            let args = EvalArgs {
                pairs,
                items,
                predictor,
                dimension,
                alpha,
                m_tests,
            };
            let (path, r) = commands::cmd_eval_pairs(&cfg, &args)?;
            println!(
                "accuracy {:.4} ({}/{}, {} invalid), chi2 {:.4}, p {:.3e}, significant at {:.4}: {}; wrote {}",
                r.accuracy,
                r.correct,
                r.n,
                r.invalid,
                r.chi2,
                r.p_value,
                r.alpha_corrected,
                r.significant,
                path.display()
            );
        }
        Command::Transform { transform } => println!("wrote {}", commands::cmd_transform(&cfg, transform)?.display()),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
