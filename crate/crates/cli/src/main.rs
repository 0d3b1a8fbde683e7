use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sentimin::Execution;
use sentimin_cli::commands::parse_declared;
use sentimin_cli::config::weighting_from_flag;
use sentimin_cli::{
    cmd_classify, cmd_compare, cmd_evaluate, cmd_ingest, cmd_train, ClassifyArgs, CliError,
    CompareArgs, EvaluateArgs, IngestArgs, RunConfig, TrainArgs,
};

/// Sentiment classification of short social-media posts about online
/// marketplaces.
#[derive(Debug, Parser)]
#[command(name = "sentimin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Merge raw JSONL dumps, deduplicate and keep keyword matches.
    Ingest {
        /// Raw JSONL dumps ({id, text, author?, timestamp?, matched_keyword?}).
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Comma-separated keywords, e.g. bukalapak,tokopedia.
        #[arg(long, value_delimiter = ',')]
        keywords: Vec<String>,
        /// CSV with `id,label` columns; produces a labeled corpus.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, short)]
        output: PathBuf,
        #[arg(long)]
        sequential: bool,
    },
    /// Stratified k-fold cross-validation on a labeled corpus.
    Evaluate {
        corpus: PathBuf,
        /// JSON report destination; defaults to stdout after the table.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Train on a labeled corpus and save the model.
    Train {
        corpus: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Label an unlabeled corpus with a saved model (JSONL out).
    Classify {
        model: PathBuf,
        corpus: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Per-brand sentiment shares, ranked by positive share.
    Compare {
        #[arg(required = true)]
        predictions: Vec<PathBuf>,
        /// Expected classified count per brand, BRAND=COUNT (repeatable).
        #[arg(long = "declared", value_parser = parse_declared)]
        declared: Vec<(String, u64)>,
        /// JSON report destination; defaults to stdout after the table.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// Options shared by the modelling subcommands. Flags override the config
/// file, which overrides built-in defaults.
#[derive(Debug, Args)]
struct Tuning {
    /// Flat `key = value` configuration file.
    #[arg(long, env = "SENTIMIN_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of cross-validation folds.
    #[arg(long)]
    k: Option<usize>,
    /// Laplace smoothing constant.
    #[arg(long)]
    alpha: Option<f64>,
    /// Lower document-frequency ratio bound (inclusive).
    #[arg(long)]
    min_df: Option<f64>,
    /// Upper document-frequency ratio bound (inclusive).
    #[arg(long)]
    max_df: Option<f64>,
    /// Stopword list, one word per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    min_token_len: Option<usize>,
    /// Disable stemming.
    #[arg(long)]
    no_stem: bool,
    /// Drop hashtags entirely instead of keeping their text.
    #[arg(long)]
    drop_hashtags: bool,
    /// Feature weighting: counts or tfidf.
    #[arg(long, value_parser = weighting_from_flag)]
    weighting: Option<sentimin::Weighting>,
    /// Write a per-document preprocessing trace (JSONL).
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Run single-threaded.
    #[arg(long)]
    sequential: bool,
}

impl Tuning {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.load_file(path)?;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.k {
            cfg.k = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.min_df {
            cfg.min_df_ratio = v;
        }
        if let Some(v) = self.max_df {
            cfg.max_df_ratio = v;
        }
        if let Some(p) = &self.stopwords {
            cfg.stopword_path = Some(p.clone());
        }
        if let Some(v) = self.min_token_len {
            cfg.min_token_len = v;
        }
        if self.no_stem {
            cfg.stem_enabled = false;
        }
        if self.drop_hashtags {
            cfg.keep_hashtag_body = false;
        }
        if let Some(w) = self.weighting {
            cfg.weighting = w;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn exec(&self) -> Execution {
        execution(self.sequential)
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    match cli.command {
        Command::Ingest {
            inputs,
            keywords,
            labels,
            output,
            sequential,
        } => {
            let args = IngestArgs {
                inputs,
                keywords,
                labels,
                output,
            };
            cmd_ingest(&args, execution(sequential), &mut out)?;
        }
        Command::Evaluate {
            corpus,
            output,
            tuning,
        } => {
            let cfg = tuning.resolve()?;
            let args = EvaluateArgs {
                corpus,
                output,
                trace: tuning.trace.clone(),
            };
            cmd_evaluate(&args, &cfg, tuning.exec(), &mut out, &mut err)?;
        }
        Command::Train {
            corpus,
            output,
            tuning,
        } => {
            let cfg = tuning.resolve()?;
            let args = TrainArgs {
                corpus,
                output,
                trace: tuning.trace.clone(),
            };
            cmd_train(&args, &cfg, tuning.exec(), &mut out, &mut err)?;
        }
        Command::Classify {
            model,
            corpus,
            output,
            tuning,
        } => {
            let cfg = tuning.resolve()?;
            let args = ClassifyArgs {
                model,
                corpus,
                output,
                trace: tuning.trace.clone(),
            };
            cmd_classify(&args, &cfg, tuning.exec(), &mut out, &mut err)?;
        }
        Command::Compare {
            predictions,
            declared,
            output,
        } => {
            let args = CompareArgs {
                predictions,
                declared: declared.into_iter().collect::<BTreeMap<_, _>>(),
                output,
            };
            cmd_compare(&args, &mut out, &mut err)?;
        }
    }
    out.flush()
        .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are configuration errors; --help/--version are not.
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
