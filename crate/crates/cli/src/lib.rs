//! Library side of the `sentimin` command-line tool: run configuration,
//! error-to-exit-code mapping and the subcommand implementations.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{
    cmd_classify, cmd_compare, cmd_evaluate, cmd_ingest, cmd_train, ClassifyArgs, CompareArgs,
    EvaluateArgs, IngestArgs, PredictionRecord, TrainArgs,
};
pub use config::RunConfig;
pub use error::CliError;
