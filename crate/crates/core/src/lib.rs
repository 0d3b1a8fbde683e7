//! Binary sentiment classification for short Indonesian social-media posts.
//!
//! The pipeline runs in five stages, each in its own module:
//!
//! - [`corpus`]: JSONL ingestion, keyword filtering, de-duplication and
//!   stratified train/test sampling.
//! - [`textprep`]: case folding, URL/mention stripping, punctuation removal,
//!   tokenization, rule-based Indonesian stemming and stopword removal.
//! - [`features`]: vocabulary construction, document-frequency pruning and
//!   TF-IDF weights.
//! - [`nbayes`]: two-class multinomial Naive Bayes in log space.
//! - [`evaluate`]: stratified k-fold cross-validation, confusion matrices and
//!   the metric suite (accuracy, precision, recall, Cohen's kappa).
//! - [`report`]: per-brand sentiment summaries and ranking.
//!
//! Data-parallel stages (batch preprocessing, fold execution, multi-file
//! ingestion) take an [`Execution`] argument. With the default `parallel`
//! feature they run on rayon; without it every mode runs sequentially.
//! Results are identical either way.

pub mod corpus;
pub mod evaluate;
mod exec;
pub mod features;
pub mod nbayes;
pub mod report;
pub mod synthetic;
pub mod textprep;

pub use corpus::{Corpus, Label, LabeledDocument, RawPost};
pub use evaluate::{ConfusionMatrix, CvReport, FoldPlan, MetricsReport};
pub use exec::Execution;
pub use features::{DocVector, PruneBounds, Vocabulary};
pub use nbayes::{NbModel, Prediction, Weighting};
pub use report::BrandSummary;
pub use textprep::{PrepConfig, Token};
