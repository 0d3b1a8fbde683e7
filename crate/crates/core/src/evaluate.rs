//! Stratified k-fold cross-validation and confusion-matrix metrics.
//!
//! Per-fold confusion matrices are summed and metrics are derived once from
//! the aggregate. Vocabulary and pruning are refit on the training folds of
//! every split, so nothing from a held-out fold leaks into its model.

use std::fmt::{self, Write as _};
use std::ops::{Add, AddAssign};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, Label, LabeledDocument};
use crate::exec::Execution;
use crate::features::{FeatureError, PruneBounds, Vocabulary};
use crate::nbayes::{NbError, NbModel, Weighting};
use crate::textprep::{self, PrepConfig, Token};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("k must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("too few {label} documents for {k} folds: have {have}")]
    TooFewDocuments { label: Label, have: usize, k: usize },
    #[error("{predictions} predictions but {truths} truths")]
    LengthMismatch { predictions: usize, truths: usize },
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: NbError,
    },
    #[error(transparent)]
    Feature(#[from] FeatureError),
}

/// 2x2 counts with Positive as the reference class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    /// Predicted positive, actually positive.
    pub tp: u64,
    /// Predicted positive, actually negative.
    pub fp: u64,
    /// Predicted negative, actually positive.
    #[serde(rename = "fn")]
    pub fn_: u64,
    /// Predicted negative, actually negative.
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        ConfusionMatrix { tp, fp, fn_, tn }
    }

    pub fn from_labels(predictions: &[Label], truths: &[Label]) -> Result<Self, EvalError> {
        if predictions.len() != truths.len() {
            return Err(EvalError::LengthMismatch {
                predictions: predictions.len(),
                truths: truths.len(),
            });
        }
        let mut cm = ConfusionMatrix::default();
        for (&p, &t) in predictions.iter().zip(truths) {
            cm.record(p, t);
        }
        Ok(cm)
    }

    pub fn record(&mut self, predicted: Label, actual: Label) {
        use Label::{Negative, Positive};
        match (predicted, actual) {
            (Positive, Positive) => self.tp += 1,
            (Positive, Negative) => self.fp += 1,
            (Negative, Positive) => self.fn_ += 1,
            (Negative, Negative) => self.tn += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// The same matrix with Negative as the reference class.
    pub fn swapped(&self) -> Self {
        ConfusionMatrix::new(self.tn, self.fn_, self.fp, self.tp)
    }
}

impl Add for ConfusionMatrix {
    type Output = ConfusionMatrix;
    fn add(self, o: Self) -> Self {
        ConfusionMatrix::new(
            self.tp + o.tp,
            self.fp + o.fp,
            self.fn_ + o.fn_,
            self.tn + o.tn,
        )
    }
}

impl AddAssign for ConfusionMatrix {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl std::iter::Sum for ConfusionMatrix {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ConfusionMatrix::default(), Add::add)
    }
}

pub fn confusion_matrix(
    predictions: &[Label],
    truths: &[Label],
) -> Result<ConfusionMatrix, EvalError> {
    if predictions.is_empty() {
        return Err(EvalError::EmptyMatrix);
    }
    ConfusionMatrix::from_labels(predictions, truths)
}

/// Serializes `None` as the string `"undefined"`.
mod undefined {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => s.serialize_f64(*x),
            None => s.serialize_str("undefined"),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Wire {
            Num(f64),
            Text(String),
        }
        match Wire::deserialize(d)? {
            Wire::Num(x) => Ok(Some(x)),
            Wire::Text(t) if t == "undefined" => Ok(None),
            Wire::Text(t) => Err(serde::de::Error::custom(format!("unexpected metric `{t}`"))),
        }
    }
}

/// Metrics derived from one confusion matrix. A metric whose denominator
/// is zero is `None` ("undefined"), never 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    #[serde(with = "undefined")]
    pub accuracy: Option<f64>,
    #[serde(with = "undefined")]
    pub precision_pos: Option<f64>,
    #[serde(with = "undefined")]
    pub precision_neg: Option<f64>,
    #[serde(with = "undefined")]
    pub recall_pos: Option<f64>,
    #[serde(with = "undefined")]
    pub recall_neg: Option<f64>,
    #[serde(with = "undefined")]
    pub macro_precision: Option<f64>,
    #[serde(with = "undefined")]
    pub macro_recall: Option<f64>,
    #[serde(with = "undefined")]
    pub kappa: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den != 0).then(|| num as f64 / den as f64)
}

fn mean(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some((a? + b?) / 2.0)
}

/// Accuracy, per-class and macro precision/recall, and Cohen's kappa
/// `(Po - Pe) / (1 - Pe)`.
pub fn metrics(cm: &ConfusionMatrix) -> Result<MetricsReport, EvalError> {
    let total = cm.total();
    if total == 0 {
        return Err(EvalError::EmptyMatrix);
    }
    let ConfusionMatrix { tp, fp, fn_, tn } = *cm;
    let accuracy = ratio(tp + tn, total);
    let precision_pos = ratio(tp, tp + fp);
    let precision_neg = ratio(tn, tn + fn_);
    let recall_pos = ratio(tp, tp + fn_);
    let recall_neg = ratio(tn, tn + fp);

    // Chance agreement from the marginals, numerator in exact integers.
    let (tp, fp, fn_, tn, t) = (
        tp as u128,
        fp as u128,
        fn_ as u128,
        tn as u128,
        total as u128,
    );
    let pe_num = (tp + fp) * (tp + fn_) + (fn_ + tn) * (fp + tn);
    let kappa = if pe_num == t * t {
        None
    } else {
        let pe = pe_num as f64 / (t * t) as f64;
        accuracy.map(|po| (po - pe) / (1.0 - pe))
    };

    Ok(MetricsReport {
        accuracy,
        precision_pos,
        precision_neg,
        recall_pos,
        recall_neg,
        macro_precision: mean(precision_pos, precision_neg),
        macro_recall: mean(recall_pos, recall_neg),
        kappa,
    })
}

/// Per-document fold assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    pub assignments: Vec<usize>,
}

impl FoldPlan {
    /// Shuffles each class with a seeded generator and deals its documents
    /// round-robin into `k` folds.
    pub fn stratified(labels: &[Label], k: usize, seed: u64) -> Result<Self, EvalError> {
        if k < 2 {
            return Err(EvalError::InvalidK(k));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut assignments = vec![0; labels.len()];
        for label in Label::ALL {
            let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == label).collect();
            if idx.len() < k {
                return Err(EvalError::TooFewDocuments {
                    label,
                    have: idx.len(),
                    k,
                });
            }
            idx.shuffle(&mut rng);
            for (pos, i) in idx.into_iter().enumerate() {
                assignments[i] = pos % k;
            }
        }
        Ok(FoldPlan {
            k,
            seed,
            assignments,
        })
    }

    /// (training indices, held-out indices) for fold `fold`, each ascending.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.assignments.len()).partition(|&i| self.assignments[i] != fold)
    }

    pub fn fold_size(&self, fold: usize) -> usize {
        self.assignments.iter().filter(|&&f| f == fold).count()
    }
}

pub fn kfold_split(labels: &[Label], k: usize, seed: u64) -> Result<FoldPlan, EvalError> {
    FoldPlan::stratified(labels, k, seed)
}

/// Model-side knobs for each fold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CvConfig {
    pub bounds: PruneBounds,
    pub alpha: f64,
    pub weighting: Weighting,
}

impl Default for CvConfig {
    fn default() -> Self {
        CvConfig {
            bounds: PruneBounds::default(),
            alpha: NbModel::DEFAULT_ALPHA,
            weighting: Weighting::Counts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub vocab_size: usize,
    pub matrix: ConfusionMatrix,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub k: usize,
    pub seed: u64,
    pub aggregate_matrix: ConfusionMatrix,
    pub metrics: MetricsReport,
    pub folds: Vec<FoldReport>,
}

/// Trains a model on one subset: vocabulary, pruning, then Naive Bayes.
pub fn fit<D: AsRef<[Token]>>(
    docs: &[D],
    labels: &[Label],
    config: &CvConfig,
) -> Result<NbModel, NbError> {
    let vocab = Vocabulary::build(docs)
        .map(|v| v.prune(&config.bounds))
        .map_err(|_| NbError::EmptyVocabulary)?;
    NbModel::train_weighted(docs, labels, vocab, config.alpha, config.weighting)
}

fn run_fold(
    docs: &[Vec<Token>],
    labels: &[Label],
    plan: &FoldPlan,
    fold: usize,
    config: &CvConfig,
) -> Result<FoldReport, EvalError> {
    let (train_idx, test_idx) = plan.split(fold);
    let train_docs: Vec<&[Token]> = train_idx.iter().map(|&i| docs[i].as_slice()).collect();
    let train_labels: Vec<Label> = train_idx.iter().map(|&i| labels[i]).collect();
    let model = fit(&train_docs, &train_labels, config)
        .map_err(|source| EvalError::Fold { fold, source })?;

    let mut matrix = ConfusionMatrix::default();
    for &i in &test_idx {
        matrix.record(model.classify(&docs[i]).label, labels[i]);
    }
    Ok(FoldReport {
        fold,
        n_train: train_idx.len(),
        n_test: test_idx.len(),
        vocab_size: model.vocab().len(),
        metrics: metrics(&matrix)?,
        matrix,
    })
}

/// Runs stratified k-fold cross-validation over preprocessed documents.
/// Folds may run in parallel; the report is identical either way.
pub fn cross_validate(
    docs: &[Vec<Token>],
    labels: &[Label],
    k: usize,
    seed: u64,
    config: &CvConfig,
    exec: Execution,
) -> Result<CvReport, EvalError> {
    if docs.len() != labels.len() {
        return Err(EvalError::LengthMismatch {
            predictions: docs.len(),
            truths: labels.len(),
        });
    }
    let plan = FoldPlan::stratified(labels, k, seed)?;
    let folds_idx: Vec<usize> = (0..k).collect();
    let folds = exec
        .map(&folds_idx, |&f| run_fold(docs, labels, &plan, f, config))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let aggregate_matrix: ConfusionMatrix = folds.iter().map(|f| f.matrix).sum();
    Ok(CvReport {
        k,
        seed,
        metrics: metrics(&aggregate_matrix)?,
        aggregate_matrix,
        folds,
    })
}

/// Preprocesses a labeled corpus, then cross-validates it.
pub fn cross_validate_corpus(
    corpus: &Corpus<LabeledDocument>,
    k: usize,
    seed: u64,
    prep: &PrepConfig,
    config: &CvConfig,
    exec: Execution,
) -> Result<CvReport, EvalError> {
    let texts: Vec<&str> = corpus.iter().map(|d| d.text.as_str()).collect();
    let docs = textprep::preprocess_batch(&texts, prep, exec);
    cross_validate(&docs, &corpus.labels(), k, seed, config, exec)
}

struct Pct(Option<f64>);

impl fmt::Display for Pct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(x) => write!(f, "{:.2}%", x * 100.0),
            None => f.write_str("undefined"),
        }
    }
}

/// Plain-text confusion table with class precision/recall margins and the
/// headline metrics underneath.
pub fn render_table(cm: &ConfusionMatrix, m: &MetricsReport) -> String {
    let mut out = String::new();
    let w = 16;
    let _ = writeln!(
        out,
        "{:<16}{:>w$}{:>w$}{:>w$}",
        "", "True Positive", "True Negative", "Class Precision"
    );
    let _ = writeln!(
        out,
        "{:<16}{:>w$}{:>w$}{:>w$}",
        "Pred. Positive",
        cm.tp,
        cm.fp,
        Pct(m.precision_pos).to_string()
    );
    let _ = writeln!(
        out,
        "{:<16}{:>w$}{:>w$}{:>w$}",
        "Pred. Negative",
        cm.fn_,
        cm.tn,
        Pct(m.precision_neg).to_string()
    );
    let _ = writeln!(
        out,
        "{:<16}{:>w$}{:>w$}",
        "Class Recall",
        Pct(m.recall_pos).to_string(),
        Pct(m.recall_neg).to_string()
    );
    out.push('\n');
    let kappa = m
        .kappa
        .map_or("undefined".to_string(), |k| format!("{k:.4}"));
    for (name, value) in [
        ("accuracy", Pct(m.accuracy).to_string()),
        ("macro precision", Pct(m.macro_precision).to_string()),
        ("macro recall", Pct(m.macro_recall).to_string()),
        ("kappa", kappa),
    ] {
        let _ = writeln!(out, "{name:<16}{value:>w$}");
    }
    out
}
