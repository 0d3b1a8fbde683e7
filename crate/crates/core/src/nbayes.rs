//! Two-class multinomial Naive Bayes.
//!
//! Training estimates `ln P(c) = ln(N_c / N)` and the Laplace-smoothed
//! class-conditional term distribution
//! `ln P(w|c) = ln((count(w,c) + alpha) / (total(c) + alpha * |V|))`
//! over a fixed vocabulary. Classification sums log-probabilities and picks
//! the larger score; exact ties go to [`Label::Positive`].

use std::io::{Read, Write};
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Label;
use crate::features::Vocabulary;

#[derive(Debug, Error)]
pub enum NbError {
    #[error("training data has no {0} documents")]
    MissingClass(Label),
    #[error("vocabulary is empty")]
    EmptyVocabulary,
    #[error("smoothing alpha must be a positive finite number, got {0}")]
    InvalidAlpha(f64),
    #[error("{docs} documents but {labels} labels")]
    LengthMismatch { docs: usize, labels: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("model JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// One value per label, in the fixed (positive, negative) order.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerLabel<T> {
    pub positive: T,
    pub negative: T,
}

impl<T> PerLabel<T> {
    pub fn from_fn(mut f: impl FnMut(Label) -> T) -> Self {
        PerLabel {
            positive: f(Label::Positive),
            negative: f(Label::Negative),
        }
    }
}

impl<T> Index<Label> for PerLabel<T> {
    type Output = T;
    fn index(&self, label: Label) -> &T {
        match label {
            Label::Positive => &self.positive,
            Label::Negative => &self.negative,
        }
    }
}

impl<T> IndexMut<Label> for PerLabel<T> {
    fn index_mut(&mut self, label: Label) -> &mut T {
        match label {
            Label::Positive => &mut self.positive,
            Label::Negative => &mut self.negative,
        }
    }
}

/// What a document contributes per vocabulary term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    /// Raw term counts (the standard multinomial event model).
    #[default]
    Counts,
    /// TF-IDF weights used as fractional counts.
    Tfidf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub label: Label,
    pub log_score: PerLabel<f64>,
    pub posterior: PerLabel<f64>,
}

impl Prediction {
    /// Picks the larger score (positive on ties) and normalizes with a
    /// max-shifted softmax.
    pub fn from_log_scores(log_score: PerLabel<f64>) -> Self {
        let label = if log_score.positive >= log_score.negative {
            Label::Positive
        } else {
            Label::Negative
        };
        let max = log_score.positive.max(log_score.negative);
        let e = PerLabel::from_fn(|l| (log_score[l] - max).exp());
        let z = e.positive + e.negative;
        Prediction {
            label,
            log_score,
            posterior: PerLabel::from_fn(|l| e[l] / z),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    alpha: f64,
    weighting: Weighting,
    class_log_prior: PerLabel<f64>,
    // Indexed by vocabulary position.
    cond_log_prob: PerLabel<Vec<f64>>,
    vocab: Vocabulary,
}

impl NbModel {
    pub const DEFAULT_ALPHA: f64 = 1.0;

    /// Trains on raw term counts.
    pub fn train<D, S>(
        docs: &[D],
        labels: &[Label],
        vocab: Vocabulary,
        alpha: f64,
    ) -> Result<Self, NbError>
    where
        D: AsRef<[S]>,
        S: AsRef<str>,
    {
        Self::train_weighted(docs, labels, vocab, alpha, Weighting::Counts)
    }

    pub fn train_weighted<D, S>(
        docs: &[D],
        labels: &[Label],
        vocab: Vocabulary,
        alpha: f64,
        weighting: Weighting,
    ) -> Result<Self, NbError>
    where
        D: AsRef<[S]>,
        S: AsRef<str>,
    {
        if docs.len() != labels.len() {
            return Err(NbError::LengthMismatch {
                docs: docs.len(),
                labels: labels.len(),
            });
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(NbError::InvalidAlpha(alpha));
        }
        if vocab.is_empty() {
            return Err(NbError::EmptyVocabulary);
        }
        let mut n_docs = PerLabel::<usize>::default();
        for &l in labels {
            n_docs[l] += 1;
        }
        for l in Label::ALL {
            if n_docs[l] == 0 {
                return Err(NbError::MissingClass(l));
            }
        }

        let v = vocab.len();
        let mut mass = PerLabel::from_fn(|_| vec![0.0f64; v]);
        for (doc, &label) in docs.iter().zip(labels) {
            for (i, x) in features(&vocab, weighting, doc.as_ref()) {
                mass[label][i] += x;
            }
        }

        let n = labels.len() as f64;
        let class_log_prior = PerLabel::from_fn(|l| (n_docs[l] as f64 / n).ln());
        let cond_log_prob = PerLabel::from_fn(|l| {
            let total: f64 = mass[l].iter().sum();
            let denom = total + alpha * v as f64;
            mass[l]
                .iter()
                .map(|&c| ((c + alpha) / denom).ln())
                .collect()
        });
        Ok(NbModel {
            alpha,
            weighting,
            class_log_prior,
            cond_log_prob,
            vocab,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn class_log_prior(&self, label: Label) -> f64 {
        self.class_log_prior[label]
    }

    pub fn cond_log_prob(&self, label: Label, term: &str) -> Option<f64> {
        self.vocab
            .index_of(term)
            .map(|i| self.cond_log_prob[label][i])
    }

    pub fn cond_log_probs(&self, label: Label) -> &[f64] {
        &self.cond_log_prob[label]
    }

    /// Unnormalized log posterior per label. Out-of-vocabulary tokens
    /// contribute nothing; token order does not matter.
    pub fn log_posterior<S: AsRef<str>>(&self, tokens: &[S]) -> PerLabel<f64> {
        let feats = features(&self.vocab, self.weighting, tokens);
        PerLabel::from_fn(|l| {
            let cond = &self.cond_log_prob[l];
            feats
                .iter()
                .fold(self.class_log_prior[l], |acc, &(i, x)| acc + x * cond[i])
        })
    }

    pub fn classify<S: AsRef<str>>(&self, tokens: &[S]) -> Prediction {
        Prediction::from_log_scores(self.log_posterior(tokens))
    }

    pub fn to_writer<W: Write>(&self, writer: W) -> Result<(), NbError> {
        serde_json::to_writer_pretty(writer, &ModelRecord::from(self))?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, NbError> {
        Ok(serde_json::to_string_pretty(&ModelRecord::from(self))?)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self, NbError> {
        let record: ModelRecord = serde_json::from_reader(reader)?;
        record.try_into()
    }

    pub fn from_json(json: &str) -> Result<Self, NbError> {
        let record: ModelRecord = serde_json::from_str(json)?;
        record.try_into()
    }
}

// Per-term feature values in ascending vocabulary order, so sums are
// independent of token order.
fn features<S: AsRef<str>>(
    vocab: &Vocabulary,
    weighting: Weighting,
    tokens: &[S],
) -> Vec<(usize, f64)> {
    match weighting {
        Weighting::Counts => vocab
            .term_counts(tokens)
            .into_iter()
            .map(|(i, c)| (i, c as f64))
            .collect(),
        Weighting::Tfidf => vocab.tfidf_vector(tokens).iter().collect(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelRecord {
    alpha: f64,
    #[serde(default)]
    weighting: Weighting,
    labels: [Label; 2],
    log_priors: [f64; 2],
    vocab_ref: Vocabulary,
    cond_log_prob: [Vec<f64>; 2],
}

impl From<&NbModel> for ModelRecord {
    fn from(m: &NbModel) -> Self {
        ModelRecord {
            alpha: m.alpha,
            weighting: m.weighting,
            labels: Label::ALL,
            log_priors: Label::ALL.map(|l| m.class_log_prior[l]),
            vocab_ref: m.vocab.clone(),
            cond_log_prob: Label::ALL.map(|l| m.cond_log_prob[l].clone()),
        }
    }
}

impl TryFrom<ModelRecord> for NbModel {
    type Error = NbError;

    fn try_from(rec: ModelRecord) -> Result<Self, Self::Error> {
        let invalid = |m: String| Err(NbError::InvalidModel(m));
        if !(rec.alpha > 0.0 && rec.alpha.is_finite()) {
            return Err(NbError::InvalidAlpha(rec.alpha));
        }
        if rec.labels != Label::ALL {
            return invalid("labels must be [\"positive\", \"negative\"]".into());
        }
        if rec.vocab_ref.is_empty() {
            return Err(NbError::EmptyVocabulary);
        }
        for (row, l) in rec.cond_log_prob.iter().zip(Label::ALL) {
            if row.len() != rec.vocab_ref.len() {
                return invalid(format!(
                    "{l} row has {} entries for {} terms",
                    row.len(),
                    rec.vocab_ref.len()
                ));
            }
        }
        let all_finite = rec
            .log_priors
            .iter()
            .chain(rec.cond_log_prob.iter().flatten())
            .all(|x| x.is_finite() && *x <= 0.0);
        if !all_finite {
            return invalid("log-probabilities must be finite and <= 0".into());
        }
        let [pos_row, neg_row] = rec.cond_log_prob;
        Ok(NbModel {
            alpha: rec.alpha,
            weighting: rec.weighting,
            class_log_prior: PerLabel {
                positive: rec.log_priors[0],
                negative: rec.log_priors[1],
            },
            cond_log_prob: PerLabel {
                positive: pos_row,
                negative: neg_row,
            },
            vocab: rec.vocab_ref,
        })
    }
}
