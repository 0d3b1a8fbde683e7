//! Vocabulary, document-frequency pruning and TF-IDF weighting.
//!
//! Document frequency counts documents, not occurrences. IDF is the natural
//! log `ln(n_docs / df)` with no smoothing; in-vocabulary terms always have
//! `df >= 1`. TF is the raw in-document count.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("cannot build a vocabulary from zero documents")]
    EmptyCorpus,
    #[error("term `{0}` is not in the vocabulary")]
    UnknownTerm(String),
    #[error("invalid prune bounds: need 0 <= min ({min}) <= max ({max}) <= 1")]
    InvalidBounds { min: f64, max: f64 },
    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),
}

/// Inclusive document-frequency ratio window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PruneBounds {
    min_df_ratio: f64,
    max_df_ratio: f64,
}

impl PruneBounds {
    pub const DEFAULT_MIN: f64 = 0.0099;
    pub const DEFAULT_MAX: f64 = 0.90;

    pub fn new(min_df_ratio: f64, max_df_ratio: f64) -> Result<Self, FeatureError> {
        let ok = (0.0..=1.0).contains(&min_df_ratio)
            && (0.0..=1.0).contains(&max_df_ratio)
            && min_df_ratio <= max_df_ratio;
        if !ok {
            return Err(FeatureError::InvalidBounds {
                min: min_df_ratio,
                max: max_df_ratio,
            });
        }
        Ok(PruneBounds {
            min_df_ratio,
            max_df_ratio,
        })
    }

    /// Accepts every term.
    pub fn all() -> Self {
        PruneBounds {
            min_df_ratio: 0.0,
            max_df_ratio: 1.0,
        }
    }

    pub fn min_df_ratio(&self) -> f64 {
        self.min_df_ratio
    }

    pub fn max_df_ratio(&self) -> f64 {
        self.max_df_ratio
    }

    pub fn admits(&self, df: usize, n_docs: usize) -> bool {
        let ratio = df as f64 / n_docs as f64;
        self.min_df_ratio <= ratio && ratio <= self.max_df_ratio
    }
}

impl Default for PruneBounds {
    fn default() -> Self {
        PruneBounds {
            min_df_ratio: Self::DEFAULT_MIN,
            max_df_ratio: Self::DEFAULT_MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TermRecord {
    term: String,
    df: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VocabularyRecord {
    n_docs: usize,
    terms: Vec<TermRecord>,
}

/// Lexicographically ordered terms with their document frequencies.
///
/// Serializes as `{n_docs, terms: [{term, df}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VocabularyRecord", into = "VocabularyRecord")]
pub struct Vocabulary {
    terms: Vec<String>,
    df: Vec<usize>,
    n_docs: usize,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    fn from_parts(terms: Vec<String>, df: Vec<usize>, n_docs: usize) -> Self {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Vocabulary {
            terms,
            df,
            n_docs,
            index,
        }
    }

    /// Collects every distinct term and counts the documents containing it.
    pub fn build<D, S>(docs: &[D]) -> Result<Self, FeatureError>
    where
        D: AsRef<[S]>,
        S: AsRef<str>,
    {
        if docs.is_empty() {
            return Err(FeatureError::EmptyCorpus);
        }
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in docs {
            let distinct: BTreeSet<&str> = doc.as_ref().iter().map(AsRef::as_ref).collect();
            for term in distinct {
                *df.entry(term).or_default() += 1;
            }
        }
        let (terms, counts) = df.into_iter().map(|(t, c)| (t.to_string(), c)).unzip();
        Ok(Self::from_parts(terms, counts, docs.len()))
    }

    /// Keeps terms whose df ratio lies inside `bounds` (inclusive).
    pub fn prune(&self, bounds: &PruneBounds) -> Vocabulary {
        let (terms, df) = self
            .terms
            .iter()
            .zip(&self.df)
            .filter(|(_, &df)| bounds.admits(df, self.n_docs))
            .map(|(t, &df)| (t.clone(), df))
            .unzip();
        Self::from_parts(terms, df, self.n_docs)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(term)
    }

    pub fn df(&self, term: &str) -> Option<usize> {
        self.index_of(term).map(|i| self.df[i])
    }

    pub fn df_at(&self, index: usize) -> usize {
        self.df[index]
    }

    /// `ln(n_docs / df)`.
    pub fn idf(&self, term: &str) -> Result<f64, FeatureError> {
        self.index_of(term)
            .map(|i| self.idf_at(i))
            .ok_or_else(|| FeatureError::UnknownTerm(term.to_string()))
    }

    pub fn idf_at(&self, index: usize) -> f64 {
        (self.n_docs as f64 / self.df[index] as f64).ln()
    }

    /// In-vocabulary term counts for one document, keyed by term index.
    pub fn term_counts<S: AsRef<str>>(&self, tokens: &[S]) -> BTreeMap<usize, usize> {
        let mut counts = BTreeMap::new();
        for t in tokens {
            if let Some(i) = self.index_of(t.as_ref()) {
                *counts.entry(i).or_default() += 1;
            }
        }
        counts
    }

    /// TF-IDF vector of one document. Out-of-vocabulary tokens are ignored
    /// and zero weights are omitted.
    pub fn tfidf_vector<S: AsRef<str>>(&self, tokens: &[S]) -> DocVector {
        let weights = self
            .term_counts(tokens)
            .into_iter()
            .map(|(i, count)| (i, count as f64 * self.idf_at(i)))
            .filter(|&(_, w)| w > 0.0)
            .collect();
        DocVector { weights }
    }
}

impl TryFrom<VocabularyRecord> for Vocabulary {
    type Error = FeatureError;

    fn try_from(rec: VocabularyRecord) -> Result<Self, Self::Error> {
        let bad = |m: String| Err(FeatureError::InvalidVocabulary(m));
        for pair in rec.terms.windows(2) {
            if pair[0].term >= pair[1].term {
                return bad(format!(
                    "terms not strictly ascending at `{}`",
                    pair[1].term
                ));
            }
        }
        for t in &rec.terms {
            if t.df == 0 || t.df > rec.n_docs {
                return bad(format!(
                    "df({}) = {} outside 1..={}",
                    t.term, t.df, rec.n_docs
                ));
            }
        }
        let (terms, df) = rec.terms.into_iter().map(|t| (t.term, t.df)).unzip();
        Ok(Vocabulary::from_parts(terms, df, rec.n_docs))
    }
}

impl From<Vocabulary> for VocabularyRecord {
    fn from(v: Vocabulary) -> Self {
        VocabularyRecord {
            n_docs: v.n_docs,
            terms: v
                .terms
                .into_iter()
                .zip(v.df)
                .map(|(term, df)| TermRecord { term, df })
                .collect(),
        }
    }
}

/// Sparse TF-IDF weights keyed by vocabulary index. All weights are finite
/// and strictly positive.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DocVector {
    weights: BTreeMap<usize, f64>,
}

impl DocVector {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<f64> {
        self.weights.get(&index).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().map(|(&i, &w)| (i, w))
    }

    /// Weights keyed by term text.
    pub fn to_term_map(&self, vocab: &Vocabulary) -> BTreeMap<String, f64> {
        self.iter()
            .map(|(i, w)| (vocab.terms()[i].clone(), w))
            .collect()
    }
}
