//! Independent reference implementations, written with plain loops and no
//! shared code paths with the library.

#![allow(dead_code)]

use proptest::prelude::*;
use sentimin::{ConfusionMatrix, Label};

pub const ALPHABET: [&str; 6] = ["aa", "bb", "cc", "dd", "ee", "ff"];

/// Log-space class scores `[positive, negative]` of a multinomial Naive
/// Bayes model trained on `docs` with every observed term kept.
pub fn nb_log_scores(
    docs: &[Vec<String>],
    labels: &[Label],
    alpha: f64,
    query: &[String],
) -> [f64; 2] {
    let mut vocab: Vec<&str> = Vec::new();
    for d in docs {
        for t in d {
            if !vocab.contains(&t.as_str()) {
                vocab.push(t);
            }
        }
    }
    let classes = [Label::Positive, Label::Negative];
    let mut out = [0.0; 2];
    for (c, class) in classes.iter().enumerate() {
        let mut n_class = 0usize;
        for l in labels {
            if l == class {
                n_class += 1;
            }
        }
        let mut score = (n_class as f64 / labels.len() as f64).ln();

        let mut total = 0usize;
        for (d, l) in docs.iter().zip(labels) {
            if l == class {
                total += d.len();
            }
        }
        for q in query {
            if !vocab.contains(&q.as_str()) {
                continue;
            }
            let mut count = 0usize;
            for (d, l) in docs.iter().zip(labels) {
                if l == class {
                    for t in d {
                        if t == q {
                            count += 1;
                        }
                    }
                }
            }
            let p = (count as f64 + alpha) / (total as f64 + alpha * vocab.len() as f64);
            score += p.ln();
        }
        out[c] = score;
    }
    out
}

/// TF-IDF weights `(term, tf * ln(N / df))` of `doc` against `corpus`,
/// restricted to `terms`, zero weights omitted.
pub fn tfidf(corpus: &[Vec<String>], terms: &[String], doc: &[String]) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    for term in terms {
        let mut tf = 0usize;
        for t in doc {
            if t == term {
                tf += 1;
            }
        }
        if tf == 0 {
            continue;
        }
        let mut df = 0usize;
        for d in corpus {
            let mut present = false;
            for t in d {
                if t == term {
                    present = true;
                }
            }
            if present {
                df += 1;
            }
        }
        let w = tf as f64 * (corpus.len() as f64 / df as f64).ln();
        if w > 0.0 {
            out.push((term.clone(), w));
        }
    }
    out
}

/// Cohen's kappa for a 2x2 table in closed form.
pub fn kappa_closed_form(cm: &ConfusionMatrix) -> Option<f64> {
    let (tp, fp, fn_, tn) = (cm.tp as f64, cm.fp as f64, cm.fn_ as f64, cm.tn as f64);
    let denom = (tp + fp) * (fp + tn) + (tp + fn_) * (fn_ + tn);
    if denom == 0.0 {
        None
    } else {
        Some(2.0 * (tp * tn - fp * fn_) / denom)
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

pub fn doc_strategy(max_len: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(&ALPHABET[..]), 0..=max_len)
        .prop_map(|ts| ts.into_iter().map(String::from).collect())
}

pub fn label_strategy() -> impl Strategy<Value = Label> {
    prop_oneof![Just(Label::Positive), Just(Label::Negative)]
}

/// Up to 8 labeled documents over the 6-term alphabet, both classes present
/// and at least one token overall.
pub fn small_corpus() -> impl Strategy<Value = (Vec<Vec<String>>, Vec<Label>)> {
    prop::collection::vec((doc_strategy(6), label_strategy()), 2..=8)
        .prop_map(|pairs| pairs.into_iter().unzip::<_, _, Vec<_>, Vec<_>>())
        .prop_filter("both classes and some tokens", |(docs, labels)| {
            labels.contains(&Label::Positive)
                && labels.contains(&Label::Negative)
                && docs.iter().any(|d| !d.is_empty())
        })
}

pub fn matrix_strategy(max: u64) -> impl Strategy<Value = ConfusionMatrix> {
    (0..=max, 0..=max, 0..=max, 0..=max)
        .prop_map(|(tp, fp, fn_, tn)| ConfusionMatrix::new(tp, fp, fn_, tn))
        .prop_filter("non-empty", |cm| cm.total() > 0)
}
