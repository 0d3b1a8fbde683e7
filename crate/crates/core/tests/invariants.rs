//! Structural properties of the model, pruning, folds and stemmer.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use sentimin::evaluate::{cross_validate, CvConfig, FoldPlan};
use sentimin::textprep::{self, stem_word, StopwordList};
use sentimin::{Execution, Label, NbModel, PrepConfig, PruneBounds, Token, Vocabulary};

fn train_all(docs: &[Vec<String>], labels: &[Label], alpha: f64) -> NbModel {
    let vocab = Vocabulary::build(docs).unwrap().prune(&PruneBounds::all());
    NbModel::train(docs, labels, vocab, alpha).unwrap()
}

fn lexicon() -> Vec<String> {
    include_str!("../data/fixtures/lexicon.txt")
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn conditionals_normalize((docs, labels) in common::small_corpus(), alpha in 0.01f64..10.0) {
        let model = train_all(&docs, &labels, alpha);
        for l in Label::ALL {
            let z: f64 = model.cond_log_probs(l).iter().map(|lp| lp.exp()).sum();
            prop_assert!((z - 1.0).abs() <= 1e-9, "{z}");
        }
        let priors: f64 = Label::ALL.iter().map(|&l| model.class_log_prior(l).exp()).sum();
        prop_assert!((priors - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn posterior_is_a_distribution((docs, labels) in common::small_corpus(), q in common::doc_strategy(10)) {
        let p = train_all(&docs, &labels, 1.0).classify(&q);
        prop_assert!((p.posterior.positive + p.posterior.negative - 1.0).abs() <= 1e-12);
        let best = if p.log_score.positive >= p.log_score.negative { Label::Positive } else { Label::Negative };
        prop_assert_eq!(p.label, best);
    }

    #[test]
    fn shifting_scores_keeps_argmax(
        pos in -500.0f64..0.0, neg in -500.0f64..0.0, shift in -1000.0f64..1000.0,
    ) {
        use sentimin::nbayes::PerLabel;
        let a = sentimin::Prediction::from_log_scores(PerLabel { positive: pos, negative: neg });
        let b = sentimin::Prediction::from_log_scores(PerLabel { positive: pos + shift, negative: neg + shift });
        if (pos - neg).abs() > 1e-9 {
            prop_assert_eq!(a.label, b.label);
        }
    }

    #[test]
    fn token_order_is_irrelevant(
        (docs, labels) in common::small_corpus(),
        q in common::doc_strategy(10),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let model = train_all(&docs, &labels, 1.0);
        let mut shuffled = q.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(model.log_posterior(&q), model.log_posterior(&shuffled));
    }

    #[test]
    fn duplicating_corpus_with_doubled_alpha_keeps_parameters(
        (docs, labels) in common::small_corpus(),
        alpha in 0.1f64..4.0,
    ) {
        let once = train_all(&docs, &labels, alpha);
        let docs2: Vec<_> = docs.iter().chain(&docs).cloned().collect();
        let labels2: Vec<_> = labels.iter().chain(&labels).copied().collect();
        let twice = train_all(&docs2, &labels2, 2.0 * alpha);
        for l in Label::ALL {
            prop_assert!((once.class_log_prior(l) - twice.class_log_prior(l)).abs() <= 1e-12);
            for (a, b) in once.cond_log_probs(l).iter().zip(twice.cond_log_probs(l)) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn folds_are_stratified(
        n_pos in 2usize..60, n_neg in 2usize..60, k in 2usize..10, seed in any::<u64>(),
    ) {
        prop_assume!(n_pos >= k && n_neg >= k);
        let labels: Vec<Label> = (0..n_pos).map(|_| Label::Positive)
            .chain((0..n_neg).map(|_| Label::Negative)).collect();
        let plan = FoldPlan::stratified(&labels, k, seed).unwrap();
        for l in Label::ALL {
            let sizes: Vec<usize> = (0..k)
                .map(|f| (0..labels.len()).filter(|&i| labels[i] == l && plan.assignments[i] == f).count())
                .collect();
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
        let total: usize = (0..k).map(|f| plan.fold_size(f)).sum();
        prop_assert_eq!(total, labels.len());
    }
}

#[test]
fn balanced_split_has_equal_priors() {
    let docs: Vec<Vec<String>> = (0..700).map(|i| vec![format!("t{}", i % 7)]).collect();
    let labels: Vec<Label> = (0..700)
        .map(|i| {
            if i < 350 {
                Label::Positive
            } else {
                Label::Negative
            }
        })
        .collect();
    let model = train_all(&docs, &labels, 1.0);
    assert_eq!(model.class_log_prior(Label::Positive), 0.5f64.ln());
    assert_eq!(model.class_log_prior(Label::Negative), 0.5f64.ln());
}

#[test]
fn pruning_window_is_inclusive() {
    // n = 10000: df 99 is exactly 0.0099, df 9000 exactly 0.90.
    let n = 10_000;
    let bounds = PruneBounds::default();
    assert!(bounds.admits(99, n));
    assert!(!bounds.admits(98, n));
    assert!(bounds.admits(9000, n));
    assert!(!bounds.admits(9001, n));

    // The same through an actual vocabulary.
    let docs: Vec<Vec<&str>> = (0..n)
        .map(|i| {
            let mut d = vec!["common"];
            if i < 99 {
                d.push("edge_lo");
            }
            if i < 98 {
                d.push("below_lo");
            }
            if i < 9000 {
                d.push("edge_hi");
            }
            if i < 9001 {
                d.push("above_hi");
            }
            d
        })
        .collect();
    let vocab = Vocabulary::build(&docs).unwrap().prune(&bounds);
    let kept: BTreeSet<&str> = vocab.terms().iter().map(String::as_str).collect();
    assert_eq!(kept, BTreeSet::from(["edge_hi", "edge_lo"]));
}

#[test]
fn stemmer_reaches_fixed_point_on_lexicon() {
    let words = lexicon();
    assert!(words.len() > 500);
    for w in &words {
        let once = stem_word(w);
        assert_eq!(stem_word(once), once, "{w}");
    }
}

#[test]
fn preprocessing_is_idempotent_on_lexicon() {
    let cfg = PrepConfig::new(StopwordList::default_indonesian());
    let text = lexicon().join(" ");
    let once: Vec<Token> = textprep::preprocess(&text, &cfg);
    let rejoined = once.iter().map(Token::as_str).collect::<Vec<_>>().join(" ");
    assert_eq!(textprep::preprocess(&rejoined, &cfg), once);
}

#[test]
fn cross_validation_is_execution_independent() {
    let corpus = sentimin::synthetic::review_corpus(60, 11);
    let cfg = PrepConfig::new(StopwordList::default_indonesian());
    let texts: Vec<&str> = corpus.iter().map(|d| d.text.as_str()).collect();
    let docs = textprep::preprocess_batch(&texts, &cfg, Execution::Sequential);
    assert_eq!(
        docs,
        textprep::preprocess_batch(&texts, &cfg, Execution::Parallel)
    );
    let labels: Vec<Label> = corpus.iter().map(|d| d.label).collect();
    let run = |exec| cross_validate(&docs, &labels, 10, 5, &CvConfig::default(), exec).unwrap();
    let (a, b) = (run(Execution::Sequential), run(Execution::Parallel));
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    assert_eq!(a.aggregate_matrix.total(), 120);
}
