//! Acceptance checks: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use sentimin::evaluate::{metrics, CvReport, FoldPlan};
use sentimin::report::{rank_by_satisfaction, summarize_brand};
use sentimin::textprep::stem_word;
use sentimin::{ConfusionMatrix, Execution, Label, NbModel, PruneBounds, Vocabulary};
use sentimin_cli::{cmd_evaluate, cmd_train, EvaluateArgs, RunConfig, TrainArgs};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/fixtures/reviews_200.jsonl")
}

fn train_all(docs: &[Vec<String>], labels: &[Label], alpha: f64) -> NbModel {
    let vocab = Vocabulary::build(docs).unwrap().prune(&PruneBounds::all());
    NbModel::train(docs, labels, vocab, alpha).unwrap()
}

fn run_props<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
    .run(&strategy, test)
    .map_err(|e| e.to_string())
}

fn metric_arithmetic() -> Check {
    let m = metrics(&ConfusionMatrix::new(338, 26, 12, 324)).map_err(|e| e.to_string())?;
    let expected = [
        ("accuracy", m.accuracy, 0.9457),
        ("precision_pos", m.precision_pos, 0.9286),
        ("precision_neg", m.precision_neg, 0.9643),
        ("recall_pos", m.recall_pos, 0.9657),
        ("recall_neg", m.recall_neg, 0.9257),
        ("macro_precision", m.macro_precision, 0.9464),
        ("macro_recall", m.macro_recall, 0.9457),
    ];
    for (name, got, want) in expected {
        let got = got.ok_or(format!("{name} undefined"))?;
        ensure(
            (got - want).abs() <= 1e-4,
            format!("{name} = {got}, expected {want}"),
        )?;
    }
    let kappa = m.kappa.ok_or("kappa undefined")?;
    ensure((kappa - 0.8914).abs() <= 5e-4, format!("kappa = {kappa}"))?;
    ensure(
        (kappa - 0.891).abs() <= 5e-4,
        format!("kappa = {kappa} vs 0.891"),
    )?;
    Ok(format!(
        "accuracy {:.4}, kappa {kappa:.4}",
        m.accuracy.unwrap()
    ))
}

fn brand_table() -> Check {
    let mut preds = Vec::new();
    for (brand, p, n) in [
        ("Bukalapak", 348, 410),
        ("Tokopedia", 350, 408),
        ("Elevenia", 163, 189),
    ] {
        preds.extend((0..p).map(|_| (Some(brand), Label::Positive)));
        preds.extend((0..n).map(|_| (Some(brand), Label::Negative)));
    }
    let report = summarize_brand(preds, &BTreeMap::new());
    let shares: BTreeMap<_, _> = report
        .summaries
        .iter()
        .map(|s| {
            (
                s.brand.as_str(),
                (s.positive_display(), s.negative_display()),
            )
        })
        .collect();
    for (brand, pos, neg) in [
        ("Bukalapak", "45.9", "54.1"),
        ("Tokopedia", "46.2", "53.8"),
        ("Elevenia", "46.3", "53.7"),
    ] {
        let got = shares.get(brand).ok_or(format!("{brand} missing"))?;
        ensure(got.0 == pos && got.1 == neg, format!("{brand}: {got:?}"))?;
    }
    let order: Vec<_> = rank_by_satisfaction(&report.summaries)
        .into_iter()
        .map(|s| s.brand)
        .collect();
    ensure(
        order == ["Elevenia", "Tokopedia", "Bukalapak"],
        format!("order {order:?}"),
    )?;
    Ok(order.join(" > "))
}

fn evaluate_to_bytes(
    cfg: &RunConfig,
    exec: Execution,
    dir: &Path,
    name: &str,
) -> Result<(CvReport, Vec<u8>), String> {
    let out = dir.join(name);
    let args = EvaluateArgs {
        corpus: fixture(),
        output: Some(out.clone()),
        trace: None,
    };
    let report = cmd_evaluate(&args, cfg, exec, &mut Vec::new(), &mut Vec::new())
        .map_err(|e| e.to_string())?;
    let bytes = std::fs::read(&out).map_err(|e| e.to_string())?;
    Ok((report, bytes))
}

fn fixture_cross_validation() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = RunConfig::default();
    let start = Instant::now();
    let (report, first) = evaluate_to_bytes(&cfg, Execution::default(), dir.path(), "a.json")?;
    let elapsed = start.elapsed();
    let (_, second) = evaluate_to_bytes(&cfg, Execution::default(), dir.path(), "b.json")?;
    let total = report.aggregate_matrix.total();
    let accuracy = report.metrics.accuracy.unwrap_or(0.0);
    ensure(report.k == 10, "k != 10")?;
    ensure(total == 200, format!("matrix total {total}"))?;
    ensure(accuracy >= 0.85, format!("accuracy {accuracy}"))?;
    ensure(first == second, "reports differ between runs")?;
    ensure(elapsed.as_secs_f64() < 5.0, format!("took {elapsed:?}"))?;
    Ok(format!(
        "total {total}, accuracy {accuracy:.4}, {:.0} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn oracle_equivalence() -> Check {
    let nb = (
        common::small_corpus(),
        common::doc_strategy(8),
        prop_oneof![Just(1.0), 0.05f64..5.0],
    );
    run_props(500, nb, |((docs, labels), query, alpha)| {
        let got = train_all(&docs, &labels, alpha).log_posterior(&query);
        let want = common::nb_log_scores(&docs, &labels, alpha, &query);
        prop_assert!(common::rel_err(got.positive, want[0]) <= 1e-9);
        prop_assert!(common::rel_err(got.negative, want[1]) <= 1e-9);
        Ok(())
    })?;
    let tf = (common::small_corpus(), any::<prop::sample::Index>());
    run_props(500, tf, |((docs, _), which)| {
        let vocab = Vocabulary::build(&docs)
            .unwrap()
            .prune(&PruneBounds::default());
        let doc = &docs[which.index(docs.len())];
        let got = vocab.tfidf_vector(doc).to_term_map(&vocab);
        let want: BTreeMap<String, f64> = common::tfidf(&docs, vocab.terms(), doc)
            .into_iter()
            .collect();
        prop_assert_eq!(got, want);
        Ok(())
    })?;
    Ok("500 NB cases within 1e-9, 500 TF-IDF cases exact".into())
}

fn invariant_suites() -> Check {
    run_props(
        300,
        (common::small_corpus(), 0.01f64..10.0),
        |((docs, labels), alpha)| {
            let model = train_all(&docs, &labels, alpha);
            for l in Label::ALL {
                let z: f64 = model.cond_log_probs(l).iter().map(|x| x.exp()).sum();
                prop_assert!((z - 1.0).abs() <= 1e-9);
            }
            Ok(())
        },
    )
    .map_err(|e| format!("normalization: {e}"))?;

    let docs: Vec<Vec<String>> = (0..700).map(|i| vec![format!("w{}", i % 5)]).collect();
    let labels: Vec<Label> = (0..700)
        .map(|i| {
            if i % 2 == 0 {
                Label::Positive
            } else {
                Label::Negative
            }
        })
        .collect();
    let model = train_all(&docs, &labels, 1.0);
    for l in Label::ALL {
        ensure(
            model.class_log_prior(l) == 0.5f64.ln(),
            format!("{l} prior {}", model.class_log_prior(l)),
        )?;
    }

    let b = PruneBounds::default();
    ensure(
        b.admits(99, 10_000)
            && b.admits(9_000, 10_000)
            && !b.admits(98, 10_000)
            && !b.admits(9_001, 10_000),
        "pruning boundaries not inclusive",
    )?;

    let lexicon = include_str!("../../core/data/fixtures/lexicon.txt");
    let mut n_words = 0;
    for w in lexicon
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        n_words += 1;
        let once = stem_word(w);
        ensure(
            stem_word(once) == once,
            format!("stem not idempotent on {w}"),
        )?;
    }

    let folds = (2usize..60, 2usize..60, 2usize..10, any::<u64>());
    run_props(300, folds, |(np, nn, k, seed)| {
        prop_assume!(np >= k && nn >= k);
        let labels: Vec<Label> = (0..np + nn)
            .map(|i| {
                if i < np {
                    Label::Positive
                } else {
                    Label::Negative
                }
            })
            .collect();
        let plan = FoldPlan::stratified(&labels, k, seed).unwrap();
        for l in Label::ALL {
            let sizes: Vec<usize> = (0..k)
                .map(|f| {
                    (0..labels.len())
                        .filter(|&i| labels[i] == l && plan.assignments[i] == f)
                        .count()
                })
                .collect();
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
        Ok(())
    })
    .map_err(|e| format!("stratification: {e}"))?;

    run_props(1000, common::matrix_strategy(1000), |cm| {
        match (metrics(&cm).unwrap().kappa, common::kappa_closed_form(&cm)) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-12),
            (a, b) => prop_assert_eq!(a, b),
        }
        Ok(())
    })
    .map_err(|e| format!("kappa identity: {e}"))?;

    Ok(format!(
        "normalization, priors, pruning, stemmer ({n_words} words), folds, kappa"
    ))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = RunConfig::default();
    let (_, seq) = evaluate_to_bytes(&cfg, Execution::Sequential, dir.path(), "seq.json")?;
    let (_, par) = evaluate_to_bytes(&cfg, Execution::Parallel, dir.path(), "par.json")?;
    ensure(
        seq == par,
        "evaluate: sequential and parallel reports differ",
    )?;

    let mut models = Vec::new();
    for (i, exec) in [
        Execution::Sequential,
        Execution::Parallel,
        Execution::Parallel,
    ]
    .into_iter()
    .enumerate()
    {
        let out = dir.path().join(format!("model{i}.json"));
        let args = TrainArgs {
            corpus: fixture(),
            output: out.clone(),
            trace: None,
        };
        cmd_train(&args, &cfg, exec, &mut Vec::new(), &mut Vec::new())
            .map_err(|e| e.to_string())?;
        models.push(std::fs::read(&out).map_err(|e| e.to_string())?);
    }
    ensure(
        models.windows(2).all(|w| w[0] == w[1]),
        "train: model files differ",
    )?;
    Ok(format!(
        "evaluate report {} bytes, model {} bytes",
        seq.len(),
        models[0].len()
    ))
}

fn main() {
    let criteria: [Criterion; 6] = [
        (
            "metric arithmetic on the reference confusion matrix",
            metric_arithmetic,
        ),
        ("brand comparison table and ranking", brand_table),
        (
            "10-fold CV on the 200-document fixture",
            fixture_cross_validation,
        ),
        ("oracle equivalence", oracle_equivalence),
        ("invariant suites", invariant_suites),
        ("determinism across runs and execution modes", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
