//! Subcommand bodies. Each takes explicit paths and writers so it can be
//! driven in-process by tests as well as from `main`.

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use sentimin::corpus::{self, IngestReport, UnlabeledDocument};
use sentimin::evaluate::{self, CvReport};
use sentimin::nbayes::PerLabel;
use sentimin::report::{self, BrandReport};
use sentimin::textprep::{self, PrepConfig};
use sentimin::{Corpus, Execution, Label, LabeledDocument, NbModel};
use serde::{Deserialize, Serialize};
use tempfile::NamedTempFile;

use crate::config::RunConfig;
use crate::error::CliError;

const STDOUT: &str = "<stdout>";

fn stdout_err(e: io::Error) -> CliError {
    CliError::io(Path::new(STDOUT), e)
}

/// Writes `path` through a temporary file in the same directory, so readers
/// never observe a partially written output.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        body(&mut w).map_err(|e| CliError::io(path, e))?;
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn write_json_file<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    write_atomic(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")
    })
}

/// Machine-readable output goes to `path`, or after the table on `out`.
fn emit_json<T: Serialize>(
    path: Option<&Path>,
    value: &T,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match path {
        Some(path) => write_json_file(path, value),
        None => {
            writeln!(out).map_err(stdout_err)?;
            serde_json::to_writer_pretty(&mut *out, value).map_err(|e| stdout_err(e.into()))?;
            writeln!(out).map_err(stdout_err)
        }
    }
}

fn warn_malformed(report: &IngestReport, err: &mut dyn Write) -> Result<(), CliError> {
    for m in &report.malformed {
        let src = m.source.as_deref().unwrap_or("input");
        writeln!(err, "warning: {src}:{}: skipped: {}", m.line, m.reason).map_err(stdout_err)?;
    }
    Ok(())
}

fn write_trace<'a, I>(path: &Path, docs: I, prep: &PrepConfig) -> Result<(), CliError>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    write_atomic(path, |w| {
        for (id, text) in docs {
            let mut trace = textprep::preprocess_traced(text, prep);
            trace.id = Some(id.to_string());
            serde_json::to_writer(&mut *w, &trace)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    })
}

fn load_labeled(path: &Path, err: &mut dyn Write) -> Result<Corpus<LabeledDocument>, CliError> {
    let (corpus, report) = corpus::ingest_labeled_jsonl(path)?;
    warn_malformed(&report, err)?;
    Ok(corpus)
}

// ---------------------------------------------------------------- ingest

#[derive(Debug, Clone)]
pub struct IngestArgs {
    pub inputs: Vec<PathBuf>,
    pub keywords: Vec<String>,
    /// Optional `id,label` CSV; when given the output is a labeled corpus.
    pub labels: Option<PathBuf>,
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IngestSummary {
    #[serde(flatten)]
    pub ingest: IngestReport,
    pub keyword_matches: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labeled: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub unlabeled_ids: Vec<String>,
    pub written: usize,
}

/// Reads raw dumps, deduplicates, keeps keyword matches and writes a
/// normalized JSONL corpus. The summary is printed to `out` as JSON.
pub fn cmd_ingest(
    args: &IngestArgs,
    exec: Execution,
    out: &mut dyn Write,
) -> Result<IngestSummary, CliError> {
    if args.keywords.iter().all(|k| k.trim().is_empty()) {
        return Err(corpus::CorpusError::EmptyKeywordList.into());
    }
    let (raw, mut ingest) = corpus::ingest_many::<corpus::RawPost, _>(&args.inputs, exec)?;
    let (raw, removed) = raw.deduplicate();
    ingest.duplicates_removed = removed;
    let keywords: Vec<&str> = args
        .keywords
        .iter()
        .map(|k| k.trim())
        .filter(|k| !k.is_empty())
        .collect();
    let matched = raw.filter_by_keywords(&keywords)?;
    let keyword_matches = matched.len();

    let (written, labeled, unlabeled_ids) = match &args.labels {
        None => {
            write_atomic(&args.output, |w| matched.write_jsonl(w))?;
            (keyword_matches, None, Vec::new())
        }
        Some(label_path) => {
            let table = corpus::read_label_csv(label_path)?;
            let (labeled, unlabeled) = matched.attach_labels(&table);
            write_atomic(&args.output, |w| labeled.write_jsonl(w))?;
            (labeled.len(), Some(labeled.len()), unlabeled)
        }
    };
    let summary = IngestSummary {
        ingest,
        keyword_matches,
        labeled,
        unlabeled_ids,
        written,
    };
    serde_json::to_writer_pretty(&mut *out, &summary).map_err(|e| stdout_err(e.into()))?;
    writeln!(out).map_err(stdout_err)?;
    Ok(summary)
}

// -------------------------------------------------------------- evaluate

#[derive(Debug, Clone)]
pub struct EvaluateArgs {
    pub corpus: PathBuf,
    pub output: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

/// Stratified k-fold cross-validation. Prints the confusion table to `out`
/// and the full JSON report to `--output`, or after the table.
pub fn cmd_evaluate(
    args: &EvaluateArgs,
    cfg: &RunConfig,
    exec: Execution,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<CvReport, CliError> {
    cfg.validate()?;
    let prep = cfg.prep_config()?;
    let cv = cfg.cv_config()?;
    let corpus = load_labeled(&args.corpus, err)?;
    if let Some(path) = &args.trace {
        write_trace(
            path,
            corpus.iter().map(|d| (d.id.as_str(), d.text.as_str())),
            &prep,
        )?;
    }
    let report = evaluate::cross_validate_corpus(&corpus, cfg.k, cfg.seed, &prep, &cv, exec)?;

    writeln!(
        out,
        "{}-fold cross-validation, seed {}, {} documents\n",
        report.k,
        report.seed,
        report.aggregate_matrix.total()
    )
    .map_err(stdout_err)?;
    out.write_all(evaluate::render_table(&report.aggregate_matrix, &report.metrics).as_bytes())
        .map_err(stdout_err)?;
    emit_json(args.output.as_deref(), &report, out)?;
    Ok(report)
}

// ----------------------------------------------------------------- train

#[derive(Debug, Clone)]
pub struct TrainArgs {
    pub corpus: PathBuf,
    pub output: PathBuf,
    pub trace: Option<PathBuf>,
}

/// Fits one model on the whole corpus and persists it (vocabulary
/// included) as JSON.
pub fn cmd_train(
    args: &TrainArgs,
    cfg: &RunConfig,
    exec: Execution,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<NbModel, CliError> {
    cfg.validate()?;
    let prep = cfg.prep_config()?;
    let cv = cfg.cv_config()?;
    let corpus = load_labeled(&args.corpus, err)?;
    if let Some(path) = &args.trace {
        write_trace(
            path,
            corpus.iter().map(|d| (d.id.as_str(), d.text.as_str())),
            &prep,
        )?;
    }
    let texts: Vec<&str> = corpus.iter().map(|d| d.text.as_str()).collect();
    let docs = textprep::preprocess_batch(&texts, &prep, exec);
    let model = evaluate::fit(&docs, &corpus.labels(), &cv)?;

    write_atomic(&args.output, |w| {
        model.to_writer(&mut *w).map_err(io::Error::other)?;
        w.write_all(b"\n")
    })?;
    writeln!(
        out,
        "trained on {} documents ({} positive, {} negative); {} terms in vocabulary",
        corpus.len(),
        corpus.count_label(Label::Positive),
        corpus.count_label(Label::Negative),
        model.vocab().len()
    )
    .map_err(stdout_err)?;
    Ok(model)
}

// -------------------------------------------------------------- classify

#[derive(Debug, Clone)]
pub struct ClassifyArgs {
    pub model: PathBuf,
    pub corpus: PathBuf,
    /// JSONL destination; `None` writes to `out`.
    pub output: Option<PathBuf>,
    pub trace: Option<PathBuf>,
}

/// One line of classifier output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    pub brand: Option<String>,
    pub label: Label,
    pub posterior: PerLabel<f64>,
}

pub fn load_model(path: &Path) -> Result<NbModel, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    NbModel::from_reader(BufReader::new(file)).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Labels every document of an unlabeled corpus, preserving input order.
pub fn cmd_classify(
    args: &ClassifyArgs,
    cfg: &RunConfig,
    exec: Execution,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<Vec<PredictionRecord>, CliError> {
    cfg.validate()?;
    let prep = cfg.prep_config()?;
    let model = load_model(&args.model)?;
    let (corpus, report) = corpus::ingest_file::<UnlabeledDocument>(&args.corpus)?;
    warn_malformed(&report, err)?;
    if let Some(path) = &args.trace {
        write_trace(
            path,
            corpus.iter().map(|d| (d.id.as_str(), d.text.as_str())),
            &prep,
        )?;
    }
    let texts: Vec<&str> = corpus.iter().map(|d| d.text.as_str()).collect();
    let docs = textprep::preprocess_batch(&texts, &prep, exec);
    let predictions = exec.map(&docs, |tokens| model.classify(tokens));
    let records: Vec<PredictionRecord> = corpus
        .iter()
        .zip(predictions)
        .map(|(doc, p)| PredictionRecord {
            id: doc.id.clone(),
            brand: doc.brand.clone(),
            label: p.label,
            posterior: p.posterior,
        })
        .collect();

    let emit = |w: &mut dyn Write| -> io::Result<()> {
        for r in &records {
            serde_json::to_writer(&mut *w, r)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    };
    match &args.output {
        Some(path) => write_atomic(path, emit)?,
        None => emit(out).map_err(stdout_err)?,
    }
    Ok(records)
}

// --------------------------------------------------------------- compare

#[derive(Debug, Clone)]
pub struct CompareArgs {
    pub predictions: Vec<PathBuf>,
    /// Expected number of classified documents per brand.
    pub declared: BTreeMap<String, u64>,
    pub output: Option<PathBuf>,
}

pub fn read_predictions(path: &Path) -> Result<Vec<PredictionRecord>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| CliError::Parse {
            path: path.to_path_buf(),
            message: format!("line {}: {e}", idx + 1),
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Per-brand sentiment shares, ranked by positive share. Warnings go to
/// `err`, the table to `out`, and the JSON report to `--output` or after the table.
pub fn cmd_compare(
    args: &CompareArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<BrandReport, CliError> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for path in &args.predictions {
        for r in read_predictions(path)? {
            if !seen.insert(r.id.clone()) {
                return Err(CliError::Data(format!(
                    "{}: prediction id `{}` appears more than once",
                    path.display(),
                    r.id
                )));
            }
            records.push(r);
        }
    }
    let summary = report::summarize_brand(
        records.iter().map(|r| (r.brand.as_deref(), r.label)),
        &args.declared,
    );
    let ranked = BrandReport {
        summaries: report::rank_by_satisfaction(&summary.summaries),
        warnings: summary.warnings,
    };
    for w in &ranked.warnings {
        writeln!(err, "warning: {w}").map_err(stdout_err)?;
    }
    out.write_all(report::render_table(&ranked.summaries).as_bytes())
        .map_err(stdout_err)?;
    emit_json(args.output.as_deref(), &ranked, out)?;
    Ok(ranked)
}

/// Parses `brand=count`.
pub fn parse_declared(s: &str) -> Result<(String, u64), String> {
    let (brand, n) = s
        .split_once('=')
        .ok_or_else(|| format!("expected BRAND=COUNT, got `{s}`"))?;
    let brand = brand.trim();
    if brand.is_empty() {
        return Err(format!("empty brand in `{s}`"));
    }
    let n = n
        .trim()
        .parse()
        .map_err(|e| format!("bad count in `{s}`: {e}"))?;
    Ok((brand.to_string(), n))
}
