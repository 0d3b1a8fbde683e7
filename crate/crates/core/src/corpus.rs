//! Corpus ingestion and curation.
//!
//! Posts arrive as line-delimited JSON exports. Malformed lines are recorded
//! in an [`IngestReport`] rather than silently dropped; a repeated `id` is a
//! hard error.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::textprep;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("duplicate document id `{0}`")]
    DuplicateId(String),
    #[error("keyword list is empty")]
    EmptyKeywordList,
    #[error("not enough {label} documents: have {have}, need {need}")]
    InsufficientClassCount {
        label: Label,
        have: usize,
        need: usize,
    },
    #[error("label file {}: {message}", path.display())]
    LabelFile { path: PathBuf, message: String },
}

impl CorpusError {
    fn io(path: &Path, source: io::Error) -> Self {
        if source.kind() == io::ErrorKind::NotFound {
            CorpusError::FileNotFound(path.to_path_buf())
        } else {
            CorpusError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    }
}

/// Binary sentiment label. There is no neutral class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    /// Fixed label order; also the tie-break order for classification.
    pub const ALL: [Label; 2] = [Label::Positive, Label::Negative];

    pub fn index(self) -> usize {
        match self {
            Label::Positive => 0,
            Label::Negative => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown label `{0}` (expected positive or negative)")]
pub struct ParseLabelError(pub String);

impl FromStr for Label {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "positive" => Ok(Label::Positive),
            "negative" => Ok(Label::Negative),
            _ => Err(ParseLabelError(s.to_string())),
        }
    }
}

impl TryFrom<String> for Label {
    type Error = ParseLabelError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<Label> for String {
    fn from(label: Label) -> Self {
        label.as_str().to_string()
    }
}

/// Anything that can live in a [`Corpus`].
pub trait Document {
    fn id(&self) -> &str;
    fn text(&self) -> &str;
}

/// One exported social-media message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawPost {
    pub id: String,
    pub text: String,
    #[serde(default)]
    pub author: String,
    #[serde(default)]
    pub timestamp: String,
    #[serde(default)]
    pub matched_keyword: String,
}

impl Document for RawPost {
    fn id(&self) -> &str {
        &self.id
    }
    fn text(&self) -> &str {
        &self.text
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledDocument {
    pub id: String,
    pub text: String,
    pub label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brand: Option<String>,
}

impl Document for LabeledDocument {
    fn id(&self) -> &str {
        &self.id
    }
    fn text(&self) -> &str {
        &self.text
    }
}

/// A document awaiting classification. `brand` falls back to the brand
/// implied by `matched_keyword` when absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnlabeledDocument {
    pub id: String,
    pub text: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brand: Option<String>,
}

impl<'de> Deserialize<'de> for UnlabeledDocument {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            id: String,
            text: String,
            #[serde(default)]
            brand: Option<String>,
            #[serde(default)]
            matched_keyword: Option<String>,
        }
        let wire = Wire::deserialize(deserializer)?;
        let brand = wire
            .brand
            .filter(|b| !b.trim().is_empty())
            .or_else(|| wire.matched_keyword.as_deref().and_then(brand_of_keyword));
        Ok(UnlabeledDocument {
            id: wire.id,
            text: wire.text,
            brand,
        })
    }
}

impl Document for UnlabeledDocument {
    fn id(&self) -> &str {
        &self.id
    }
    fn text(&self) -> &str {
        &self.text
    }
}

/// Maps a search keyword to the brand it tracks: `bukalapak_care` and
/// `tokopediacare` both name their brand's customer-care account.
pub fn brand_of_keyword(keyword: &str) -> Option<String> {
    let k = keyword.trim().to_lowercase();
    let k = k.trim_start_matches('@');
    let base = k
        .strip_suffix("_care")
        .or_else(|| k.strip_suffix("care"))
        .unwrap_or(k);
    if base.is_empty() {
        None
    } else {
        Some(base.to_string())
    }
}

/// Ordered, id-unique document collection.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus<T> {
    documents: Vec<T>,
    provenance: String,
}

impl<T: Document> Corpus<T> {
    pub fn new(documents: Vec<T>, provenance: impl Into<String>) -> Result<Self, CorpusError> {
        let mut seen = HashSet::with_capacity(documents.len());
        for doc in &documents {
            if !seen.insert(doc.id()) {
                return Err(CorpusError::DuplicateId(doc.id().to_string()));
            }
        }
        Ok(Corpus {
            documents,
            provenance: provenance.into(),
        })
    }

    pub fn empty(provenance: impl Into<String>) -> Self {
        Corpus {
            documents: Vec::new(),
            provenance: provenance.into(),
        }
    }

    // Callers guarantee the ids are still unique (subsets of a valid corpus).
    fn from_subset(documents: Vec<T>, provenance: String) -> Self {
        Corpus {
            documents,
            provenance,
        }
    }

    pub fn documents(&self) -> &[T] {
        &self.documents
    }

    pub fn into_documents(self) -> Vec<T> {
        self.documents
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.documents.iter()
    }

    /// Keeps the first occurrence of each duplicate group. Two texts are
    /// duplicates when they agree after case folding and whitespace
    /// collapsing. Returns the de-duplicated corpus and the number removed.
    pub fn deduplicate(self) -> (Self, usize) {
        let before = self.documents.len();
        let mut seen = HashSet::with_capacity(before);
        let documents: Vec<T> = self
            .documents
            .into_iter()
            .filter(|doc| seen.insert(duplicate_key(doc.text())))
            .collect();
        let removed = before - documents.len();
        (Corpus::from_subset(documents, self.provenance), removed)
    }
}

impl<T: Document + Serialize> Corpus<T> {
    /// Writes one JSON record per line, in corpus order.
    pub fn write_jsonl<W: Write>(&self, mut writer: W) -> io::Result<()> {
        for doc in &self.documents {
            serde_json::to_writer(&mut writer, doc)?;
            writer.write_all(b"\n")?;
        }
        writer.flush()
    }
}

impl<'a, T> IntoIterator for &'a Corpus<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;

    fn into_iter(self) -> Self::IntoIter {
        self.documents.iter()
    }
}

fn duplicate_key(text: &str) -> String {
    textprep::case_fold(text)
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MalformedLine {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    /// Non-blank lines read.
    pub read: usize,
    pub kept: usize,
    pub malformed: Vec<MalformedLine>,
    pub duplicates_removed: usize,
}

/// Parses line-delimited JSON records. Blank lines are skipped; lines that
/// fail to parse, lack an id, or carry a blank text are reported by their
/// 1-based line number.
pub fn read_jsonl<T, R>(
    reader: R,
    provenance: &str,
) -> Result<(Corpus<T>, IngestReport), CorpusError>
where
    T: Document + DeserializeOwned,
    R: BufRead,
{
    let mut report = IngestReport::default();
    let mut documents = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CorpusError::io(Path::new(provenance), e))?;
        if line.trim().is_empty() {
            continue;
        }
        report.read += 1;
        let line_no = idx + 1;
        let reason = match serde_json::from_str::<T>(&line) {
            Ok(doc) if doc.id().is_empty() => "empty id".to_string(),
            Ok(doc) if doc.text().trim().is_empty() => "empty text".to_string(),
            Ok(doc) => {
                documents.push(doc);
                continue;
            }
            Err(e) => e.to_string(),
        };
        report.malformed.push(MalformedLine {
            source: None,
            line: line_no,
            reason,
        });
    }
    report.kept = documents.len();
    let corpus = Corpus::new(documents, provenance)?;
    Ok((corpus, report))
}

pub fn ingest_file<T>(path: &Path) -> Result<(Corpus<T>, IngestReport), CorpusError>
where
    T: Document + DeserializeOwned,
{
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    read_jsonl(BufReader::new(file), &path.display().to_string())
}

/// Reads a JSONL dump of raw posts.
pub fn ingest_jsonl(path: &Path) -> Result<(Corpus<RawPost>, IngestReport), CorpusError> {
    ingest_file(path)
}

/// Reads a JSONL file of `{id, text, label, brand?}` records.
pub fn ingest_labeled_jsonl(
    path: &Path,
) -> Result<(Corpus<LabeledDocument>, IngestReport), CorpusError> {
    ingest_file(path)
}

/// Ingests several dumps and merges them in lexicographic path order,
/// regardless of the order given or the order files finish parsing.
pub fn ingest_many<T, P>(
    paths: &[P],
    exec: Execution,
) -> Result<(Corpus<T>, IngestReport), CorpusError>
where
    T: Document + DeserializeOwned + Send,
    P: AsRef<Path> + Sync,
{
    let mut sorted: Vec<&Path> = paths.iter().map(AsRef::as_ref).collect();
    sorted.sort();
    let parsed = exec.map(&sorted, |p| ingest_file::<T>(p));

    let mut documents = Vec::new();
    let mut report = IngestReport::default();
    for (path, result) in sorted.iter().zip(parsed) {
        let (corpus, part) = result?;
        report.read += part.read;
        report
            .malformed
            .extend(part.malformed.into_iter().map(|m| MalformedLine {
                source: Some(path.display().to_string()),
                ..m
            }));
        documents.extend(corpus.into_documents());
    }
    report.kept = documents.len();
    let provenance = sorted
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join(", ");
    Ok((Corpus::new(documents, provenance)?, report))
}

impl Corpus<RawPost> {
    /// Keeps posts whose text or matched keyword contains at least one
    /// keyword (case-insensitive substring). Each kept post records the
    /// first keyword, in list order, that matched.
    pub fn filter_by_keywords<S: AsRef<str>>(self, keywords: &[S]) -> Result<Self, CorpusError> {
        let needles: Vec<(String, &str)> = keywords
            .iter()
            .map(|k| k.as_ref().trim())
            .filter(|k| !k.is_empty())
            .map(|k| (textprep::case_fold(k), k))
            .collect();
        if needles.is_empty() {
            return Err(CorpusError::EmptyKeywordList);
        }
        let documents = self
            .documents
            .into_iter()
            .filter_map(|mut post| {
                let text = textprep::case_fold(&post.text);
                let kw = textprep::case_fold(&post.matched_keyword);
                let hit = needles.iter().find(|(needle, _)| {
                    text.contains(needle.as_str()) || kw.contains(needle.as_str())
                })?;
                post.matched_keyword = hit.1.to_string();
                Some(post)
            })
            .collect();
        Ok(Corpus::from_subset(documents, self.provenance))
    }

    /// Joins posts with a label table. Posts without a label are returned
    /// separately by id. The brand comes from the matched keyword.
    pub fn attach_labels(
        self,
        labels: &HashMap<String, Label>,
    ) -> (Corpus<LabeledDocument>, Vec<String>) {
        let mut unlabeled = Vec::new();
        let mut documents = Vec::new();
        for post in self.documents {
            match labels.get(&post.id) {
                Some(&label) => documents.push(LabeledDocument {
                    brand: brand_of_keyword(&post.matched_keyword),
                    id: post.id,
                    text: post.text,
                    label,
                }),
                None => unlabeled.push(post.id),
            }
        }
        (Corpus::from_subset(documents, self.provenance), unlabeled)
    }
}

/// Reads a CSV label file with columns `id,label`.
pub fn read_label_csv(path: &Path) -> Result<HashMap<String, Label>, CorpusError> {
    #[derive(Deserialize)]
    struct Row {
        id: String,
        label: String,
    }
    let label_err = |message: String| CorpusError::LabelFile {
        path: path.to_path_buf(),
        message,
    };
    let file = File::open(path).map_err(|e| CorpusError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut labels = HashMap::new();
    for (idx, row) in reader.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| label_err(e.to_string()))?;
        let label: Label = row
            .label
            .parse()
            .map_err(|e: ParseLabelError| label_err(format!("row {}: {e}", idx + 2)))?;
        if labels.insert(row.id.clone(), label).is_some() {
            return Err(CorpusError::DuplicateId(row.id));
        }
    }
    Ok(labels)
}

impl Corpus<LabeledDocument> {
    pub fn labels(&self) -> Vec<Label> {
        self.documents.iter().map(|d| d.label).collect()
    }

    pub fn count_label(&self, label: Label) -> usize {
        self.documents.iter().filter(|d| d.label == label).count()
    }

    /// Samples exactly `n_per_class` documents of each label, without
    /// replacement, into the training set; the rest form the test set.
    /// Both sides keep corpus order. The same seed gives the same split.
    pub fn split_train_test(
        self,
        n_per_class: usize,
        seed: u64,
    ) -> Result<(Self, Self), CorpusError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chosen = BTreeSet::new();
        for label in Label::ALL {
            let mut idx: Vec<usize> = self
                .documents
                .iter()
                .enumerate()
                .filter(|(_, d)| d.label == label)
                .map(|(i, _)| i)
                .collect();
            if idx.len() < n_per_class {
                return Err(CorpusError::InsufficientClassCount {
                    label,
                    have: idx.len(),
                    need: n_per_class,
                });
            }
            idx.shuffle(&mut rng);
            chosen.extend(idx.into_iter().take(n_per_class));
        }
        let (mut train, mut test) = (Vec::new(), Vec::new());
        for (i, doc) in self.documents.into_iter().enumerate() {
            if chosen.contains(&i) {
                train.push(doc);
            } else {
                test.push(doc);
            }
        }
        Ok((
            Corpus::from_subset(train, format!("{} [train]", self.provenance)),
            Corpus::from_subset(test, format!("{} [test]", self.provenance)),
        ))
    }
}
