use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{stem::stem_word, Token};

const DEFAULT_LIST: &str = include_str!("../../data/stopwords_id.txt");

#[derive(Debug, Error)]
pub enum StopwordError {
    #[error("cannot read stopword file {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: `{word}` is not a lowercase alphanumeric token")]
    InvalidEntry { line: usize, word: String },
}

/// Set of lowercase words dropped after stemming.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StopwordList {
    words: BTreeSet<String>,
}

impl StopwordList {
    /// Bundled Indonesian list. Negations and evaluative words are absent.
    pub fn default_indonesian() -> Self {
        Self::parse(DEFAULT_LIST).expect("bundled stopword list is valid")
    }

    /// Parses one word per line. Blank lines and `#` comments are skipped.
    pub fn parse(contents: &str) -> Result<Self, StopwordError> {
        let mut words = BTreeSet::new();
        for (idx, raw) in contents.lines().enumerate() {
            let word = raw.trim();
            if word.is_empty() || word.starts_with('#') {
                continue;
            }
            if Token::new(word).is_none() {
                return Err(StopwordError::InvalidEntry {
                    line: idx + 1,
                    word: word.to_string(),
                });
            }
            words.insert(word.to_string());
        }
        Ok(StopwordList { words })
    }

    pub fn load(path: &Path) -> Result<Self, StopwordError> {
        let contents = std::fs::read_to_string(path).map_err(|source| StopwordError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&contents)
    }

    pub fn from_words<I, S>(words: I) -> Result<Self, StopwordError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = BTreeSet::new();
        for (idx, w) in words.into_iter().enumerate() {
            let w = w.as_ref();
            if Token::new(w).is_none() {
                return Err(StopwordError::InvalidEntry {
                    line: idx + 1,
                    word: w.to_string(),
                });
            }
            set.insert(w.to_string());
        }
        Ok(StopwordList { words: set })
    }

    /// Adds the stemmed form of every entry, so a list of surface forms
    /// still matches tokens that have already been stemmed.
    pub fn with_stemmed_forms(&self) -> Self {
        let mut words = self.words.clone();
        words.extend(self.words.iter().map(|w| stem_word(w).to_string()));
        StopwordList { words }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}
