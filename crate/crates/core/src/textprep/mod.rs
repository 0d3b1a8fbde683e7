//! Text preprocessing.
//!
//! Stages run in a fixed order: case folding, URL/mention/hashtag handling,
//! punctuation removal, tokenization, stemming, stopword removal. Every stage
//! is a pure function; [`preprocess`] composes them.

mod stem;
mod stopwords;

use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::exec::Execution;

pub use stem::{stem_word, MIN_STEM_LEN};
pub use stopwords::{StopwordError, StopwordList};

/// A non-empty lowercase alphanumeric word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Token(String);

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() && !c.is_uppercase()
}

impl Token {
    pub fn new(s: impl Into<String>) -> Option<Token> {
        let s = s.into();
        (!s.is_empty() && s.chars().all(is_token_char)).then_some(Token(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }

    /// Stemmed copy of this token.
    pub fn stem(&self) -> Token {
        Token(stem_word(&self.0).to_string())
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::ops::Deref for Token {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrepConfig {
    stopwords: StopwordList,
    // The list actually applied: `stopwords` plus stemmed forms when stemming.
    effective_stopwords: StopwordList,
    stem_enabled: bool,
    min_token_len: usize,
    keep_hashtag_body: bool,
}

impl Default for PrepConfig {
    fn default() -> Self {
        PrepConfig::new(StopwordList::default_indonesian())
    }
}

impl PrepConfig {
    /// Stemming on, `min_token_len` 2, hashtag bodies kept.
    pub fn new(stopwords: StopwordList) -> Self {
        let mut cfg = PrepConfig {
            effective_stopwords: StopwordList::default(),
            stopwords,
            stem_enabled: true,
            min_token_len: 2,
            keep_hashtag_body: true,
        };
        cfg.refresh();
        cfg
    }

    fn refresh(&mut self) {
        self.effective_stopwords = if self.stem_enabled {
            self.stopwords.with_stemmed_forms()
        } else {
            self.stopwords.clone()
        };
    }

    pub fn with_stemming(mut self, enabled: bool) -> Self {
        self.stem_enabled = enabled;
        self.refresh();
        self
    }

    /// Values below 1 are treated as 1.
    pub fn with_min_token_len(mut self, len: usize) -> Self {
        self.min_token_len = len.max(1);
        self
    }

    pub fn with_hashtag_body(mut self, keep: bool) -> Self {
        self.keep_hashtag_body = keep;
        self
    }

    pub fn stopwords(&self) -> &StopwordList {
        &self.stopwords
    }

    pub fn effective_stopwords(&self) -> &StopwordList {
        &self.effective_stopwords
    }

    pub fn stem_enabled(&self) -> bool {
        self.stem_enabled
    }

    pub fn min_token_len(&self) -> usize {
        self.min_token_len
    }

    pub fn keep_hashtag_body(&self) -> bool {
        self.keep_hashtag_body
    }
}

pub fn case_fold(text: &str) -> String {
    text.to_lowercase()
}

static URL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\b[a-z][a-z0-9+.\-]*://\S*|\bwww\.\S*").expect("url pattern")
});
static MENTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@\w+").expect("mention pattern"));
static HASHTAG: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"#(\w+)").expect("hashtag pattern"));

fn collapse_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Deletes URLs and @-mentions. Hashtags lose their `#` when
/// `keep_hashtag_body`, otherwise they are deleted. Whitespace is collapsed.
pub fn strip_entities(text: &str, keep_hashtag_body: bool) -> String {
    let text = URL.replace_all(text, " ");
    let text = MENTION.replace_all(&text, " ");
    let text = if keep_hashtag_body {
        HASHTAG.replace_all(&text, "$1")
    } else {
        HASHTAG.replace_all(&text, " ")
    };
    collapse_whitespace(&text)
}

/// Replaces every character that is not a letter, digit or whitespace with
/// a space, then collapses and trims whitespace.
pub fn strip_punctuation(text: &str) -> String {
    let replaced: String = text
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || c.is_whitespace() {
                c
            } else {
                ' '
            }
        })
        .collect();
    collapse_whitespace(&replaced)
}

/// Splits on whitespace and drops tokens shorter than `min_token_len`
/// characters. Characters that cannot appear in a [`Token`] (e.g. capitals
/// with no lowercase mapping) act as separators.
pub fn tokenize(text: &str, min_token_len: usize) -> Vec<Token> {
    text.split(|c: char| !is_token_char(c))
        .filter(|piece| !piece.is_empty() && piece.chars().count() >= min_token_len)
        .map(|piece| Token(piece.to_string()))
        .collect()
}

pub fn stem(token: &Token) -> Token {
    token.stem()
}

pub fn remove_stopwords(tokens: Vec<Token>, stopwords: &StopwordList) -> Vec<Token> {
    tokens
        .into_iter()
        .filter(|t| !stopwords.contains(t.as_str()))
        .collect()
}

fn stem_and_filter(tokens: Vec<Token>, config: &PrepConfig) -> Vec<Token> {
    if !config.stem_enabled {
        return tokens;
    }
    // A stem can fall under a large min_token_len; re-apply the length rule.
    tokens
        .iter()
        .map(Token::stem)
        .filter(|t| t.char_len() >= config.min_token_len)
        .collect()
}

/// Runs the full chain on one text.
pub fn preprocess(text: &str, config: &PrepConfig) -> Vec<Token> {
    let folded = case_fold(text);
    let stripped = strip_entities(&folded, config.keep_hashtag_body);
    let clean = strip_punctuation(&stripped);
    let tokens = tokenize(&clean, config.min_token_len);
    let stemmed = stem_and_filter(tokens, config);
    remove_stopwords(stemmed, &config.effective_stopwords)
}

/// Preprocesses many texts, returning token lists in input order.
pub fn preprocess_batch<S>(texts: &[S], config: &PrepConfig, exec: Execution) -> Vec<Vec<Token>>
where
    S: AsRef<str> + Sync,
{
    exec.map(texts, |t| preprocess(t.as_ref(), config))
}

/// Intermediate output of every stage, for debugging.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrepTrace {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub raw: String,
    pub case_folded: String,
    pub entities_stripped: String,
    pub punctuation_stripped: String,
    pub tokens: Vec<Token>,
    pub stemmed: Vec<Token>,
    #[serde(rename = "final")]
    pub final_tokens: Vec<Token>,
}

pub fn preprocess_traced(text: &str, config: &PrepConfig) -> PrepTrace {
    let case_folded = case_fold(text);
    let entities_stripped = strip_entities(&case_folded, config.keep_hashtag_body);
    let punctuation_stripped = strip_punctuation(&entities_stripped);
    let tokens = tokenize(&punctuation_stripped, config.min_token_len);
    let stemmed = stem_and_filter(tokens.clone(), config);
    let final_tokens = remove_stopwords(stemmed.clone(), &config.effective_stopwords);
    PrepTrace {
        id: None,
        raw: text.to_string(),
        case_folded,
        entities_stripped,
        punctuation_stripped,
        tokens,
        stemmed,
        final_tokens,
    }
}
