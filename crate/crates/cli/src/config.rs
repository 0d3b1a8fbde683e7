//! Run configuration: flat `key = value` file, overridden by flags.

use std::path::{Path, PathBuf};

use sentimin::evaluate::CvConfig;
use sentimin::features::PruneBounds;
use sentimin::textprep::{PrepConfig, StopwordError, StopwordList};
use sentimin::{NbModel, Weighting};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_K: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// `None` selects the bundled Indonesian list.
    pub stopword_path: Option<PathBuf>,
    pub min_df_ratio: f64,
    pub max_df_ratio: f64,
    pub alpha: f64,
    pub k: usize,
    pub seed: u64,
    pub min_token_len: usize,
    pub stem_enabled: bool,
    pub keep_hashtag_body: bool,
    pub weighting: Weighting,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            stopword_path: None,
            min_df_ratio: PruneBounds::DEFAULT_MIN,
            max_df_ratio: PruneBounds::DEFAULT_MAX,
            alpha: NbModel::DEFAULT_ALPHA,
            k: DEFAULT_K,
            seed: DEFAULT_SEED,
            min_token_len: 2,
            stem_enabled: true,
            keep_hashtag_body: true,
            weighting: Weighting::Counts,
        }
    }
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Config(format!("line {line}: bad value for `{key}`: {e}")))
}

fn parse_weighting(value: &str) -> Result<Weighting, String> {
    match value {
        "counts" => Ok(Weighting::Counts),
        "tfidf" => Ok(Weighting::Tfidf),
        other => Err(format!(
            "unknown weighting `{other}` (expected counts or tfidf)"
        )),
    }
}

impl RunConfig {
    /// Applies `key = value` lines on top of `self`. Unknown keys, repeated
    /// keys and unparsable values are errors.
    pub fn apply_file_contents(&mut self, contents: &str, base_dir: &Path) -> Result<(), CliError> {
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in contents.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let (key, value) = text
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {line}: expected `key = value`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(CliError::Config(format!("line {line}: `{key}` set twice")));
            }
            match key {
                "stopword_path" => {
                    let p = PathBuf::from(value);
                    self.stopword_path = Some(if p.is_relative() { base_dir.join(p) } else { p });
                }
                "min_df_ratio" => self.min_df_ratio = parse_value(line, key, value)?,
                "max_df_ratio" => self.max_df_ratio = parse_value(line, key, value)?,
                "alpha" => self.alpha = parse_value(line, key, value)?,
                "k" => self.k = parse_value(line, key, value)?,
                "seed" => self.seed = parse_value(line, key, value)?,
                "min_token_len" => self.min_token_len = parse_value(line, key, value)?,
                "stem_enabled" => self.stem_enabled = parse_value(line, key, value)?,
                "keep_hashtag_body" => self.keep_hashtag_body = parse_value(line, key, value)?,
                "weighting" => {
                    self.weighting = parse_weighting(value)
                        .map_err(|e| CliError::Config(format!("line {line}: {e}")))?
                }
                other => {
                    return Err(CliError::Config(format!(
                        "line {line}: unknown key `{other}`"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<(), CliError> {
        let contents = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        self.apply_file_contents(&contents, base)
            .map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
                other => other,
            })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        PruneBounds::new(self.min_df_ratio, self.max_df_ratio)
            .map_err(|e| CliError::Config(e.to_string()))?;
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(CliError::Config(format!(
                "alpha must be > 0, got {}",
                self.alpha
            )));
        }
        if self.k < 2 {
            return Err(CliError::Config(format!(
                "k must be at least 2, got {}",
                self.k
            )));
        }
        if self.min_token_len == 0 {
            return Err(CliError::Config("min_token_len must be at least 1".into()));
        }
        Ok(())
    }

    pub fn prep_config(&self) -> Result<PrepConfig, CliError> {
        let stopwords = match &self.stopword_path {
            None => StopwordList::default_indonesian(),
            Some(path) => StopwordList::load(path).map_err(|e| match e {
                StopwordError::Io { path, source } => CliError::io(&path, source),
                invalid => CliError::Config(format!("{}: {invalid}", path.display())),
            })?,
        };
        Ok(PrepConfig::new(stopwords)
            .with_stemming(self.stem_enabled)
            .with_min_token_len(self.min_token_len)
            .with_hashtag_body(self.keep_hashtag_body))
    }

    pub fn cv_config(&self) -> Result<CvConfig, CliError> {
        Ok(CvConfig {
            bounds: PruneBounds::new(self.min_df_ratio, self.max_df_ratio)
                .map_err(|e| CliError::Config(e.to_string()))?,
            alpha: self.alpha,
            weighting: self.weighting,
        })
    }
}

pub fn weighting_from_flag(value: &str) -> Result<Weighting, String> {
    parse_weighting(value)
}
