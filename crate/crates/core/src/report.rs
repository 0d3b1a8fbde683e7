//! Per-brand sentiment summaries.
//!
//! Percentages are taken over the classified count (positive + negative)
//! and always recomputed from the stored counts.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;

/// Bucket for predictions without a brand.
pub const UNATTRIBUTED: &str = "unattributed";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrandSummary {
    pub brand: String,
    pub n_classified: u64,
    pub positive: u64,
    pub negative: u64,
    pub positive_pct: f64,
    pub negative_pct: f64,
}

impl BrandSummary {
    /// Returns `None` when there is nothing to summarize.
    pub fn from_counts(brand: impl Into<String>, positive: u64, negative: u64) -> Option<Self> {
        let n = positive + negative;
        (n > 0).then(|| BrandSummary {
            brand: brand.into(),
            n_classified: n,
            positive,
            negative,
            positive_pct: positive as f64 / n as f64,
            negative_pct: negative as f64 / n as f64,
        })
    }

    /// One-decimal percentage, e.g. `45.9`.
    pub fn positive_display(&self) -> String {
        format!("{:.1}", self.positive_pct * 100.0)
    }

    pub fn negative_display(&self) -> String {
        format!("{:.1}", self.negative_pct * 100.0)
    }

    /// Whether the stored percentages still match the stored counts.
    pub fn is_consistent(&self) -> bool {
        match BrandSummary::from_counts(self.brand.clone(), self.positive, self.negative) {
            Some(fresh) => fresh == *self,
            None => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReportWarning {
    /// A declared brand received no predictions and was left out.
    EmptyBrand { brand: String },
    /// Predictions without a brand were grouped under `unattributed`.
    Unattributed { count: u64 },
    /// The declared number of test documents differs from the number
    /// actually classified.
    CountMismatch {
        brand: String,
        declared: u64,
        classified: u64,
    },
}

impl std::fmt::Display for ReportWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ReportWarning::EmptyBrand { brand } => {
                write!(f, "brand `{brand}` has no classified documents; omitted")
            }
            ReportWarning::Unattributed { count } => {
                write!(
                    f,
                    "{count} predictions have no brand; reported as `{UNATTRIBUTED}`"
                )
            }
            ReportWarning::CountMismatch {
                brand,
                declared,
                classified,
            } => write!(
                f,
                "brand `{brand}`: {declared} documents declared but {classified} classified"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrandReport {
    pub summaries: Vec<BrandSummary>,
    pub warnings: Vec<ReportWarning>,
}

/// Groups predictions by brand (alphabetical order). `declared` optionally
/// gives the expected number of documents per brand; brands declared but
/// never seen are dropped with a warning, and totals that disagree with the
/// classified count are flagged.
pub fn summarize_brand<'a, I>(predictions: I, declared: &BTreeMap<String, u64>) -> BrandReport
where
    I: IntoIterator<Item = (Option<&'a str>, Label)>,
{
    let mut counts: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    let mut unattributed = 0;
    for (brand, label) in predictions {
        let key = match brand.map(str::trim).filter(|b| !b.is_empty()) {
            Some(b) => b.to_string(),
            None => {
                unattributed += 1;
                UNATTRIBUTED.to_string()
            }
        };
        let entry = counts.entry(key).or_default();
        match label {
            Label::Positive => entry.0 += 1,
            Label::Negative => entry.1 += 1,
        }
    }

    let mut warnings = Vec::new();
    if unattributed > 0 {
        warnings.push(ReportWarning::Unattributed {
            count: unattributed,
        });
    }
    for (brand, &n) in declared {
        match counts.get(brand) {
            None => warnings.push(ReportWarning::EmptyBrand {
                brand: brand.clone(),
            }),
            Some(&(p, q)) if p + q != n => warnings.push(ReportWarning::CountMismatch {
                brand: brand.clone(),
                declared: n,
                classified: p + q,
            }),
            Some(_) => {}
        }
    }
    let summaries = counts
        .into_iter()
        .filter_map(|(brand, (p, n))| BrandSummary::from_counts(brand, p, n))
        .collect();
    BrandReport {
        summaries,
        warnings,
    }
}

fn satisfaction_order(a: &BrandSummary, b: &BrandSummary) -> Ordering {
    // positive_pct compared exactly as p_a / n_a vs p_b / n_b.
    let lhs = a.positive as u128 * b.n_classified as u128;
    let rhs = b.positive as u128 * a.n_classified as u128;
    rhs.cmp(&lhs)
        .then_with(|| b.n_classified.cmp(&a.n_classified))
        .then_with(|| a.brand.cmp(&b.brand))
}

/// Highest positive share first; ties go to the larger sample, then to the
/// alphabetically smaller brand.
pub fn rank_by_satisfaction(summaries: &[BrandSummary]) -> Vec<BrandSummary> {
    let mut ranked = summaries.to_vec();
    ranked.sort_by(satisfaction_order);
    ranked
}

/// Plain-text comparison table, one row per brand in the given order.
pub fn render_table(summaries: &[BrandSummary]) -> String {
    let brand_w = summaries
        .iter()
        .map(|s| s.brand.len())
        .chain(std::iter::once(5))
        .max()
        .unwrap_or(5)
        + 2;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<brand_w$}{:>12}{:>16}{:>16}",
        "Brand", "Classified", "Positive", "Negative"
    );
    for s in summaries {
        let pos = format!("{} ({}%)", s.positive, s.positive_display());
        let neg = format!("{} ({}%)", s.negative, s.negative_display());
        let _ = writeln!(
            out,
            "{:<brand_w$}{:>12}{:>16}{:>16}",
            s.brand, s.n_classified, pos, neg
        );
    }
    out
}
