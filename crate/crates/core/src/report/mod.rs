//! Single-team and high/low comparison reports.

mod format;
mod render;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ingest::Corpus;
use crate::lexicon::{tabulate_keywords, KeywordTabulation, Lexicon};
use crate::metrics::{compute_usage_metrics, rank_emoji_reactions, EmojiRanking, MetricsOptions, UsageMetrics};
use crate::num::{Fraction, Scalar};
use crate::survey::TeamSelection;

pub use format::{format_count_percent, format_duration, format_percent, format_signed_duration, UNDEFINED};

pub const TOOL_VERSION: &str = concat!("teamsignal ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReportError {
    #[error("reports were built with different lexicons ({high} vs {low})")]
    LexiconMismatch { high: String, low: String },
    #[error("reports were built with different emoji limits ({high} vs {low})")]
    EmojiLimitMismatch { high: usize, low: usize },
    #[error("emoji limit must be at least 1")]
    ZeroEmojiLimit,
    #[error("unknown report format `{0}` (expected markdown, csv or json)")]
    UnknownFormat(String),
    #[error("report JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

impl ReportFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            ReportFormat::Markdown => "md",
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, ReportError> {
        match s.to_ascii_lowercase().as_str() {
            "markdown" | "md" | "markdown-table" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(ReportError::UnknownFormat(s.to_string())),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Markdown => "markdown",
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportConfig {
    pub n_emoji: usize,
    pub metrics: MetricsOptions,
    pub custom_emoji: Option<BTreeSet<String>>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig { n_emoji: 10, metrics: MetricsOptions::default(), custom_emoji: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct TeamReport<F> {
    pub team_id: String,
    pub tool_version: String,
    /// SHA-256 of the lexicon's canonical TOML.
    pub lexicon_hash: String,
    pub n_emoji: usize,
    /// RFC 3339, UTC.
    pub generated_at: String,
    pub usage: UsageMetrics<F>,
    pub keywords: KeywordTabulation,
    pub emoji: EmojiRanking,
}

pub fn build_team_report<F: Scalar>(
    corpus: &Corpus,
    lexicon: &Lexicon,
    config: &ReportConfig,
) -> Result<TeamReport<F>, ReportError> {
    if config.n_emoji == 0 {
        return Err(ReportError::ZeroEmojiLimit);
    }
    Ok(TeamReport {
        team_id: corpus.team_id().to_string(),
        tool_version: TOOL_VERSION.to_string(),
        lexicon_hash: lexicon.digest(),
        n_emoji: config.n_emoji,
        generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        usage: compute_usage_metrics(corpus, &config.metrics),
        keywords: tabulate_keywords(corpus, lexicon),
        emoji: rank_emoji_reactions(corpus, config.n_emoji, config.custom_emoji.as_ref()),
    })
}

impl<F: Scalar> TeamReport<F> {
    pub fn with_generated_at(mut self, generated_at: impl Into<String>) -> Self {
        self.generated_at = generated_at.into();
        self
    }

    /// Usage rows in canonical display order.
    pub fn usage_rows(&self) -> Vec<MetricRow<F>> {
        let u = &self.usage;
        use RowValue::*;
        [
            ("total_messages", "Total Number of Messages", Count(u.total_messages)),
            ("replies", "Number of Replies", Count(u.replies)),
            ("pct_messages_with_reply", "% of Messages With at Least One Reply", Percent(u.messages_with_reply)),
            ("avg_time_to_reply", "Average Time to Reply", Duration(u.avg_time_to_first_reply)),
            (
                "avg_gap_between_messages",
                "Average Time Between Messages in a Channel",
                Duration(u.avg_gap_between_messages),
            ),
            ("file_shares", "Number of File Shares", CountPercent(u.file_shares)),
            ("edits", "Number of Edits", CountPercent(u.edits)),
            ("reaction_instances", "Number of Emoji Reactions", Count(u.reaction_instances)),
            (
                "pct_messages_with_reaction",
                "% of Messages With at Least One Emoji Reaction",
                Percent(u.messages_with_reaction),
            ),
            ("contribution_stddev", "Standard Deviation of % Contribution", Value(u.contribution_share_stddev)),
            ("channel_mentions", "Number of @Channel Mentions", CountPercent(u.channel_mentions)),
            ("user_mentions", "Number of @User Mentions", CountPercent(u.user_mentions)),
        ]
        .into_iter()
        .map(|(key, label, value)| MetricRow { key: key.to_string(), label: label.to_string(), value })
        .collect()
    }

    /// One row per lexicon sub-category, in lexicon order.
    pub fn keyword_rows(&self) -> Vec<MetricRow<F>> {
        self.keywords
            .rows
            .iter()
            .map(|r| MetricRow {
                key: r.sub_category.clone(),
                label: format!("{}: {}", r.category, r.sub_category),
                value: RowValue::CountPercent(r.messages),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_json(json: &str) -> Result<Self, ReportError> {
        serde_json::from_str(json).map_err(|e| ReportError::Json(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case", bound = "F: Scalar")]
pub enum RowValue<F> {
    Count(u64),
    /// Count with its share of total messages.
    CountPercent(Fraction),
    Percent(Fraction),
    /// Seconds.
    Duration(Option<F>),
    Value(Option<F>),
}

impl<F: Scalar> RowValue<F> {
    pub fn rendered(&self) -> String {
        match self {
            RowValue::Count(c) => c.to_string(),
            RowValue::CountPercent(f) => format_count_percent(f),
            RowValue::Percent(f) => format_percent(f),
            RowValue::Duration(d) => format_duration(*d),
            RowValue::Value(Some(v)) => format!("{:.3}", v.to_f64_lossy()),
            RowValue::Value(None) => UNDEFINED.to_string(),
        }
    }

    fn count(&self) -> Option<u64> {
        match self {
            RowValue::Count(c) => Some(*c),
            RowValue::CountPercent(f) => Some(f.numer()),
            _ => None,
        }
    }

    fn fraction(&self) -> Option<F> {
        match self {
            RowValue::CountPercent(f) | RowValue::Percent(f) => f.value(),
            _ => None,
        }
    }

    fn scalar(&self) -> Option<F> {
        match self {
            RowValue::Duration(v) | RowValue::Value(v) => *v,
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow<F> {
    pub key: String,
    pub label: String,
    pub value: RowValue<F>,
}

/// Signed high − low differences for one row. Fields that do not apply to the
/// row kind, or involve an undefined value, are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct MetricDelta<F> {
    pub key: String,
    pub label: String,
    pub count: Option<i128>,
    pub percentage_points: Option<F>,
    /// Durations in seconds, or the raw value.
    pub value: Option<F>,
    /// high / low, when low is non-zero.
    pub ratio: Option<F>,
}

impl<F: Scalar> MetricDelta<F> {
    fn between(high: &MetricRow<F>, low: &MetricRow<F>) -> Self {
        let (a, b) = (&high.value, &low.value);
        let count = a.count().zip(b.count()).map(|(x, y)| i128::from(x) - i128::from(y));
        let percentage_points = a.fraction().zip(b.fraction()).map(|(x, y)| (x - y) * F::of_u64(100));
        let value = a.scalar().zip(b.scalar()).map(|(x, y)| x - y);
        let ratio = match (a.count(), b.count()) {
            (Some(x), Some(y)) => (y > 0).then(|| F::of_u64(x) / F::of_u64(y)),
            _ => {
                let pair = a.fraction().zip(b.fraction()).or(a.scalar().zip(b.scalar()));
                pair.and_then(|(x, y)| (y != F::zero()).then(|| x / y))
            }
        };
        MetricDelta { key: high.key.clone(), label: high.label.clone(), count, percentage_points, value, ratio }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct ComparisonReport<F> {
    pub high: TeamReport<F>,
    pub low: TeamReport<F>,
    /// Usage rows then keyword rows, matching the row order of either report.
    pub deltas: Vec<MetricDelta<F>>,
    pub selection: Option<TeamSelection<F>>,
}

/// Compare two reports built with the same lexicon and emoji limit.
pub fn compare_teams<F: Scalar>(high: TeamReport<F>, low: TeamReport<F>) -> Result<ComparisonReport<F>, ReportError> {
    if high.lexicon_hash != low.lexicon_hash {
        return Err(ReportError::LexiconMismatch { high: high.lexicon_hash.clone(), low: low.lexicon_hash.clone() });
    }
    if high.n_emoji != low.n_emoji {
        return Err(ReportError::EmojiLimitMismatch { high: high.n_emoji, low: low.n_emoji });
    }
    let rows = |r: &TeamReport<F>| [r.usage_rows(), r.keyword_rows()].concat();
    let deltas = rows(&high).iter().zip(rows(&low).iter()).map(|(h, l)| MetricDelta::between(h, l)).collect();
    Ok(ComparisonReport { high, low, deltas, selection: None })
}

impl<F: Scalar> ComparisonReport<F> {
    pub fn with_selection(mut self, selection: TeamSelection<F>) -> Self {
        self.selection = Some(selection);
        self
    }

    pub fn to_json(&self) -> String {
        to_json(self)
    }

    pub fn from_json(json: &str) -> Result<Self, ReportError> {
        serde_json::from_str(json).map_err(|e| ReportError::Json(e.to_string()))
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
