//! Measure psychological-safety signals in team chat exports: ingest a Slack
//! export, match a behaviour lexicon, compute usage metrics, score surveys,
//! and render team and comparison reports.
//!
//! The statistical types are generic over the float type; the aliases below
//! fix it to `f64`.

pub mod ingest;
pub mod lexicon;
pub mod metrics;
pub mod num;
pub mod report;
pub mod survey;

pub use ingest::{parse_export, redact_users, AuthorFilter, Corpus, IngestError, Message};
pub use lexicon::{default_lexicon, load_lexicon, Lexicon, LexiconError};
pub use metrics::{compute_usage_metrics, rank_emoji_reactions, GapMode, MetricsOptions};
pub use num::{ExactRatio, Fraction, Scalar};
pub use report::{build_team_report, compare_teams, ReportConfig, ReportError, ReportFormat};
pub use survey::{ReverseItems, SurveyError, SurveyResponse};

pub type UsageMetrics = metrics::UsageMetrics<f64>;
pub type PsScore = survey::PsScore<f64>;
pub type TeamSummary = survey::TeamSummary<f64>;
pub type TeamSelection = survey::TeamSelection<f64>;
pub type TeamReport = report::TeamReport<f64>;
pub type ComparisonReport = report::ComparisonReport<f64>;
pub type MetricDelta = report::MetricDelta<f64>;
