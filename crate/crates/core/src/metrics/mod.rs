//! Platform-usage metrics and emoji-reaction rankings for a corpus.

mod emoji;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::ingest::text::{has_channel_mention, has_user_mention};
use crate::ingest::{Corpus, Message, Timestamp};
use crate::num::{ExactRatio, Fraction, Scalar};

pub use emoji::{is_standard_emoji, rank_emoji_reactions, EmojiCount, EmojiRanking};

/// How inter-message gaps from several channels are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapMode {
    /// One mean over every consecutive-message gap in every channel.
    #[default]
    Pooled,
    /// Mean of the per-channel mean gaps.
    PerChannel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MetricsOptions {
    pub gap_mode: GapMode,
    /// Clamp each reply latency and gap to this many seconds. Off by default.
    pub duration_cap_secs: Option<u64>,
}

/// Usage statistics for one corpus. Every `Fraction` is over `total_messages`;
/// durations are seconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Scalar")]
pub struct UsageMetrics<F> {
    pub total_messages: u64,
    pub replies: u64,
    /// Thread roots with at least one surviving reply.
    pub messages_with_reply: Fraction,
    pub avg_time_to_first_reply: Option<F>,
    pub avg_gap_between_messages: Option<F>,
    /// Messages carrying a file or a link.
    pub file_shares: Fraction,
    pub edits: Fraction,
    pub reaction_instances: u64,
    pub messages_with_reaction: Fraction,
    pub contributing_authors: u64,
    /// Exact population variance of per-author message shares.
    pub contribution_variance: Option<ExactRatio>,
    pub contribution_share_stddev: Option<F>,
    pub channel_mentions: Fraction,
    pub user_mentions: Fraction,
}

const MICROS_PER_SEC: u64 = 1_000_000;

#[derive(Default)]
struct DurationSum {
    micros: u64,
    samples: u64,
}

impl DurationSum {
    fn add(&mut self, micros: u64) {
        self.micros += micros;
        self.samples += 1;
    }

    fn mean_secs<F: Scalar>(&self) -> Option<F> {
        (self.samples > 0).then(|| F::of_u64(self.micros) / F::of_u64(self.samples * MICROS_PER_SEC))
    }
}

pub fn compute_usage_metrics<F: Scalar>(corpus: &Corpus, options: &MetricsOptions) -> UsageMetrics<F> {
    let cap = |micros: u64| match options.duration_cap_secs {
        Some(c) => micros.min(c * MICROS_PER_SEC),
        None => micros,
    };

    let mut total = 0u64;
    let mut replies = 0u64;
    let mut file_shares = 0u64;
    let mut edits = 0u64;
    let mut reaction_instances = 0u64;
    let mut with_reaction = 0u64;
    let mut channel_mentions = 0u64;
    let mut user_mentions = 0u64;
    let mut per_author: BTreeMap<&str, u64> = BTreeMap::new();
    let mut latency = DurationSum::default();
    let mut replied_roots = 0u64;
    let mut pooled_gaps = DurationSum::default();
    let mut channel_gap_means: Vec<F> = Vec::new();

    for (_, messages) in corpus.channels_with_messages() {
        let analytic: Vec<&Message> = messages.iter().filter(|m| m.is_analytic()).collect();
        let present: BTreeSet<Timestamp> = analytic.iter().map(|m| m.ts).collect();
        let mut first_reply: BTreeMap<Timestamp, Timestamp> = BTreeMap::new();

        for m in &analytic {
            total += 1;
            if let Some(parent) = m.reply_parent() {
                replies += 1;
                if present.contains(&parent) {
                    first_reply.entry(parent).and_modify(|t| *t = (*t).min(m.ts)).or_insert(m.ts);
                }
            }
            if m.file_count + m.url_count >= 1 {
                file_shares += 1;
            }
            if m.edited {
                edits += 1;
            }
            let inst = m.reaction_instances();
            reaction_instances += inst;
            if inst > 0 {
                with_reaction += 1;
            }
            if has_channel_mention(&m.text) {
                channel_mentions += 1;
            }
            if has_user_mention(&m.text) {
                user_mentions += 1;
            }
            if let Some(a) = m.author.as_deref() {
                if corpus.is_consenting(a) {
                    *per_author.entry(a).or_default() += 1;
                }
            }
        }

        replied_roots += first_reply.len() as u64;
        for (root, reply) in &first_reply {
            latency.add(cap(reply.micros_since(*root)));
        }

        let mut channel_gaps = DurationSum::default();
        for w in analytic.windows(2) {
            let gap = cap(w[1].ts.micros_since(w[0].ts));
            channel_gaps.add(gap);
            pooled_gaps.add(gap);
        }
        channel_gap_means.extend(channel_gaps.mean_secs::<F>());
    }

    let avg_gap = match options.gap_mode {
        GapMode::Pooled => pooled_gaps.mean_secs(),
        GapMode::PerChannel => crate::num::mean(&channel_gap_means),
    };

    let contribution_variance = share_variance(per_author.values().copied());
    UsageMetrics {
        total_messages: total,
        replies,
        messages_with_reply: Fraction::new(replied_roots, total),
        avg_time_to_first_reply: latency.mean_secs(),
        avg_gap_between_messages: avg_gap,
        file_shares: Fraction::new(file_shares, total),
        edits: Fraction::new(edits, total),
        reaction_instances,
        messages_with_reaction: Fraction::new(with_reaction, total),
        contributing_authors: per_author.len() as u64,
        contribution_variance,
        contribution_share_stddev: contribution_variance.map(|v| v.to_scalar::<F>().sqrt()),
        channel_mentions: Fraction::new(channel_mentions, total),
        user_mentions: Fraction::new(user_mentions, total),
    }
}

/// Population variance of `c_i / T` over authors, where `T = Σ c_i`:
/// `(n Σc² − T²) / (n² T²)`.
fn share_variance(counts: impl Iterator<Item = u64>) -> Option<ExactRatio> {
    let (mut n, mut sum, mut sum_sq) = (0u128, 0u128, 0u128);
    for c in counts {
        n += 1;
        sum += u128::from(c);
        sum_sq += u128::from(c) * u128::from(c);
    }
    if n == 0 || sum == 0 {
        return None;
    }
    Some(ExactRatio::new(n * sum_sq - sum * sum, n * n * sum * sum))
}
