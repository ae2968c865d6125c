use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::ingest::Corpus;
use crate::num::Fraction;

/// Standard emoji shortcodes, one per line.
const STANDARD_EMOJI: &str = include_str!("../../data/standard_emoji.txt");

static STANDARD: LazyLock<HashSet<&'static str>> =
    LazyLock::new(|| STANDARD_EMOJI.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect());

/// Whether `name` is a platform emoji. Skin-tone modifiers
/// (`thumbsup::skin-tone-3`) are ignored.
pub fn is_standard_emoji(name: &str) -> bool {
    let base = name.split("::").next().unwrap_or(name);
    STANDARD.contains(base)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmojiCount {
    pub name: String,
    /// Reaction instances of this emoji over all reaction instances.
    pub instances: Fraction,
    pub is_custom: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmojiRanking {
    pub total_reaction_instances: u64,
    /// Descending by count, ties by name.
    pub entries: Vec<EmojiCount>,
}

/// Top `n` reaction emoji on analytic messages, counted per reacting user.
///
/// With `custom_set`, an emoji is custom iff it is in the set; otherwise
/// iff it is not a standard shortcode.
pub fn rank_emoji_reactions(corpus: &Corpus, n: usize, custom_set: Option<&BTreeSet<String>>) -> EmojiRanking {
    let mut counts: BTreeMap<&str, u64> = BTreeMap::new();
    for m in corpus.analytic_messages() {
        for r in &m.reactions {
            *counts.entry(r.name.as_str()).or_default() += u64::from(r.count);
        }
    }
    let total: u64 = counts.values().sum();
    let mut ranked: Vec<(&str, u64)> = counts.into_iter().collect();
    // BTreeMap order is by name, so a stable sort on count keeps name ties ordered.
    ranked.sort_by_key(|&(_, count)| std::cmp::Reverse(count));
    let entries = ranked
        .into_iter()
        .take(n)
        .map(|(name, count)| EmojiCount {
            name: name.to_string(),
            instances: Fraction::new(count, total),
            is_custom: match custom_set {
                Some(set) => set.contains(name),
                None => !is_standard_emoji(name),
            },
        })
        .collect();
    EmojiRanking { total_reaction_instances: total, entries }
}
