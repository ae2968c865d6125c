//! Keyword-in-context extraction for qualitative review.

use std::fmt::Write as _;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::{Lexicon, LexiconError};
use crate::ingest::{normalize_for_matching, Corpus, Message, Timestamp};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextLine {
    pub ts: Timestamp,
    pub author: Option<String>,
    pub text: String,
}

impl From<&Message> for ContextLine {
    fn from(m: &Message) -> Self {
        ContextLine { ts: m.ts, author: m.author.clone(), text: m.text.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConcordanceEntry {
    pub channel_id: String,
    pub channel_name: String,
    pub sub_category: String,
    pub message: ContextLine,
    /// Matchable form of the message; `spans` index into it.
    pub matchable: String,
    pub spans: Vec<Range<usize>>,
    pub before: Vec<ContextLine>,
    pub after: Vec<ContextLine>,
}

impl ConcordanceEntry {
    /// Matchable text with every span wrapped in `«…»`.
    pub fn highlighted(&self) -> String {
        let mut out = String::with_capacity(self.matchable.len() + 4 * self.spans.len());
        let mut at = 0;
        for span in &self.spans {
            out.push_str(&self.matchable[at..span.start]);
            out.push('«');
            out.push_str(&self.matchable[span.clone()]);
            out.push('»');
            at = span.end;
        }
        out.push_str(&self.matchable[at..]);
        out
    }
}

/// Messages hitting `sub_category`, each with up to `context` analytic
/// neighbours on either side from the same channel. Ordered by (channel, ts).
pub fn concordance(
    corpus: &Corpus,
    lexicon: &Lexicon,
    sub_category: &str,
    context: usize,
) -> Result<Vec<ConcordanceEntry>, LexiconError> {
    let index = lexicon.find(sub_category)?;
    let name = lexicon.entries()[index].sub_category.clone();
    let mut out = Vec::new();
    for (channel_id, messages) in corpus.channels_with_messages() {
        let analytic: Vec<&Message> = messages.iter().filter(|m| m.is_analytic()).collect();
        for (pos, msg) in analytic.iter().enumerate() {
            let matchable = normalize_for_matching(&msg.text);
            let Some(hit) = lexicon.match_entry(index, &matchable) else {
                continue;
            };
            let start = pos.saturating_sub(context);
            let end = (pos + 1 + context).min(analytic.len());
            out.push(ConcordanceEntry {
                channel_id: channel_id.to_string(),
                channel_name: corpus.channels().get(channel_id).cloned().unwrap_or_default(),
                sub_category: name.clone(),
                message: ContextLine::from(*msg),
                matchable,
                spans: hit.spans,
                before: analytic[start..pos].iter().map(|m| ContextLine::from(*m)).collect(),
                after: analytic[pos + 1..end].iter().map(|m| ContextLine::from(*m)).collect(),
            });
        }
    }
    Ok(out)
}

/// One JSON object per line.
pub fn concordance_jsonl(entries: &[ConcordanceEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&serde_json::to_string(e).expect("entry serializes"));
        out.push('\n');
    }
    out
}

/// Plain-text report with `«…»` highlights on the matched message.
pub fn concordance_text(entries: &[ConcordanceEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let who = |l: &ContextLine| l.author.clone().unwrap_or_else(|| "?".into());
        let _ = writeln!(out, "== #{} {} [{}]", e.channel_name, e.message.ts, e.sub_category);
        for l in &e.before {
            let _ = writeln!(out, "   {}: {}", who(l), l.text);
        }
        let _ = writeln!(out, ">> {}: {}", who(&e.message), e.highlighted());
        for l in &e.after {
            let _ = writeln!(out, "   {}: {}", who(l), l.text);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::test_support::*;
    use crate::lexicon::{default_lexicon, tabulate_keywords};

    fn fixture() -> Corpus {
        corpus(vec![
            msg("C1", 1, "U1", "sorry, late again"),
            msg("C1", 2, "U2", "no worries"),
            msg("C1", 3, "U3", "starting now"),
            msg("C1", 4, "U1", "my mistake on the CAD file"),
            msg("C2", 1, "U2", "help?"),
        ])
    }

    #[test]
    fn two_mistakes_with_one_neighbour() {
        let entries = concordance(&fixture(), &default_lexicon(), "Mistakes", 1).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].before.len(), 0);
        assert_eq!(entries[0].after.len(), 1);
        assert_eq!(entries[1].before.len(), 1);
        assert_eq!(entries[1].after.len(), 0);
        assert_eq!(entries[1].highlighted(), "my «mistake» on the cad file");
    }

    #[test]
    fn first_message_context_is_truncated() {
        let entries = concordance(&fixture(), &default_lexicon(), "mistakes", 2).unwrap();
        assert_eq!(entries[0].before.len(), 0);
        assert!(entries[0].after.len() <= 2);
    }

    #[test]
    fn zero_context_agrees_with_tabulation() {
        let c = fixture();
        let lex = default_lexicon();
        let tab = tabulate_keywords(&c, &lex);
        for row in &tab.rows {
            let n = concordance(&c, &lex, &row.sub_category, 0).unwrap().len() as u64;
            assert_eq!(n, row.messages.numer(), "{}", row.sub_category);
        }
    }

    #[test]
    fn unknown_sub_category() {
        let err = concordance(&fixture(), &default_lexicon(), "Nope", 1).unwrap_err();
        assert!(err.to_string().contains("Asking for Input"));
    }

    #[test]
    fn text_and_jsonl_forms() {
        let entries = concordance(&fixture(), &default_lexicon(), "Asking for Help", 0).unwrap();
        assert_eq!(concordance_text(&entries), "== #C2 1.000000 [Asking for Help]\n>> U2: «help»?\n\n");
        let jsonl = concordance_jsonl(&entries);
        assert_eq!(jsonl.lines().count(), 1);
        let back: ConcordanceEntry = serde_json::from_str(jsonl.trim()).unwrap();
        assert_eq!(back, entries[0]);
    }
}
