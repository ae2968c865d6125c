use serde::{Deserialize, Serialize};

use super::{Category, Lexicon};
use crate::ingest::{normalize_for_matching, Corpus};
use crate::num::Fraction;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordRow {
    pub category: Category,
    pub sub_category: String,
    /// Messages with at least one hit, over analytic messages.
    pub messages: Fraction,
}

/// Messages per sub-category. Sub-categories overlap, so shares need not sum to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeywordTabulation {
    pub total_messages: u64,
    pub rows: Vec<KeywordRow>,
}

impl KeywordTabulation {
    pub fn row(&self, sub_category: &str) -> Option<&KeywordRow> {
        self.rows.iter().find(|r| r.sub_category.eq_ignore_ascii_case(sub_category))
    }
}

pub fn tabulate_keywords(corpus: &Corpus, lexicon: &Lexicon) -> KeywordTabulation {
    let mut counts = vec![0u64; lexicon.entries().len()];
    let mut total = 0u64;
    for msg in corpus.analytic_messages() {
        total += 1;
        let matchable = normalize_for_matching(&msg.text);
        for (i, c) in counts.iter_mut().enumerate() {
            if lexicon.entry_matches(i, &matchable) {
                *c += 1;
            }
        }
    }
    let rows = lexicon
        .entries()
        .iter()
        .zip(counts)
        .map(|(e, count)| KeywordRow {
            category: e.category,
            sub_category: e.sub_category.clone(),
            messages: Fraction::new(count, total),
        })
        .collect();
    KeywordTabulation { total_messages: total, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::test_support::*;
    use crate::lexicon::default_lexicon;

    #[test]
    fn questions_in_ten_messages() {
        let texts = ["is it done?", "yes", "ok", "why not?", "fine", "hmm", "later", "?", "go", "k"];
        let c = corpus(texts.iter().enumerate().map(|(i, t)| msg("C1", i as u64, "U1", t)).collect());
        let t = tabulate_keywords(&c, &default_lexicon());
        assert_eq!(t.total_messages, 10);
        let q = t.row("Questions").unwrap();
        assert_eq!(q.messages, Fraction::new(3, 10));
        assert_eq!(q.messages.percent_rounded(), Some(30));
    }

    #[test]
    fn uniform_thanks() {
        let c = corpus((0..4).map(|i| msg("C1", i, "U1", "thanks!")).collect());
        let t = tabulate_keywords(&c, &default_lexicon());
        assert_eq!(t.row("Appreciative").unwrap().messages.percent_rounded(), Some(100));
    }

    #[test]
    fn empty_corpus_is_undefined() {
        let t = tabulate_keywords(&corpus(vec![]), &default_lexicon());
        assert_eq!(t.total_messages, 0);
        assert!(t.rows.iter().all(|r| !r.messages.is_defined()));
    }

    #[test]
    fn system_messages_are_not_counted() {
        let mut join = msg("C1", 1, "U1", "<@U1> has joined. help?");
        join.subtype = Some("channel_join".into());
        let c = corpus(vec![join, msg("C1", 2, "U2", "help")]);
        let t = tabulate_keywords(&c, &default_lexicon());
        assert_eq!(t.total_messages, 1);
        assert_eq!(t.row("Questions").unwrap().messages.numer(), 0);
        assert_eq!(t.row("Asking for Help").unwrap().messages.numer(), 1);
    }
}
