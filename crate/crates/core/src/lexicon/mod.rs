//! The psychological-safety keyword lexicon: category → sub-category →
//! patterns, compiled to case-insensitive regular expressions and applied
//! per message.

mod concordance;
mod config;
mod defaults;
mod tabulate;

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use regex::{Regex, RegexBuilder};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ingest::{normalize_for_matching, Message, Timestamp};

pub use concordance::{concordance, concordance_jsonl, concordance_text, ConcordanceEntry, ContextLine};
pub use config::load_lexicon;
pub use defaults::default_lexicon;
pub use tabulate::{tabulate_keywords, KeywordRow, KeywordTabulation};

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("reading lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon document is not valid TOML: {0}")]
    Syntax(String),
    #[error("unknown category `{0}` (expected one of Voice, Supportive, Unsupportive, Learning, Familiarity)")]
    UnknownCategory(String),
    #[error("sub-category `{0}` has an empty pattern list")]
    EmptyPatterns(String),
    #[error("sub-category `{0}` is defined more than once")]
    DuplicateSubCategory(String),
    #[error("sub-category `{sub_category}`: pattern `{pattern}` needs a kind tag (word:, prefix:, phrase: or raw:)")]
    UnknownKind { sub_category: String, pattern: String },
    #[error("sub-category `{sub_category}`: {kind} pattern `{body}` {reason}")]
    InvalidBody { sub_category: String, kind: PatternKind, body: String, reason: &'static str },
    #[error("sub-category `{sub_category}`: pattern `{pattern}` does not compile: {message}")]
    BadRegex { sub_category: String, pattern: String, message: String },
    #[error("unknown sub-category `{name}`; valid names: {}", valid.join(", "))]
    UnknownSubCategory { name: String, valid: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Voice,
    Supportive,
    Unsupportive,
    Learning,
    Familiarity,
}

impl Category {
    pub const ALL: [Category; 5] =
        [Category::Voice, Category::Supportive, Category::Unsupportive, Category::Learning, Category::Familiarity];

    pub fn as_str(&self) -> &'static str {
        match self {
            Category::Voice => "Voice",
            Category::Supportive => "Supportive",
            Category::Unsupportive => "Unsupportive",
            Category::Learning => "Learning",
            Category::Familiarity => "Familiarity",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| LexiconError::UnknownCategory(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    /// Whole word, anchored at both ends.
    Word,
    /// Word stem followed by any word characters (`improv` matches "improvement").
    Prefix,
    /// Whitespace-separated words, anchored at both ends.
    Phrase,
    /// Verbatim regular expression.
    Raw,
}

impl PatternKind {
    pub fn tag(&self) -> &'static str {
        match self {
            PatternKind::Word => "word",
            PatternKind::Prefix => "prefix",
            PatternKind::Phrase => "phrase",
            PatternKind::Raw => "raw",
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PatternSpec {
    pub kind: PatternKind,
    pub body: String,
}

impl PatternSpec {
    pub fn word(body: &str) -> Self {
        PatternSpec { kind: PatternKind::Word, body: body.into() }
    }

    pub fn prefix(body: &str) -> Self {
        PatternSpec { kind: PatternKind::Prefix, body: body.into() }
    }

    pub fn phrase(body: &str) -> Self {
        PatternSpec { kind: PatternKind::Phrase, body: body.into() }
    }

    pub fn raw(body: &str) -> Self {
        PatternSpec { kind: PatternKind::Raw, body: body.into() }
    }

    /// `kind:body`, the form used in lexicon documents.
    pub fn tagged(&self) -> String {
        format!("{}:{}", self.kind, self.body)
    }

    fn parse_tagged(sub_category: &str, s: &str) -> Result<Self, LexiconError> {
        let unknown = || LexiconError::UnknownKind { sub_category: sub_category.to_string(), pattern: s.to_string() };
        let (tag, body) = s.split_once(':').ok_or_else(unknown)?;
        let kind = match tag.trim() {
            "word" => PatternKind::Word,
            "prefix" => PatternKind::Prefix,
            "phrase" => PatternKind::Phrase,
            "raw" => PatternKind::Raw,
            _ => return Err(unknown()),
        };
        Ok(PatternSpec { kind, body: body.to_string() })
    }

    /// The regular expression this pattern compiles to.
    pub fn to_regex_source(&self) -> String {
        let boundary = |c: Option<char>| match c {
            Some(c) if is_word_char(c) => r"\b",
            _ => "",
        };
        let body = self.body.as_str();
        match self.kind {
            PatternKind::Raw => body.to_string(),
            PatternKind::Word => {
                format!("{}{}{}", boundary(body.chars().next()), regex::escape(body), boundary(body.chars().last()))
            }
            PatternKind::Prefix => {
                format!(r"{}{}\w*", boundary(body.chars().next()), regex::escape(body))
            }
            PatternKind::Phrase => {
                let words: Vec<String> = body.split_whitespace().map(regex::escape).collect();
                format!(
                    "{}{}{}",
                    boundary(body.trim().chars().next()),
                    words.join(r"\s+"),
                    boundary(body.trim().chars().last())
                )
            }
        }
    }

    fn validate(&self, sub_category: &str) -> Result<(), LexiconError> {
        let invalid = |reason| LexiconError::InvalidBody {
            sub_category: sub_category.to_string(),
            kind: self.kind,
            body: self.body.clone(),
            reason,
        };
        if self.body.trim().is_empty() {
            return Err(invalid("is empty"));
        }
        match self.kind {
            PatternKind::Raw => Ok(()),
            PatternKind::Word | PatternKind::Prefix if self.body.chars().any(char::is_whitespace) => {
                Err(invalid("contains whitespace; use a phrase pattern"))
            }
            _ if self.body.chars().any(|c| REGEX_META.contains(c)) => {
                Err(invalid("contains regex metacharacters; use a prefix or raw pattern"))
            }
            _ => Ok(()),
        }
    }
}

const REGEX_META: &str = r"\.*+?()[]{}|^$";

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// One sub-category row of the lexicon.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub category: Category,
    pub sub_category: String,
    pub patterns: Vec<PatternSpec>,
}

/// A validated, compiled lexicon. Equality compares entries only.
#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
    matchers: Vec<Regex>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for Lexicon {}

impl Lexicon {
    pub fn new(entries: Vec<LexiconEntry>) -> Result<Lexicon, LexiconError> {
        let mut matchers = Vec::with_capacity(entries.len());
        for (i, entry) in entries.iter().enumerate() {
            if entries[..i].iter().any(|e| e.sub_category.eq_ignore_ascii_case(&entry.sub_category)) {
                return Err(LexiconError::DuplicateSubCategory(entry.sub_category.clone()));
            }
            if entry.patterns.is_empty() {
                return Err(LexiconError::EmptyPatterns(entry.sub_category.clone()));
            }
            let mut alternatives = Vec::with_capacity(entry.patterns.len());
            for p in &entry.patterns {
                p.validate(&entry.sub_category)?;
                let src = p.to_regex_source();
                compile(&src).map_err(|e| LexiconError::BadRegex {
                    sub_category: entry.sub_category.clone(),
                    pattern: p.body.clone(),
                    message: e.to_string(),
                })?;
                alternatives.push(format!("(?:{src})"));
            }
            let combined = compile(&alternatives.join("|")).map_err(|e| LexiconError::BadRegex {
                sub_category: entry.sub_category.clone(),
                pattern: alternatives.join("|"),
                message: e.to_string(),
            })?;
            matchers.push(combined);
        }
        Ok(Lexicon { entries, matchers })
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn sub_category_names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.sub_category.clone()).collect()
    }

    /// Case-insensitive sub-category lookup.
    pub fn find(&self, sub_category: &str) -> Result<usize, LexiconError> {
        self.entries.iter().position(|e| e.sub_category.eq_ignore_ascii_case(sub_category.trim())).ok_or_else(|| {
            LexiconError::UnknownSubCategory { name: sub_category.to_string(), valid: self.sub_category_names() }
        })
    }

    /// SHA-256 of the canonical lexicon document, hex encoded.
    pub fn digest(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Hits of every sub-category on already-normalized matchable text,
    /// in lexicon order. Each hit carries its merged match spans.
    pub fn match_text(&self, matchable: &str) -> Vec<Hit> {
        self.matchers.iter().enumerate().filter_map(|(i, _)| self.match_entry(i, matchable)).collect()
    }

    /// Whether entry `index` fires anywhere in `matchable`.
    pub fn entry_matches(&self, index: usize, matchable: &str) -> bool {
        self.matchers[index].is_match(matchable)
    }

    pub(crate) fn match_entry(&self, index: usize, matchable: &str) -> Option<Hit> {
        let mut spans: Vec<Range<usize>> = Vec::new();
        for m in self.matchers[index].find_iter(matchable) {
            match spans.last_mut() {
                Some(last) if m.start() <= last.end => last.end = last.end.max(m.end()),
                _ => spans.push(m.range()),
            }
        }
        if spans.is_empty() {
            return None;
        }
        let entry = &self.entries[index];
        Some(Hit { category: entry.category, sub_category: entry.sub_category.clone(), spans })
    }
}

fn compile(src: &str) -> Result<Regex, regex::Error> {
    RegexBuilder::new(src).case_insensitive(true).build()
}

/// One sub-category firing on a message. Spans are byte ranges into the
/// matchable text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub category: Category,
    pub sub_category: String,
    pub spans: Vec<Range<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub channel_id: String,
    pub ts: Timestamp,
    /// The text the spans index into.
    pub matchable: String,
    pub hits: Vec<Hit>,
}

impl MatchResult {
    pub fn hit_names(&self) -> Vec<&str> {
        self.hits.iter().map(|h| h.sub_category.as_str()).collect()
    }
}

/// Apply the lexicon to one message. At most one hit per sub-category.
pub fn match_message(lexicon: &Lexicon, message: &Message) -> MatchResult {
    let matchable = normalize_for_matching(&message.text);
    MatchResult {
        channel_id: message.channel_id.clone(),
        ts: message.ts,
        hits: lexicon.match_text(&matchable),
        matchable,
    }
}
