//! Brute-force recount of a Slack export straight from its JSON files.
//!
//! Shares no code with the library: no regex, no corpus model. Keyword rules
//! are re-encoded here by hand from the default keyword table.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

const CONTENT_SUBTYPES: [&str; 6] =
    ["bot_message", "file_comment", "file_mention", "file_share", "me_message", "thread_broadcast"];

#[derive(Debug, Clone)]
pub struct Record {
    pub channel: String,
    pub ts_us: u64,
    pub parent_us: Option<u64>,
    pub author: Option<String>,
    pub raw_text: String,
    pub files: u64,
    pub edited: bool,
    pub analytic: bool,
    /// (name, instances)
    pub reactions: Vec<(String, u64)>,
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Expected {
    pub total: u64,
    pub replies: u64,
    pub replied_roots: u64,
    pub latency_us: u64,
    pub latency_n: u64,
    pub gap_us: u64,
    pub gap_n: u64,
    pub file_shares: u64,
    pub edits: u64,
    pub reaction_instances: u64,
    pub with_reaction: u64,
    pub author_counts: BTreeMap<String, u64>,
    pub channel_mentions: u64,
    pub user_mentions: u64,
    /// Default-lexicon sub-category name → message count.
    pub keywords: Vec<(String, u64)>,
    /// Every reaction emoji, most used first, ties by name.
    pub emoji: Vec<(String, u64)>,
}

fn parse_ts(s: &str) -> u64 {
    let (secs, frac) = s.split_once('.').unwrap_or((s, ""));
    let mut frac = frac.to_string();
    while frac.len() < 6 {
        frac.push('0');
    }
    secs.parse::<u64>().unwrap() * 1_000_000 + frac.parse::<u64>().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

pub fn load_records(export: &Path) -> Vec<Record> {
    let mut out = Vec::new();
    for ch in read_json(&export.join("channels.json")).as_array().unwrap() {
        let name = ch["name"].as_str().unwrap();
        let dir = export.join(name);
        let Ok(entries) = std::fs::read_dir(&dir) else { continue };
        for entry in entries {
            let path = entry.unwrap().path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            for rec in read_json(&path).as_array().unwrap() {
                let ts_us = parse_ts(rec["ts"].as_str().unwrap());
                let subtype = rec.get("subtype").and_then(Value::as_str);
                let reactions = rec
                    .get("reactions")
                    .and_then(Value::as_array)
                    .map(|rs| {
                        rs.iter()
                            .map(|r| {
                                let users = r.get("users").and_then(Value::as_array).map_or(0, Vec::len) as u64;
                                let n =
                                    if users > 0 { users } else { r.get("count").and_then(Value::as_u64).unwrap_or(0) };
                                (r["name"].as_str().unwrap().trim_matches(':').to_string(), n)
                            })
                            .filter(|(name, n)| !name.is_empty() && *n > 0)
                            .collect()
                    })
                    .unwrap_or_default();
                out.push(Record {
                    channel: ch["id"].as_str().unwrap().to_string(),
                    ts_us,
                    parent_us: rec.get("thread_ts").and_then(Value::as_str).map(parse_ts),
                    author: rec.get("user").and_then(Value::as_str).map(str::to_string),
                    raw_text: rec.get("text").and_then(Value::as_str).unwrap_or("").to_string(),
                    files: rec.get("files").and_then(Value::as_array).map_or(0, Vec::len) as u64,
                    edited: rec.get("edited").is_some_and(|v| !v.is_null()),
                    analytic: subtype.is_none_or(|s| CONTENT_SUBTYPES.contains(&s)),
                    reactions,
                });
            }
        }
    }
    out
}

pub fn unescape(raw: &str) -> String {
    raw.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&amp;", "&")
        .replace(['\u{2019}', '\u{2018}', '\u{02BC}'], "'")
}

/// Every `<...>` candidate: the text from each `<` up to the next `>`.
fn tokens(text: &str) -> Vec<String> {
    text.match_indices('<')
        .filter_map(|(i, _)| {
            let after = &text[i + 1..];
            after.find('>').map(|close| after[..close].to_string())
        })
        .collect()
}

fn is_link(tok: &str) -> bool {
    tok.starts_with("http:") || tok.starts_with("https:")
}

fn is_broadcast(tok: &str) -> bool {
    ["!channel", "!here"].iter().any(|p| tok == *p || tok.strip_prefix(p).is_some_and(|r| r.starts_with('|')))
}

/// Replace mention and link tokens, then lower-case.
pub fn matchable(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] == '<' {
            if let Some(len) = chars[i + 1..].iter().position(|&c| c == '>') {
                let tok: String = chars[i + 1..i + 1 + len].iter().collect();
                let replacement = if tok.starts_with('@') {
                    Some("@user")
                } else if is_broadcast(&tok) {
                    Some("@channel")
                } else if is_link(&tok) {
                    Some("URL")
                } else {
                    None
                };
                if let Some(r) = replacement {
                    out.push_str(r);
                    i += len + 2;
                    continue;
                }
            }
        }
        out.push(chars[i]);
        i += 1;
    }
    out.to_lowercase()
}

fn is_word(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Occurrences of `needle` in `hay` (as char index ranges).
fn occurrences(hay: &[char], needle: &[char]) -> Vec<(usize, usize)> {
    if needle.is_empty() || needle.len() > hay.len() {
        return Vec::new();
    }
    (0..=hay.len() - needle.len())
        .filter(|&i| hay[i..i + needle.len()] == *needle)
        .map(|i| (i, i + needle.len()))
        .collect()
}

fn left_ok(hay: &[char], start: usize, first: char) -> bool {
    !is_word(first) || start == 0 || !is_word(hay[start - 1])
}

fn right_ok(hay: &[char], end: usize, last: char) -> bool {
    !is_word(last) || end == hay.len() || !is_word(hay[end])
}

pub fn has_word(text: &str, word: &str) -> bool {
    let hay: Vec<char> = text.chars().collect();
    let w: Vec<char> = word.chars().collect();
    occurrences(&hay, &w).into_iter().any(|(s, e)| left_ok(&hay, s, w[0]) && right_ok(&hay, e, w[w.len() - 1]))
}

pub fn has_prefix(text: &str, stem: &str) -> bool {
    let hay: Vec<char> = text.chars().collect();
    let w: Vec<char> = stem.chars().collect();
    occurrences(&hay, &w).into_iter().any(|(s, _)| left_ok(&hay, s, w[0]))
}

/// Words separated by one or more whitespace characters.
pub fn has_phrase(text: &str, phrase: &str) -> bool {
    let hay: Vec<char> = text.chars().collect();
    let words: Vec<Vec<char>> = phrase.split(' ').map(|w| w.chars().collect()).collect();
    let first = &words[0];
    'start: for (s, mut at) in occurrences(&hay, first) {
        if !left_ok(&hay, s, first[0]) {
            continue;
        }
        for w in &words[1..] {
            let gap = hay[at..].iter().take_while(|c| c.is_whitespace()).count();
            if gap == 0 || hay.len() < at + gap + w.len() || hay[at + gap..at + gap + w.len()] != **w {
                continue 'start;
            }
            at += gap + w.len();
        }
        let last = words.last().unwrap();
        if right_ok(&hay, at, last[last.len() - 1]) {
            return true;
        }
    }
    false
}

pub fn has_emoji_code(text: &str) -> bool {
    let ok = |c: char| c.is_ascii_lowercase() || c.is_ascii_digit() || "_+'-".contains(c);
    let chars: Vec<char> = text.chars().collect();
    (0..chars.len()).any(|i| {
        chars[i] == ':' && {
            let run = chars[i + 1..].iter().take_while(|&&c| ok(c)).count();
            run > 0 && chars.get(i + 1 + run) == Some(&':')
        }
    })
}

pub enum Rule {
    Words(&'static [&'static str]),
    Prefixes(&'static [&'static str]),
    Phrases(&'static [&'static str]),
    QuestionMark,
    EmojiCode,
}

/// The default keyword table: (sub-category, rules).
pub fn keyword_table() -> Vec<(&'static str, Vec<Rule>)> {
    use Rule::*;
    vec![
        ("Mistakes", vec![Words(&["sorry", "mistake"]), Prefixes(&["apolog"])]),
        (
            "Critiques",
            vec![Words(&["incorrect", "disagree", "wrong", "impossible", "unlikely"]), Phrases(&["don't think"])],
        ),
        ("Asking for Help", vec![Phrases(&["don't know"]), Words(&["unsure", "help"])]),
        ("Questions", vec![Words(&["who", "what", "where", "why", "how"]), QuestionMark]),
        ("Agreement", vec![Words(&["yes", "yeah", "ya", "yea"]), Prefixes(&["agree"])]),
        ("Appreciative", vec![Prefixes(&["congrat", "thank"]), Words(&["amazing", "amaze", "wonderful", "wow"])]),
        ("Unappreciative", vec![Phrases(&["not needed"]), Words(&["stop", "waste"])]),
        ("Suggestions", vec![Prefixes(&["improv", "actual"]), Words(&["better", "instead"]), Phrases(&["what if"])]),
        ("Asking for Input", vec![Words(&["feedback", "share", "thoughts"]), Prefixes(&["idea"])]),
        ("Emojis", vec![EmojiCode]),
        ("Jokes", vec![Prefixes(&["hah", "aha", "lol", "lmao", "jok"])]),
    ]
}

pub fn rule_hits(rule: &Rule, m: &str) -> bool {
    match rule {
        Rule::Words(ws) => ws.iter().any(|w| has_word(m, w)),
        Rule::Prefixes(ps) => ps.iter().any(|p| has_prefix(m, p)),
        Rule::Phrases(ps) => ps.iter().any(|p| has_phrase(m, p)),
        Rule::QuestionMark => m.contains('?'),
        Rule::EmojiCode => has_emoji_code(m),
    }
}

/// Sub-categories hit by a piece of corpus-normalized text.
pub fn keyword_hits(text: &str) -> Vec<&'static str> {
    let m = matchable(text);
    keyword_table()
        .into_iter()
        .filter(|(_, rules)| rules.iter().any(|r| rule_hits(r, &m)))
        .map(|(name, _)| name)
        .collect()
}

pub fn expected(export: &Path) -> Expected {
    let records = load_records(export);
    let analytic: Vec<&Record> = records.iter().filter(|r| r.analytic).collect();
    let mut e = Expected::default();
    let table = keyword_table();
    let mut kw = vec![0u64; table.len()];
    let mut emoji: BTreeMap<String, u64> = BTreeMap::new();

    for r in &analytic {
        e.total += 1;
        let is_reply = r.parent_us.is_some_and(|p| p != r.ts_us);
        if is_reply {
            e.replies += 1;
        }
        let links = tokens(&r.raw_text).iter().filter(|t| is_link(t)).count() as u64;
        if r.files + links > 0 {
            e.file_shares += 1;
        }
        if r.edited {
            e.edits += 1;
        }
        let inst: u64 = r.reactions.iter().map(|(_, n)| n).sum();
        e.reaction_instances += inst;
        if inst > 0 {
            e.with_reaction += 1;
        }
        for (name, n) in &r.reactions {
            *emoji.entry(name.clone()).or_default() += n;
        }
        let text = unescape(&r.raw_text);
        let toks = tokens(&text);
        if toks.iter().any(|t| is_broadcast(t)) {
            e.channel_mentions += 1;
        }
        if toks.iter().any(|t| t.starts_with('@')) {
            e.user_mentions += 1;
        }
        if let Some(a) = &r.author {
            *e.author_counts.entry(a.clone()).or_default() += 1;
        }
        let m = matchable(&text);
        for (i, (_, rules)) in table.iter().enumerate() {
            if rules.iter().any(|rule| rule_hits(rule, &m)) {
                kw[i] += 1;
            }
        }

        // Root side: earliest analytic reply in the same channel.
        let first_reply = analytic
            .iter()
            .filter(|x| x.channel == r.channel && x.ts_us != r.ts_us && x.parent_us == Some(r.ts_us))
            .map(|x| x.ts_us)
            .min();
        if let Some(t) = first_reply {
            e.replied_roots += 1;
            e.latency_us += t - r.ts_us;
            e.latency_n += 1;
        }
    }

    let mut by_channel: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    for r in &analytic {
        by_channel.entry(&r.channel).or_default().push(r.ts_us);
    }
    for ts in by_channel.values_mut() {
        ts.sort();
        for w in ts.windows(2) {
            e.gap_us += w[1] - w[0];
            e.gap_n += 1;
        }
    }

    e.keywords = table.iter().zip(kw).map(|((n, _), c)| (n.to_string(), c)).collect();
    let mut ranked: Vec<(String, u64)> = emoji.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    e.emoji = ranked;
    e
}
