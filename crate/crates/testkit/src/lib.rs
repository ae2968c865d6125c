//! Seeded generators for synthetic Slack-style exports and survey responses.
//!
//! Everything here is deterministic in the seed so fixtures can be
//! regenerated byte for byte.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

use chrono::DateTime;
use rand::seq::IndexedRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// 2020-01-06 09:00:00 UTC.
const EPOCH_START: u64 = 1_578_301_200;

const PLAIN: &[&str] = &[
    "ok",
    "the build is green",
    "pushed the branch",
    "meeting moved to 3pm",
    "lunch",
    "see the doc",
    "deploying now",
    "the client called",
    "notes are up",
    "done",
    "on it",
    "sounds good",
    "merged",
    "running late",
    "the numbers look off today",
];

const KEYWORD: &[&str] = &[
    "sorry, my mistake",
    "I apologise for the delay",
    "I disagree with that plan",
    "that seems wrong to me",
    "I don't think that's right",
    "I don’t know how to fix this",
    "can someone help with the deploy",
    "where is the spec?",
    "why did the job fail",
    "yes let's do it",
    "yeah agreed",
    "I agree that we should buy all 4",
    "congrats on the launch!",
    "thank you so much, amazing work",
    "wow",
    "please stop pushing to main",
    "this is a waste of time, not needed",
    "we could improve the tests",
    "what if we cache it instead",
    "actually the better option is the queue",
    "any feedback on my draft? thoughts?",
    "I have an idea to share",
    "hahaha nice one",
    "lol :joy:",
    "just joking :wink:",
    "lmao :sob:",
    "We talked about so many things I got confused so sorry",
    "you’re telling me I left RIGHT when this started :sob:",
    "Q&amp;A at 4, bring snacks &lt;3",
];

/// Words containing a lexicon stem or keyword only as a non-initial substring.
pub const ADVERSARIAL_WORDS: &[&str] = &[
    "disagreement",
    "helpful",
    "helpdesk",
    "shareholder",
    "stopwatch",
    "wastewater",
    "yesterday",
    "yard",
    "yak",
    "layer",
    "somehow",
    "showing",
    "whatever",
    "whoever",
    "somewhere",
    "anywhere",
    "nowhere",
    "better_known",
    "unthankful",
    "schaha",
    "bravo",
    "eyeballs",
    "mistaken",
    "sorrow",
    "factual",
    "unimproved",
    "hideaway",
    "slaha",
    "cajoled",
    "shelol",
    "koala",
    "whole",
    "eyebrow",
    "sharp",
];

const EMOJI_REACTIONS: &[&str] = &[
    "heart",
    "+1",
    "thumbsup",
    "tada",
    "joy",
    "eyes",
    "white_check_mark",
    "pray",
    "blob_dance",
    "team-party",
    "thumbsup::skin-tone-2",
    "100",
];

/// One generated export: relative path → file bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntheticExport {
    pub team_id: String,
    pub files: BTreeMap<String, Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportSpec {
    pub team_id: String,
    pub seed: u64,
    pub channels: usize,
    /// Human messages across all channels, plus a few system joins on top.
    pub messages: usize,
    pub users: usize,
}

impl ExportSpec {
    pub fn new(team_id: &str, seed: u64, channels: usize, messages: usize) -> Self {
        ExportSpec { team_id: team_id.to_string(), seed, channels, messages, users: 6 }
    }
}

pub const CHANNEL_NAMES: &[&str] = &["general", "dev", "random", "design", "standup", "ops", "release", "support"];

fn channel_name(i: usize) -> String {
    match CHANNEL_NAMES.get(i) {
        Some(n) => n.to_string(),
        None => format!("channel-{i}"),
    }
}

fn user_id(i: usize) -> String {
    format!("U{:03}", i + 1)
}

fn ts_string(micros: u64) -> String {
    format!("{}.{:06}", micros / 1_000_000, micros % 1_000_000)
}

fn day_of(micros: u64) -> String {
    let secs = (micros / 1_000_000) as i64;
    DateTime::from_timestamp(secs, 0).expect("timestamp in range").format("%Y-%m-%d").to_string()
}

fn message_text(rng: &mut ChaCha8Rng, users: usize) -> String {
    let mut parts: Vec<String> = Vec::new();
    match rng.random_range(0..10) {
        0..=3 => parts.push(PLAIN.choose(rng).unwrap().to_string()),
        4..=7 => parts.push(KEYWORD.choose(rng).unwrap().to_string()),
        _ => {
            let n = rng.random_range(1..4);
            for _ in 0..n {
                parts.push(ADVERSARIAL_WORDS.choose(rng).unwrap().to_string());
            }
        }
    }
    if rng.random_bool(0.12) {
        parts.push(format!("<@{}>", user_id(rng.random_range(0..users))));
    }
    if rng.random_bool(0.04) {
        parts.push(["<!channel>", "<!here>", "<!here|here>"].choose(rng).unwrap().to_string());
    }
    if rng.random_bool(0.08) {
        let url =
            ["<https://example.com/help>", "<https://docs.example.org/faq?q=why|faq>", "<http://intranet/thanks>"];
        parts.push(url.choose(rng).unwrap().to_string());
    }
    if rng.random_bool(0.08) {
        parts.push([":tada:", ":blob-dance:", ":+1:", ":face_with_rolling_eyes:"].choose(rng).unwrap().to_string());
    }
    if rng.random_bool(0.3) {
        let i = rng.random_range(0..parts.len());
        if !parts[i].contains(['<', '&', ':']) {
            parts[i] = parts[i].to_uppercase();
        }
    }
    parts.join(" ")
}

fn reactions(rng: &mut ChaCha8Rng, users: usize) -> Option<Value> {
    if !rng.random_bool(0.3) {
        return None;
    }
    let mut names: Vec<&str> = Vec::new();
    for _ in 0..rng.random_range(1..4) {
        let n = *EMOJI_REACTIONS.choose(rng).unwrap();
        if !names.contains(&n) {
            names.push(n);
        }
    }
    let list: Vec<Value> = names
        .into_iter()
        .map(|name| {
            let mut who: Vec<String> = Vec::new();
            for _ in 0..rng.random_range(1..=users.min(4)) {
                let u = user_id(rng.random_range(0..users));
                if !who.contains(&u) {
                    who.push(u);
                }
            }
            json!({"name": name, "users": who, "count": who.len()})
        })
        .collect();
    Some(Value::Array(list))
}

impl SyntheticExport {
    pub fn generate(spec: &ExportSpec) -> SyntheticExport {
        assert!(spec.channels >= 1 && spec.users >= 2);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let users: Vec<Value> = (0..spec.users)
            .map(|i| {
                json!({
                    "id": user_id(i),
                    "name": format!("user{}", i + 1),
                    "real_name": format!("User {}", i + 1),
                    "profile": {"display_name": if i % 2 == 0 { format!("u{}", i + 1) } else { String::new() }},
                })
            })
            .collect();
        let channels: Vec<Value> = (0..spec.channels)
            .map(|i| json!({"id": format!("C{:03}", i + 1), "name": channel_name(i), "created": EPOCH_START}))
            .collect();

        // Author weights are skewed so contribution shares differ.
        let weights: Vec<u32> = (0..spec.users as u32).map(|i| spec.users as u32 - i + 1).collect();
        let total_weight: u32 = weights.iter().sum();
        let pick_author = |rng: &mut ChaCha8Rng| {
            let mut x = rng.random_range(0..total_weight);
            for (i, w) in weights.iter().enumerate() {
                if x < *w {
                    return user_id(i);
                }
                x -= w;
            }
            unreachable!()
        };

        let mut per_channel: Vec<Vec<Value>> = vec![Vec::new(); spec.channels];
        let mut clock: Vec<u64> = (0..spec.channels as u64).map(|c| EPOCH_START * 1_000_000 + c * 7_000_000).collect();
        // Indexes of thread roots per channel.
        let mut roots: Vec<Vec<usize>> = vec![Vec::new(); spec.channels];
        for (c, msgs) in per_channel.iter_mut().enumerate() {
            for u in 0..2.min(spec.users) {
                clock[c] += rng.random_range(1..600) * 1_000_000 + rng.random_range(0..1_000_000);
                let uid = user_id(u);
                msgs.push(json!({
                    "type": "message", "subtype": "channel_join", "user": uid,
                    "text": format!("<@{uid}> has joined the channel"), "ts": ts_string(clock[c]),
                }));
            }
        }

        for _ in 0..spec.messages {
            let c = rng.random_range(0..spec.channels);
            clock[c] += rng.random_range(5..5_400) * 1_000_000 + rng.random_range(0..1_000_000);
            let ts = ts_string(clock[c]);
            let mut m = serde_json::Map::new();
            m.insert("type".into(), json!("message"));
            m.insert("text".into(), json!(message_text(&mut rng, spec.users)));
            m.insert("ts".into(), json!(ts));
            match rng.random_range(0..40) {
                0 => {
                    m.insert("subtype".into(), json!("bot_message"));
                    m.insert("bot_id".into(), json!("B001"));
                    m.insert("username".into(), json!("ci-bot"));
                }
                1 => {
                    m.insert("subtype".into(), json!("file_share"));
                    m.insert("user".into(), json!(pick_author(&mut rng)));
                    m.insert("files".into(), json!([{"id": format!("F{}", clock[c]), "name": "notes.pdf"}]));
                }
                _ => {
                    m.insert("user".into(), json!(pick_author(&mut rng)));
                }
            }
            if rng.random_bool(0.06) && !m.contains_key("files") {
                m.insert("files".into(), json!([{"id": format!("F{}", clock[c]), "name": "img.png"}]));
            }
            if rng.random_bool(0.07) {
                m.insert("edited".into(), json!({"user": "U001", "ts": ts_string(clock[c] + 30_000_000)}));
            }
            if let Some(r) = reactions(&mut rng, spec.users) {
                m.insert("reactions".into(), r);
            }
            let msgs = &mut per_channel[c];
            let eligible: Vec<usize> = msgs
                .iter()
                .enumerate()
                .filter(|(_, v)| v.get("subtype").is_none() && v.get("parent_user_id").is_none())
                .map(|(i, _)| i)
                .collect();
            if !eligible.is_empty() && rng.random_bool(0.25) {
                // Prefer recent messages and existing threads as parents.
                let root = if !roots[c].is_empty() && rng.random_bool(0.5) {
                    *roots[c].choose(&mut rng).unwrap()
                } else {
                    eligible[eligible.len() - 1 - rng.random_range(0..eligible.len().min(5))]
                };
                let root_ts = msgs[root]["ts"].as_str().unwrap().to_string();
                let root_user = msgs[root].get("user").cloned().unwrap_or(Value::Null);
                m.insert("thread_ts".into(), json!(root_ts));
                m.insert("parent_user_id".into(), root_user);
                let r = msgs[root].as_object_mut().unwrap();
                r.insert("thread_ts".into(), json!(root_ts));
                let n = r.get("reply_count").and_then(Value::as_u64).unwrap_or(0);
                r.insert("reply_count".into(), json!(n + 1));
                if !roots[c].contains(&root) {
                    roots[c].push(root);
                }
            }
            msgs.push(Value::Object(m));
        }

        let mut files = BTreeMap::new();
        files.insert("users.json".to_string(), pretty(&Value::Array(users)));
        files.insert("channels.json".to_string(), pretty(&Value::Array(channels)));
        for (c, msgs) in per_channel.into_iter().enumerate() {
            let mut by_day: BTreeMap<String, Vec<Value>> = BTreeMap::new();
            for m in msgs {
                let micros = parse_ts(m["ts"].as_str().unwrap());
                by_day.entry(day_of(micros)).or_default().push(m);
            }
            for (day, mut list) in by_day {
                // Slack writes days in order but not always in ts order.
                if list.len() > 2 && rng.random_bool(0.3) {
                    list.swap(0, 1);
                }
                files.insert(format!("{}/{day}.json", channel_name(c)), pretty(&Value::Array(list)));
            }
        }
        SyntheticExport { team_id: spec.team_id.clone(), files }
    }

    /// Write under `parent/<team_id>/` and return that directory.
    pub fn write_dir(&self, parent: &Path) -> io::Result<PathBuf> {
        let root = parent.join(&self.team_id);
        for (rel, bytes) in &self.files {
            let path = root.join(rel);
            std::fs::create_dir_all(path.parent().unwrap())?;
            std::fs::write(path, bytes)?;
        }
        Ok(root)
    }

    /// Total records across all channel-day files.
    pub fn record_count(&self) -> usize {
        self.files
            .iter()
            .filter(|(k, _)| k.contains('/'))
            .map(|(_, v)| serde_json::from_slice::<Vec<Value>>(v).unwrap().len())
            .sum()
    }
}

fn parse_ts(s: &str) -> u64 {
    let (secs, frac) = s.split_once('.').unwrap();
    secs.parse::<u64>().unwrap() * 1_000_000 + frac.parse::<u64>().unwrap()
}

fn pretty(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).unwrap();
    out.push(b'\n');
    out
}

/// The three bundled fixture exports.
pub fn fixture_specs() -> Vec<ExportSpec> {
    vec![ExportSpec::new("team2", 2, 3, 120), ExportSpec::new("team5", 5, 2, 48), ExportSpec::new("team6", 6, 4, 180)]
}

/// 10,000 human messages over five channels.
pub fn scale_spec() -> ExportSpec {
    ExportSpec { users: 14, ..ExportSpec::new("scale", 10_000, 5, 10_000) }
}

/// Item vectors that score exactly `score` under reverse coding of items
/// 1, 3 and 5: plain items carry `score`, reversed items `8 - score`.
pub fn items_scoring(score: u8) -> [u8; 7] {
    assert!((1..=7).contains(&score));
    let r = 8 - score;
    [r, score, r, score, r, score, score]
}

/// Per-period means for six teams: team6 lowest throughout, team2
/// consistently high, team5 highest mean but volatile.
pub fn figure_period_means() -> Vec<(&'static str, [f64; 3])> {
    vec![
        ("team1", [5.5, 5.7, 5.6]),
        ("team2", [6.0, 6.0, 6.1]),
        ("team3", [5.8, 5.6, 6.0]),
        ("team4", [5.4, 5.9, 5.6]),
        ("team5", [6.6, 5.3, 6.5]),
        ("team6", [4.6, 5.0, 5.4]),
    ]
}

/// Survey CSV with ten respondents per team and period whose scores (under
/// the default reverse coding) average exactly to `figure_period_means`.
pub fn figure_survey_csv() -> String {
    let mut out = String::from("team_id,period,respondent,q1,q2,q3,q4,q5,q6,q7\n");
    for (team, means) in figure_period_means() {
        for (p, mean) in means.iter().enumerate() {
            let tenths = (mean * 10.0).round() as u32;
            let (base, extra) = (tenths / 10, tenths % 10);
            for r in 0..10u32 {
                let score = (base + u32::from(r < extra)) as u8;
                let items = items_scoring(score);
                let cells: Vec<String> = items.iter().map(u8::to_string).collect();
                out.push_str(&format!("{team},{},r{:02},{}\n", p + 1, r + 1, cells.join(",")));
            }
        }
    }
    out
}

/// A random response set: `(respondent, items)` pairs with 1..=12 respondents.
pub fn random_response_set(seed: u64) -> Vec<(String, [u8; 7])> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=12);
    (0..n)
        .map(|i| {
            let mut items = [0u8; 7];
            for v in &mut items {
                *v = rng.random_range(1..=7);
            }
            (format!("r{i}"), items)
        })
        .collect()
}
