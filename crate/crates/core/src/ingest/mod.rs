//! Slack workspace exports as a normalized, redaction-aware [`Corpus`].

mod export;
mod redact;
pub mod text;
mod timestamp;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

pub use export::parse_export;
pub use redact::{redact_users, REDACTED_MENTION};
pub use text::normalize_for_matching;
pub use timestamp::{Timestamp, TimestampError};

#[derive(Debug, thiserror::Error)]
pub enum IngestError {
    #[error("export not found: {}", .0.display())]
    NotFound(PathBuf),
    #[error("export is missing `{0}`")]
    MissingManifest(String),
    #[error("reading {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("reading zip archive {}: {message}", path.display())]
    Zip { path: PathBuf, message: String },
    #[error("malformed JSON in `{file}`: {source}")]
    Json {
        file: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("channel `{channel}`, `{file}` record {index}: {source}")]
    BadTimestamp {
        channel: String,
        file: String,
        index: usize,
        #[source]
        source: TimestampError,
    },
    #[error("channel `{channel}`: duplicate message timestamp {ts}")]
    DuplicateTimestamp { channel: String, ts: Timestamp },
}

/// An emoji reaction attached to a message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reaction {
    /// Shortcode without colons, e.g. `thumbsup`.
    pub name: String,
    pub users: Vec<String>,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub channel_id: String,
    pub ts: Timestamp,
    pub author: Option<String>,
    pub text: String,
    /// Thread anchor. Equal to `ts` on a thread root, the root's `ts` on a reply.
    pub thread_parent: Option<Timestamp>,
    pub reactions: Vec<Reaction>,
    pub file_count: u32,
    pub url_count: u32,
    pub edited: bool,
    /// Set only for system messages (joins, topic changes, ...).
    pub subtype: Option<String>,
}

impl Message {
    /// Whether the message counts toward analytic totals.
    pub fn is_analytic(&self) -> bool {
        self.subtype.is_none()
    }

    pub fn is_thread_root(&self) -> bool {
        self.thread_parent == Some(self.ts)
    }

    /// The root this message replies to, if it is a thread reply.
    pub fn reply_parent(&self) -> Option<Timestamp> {
        self.thread_parent.filter(|p| *p != self.ts)
    }

    pub fn reaction_instances(&self) -> u64 {
        self.reactions.iter().map(|r| u64::from(r.count)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserInfo {
    /// `None` when the author does not appear in the export's roster.
    pub display_name: Option<String>,
    pub consented: bool,
}

/// One team's workspace export. Per-channel message lists are strictly
/// ascending by timestamp, and every author has a roster entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    team_id: String,
    users: BTreeMap<String, UserInfo>,
    channels: BTreeMap<String, String>,
    messages: BTreeMap<String, Vec<Message>>,
}

impl Corpus {
    /// Assemble a corpus, sorting each channel by timestamp and registering
    /// authors missing from `users` as unknown.
    pub fn from_parts(
        team_id: impl Into<String>,
        mut users: BTreeMap<String, UserInfo>,
        mut channels: BTreeMap<String, String>,
        messages: impl IntoIterator<Item = Message>,
    ) -> Result<Corpus, IngestError> {
        let mut by_channel: BTreeMap<String, Vec<Message>> =
            channels.keys().map(|id| (id.clone(), Vec::new())).collect();
        for msg in messages {
            if let Some(author) = &msg.author {
                users.entry(author.clone()).or_insert(UserInfo { display_name: None, consented: true });
            }
            channels.entry(msg.channel_id.clone()).or_insert_with(|| msg.channel_id.clone());
            by_channel.entry(msg.channel_id.clone()).or_default().push(msg);
        }
        for (channel, list) in &mut by_channel {
            list.sort_by_key(|m| m.ts);
            if let Some(w) = list.windows(2).find(|w| w[0].ts == w[1].ts) {
                return Err(IngestError::DuplicateTimestamp { channel: channel.clone(), ts: w[0].ts });
            }
        }
        Ok(Corpus { team_id: team_id.into(), users, channels, messages: by_channel })
    }

    pub fn team_id(&self) -> &str {
        &self.team_id
    }

    pub fn with_team_id(mut self, team_id: impl Into<String>) -> Corpus {
        self.team_id = team_id.into();
        self
    }

    pub fn users(&self) -> &BTreeMap<String, UserInfo> {
        &self.users
    }

    /// Channel id to channel name.
    pub fn channels(&self) -> &BTreeMap<String, String> {
        &self.channels
    }

    pub fn channel_messages(&self, channel_id: &str) -> &[Message] {
        self.messages.get(channel_id).map_or(&[], Vec::as_slice)
    }

    /// `(channel_id, messages)` in channel-id order.
    pub fn channels_with_messages(&self) -> impl Iterator<Item = (&str, &[Message])> {
        self.messages.iter().map(|(id, v)| (id.as_str(), v.as_slice()))
    }

    /// Every message, ordered by (channel id, ts).
    pub fn messages(&self) -> impl Iterator<Item = &Message> {
        self.messages.values().flatten()
    }

    pub fn analytic_messages(&self) -> impl Iterator<Item = &Message> {
        self.messages().filter(|m| m.is_analytic())
    }

    pub fn message_count(&self) -> usize {
        self.messages.values().map(Vec::len).sum()
    }

    pub fn is_consenting(&self, user_id: &str) -> bool {
        self.users.get(user_id).is_none_or(|u| u.consented)
    }

    /// Keep only messages whose author passes `filter`; reactions are untouched.
    pub fn filter_authors(&self, filter: &AuthorFilter) -> Corpus {
        let mut out = self.clone();
        for list in out.messages.values_mut() {
            list.retain(|m| filter.admits(m.author.as_deref()));
        }
        out
    }

    /// Normalized single-document JSON form.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("corpus serializes");
        s.push('\n');
        s
    }

    pub fn from_json(json: &str) -> Result<Corpus, IngestError> {
        let raw: Corpus =
            serde_json::from_str(json).map_err(|source| IngestError::Json { file: "corpus".into(), source })?;
        let messages: Vec<Message> = raw.messages.into_values().flatten().collect();
        Corpus::from_parts(raw.team_id, raw.users, raw.channels, messages)
    }
}

/// Author filter applied before analysis. The default admits every author.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuthorFilter {
    pub exclude: BTreeSet<String>,
    /// Drop messages with no user id (bot and integration posts).
    pub exclude_unattributed: bool,
}

impl AuthorFilter {
    pub fn admits(&self, author: Option<&str>) -> bool {
        match author {
            Some(a) => !self.exclude.contains(a),
            None => !self.exclude_unattributed,
        }
    }

    pub fn is_noop(&self) -> bool {
        self.exclude.is_empty() && !self.exclude_unattributed
    }
}
