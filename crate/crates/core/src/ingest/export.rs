use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::text::{count_links, normalize_export_text};
use super::{Corpus, IngestError, Message, Reaction, Timestamp, UserInfo};

/// Subtypes that still carry a human-written message.
const CONTENT_SUBTYPES: &[&str] =
    &["bot_message", "file_comment", "file_mention", "file_share", "me_message", "thread_broadcast"];

#[derive(Deserialize)]
struct RawChannel {
    id: String,
    name: String,
}

#[derive(Deserialize)]
struct RawUser {
    id: String,
    name: Option<String>,
    real_name: Option<String>,
    profile: Option<RawProfile>,
}

#[derive(Deserialize)]
struct RawProfile {
    display_name: Option<String>,
    real_name: Option<String>,
}

#[derive(Deserialize)]
struct RawMessage {
    ts: Option<Value>,
    user: Option<String>,
    #[serde(default)]
    text: String,
    thread_ts: Option<Value>,
    #[serde(default)]
    reactions: Vec<RawReaction>,
    #[serde(default)]
    files: Vec<Value>,
    edited: Option<Value>,
    subtype: Option<String>,
}

#[derive(Deserialize)]
struct RawReaction {
    #[serde(default)]
    name: String,
    #[serde(default)]
    users: Vec<String>,
    count: Option<u32>,
}

/// Parse a Slack export (unzipped directory or `.zip`) into a [`Corpus`].
///
/// The team id is the directory name or the archive's file stem.
pub fn parse_export(path: &Path) -> Result<Corpus, IngestError> {
    if !path.exists() {
        return Err(IngestError::NotFound(path.to_path_buf()));
    }
    let files = if path.is_dir() { read_dir_files(path)? } else { read_zip_files(path)? };
    let team_id = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "team".to_string());
    build_corpus(team_id, &files)
}

type ExportFiles = BTreeMap<String, Vec<u8>>;

fn read_dir_files(root: &Path) -> Result<ExportFiles, IngestError> {
    let mut files = ExportFiles::new();
    for entry in walkdir::WalkDir::new(root).max_depth(4) {
        let entry =
            entry.map_err(|e| IngestError::Io { path: e.path().unwrap_or(root).to_path_buf(), source: e.into() })?;
        if !entry.file_type().is_file() || !is_json(entry.path()) {
            continue;
        }
        let rel = entry.path().strip_prefix(root).expect("walkdir stays under root");
        let key = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
        let bytes =
            fs::read(entry.path()).map_err(|source| IngestError::Io { path: entry.path().to_path_buf(), source })?;
        files.insert(key, bytes);
    }
    Ok(files)
}

fn read_zip_files(path: &Path) -> Result<ExportFiles, IngestError> {
    let zip_err = |e: zip::result::ZipError| IngestError::Zip { path: path.to_path_buf(), message: e.to_string() };
    let file = fs::File::open(path).map_err(|source| IngestError::Io { path: path.to_path_buf(), source })?;
    let mut archive = zip::ZipArchive::new(file).map_err(zip_err)?;
    let mut files = ExportFiles::new();
    for i in 0..archive.len() {
        let mut entry = archive.by_index(i).map_err(zip_err)?;
        let name = entry.name().map_err(zip_err)?.into_owned();
        if entry.is_dir() || !name.ends_with(".json") {
            continue;
        }
        let mut bytes = Vec::with_capacity(entry.size() as usize);
        entry.read_to_end(&mut bytes).map_err(|source| IngestError::Io { path: path.join(&name), source })?;
        files.insert(name, bytes);
    }
    Ok(files)
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "json")
}

fn parse_json<T: for<'de> Deserialize<'de>>(file: &str, bytes: &[u8]) -> Result<T, IngestError> {
    serde_json::from_slice(bytes).map_err(|source| IngestError::Json { file: file.to_string(), source })
}

fn build_corpus(team_id: String, files: &ExportFiles) -> Result<Corpus, IngestError> {
    // Archives often wrap everything in one top-level folder; the export
    // root is wherever the shallowest channels.json lives.
    let manifest = files
        .keys()
        .filter(|k| k.rsplit('/').next() == Some("channels.json"))
        .min_by_key(|k| (k.matches('/').count(), k.as_str()))
        .ok_or_else(|| IngestError::MissingManifest("channels.json".into()))?;
    let root = &manifest[..manifest.len() - "channels.json".len()];

    let users_key = format!("{root}users.json");
    let users_bytes = files.get(&users_key).ok_or_else(|| IngestError::MissingManifest("users.json".into()))?;

    let raw_channels: Vec<RawChannel> = parse_json("channels.json", &files[manifest])?;
    let raw_users: Vec<RawUser> = parse_json("users.json", users_bytes)?;

    let users: BTreeMap<String, UserInfo> = raw_users
        .into_iter()
        .map(|u| {
            let display = u
                .profile
                .as_ref()
                .and_then(|p| p.display_name.clone().filter(|s| !s.is_empty()))
                .or_else(|| u.profile.as_ref().and_then(|p| p.real_name.clone()))
                .or(u.real_name)
                .or(u.name)
                .filter(|s| !s.is_empty())
                .unwrap_or_else(|| u.id.clone());
            (u.id, UserInfo { display_name: Some(display), consented: true })
        })
        .collect();

    let mut channels = BTreeMap::new();
    let mut messages = Vec::new();
    for ch in raw_channels {
        let prefix = format!("{root}{}/", ch.name);
        for (key, bytes) in files.range(prefix.clone()..) {
            let Some(file_name) = key.strip_prefix(&prefix) else {
                break;
            };
            if file_name.contains('/') {
                continue;
            }
            let display = format!("{}/{}", ch.name, file_name);
            let records: Vec<RawMessage> = parse_json(&display, bytes)?;
            for (index, rec) in records.into_iter().enumerate() {
                messages.push(convert_message(&ch, &display, index, rec)?);
            }
        }
        channels.insert(ch.id, ch.name);
    }
    Corpus::from_parts(team_id, users, channels, messages)
}

fn convert_message(channel: &RawChannel, file: &str, index: usize, rec: RawMessage) -> Result<Message, IngestError> {
    let bad_ts = |raw: &Option<Value>| IngestError::BadTimestamp {
        channel: channel.name.clone(),
        file: file.to_string(),
        index,
        source: super::TimestampError(match raw {
            Some(v) => v.to_string(),
            None => "<missing>".to_string(),
        }),
    };
    let parse_ts = |raw: &Option<Value>| -> Result<Timestamp, IngestError> {
        match raw {
            Some(Value::String(s)) => s.parse().map_err(|_| bad_ts(raw)),
            _ => Err(bad_ts(raw)),
        }
    };
    let ts = parse_ts(&rec.ts)?;
    let thread_parent = match &rec.thread_ts {
        None | Some(Value::Null) => None,
        Some(_) => Some(parse_ts(&rec.thread_ts)?),
    };
    let reactions = rec
        .reactions
        .into_iter()
        .filter_map(|r| {
            let name = r.name.trim_matches(':').to_string();
            let count = if r.users.is_empty() { r.count.unwrap_or(0) } else { r.users.len() as u32 };
            (!name.is_empty() && count > 0).then_some(Reaction { name, users: r.users, count })
        })
        .collect();
    let subtype = rec.subtype.filter(|s| !CONTENT_SUBTYPES.contains(&s.as_str()));
    Ok(Message {
        channel_id: channel.id.clone(),
        ts,
        author: rec.user,
        url_count: count_links(&rec.text) as u32,
        text: normalize_export_text(&rec.text),
        thread_parent,
        reactions,
        file_count: rec.files.len() as u32,
        edited: rec.edited.is_some_and(|v| !v.is_null()),
        subtype,
    })
}
