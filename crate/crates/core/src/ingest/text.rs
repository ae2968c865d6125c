//! Text normalization applied at ingest and before keyword matching.

use std::sync::LazyLock;

use regex::Regex;

static LINK: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"<https?:[^>]*>").unwrap());
static USER_MENTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"<@[^>]*>").unwrap());
static BROADCAST: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"<!(?:channel|here)(?:\|[^>]*)?>").unwrap());

/// Undo Slack's HTML escaping and fold typographic apostrophes to `'`.
pub fn normalize_export_text(raw: &str) -> String {
    raw.replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&amp;", "&")
        .replace(['\u{2019}', '\u{2018}', '\u{02BC}'], "'")
}

/// Number of `<http…>` / `<https…>` link tokens.
pub fn count_links(text: &str) -> usize {
    LINK.find_iter(text).count()
}

pub fn has_user_mention(text: &str) -> bool {
    USER_MENTION.is_match(text)
}

pub fn has_channel_mention(text: &str) -> bool {
    BROADCAST.is_match(text)
}

/// Replace the `<@U…>` tokens naming any of `ids` with `replacement`.
pub(crate) fn replace_user_mentions(text: &str, is_target: impl Fn(&str) -> bool, replacement: &str) -> String {
    USER_MENTION
        .replace_all(text, |caps: &regex::Captures<'_>| {
            let token = &caps[0];
            let id = token[2..token.len() - 1].split('|').next().unwrap_or("");
            if is_target(id) {
                replacement.to_string()
            } else {
                token.to_string()
            }
        })
        .into_owned()
}

/// Text as the keyword matcher sees it: mentions become `@user` / `@channel`,
/// links become `URL`, and everything is lower-cased.
pub fn normalize_for_matching(text: &str) -> String {
    let s = USER_MENTION.replace_all(text, "@user");
    let s = BROADCAST.replace_all(&s, "@channel");
    let s = LINK.replace_all(&s, "URL");
    s.to_lowercase()
}
