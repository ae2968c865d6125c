use std::collections::BTreeSet;

use super::text::replace_user_mentions;
use super::{Corpus, Reaction};

/// Mention token substituted for redacted users.
pub const REDACTED_MENTION: &str = "<@REDACTED>";

/// Remove every trace of the listed users: their messages (thread replies
/// included), their reaction participation, and mentions of them. Listed
/// users that appear in the roster are marked non-consenting.
///
/// Replies whose root was removed stay in the corpus as orphans.
pub fn redact_users(corpus: &Corpus, user_ids: &BTreeSet<String>) -> Corpus {
    let mut out = corpus.clone();
    if user_ids.is_empty() {
        return out;
    }
    for (id, info) in out.users.iter_mut() {
        if user_ids.contains(id) {
            info.consented = false;
        }
    }
    let listed = |id: &str| user_ids.contains(id);
    for list in out.messages.values_mut() {
        list.retain(|m| !m.author.as_deref().is_some_and(listed));
        for msg in list.iter_mut() {
            msg.reactions =
                std::mem::take(&mut msg.reactions).into_iter().filter_map(|r| strip_reaction(r, &listed)).collect();
            if msg.text.contains("<@") {
                msg.text = replace_user_mentions(&msg.text, listed, REDACTED_MENTION);
            }
        }
    }
    out
}

fn strip_reaction(mut r: Reaction, listed: &impl Fn(&str) -> bool) -> Option<Reaction> {
    let before = r.users.len();
    r.users.retain(|u| !listed(u));
    let removed = (before - r.users.len()) as u32;
    r.count = r.count.saturating_sub(removed);
    (r.count > 0).then_some(r)
}
