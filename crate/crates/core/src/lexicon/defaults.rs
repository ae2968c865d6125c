use std::sync::LazyLock;

use super::{Category, Lexicon, LexiconEntry, PatternSpec};

/// Slack emoji shortcode, e.g. `:sob:` or `:+1:`.
pub const EMOJI_SHORTCODE: &str = r":[a-z0-9_+'-]+:";

static DEFAULT: LazyLock<Lexicon> = LazyLock::new(build);

/// The built-in lexicon: five categories, eleven sub-categories.
pub fn default_lexicon() -> Lexicon {
    DEFAULT.clone()
}

fn build() -> Lexicon {
    use PatternSpec as P;
    let entry = |category, name: &str, patterns: Vec<PatternSpec>| LexiconEntry {
        category,
        sub_category: name.to_string(),
        patterns,
    };
    let words = |ws: &[&str]| ws.iter().map(|w| P::word(w)).collect::<Vec<_>>();
    let prefixes = |ps: &[&str]| ps.iter().map(|p| P::prefix(p)).collect::<Vec<_>>();

    let entries = vec![
        entry(Category::Voice, "Mistakes", vec![P::word("sorry"), P::word("mistake"), P::prefix("apolog")]),
        entry(
            Category::Voice,
            "Critiques",
            [words(&["incorrect", "disagree", "wrong", "impossible", "unlikely"]), vec![P::phrase("don't think")]]
                .concat(),
        ),
        entry(Category::Voice, "Asking for Help", vec![P::phrase("don't know"), P::word("unsure"), P::word("help")]),
        entry(
            Category::Voice,
            "Questions",
            [words(&["who", "what", "where", "why", "how"]), vec![P::raw(r"\?")]].concat(),
        ),
        entry(
            Category::Supportive,
            "Agreement",
            [words(&["yes", "yeah", "ya", "yea"]), vec![P::prefix("agree")]].concat(),
        ),
        entry(
            Category::Supportive,
            "Appreciative",
            vec![
                P::prefix("congrat"),
                P::word("amazing"),
                P::word("amaze"),
                P::word("wonderful"),
                P::word("wow"),
                P::prefix("thank"),
            ],
        ),
        entry(
            Category::Unsupportive,
            "Unappreciative",
            vec![P::phrase("not needed"), P::word("stop"), P::word("waste")],
        ),
        entry(
            Category::Learning,
            "Suggestions",
            vec![P::prefix("improv"), P::word("better"), P::word("instead"), P::prefix("actual"), P::phrase("what if")],
        ),
        entry(
            Category::Learning,
            "Asking for Input",
            [words(&["feedback", "share", "thoughts"]), vec![P::prefix("idea")]].concat(),
        ),
        entry(Category::Familiarity, "Emojis", vec![P::raw(EMOJI_SHORTCODE)]),
        entry(Category::Familiarity, "Jokes", prefixes(&["hah", "aha", "lol", "lmao", "jok"])),
    ];
    Lexicon::new(entries).expect("built-in lexicon compiles")
}
