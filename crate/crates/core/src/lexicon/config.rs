//! Lexicon documents (TOML).
//!
//! ```toml
//! [[category]]
//! name = "Voice"
//!
//! [[category.sub_category]]
//! name = "Mistakes"
//! patterns = ["word:sorry", "word:mistake", "prefix:apolog"]
//! ```
//!
//! Categories may repeat; sub-categories keep document order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Category, Lexicon, LexiconEntry, LexiconError, PatternSpec};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(default)]
    category: Vec<CategoryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryDoc {
    name: String,
    #[serde(default)]
    sub_category: Vec<SubCategoryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubCategoryDoc {
    name: String,
    #[serde(default)]
    patterns: Vec<String>,
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon, LexiconError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| LexiconError::Io { path: path.display().to_string(), source })?;
    Lexicon::from_toml(&text)
}

impl Lexicon {
    pub fn from_toml(text: &str) -> Result<Lexicon, LexiconError> {
        let doc: Document = toml::from_str(text).map_err(|e| LexiconError::Syntax(e.to_string()))?;
        let mut entries = Vec::new();
        for cat in doc.category {
            let category: Category = cat.name.parse()?;
            for sub in cat.sub_category {
                let patterns = sub
                    .patterns
                    .iter()
                    .map(|p| PatternSpec::parse_tagged(&sub.name, p))
                    .collect::<Result<Vec<_>, _>>()?;
                entries.push(LexiconEntry { category, sub_category: sub.name, patterns });
            }
        }
        Lexicon::new(entries)
    }

    /// Canonical TOML document; loading it yields an equal lexicon.
    pub fn to_toml(&self) -> String {
        let mut doc = Document { category: Vec::new() };
        for e in &self.entries {
            let sub = SubCategoryDoc {
                name: e.sub_category.clone(),
                patterns: e.patterns.iter().map(PatternSpec::tagged).collect(),
            };
            match doc.category.last_mut() {
                Some(c) if c.name == e.category.as_str() => c.sub_category.push(sub),
                _ => doc.category.push(CategoryDoc { name: e.category.as_str().to_string(), sub_category: vec![sub] }),
            }
        }
        toml::to_string(&doc).expect("lexicon document serializes")
    }
}
