use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lexicon key: lowercase tokens over `[a-z0-9-]` joined by `_`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Concept(String);

impl Concept {
    /// Validates an already canonical surface form.
    pub fn new(surface: impl Into<String>) -> Result<Self> {
        let surface = surface.into();
        let invalid = |reason| Error::InvalidConcept {
            concept: surface.clone(),
            reason,
        };
        if surface.is_empty() {
            return Err(invalid("empty"));
        }
        if !surface
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_' || b == b'-')
        {
            return Err(invalid("characters must be in [a-z0-9_-]"));
        }
        if surface.split('_').any(str::is_empty) {
            return Err(invalid("leading, trailing or doubled underscore"));
        }
        Ok(Concept(surface))
    }

    /// Lowercases and joins whitespace- or hyphen-separated words with `_`.
    pub fn canonicalize(raw: &str) -> Result<Self> {
        let lower = raw.trim().to_lowercase();
        let joined = lower
            .split(|c: char| c.is_whitespace() || c == '-' || c == '_')
            .filter(|t| !t.is_empty())
            .collect::<Vec<_>>()
            .join("_");
        if joined.is_empty() {
            return Err(Error::InvalidConcept {
                concept: raw.to_string(),
                reason: "empty",
            });
        }
        Concept::new(joined)
    }

    /// Builds a concept from already-normalized tokens.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Self> {
        let joined = tokens.iter().map(AsRef::as_ref).collect::<Vec<_>>().join("_");
        Concept::new(joined)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.0.split('_')
    }

    pub fn num_tokens(&self) -> usize {
        self.tokens().count()
    }

    /// Surface text with underscores rendered as spaces.
    pub fn to_text(&self) -> String {
        self.0.replace('_', " ")
    }
}

impl Borrow<str> for Concept {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Concept {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Concept::new(value)
    }
}

impl From<Concept> for String {
    fn from(value: Concept) -> Self {
        value.0
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(Concept::canonicalize("A little").unwrap().as_str(), "a_little");
        assert_eq!(Concept::canonicalize("narrow-minded").unwrap().as_str(), "narrow_minded");
        assert_eq!(Concept::canonicalize("  very   good ").unwrap().as_str(), "very_good");
        assert_eq!(Concept::canonicalize("abandon").unwrap().as_str(), "abandon");
    }

    #[test]
    fn rejects_bad_surfaces() {
        assert!(Concept::new("").is_err());
        assert!(Concept::new("_a").is_err());
        assert!(Concept::new("a_").is_err());
        assert!(Concept::new("a__b").is_err());
        assert!(Concept::new("Abc").is_err());
        assert!(Concept::new("don't").is_err());
        assert!(Concept::canonicalize("   ").is_err());
        assert!(Concept::canonicalize("café").is_err());
    }

    #[test]
    fn tokens_split_on_underscore() {
        let c = Concept::new("waste_of_time").unwrap();
        assert_eq!(c.tokens().collect::<Vec<_>>(), ["waste", "of", "time"]);
        assert_eq!(c.to_text(), "waste of time");
    }
}
