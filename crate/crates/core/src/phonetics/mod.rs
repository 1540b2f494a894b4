//! Phonetic encoders.
//!
//! Two schemes are provided. [`soundex`] is the classic four-character
//! consonant-class code. [`G2pEngine`] is a rule-based grapheme-to-phoneme
//! transducer that renders pronunciations in a small byte-safe symbol
//! inventory (see `data/ipa_symbols.tsv`): `@` schwa, `I` lax i, `U` lax u,
//! `E` open-mid front, `O` open-mid back, `A` open back, `æ` near-open front,
//! `T`/`D` dental fricatives, `S`/`Z` postalveolar fricatives, `N` velar
//! nasal, `j` palatal glide. Multiword concepts are encoded token by token
//! and the segments are joined with `_`.

mod g2p;
mod rules;
pub mod soundex;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use g2p::{squeeze_repeats, G2pEngine, DIGIT_NAMES};
pub use rules::{Rule, RuleSet};
pub use soundex::{soundex_concept, soundex_token};

/// A phonetic rendering of a concept, one segment per token joined by `_`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct IpaString(String);

impl IpaString {
    pub fn new(value: impl Into<String>) -> Result<Self> {
        let value = value.into();
        if value.is_empty() || value.split('_').any(str::is_empty) {
            return Err(Error::encoding(&value, "empty IPA segment"));
        }
        Ok(IpaString(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.0.split('_')
    }
}

impl TryFrom<String> for IpaString {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        IpaString::new(value)
    }
}

impl From<IpaString> for String {
    fn from(value: IpaString) -> Self {
        value.0
    }
}

impl fmt::Display for IpaString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Soundex code of a concept: `[A-Z][0-9]{3}` per token, joined by `_`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SoundexCode(String);

impl SoundexCode {
    pub fn new(value: impl Into<String>) -> Result<Self> {
        let value = value.into();
        let well_formed = value.split('_').all(|seg| {
            let b = seg.as_bytes();
            b.len() == 4 && b[0].is_ascii_uppercase() && b[1..].iter().all(u8::is_ascii_digit)
        });
        if !well_formed {
            return Err(Error::encoding(&value, "malformed Soundex code"));
        }
        Ok(SoundexCode(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn segments(&self) -> impl Iterator<Item = &str> {
        self.0.split('_')
    }
}

impl TryFrom<String> for SoundexCode {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        SoundexCode::new(value)
    }
}

impl From<SoundexCode> for String {
    fn from(value: SoundexCode) -> Self {
        value.0
    }
}

impl fmt::Display for SoundexCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}
