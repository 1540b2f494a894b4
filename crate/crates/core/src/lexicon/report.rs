use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PhonLexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EncodingScheme {
    Soundex,
    #[serde(rename = "IPA")]
    Ipa,
}

impl FromStr for EncodingScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "soundex" => Ok(EncodingScheme::Soundex),
            "ipa" => Ok(EncodingScheme::Ipa),
            other => Err(format!("unknown encoding scheme {other:?}")),
        }
    }
}

impl fmt::Display for EncodingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodingScheme::Soundex => "Soundex",
            EncodingScheme::Ipa => "IPA",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    pub code: String,
    pub concepts: Vec<String>,
}

/// How many concepts share their encoding with at least one other concept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicateReport {
    pub scheme: EncodingScheme,
    pub num_concepts: usize,
    pub num_distinct_codes: usize,
    /// Sum of group sizes over codes shared by two or more concepts.
    pub num_duplicated_concepts: usize,
    pub num_collision_groups: usize,
    /// Largest groups first, ties by code; concepts in lexicon order.
    pub top_collisions: Vec<Collision>,
}

impl DuplicateReport {
    pub(super) fn compute(lex: &PhonLexicon, scheme: EncodingScheme, top: usize) -> Self {
        let mut groups: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for e in lex.entries() {
            let code = match scheme {
                EncodingScheme::Soundex => e.soundex.as_str(),
                EncodingScheme::Ipa => e.ipa.as_str(),
            };
            groups.entry(code).or_default().push(e.concept.as_str());
        }
        let mut shared: Vec<(&str, Vec<&str>)> =
            groups.iter().filter(|(_, g)| g.len() >= 2).map(|(c, g)| (*c, g.clone())).collect();
        shared.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));

        DuplicateReport {
            scheme,
            num_concepts: lex.len(),
            num_distinct_codes: groups.len(),
            num_duplicated_concepts: shared.iter().map(|(_, g)| g.len()).sum(),
            num_collision_groups: shared.len(),
            top_collisions: shared
                .into_iter()
                .take(top)
                .map(|(code, g)| Collision {
                    code: code.to_string(),
                    concepts: g.into_iter().map(str::to_string).collect(),
                })
                .collect(),
        }
    }
}
