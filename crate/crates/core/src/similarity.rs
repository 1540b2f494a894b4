//! Sørensen–Dice distance between encodings and the exhaustive closest-match
//! scan.
//!
//! `CharSetDice` compares the sets of distinct symbols of the two strings, so
//! it ignores symbol order and repetition ("apple" and "aple" are identical
//! under it). `BigramDice` compares sets of adjacent symbol pairs and falls
//! back to `CharSetDice` when either string has fewer than two symbols.
//! Neither is a metric: the triangle inequality does not hold.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{Concept, PhonLexicon};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistanceVariant {
    #[default]
    #[serde(rename = "charset")]
    CharSetDice,
    #[serde(rename = "bigram")]
    BigramDice,
}

impl DistanceVariant {
    pub fn as_str(self) -> &'static str {
        match self {
            DistanceVariant::CharSetDice => "charset",
            DistanceVariant::BigramDice => "bigram",
        }
    }
}

impl FromStr for DistanceVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "charset" | "charsetdice" | "char-set" => Ok(DistanceVariant::CharSetDice),
            "bigram" | "bigramdice" => Ok(DistanceVariant::BigramDice),
            other => Err(format!("unknown distance variant {other:?}")),
        }
    }
}

impl fmt::Display for DistanceVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `1 - 2|A∩B| / (|A| + |B|)`. Both the scan and the index go through this.
pub(crate) fn dice_from_counts(shared: usize, size_a: usize, size_b: usize) -> f64 {
    1.0 - (2 * shared) as f64 / (size_a + size_b) as f64
}

fn char_set(s: &str) -> BTreeSet<char> {
    s.chars().collect()
}

fn bigram_set(s: &str) -> BTreeSet<(char, char)> {
    let chars: Vec<char> = s.chars().collect();
    chars.windows(2).map(|w| (w[0], w[1])).collect()
}

fn set_dice<T: Ord>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> f64 {
    dice_from_counts(a.intersection(b).count(), a.len(), b.len())
}

pub fn dice_distance(a: &str, b: &str, variant: DistanceVariant) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let short = a.chars().nth(1).is_none() || b.chars().nth(1).is_none();
    Ok(match variant {
        DistanceVariant::BigramDice if !short => set_dice(&bigram_set(a), &bigram_set(b)),
        _ => set_dice(&char_set(a), &char_set(b)),
    })
}

pub fn dice_similarity(a: &str, b: &str, variant: DistanceVariant) -> Result<f64> {
    dice_distance(a, b, variant).map(|d| 1.0 - d)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub entry_id: usize,
    pub concept: Concept,
    pub distance: f64,
}

pub(crate) fn sort_matches(results: &mut [MatchResult]) {
    results.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.entry_id.cmp(&b.entry_id)));
}

/// Scores every lexicon entry against `query` and keeps the `k` closest,
/// ordered by `(distance, entry_id)`.
pub fn closest_match_scan(
    query: &str,
    lex: &PhonLexicon,
    k: usize,
    variant: DistanceVariant,
) -> Result<Vec<MatchResult>> {
    if lex.is_empty() {
        return Err(Error::EmptyLexicon);
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut results = lex
        .entries()
        .iter()
        .enumerate()
        .map(|(id, e)| {
            Ok(MatchResult {
                entry_id: id,
                concept: e.concept.clone(),
                distance: dice_distance(query, e.ipa.as_str(), variant)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_matches(&mut results);
    results.truncate(k);
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phonetics::G2pEngine;
    use proptest::prelude::*;

    const CS: DistanceVariant = DistanceVariant::CharSetDice;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-3
    }

    #[test]
    fn string_level_examples() {
        assert!(close(dice_distance("apple", "appl", CS).unwrap(), 1.0 / 7.0));
        assert!(close(dice_distance("apple", "appl", CS).unwrap(), 0.143));
        assert!(close(dice_distance("sucks", "sux", CS).unwrap(), 0.429));
        assert!(close(dice_distance("good", "gud", CS).unwrap(), 0.333));
        assert!(close(dice_distance("a_little", "a_lil", CS).unwrap(), 0.200));
        assert!(close(dice_distance("narrow_minded", "nrw_minded", CS).unwrap(), 0.111));
        assert_eq!(dice_distance("bfOr", "bIfOr", CS).unwrap(), 1.0 - 8.0 / 9.0);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(dice_distance("", "a", CS).is_err());
        assert!(dice_distance("a", "", DistanceVariant::BigramDice).is_err());
    }

    #[test]
    fn bigram_variant() {
        // {ap, pp, pl, le} vs {ap, pp, pl}
        let d = dice_distance("apple", "appl", DistanceVariant::BigramDice).unwrap();
        assert!(close(d, 1.0 - 6.0 / 7.0));
        // order matters for bigrams but not for character sets
        assert_eq!(dice_distance("ab", "ba", CS).unwrap(), 0.0);
        assert_eq!(dice_distance("ab", "ba", DistanceVariant::BigramDice).unwrap(), 1.0);
        // single symbols fall back to character sets
        assert_eq!(dice_distance("æ", "æb", DistanceVariant::BigramDice).unwrap(), 1.0 - 2.0 / 3.0);
    }

    #[test]
    fn multibyte_symbols_count_once() {
        assert_eq!(dice_distance("æ", "æ", CS).unwrap(), 0.0);
        assert_eq!(dice_distance("æb", "ab", CS).unwrap(), 0.5);
    }

    #[test]
    fn variant_names() {
        assert_eq!("charset".parse::<DistanceVariant>().unwrap(), CS);
        assert_eq!("Bigram".parse::<DistanceVariant>().unwrap(), DistanceVariant::BigramDice);
        assert!("edit".parse::<DistanceVariant>().is_err());
        assert_eq!(serde_json::to_string(&CS).unwrap(), "\"charset\"");
    }

    fn small_lexicon() -> PhonLexicon {
        let raw: Vec<_> = [("good", 0.9), ("bad", -0.9), ("tomorrow", 0.0), ("before", 0.0)]
            .iter()
            .map(|(c, p)| (Concept::new(*c).unwrap(), *p))
            .collect();
        PhonLexicon::compile(&raw, &G2pEngine::bundled(), CS).unwrap()
    }

    #[test]
    fn scan_finds_good_for_gud() {
        let g2p = G2pEngine::bundled();
        let lex = small_lexicon();
        let q = g2p.encode_token("gud").unwrap();
        let hits = closest_match_scan(&q, &lex, 3, CS).unwrap();
        assert_eq!(hits[0].concept.as_str(), "good");
        assert!(hits[0].distance < hits[1].distance);
    }

    #[test]
    fn scan_finds_before_for_b4() {
        let g2p = G2pEngine::bundled();
        let lex = small_lexicon();
        let q = g2p.encode_token("b4").unwrap();
        let hits = closest_match_scan(&q, &lex, 1, CS).unwrap();
        assert_eq!(hits[0].concept.as_str(), "before");
        assert!(close(hits[0].distance, 0.111));
    }

    #[test]
    fn scan_exact_and_full() {
        let lex = small_lexicon();
        let stored = lex.entry(2).ipa.as_str().to_string();
        let hits = closest_match_scan(&stored, &lex, 1, CS).unwrap();
        assert_eq!((hits[0].entry_id, hits[0].distance), (2, 0.0));
        let all = closest_match_scan(&stored, &lex, 100, CS).unwrap();
        assert_eq!(all.len(), lex.len());
        assert!(closest_match_scan(&stored, &lex, 0, CS).is_err());
    }

    fn symbols() -> impl Strategy<Value = String> {
        proptest::collection::vec(proptest::sample::select(vec!['a', 'b', 'c', 'd', '@', 'æ', '_', 'I']), 1..10)
            .prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn symmetric_bounded_reflexive(a in symbols(), b in symbols()) {
            for v in [CS, DistanceVariant::BigramDice] {
                let ab = dice_distance(&a, &b, v).unwrap();
                prop_assert_eq!(ab, dice_distance(&b, &a, v).unwrap());
                prop_assert!((0.0..=1.0).contains(&ab));
                prop_assert_eq!(dice_distance(&a, &a, v).unwrap(), 0.0);
            }
            let disjoint = char_set(&a).is_disjoint(&char_set(&b));
            prop_assert_eq!(dice_distance(&a, &b, CS).unwrap() == 1.0, disjoint);
        }

        #[test]
        fn charset_ignores_order_and_repeats(a in symbols(), seed in any::<u64>()) {
            let mut chars: Vec<char> = a.chars().collect();
            let n = chars.len();
            chars.rotate_left((seed as usize) % n);
            chars.push(chars[(seed as usize / 7) % n]);
            let shuffled: String = chars.into_iter().collect();
            prop_assert_eq!(dice_distance(&a, &shuffled, CS).unwrap(), 0.0);
        }
    }
}
