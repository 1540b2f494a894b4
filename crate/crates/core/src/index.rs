//! Exact top-k Dice search through an inverted index.
//!
//! Every entry is reduced to its sorted set of symbols (characters, or
//! adjacent character pairs for `BigramDice`). A query with similarity
//! threshold `t > 0` and `q` distinct symbols can only be matched by an
//! entry of set size `m` with `t·q/(2−t) ≤ m ≤ q·(2−t)/t`, and such an entry
//! shares at least `⌈t·q/(2−t)⌉` symbols with the query. Candidates are
//! therefore drawn from the posting lists of the query's
//! `q − ⌈t·q/(2−t)⌉ + 1` rarest symbols (an entry missing all of them
//! cannot reach the overlap), filtered by size, and scored exactly. An
//! entry first met in the posting list of the `p`-th rarest symbol lacks the
//! `p` rarer ones, so it is skipped when `q − p` falls short of the overlap
//! its own size requires, `⌈t·(q+m)/2⌉`.
//! With `t = 0` every entry qualifies and the search degenerates to a full
//! scoring pass.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lexicon::{Concept, LexiconEntry, PhonLexicon};
use crate::similarity::{dice_from_counts, sort_matches, DistanceVariant, MatchResult};

type Symbol = u64;

const BIGRAM_TAG: u64 = 1 << 62;
// Widens the size window and overlap bound so float rounding never prunes a
// true match; the final filter is exact.
const SLACK: f64 = 1e-9;

fn char_symbols(s: &str) -> Vec<Symbol> {
    let mut v: Vec<Symbol> = s.chars().map(|c| c as u64).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn bigram_symbols(s: &str) -> Vec<Symbol> {
    let chars: Vec<char> = s.chars().collect();
    let mut v: Vec<Symbol> = chars
        .windows(2)
        .map(|w| BIGRAM_TAG | ((w[0] as u64) << 21) | w[1] as u64)
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn is_short(s: &str) -> bool {
    s.chars().nth(1).is_none()
}

fn overlap(a: &[Symbol], b: &[Symbol]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Entries whose similarity was computed exactly.
    pub scored: usize,
    pub lexicon_size: usize,
}

impl SearchStats {
    pub fn visit_ratio(&self) -> f64 {
        if self.lexicon_size == 0 {
            0.0
        } else {
            self.scored as f64 / self.lexicon_size as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvertedIndex {
    variant: DistanceVariant,
    /// symbol -> (entry id, set size), sorted by entry id
    postings: HashMap<Symbol, Vec<(u32, u32)>>,
    /// per-entry distinct symbol sets under `variant`
    sets: Vec<Vec<Symbol>>,
    /// per-entry character sets, kept for the short-string fallback
    char_sets: Vec<Vec<Symbol>>,
    /// entries too short for bigrams (BigramDice only)
    short: Vec<u32>,
    concepts: Vec<Concept>,
}

impl InvertedIndex {
    pub fn build(lex: &PhonLexicon, variant: DistanceVariant) -> Self {
        Self::from_entries(lex.entries(), variant)
    }

    pub(crate) fn from_entries(entries: &[LexiconEntry], variant: DistanceVariant) -> Self {
        let mut postings: HashMap<Symbol, Vec<(u32, u32)>> = HashMap::new();
        let mut sets = Vec::with_capacity(entries.len());
        let mut char_sets = Vec::with_capacity(entries.len());
        let mut short = Vec::new();
        for (id, e) in entries.iter().enumerate() {
            let ipa = e.ipa.as_str();
            let chars = char_symbols(ipa);
            let set = match variant {
                DistanceVariant::CharSetDice => chars.clone(),
                DistanceVariant::BigramDice if is_short(ipa) => {
                    short.push(id as u32);
                    Vec::new()
                }
                DistanceVariant::BigramDice => bigram_symbols(ipa),
            };
            for &sym in &set {
                postings.entry(sym).or_default().push((id as u32, set.len() as u32));
            }
            sets.push(set);
            char_sets.push(chars);
        }
        InvertedIndex {
            variant,
            postings,
            sets,
            char_sets,
            short,
            concepts: entries.iter().map(|e| e.concept.clone()).collect(),
        }
    }

    pub fn variant(&self) -> DistanceVariant {
        self.variant
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn num_posting_lists(&self) -> usize {
        self.postings.len()
    }

    /// Entry ids listed under each posting list, in symbol order.
    pub fn posting_ids(&self) -> Vec<Vec<usize>> {
        let mut keys: Vec<_> = self.postings.keys().copied().collect();
        keys.sort_unstable();
        keys.iter()
            .map(|k| self.postings[k].iter().map(|&(id, _)| id as usize).collect())
            .collect()
    }

    /// The `k` closest entries with similarity at least `min_sim`, ordered by
    /// `(distance, entry_id)`. Equal to the exhaustive scan filtered to
    /// `distance <= 1 - min_sim`.
    pub fn top_k(
        &self,
        query: &str,
        variant: DistanceVariant,
        k: usize,
        min_sim: f64,
    ) -> Result<Vec<MatchResult>> {
        self.top_k_with_stats(query, variant, k, min_sim).map(|(r, _)| r)
    }

    pub fn top_k_with_stats(
        &self,
        query: &str,
        variant: DistanceVariant,
        k: usize,
        min_sim: f64,
    ) -> Result<(Vec<MatchResult>, SearchStats)> {
        if variant != self.variant {
            return Err(Error::VariantMismatch {
                index: self.variant.to_string(),
                query: variant.to_string(),
            });
        }
        if query.is_empty() {
            return Err(Error::EmptyInput);
        }
        if self.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&min_sim) {
            return Err(Error::InvalidArgument(format!("min_sim {min_sim} outside [0, 1]")));
        }

        let max_distance = 1.0 - min_sim;
        let mut stats = SearchStats {
            scored: 0,
            lexicon_size: self.len(),
        };
        let mut results = Vec::new();
        let mut consider = |id: usize, distance: f64, stats: &mut SearchStats| {
            stats.scored += 1;
            if distance <= max_distance {
                results.push(MatchResult {
                    entry_id: id,
                    concept: self.concepts[id].clone(),
                    distance,
                });
            }
        };

        let query_chars = char_symbols(query);
        let char_distance = |id: usize| {
            let set = &self.char_sets[id];
            dice_from_counts(overlap(&query_chars, set), query_chars.len(), set.len())
        };

        if variant == DistanceVariant::BigramDice && is_short(query) {
            // every pair falls back to character sets
            for id in 0..self.len() {
                consider(id, char_distance(id), &mut stats);
            }
        } else {
            let query_set = match variant {
                DistanceVariant::CharSetDice => query_chars.clone(),
                DistanceVariant::BigramDice => bigram_symbols(query),
            };
            let exact = |id: usize| {
                let set = &self.sets[id];
                dice_from_counts(overlap(&query_set, set), query_set.len(), set.len())
            };
            for &id in &self.short {
                consider(id as usize, char_distance(id as usize), &mut stats);
            }
            if min_sim <= 0.0 {
                for id in 0..self.len() {
                    if self.sets[id].is_empty() {
                        continue;
                    }
                    consider(id, exact(id), &mut stats);
                }
            } else {
                let q = query_set.len() as f64;
                let t = min_sim;
                let min_size = t * q / (2.0 - t) - SLACK;
                let max_size = q * (2.0 - t) / t + SLACK;
                let min_overlap = ((t * q / (2.0 - t)) - SLACK).ceil().max(1.0) as usize;
                let prefix_len = (query_set.len() + 1).saturating_sub(min_overlap);

                let mut by_rarity: Vec<(usize, Symbol)> = query_set
                    .iter()
                    .map(|s| (self.postings.get(s).map_or(0, Vec::len), *s))
                    .collect();
                by_rarity.sort_unstable();

                let mut seen = vec![false; self.len()];
                for (pos, &(_, sym)) in by_rarity.iter().take(prefix_len).enumerate() {
                    let Some(list) = self.postings.get(&sym) else {
                        continue;
                    };
                    for &(id, size) in list {
                        let (id, size) = (id as usize, size as f64);
                        if seen[id] || size < min_size || size > max_size {
                            continue;
                        }
                        seen[id] = true;
                        // first seen here, so it lacks the `pos` rarer symbols
                        let needed = (t * (q + size) / 2.0 - SLACK).ceil();
                        if ((query_set.len() - pos) as f64) < needed {
                            continue;
                        }
                        consider(id, exact(id), &mut stats);
                    }
                }
            }
        }

        sort_matches(&mut results);
        results.truncate(k);
        Ok((results, stats))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phonetics::{IpaString, SoundexCode};
    use crate::similarity::closest_match_scan;
    use proptest::prelude::*;

    fn lexicon_from_ipa(ipas: &[&str], variant: DistanceVariant) -> PhonLexicon {
        let entries = ipas
            .iter()
            .enumerate()
            .map(|(i, ipa)| LexiconEntry {
                concept: Concept::new(format!("c{i}")).unwrap(),
                polarity: 0.0,
                ipa: IpaString::new(*ipa).unwrap(),
                soundex: SoundexCode::new("C000").unwrap(),
            })
            .collect();
        PhonLexicon::from_entries(entries, variant).unwrap()
    }

    const CS: DistanceVariant = DistanceVariant::CharSetDice;

    #[test]
    fn postings_cover_every_entry() {
        let lex = lexicon_from_ipa(&["gUd", "bæd", "t@mAro"], CS);
        let idx = InvertedIndex::build(&lex, CS);
        let mut ids: Vec<usize> = idx.posting_ids().into_iter().flatten().collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids, [0, 1, 2]);
        for list in idx.posting_ids() {
            assert!(list.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn single_symbol_entry_has_one_posting() {
        let lex = lexicon_from_ipa(&["æ", "bæd"], CS);
        let idx = InvertedIndex::build(&lex, CS);
        let lists_with_0 = idx.posting_ids().iter().filter(|l| l.contains(&0)).count();
        assert_eq!(lists_with_0, 1);
    }

    #[test]
    fn rebuild_is_identical() {
        let lex = lexicon_from_ipa(&["gUd", "bæd", "t@mAro", "æ"], DistanceVariant::BigramDice);
        let a = InvertedIndex::build(&lex, DistanceVariant::BigramDice);
        let b = InvertedIndex::build(&lex, DistanceVariant::BigramDice);
        assert_eq!(a, b);
    }

    #[test]
    fn variant_mismatch() {
        let lex = lexicon_from_ipa(&["gUd"], CS);
        let err = lex.index().top_k("gUd", DistanceVariant::BigramDice, 1, 0.5).unwrap_err();
        assert!(matches!(err, Error::VariantMismatch { .. }));
    }

    #[test]
    fn disjoint_query_is_empty_above_zero() {
        let lex = lexicon_from_ipa(&["gUd", "bæd"], CS);
        assert!(lex.index().top_k("xyz", CS, 5, 0.1).unwrap().is_empty());
        // at zero every entry qualifies with distance 1
        let all = lex.index().top_k("xyz", CS, 5, 0.0).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(|m| m.distance == 1.0));
    }

    #[test]
    fn argument_checks() {
        let lex = lexicon_from_ipa(&["gUd"], CS);
        assert!(lex.index().top_k("", CS, 1, 0.5).is_err());
        assert!(lex.index().top_k("g", CS, 0, 0.5).is_err());
        assert!(lex.index().top_k("g", CS, 1, 1.5).is_err());
    }

    fn scan_filtered(q: &str, lex: &PhonLexicon, k: usize, min_sim: f64, v: DistanceVariant) -> Vec<MatchResult> {
        let mut all = closest_match_scan(q, lex, lex.len(), v).unwrap();
        all.retain(|m| m.distance <= 1.0 - min_sim);
        all.truncate(k);
        all
    }

    fn word(alphabet: &'static [char]) -> impl Strategy<Value = String> {
        proptest::collection::vec(proptest::sample::select(alphabet), 1..8)
            .prop_map(|v| v.into_iter().collect())
    }

    const SMALL: &[char] = &['a', 'b', 'c', 'd', 'e'];

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn index_equals_scan(
            entries in proptest::collection::vec(word(SMALL), 1..40),
            query in word(SMALL),
            k in 1usize..10,
            min_sim in prop_oneof![Just(0.0), Just(0.5), Just(0.8), 0.0f64..1.0],
            bigram in any::<bool>(),
        ) {
            let v = if bigram { DistanceVariant::BigramDice } else { CS };
            let refs: Vec<&str> = entries.iter().map(String::as_str).collect();
            let lex = lexicon_from_ipa(&refs, v);
            let got = lex.index().top_k(&query, v, k, min_sim).unwrap();
            prop_assert_eq!(got, scan_filtered(&query, &lex, k, min_sim, v));
        }

        // Any entry the size window rejects is below the threshold.
        #[test]
        fn size_bound_is_sound(a in word(SMALL), b in word(SMALL), t in 0.01f64..1.0) {
            let sa = char_symbols(&a);
            let sb = char_symbols(&b);
            let (q, m) = (sa.len() as f64, sb.len() as f64);
            let in_window = m >= t * q / (2.0 - t) - SLACK && m <= q * (2.0 - t) / t + SLACK;
            let sim = 1.0 - dice_from_counts(overlap(&sa, &sb), sa.len(), sb.len());
            if !in_window {
                prop_assert!(sim < t);
            }
        }
    }
}
