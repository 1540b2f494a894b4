//! Concept-level microtext normalization for sentiment analysis.
//!
//! Noisy tokens ("gud", "b4", "2morrow") are encoded phonetically and matched
//! against a lexicon of polarity-bearing concepts whose entries carry the same
//! encoding. An optional classifier decides per sentence whether the phonetic
//! path is needed at all.

pub mod bench;
pub mod concepts;
pub mod data;
mod error;
pub mod gate;
pub mod index;
pub mod lexicon;
pub mod phonetics;
pub mod pipeline;
pub mod similarity;

pub use error::{Error, Result};
pub use index::{InvertedIndex, SearchStats};
pub use lexicon::{
    Collision, Concept, DuplicateReport, EncodingScheme, LexiconEntry, PhonLexicon, PolarityLabel,
};
pub use phonetics::{G2pEngine, IpaString, SoundexCode};
pub use similarity::{closest_match_scan, dice_distance, dice_similarity, DistanceVariant, MatchResult};
