//! Resources bundled into the library at build time.

/// Raw polarity lexicon, `concept<TAB>polarity`, most frequent words first.
pub const LEXICON_TSV: &str = include_str!("../data/lexicon.tsv");
pub const G2P_RULES: &str = include_str!("../data/g2p_rules.txt");
/// `word<TAB>ipa` pronunciations consulted before the rules.
pub const G2P_EXCEPTIONS: &str = include_str!("../data/g2p_exceptions.tsv");
pub const STOPWORDS: &str = include_str!("../data/stopwords.txt");
/// Deterministic microtext rewrites applied before matching.
pub const SUBSTITUTIONS: &str = include_str!("../data/substitutions.tsv");
/// Parallel `raw<TAB>normalized` sentences for training the OOV gate.
pub const GATE_CORPUS: &str = include_str!("../data/gate_corpus.tsv");
/// Sentences labelled IV or OOV for measuring how much the gate saves.
pub const GATING_MIX: &str = include_str!("../data/gating_mix.tsv");
/// Microtext sentences with gold sentence polarity.
pub const POLARITY_SUITE: &str = include_str!("../data/polarity_suite.tsv");
