//! The phonetically encoded polarity lexicon.
//!
//! A raw lexicon is a `concept<TAB>polarity` table. Compiling it attaches a
//! Soundex code and an IPA rendering to every concept and builds the lookup
//! structures: an exact surface map and the inverted match index. Compiled
//! lexicons persist as JSON lines, a header object followed by one entry per
//! line; the index is rebuilt on load.

mod concept;
mod report;

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::InvertedIndex;
use crate::phonetics::{soundex_concept, G2pEngine, IpaString, SoundexCode};
use crate::similarity::DistanceVariant;

pub use concept::Concept;
pub use report::{Collision, DuplicateReport, EncodingScheme};

pub const COMPILED_FORMAT: &str = "phonlex";
pub const COMPILED_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PolarityLabel {
    Positive,
    Negative,
    Neutral,
}

impl PolarityLabel {
    /// Sign rule: exactly zero is neutral.
    pub fn from_score(score: f64) -> Self {
        if score > 0.0 {
            PolarityLabel::Positive
        } else if score < 0.0 {
            PolarityLabel::Negative
        } else {
            PolarityLabel::Neutral
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PolarityLabel::Positive => "Positive",
            PolarityLabel::Negative => "Negative",
            PolarityLabel::Neutral => "Neutral",
        }
    }
}

impl FromStr for PolarityLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" => Ok(PolarityLabel::Positive),
            "negative" => Ok(PolarityLabel::Negative),
            "neutral" => Ok(PolarityLabel::Neutral),
            other => Err(format!("unknown polarity label {other:?}")),
        }
    }
}

impl fmt::Display for PolarityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LexiconEntry {
    pub concept: Concept,
    pub polarity: f64,
    pub ipa: IpaString,
    pub soundex: SoundexCode,
}

impl LexiconEntry {
    pub fn label(&self) -> PolarityLabel {
        PolarityLabel::from_score(self.polarity)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        check_polarity(self.polarity)?;
        let n = self.concept.num_tokens();
        if self.ipa.segments().count() != n || self.soundex.segments().count() != n {
            return Err(format!(
                "encodings of {} are not aligned with its {n} token(s)",
                self.concept
            ));
        }
        Ok(())
    }
}

fn check_polarity(value: f64) -> std::result::Result<(), String> {
    if value.is_finite() && (-1.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(format!("polarity {value} outside [-1, 1]"))
    }
}

/// Parses a raw `concept<TAB>polarity` table, canonicalizing concepts.
pub fn parse_raw_lexicon(text: &str, source_name: &str) -> Result<Vec<(Concept, f64)>> {
    let mut rows = Vec::new();
    let mut seen: HashMap<Concept, usize> = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        if i == 0 && line.trim_end() == "concept\tpolarity" {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 2 {
            return Err(Error::parse(
                source_name,
                line_no,
                format!("expected 2 tab-separated columns, found {}", cols.len()),
            ));
        }
        let concept = Concept::canonicalize(cols[0])
            .map_err(|e| Error::parse(source_name, line_no, e.to_string()))?;
        let polarity: f64 = cols[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(source_name, line_no, format!("bad polarity {:?}", cols[1])))?;
        check_polarity(polarity).map_err(|m| Error::parse(source_name, line_no, m))?;
        if let Some(first) = seen.insert(concept.clone(), line_no) {
            return Err(Error::parse(
                source_name,
                line_no,
                format!("duplicate concept {concept} (first seen on line {first})"),
            ));
        }
        rows.push((concept, polarity));
    }
    Ok(rows)
}

pub fn load_raw_lexicon(path: impl AsRef<Path>) -> Result<Vec<(Concept, f64)>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_raw_lexicon(&text, &path.display().to_string())
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    variant: DistanceVariant,
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryRecord {
    concept: Concept,
    polarity: f64,
    ipa: IpaString,
    soundex: SoundexCode,
}

/// Compiled lexicon. Immutable once built; entry ids are dense and stable.
#[derive(Debug, Clone)]
pub struct PhonLexicon {
    entries: Vec<LexiconEntry>,
    surface_map: HashMap<Concept, usize>,
    variant: DistanceVariant,
    index: InvertedIndex,
}

impl PartialEq for PhonLexicon {
    fn eq(&self, other: &Self) -> bool {
        self.variant == other.variant && self.entries == other.entries
    }
}

impl PhonLexicon {
    /// Encodes every raw row with Soundex and the G2P engine.
    pub fn compile(
        raw: &[(Concept, f64)],
        g2p: &G2pEngine,
        variant: DistanceVariant,
    ) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        let entries = raw
            .iter()
            .map(|(concept, polarity)| {
                let fail = |e: Error| Error::Compile {
                    concept: concept.to_string(),
                    reason: e.to_string(),
                };
                Ok(LexiconEntry {
                    concept: concept.clone(),
                    polarity: *polarity,
                    ipa: g2p.encode_concept(concept).map_err(fail)?,
                    soundex: soundex_concept(concept).map_err(fail)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(entries, variant)
    }

    /// Compiles the bundled lexicon.
    pub fn bundled(g2p: &G2pEngine, variant: DistanceVariant) -> Result<Self> {
        let raw = parse_raw_lexicon(crate::data::LEXICON_TSV, "lexicon.tsv")?;
        Self::compile(&raw, g2p, variant)
    }

    pub fn from_entries(entries: Vec<LexiconEntry>, variant: DistanceVariant) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyLexicon);
        }
        let mut surface_map = HashMap::with_capacity(entries.len());
        for (id, entry) in entries.iter().enumerate() {
            entry.validate().map_err(|reason| Error::Compile {
                concept: entry.concept.to_string(),
                reason,
            })?;
            if surface_map.insert(entry.concept.clone(), id).is_some() {
                return Err(Error::Compile {
                    concept: entry.concept.to_string(),
                    reason: "duplicate surface form".into(),
                });
            }
        }
        let index = InvertedIndex::from_entries(&entries, variant);
        Ok(PhonLexicon {
            entries,
            surface_map,
            variant,
            index,
        })
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn entry(&self, id: usize) -> &LexiconEntry {
        &self.entries[id]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn variant(&self) -> DistanceVariant {
        self.variant
    }

    pub fn index(&self) -> &InvertedIndex {
        &self.index
    }

    /// Exact surface lookup.
    pub fn lookup(&self, surface: &str) -> Option<usize> {
        self.surface_map.get(surface).copied()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        let header = Header {
            format: COMPILED_FORMAT.to_string(),
            version: COMPILED_VERSION,
            variant: self.variant,
        };
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        for e in &self.entries {
            let record = EntryRecord {
                concept: e.concept.clone(),
                polarity: e.polarity,
                ipa: e.ipa.clone(),
                soundex: e.soundex.clone(),
            };
            serde_json::to_writer(&mut out, &record)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_jsonl(BufWriter::new(File::create(path)?))
    }

    pub fn read_jsonl<R: BufRead>(input: R, source_name: &str) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let header_line = loop {
            match lines.next() {
                None => return Err(Error::EmptyLexicon),
                Some((_, line)) => {
                    let line = line?;
                    if !line.trim().is_empty() {
                        break line;
                    }
                }
            }
        };
        let header: Header = serde_json::from_str(&header_line)
            .map_err(|e| Error::parse(source_name, 1, format!("bad header: {e}")))?;
        if header.format != COMPILED_FORMAT || header.version != COMPILED_VERSION {
            return Err(Error::parse(
                source_name,
                1,
                format!(
                    "unsupported format {:?} version {} (expected {COMPILED_FORMAT:?} version {COMPILED_VERSION})",
                    header.format, header.version
                ),
            ));
        }
        let mut entries = Vec::new();
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let record: EntryRecord = serde_json::from_str(&line)
                .map_err(|e| Error::parse(source_name, i + 1, e.to_string()))?;
            let entry = LexiconEntry {
                concept: record.concept,
                polarity: record.polarity,
                ipa: record.ipa,
                soundex: record.soundex,
            };
            entry
                .validate()
                .map_err(|m| Error::parse(source_name, i + 1, m))?;
            entries.push(entry);
        }
        Self::from_entries(entries, header.variant)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path)?;
        Self::read_jsonl(BufReader::new(file), &path.display().to_string())
    }

    pub fn duplicate_report(&self, scheme: EncodingScheme, top: usize) -> DuplicateReport {
        DuplicateReport::compute(self, scheme, top)
    }
}
