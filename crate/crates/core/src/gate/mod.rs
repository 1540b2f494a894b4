//! The OOV/IV sentence gate: a TF-IDF text classifier deciding whether a
//! sentence needs phonetic normalization at all.

mod model;
mod tfidf;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use model::{GateKind, GateModel, Hyperparams, Parameters};
pub use tfidf::{SparseVector, TfIdfVectorizer};

/// Lowercases and splits on anything that is not a letter, digit or
/// apostrophe. Apostrophes survive only inside a token.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .replace('\u{2019}', "'")
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .map(|t| t.trim_matches('\''))
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateLabel {
    #[serde(rename = "IV")]
    Iv,
    #[serde(rename = "OOV")]
    Oov,
}

impl GateLabel {
    pub(crate) fn class_index(self) -> usize {
        match self {
            GateLabel::Iv => 0,
            GateLabel::Oov => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GateLabel::Iv => "IV",
            GateLabel::Oov => "OOV",
        }
    }
}

impl FromStr for GateLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "IV" => Ok(GateLabel::Iv),
            "OOV" => Ok(GateLabel::Oov),
            other => Err(format!("unknown gate label {other:?} (expected IV or OOV)")),
        }
    }
}

impl fmt::Display for GateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LabeledCorpus {
    records: Vec<(String, GateLabel)>,
}

impl LabeledCorpus {
    pub fn new(records: Vec<(String, GateLabel)>) -> Self {
        LabeledCorpus { records }
    }

    /// Reads either `text<TAB>label` rows or parallel `raw<TAB>normalized`
    /// rows. The format is decided per file: if every second column is a
    /// label it is a labeled corpus. A parallel row yields the raw side as
    /// OOV and the normalized side as IV; when both sides tokenize
    /// identically only the IV record is kept.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || (i == 0 && line.trim_end() == "text\tlabel") {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 2 {
                return Err(Error::parse(
                    source_name,
                    i + 1,
                    format!("expected 2 tab-separated columns, found {}", cols.len()),
                ));
            }
            rows.push((i + 1, cols[0], cols[1]));
        }
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let labeled = rows.iter().all(|(_, _, b)| b.parse::<GateLabel>().is_ok());
        let mut records = Vec::with_capacity(rows.len() * 2);
        for (_, a, b) in rows {
            if labeled {
                records.push((a.to_string(), b.parse().unwrap()));
            } else {
                if tokenize(a) != tokenize(b) {
                    records.push((a.to_string(), GateLabel::Oov));
                }
                records.push((b.to_string(), GateLabel::Iv));
            }
        }
        Ok(LabeledCorpus { records })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&std::fs::read_to_string(path)?, &path.display().to_string())
    }

    pub fn records(&self) -> &[(String, GateLabel)] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn has_both_labels(&self) -> bool {
        let first = match self.records.first() {
            Some((_, l)) => *l,
            None => return false,
        };
        self.records.iter().any(|(_, l)| *l != first)
    }

    /// Seeded shuffle, then the first `test_fraction` of records become the
    /// test set. Returns `(train, test)`.
    pub fn split(&self, test_fraction: f64, seed: u64) -> (LabeledCorpus, LabeledCorpus) {
        let mut records = self.records.clone();
        records.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let n_test = ((records.len() as f64) * test_fraction.clamp(0.0, 1.0)).round() as usize;
        let train = records.split_off(n_test);
        (LabeledCorpus { records: train }, LabeledCorpus { records })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Rows are gold labels, columns predictions, both ordered `[IV, OOV]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    #[serde(rename = "IV")]
    pub iv: ClassMetrics,
    #[serde(rename = "OOV")]
    pub oov: ClassMetrics,
    pub accuracy: f64,
    pub confusion: [[usize; 2]; 2],
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl EvalReport {
    pub fn from_predictions(pairs: impl IntoIterator<Item = (GateLabel, GateLabel)>) -> Self {
        let mut confusion = [[0usize; 2]; 2];
        for (gold, pred) in pairs {
            confusion[gold.class_index()][pred.class_index()] += 1;
        }
        let metrics = |c: usize| {
            let tp = confusion[c][c];
            let predicted = confusion[0][c] + confusion[1][c];
            let actual = confusion[c][0] + confusion[c][1];
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, actual);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            ClassMetrics {
                precision,
                recall,
                f1,
                support: actual,
            }
        };
        let total: usize = confusion.iter().flatten().sum();
        EvalReport {
            iv: metrics(0),
            oov: metrics(1),
            accuracy: ratio(confusion[0][0] + confusion[1][1], total),
            confusion,
        }
    }
}

/// Predicts every record (in parallel) and aggregates the confusion matrix.
pub fn evaluate(model: &GateModel, corpus: &LabeledCorpus) -> EvalReport {
    let preds: Vec<(GateLabel, GateLabel)> = corpus
        .records()
        .par_iter()
        .map(|(text, gold)| (*gold, model.predict(text).0))
        .collect();
    EvalReport::from_predictions(preds)
}
