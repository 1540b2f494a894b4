use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::tokenize;

/// Sparse feature vector: `(feature index, weight)` sorted by index.
pub type SparseVector = Vec<(usize, f64)>;

/// TF-IDF with `idf(t) = ln((1 + N) / (1 + df(t))) + 1`, raw term counts and
/// L2 normalization. Feature indices follow the sorted vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "VectorizerRecord", into = "VectorizerRecord")]
pub struct TfIdfVectorizer {
    tokens: Vec<String>,
    doc_freq: Vec<usize>,
    num_docs: usize,
    lookup: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct VectorizerRecord {
    num_docs: usize,
    tokens: Vec<String>,
    doc_freq: Vec<usize>,
}

impl From<VectorizerRecord> for TfIdfVectorizer {
    fn from(r: VectorizerRecord) -> Self {
        let lookup = r.tokens.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        TfIdfVectorizer {
            tokens: r.tokens,
            doc_freq: r.doc_freq,
            num_docs: r.num_docs,
            lookup,
        }
    }
}

impl From<TfIdfVectorizer> for VectorizerRecord {
    fn from(v: TfIdfVectorizer) -> Self {
        VectorizerRecord {
            num_docs: v.num_docs,
            tokens: v.tokens,
            doc_freq: v.doc_freq,
        }
    }
}

impl TfIdfVectorizer {
    pub fn fit<S: AsRef<str>>(docs: &[S]) -> Self {
        let mut df: BTreeMap<String, usize> = BTreeMap::new();
        for doc in docs {
            let mut toks = tokenize(doc.as_ref());
            toks.sort_unstable();
            toks.dedup();
            for t in toks {
                *df.entry(t).or_default() += 1;
            }
        }
        let (tokens, doc_freq): (Vec<String>, Vec<usize>) = df.into_iter().unzip();
        VectorizerRecord {
            num_docs: docs.len(),
            tokens,
            doc_freq,
        }
        .into()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn index_of(&self, token: &str) -> Option<usize> {
        self.lookup.get(token).copied()
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn idf(&self, feature: usize) -> f64 {
        ((1 + self.num_docs) as f64 / (1 + self.doc_freq[feature]) as f64).ln() + 1.0
    }

    /// Unseen tokens are ignored; a text with none known maps to the zero vector.
    pub fn transform(&self, text: &str) -> SparseVector {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for t in tokenize(text) {
            if let Some(i) = self.index_of(&t) {
                *counts.entry(i).or_default() += 1;
            }
        }
        let mut v: SparseVector = counts
            .into_iter()
            .map(|(i, tf)| (i, tf as f64 * self.idf(i)))
            .collect();
        let norm = v.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, w) in &mut v {
                *w /= norm;
            }
        }
        v
    }
}
