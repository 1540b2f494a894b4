//! Concept candidates by greedy longest match against the lexicon.
//!
//! This stands in for a dependency-based concept parser. At each position the
//! longest n-gram (up to `max_n` tokens) that is a lexicon surface form wins
//! and becomes an in-vocabulary candidate. A token that starts no match
//! becomes a singleton out-of-vocabulary candidate, unless it is a stopword or
//! made only of digits.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::data;
use crate::error::{Error, Result};
use crate::gate::tokenize;
use crate::lexicon::{Concept, PhonLexicon};

pub const DEFAULT_MAX_N: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptCandidate {
    pub surface_tokens: Vec<String>,
    pub concept: Concept,
    /// Half-open token range into the normalized token sequence.
    pub span: (usize, usize),
    pub matched_iv: bool,
}

/// One word per line; `#` starts a comment.
pub fn parse_stopwords(text: &str) -> HashSet<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect()
}

/// `token<TAB>replacement` per line; the replacement may span several words.
pub fn parse_substitutions(text: &str, source_name: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('\t') {
            Some((from, to)) if !from.trim().is_empty() && !to.trim().is_empty() => {
                out.push((from.trim().to_lowercase(), to.trim().to_lowercase()))
            }
            _ => {
                return Err(Error::parse(
                    source_name,
                    i + 1,
                    "expected token<TAB>replacement",
                ))
            }
        }
    }
    Ok(out)
}

fn clean_token(token: &str) -> String {
    token
        .chars()
        .filter(|c| c.is_ascii_lowercase() || c.is_ascii_digit())
        .collect()
}

#[derive(Debug, Clone)]
pub struct ConceptExtractor {
    stopwords: HashSet<String>,
    substitutions: HashMap<String, Vec<String>>,
    max_n: usize,
}

impl ConceptExtractor {
    pub fn new(
        stopwords: HashSet<String>,
        substitutions: &[(String, String)],
        max_n: usize,
    ) -> Result<Self> {
        if max_n == 0 {
            return Err(Error::InvalidArgument("max_n must be at least 1".into()));
        }
        let substitutions = substitutions
            .iter()
            .map(|(from, to)| {
                let words: Vec<String> = to.split_whitespace().map(clean_token).filter(|t| !t.is_empty()).collect();
                (clean_token(from), words)
            })
            .collect();
        Ok(ConceptExtractor {
            stopwords,
            substitutions,
            max_n,
        })
    }

    /// Bundled stopword and substitution tables.
    pub fn bundled(max_n: usize) -> Result<Self> {
        let subs = parse_substitutions(data::SUBSTITUTIONS, "substitutions.tsv")?;
        Self::new(parse_stopwords(data::STOPWORDS), &subs, max_n)
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(token)
    }

    /// Tokenizes, drops characters outside `[a-z0-9]` and applies the
    /// substitution table once.
    pub fn normalize_tokens(&self, sentence: &str) -> Vec<String> {
        let mut out = Vec::new();
        for raw in tokenize(sentence) {
            let token = clean_token(&raw);
            if token.is_empty() {
                continue;
            }
            match self.substitutions.get(&token) {
                Some(words) => out.extend(words.iter().cloned()),
                None => out.push(token),
            }
        }
        out
    }

    pub fn extract(&self, sentence: &str, lex: &PhonLexicon) -> Vec<ConceptCandidate> {
        self.extract_tokens(&self.normalize_tokens(sentence), lex)
    }

    pub fn extract_tokens(&self, tokens: &[String], lex: &PhonLexicon) -> Vec<ConceptCandidate> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            let longest = (1..=self.max_n.min(tokens.len() - i))
                .rev()
                .find(|&n| lex.lookup(&tokens[i..i + n].join("_")).is_some());
            if let Some(n) = longest {
                let surface = tokens[i..i + n].to_vec();
                out.push(ConceptCandidate {
                    concept: Concept::from_tokens(&surface).expect("lexicon surface is a valid concept"),
                    surface_tokens: surface,
                    span: (i, i + n),
                    matched_iv: true,
                });
                i += n;
                continue;
            }
            let token = &tokens[i];
            let digits_only = token.bytes().all(|b| b.is_ascii_digit());
            if !self.is_stopword(token) && !digits_only {
                if let Ok(concept) = Concept::new(token.clone()) {
                    out.push(ConceptCandidate {
                        surface_tokens: vec![token.clone()],
                        concept,
                        span: (i, i + 1),
                        matched_iv: false,
                    });
                }
            }
            i += 1;
        }
        out
    }
}
