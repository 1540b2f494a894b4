//! Sentence polarity with phonetic normalization of out-of-vocabulary
//! concepts.
//!
//! A sentence is optionally gated, split into concept candidates, and every
//! OOV candidate is replaced by its phonetically closest lexicon concept when
//! that match lies within the acceptance distance `tau`. The sentence score is
//! the mean polarity of the accepted concepts; unaccepted ones are left out of
//! the average.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concepts::{ConceptCandidate, ConceptExtractor, DEFAULT_MAX_N};
use crate::error::{Error, Result};
use crate::gate::{GateLabel, GateModel};
use crate::lexicon::{Concept, PhonLexicon, PolarityLabel};
use crate::phonetics::G2pEngine;
use crate::similarity::DistanceVariant;

/// Admits every pair in the published distance examples, including
/// sucks/sux at 0.429.
pub const DEFAULT_TAU: f64 = 0.45;
pub const DEFAULT_K: usize = 5;
pub const DEFAULT_MIN_SIM: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Largest accepted match distance.
    pub tau: f64,
    pub k: usize,
    pub variant: DistanceVariant,
    /// Only takes effect when a gate model is supplied.
    pub gate_enabled: bool,
    pub min_sim: f64,
    pub max_n: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            tau: DEFAULT_TAU,
            k: DEFAULT_K,
            variant: DistanceVariant::CharSetDice,
            gate_enabled: true,
            min_sim: DEFAULT_MIN_SIM,
            max_n: DEFAULT_MAX_N,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(0.0..=1.0).contains(&self.tau) {
            return bad(format!("tau {} outside [0, 1]", self.tau));
        }
        if !(0.0..=1.0).contains(&self.min_sim) {
            return bad(format!("min_sim {} outside [0, 1]", self.min_sim));
        }
        // a match at distance tau must survive the index's similarity cut
        if self.tau > 1.0 - self.min_sim + 1e-12 {
            return bad(format!(
                "tau {} exceeds 1 - min_sim = {}; accepted matches would be pruned",
                self.tau,
                1.0 - self.min_sim
            ));
        }
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if self.max_n == 0 {
            return bad("max_n must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateDecision {
    #[serde(rename = "IV")]
    Iv,
    #[serde(rename = "OOV")]
    Oov,
    Ungated,
}

impl fmt::Display for GateDecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateDecision::Iv => "IV",
            GateDecision::Oov => "OOV",
            GateDecision::Ungated => "Ungated",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationOutcome {
    pub original: Concept,
    pub matched_iv: bool,
    /// Best match, reported even when it is rejected.
    pub matched: Option<Concept>,
    pub distance: Option<f64>,
    /// Present only for accepted outcomes.
    pub polarity_value: Option<f64>,
    pub accepted: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl NormalizationOutcome {
    fn rejected(original: Concept) -> Self {
        NormalizationOutcome {
            original,
            matched_iv: false,
            matched: None,
            distance: None,
            polarity_value: None,
            accepted: false,
            error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentencePolarity {
    pub label: PolarityLabel,
    pub score: f64,
    pub gated_as: GateDecision,
    pub trace: Vec<NormalizationOutcome>,
}

/// Whether OOV concepts are matched phonetically (`After`) or only looked
/// up exactly (`Before`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Before,
    After,
}

#[derive(Debug, Default)]
pub struct Counters {
    normalization_invocations: AtomicU64,
    phonetic_searches: AtomicU64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterSnapshot {
    /// Sentences routed through the phonetic path.
    pub normalization_invocations: u64,
    /// Index queries issued.
    pub phonetic_searches: u64,
}

impl Counters {
    pub fn snapshot(&self) -> CounterSnapshot {
        CounterSnapshot {
            normalization_invocations: self.normalization_invocations.load(Ordering::Relaxed),
            phonetic_searches: self.phonetic_searches.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.normalization_invocations.store(0, Ordering::Relaxed);
        self.phonetic_searches.store(0, Ordering::Relaxed);
    }
}

#[derive(Debug)]
pub struct Pipeline {
    lexicon: PhonLexicon,
    g2p: G2pEngine,
    extractor: ConceptExtractor,
    gate: Option<GateModel>,
    config: PipelineConfig,
    counters: Counters,
}

impl Pipeline {
    pub fn new(
        lexicon: PhonLexicon,
        g2p: G2pEngine,
        extractor: ConceptExtractor,
        gate: Option<GateModel>,
        config: PipelineConfig,
    ) -> Result<Self> {
        config.validate()?;
        if lexicon.variant() != config.variant {
            return Err(Error::VariantMismatch {
                index: lexicon.variant().to_string(),
                query: config.variant.to_string(),
            });
        }
        if extractor.max_n() != config.max_n {
            return Err(Error::InvalidArgument(format!(
                "extractor max_n {} differs from config max_n {}",
                extractor.max_n(),
                config.max_n
            )));
        }
        Ok(Pipeline {
            lexicon,
            g2p,
            extractor,
            gate,
            config,
            counters: Counters::default(),
        })
    }

    /// Bundled lexicon, rules and tables; no gate model.
    pub fn bundled(config: PipelineConfig) -> Result<Self> {
        let g2p = G2pEngine::bundled();
        let lexicon = PhonLexicon::bundled(&g2p, config.variant)?;
        let extractor = ConceptExtractor::bundled(config.max_n)?;
        Self::new(lexicon, g2p, extractor, None, config)
    }

    pub fn with_gate(mut self, gate: Option<GateModel>) -> Self {
        self.gate = gate;
        self
    }

    pub fn set_gate_enabled(&mut self, enabled: bool) {
        self.config.gate_enabled = enabled;
    }

    pub fn lexicon(&self) -> &PhonLexicon {
        &self.lexicon
    }

    pub fn g2p(&self) -> &G2pEngine {
        &self.g2p
    }

    pub fn extractor(&self) -> &ConceptExtractor {
        &self.extractor
    }

    pub fn gate(&self) -> Option<&GateModel> {
        self.gate.as_ref()
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn gate_decision(&self, sentence: &str) -> GateDecision {
        match (&self.gate, self.config.gate_enabled) {
            (Some(model), true) => match model.predict(sentence).0 {
                GateLabel::Iv => GateDecision::Iv,
                GateLabel::Oov => GateDecision::Oov,
            },
            _ => GateDecision::Ungated,
        }
    }

    fn exact(&self, c: &ConceptCandidate) -> Option<NormalizationOutcome> {
        let id = self.lexicon.lookup(c.concept.as_str())?;
        Some(NormalizationOutcome {
            original: c.concept.clone(),
            matched_iv: true,
            matched: Some(c.concept.clone()),
            distance: Some(0.0),
            polarity_value: Some(self.lexicon.entry(id).polarity),
            accepted: true,
            error: None,
        })
    }

    /// Exact hits return themselves at distance 0. Anything else is encoded
    /// and matched; failures produce a rejected outcome carrying the error.
    pub fn normalize_concept(&self, c: &ConceptCandidate) -> NormalizationOutcome {
        if let Some(hit) = self.exact(c) {
            return hit;
        }
        let mut out = NormalizationOutcome::rejected(c.concept.clone());
        let query = match self.g2p.encode_concept(&c.concept) {
            Ok(q) => q,
            Err(e) => {
                out.error = Some(e.to_string());
                return out;
            }
        };
        self.counters.phonetic_searches.fetch_add(1, Ordering::Relaxed);
        let hits = self.lexicon.index().top_k(
            query.as_str(),
            self.config.variant,
            self.config.k,
            self.config.min_sim,
        );
        match hits {
            Ok(hits) => {
                if let Some(best) = hits.first() {
                    out.matched = Some(best.concept.clone());
                    out.distance = Some(best.distance);
                    if best.distance <= self.config.tau {
                        out.accepted = true;
                        out.polarity_value = Some(self.lexicon.entry(best.entry_id).polarity);
                    }
                }
            }
            Err(e) => out.error = Some(e.to_string()),
        }
        out
    }

    fn outcomes(&self, candidates: &[ConceptCandidate], phonetic: bool) -> Vec<NormalizationOutcome> {
        candidates
            .iter()
            .map(|c| {
                if phonetic {
                    self.normalize_concept(c)
                } else {
                    self.exact(c)
                        .unwrap_or_else(|| NormalizationOutcome::rejected(c.concept.clone()))
                }
            })
            .collect()
    }

    /// Gated IV sentences, and every sentence in `Before` mode, are looked
    /// up exactly without any phonetic search.
    pub fn sentence_polarity_in(&self, sentence: &str, mode: Mode) -> SentencePolarity {
        let gated_as = self.gate_decision(sentence);
        let phonetic = mode == Mode::After && gated_as != GateDecision::Iv;
        if phonetic {
            self.counters
                .normalization_invocations
                .fetch_add(1, Ordering::Relaxed);
        }
        let candidates = self.extractor.extract(sentence, &self.lexicon);
        let trace = self.outcomes(&candidates, phonetic);
        let values: Vec<f64> = trace.iter().filter_map(|o| o.polarity_value).collect();
        let score = if values.is_empty() {
            0.0
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        };
        SentencePolarity {
            label: PolarityLabel::from_score(score),
            score,
            gated_as,
            trace,
        }
    }

    pub fn sentence_polarity(&self, sentence: &str) -> SentencePolarity {
        self.sentence_polarity_in(sentence, Mode::After)
    }

    /// Replaces every accepted OOV span by its match; everything else,
    /// stopwords and substituted tokens included, passes through.
    pub fn normalize_sentence(&self, sentence: &str) -> String {
        let tokens = self.extractor.normalize_tokens(sentence);
        let candidates = self.extractor.extract_tokens(&tokens, &self.lexicon);
        let mut out: Vec<String> = Vec::with_capacity(tokens.len());
        let mut pos = 0;
        for c in &candidates {
            out.extend(tokens[pos..c.span.0].iter().cloned());
            let outcome = if c.matched_iv {
                None
            } else {
                Some(self.normalize_concept(c))
            };
            match outcome {
                Some(NormalizationOutcome {
                    accepted: true,
                    matched: Some(m),
                    ..
                }) => out.extend(m.tokens().map(str::to_string)),
                _ => out.extend(c.surface_tokens.iter().cloned()),
            }
            pos = c.span.1;
        }
        out.extend(tokens[pos..].iter().cloned());
        out.join(" ")
    }

    /// Accuracy and per-sentence predictions in one mode. Sentences run in
    /// parallel; rows keep corpus order.
    pub fn eval_polarity(&self, corpus: &[(String, PolarityLabel)], mode: Mode) -> PolarityEval {
        let rows: Vec<SentencePolarity> = corpus
            .par_iter()
            .map(|(text, _)| self.sentence_polarity_in(text, mode))
            .collect();
        let correct = rows.iter().zip(corpus).filter(|(r, (_, g))| r.label == *g).count();
        PolarityEval {
            accuracy: ratio(correct, corpus.len()),
            rows,
        }
    }

    /// Runs the corpus without and with normalization.
    pub fn eval_report(&self, corpus: &[(String, PolarityLabel)]) -> EvalPolarityReport {
        let before = self.eval_polarity(corpus, Mode::Before);
        let after = self.eval_polarity(corpus, Mode::After);
        let rows = corpus
            .iter()
            .zip(before.rows)
            .zip(after.rows)
            .map(|(((text, gold), b), a)| EvalRow {
                text: text.clone(),
                gold: *gold,
                before: b.label,
                after: a.label,
                score_before: b.score,
                score_after: a.score,
                gated_as: a.gated_as,
                trace: a.trace,
            })
            .collect();
        EvalPolarityReport {
            accuracy_before: before.accuracy,
            accuracy_after: after.accuracy,
            delta: after.accuracy - before.accuracy,
            rows,
        }
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarityEval {
    pub accuracy: f64,
    pub rows: Vec<SentencePolarity>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub text: String,
    pub gold: PolarityLabel,
    pub before: PolarityLabel,
    pub after: PolarityLabel,
    pub score_before: f64,
    pub score_after: f64,
    pub gated_as: GateDecision,
    pub trace: Vec<NormalizationOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalPolarityReport {
    pub accuracy_before: f64,
    pub accuracy_after: f64,
    pub delta: f64,
    pub rows: Vec<EvalRow>,
}

/// `text<TAB>gold` rows with an optional `text<TAB>gold` header.
pub fn parse_polarity_corpus(text: &str, source_name: &str) -> Result<Vec<(String, PolarityLabel)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || (i == 0 && line.trim_end() == "text\tgold") {
            continue;
        }
        let (sentence, gold) = line
            .rsplit_once('\t')
            .ok_or_else(|| Error::parse(source_name, i + 1, "expected text<TAB>gold"))?;
        let gold = gold
            .parse::<PolarityLabel>()
            .map_err(|m| Error::parse(source_name, i + 1, format!("{m} for {sentence:?}")))?;
        out.push((sentence.to_string(), gold));
    }
    Ok(out)
}
