//! Measurement harnesses shared by the CLI and the acceptance tests.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gate::{GateLabel, LabeledCorpus};
use crate::lexicon::PhonLexicon;
use crate::pipeline::{CounterSnapshot, GateDecision, Mode, Pipeline};
use crate::similarity::{closest_match_scan, DistanceVariant};

/// Queries resembling noisy spellings: a random entry's encoding with one to
/// three random symbol edits (delete, substitute, insert).
pub fn random_queries(lex: &PhonLexicon, n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alphabet: Vec<char> = lex
        .entries()
        .iter()
        .flat_map(|e| e.ipa.as_str().chars().collect::<Vec<_>>())
        .collect();
    alphabet.sort_unstable();
    alphabet.dedup();
    (0..n)
        .map(|_| {
            let entry = &lex.entries()[rng.gen_range(0..lex.len())];
            let mut chars: Vec<char> = entry.ipa.as_str().chars().collect();
            for _ in 0..rng.gen_range(1..=3) {
                let sym = *alphabet.choose(&mut rng).unwrap();
                match rng.gen_range(0..3) {
                    0 if chars.len() > 1 => {
                        chars.remove(rng.gen_range(0..chars.len()));
                    }
                    1 => {
                        let i = rng.gen_range(0..chars.len());
                        chars[i] = sym;
                    }
                    _ => chars.insert(rng.gen_range(0..=chars.len()), sym),
                }
            }
            chars.into_iter().collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexBench {
    pub variant: DistanceVariant,
    pub queries: usize,
    pub k: usize,
    pub min_sim: f64,
    pub lexicon_size: usize,
    pub scan_mean_us: f64,
    pub index_mean_us: f64,
    pub speedup: f64,
    pub mean_visit_ratio: f64,
    /// Queries whose index result differs from the filtered scan.
    pub mismatches: usize,
}

/// Times both search paths over the same queries and cross-checks them.
pub fn bench_index(
    lex: &PhonLexicon,
    queries: &[String],
    k: usize,
    min_sim: f64,
) -> Result<IndexBench> {
    let variant = lex.variant();
    let max_distance = 1.0 - min_sim;

    let start = Instant::now();
    let mut scans = Vec::with_capacity(queries.len());
    for q in queries {
        let mut all = closest_match_scan(q, lex, lex.len(), variant)?;
        all.retain(|m| m.distance <= max_distance);
        all.truncate(k);
        scans.push(all);
    }
    let scan_time = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let mut indexed = Vec::with_capacity(queries.len());
    for q in queries {
        indexed.push(lex.index().top_k_with_stats(q, variant, k, min_sim)?);
    }
    let index_time = start.elapsed().as_secs_f64();

    let n = queries.len().max(1) as f64;
    let mismatches = scans
        .iter()
        .zip(&indexed)
        .filter(|(s, (i, _))| s != &i)
        .count();
    let mean_visit_ratio = indexed.iter().map(|(_, st)| st.visit_ratio()).sum::<f64>() / n;
    Ok(IndexBench {
        variant,
        queries: queries.len(),
        k,
        min_sim,
        lexicon_size: lex.len(),
        scan_mean_us: scan_time * 1e6 / n,
        index_mean_us: index_time * 1e6 / n,
        speedup: if index_time > 0.0 { scan_time / index_time } else { 0.0 },
        mean_visit_ratio,
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatingBench {
    pub sentences: usize,
    pub predicted_iv: usize,
    pub predicted_oov: usize,
    pub ungated: CounterSnapshot,
    pub gated: CounterSnapshot,
    /// Relative drop in sentences sent through normalization.
    pub invocation_reduction: f64,
    /// Relative drop in index queries.
    pub search_reduction: f64,
    /// Gated-OOV sentences whose result equals the ungated one.
    pub identical_on_oov: bool,
    pub gate_accuracy: f64,
}

fn reduction(before: u64, after: u64) -> f64 {
    if before == 0 {
        0.0
    } else {
        1.0 - after as f64 / before as f64
    }
}

/// Runs the corpus through `pipeline` with its gate disabled, then enabled,
/// counting normalization calls each time. The pipeline must carry a gate.
pub fn bench_gating(pipeline: &mut Pipeline, corpus: &LabeledCorpus) -> GatingBench {
    let texts: Vec<&str> = corpus.records().iter().map(|(t, _)| t.as_str()).collect();
    let run = |p: &Pipeline| {
        p.counters().reset();
        let rows: Vec<_> = texts
            .par_iter()
            .map(|t| p.sentence_polarity_in(t, Mode::After))
            .collect();
        (rows, p.counters().snapshot())
    };

    let enabled = pipeline.config().gate_enabled;
    pipeline.set_gate_enabled(false);
    let (ungated_rows, ungated) = run(pipeline);
    pipeline.set_gate_enabled(true);
    let (gated_rows, gated) = run(pipeline);
    pipeline.set_gate_enabled(enabled);

    let predicted_iv = gated_rows.iter().filter(|r| r.gated_as == GateDecision::Iv).count();
    let identical_on_oov = gated_rows
        .iter()
        .zip(&ungated_rows)
        .filter(|(g, _)| g.gated_as == GateDecision::Oov)
        .all(|(g, u)| g.label == u.label && g.score == u.score && g.trace == u.trace);
    let correct = gated_rows
        .iter()
        .zip(corpus.records())
        .filter(|(r, (_, gold))| match r.gated_as {
            GateDecision::Iv => *gold == GateLabel::Iv,
            GateDecision::Oov => *gold == GateLabel::Oov,
            GateDecision::Ungated => false,
        })
        .count();
    GatingBench {
        sentences: texts.len(),
        predicted_iv,
        predicted_oov: texts.len() - predicted_iv,
        ungated,
        gated,
        invocation_reduction: reduction(ungated.normalization_invocations, gated.normalization_invocations),
        search_reduction: reduction(ungated.phonetic_searches, gated.phonetic_searches),
        identical_on_oov,
        gate_accuracy: correct as f64 / texts.len().max(1) as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data;
    use crate::gate::{GateKind, GateModel, Hyperparams};
    use crate::pipeline::PipelineConfig;

    #[test]
    fn queries_are_seeded() {
        let p = Pipeline::bundled(PipelineConfig::default()).unwrap();
        let a = random_queries(p.lexicon(), 50, 9);
        assert_eq!(a, random_queries(p.lexicon(), 50, 9));
        assert_ne!(a, random_queries(p.lexicon(), 50, 10));
        assert!(a.iter().all(|q| !q.is_empty()));

        let b = bench_index(p.lexicon(), &a, 5, 0.5).unwrap();
        assert_eq!(b.mismatches, 0);
        assert!(b.mean_visit_ratio > 0.0 && b.mean_visit_ratio <= 1.0);
    }

    #[test]
    fn gate_reduces_work() {
        let corpus = LabeledCorpus::parse(data::GATE_CORPUS, "gate").unwrap();
        let model = GateModel::train(&corpus, GateKind::LogisticSGD, Hyperparams::default(), 42).unwrap();
        let mut p = Pipeline::bundled(PipelineConfig::default()).unwrap().with_gate(Some(model));
        let mix = LabeledCorpus::parse(data::GATING_MIX, "mix").unwrap();
        let r = bench_gating(&mut p, &mix);
        assert_eq!(r.ungated.normalization_invocations, mix.len() as u64);
        assert!(r.gated.normalization_invocations < r.ungated.normalization_invocations);
        assert!(r.identical_on_oov);
        assert!(p.config().gate_enabled);
    }
}
