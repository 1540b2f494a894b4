//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.
//!
//! Optional inputs:
//! - `PHONNORM_SENTICNET`: a full concept/polarity table for the absolute
//!   duplicate count.
//! - `PHONNORM_NUS_CORPUS`: the NUS SMS parallel corpus for gate accuracy.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use phonnorm::bench::{bench_gating, random_queries};
use phonnorm::gate::{evaluate, GateKind, GateModel, Hyperparams, LabeledCorpus};
use phonnorm::lexicon::load_raw_lexicon;
use phonnorm::phonetics::soundex_concept;
use phonnorm::pipeline::{parse_polarity_corpus, Mode, Pipeline, PipelineConfig};
use phonnorm::{
    closest_match_scan, data, dice_distance, Concept, DistanceVariant, EncodingScheme, G2pEngine,
    PhonLexicon, PolarityLabel,
};

type Outcome = Result<String, String>;

fn check(cond: bool, ok: String, fail: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(fail)
    }
}

fn soundex_goldens() -> Outcome {
    let cases = [
        ("a_little", "A000_L340"),
        ("abandon", "A153"),
        ("absolutely_fantastic", "A124_F532"),
        ("robert", "R163"),
        ("rupert", "R163"),
        ("rubin", "R150"),
        ("tymczak", "T522"),
        ("ashcraft", "A261"),
        ("pfister", "P236"),
        ("honeyman", "H555"),
        ("lee", "L000"),
        ("jackson", "J250"),
        ("washington", "W252"),
    ];
    let concepts: Vec<Concept> = cases.iter().map(|(c, _)| Concept::new(*c).unwrap()).collect();
    let start = Instant::now();
    let codes: Vec<String> = concepts
        .iter()
        .map(|c| soundex_concept(c).map(|s| s.as_str().to_string()).unwrap_or_default())
        .collect();
    let elapsed = start.elapsed();
    let wrong: Vec<String> = cases
        .iter()
        .zip(&codes)
        .filter(|((_, want), got)| got != want)
        .map(|((c, want), got)| format!("{c}: {got} != {want}"))
        .collect();
    check(
        wrong.is_empty() && elapsed.as_secs_f64() < 1e-3,
        format!("{} codes exact in {:?}", cases.len(), elapsed),
        format!("{wrong:?} in {elapsed:?}"),
    )
}

fn ipa_goldens() -> Outcome {
    let cases = [
        ("a_little", "æ_lItæl"),
        ("abandon", "æb@ndæn"),
        ("absolutely_fantastic", "@bs@lutlI_f@nt@stIk"),
    ];
    let mut runs = Vec::new();
    for _ in 0..3 {
        let g2p = G2pEngine::bundled();
        let out: Vec<String> = cases
            .iter()
            .map(|(c, _)| {
                g2p.encode_concept(&Concept::new(*c).unwrap())
                    .map(|s| s.as_str().to_string())
                    .unwrap_or_default()
            })
            .collect();
        runs.push(out);
    }
    let exact = runs[0].iter().zip(&cases).all(|(got, (_, want))| got == want);
    let stable = runs.iter().all(|r| r == &runs[0]);
    check(
        exact && stable,
        "3 strings exact, identical over 3 runs".into(),
        format!("got {:?}, stable={stable}", runs[0]),
    )
}

fn oracle_distance(a: &str, b: &str) -> f64 {
    let sa: BTreeSet<char> = a.chars().collect();
    let sb: BTreeSet<char> = b.chars().collect();
    1.0 - 2.0 * sa.intersection(&sb).count() as f64 / (sa.len() + sb.len()) as f64
}

fn dice_fidelity() -> Outcome {
    let v = DistanceVariant::CharSetDice;
    let pairs = [
        ("apple", "appl", 0.143),
        ("sucks", "sux", 0.429),
        ("good", "gud", 0.333),
        ("a_little", "a_lil", 0.200),
    ];
    for (a, b, want) in pairs {
        let d = dice_distance(a, b, v).map_err(|e| e.to_string())?;
        if (d - want).abs() > 1e-3 {
            return Err(format!("({a},{b}) = {d}, want {want}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let alphabet: Vec<char> = "abcdefghijklmnopqrstuvwxyz_@æIOU".chars().collect();
    let word = |rng: &mut ChaCha8Rng| -> String {
        let n = rng.gen_range(1..12);
        (0..n).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
    };
    for i in 0..10_000 {
        let (a, b) = (word(&mut rng), word(&mut rng));
        for variant in [DistanceVariant::CharSetDice, DistanceVariant::BigramDice] {
            let ab = dice_distance(&a, &b, variant).unwrap();
            let ba = dice_distance(&b, &a, variant).unwrap();
            let aa = dice_distance(&a, &a, variant).unwrap();
            if ab != ba || aa != 0.0 || !(0.0..=1.0).contains(&ab) {
                return Err(format!("pair {i} ({a},{b}) {variant:?}: ab={ab} ba={ba} aa={aa}"));
            }
        }
        let d = dice_distance(&a, &b, v).unwrap();
        if (d - oracle_distance(&a, &b)).abs() > 1e-12 {
            return Err(format!("pair {i} ({a},{b}) disagrees with set oracle"));
        }
    }
    Ok("4 reference distances within 1e-3; 10000 pairs symmetric, reflexive, in range".into())
}

fn index_exactness(lex: &PhonLexicon) -> Outcome {
    let start = Instant::now();
    let queries = random_queries(lex, 1000, 42);
    let scans: Vec<_> = queries
        .par_iter()
        .map(|q| closest_match_scan(q, lex, lex.len(), lex.variant()).unwrap())
        .collect();
    let settings: Vec<(usize, f64)> = [1, 5, 20]
        .into_iter()
        .flat_map(|k| [0.0, 0.5, 0.8].map(|m| (k, m)))
        .collect();
    let compared = settings.len() * queries.len();
    let mismatches: usize = queries
        .par_iter()
        .zip(&scans)
        .map(|(q, full)| {
            settings
                .iter()
                .filter(|&&(k, min_sim)| {
                    let mut want = full.clone();
                    want.retain(|m| m.distance <= 1.0 - min_sim);
                    want.truncate(k);
                    lex.index().top_k(q, lex.variant(), k, min_sim).unwrap() != want
                })
                .count()
        })
        .sum();
    let elapsed = start.elapsed();
    check(
        mismatches == 0 && elapsed.as_secs() < 60,
        format!("{compared} comparisons over {} entries, 0 mismatches in {elapsed:.1?}", lex.len()),
        format!("{mismatches} of {compared} mismatched, {elapsed:.1?}"),
    )
}

fn duplicate_direction(lex: &PhonLexicon, g2p: &G2pEngine) -> Outcome {
    let s = lex.duplicate_report(EncodingScheme::Soundex, 0).num_duplicated_concepts;
    let i = lex.duplicate_report(EncodingScheme::Ipa, 0).num_duplicated_concepts;
    let mut msg = format!("bundled: Soundex {s} > IPA {i}");
    if s <= i {
        return Err(msg);
    }
    if let Ok(path) = std::env::var("PHONNORM_SENTICNET") {
        let raw = load_raw_lexicon(&path).map_err(|e| e.to_string())?;
        let full = PhonLexicon::compile(&raw, g2p, lex.variant()).map_err(|e| e.to_string())?;
        let n = full.duplicate_report(EncodingScheme::Soundex, 0).num_duplicated_concepts;
        msg = format!("{msg}; full table: {n} Soundex duplicates of {}", full.len());
        if n != 46080 {
            return Err(format!("{msg}, expected 46080"));
        }
    } else {
        msg.push_str("; absolute count skipped (PHONNORM_SENTICNET unset)");
    }
    Ok(msg)
}

fn table3(p: &Pipeline) -> Outcome {
    use PolarityLabel::*;
    let cases = [
        ("I wil kil u", Negative, &[Neutral][..]),
        ("m so hapy", Positive, &[Neutral][..]),
        ("i dnt lyk reading", Negative, &[Positive, Neutral][..]),
        ("it is awesum 2 ride byk", Positive, &[Neutral][..]),
    ];
    let mut seen = Vec::new();
    for (text, after_want, before_ok) in cases {
        let after = p.sentence_polarity(text).label;
        let before = p.sentence_polarity_in(text, Mode::Before).label;
        seen.push(format!("{before:?}->{after:?}"));
        if after != after_want || !before_ok.contains(&before) || before == after {
            return Err(format!("{text:?}: {before:?} -> {after:?}"));
        }
    }
    Ok(seen.join(", "))
}

fn polarity_delta(p: &Pipeline) -> Outcome {
    let suite = parse_polarity_corpus(data::POLARITY_SUITE, "polarity_suite.tsv").unwrap();
    let r = p.eval_report(&suite);
    let msg = format!(
        "{} sentences: before {:.3}, after {:.3}, delta {:.3}",
        suite.len(),
        r.accuracy_before,
        r.accuracy_after,
        r.delta
    );
    check(r.delta >= 0.15, msg.clone(), msg)
}

fn gate_quality() -> Outcome {
    let start = Instant::now();
    let (corpus, bounds) = match std::env::var("PHONNORM_NUS_CORPUS") {
        Ok(path) => (
            LabeledCorpus::load(&path).map_err(|e| e.to_string())?,
            [(GateKind::LogisticSGD, 0.9275 - 0.04, 0.9275 + 0.04), (GateKind::MultinomialNB, 0.9225 - 0.04, 0.9225 + 0.04)],
        ),
        Err(_) => (
            LabeledCorpus::parse(data::GATE_CORPUS, "gate_corpus.tsv").unwrap(),
            [(GateKind::LogisticSGD, 0.85, 1.0), (GateKind::MultinomialNB, 0.85, 1.0)],
        ),
    };
    let (train, test) = corpus.split(0.2, 42);
    let mut parts = Vec::new();
    let mut ok = true;
    for (kind, lo, hi) in bounds {
        let model = GateModel::train(&train, kind, Hyperparams::default(), 42).map_err(|e| e.to_string())?;
        let acc = evaluate(&model, &test).accuracy;
        ok &= (lo..=hi).contains(&acc);
        parts.push(format!("{kind:?} {acc:.4} in [{lo:.4}, {hi:.4}]"));
    }
    let elapsed = start.elapsed();
    let msg = format!("{} sentences, {} ({elapsed:.1?})", corpus.len(), parts.join(", "));
    check(ok && elapsed.as_secs() < 30, msg.clone(), msg)
}

fn gating_efficiency() -> Outcome {
    let corpus = LabeledCorpus::parse(data::GATE_CORPUS, "gate_corpus.tsv").unwrap();
    let model = GateModel::train(&corpus, GateKind::LogisticSGD, Hyperparams::default(), 42)
        .map_err(|e| e.to_string())?;
    let mut p = Pipeline::bundled(PipelineConfig::default())
        .map_err(|e| e.to_string())?
        .with_gate(Some(model));
    let mix = LabeledCorpus::parse(data::GATING_MIX, "gating_mix.tsv").unwrap();
    let r = bench_gating(&mut p, &mix);
    let msg = format!(
        "normalization invocations {} -> {} ({:.1}% fewer), index searches {:.1}% fewer, OOV outputs identical: {}",
        r.ungated.normalization_invocations,
        r.gated.normalization_invocations,
        100.0 * r.invocation_reduction,
        100.0 * r.search_reduction,
        r.identical_on_oov
    );
    check(r.invocation_reduction >= 0.30 && r.identical_on_oov, msg.clone(), msg)
}

fn determinism() -> Outcome {
    let suite = parse_polarity_corpus(data::POLARITY_SUITE, "polarity_suite.tsv").unwrap();
    let run = || -> Result<String, String> {
        let p = Pipeline::bundled(PipelineConfig::default()).map_err(|e| e.to_string())?;
        serde_json::to_string(&p.eval_report(&suite)).map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    check(a == b, format!("two reports, {} bytes each, identical", a.len()), "reports differ".into())
}

fn main() {
    let g2p = G2pEngine::bundled();
    let lex = PhonLexicon::bundled(&g2p, DistanceVariant::CharSetDice).expect("bundled lexicon");
    let pipeline = Pipeline::bundled(PipelineConfig::default()).expect("bundled pipeline");

    let results: Vec<(&str, Outcome)> = vec![
        ("soundex golden vectors", soundex_goldens()),
        ("ipa golden vectors", ipa_goldens()),
        ("dice fidelity", dice_fidelity()),
        ("index exactness", index_exactness(&lex)),
        ("duplicate-rate direction", duplicate_direction(&lex, &g2p)),
        ("table 3 reproduction", table3(&pipeline)),
        ("polarity delta", polarity_delta(&pipeline)),
        ("gate quality", gate_quality()),
        ("gating efficiency", gating_efficiency()),
        ("determinism", determinism()),
    ];

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
