mod config;
mod output;

use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use phonnorm::bench::{bench_gating, bench_index, random_queries};
use phonnorm::concepts::{parse_stopwords, parse_substitutions, ConceptExtractor};
use phonnorm::data;
use phonnorm::gate::{evaluate, GateKind, GateModel, Hyperparams, LabeledCorpus};
use phonnorm::lexicon::{load_raw_lexicon, parse_raw_lexicon};
use phonnorm::phonetics::{soundex_concept, RuleSet};
use phonnorm::pipeline::{parse_polarity_corpus, Pipeline, PipelineConfig};
use phonnorm::{dice_distance, Concept, DistanceVariant, EncodingScheme, G2pEngine, PhonLexicon};

use config::{FileConfig, Paths};
use output::{emit, round, Format};

#[derive(Debug, Parser)]
#[command(
    name = "phonnorm",
    version,
    about = "Phonetic microtext normalization for concept-level sentiment analysis"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// TOML file with defaults for paths, seed, threads, format and [pipeline]
    #[arg(long, global = true, env = "PHONNORM_CONFIG")]
    config: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Seed for every random choice (splits, shuffling, bench queries)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for eval and bench (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Raw `concept<TAB>polarity` table or a compiled lexicon
    #[arg(long, global = true, env = "PHONNORM_LEXICON")]
    lexicon: Option<PathBuf>,
    /// Letter-to-sound rule file
    #[arg(long, global = true, env = "PHONNORM_RULES")]
    rules: Option<PathBuf>,
    /// `word<TAB>ipa` pronunciation dictionary
    #[arg(long, global = true, env = "PHONNORM_EXCEPTIONS")]
    exceptions: Option<PathBuf>,
    #[arg(long, global = true, env = "PHONNORM_STOPWORDS")]
    stopwords: Option<PathBuf>,
    #[arg(long, global = true, env = "PHONNORM_SUBSTITUTIONS")]
    substitutions: Option<PathBuf>,
    /// Trained gate model (JSON); enables gating for pipeline commands
    #[arg(long, global = true, env = "PHONNORM_MODEL")]
    model: Option<PathBuf>,

    /// Largest accepted match distance
    #[arg(long, global = true)]
    tau: Option<f64>,
    /// Candidates retrieved per lookup
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Distance variant: charset or bigram
    #[arg(long, global = true)]
    variant: Option<DistanceVariant>,
    /// Similarity cut for index lookups
    #[arg(long, global = true)]
    min_sim: Option<f64>,
    /// Longest multiword concept tried during extraction
    #[arg(long, global = true)]
    max_n: Option<usize>,
    /// Ignore the gate model even when one is given
    #[arg(long, global = true)]
    no_gate: bool,
}

#[derive(Debug, Args)]
struct TextInput {
    /// Process this text instead of reading lines from stdin
    #[arg(long)]
    text: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode a raw lexicon and write the compiled JSON-lines form
    Compile {
        /// Raw lexicon (default: the bundled one, or --lexicon)
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Soundex and IPA encodings of a concept (or of each stdin line)
    Encode {
        #[arg(long)]
        concept: Option<String>,
    },
    /// Dice distance between two strings
    Distance {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Encode both strings with the G2P engine first
        #[arg(long)]
        encode: bool,
        #[arg(long, default_value_t = 3)]
        precision: u32,
    },
    /// Phonetically closest lexicon concepts for a token or concept
    Match {
        #[arg(long)]
        query: Option<String>,
        #[arg(long, default_value_t = 3)]
        precision: u32,
    },
    /// Train an OOV/IV gate model
    GateTrain {
        /// Labeled or parallel corpus (default: bundled)
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// nb (multinomial naive Bayes) or lr (logistic regression)
        #[arg(long, default_value = "lr")]
        kind: GateKind,
        #[arg(long, short)]
        output: PathBuf,
        /// Fraction held out for evaluation; 0 trains on everything
        #[arg(long, default_value_t = 0.2)]
        test_fraction: f64,
        #[command(flatten)]
        hp: HyperArgs,
    },
    /// Evaluate a gate model, or train and evaluate both kinds on a split
    GateEval {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 0.2)]
        test_fraction: f64,
        #[command(flatten)]
        hp: HyperArgs,
    },
    /// Gate prediction for each input sentence
    Classify {
        #[command(flatten)]
        input: TextInput,
    },
    /// Rewrite each input sentence with normalized concepts
    Normalize {
        #[command(flatten)]
        input: TextInput,
    },
    /// Sentence polarity with its normalization trace
    Polarity {
        #[command(flatten)]
        input: TextInput,
        /// Exact lookups only, no phonetic matching
        #[arg(long)]
        before: bool,
    },
    /// Concepts sharing an encoding
    ReportDuplicates {
        /// soundex, ipa, or both
        #[arg(long, default_value = "both")]
        scheme: String,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Polarity accuracy without and with normalization
    Eval {
        /// `text<TAB>gold` corpus (default: bundled suite)
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Also write the report here
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Scan-vs-index latency and gated-vs-ungated normalization counts
    Bench {
        #[arg(long, default_value_t = 1000)]
        queries: usize,
        /// IV/OOV labeled corpus for the gating measurement (default: bundled)
        #[arg(long)]
        mix: Option<PathBuf>,
        /// Gate kind trained on the bundled corpus when no --model is given
        #[arg(long, default_value = "lr")]
        kind: GateKind,
    },
}

#[derive(Debug, Args)]
struct HyperArgs {
    #[arg(long, default_value_t = Hyperparams::default().alpha)]
    alpha: f64,
    #[arg(long, default_value_t = Hyperparams::default().learning_rate)]
    learning_rate: f64,
    #[arg(long, default_value_t = Hyperparams::default().epochs)]
    epochs: usize,
}

impl HyperArgs {
    fn get(&self) -> Hyperparams {
        Hyperparams {
            alpha: self.alpha,
            learning_rate: self.learning_rate,
            epochs: self.epochs,
        }
    }
}

/// Bad flag values or combinations; exit code 1.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

struct Ctx {
    format: Format,
    seed: u64,
    paths: Paths,
    pipeline: PipelineConfig,
    use_gate: bool,
}

impl Ctx {
    fn new(g: &GlobalArgs) -> Result<Self> {
        let file = match &g.config {
            Some(p) => FileConfig::load(p).map_err(|e| usage(format!("{e:#}")))?,
            None => FileConfig::default(),
        };
        let format = match (g.format, &file.format) {
            (Some(f), _) => f,
            (None, Some(s)) => s.parse().map_err(usage)?,
            (None, None) => Format::Json,
        };
        let flags = Paths {
            lexicon: g.lexicon.clone(),
            rules: g.rules.clone(),
            exceptions: g.exceptions.clone(),
            stopwords: g.stopwords.clone(),
            substitutions: g.substitutions.clone(),
            model: g.model.clone(),
        };
        let mut pipeline = file.pipeline;
        if let Some(v) = g.tau {
            pipeline.tau = v;
        }
        if let Some(v) = g.k {
            pipeline.k = v;
        }
        if let Some(v) = g.variant {
            pipeline.variant = v;
        }
        if let Some(v) = g.min_sim {
            pipeline.min_sim = v;
        }
        if let Some(v) = g.max_n {
            pipeline.max_n = v;
        }
        if g.no_gate {
            pipeline.gate_enabled = false;
        }
        pipeline.validate().map_err(|e| usage(e.to_string()))?;

        if let Some(n) = g.threads.or(file.threads) {
            if n == 0 {
                return Err(usage("--threads must be at least 1"));
            }
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
        }
        Ok(Ctx {
            format,
            seed: g.seed.or(file.seed).unwrap_or(42),
            paths: file.paths.overlay(flags),
            use_gate: pipeline.gate_enabled,
            pipeline,
        })
    }

    fn g2p(&self) -> Result<G2pEngine> {
        if self.paths.rules.is_none() && self.paths.exceptions.is_none() {
            return Ok(G2pEngine::bundled());
        }
        let rules = match &self.paths.rules {
            Some(p) => RuleSet::parse(&read(p)?, &p.display().to_string())?,
            None => RuleSet::parse(data::G2P_RULES, "g2p_rules.txt")?,
        };
        let exceptions = match &self.paths.exceptions {
            Some(p) => G2pEngine::parse_exceptions(&read(p)?, &p.display().to_string())?,
            None => G2pEngine::parse_exceptions(data::G2P_EXCEPTIONS, "g2p_exceptions.tsv")?,
        };
        Ok(G2pEngine::new(exceptions, rules))
    }

    /// A compiled file is recognised by its JSON header line.
    fn lexicon(&self, g2p: &G2pEngine) -> Result<PhonLexicon> {
        let variant = self.pipeline.variant;
        let Some(path) = &self.paths.lexicon else {
            return Ok(PhonLexicon::bundled(g2p, variant)?);
        };
        let text = read(path)?;
        let name = path.display().to_string();
        if text.trim_start().starts_with('{') {
            let lex = PhonLexicon::read_jsonl(text.as_bytes(), &name)?;
            if lex.variant() == variant {
                return Ok(lex);
            }
            // compiled for the other variant: the index is rebuilt anyway
            return Ok(PhonLexicon::from_entries(lex.entries().to_vec(), variant)?);
        }
        Ok(PhonLexicon::compile(&parse_raw_lexicon(&text, &name)?, g2p, variant)?)
    }

    fn extractor(&self) -> Result<ConceptExtractor> {
        let stopwords = match &self.paths.stopwords {
            Some(p) => parse_stopwords(&read(p)?),
            None => parse_stopwords(data::STOPWORDS),
        };
        let subs = match &self.paths.substitutions {
            Some(p) => parse_substitutions(&read(p)?, &p.display().to_string())?,
            None => parse_substitutions(data::SUBSTITUTIONS, "substitutions.tsv")?,
        };
        Ok(ConceptExtractor::new(stopwords, &subs, self.pipeline.max_n)?)
    }

    fn model(&self) -> Result<Option<GateModel>> {
        match &self.paths.model {
            Some(p) => Ok(Some(GateModel::load(p)?)),
            None => Ok(None),
        }
    }

    fn pipeline(&self) -> Result<Pipeline> {
        let g2p = self.g2p()?;
        let lexicon = self.lexicon(&g2p)?;
        let gate = if self.use_gate { self.model()? } else { None };
        Ok(Pipeline::new(lexicon, g2p, self.extractor()?, gate, self.pipeline)?)
    }

    fn corpus(&self, path: &Option<PathBuf>) -> Result<LabeledCorpus> {
        Ok(match path {
            Some(p) => LabeledCorpus::load(p)?,
            None => LabeledCorpus::parse(data::GATE_CORPUS, "gate_corpus.tsv")?,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// One output record per input line, in order. A line that fails yields an
/// `{"error": ...}` record; the command then exits with a data error.
fn stream(
    input: &TextInput,
    out: &mut impl Write,
    format: Format,
    mut f: impl FnMut(&str, &mut dyn Write) -> Result<()>,
) -> Result<()> {
    if let Some(text) = &input.text {
        return f(text, out);
    }
    let mut failed = 0usize;
    for line in io::stdin().lock().lines() {
        let line = line?;
        if let Err(e) = f(&line, out) {
            failed += 1;
            emit_dyn(out, &json!({ "error": format!("{e:#}") }), format)?;
        }
        out.flush()?;
    }
    if failed > 0 {
        anyhow::bail!("{failed} input line(s) failed");
    }
    Ok(())
}

fn emit_dyn<T: Serialize>(out: &mut dyn Write, record: &T, format: Format) -> Result<()> {
    writeln!(out, "{}", output::render(record, format)?)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let ctx = Ctx::new(&cli.global)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let fmt = ctx.format;

    match cli.command {
        Command::Compile { input, output } => {
            let g2p = ctx.g2p()?;
            let raw = match input.as_ref().or(ctx.paths.lexicon.as_ref()) {
                Some(p) => load_raw_lexicon(p)?,
                None => parse_raw_lexicon(data::LEXICON_TSV, "lexicon.tsv")?,
            };
            let lex = PhonLexicon::compile(&raw, &g2p, ctx.pipeline.variant)?;
            lex.save(&output)?;
            emit(
                &mut out,
                &json!({
                    "concepts": lex.len(),
                    "variant": lex.variant(),
                    "output": output.display().to_string(),
                }),
                fmt,
            )?;
        }
        Command::Encode { concept } => {
            let g2p = ctx.g2p()?;
            let input = TextInput { text: concept };
            stream(&input, &mut out, fmt, |line, out| {
                let concept = Concept::canonicalize(line)?;
                let record = json!({
                    "soundex": soundex_concept(&concept)?.as_str(),
                    "ipa": g2p.encode_concept(&concept)?.as_str(),
                });
                emit_dyn(out, &record, fmt)
            })?;
        }
        Command::Distance {
            a,
            b,
            encode,
            precision,
        } => {
            let (a, b) = if encode {
                let g2p = ctx.g2p()?;
                let enc = |s: &str| -> Result<String> {
                    Ok(g2p.encode_concept(&Concept::canonicalize(s)?)?.as_str().to_string())
                };
                (enc(&a)?, enc(&b)?)
            } else {
                (a, b)
            };
            let d = dice_distance(&a, &b, ctx.pipeline.variant).map_err(|e| usage(e.to_string()))?;
            emit(&mut out, &json!({ "distance": round(d, precision) }), fmt)?;
        }
        Command::Match { query, precision } => {
            let g2p = ctx.g2p()?;
            let lex = ctx.lexicon(&g2p)?;
            let cfg = ctx.pipeline;
            stream(&TextInput { text: query }, &mut out, fmt, |line, out| {
                let concept = Concept::canonicalize(line)?;
                let ipa = g2p.encode_concept(&concept)?;
                let hits = lex.index().top_k(ipa.as_str(), cfg.variant, cfg.k, cfg.min_sim)?;
                let matches: Vec<_> = hits
                    .iter()
                    .map(|h| {
                        json!({
                            "concept": h.concept,
                            "distance": round(h.distance, precision),
                            "polarity": lex.entry(h.entry_id).polarity,
                        })
                    })
                    .collect();
                let record = json!({ "query": concept, "ipa": ipa.as_str(), "matches": matches });
                emit_dyn(out, &record, fmt)
            })?;
        }
        Command::GateTrain {
            corpus,
            kind,
            output,
            test_fraction,
            hp,
        } => {
            if !(0.0..1.0).contains(&test_fraction) {
                return Err(usage("--test-fraction must lie in [0, 1)"));
            }
            let corpus = ctx.corpus(&corpus)?;
            let (train, test) = corpus.split(test_fraction, ctx.seed);
            let model = GateModel::train(&train, kind, hp.get(), ctx.seed)?;
            model.save(&output)?;
            let heldout = (!test.is_empty()).then(|| evaluate(&model, &test));
            emit(
                &mut out,
                &json!({
                    "kind": kind,
                    "train_size": train.len(),
                    "test_size": test.len(),
                    "vocabulary": model.vocabulary.len(),
                    "heldout": heldout,
                    "output": output.display().to_string(),
                }),
                fmt,
            )?;
        }
        Command::GateEval {
            corpus,
            test_fraction,
            hp,
        } => {
            let corpus = ctx.corpus(&corpus)?;
            if let Some(model) = ctx.model()? {
                let report = evaluate(&model, &corpus);
                emit(&mut out, &json!({ "kind": model.kind, "size": corpus.len(), "report": report }), fmt)?;
            } else {
                if !(0.0..1.0).contains(&test_fraction) || test_fraction == 0.0 {
                    return Err(usage("--test-fraction must lie in (0, 1)"));
                }
                let (train, test) = corpus.split(test_fraction, ctx.seed);
                for kind in [GateKind::MultinomialNB, GateKind::LogisticSGD] {
                    let model = GateModel::train(&train, kind, hp.get(), ctx.seed)?;
                    let report = evaluate(&model, &test);
                    emit(
                        &mut out,
                        &json!({
                            "kind": kind,
                            "train_size": train.len(),
                            "test_size": test.len(),
                            "seed": ctx.seed,
                            "report": report,
                        }),
                        fmt,
                    )?;
                }
            }
        }
        Command::Classify { input } => {
            let model = match ctx.model()? {
                Some(m) => m,
                None => {
                    let corpus = ctx.corpus(&None)?;
                    GateModel::train(&corpus, GateKind::LogisticSGD, Hyperparams::default(), ctx.seed)?
                }
            };
            stream(&input, &mut out, fmt, |line, out| {
                let (label, score) = model.predict(line);
                emit_dyn(out, &json!({ "label": label, "score": score }), fmt)
            })?;
        }
        Command::Normalize { input } => {
            let p = ctx.pipeline()?;
            stream(&input, &mut out, fmt, |line, out| {
                let record = json!({ "input": line, "normalized": p.normalize_sentence(line) });
                emit_dyn(out, &record, fmt)
            })?;
        }
        Command::Polarity { input, before } => {
            let p = ctx.pipeline()?;
            let mode = if before {
                phonnorm::pipeline::Mode::Before
            } else {
                phonnorm::pipeline::Mode::After
            };
            stream(&input, &mut out, fmt, |line, out| {
                emit_dyn(out, &p.sentence_polarity_in(line, mode), fmt)
            })?;
        }
        Command::ReportDuplicates { scheme, top } => {
            let schemes = match scheme.to_ascii_lowercase().as_str() {
                "both" => vec![EncodingScheme::Soundex, EncodingScheme::Ipa],
                s => vec![s.parse::<EncodingScheme>().map_err(usage)?],
            };
            let g2p = ctx.g2p()?;
            let lex = ctx.lexicon(&g2p)?;
            for s in schemes {
                emit(&mut out, &lex.duplicate_report(s, top), fmt)?;
            }
        }
        Command::Eval { corpus, output } => {
            let p = ctx.pipeline()?;
            let rows = match &corpus {
                Some(path) => parse_polarity_corpus(&read(path)?, &path.display().to_string())?,
                None => parse_polarity_corpus(data::POLARITY_SUITE, "polarity_suite.tsv")?,
            };
            let report = p.eval_report(&rows);
            let line = output::render(&report, fmt)?;
            if let Some(path) = output {
                fs::write(&path, format!("{line}\n"))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            writeln!(out, "{line}")?;
        }
        Command::Bench { queries, mix, kind } => {
            let mut p = ctx.pipeline()?;
            let qs = random_queries(p.lexicon(), queries, ctx.seed);
            let index = bench_index(p.lexicon(), &qs, ctx.pipeline.k, ctx.pipeline.min_sim)?;
            if p.gate().is_none() {
                let corpus = ctx.corpus(&None)?;
                let model = GateModel::train(&corpus, kind, Hyperparams::default(), ctx.seed)?;
                p = p.with_gate(Some(model));
            }
            let mix = match &mix {
                Some(path) => LabeledCorpus::load(path)?,
                None => LabeledCorpus::parse(data::GATING_MIX, "gating_mix.tsv")?,
            };
            let gating = bench_gating(&mut p, &mix);
            emit(&mut out, &json!({ "index": index, "gating": gating }), fmt)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
