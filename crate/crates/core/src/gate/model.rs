use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tfidf::{SparseVector, TfIdfVectorizer};
use super::{GateLabel, LabeledCorpus};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    MultinomialNB,
    LogisticSGD,
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "nb" | "multinomialnb" | "naive-bayes" => Ok(GateKind::MultinomialNB),
            "lr" | "logisticsgd" | "logistic" => Ok(GateKind::LogisticSGD),
            other => Err(format!("unknown classifier {other:?} (expected nb or lr)")),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateKind::MultinomialNB => "MultinomialNB",
            GateKind::LogisticSGD => "LogisticSGD",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    /// Additive smoothing for naive Bayes.
    pub alpha: f64,
    pub learning_rate: f64,
    pub epochs: usize,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            alpha: 1.0,
            learning_rate: 0.1,
            epochs: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Parameters {
    /// Indexed by class: 0 = IV, 1 = OOV.
    NaiveBayes {
        class_log_prior: [f64; 2],
        feature_log_prob: [Vec<f64>; 2],
    },
    Logistic { weights: Vec<f64>, bias: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateModel {
    pub kind: GateKind,
    pub hyperparams: Hyperparams,
    pub vocabulary: TfIdfVectorizer,
    pub parameters: Parameters,
    pub seed: u64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn dot(w: &[f64], x: &SparseVector) -> f64 {
    x.iter().map(|&(i, v)| w[i] * v).sum()
}

impl GateModel {
    /// Deterministic for a given corpus, kind, hyperparameters and seed.
    pub fn train(corpus: &LabeledCorpus, kind: GateKind, hp: Hyperparams, seed: u64) -> Result<Self> {
        let records = corpus.records();
        if records.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !corpus.has_both_labels() {
            return Err(Error::SingleClass);
        }
        let texts: Vec<&str> = records.iter().map(|(t, _)| t.as_str()).collect();
        let vectorizer = TfIdfVectorizer::fit(&texts);
        let xs: Vec<SparseVector> = texts.iter().map(|t| vectorizer.transform(t)).collect();
        let ys: Vec<usize> = records.iter().map(|(_, l)| l.class_index()).collect();
        let dim = vectorizer.len();

        let parameters = match kind {
            GateKind::MultinomialNB => {
                let mut mass = [vec![0.0; dim], vec![0.0; dim]];
                let mut docs = [0usize; 2];
                for (x, &y) in xs.iter().zip(&ys) {
                    docs[y] += 1;
                    for &(i, v) in x {
                        mass[y][i] += v;
                    }
                }
                let n = records.len() as f64;
                let class_log_prior = [(docs[0] as f64 / n).ln(), (docs[1] as f64 / n).ln()];
                let feature_log_prob = mass.map(|m| {
                    let total: f64 = m.iter().sum::<f64>() + hp.alpha * dim as f64;
                    m.iter().map(|c| ((c + hp.alpha) / total).ln()).collect()
                });
                Parameters::NaiveBayes {
                    class_log_prior,
                    feature_log_prob,
                }
            }
            GateKind::LogisticSGD => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut order: Vec<usize> = (0..xs.len()).collect();
                let mut weights = vec![0.0; dim];
                let mut bias = 0.0;
                for _ in 0..hp.epochs {
                    order.shuffle(&mut rng);
                    for &j in &order {
                        let p = sigmoid(dot(&weights, &xs[j]) + bias);
                        let g = p - ys[j] as f64;
                        for &(i, v) in &xs[j] {
                            weights[i] -= hp.learning_rate * g * v;
                        }
                        bias -= hp.learning_rate * g;
                    }
                }
                Parameters::Logistic { weights, bias }
            }
        };
        Ok(GateModel {
            kind,
            hyperparams: hp,
            vocabulary: vectorizer,
            parameters,
            seed,
        })
    }

    /// `P(OOV | text)`.
    pub fn score(&self, text: &str) -> f64 {
        let x = self.vocabulary.transform(text);
        match &self.parameters {
            Parameters::NaiveBayes {
                class_log_prior,
                feature_log_prob,
            } => {
                let iv = class_log_prior[0] + dot(&feature_log_prob[0], &x);
                let oov = class_log_prior[1] + dot(&feature_log_prob[1], &x);
                sigmoid(oov - iv)
            }
            Parameters::Logistic { weights, bias } => sigmoid(dot(weights, &x) + bias),
        }
    }

    pub fn predict(&self, text: &str) -> (GateLabel, f64) {
        let p = self.score(text);
        (if p >= 0.5 { GateLabel::Oov } else { GateLabel::Iv }, p)
    }

    fn check(&self) -> std::result::Result<(), String> {
        let dim = self.vocabulary.len();
        let ok = match &self.parameters {
            Parameters::NaiveBayes { feature_log_prob, .. } => {
                feature_log_prob.iter().all(|v| v.len() == dim)
            }
            Parameters::Logistic { weights, .. } => weights.len() == dim,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("parameter dimensionality does not match the {dim}-token vocabulary"))
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str, source_name: &str) -> Result<Self> {
        let model: GateModel =
            serde_json::from_str(text).map_err(|e| Error::parse(source_name, e.line(), e.to_string()))?;
        model.check().map_err(|m| Error::parse(source_name, 1, m))?;
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut out, self)?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let model: GateModel = serde_json::from_reader(BufReader::new(File::open(path)?))
            .map_err(|e| Error::parse(&path.display().to_string(), e.line(), e.to_string()))?;
        model
            .check()
            .map_err(|m| Error::parse(&path.display().to_string(), 1, m))?;
        Ok(model)
    }
}
