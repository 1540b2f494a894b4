use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

use phonnorm::pipeline::PipelineConfig;

/// Settings read from a TOML file. Every field is optional; flags and
/// `PHONNORM_*` path variables take precedence.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub format: Option<String>,
    pub paths: Paths,
    pub pipeline: PipelineConfig,
}

#[derive(Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub lexicon: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub exceptions: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub substitutions: Option<PathBuf>,
    pub model: Option<PathBuf>,
}

impl Paths {
    /// Fields set in `other` win.
    pub fn overlay(self, other: Paths) -> Paths {
        Paths {
            lexicon: other.lexicon.or(self.lexicon),
            rules: other.rules.or(self.rules),
            exceptions: other.exceptions.or(self.exceptions),
            stopwords: other.stopwords.or(self.stopwords),
            substitutions: other.substitutions.or(self.substitutions),
            model: other.model.or(self.model),
        }
    }
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use phonnorm::DistanceVariant;

    #[test]
    fn partial_file() {
        let cfg: FileConfig = toml::from_str(
            "seed = 7\n[paths]\nlexicon = \"lex.tsv\"\n[pipeline]\ntau = 0.3\nvariant = \"bigram\"\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.paths.lexicon.unwrap(), PathBuf::from("lex.tsv"));
        assert_eq!(cfg.pipeline.tau, 0.3);
        assert_eq!(cfg.pipeline.variant, DistanceVariant::BigramDice);
        assert_eq!(cfg.pipeline.k, PipelineConfig::default().k);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<FileConfig>("sed = 1\n").is_err());
        assert!(toml::from_str::<FileConfig>("[pipeline]\ntaux = 1\n").is_err());
    }

    #[test]
    fn overlay_prefers_later() {
        let a = Paths {
            lexicon: Some("a".into()),
            model: Some("m".into()),
            ..Default::default()
        };
        let b = Paths {
            lexicon: Some("b".into()),
            ..Default::default()
        };
        let c = a.overlay(b);
        assert_eq!(c.lexicon.unwrap(), PathBuf::from("b"));
        assert_eq!(c.model.unwrap(), PathBuf::from("m"));
    }
}
