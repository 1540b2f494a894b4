use std::collections::HashMap;

use crate::data;
use crate::error::{Error, Result};
use crate::lexicon::Concept;

use super::{IpaString, RuleSet};

/// Spoken forms of the digits, substituted in place inside tokens.
pub const DIGIT_NAMES: [&str; 10] = [
    "zIro", "w@n", "tu", "Tri", "fOr", "faIv", "sIks", "sEv@n", "et", "naIn",
];

/// Collapses every run of three or more identical characters to two.
pub fn squeeze_repeats(token: &str) -> String {
    let mut out = String::with_capacity(token.len());
    let mut prev = None;
    let mut run = 0;
    for c in token.chars() {
        if Some(c) == prev {
            run += 1;
        } else {
            prev = Some(c);
            run = 1;
        }
        if run <= 2 {
            out.push(c);
        }
    }
    out
}

/// Grapheme-to-phoneme engine: exception dictionary, then ordered rules.
///
/// Encoding a token squeezes emphatic repeats, looks an all-letter token up
/// in the exception dictionary, and falls back to the rule cascade. Tokens
/// with digits are split into letter runs (rules only) and digits (spoken
/// forms from [`DIGIT_NAMES`]).
#[derive(Debug, Clone)]
pub struct G2pEngine {
    exceptions: HashMap<String, String>,
    rules: RuleSet,
    digits: [String; 10],
}

impl G2pEngine {
    pub fn new(exceptions: HashMap<String, String>, rules: RuleSet) -> Self {
        G2pEngine {
            exceptions,
            rules,
            digits: DIGIT_NAMES.map(str::to_string),
        }
    }

    /// The engine built from the bundled rule file and exception dictionary.
    pub fn bundled() -> Self {
        let rules = RuleSet::parse(data::G2P_RULES, "g2p_rules.txt").expect("bundled rules parse");
        let exceptions = Self::parse_exceptions(data::G2P_EXCEPTIONS, "g2p_exceptions.tsv")
            .expect("bundled exceptions parse");
        G2pEngine::new(exceptions, rules)
    }

    /// Parses a `token<TAB>ipa` exception table.
    pub fn parse_exceptions(text: &str, source_name: &str) -> Result<HashMap<String, String>> {
        let mut map = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, ipa) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(source_name, i + 1, "expected token<TAB>ipa"))?;
            if word.is_empty() || !word.bytes().all(|b| b.is_ascii_lowercase()) {
                return Err(Error::parse(source_name, i + 1, format!("bad token {word:?}")));
            }
            if ipa.is_empty() || ipa.contains(['\t', '_', ' ']) {
                return Err(Error::parse(source_name, i + 1, format!("bad encoding {ipa:?}")));
            }
            map.insert(word.to_string(), ipa.to_string());
        }
        Ok(map)
    }

    pub fn exceptions(&self) -> &HashMap<String, String> {
        &self.exceptions
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn encode_token(&self, token: &str) -> Result<String> {
        if token.is_empty() {
            return Err(Error::encoding(token, "empty token"));
        }
        if let Some(bad) = token
            .chars()
            .find(|c| !(c.is_ascii_lowercase() || c.is_ascii_digit() || *c == '-'))
        {
            return Err(Error::encoding(token, format!("unexpected character {bad:?}")));
        }
        let squeezed = squeeze_repeats(token);
        let mut out = String::new();
        for part in squeezed.split('-').filter(|p| !p.is_empty()) {
            self.encode_part(part, &mut out)?;
        }
        if out.is_empty() {
            return Err(Error::encoding(token, "empty encoding"));
        }
        Ok(out)
    }

    fn encode_part(&self, part: &str, out: &mut String) -> Result<()> {
        if part.bytes().all(|b| b.is_ascii_lowercase()) {
            match self.exceptions.get(part) {
                Some(ipa) => out.push_str(ipa),
                None => out.push_str(&self.rules.apply(part)?),
            }
            return Ok(());
        }
        let mut rest = part;
        while !rest.is_empty() {
            let split = rest
                .find(|c: char| c.is_ascii_digit() != rest.starts_with(|d: char| d.is_ascii_digit()))
                .unwrap_or(rest.len());
            let (run, tail) = rest.split_at(split);
            if run.starts_with(|c: char| c.is_ascii_digit()) {
                for d in run.bytes() {
                    out.push_str(&self.digits[(d - b'0') as usize]);
                }
            } else {
                out.push_str(&self.rules.apply(run)?);
            }
            rest = tail;
        }
        Ok(())
    }

    /// Encodes every token of a concept and joins the segments with `_`.
    pub fn encode_concept(&self, concept: &Concept) -> Result<IpaString> {
        let segments = concept
            .tokens()
            .map(|t| self.encode_token(t))
            .collect::<Result<Vec<_>>>()?;
        IpaString::new(segments.join("_"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine() -> G2pEngine {
        G2pEngine::bundled()
    }

    #[test]
    fn squeeze_examples() {
        assert_eq!(squeeze_repeats("goooooood"), "good");
        assert_eq!(squeeze_repeats("good"), "good");
        assert_eq!(squeeze_repeats("sooo"), "soo");
        assert_eq!(squeeze_repeats(""), "");
        assert_eq!(squeeze_repeats("aaabbbccc"), "aabbcc");
    }

    #[test]
    fn published_encodings() {
        let g = engine();
        assert_eq!(g.encode_token("abandon").unwrap(), "æb@ndæn");
        assert_eq!(g.encode_token("a").unwrap(), "æ");
        let c = Concept::new("absolutely_fantastic").unwrap();
        assert_eq!(g.encode_concept(&c).unwrap().as_str(), "@bs@lutlI_f@nt@stIk");
        let c = Concept::new("a_little").unwrap();
        assert_eq!(g.encode_concept(&c).unwrap().as_str(), "æ_lItæl");
    }

    #[test]
    fn digits_expand_in_place() {
        let g = engine();
        assert_eq!(g.encode_token("b4").unwrap(), "bfOr");
        assert_eq!(g.encode_token("2").unwrap(), "tu");
        assert_eq!(g.encode_token("gr8").unwrap(), "gret");
        assert_eq!(g.encode_token("h8").unwrap(), "het");
        let c = Concept::new("b4_lunch").unwrap();
        let ipa = g.encode_concept(&c).unwrap();
        assert_eq!(ipa.segments().next(), Some("bfOr"));
        assert_eq!(ipa.segments().count(), 2);
    }

    #[test]
    fn emphasis_is_squeezed_before_lookup() {
        let g = engine();
        assert_eq!(g.encode_token("goooooood").unwrap(), g.encode_token("good").unwrap());
    }

    #[test]
    fn rules_cover_unknown_words() {
        let g = engine();
        for word in ["gud", "kil", "wil", "hapy", "dnt", "lyk", "awesum", "byk", "xqzw"] {
            assert!(!g.exceptions().contains_key(word), "{word} must go through the rules");
            assert!(!g.encode_token(word).unwrap().is_empty());
        }
        assert_eq!(g.encode_token("lyk").unwrap(), "laIk");
        assert_eq!(g.encode_token("byk").unwrap(), "baIk");
        assert_eq!(g.encode_token("awesum").unwrap(), "As@m");
        assert_eq!(g.encode_token("hapy").unwrap(), "hæpi");
        assert_eq!(g.encode_token("gud").unwrap(), "gUd");
    }

    #[test]
    fn bad_tokens() {
        let g = engine();
        assert!(g.encode_token("").is_err());
        assert!(g.encode_token("Abc").is_err());
        assert!(g.encode_token("a b").is_err());
        assert!(g.encode_token("---").is_err());
    }

    #[test]
    fn exception_dictionary_round_trips() {
        let g = engine();
        assert!(g.exceptions().len() >= 2000);
        for (word, ipa) in g.exceptions() {
            assert_eq!(&g.encode_token(word).unwrap(), ipa, "{word}");
        }
    }
}
