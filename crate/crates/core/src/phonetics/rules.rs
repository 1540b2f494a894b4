//! Ordered contextual letter-to-sound rewrite rules.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Letter(u8),
    Boundary,
    Vowels,
    Consonants,
    Consonant,
    Voiced,
    Front,
    Sibilant,
    LongU,
    Suffix,
}

impl Ctx {
    fn parse(c: char) -> Option<Ctx> {
        Some(match c {
            'a'..='z' => Ctx::Letter(c as u8),
            '_' => Ctx::Boundary,
            '#' => Ctx::Vowels,
            ':' => Ctx::Consonants,
            '^' => Ctx::Consonant,
            '.' => Ctx::Voiced,
            '+' => Ctx::Front,
            '&' => Ctx::Sibilant,
            '@' => Ctx::LongU,
            '%' => Ctx::Suffix,
            _ => return None,
        })
    }

    fn symbol(self) -> char {
        match self {
            Ctx::Letter(b) => b as char,
            Ctx::Boundary => '_',
            Ctx::Vowels => '#',
            Ctx::Consonants => ':',
            Ctx::Consonant => '^',
            Ctx::Voiced => '.',
            Ctx::Front => '+',
            Ctx::Sibilant => '&',
            Ctx::LongU => '@',
            Ctx::Suffix => '%',
        }
    }
}

fn is_vowel(b: u8) -> bool {
    matches!(b, b'a' | b'e' | b'i' | b'o' | b'u' | b'y')
}

fn is_consonant(b: u8) -> bool {
    b.is_ascii_lowercase() && !is_vowel(b)
}

const SUFFIXES: [&[u8]; 6] = [b"ely", b"ing", b"es", b"ed", b"er", b"e"];

/// One rewrite rule: `left|pattern|right -> output`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    left: Vec<Ctx>,
    pattern: Vec<u8>,
    right: Vec<Ctx>,
    output: String,
}

impl Rule {
    pub fn pattern(&self) -> &str {
        std::str::from_utf8(&self.pattern).expect("patterns are ASCII")
    }

    pub fn output(&self) -> &str {
        &self.output
    }

    fn is_fallback(&self) -> bool {
        self.left.is_empty() && self.right.is_empty() && self.pattern.len() == 1
    }

    fn matches(&self, word: &[u8], pos: usize) -> bool {
        word[pos..].starts_with(&self.pattern)
            && match_left(&self.left, word, pos)
            && match_right(&self.right, word, pos + self.pattern.len())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(line: &str) -> std::result::Result<Self, String> {
        let (lhs, output) = line
            .split_once("->")
            .ok_or_else(|| "missing `->`".to_string())?;
        let parts: Vec<&str> = lhs.trim().split('|').collect();
        let [left, pattern, right] = parts[..] else {
            return Err("expected `left|pattern|right`".into());
        };
        let pattern = pattern.trim();
        if pattern.is_empty() || !pattern.bytes().all(|b| b.is_ascii_lowercase()) {
            return Err(format!("pattern {pattern:?} must be lowercase letters"));
        }
        let contexts = |side: &str| -> std::result::Result<Vec<Ctx>, String> {
            side.trim()
                .chars()
                .map(|c| Ctx::parse(c).ok_or_else(|| format!("unknown context symbol {c:?}")))
                .collect()
        };
        let output = output.trim();
        if output.contains(char::is_whitespace) || output.contains('_') {
            return Err(format!("output {output:?} may not contain whitespace or `_`"));
        }
        Ok(Rule {
            left: contexts(left)?,
            pattern: pattern.as_bytes().to_vec(),
            right: contexts(right)?,
            output: output.to_string(),
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let left: String = self.left.iter().map(|c| c.symbol()).collect();
        let right: String = self.right.iter().map(|c| c.symbol()).collect();
        write!(f, "{left}|{}|{right} -> {}", self.pattern(), self.output)
    }
}

// Left contexts are matched right to left, starting just before `pos`.
fn match_left(ctx: &[Ctx], word: &[u8], pos: usize) -> bool {
    let mut p = pos;
    for c in ctx.iter().rev() {
        let prev = p.checked_sub(1).map(|i| word[i]);
        match *c {
            Ctx::Boundary => {
                if p != 0 {
                    return false;
                }
            }
            Ctx::Letter(l) => match prev {
                Some(b) if b == l => p -= 1,
                _ => return false,
            },
            Ctx::Vowels => {
                let start = p;
                while p > 0 && is_vowel(word[p - 1]) {
                    p -= 1;
                }
                if p == start {
                    return false;
                }
            }
            Ctx::Consonants => {
                while p > 0 && is_consonant(word[p - 1]) {
                    p -= 1;
                }
            }
            Ctx::Consonant => match prev {
                Some(b) if is_consonant(b) => p -= 1,
                _ => return false,
            },
            Ctx::Voiced => match prev {
                Some(b) if b"bdvgjlmnrwz".contains(&b) => p -= 1,
                _ => return false,
            },
            Ctx::Front => match prev {
                Some(b) if b"eiy".contains(&b) => p -= 1,
                _ => return false,
            },
            Ctx::Sibilant | Ctx::LongU => {
                let singles: &[u8] = if *c == Ctx::Sibilant { b"scgzxj" } else { b"tsrdlznj" };
                let digraph_h: &[u8] = if *c == Ctx::Sibilant { b"cs" } else { b"tcs" };
                if p >= 2 && word[p - 1] == b'h' && digraph_h.contains(&word[p - 2]) {
                    p -= 2;
                } else {
                    match prev {
                        Some(b) if singles.contains(&b) => p -= 1,
                        _ => return false,
                    }
                }
            }
            Ctx::Suffix => match SUFFIXES.iter().find(|s| word[..p].ends_with(s)) {
                Some(s) => p -= s.len(),
                None => return false,
            },
        }
    }
    true
}

fn match_right(ctx: &[Ctx], word: &[u8], pos: usize) -> bool {
    let mut p = pos;
    let n = word.len();
    for c in ctx {
        let next = word.get(p).copied();
        match *c {
            Ctx::Boundary => {
                if p != n {
                    return false;
                }
            }
            Ctx::Letter(l) => match next {
                Some(b) if b == l => p += 1,
                _ => return false,
            },
            Ctx::Vowels => {
                let start = p;
                while p < n && is_vowel(word[p]) {
                    p += 1;
                }
                if p == start {
                    return false;
                }
            }
            Ctx::Consonants => {
                while p < n && is_consonant(word[p]) {
                    p += 1;
                }
            }
            Ctx::Consonant => match next {
                Some(b) if is_consonant(b) => p += 1,
                _ => return false,
            },
            Ctx::Voiced => match next {
                Some(b) if b"bdvgjlmnrwz".contains(&b) => p += 1,
                _ => return false,
            },
            Ctx::Front => match next {
                Some(b) if b"eiy".contains(&b) => p += 1,
                _ => return false,
            },
            Ctx::Sibilant | Ctx::LongU => {
                let singles: &[u8] = if *c == Ctx::Sibilant { b"scgzxj" } else { b"tsrdlznj" };
                let digraph_h: &[u8] = if *c == Ctx::Sibilant { b"cs" } else { b"tcs" };
                if p + 1 < n && word[p + 1] == b'h' && digraph_h.contains(&word[p]) {
                    p += 2;
                } else {
                    match next {
                        Some(b) if singles.contains(&b) => p += 1,
                        _ => return false,
                    }
                }
            }
            Ctx::Suffix => match SUFFIXES.iter().find(|s| word[p..].starts_with(s)) {
                Some(s) => p += s.len(),
                None => return false,
            },
        }
    }
    true
}

/// Rules grouped by the first letter of their pattern, in file order.
#[derive(Debug, Clone)]
pub struct RuleSet {
    by_letter: Vec<Vec<Rule>>,
}

impl RuleSet {
    /// Parses a rule file. Every letter `a`..`z` needs an unconditioned
    /// single-letter rule so that transduction is total.
    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let mut by_letter = vec![Vec::new(); 26];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            // `#` doubles as a context class, so a comment is `#` followed by
            // whitespace or nothing.
            let is_comment = line == "#" || line.starts_with("# ");
            if line.is_empty() || is_comment {
                continue;
            }
            let rule: Rule = line.parse().map_err(|m| Error::parse(source_name, i + 1, m))?;
            by_letter[(rule.pattern[0] - b'a') as usize].push(rule);
        }
        for (i, rules) in by_letter.iter().enumerate() {
            if !rules.iter().any(Rule::is_fallback) {
                return Err(Error::parse(
                    source_name,
                    0,
                    format!("no unconditioned rule for letter {:?}", (b'a' + i as u8) as char),
                ));
            }
        }
        Ok(RuleSet { by_letter })
    }

    pub fn len(&self) -> usize {
        self.by_letter.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.by_letter.iter().flatten()
    }

    /// Transduces a run of lowercase ASCII letters.
    pub fn apply(&self, word: &str) -> Result<String> {
        let bytes = word.as_bytes();
        if let Some(bad) = bytes.iter().find(|b| !b.is_ascii_lowercase()) {
            return Err(Error::encoding(
                word,
                format!("rules accept only a-z, found {:?}", *bad as char),
            ));
        }
        let mut out = String::new();
        let mut pos = 0;
        while pos < bytes.len() {
            let rules = &self.by_letter[(bytes[pos] - b'a') as usize];
            let rule = rules
                .iter()
                .find(|r| r.matches(bytes, pos))
                .expect("fallback rule exists for every letter");
            out.push_str(&rule.output);
            pos += rule.pattern.len();
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> String {
        ('a'..='z').map(|c| format!("|{c}| -> {c}\n")).collect()
    }

    #[test]
    fn parse_and_display_round_trip() {
        let rule: Rule = "#:|e|_ -> ".parse().unwrap();
        assert_eq!(rule.to_string(), "#:|e|_ -> ");
        let rule: Rule = "_|ch|^ -> k".parse().unwrap();
        assert_eq!(rule.pattern(), "ch");
        assert_eq!(rule.output(), "k");
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!("|a| @".parse::<Rule>().is_err());
        assert!("a|b -> x".parse::<Rule>().is_err());
        assert!("|A| -> x".parse::<Rule>().is_err());
        assert!("!|a| -> x".parse::<Rule>().is_err());
    }

    #[test]
    fn missing_fallback_is_an_error() {
        let text = minimal().replace("|q| -> q\n", "");
        let err = RuleSet::parse(&text, "rules").unwrap_err();
        assert!(err.to_string().contains("'q'"), "{err}");
    }

    #[test]
    fn first_matching_rule_wins() {
        let text = format!("|ph| -> f\n_|p| -> P\n{}", minimal());
        let rules = RuleSet::parse(&text, "rules").unwrap();
        assert_eq!(rules.apply("phap").unwrap(), "fap");
        assert_eq!(rules.apply("pap").unwrap(), "Pap");
    }

    #[test]
    fn context_classes() {
        let text = format!(
            "#:|e|_ -> \n|c|+ -> s\n|c| -> k\n|a|^% -> e\n@|u| -> u\n|u| -> ju\n{}",
            minimal()
        );
        let rules = RuleSet::parse(&text, "rules").unwrap();
        // silent final e after a vowel and consonants
        assert_eq!(rules.apply("cake").unwrap(), "kek");
        assert_eq!(rules.apply("ice").unwrap(), "is");
        // long u after t, yu elsewhere
        assert_eq!(rules.apply("tune").unwrap(), "tun");
        assert_eq!(rules.apply("cube").unwrap(), "kjub");
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = format!("# header\n\n{}", minimal());
        let rules = RuleSet::parse(&text, "rules").unwrap();
        assert_eq!(rules.len(), 26);
    }
}
