//! Part-of-speech ratios (feature 2).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use super::{tokenize, CleanTextStages};
use crate::error::{Error, Result};

/// Universal part-of-speech tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Pos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Punct,
    Sconj,
    Verb,
    Other,
}

impl Pos {
    pub fn parse(tag: &str) -> Option<Pos> {
        Some(match tag.trim().to_ascii_uppercase().as_str() {
            "ADJ" => Pos::Adj,
            "ADP" => Pos::Adp,
            "ADV" => Pos::Adv,
            "AUX" => Pos::Aux,
            "CCONJ" => Pos::Cconj,
            "DET" => Pos::Det,
            "INTJ" => Pos::Intj,
            "NOUN" => Pos::Noun,
            "NUM" => Pos::Num,
            "PART" => Pos::Part,
            "PRON" => Pos::Pron,
            "PUNCT" => Pos::Punct,
            "SCONJ" => Pos::Sconj,
            "VERB" => Pos::Verb,
            "X" => Pos::Other,
            _ => return None,
        })
    }
}

pub trait PosTagger {
    fn tag(&self, token: &str) -> Pos;
}

/// Lexicon lookup with suffix heuristics for unknown words.
#[derive(Debug, Clone, Default)]
pub struct LexiconTagger {
    lexicon: BTreeMap<String, Pos>,
}

impl LexiconTagger {
    pub fn new(lexicon: BTreeMap<String, Pos>) -> Self {
        LexiconTagger { lexicon }
    }

    /// Parses `term<TAB>TAG` lines; later lines override earlier ones.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lexicon = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (term, tag) = line.split_once('\t').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: "expected term<TAB>tag".into(),
            })?;
            let pos = Pos::parse(tag).ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("unknown tag {tag:?}"),
            })?;
            lexicon.insert(term.to_lowercase(), pos);
        }
        Ok(LexiconTagger { lexicon })
    }

    fn guess(word: &str) -> Pos {
        const ADJ: [&str; 7] = ["ous", "ful", "ive", "able", "ible", "ical", "less"];
        const VERB: [&str; 4] = ["ing", "ed", "ize", "ise"];
        if word.ends_with("ly") {
            Pos::Adv
        } else if ADJ.iter().any(|s| word.ends_with(s)) {
            Pos::Adj
        } else if VERB.iter().any(|s| word.ends_with(s)) {
            Pos::Verb
        } else {
            Pos::Noun
        }
    }
}

impl PosTagger for LexiconTagger {
    fn tag(&self, token: &str) -> Pos {
        if !token.chars().any(char::is_alphanumeric) {
            return Pos::Punct;
        }
        if !token.chars().any(char::is_alphabetic) {
            return Pos::Num;
        }
        let lower = token.to_lowercase();
        self.lexicon
            .get(&lower)
            .copied()
            .unwrap_or_else(|| Self::guess(&lower))
    }
}

/// Share of tokens per reported category. Unreported tags (determiners,
/// adpositions, ...) still count in the denominator.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PosRatios {
    pub adj: f64,
    pub adv: f64,
    pub intj: f64,
    pub noun: f64,
    pub pron: f64,
    pub punct: f64,
    pub verb: f64,
}

impl PosRatios {
    pub const NAMES: [&'static str; 7] = ["adj", "adv", "intj", "noun", "pron", "punct", "verb"];

    pub fn values(&self) -> [f64; 7] {
        [
            self.adj, self.adv, self.intj, self.noun, self.pron, self.punct, self.verb,
        ]
    }
}

pub fn pos_ratios(stages: &CleanTextStages, tagger: &dyn PosTagger) -> PosRatios {
    let tokens = tokenize(&stages.side_ready);
    if tokens.is_empty() {
        return PosRatios::default();
    }
    let mut counts = [0usize; 7];
    for t in &tokens {
        let slot = match tagger.tag(t) {
            Pos::Adj => 0,
            Pos::Adv => 1,
            Pos::Intj => 2,
            Pos::Noun => 3,
            Pos::Pron => 4,
            Pos::Punct => 5,
            Pos::Verb => 6,
            _ => continue,
        };
        counts[slot] += 1;
    }
    let n = tokens.len() as f64;
    let r = |i: usize| counts[i] as f64 / n;
    PosRatios {
        adj: r(0),
        adv: r(1),
        intj: r(2),
        noun: r(3),
        pron: r(4),
        punct: r(5),
        verb: r(6),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{resources, TextAnalyzers};

    #[test]
    fn single_category_text() {
        let tagger = LexiconTagger::parse("red\tADJ\n").unwrap();
        let stages = TextAnalyzers::default_english().preprocess("red red red");
        assert_eq!(pos_ratios(&stages, &tagger).adj, 1.0);
    }

    #[test]
    fn empty_text_all_zero() {
        let stages = TextAnalyzers::default_english().preprocess("");
        assert_eq!(
            pos_ratios(&stages, &resources::default_tagger()),
            PosRatios::default()
        );
    }

    #[test]
    fn reported_ratios_sum_at_most_one() {
        let stages = TextAnalyzers::default_english().preprocess("the quick fox runs");
        let r = pos_ratios(&stages, &resources::default_tagger());
        // the/DET is unreported: quick/ADJ fox/NOUN runs/VERB by the default lexicon
        assert_eq!(r.adj, 0.25);
        assert!(r.values().iter().sum::<f64>() <= 1.0);
        assert_eq!(r.values().iter().sum::<f64>(), 0.75);
    }

    #[test]
    fn malformed_lexicon_line() {
        assert!(matches!(
            LexiconTagger::parse("red ADJ"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(LexiconTagger::parse("red\tCOLOR").is_err());
    }
}
