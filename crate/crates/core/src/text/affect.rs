//! Emotion loads (feature 6) and polarity (feature 7).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::CleanTextStages;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Emotion {
    Anger,
    Fear,
    Happiness,
    Sadness,
    Surprise,
}

impl Emotion {
    pub const ALL: [Emotion; 5] = [
        Emotion::Anger,
        Emotion::Fear,
        Emotion::Happiness,
        Emotion::Sadness,
        Emotion::Surprise,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Emotion::Anger => "anger",
            Emotion::Fear => "fear",
            Emotion::Happiness => "happiness",
            Emotion::Sadness => "sadness",
            Emotion::Surprise => "surprise",
        }
    }

    pub fn parse(s: &str) -> Option<Emotion> {
        Emotion::ALL
            .into_iter()
            .find(|e| e.as_str().eq_ignore_ascii_case(s.trim()))
    }
}

/// Per-emotion loads, normalized jointly so that they sum to 1 whenever any
/// affect term matched.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EmotionLoads(pub [f64; 5]);

impl EmotionLoads {
    pub fn get(&self, e: Emotion) -> f64 {
        self.0[e as usize]
    }
}

#[derive(Debug, Clone, Default)]
pub struct AffectLexicon {
    emotions: BTreeMap<String, Vec<Emotion>>,
    polarity: BTreeMap<String, f64>,
}

fn parse_error(line: usize, message: String) -> Error {
    Error::Parse { line, message }
}

impl AffectLexicon {
    /// `emotions`: `term<TAB>emotion[<TAB>emotion...]` lines;
    /// `polarity`: `term<TAB>score` lines with scores in [-1, 1].
    pub fn parse(emotions: &str, polarity: &str) -> Result<Self> {
        let mut lex = AffectLexicon::default();
        for (i, line) in emotions.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split('\t');
            let term = fields.next().unwrap_or_default().to_lowercase();
            let tags = fields
                .map(|f| {
                    Emotion::parse(f)
                        .ok_or_else(|| parse_error(i + 1, format!("unknown emotion {f:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if tags.is_empty() {
                return Err(parse_error(i + 1, "expected term<TAB>emotion".into()));
            }
            lex.emotions.entry(term).or_default().extend(tags);
        }
        for (i, line) in polarity.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (term, score) = line
                .split_once('\t')
                .ok_or_else(|| parse_error(i + 1, "expected term<TAB>score".into()))?;
            let score: f64 = score
                .trim()
                .parse()
                .map_err(|_| parse_error(i + 1, format!("bad score {score:?}")))?;
            if !(-1.0..=1.0).contains(&score) {
                return Err(parse_error(i + 1, format!("score {score} outside [-1, 1]")));
            }
            lex.polarity.insert(term.to_lowercase(), score);
        }
        Ok(lex)
    }

    pub fn affect(&self, stages: &CleanTextStages) -> (EmotionLoads, f64) {
        let mut counts = [0usize; 5];
        let mut polarity_sum = 0.0;
        let mut polarity_hits = 0usize;
        for term in stages.content_tokens() {
            if let Some(tags) = self.emotions.get(term) {
                for &e in tags {
                    counts[e as usize] += 1;
                }
            }
            if let Some(&p) = self.polarity.get(term) {
                polarity_sum += p;
                polarity_hits += 1;
            }
        }
        let total: usize = counts.iter().sum();
        let mut loads = [0.0; 5];
        if total > 0 {
            for (l, &c) in loads.iter_mut().zip(&counts) {
                *l = c as f64 / total as f64;
            }
        }
        let polarity = if polarity_hits > 0 {
            (polarity_sum / polarity_hits as f64).clamp(-1.0, 1.0)
        } else {
            0.0
        };
        (EmotionLoads(loads), polarity)
    }
}
