//! Counts (feature 1), reading time and readability scores (features 3–5).
//!
//! Flesch reading ease = 206.835 − 1.015·(words/sentences) − 84.6·(syllables/words).
//! McAlpine EFLAW = (words + mini-words)/sentences, a mini-word having at
//! most three letters. Reading time is 14.69 ms per character. Empty text
//! scores 0 everywhere since both formulas divide by zero.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::{split_sentences, CleanTextStages};

pub const MS_PER_CHAR: f64 = 14.69;
/// Words with at least this many syllables are difficult unless listed easy.
pub const DIFFICULT_SYLLABLES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SideCounts {
    pub n_chars: usize,
    pub n_words: usize,
    pub n_difficult_words: usize,
    pub n_urls: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Readability {
    /// Seconds.
    pub reading_time: f64,
    pub flesch: f64,
    pub mcalpine_eflaw: f64,
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Vowel-group syllable estimate. A trailing silent `e` is dropped when the
/// word has other vowel groups (but not for `-le`). Any word with a letter
/// has at least one syllable.
pub fn count_syllables(word: &str) -> usize {
    let lower: Vec<char> = word.chars().flat_map(char::to_lowercase).collect();
    if !lower.iter().any(|c| c.is_alphabetic()) {
        return 0;
    }
    let mut groups = 0;
    let mut in_group = false;
    for &c in &lower {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    let n = lower.len();
    if groups > 1 && n >= 2 && lower[n - 1] == 'e' && !is_vowel(lower[n - 2]) {
        let le = n >= 3 && lower[n - 2] == 'l' && !is_vowel(lower[n - 3]);
        if !le {
            groups -= 1;
        }
    }
    groups.max(1)
}

/// Whitespace tokens with surrounding punctuation trimmed.
fn lexicon_words(text: &str) -> impl Iterator<Item = &str> {
    text.split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()))
        .filter(|t| !t.is_empty())
}

fn sentence_count(text: &str) -> usize {
    split_sentences(text)
        .into_iter()
        .filter(|s| s.chars().any(char::is_alphanumeric))
        .count()
}

/// Counts over the URL-free side text. Difficult words are counted once
/// each (distinct lower-cased forms).
pub fn side_counts(stages: &CleanTextStages, easy_words: &BTreeSet<String>) -> SideCounts {
    let text = &stages.side_ready;
    let difficult: BTreeSet<String> = lexicon_words(text)
        .map(|w| w.to_lowercase())
        .filter(|w| w.chars().any(char::is_alphabetic))
        .filter(|w| count_syllables(w) >= DIFFICULT_SYLLABLES && !easy_words.contains(w))
        .collect();
    SideCounts {
        n_chars: text.chars().count(),
        n_words: text.split_whitespace().count(),
        n_difficult_words: difficult.len(),
        n_urls: stages.n_urls,
    }
}

pub fn readability(stages: &CleanTextStages) -> Readability {
    let text = &stages.side_ready;
    let words: Vec<&str> = lexicon_words(text).collect();
    let sentences = sentence_count(text);
    let reading_time = text.chars().count() as f64 * MS_PER_CHAR / 1000.0;
    if words.is_empty() || sentences == 0 {
        return Readability {
            reading_time,
            ..Default::default()
        };
    }
    let n_words = words.len() as f64;
    let n_sentences = sentences as f64;
    let syllables: usize = words.iter().map(|w| count_syllables(w)).sum();
    let mini_words = words
        .iter()
        .filter(|w| w.chars().filter(|c| c.is_alphabetic()).count() <= 3)
        .count();
    Readability {
        reading_time,
        flesch: 206.835 - 1.015 * (n_words / n_sentences) - 84.6 * (syllables as f64 / n_words),
        mcalpine_eflaw: (n_words + mini_words as f64) / n_sentences,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::TextAnalyzers;

    fn stages(text: &str) -> CleanTextStages {
        TextAnalyzers::default_english().preprocess(text)
    }

    #[test]
    fn counts() {
        let easy = BTreeSet::new();
        let c = side_counts(&stages("cat sat"), &easy);
        assert_eq!((c.n_chars, c.n_words), (7, 2));
        assert_eq!(side_counts(&stages(""), &easy), SideCounts::default());
        assert_eq!(
            side_counts(&stages("encyclopedia"), &easy).n_difficult_words,
            1
        );
        let mut easy = BTreeSet::new();
        easy.insert(String::from("encyclopedia"));
        assert_eq!(
            side_counts(&stages("encyclopedia"), &easy).n_difficult_words,
            0
        );
    }

    #[test]
    fn syllables() {
        // hand counts under the vowel-group rule
        assert_eq!(count_syllables("encyclopedia"), 5);
        assert_eq!(count_syllables("cat"), 1);
        assert_eq!(count_syllables("make"), 1);
        assert_eq!(count_syllables("table"), 2);
        assert_eq!(count_syllables("the"), 1);
        assert_eq!(count_syllables("12"), 0);
    }

    #[test]
    fn flesch_and_eflaw_by_hand() {
        let r = readability(&stages("The cat sat on the mat."));
        assert!((r.flesch - 116.145).abs() < 1e-9, "{}", r.flesch);
        assert!((r.mcalpine_eflaw - 12.0).abs() < 1e-12);
        assert!((r.reading_time - 23.0 * 0.01469).abs() < 1e-12);
    }

    #[test]
    fn empty_text_scores_zero() {
        assert_eq!(readability(&stages("")), Readability::default());
    }
}
