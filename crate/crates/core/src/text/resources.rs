//! Bundled default word lists and lexicons.

use alloc::collections::BTreeSet;
use alloc::string::String;

use super::{AffectLexicon, LexiconTagger};

pub const STOPWORDS: &str = include_str!("../../data/stopwords.txt");
pub const EASY_WORDS: &str = include_str!("../../data/easy_words.txt");
pub const POS_LEXICON: &str = include_str!("../../data/pos_lexicon.tsv");
pub const EMOTION_LEXICON: &str = include_str!("../../data/emotion_lexicon.tsv");
pub const POLARITY_LEXICON: &str = include_str!("../../data/polarity_lexicon.tsv");

/// One lower-cased word per line; blank lines and `#` comments skipped.
pub fn parse_word_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

pub fn default_stopwords() -> BTreeSet<String> {
    parse_word_list(STOPWORDS)
}

pub fn default_easy_words() -> BTreeSet<String> {
    parse_word_list(EASY_WORDS)
}

pub fn default_tagger() -> LexiconTagger {
    LexiconTagger::parse(POS_LEXICON).expect("bundled POS lexicon parses")
}

pub fn default_affect() -> AffectLexicon {
    AffectLexicon::parse(EMOTION_LEXICON, POLARITY_LEXICON).expect("bundled affect lexicons parse")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_resources_load() {
        assert_eq!(default_stopwords().len(), 127);
        assert!(default_stopwords().contains("the"));
        assert!(default_easy_words().contains("everything"));
        let _ = default_tagger();
        let _ = default_affect();
    }
}
