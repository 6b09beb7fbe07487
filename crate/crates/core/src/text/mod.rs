//! Text feature engineering: side features 1–5 and content features 6–9.
//!
//! Processing is staged. URLs are counted and stripped first, side features
//! are computed on what remains, then tokens are lemmatized and numbers,
//! punctuation and stop-words are dropped before the content features.

mod affect;
mod embed;
mod lemma;
mod ngram;
mod pos;
mod readability;
pub mod resources;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

pub use affect::{AffectLexicon, Emotion, EmotionLoads};
pub use embed::{embed_average, HashedVectors, VectorTable, WordVectors};
pub use lemma::{Lemmatizer, RuleLemmatizer};
pub use ngram::{calibrate_ngram_cap, extract_ngrams, NGramExtractorState};
pub use pos::{pos_ratios, LexiconTagger, Pos, PosRatios, PosTagger};
pub use readability::{count_syllables, readability, side_counts, Readability, SideCounts};

/// The successive views of one event's text.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CleanTextStages {
    pub raw: String,
    /// URLs found (and removed) before any other processing.
    pub n_urls: usize,
    /// Raw text without URLs, whitespace collapsed. Side features read this.
    pub side_ready: String,
    /// Lower-cased lemmas per sentence, punctuation and numbers still present.
    pub lemmatized: Vec<Vec<String>>,
    /// Content terms per sentence: alphabetic lemmas that are not stop-words.
    pub content_ready: Vec<Vec<String>>,
}

impl CleanTextStages {
    /// Content terms in reading order, sentence boundaries dropped.
    pub fn content_tokens(&self) -> impl Iterator<Item = &str> + '_ {
        self.content_ready.iter().flatten().map(String::as_str)
    }
}

const URL_MARKERS: [&str; 3] = ["http://", "https://", "www."];

/// Removes URL spans (marker up to the next whitespace) and returns the
/// remaining text with the number of URLs removed.
pub fn strip_urls(text: &str) -> (String, usize) {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    let mut count = 0;
    loop {
        let lower = rest.to_ascii_lowercase();
        let start = URL_MARKERS.iter().filter_map(|m| lower.find(m)).min();
        match start {
            Some(start) => {
                out.push_str(&rest[..start]);
                out.push(' ');
                let tail = &rest[start..];
                let end = tail.find(char::is_whitespace).unwrap_or(tail.len());
                rest = &tail[end..];
                count += 1;
            }
            None => {
                out.push_str(rest);
                break;
            }
        }
    }
    let collapsed = out.split_whitespace().collect::<Vec<_>>().join(" ");
    (collapsed, count)
}

fn is_terminator(c: char) -> bool {
    matches!(c, '.' | '!' | '?')
}

/// Splits on runs of `.`, `!` and `?`, keeping each run with the sentence it
/// closes. Empty segments are dropped.
pub fn split_sentences(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        if is_terminator(c) {
            let next_is_terminator = chars.peek().is_some_and(|&(_, n)| is_terminator(n));
            if !next_is_terminator {
                let end = i + c.len_utf8();
                let s = text[start..end].trim();
                if !s.is_empty() {
                    out.push(s);
                }
                start = end;
            }
        }
    }
    let s = text[start..].trim();
    if !s.is_empty() {
        out.push(s);
    }
    out
}

/// Word tokenizer: alphanumeric runs and punctuation runs become separate
/// tokens; whitespace separates tokens.
pub fn tokenize(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for chunk in text.split_whitespace() {
        let mut start = 0;
        let mut prev_word: Option<bool> = None;
        for (i, c) in chunk.char_indices() {
            let word = c.is_alphanumeric();
            if prev_word.is_some_and(|p| p != word) {
                out.push(&chunk[start..i]);
                start = i;
            }
            prev_word = Some(word);
        }
        if start < chunk.len() {
            out.push(&chunk[start..]);
        }
    }
    out
}

pub(crate) fn is_content_term(token: &str) -> bool {
    !token.is_empty() && token.chars().all(char::is_alphabetic)
}

pub fn preprocess(
    raw: &str,
    lemmatizer: &dyn Lemmatizer,
    stopwords: &BTreeSet<String>,
) -> CleanTextStages {
    let (side_ready, n_urls) = strip_urls(raw);
    let lemmatized: Vec<Vec<String>> = split_sentences(&side_ready)
        .into_iter()
        .map(|sentence| {
            tokenize(sentence)
                .into_iter()
                .map(|t| {
                    let lower = t.to_lowercase();
                    if is_content_term(&lower) {
                        lemmatizer.lemmatize(&lower)
                    } else {
                        lower
                    }
                })
                .collect()
        })
        .collect();
    let content_ready = lemmatized
        .iter()
        .map(|sentence| {
            sentence
                .iter()
                .filter(|t| is_content_term(t) && !stopwords.contains(t.as_str()))
                .cloned()
                .collect::<Vec<_>>()
        })
        .filter(|s| !s.is_empty())
        .collect();
    CleanTextStages {
        raw: raw.into(),
        n_urls,
        side_ready,
        lemmatized,
        content_ready,
    }
}

/// Side features 1–5 of one event.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SideFeatures {
    pub counts: SideCounts,
    pub pos: PosRatios,
    pub readability: Readability,
}

/// Content features 6–9 of one event.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContentFeatures {
    pub emotion: EmotionLoads,
    pub polarity: f64,
    pub embedding: Vec<f64>,
    pub ngram_counts: alloc::collections::BTreeMap<String, u64>,
}

/// Pluggable analyzers and word lists used by the text features.
pub struct TextAnalyzers {
    pub tagger: Box<dyn PosTagger + Send + Sync>,
    pub lemmatizer: Box<dyn Lemmatizer + Send + Sync>,
    pub vectors: Box<dyn WordVectors + Send + Sync>,
    pub affect: AffectLexicon,
    pub stopwords: BTreeSet<String>,
    pub easy_words: BTreeSet<String>,
}

impl core::fmt::Debug for TextAnalyzers {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("TextAnalyzers")
            .field("stopwords", &self.stopwords.len())
            .field("easy_words", &self.easy_words.len())
            .finish_non_exhaustive()
    }
}

impl TextAnalyzers {
    /// Bundled English lexicons with hashed 300-d word vectors.
    pub fn default_english() -> Self {
        TextAnalyzers {
            tagger: Box::new(resources::default_tagger()),
            lemmatizer: Box::new(RuleLemmatizer),
            vectors: Box::new(HashedVectors::new(crate::features::EMBEDDING_DIM, 0x5eed)),
            affect: resources::default_affect(),
            stopwords: resources::default_stopwords(),
            easy_words: resources::default_easy_words(),
        }
    }

    pub fn preprocess(&self, raw: &str) -> CleanTextStages {
        preprocess(raw, self.lemmatizer.as_ref(), &self.stopwords)
    }

    pub fn side_features(&self, stages: &CleanTextStages) -> SideFeatures {
        SideFeatures {
            counts: side_counts(stages, &self.easy_words),
            pos: pos_ratios(stages, self.tagger.as_ref()),
            readability: readability(stages),
        }
    }

    /// Content features except the n-grams, which need the stream state.
    pub fn content_features(&self, stages: &CleanTextStages) -> ContentFeatures {
        let (emotion, polarity) = self.affect.affect(stages);
        ContentFeatures {
            emotion,
            polarity,
            embedding: embed_average(stages, self.vectors.as_ref()),
            ngram_counts: Default::default(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn stages(text: &str) -> CleanTextStages {
        TextAnalyzers::default_english().preprocess(text)
    }

    #[test]
    fn url_is_counted_then_removed() {
        let s = stages("Visit https://x.io now!!");
        assert_eq!(s.n_urls, 1);
        assert_eq!(s.side_ready, "Visit now!!");
        let (text, n) = strip_urls("see www.a.com and HTTP://b.org/x?y=1.");
        assert_eq!((text.as_str(), n), ("see and", 2));
    }

    #[test]
    fn empty_text_yields_empty_stages() {
        let s = stages("");
        assert_eq!(s.n_urls, 0);
        assert!(s.side_ready.is_empty());
        assert!(s.lemmatized.is_empty());
        assert!(s.content_ready.is_empty());
    }

    #[test]
    fn content_drops_stopwords_numbers_and_punctuation() {
        let s = stages("The cats 12 ran.");
        assert_eq!(
            s.content_ready,
            vec![vec![String::from("cat"), String::from("run")]]
        );
        assert_eq!(s.lemmatized[0], ["the", "cat", "12", "run", "."]);
    }

    #[test]
    fn sentence_and_token_splitting() {
        assert_eq!(split_sentences("A b. C d!! E"), ["A b.", "C d!!", "E"]);
        assert_eq!(split_sentences("...").len(), 1);
        assert_eq!(
            tokenize("now!! (x-y)"),
            ["now", "!!", "(", "x", "-", "y", ")"]
        );
    }

    #[test]
    fn preprocess_is_idempotent_on_content() {
        let a = TextAnalyzers::default_english();
        let s =
            a.preprocess("Shocking secrets: the mice were hiding 3 glasses in Paris' libraries!");
        let again = a.preprocess(&s.content_tokens().collect::<Vec<_>>().join(" "));
        assert_eq!(
            s.content_tokens().collect::<Vec<_>>(),
            again.content_tokens().collect::<Vec<_>>()
        );
    }
}
