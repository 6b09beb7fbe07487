//! Loads lexicons and word vectors from a directory, falling back to the
//! bundled English defaults for any file that is absent.
//!
//! | file | format |
//! |---|---|
//! | `stopwords.txt`, `easy_words.txt` | one word per line |
//! | `pos_lexicon.tsv` | `word<TAB>tag` |
//! | `emotion_lexicon.tsv` | `term<TAB>emotion[<TAB>emotion…]` |
//! | `polarity_lexicon.tsv` | `term<TAB>score` |
//! | `vectors.txt` | `word v1 … v300`, space separated |

use std::path::Path;

use wikistream_core::features::EMBEDDING_DIM;
use wikistream_core::text::resources::{parse_word_list, EMOTION_LEXICON, POLARITY_LEXICON};
use wikistream_core::text::{AffectLexicon, LexiconTagger, TextAnalyzers, VectorTable};

use crate::error::{Error, Result};

fn read_optional(dir: &Path, name: &str) -> Result<Option<String>> {
    let path = dir.join(name);
    match std::fs::read_to_string(&path) {
        Ok(s) => Ok(Some(s)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::io(path, e)),
    }
}

pub fn load_analyzers(dir: &Path) -> Result<TextAnalyzers> {
    let mut a = TextAnalyzers::default_english();
    if let Some(s) = read_optional(dir, "stopwords.txt")? {
        a.stopwords = parse_word_list(&s);
    }
    if let Some(s) = read_optional(dir, "easy_words.txt")? {
        a.easy_words = parse_word_list(&s);
    }
    if let Some(s) = read_optional(dir, "pos_lexicon.tsv")? {
        a.tagger = Box::new(LexiconTagger::parse(&s)?);
    }
    let emotions = read_optional(dir, "emotion_lexicon.tsv")?;
    let polarity = read_optional(dir, "polarity_lexicon.tsv")?;
    if emotions.is_some() || polarity.is_some() {
        a.affect = AffectLexicon::parse(
            emotions.as_deref().unwrap_or(EMOTION_LEXICON),
            polarity.as_deref().unwrap_or(POLARITY_LEXICON),
        )?;
    }
    if let Some(s) = read_optional(dir, "vectors.txt")? {
        a.vectors = Box::new(VectorTable::parse(&s, EMBEDDING_DIM)?);
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_only_present_files() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("stopwords.txt"), "alpha\n# note\nBeta\n").unwrap();
        let a = load_analyzers(dir.path()).unwrap();
        assert_eq!(a.stopwords.len(), 2);
        assert!(a.stopwords.contains("beta"));
        assert_eq!(a.easy_words, TextAnalyzers::default_english().easy_words);
    }

    #[test]
    fn rejects_short_vectors() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("vectors.txt"), "word 0.1 0.2\n").unwrap();
        assert!(load_analyzers(dir.path()).is_err());
    }
}
