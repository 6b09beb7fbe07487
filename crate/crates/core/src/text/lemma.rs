use alloc::string::String;

/// Maps a lower-cased word to its dictionary form.
///
/// Implementations must be idempotent: `lemmatize(lemmatize(w)) ==
/// lemmatize(w)`, otherwise re-processing clean text changes it.
pub trait Lemmatizer {
    fn lemmatize(&self, word: &str) -> String;
}

/// Irregular forms plus conservative plural stripping.
#[derive(Debug, Clone, Copy, Default)]
pub struct RuleLemmatizer;

const IRREGULAR: &[(&str, &str)] = &[
    ("am", "be"),
    ("are", "be"),
    ("ate", "eat"),
    ("been", "be"),
    ("best", "good"),
    ("better", "good"),
    ("bought", "buy"),
    ("came", "come"),
    ("children", "child"),
    ("did", "do"),
    ("does", "do"),
    ("done", "do"),
    ("feet", "foot"),
    ("found", "find"),
    ("gave", "give"),
    ("geese", "goose"),
    ("gone", "go"),
    ("got", "get"),
    ("had", "have"),
    ("has", "have"),
    ("is", "be"),
    ("knew", "know"),
    ("known", "know"),
    ("made", "make"),
    ("men", "man"),
    ("mice", "mouse"),
    ("people", "person"),
    ("ran", "run"),
    ("said", "say"),
    ("sat", "sit"),
    ("saw", "see"),
    ("seen", "see"),
    ("sold", "sell"),
    ("stood", "stand"),
    ("teeth", "tooth"),
    ("thought", "think"),
    ("told", "tell"),
    ("took", "take"),
    ("was", "be"),
    ("went", "go"),
    ("were", "be"),
    ("women", "woman"),
    ("worse", "bad"),
    ("worst", "bad"),
    ("written", "write"),
    ("wrote", "write"),
];

fn irregular(word: &str) -> Option<&'static str> {
    IRREGULAR
        .binary_search_by(|(k, _)| k.cmp(&word))
        .ok()
        .map(|i| IRREGULAR[i].1)
}

fn strip_plural(word: &str) -> Option<String> {
    let n = word.chars().count();
    if n > 4 && word.ends_with("ies") {
        let mut s = String::from(&word[..word.len() - 3]);
        s.push('y');
        return Some(s);
    }
    if word.ends_with("sses") {
        return Some(String::from(&word[..word.len() - 2]));
    }
    if n > 3
        && word.ends_with('s')
        && !word.ends_with("ss")
        && !word.ends_with("us")
        && !word.ends_with("is")
    {
        return Some(String::from(&word[..word.len() - 1]));
    }
    None
}

impl Lemmatizer for RuleLemmatizer {
    fn lemmatize(&self, word: &str) -> String {
        if let Some(l) = irregular(word) {
            return l.into();
        }
        match strip_plural(word) {
            Some(stem) => irregular(&stem).map(String::from).unwrap_or(stem),
            None => word.into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn table_is_sorted_and_values_are_fixed_points() {
        assert!(IRREGULAR.windows(2).all(|w| w[0].0 < w[1].0));
        for (_, v) in IRREGULAR {
            assert_eq!(RuleLemmatizer.lemmatize(v), *v);
        }
    }

    #[test]
    fn examples() {
        let l = RuleLemmatizer;
        assert_eq!(l.lemmatize("cats"), "cat");
        assert_eq!(l.lemmatize("studies"), "study");
        assert_eq!(l.lemmatize("glasses"), "glass");
        assert_eq!(l.lemmatize("bus"), "bus");
        assert_eq!(l.lemmatize("analysis"), "analysis");
        assert_eq!(l.lemmatize("ran"), "run");
        assert_eq!(l.lemmatize("mens"), "man");
    }

    proptest! {
        #[test]
        fn idempotent(word in "[a-z]{1,12}") {
            let once = RuleLemmatizer.lemmatize(&word);
            prop_assert_eq!(RuleLemmatizer.lemmatize(&once), once);
        }
    }
}
