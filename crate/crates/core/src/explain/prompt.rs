use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Placeholders: `<Text>`, `<Category>`, `<Confidence>`, `[List of relevant features]`.
pub const PROMPT_TEMPLATE: &str = "Our Machine Learning model has predicted that this text <Text> is classified as \
<Category> with a confidence of <Confidence>%. The most relevant path features are: [List of relevant features].\n\
Generate a human-explainable text that summarizes the decision made by the classifier.";

/// Confidence is rendered as a percentage with two decimals; features as
/// `[a, b, c]`.
pub fn build_prompt(text: &str, category: &str, confidence: f64, features: &[String]) -> String {
    PROMPT_TEMPLATE
        .replace("<Text>", text)
        .replace("<Category>", category)
        .replace("<Confidence>", &format!("{:.2}", confidence * 100.0))
        .replace(
            "[List of relevant features]",
            &format!("[{}]", features.join(", ")),
        )
}

/// Deterministic summary used when no language model is available.
pub fn fallback_text(
    category: &str,
    confidence: f64,
    top: &[String],
    path_features: &[String],
) -> String {
    let mut s = format!(
        "The classifier labelled this contribution as {category} with a confidence of {:.2}%.",
        confidence * 100.0
    );
    if !top.is_empty() {
        s.push_str(&format!(
            " The most relevant features by variance are {}.",
            top.join(", ")
        ));
    }
    if !path_features.is_empty() {
        s.push_str(&format!(
            " The agreeing decision paths tested {}.",
            path_features.join(", ")
        ));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    #[serde(rename = "llm")]
    Llm,
    #[serde(rename = "template-fallback")]
    TemplateFallback,
}

/// A text-completion backend.
pub trait TextGenerator {
    fn generate(&self, prompt: &str) -> Result<String, String>;
}

/// Uses `generator` when present and successful; otherwise the fallback.
/// The error of a failed call is returned for logging.
pub fn generate_explanation(
    generator: Option<&dyn TextGenerator>,
    prompt: &str,
    fallback: impl FnOnce() -> String,
) -> (String, Generator, Option<String>) {
    match generator.map(|g| g.generate(prompt)) {
        Some(Ok(text)) => (text, Generator::Llm, None),
        Some(Err(e)) => (fallback(), Generator::TemplateFallback, Some(e)),
        None => (fallback(), Generator::TemplateFallback, None),
    }
}

/// Distinct features tested along `paths`, in first-seen order.
pub(crate) fn path_features<'a>(steps: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for f in steps {
        if !out.iter().any(|o| o == f) {
            out.push(f.into());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    /// Inverse of `build_prompt`.
    fn parse_prompt(p: &str) -> Option<(String, String, String, Vec<String>)> {
        let rest = p.strip_prefix("Our Machine Learning model has predicted that this text ")?;
        let (text, rest) = rest.rsplit_once(" is classified as ")?;
        let (category, rest) = rest.split_once(" with a confidence of ")?;
        let (conf, rest) = rest.split_once("%. The most relevant path features are: [")?;
        let (list, tail) = rest.rsplit_once("].\n")?;
        if tail != "Generate a human-explainable text that summarizes the decision made by the classifier." {
            return None;
        }
        let features = if list.is_empty() {
            vec![]
        } else {
            list.split(", ").map(ToString::to_string).collect()
        };
        Some((text.into(), category.into(), conf.into(), features))
    }

    #[test]
    fn confidence_two_decimals() {
        let p = build_prompt("hello", "disinformation", 2.0 / 3.0, &["f01.chars".into()]);
        assert!(p.contains("with a confidence of 66.67%"));
        assert!(p.contains("[f01.chars]"));
    }

    #[test]
    fn empty_feature_list() {
        let p = build_prompt("t", "non-disinformation", 1.0, &[]);
        assert!(p.contains("are: []."));
        assert_eq!(parse_prompt(&p).unwrap().3, Vec::<String>::new());
    }

    #[test]
    fn fallback_used_without_generator() {
        struct Echo;
        impl TextGenerator for Echo {
            fn generate(&self, _: &str) -> Result<String, String> {
                Ok("ok".into())
            }
        }
        struct Down;
        impl TextGenerator for Down {
            fn generate(&self, _: &str) -> Result<String, String> {
                Err("timeout".into())
            }
        }
        let (t, g, _) = generate_explanation(None, "p", || "fb".into());
        assert_eq!((t.as_str(), g), ("fb", Generator::TemplateFallback));
        let (t, g, _) = generate_explanation(Some(&Echo), "p", || "fb".into());
        assert_eq!((t.as_str(), g), ("ok", Generator::Llm));
        let (_, g, err) = generate_explanation(Some(&Down), "p", || "fb".into());
        assert_eq!(
            (g, err.as_deref()),
            (Generator::TemplateFallback, Some("timeout"))
        );
    }

    #[test]
    fn generator_tags() {
        assert_eq!(
            serde_json::to_string(&Generator::TemplateFallback).unwrap(),
            "\"template-fallback\""
        );
    }

    proptest! {
        #[test]
        fn prompt_round_trip(
            text in "[a-zA-Z .,!?]{0,60}",
            category in prop::sample::select(vec!["disinformation", "non-disinformation"]),
            conf in 0.0f64..=1.0,
            features in proptest::collection::vec("f[0-9]{2}\\.[a-z_]{1,10}", 0..4),
        ) {
            let p = build_prompt(&text, category, conf, &features);
            let (t, c, k, f) = parse_prompt(&p).unwrap();
            prop_assert_eq!(t, text);
            prop_assert_eq!(c, category);
            prop_assert_eq!(k, format!("{:.2}", conf * 100.0));
            prop_assert_eq!(f, features);
        }

        #[test]
        fn fallback_mentions_class_and_features(
            category in prop::sample::select(vec!["disinformation", "non-disinformation"]),
            conf in 0.0f64..=1.0,
            top in proptest::collection::vec("f[0-9]{2}\\.[a-z_]{1,10}", 0..4),
        ) {
            let t = fallback_text(category, conf, &top, &[]);
            prop_assert!(t.contains(category));
            for f in &top {
                prop_assert!(t.contains(f.as_str()));
            }
        }
    }
}
