//! Per-prediction explanations: decision paths of the agreeing trees, the
//! most relevant selected features with their quartile position, a natural
//! language summary and expert feedback intake.

mod feedback;
mod paths;
mod prompt;
mod quartile;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use feedback::{FeedbackLedger, FeedbackRecord};
pub use paths::{extract_paths, filter_minority_trees, DecisionPath};
pub(crate) use prompt::path_features;
pub use prompt::{
    build_prompt, fallback_text, generate_explanation, Generator, TextGenerator, PROMPT_TEMPLATE,
};
pub use quartile::{
    quartile_color, quartiles, top_features, FeatureReport, HistoryQuantiles, QuantileStore,
    QuartileColor, Quartiles,
};

use crate::models::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub event_id: String,
    pub predicted: Label,
    pub confidence: f64,
    /// Paths of the trees that voted for `predicted`; empty for models
    /// without trees.
    pub paths: Vec<DecisionPath>,
    pub total_trees: usize,
    pub top_features: Vec<FeatureReport>,
    pub text: String,
    pub generator: Generator,
}
