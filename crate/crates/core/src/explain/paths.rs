use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::models::{ForestDump, Label, PathStep, Proba};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionPath {
    pub tree_id: usize,
    pub steps: Vec<PathStep>,
    pub prediction: Label,
    pub distribution: Proba,
}

/// Replays every tree's routing of `x`.
pub fn extract_paths(forest: &ForestDump, x: &FeatureVector) -> Vec<DecisionPath> {
    forest
        .trees
        .iter()
        .enumerate()
        .map(|(tree_id, t)| {
            let (steps, leaf) = t.route(x);
            let counts = t.leaf_counts(leaf);
            let distribution = Proba::from_weights(counts);
            DecisionPath {
                tree_id,
                steps,
                prediction: distribution.argmax(),
                distribution,
            }
        })
        .collect()
}

/// Majority class by vote (class 0 on a tie) and the paths that agree with
/// it.
pub fn filter_minority_trees(paths: Vec<DecisionPath>) -> Result<(Label, Vec<DecisionPath>)> {
    if paths.is_empty() {
        return Err(Error::Empty("decision paths"));
    }
    let ones = paths
        .iter()
        .filter(|p| p.prediction == Label::Disinformation)
        .count();
    let majority = Label::from_index(usize::from(ones > paths.len() - ones));
    let kept = paths
        .into_iter()
        .filter(|p| p.prediction == majority)
        .collect();
    Ok((majority, kept))
}
