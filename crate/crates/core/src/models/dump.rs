//! Read-only snapshots of trained trees, used to replay decision paths.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Label, Proba};
use crate::features::FeatureVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DumpNode {
    /// `x[feature] ≤ threshold` goes to `left`. A missing feature follows
    /// the branch that has seen more weight, `left` on a tie.
    Split {
        feature: String,
        threshold: f64,
        left: usize,
        right: usize,
        branch_weight: [f64; 2],
    },
    Leaf {
        class_counts: [f64; 2],
    },
}

/// Flat node list; the root is node 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDump {
    pub nodes: Vec<DumpNode>,
}

/// One condition taken along a path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathStep {
    pub feature: String,
    pub threshold: f64,
    /// `true` when the left (`≤`) branch was taken.
    pub went_left: bool,
    /// The sample had no value for the feature.
    pub missing: bool,
}

impl TreeDump {
    /// Follows `x` from the root; returns the steps and the leaf index.
    pub fn route(&self, x: &FeatureVector) -> (Vec<PathStep>, usize) {
        let mut steps = Vec::new();
        let mut at = 0;
        while let Some(DumpNode::Split {
            feature,
            threshold,
            left,
            right,
            branch_weight,
        }) = self.nodes.get(at)
        {
            let (went_left, missing) = match x.get(feature) {
                Some(v) => (v <= *threshold, false),
                None => (branch_weight[0] >= branch_weight[1], true),
            };
            steps.push(PathStep {
                feature: feature.clone(),
                threshold: *threshold,
                went_left,
                missing,
            });
            at = if went_left { *left } else { *right };
        }
        (steps, at)
    }

    pub fn leaf_counts(&self, leaf: usize) -> [f64; 2] {
        match self.nodes.get(leaf) {
            Some(DumpNode::Leaf { class_counts }) => *class_counts,
            _ => [0.0, 0.0],
        }
    }

    /// Majority class at the leaf `x` reaches; class 0 on a tie.
    pub fn predict(&self, x: &FeatureVector) -> Label {
        let (_, leaf) = self.route(x);
        Proba::from_weights(self.leaf_counts(leaf)).argmax()
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[DumpNode], at: usize) -> usize {
            match nodes.get(at) {
                Some(DumpNode::Split { left, right, .. }) => {
                    1 + walk(nodes, *left).max(walk(nodes, *right))
                }
                _ => 0,
            }
        }
        walk(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestDump {
    pub trees: Vec<TreeDump>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn stump() -> TreeDump {
        TreeDump {
            nodes: vec![
                DumpNode::Split {
                    feature: "f01.chars".into(),
                    threshold: 10.0,
                    left: 1,
                    right: 2,
                    branch_weight: [3.0, 5.0],
                },
                DumpNode::Leaf {
                    class_counts: [4.0, 1.0],
                },
                DumpNode::Leaf {
                    class_counts: [1.0, 4.0],
                },
            ],
        }
    }

    #[test]
    fn routes_on_threshold_and_missing() {
        let t = stump();
        let x: FeatureVector = [("f01.chars", 10.0)].into_iter().collect();
        let (steps, leaf) = t.route(&x);
        assert_eq!(leaf, 1);
        assert!(steps[0].went_left && !steps[0].missing);
        assert_eq!(t.predict(&x), Label::NonDisinformation);
        let (steps, leaf) = t.route(&FeatureVector::new());
        assert_eq!(leaf, 2);
        assert!(steps[0].missing);
        assert_eq!(t.depth(), 1);
    }

    #[test]
    fn serde_roundtrip() {
        let t = stump();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(serde_json::from_str::<TreeDump>(&s).unwrap(), t);
    }
}
