//! Adaptive random forest: an online-bagged ensemble of Hoeffding adaptive
//! trees with per-leaf random feature subspaces and majority voting.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::dump::ForestDump;
use super::hat::{HatcParams, HoeffdingAdaptiveTree};
use super::{Classifier, Label, Proba};
use crate::features::FeatureVector;
use crate::math;

/// Size of the random feature subset each leaf considers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureBudget {
    /// `ceil(sqrt(n))` of the `n` available features.
    Sqrt,
    Count(u32),
}

impl FeatureBudget {
    pub fn resolve(self, available: usize) -> usize {
        let k = match self {
            FeatureBudget::Sqrt => math::ceil(math::sqrt(available as f64)) as usize,
            FeatureBudget::Count(k) => k as usize,
        };
        k.clamp(1, available.max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArfcParams {
    pub models: u32,
    pub features: FeatureBudget,
    /// Poisson mean of the per-tree sample weight. `None` disables bagging:
    /// every tree learns every sample with weight 1.
    pub lambda: Option<f64>,
    pub seed: u64,
    pub tree: HatcParams,
}

impl ArfcParams {
    /// models = 75, features = 100, lambda = 100.
    pub fn best_known(seed: u64) -> Self {
        ArfcParams {
            models: 75,
            features: FeatureBudget::Count(100),
            lambda: Some(100.0),
            seed,
            tree: HatcParams::best_known(),
        }
    }
}

impl Default for ArfcParams {
    fn default() -> Self {
        Self::best_known(0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Member {
    tree: HoeffdingAdaptiveTree,
    bagging: ChaCha8Rng,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveRandomForest {
    params: ArfcParams,
    members: Vec<Member>,
}

/// Per-tree seed derived from the forest seed; tree 0 uses the forest seed
/// itself.
fn tree_seed(seed: u64, i: u64) -> u64 {
    let mut z = seed.wrapping_add(i.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    if i == 0 {
        seed
    } else {
        z ^ (z >> 31)
    }
}

impl AdaptiveRandomForest {
    pub fn new(params: ArfcParams) -> Self {
        let members = (0..u64::from(params.models.max(1)))
            .map(|i| {
                let s = tree_seed(params.seed, i);
                Member {
                    tree: HoeffdingAdaptiveTree::with_subspaces(
                        params.tree,
                        params.features,
                        ChaCha8Rng::seed_from_u64(s),
                    ),
                    bagging: ChaCha8Rng::seed_from_u64(s ^ 0xa5a5_a5a5_a5a5_a5a5),
                }
            })
            .collect();
        AdaptiveRandomForest { params, members }
    }

    pub fn params(&self) -> ArfcParams {
        self.params
    }

    pub fn trees(&self) -> impl Iterator<Item = &HoeffdingAdaptiveTree> + '_ {
        self.members.iter().map(|m| &m.tree)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Per-class vote counts of the member trees.
    pub fn votes(&self, x: &FeatureVector) -> [u32; 2] {
        let mut v = [0u32; 2];
        for m in &self.members {
            v[m.tree.predict_one(x).index()] += 1;
        }
        v
    }

    pub fn dump(&self) -> ForestDump {
        ForestDump {
            trees: self.members.iter().map(|m| m.tree.dump()).collect(),
        }
    }
}

impl Classifier for AdaptiveRandomForest {
    fn learn_one(&mut self, x: &FeatureVector, y: Label) {
        let poisson = self.params.lambda.and_then(|l| Poisson::new(l).ok());
        for m in &mut self.members {
            let w = match &poisson {
                Some(p) => p.sample(&mut m.bagging),
                None => 1.0,
            };
            if w > 0.0 {
                m.tree.learn_weighted(x, y, w);
            }
        }
    }

    /// Vote share of each class.
    fn predict_proba_one(&self, x: &FeatureVector) -> Proba {
        let v = self.votes(x);
        Proba::from_weights([f64::from(v[0]), f64::from(v[1])])
    }

    /// Majority vote; class 0 on a tie.
    fn predict_one(&self, x: &FeatureVector) -> Label {
        let v = self.votes(x);
        Label::from_index(usize::from(v[1] > v[0]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn budget_resolution() {
        assert_eq!(FeatureBudget::Sqrt.resolve(400), 20);
        assert_eq!(FeatureBudget::Sqrt.resolve(10), 4);
        assert_eq!(FeatureBudget::Count(100).resolve(40), 40);
        assert_eq!(FeatureBudget::Count(25).resolve(40), 25);
    }

    #[test]
    fn ensemble_size_and_votes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut f = AdaptiveRandomForest::new(ArfcParams {
            models: 10,
            features: FeatureBudget::Sqrt,
            lambda: Some(6.0),
            seed: 3,
            tree: HatcParams::default(),
        });
        assert_eq!(f.len(), 10);
        for _ in 0..1_500 {
            let a: f64 = rng.random();
            let b: f64 = rng.random();
            let c: f64 = rng.random();
            let x: FeatureVector = [("a", a), ("b", b), ("c", c)].into_iter().collect();
            f.learn_one(&x, Label::from_index(usize::from(a + b > 1.0)));
        }
        let x: FeatureVector = [("a", 0.9), ("b", 0.9), ("c", 0.5)].into_iter().collect();
        let v = f.votes(&x);
        assert_eq!(v[0] + v[1], 10);
        assert_eq!(
            f.predict_proba_one(&x).of(Label::Disinformation),
            f64::from(v[1]) / 10.0
        );
        assert_eq!(f.dump().trees.len(), 10);
    }

    #[test]
    fn seeds_are_reproducible() {
        let p = ArfcParams {
            models: 3,
            ..ArfcParams::best_known(11)
        };
        let mut a = AdaptiveRandomForest::new(p);
        let mut b = AdaptiveRandomForest::new(p);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..500 {
            let x: FeatureVector = [("a", rng.random::<f64>())].into_iter().collect();
            a.learn_one(&x, Label::from_index(i % 2));
            b.learn_one(&x, Label::from_index(i % 2));
        }
        assert_eq!(a, b);
    }
}
