use alloc::collections::BTreeMap;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::{Classifier, Label, Proba};
use crate::features::FeatureVector;
use crate::math;

/// Lower bound on per-class feature variance.
pub const VAR_FLOOR: f64 = 1e-9;

/// Welford running moments, population variance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn update(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn variance(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.m2 / self.n as f64
        }
    }
}

/// Gaussian log-density with the variance floored at [`VAR_FLOOR`].
pub fn gaussian_log_pdf(x: f64, mean: f64, variance: f64) -> f64 {
    let var = variance.max(VAR_FLOOR);
    let d = x - mean;
    -0.5 * math::ln(2.0 * core::f64::consts::PI * var) - d * d / (2.0 * var)
}

/// Softmax over log scores; `None` entries have probability zero. Uniform
/// when every class is `None`.
pub fn normalize_log_scores(scores: [Option<f64>; 2]) -> Proba {
    let max = scores
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Proba::UNIFORM;
    }
    let w = scores.map(|s| s.map_or(0.0, |s| math::exp(s - max)));
    Proba::from_weights(w)
}

/// Streaming Gaussian naive Bayes.
///
/// A feature contributes to the posterior only when every class seen so far
/// has observed it; absent features are skipped rather than imputed.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GaussianNb {
    class_counts: [u64; 2],
    stats: BTreeMap<String, [Moments; 2]>,
}

impl GaussianNb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn class_counts(&self) -> [u64; 2] {
        self.class_counts
    }

    pub fn moments(&self, feature: &str) -> Option<&[Moments; 2]> {
        self.stats.get(feature)
    }
}

impl Classifier for GaussianNb {
    fn learn_one(&mut self, x: &FeatureVector, y: Label) {
        let c = y.index();
        self.class_counts[c] += 1;
        for (id, v) in x.iter() {
            match self.stats.get_mut(id) {
                Some(m) => m[c].update(v),
                None => {
                    let mut m = [Moments::default(); 2];
                    m[c].update(v);
                    self.stats.insert(id.into(), m);
                }
            }
        }
    }

    fn predict_proba_one(&self, x: &FeatureVector) -> Proba {
        let total = self.class_counts[0] + self.class_counts[1];
        if total == 0 {
            return Proba::UNIFORM;
        }
        let seen = self.class_counts.map(|n| n > 0);
        let mut scores: [Option<f64>; 2] =
            [0, 1].map(|c| seen[c].then(|| math::ln(self.class_counts[c] as f64 / total as f64)));
        for (id, v) in x.iter() {
            let Some(m) = self.stats.get(id) else {
                continue;
            };
            if (0..2).any(|c| seen[c] && m[c].n == 0) {
                continue;
            }
            for c in 0..2 {
                if let Some(s) = scores[c].as_mut() {
                    *s += gaussian_log_pdf(v, m[c].mean, m[c].variance());
                }
            }
        }
        normalize_log_scores(scores)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(x: f64) -> FeatureVector {
        [("x", x)].into_iter().collect()
    }

    #[test]
    fn symmetric_training_gives_even_posterior() {
        let mut m = GaussianNb::new();
        for _ in 0..50 {
            m.learn_one(&fv(-1.0), Label::NonDisinformation);
            m.learn_one(&fv(1.0), Label::Disinformation);
        }
        let p = m.predict_proba_one(&fv(0.0));
        assert!((p.0[0] - 0.5).abs() < 1e-6 && (p.0[1] - 0.5).abs() < 1e-6);
        assert_eq!(m.predict_one(&fv(1.0)), Label::Disinformation);
        assert_eq!(m.predict_one(&fv(-1.0)), Label::NonDisinformation);
    }

    #[test]
    fn untrained_is_uniform_and_single_class_is_certain() {
        let mut m = GaussianNb::new();
        assert_eq!(m.predict_proba_one(&fv(3.0)), Proba::UNIFORM);
        m.learn_one(&fv(1.0), Label::Disinformation);
        assert_eq!(m.predict_proba_one(&fv(-5.0)).0, [0.0, 1.0]);
    }

    #[test]
    fn unseen_features_are_ignored() {
        let mut m = GaussianNb::new();
        m.learn_one(&fv(0.0), Label::NonDisinformation);
        m.learn_one(&fv(2.0), Label::Disinformation);
        let only_new: FeatureVector = [("y", 100.0)].into_iter().collect();
        assert_eq!(m.predict_proba_one(&only_new), Proba::UNIFORM);
    }

    #[test]
    fn moments_match_two_pass() {
        let xs = [1.5, -2.0, 3.25, 0.0, 7.0];
        let mut m = Moments::default();
        xs.iter().for_each(|&x| m.update(x));
        let mean = xs.iter().sum::<f64>() / 5.0;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / 5.0;
        assert!((m.mean - mean).abs() < 1e-12);
        assert!((m.variance() - var).abs() < 1e-12);
    }
}
