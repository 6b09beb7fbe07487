//! Approximate Large Margin Algorithm, p = 2.
//!
//! With `k` starting at 1, a sample triggers an update when
//! `y·⟨w,x⟩ ≤ (1−alpha)·B/√k`. The update is `w ← w + (C/√k)·y·x`, after
//! which `w` is projected back onto the unit ball and `k` is incremented.

use alloc::collections::BTreeMap;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use super::{Classifier, Label, Proba};
use crate::features::FeatureVector;
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlmaParams {
    pub alpha: f64,
    pub b: f64,
    pub c: f64,
}

impl AlmaParams {
    /// alpha = 0.9, B = 1.8, C = 1.8.
    pub const fn best_known() -> Self {
        AlmaParams {
            alpha: 0.9,
            b: 1.8,
            c: 1.8,
        }
    }
}

impl Default for AlmaParams {
    fn default() -> Self {
        Self::best_known()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Alma {
    params: AlmaParams,
    weights: BTreeMap<String, f64>,
    k: u64,
}

impl Alma {
    pub fn new(params: AlmaParams) -> Self {
        Alma {
            params,
            weights: BTreeMap::new(),
            k: 1,
        }
    }

    pub fn params(&self) -> AlmaParams {
        self.params
    }

    pub fn margin(&self, x: &FeatureVector) -> f64 {
        x.dot(&self.weights)
    }

    /// Number of updates performed plus one.
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn weight_norm(&self) -> f64 {
        math::sqrt(self.weights.values().map(|w| w * w).sum())
    }

    /// Sign of the margin; class 0 when the margin is exactly zero.
    pub fn predict(&self, x: &FeatureVector) -> (Label, f64) {
        let m = self.margin(x);
        let label = if m > 0.0 {
            Label::Disinformation
        } else {
            Label::NonDisinformation
        };
        (label, m)
    }
}

impl Classifier for Alma {
    fn learn_one(&mut self, x: &FeatureVector, y: Label) {
        let y = y.sign();
        let sqrt_k = math::sqrt(self.k as f64);
        let gamma = self.params.b / sqrt_k;
        if y * self.margin(x) <= (1.0 - self.params.alpha) * gamma {
            let eta = self.params.c / sqrt_k;
            for (id, v) in x.iter() {
                *self.weights.entry(id.into()).or_insert(0.0) += eta * y * v;
            }
            let norm = self.weight_norm();
            if norm > 1.0 {
                self.weights.values_mut().for_each(|w| *w /= norm);
            }
            self.k += 1;
        }
    }

    /// Logistic of the margin.
    fn predict_proba_one(&self, x: &FeatureVector) -> Proba {
        let p = math::sigmoid(self.margin(x));
        Proba([1.0 - p, p])
    }
}
