//! Hoeffding bound and per-class Gaussian sufficient statistics used by the
//! tree learners.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math;

/// `sqrt(R² ln(1/δ) / 2n)`.
pub fn hoeffding_bound(range: f64, confidence: f64, n: f64) -> Result<f64> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(n > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "hoeffding bound needs a positive sample weight, got {n}"
        )));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidArgument(alloc::format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    Ok(math::sqrt(
        range * range * math::ln(1.0 / confidence) / (2.0 * n),
    ))
}

/// Weighted running mean / variance with observed range.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct GaussianEstimator {
    weight: f64,
    mean: f64,
    variance_sum: f64,
    min: Option<f64>,
    max: Option<f64>,
}

impl GaussianEstimator {
    pub fn add(&mut self, value: f64, weight: f64) {
        if weight <= 0.0 || !value.is_finite() {
            return;
        }
        if self.weight > 0.0 {
            self.weight += weight;
            let last = self.mean;
            self.mean += weight * (value - last) / self.weight;
            self.variance_sum += weight * (value - last) * (value - self.mean);
        } else {
            self.weight = weight;
            self.mean = value;
        }
        self.min = Some(self.min.map_or(value, |m| m.min(value)));
        self.max = Some(self.max.map_or(value, |m| m.max(value)));
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance (weight − 1 denominator); 0 until weight exceeds 1.
    pub fn variance(&self) -> f64 {
        if self.weight > 1.0 {
            self.variance_sum / (self.weight - 1.0)
        } else {
            0.0
        }
    }

    pub fn std_dev(&self) -> f64 {
        math::sqrt(self.variance())
    }

    pub fn min(&self) -> Option<f64> {
        self.min
    }

    pub fn max(&self) -> Option<f64> {
        self.max
    }

    /// Estimated weight of observations `≤ x`.
    pub fn weight_at_or_below(&self, x: f64) -> f64 {
        match (self.min, self.max) {
            (Some(lo), _) if x < lo => 0.0,
            (_, Some(hi)) if x >= hi => self.weight,
            (None, _) => 0.0,
            _ => {
                let sd = self.std_dev();
                let frac = if sd > 0.0 {
                    math::normal_cdf(x, self.mean, sd)
                } else if x >= self.mean {
                    1.0
                } else {
                    0.0
                };
                self.weight * frac
            }
        }
    }
}
