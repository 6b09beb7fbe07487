use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::features::{is_scalar_base, FeatureVector};
use crate::selection::SelectorState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quartiles {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

/// Linear-interpolation quantile of sorted data (position `q·(n−1)`).
fn interpolate(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos as usize;
    let frac = pos - lo as f64;
    match sorted.get(lo + 1) {
        Some(hi) => sorted[lo] + frac * (hi - sorted[lo]),
        None => sorted[lo],
    }
}

pub fn quartiles(values: &[f64]) -> Option<Quartiles> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Some(Quartiles {
        q1: interpolate(&v, 0.25),
        q2: interpolate(&v, 0.5),
        q3: interpolate(&v, 0.75),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuartileColor {
    None,
    Green,
    Yellow,
    Red,
}

/// Red above Q3, yellow above Q2, green above Q1, uncolored otherwise.
pub fn quartile_color(value: f64, q: &Quartiles) -> QuartileColor {
    if value > q.q3 {
        QuartileColor::Red
    } else if value > q.q2 {
        QuartileColor::Yellow
    } else if value > q.q1 {
        QuartileColor::Green
    } else {
        QuartileColor::None
    }
}

/// Population distribution of feature values.
pub trait QuantileStore {
    fn observe(&mut self, id: &str, value: f64);
    fn quartiles(&self, id: &str) -> Option<Quartiles>;
}

/// Keeps every observed value of the scalar base features.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HistoryQuantiles {
    values: BTreeMap<String, Vec<f64>>,
}

impl HistoryQuantiles {
    /// Records the scalar base features of `v`.
    pub fn observe_vector(&mut self, v: &FeatureVector) {
        for (id, x) in v.iter() {
            if is_scalar_base(id) {
                self.observe(id, x);
            }
        }
    }

    pub fn count(&self, id: &str) -> usize {
        self.values.get(id).map_or(0, Vec::len)
    }
}

impl QuantileStore for HistoryQuantiles {
    fn observe(&mut self, id: &str, value: f64) {
        match self.values.get_mut(id) {
            Some(v) => v.push(value),
            None => {
                self.values.insert(id.into(), alloc::vec![value]);
            }
        }
    }

    fn quartiles(&self, id: &str) -> Option<Quartiles> {
        quartiles(self.values.get(id)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub feature: String,
    pub value: f64,
    pub variance: f64,
    pub color: QuartileColor,
    pub quartiles: Option<Quartiles>,
}

/// The `k` selected scalar base features with the highest selector
/// variance (ties by id), colored by their quartile in the population.
pub fn top_features(
    selected: &FeatureVector,
    selector: &SelectorState,
    population: &dyn QuantileStore,
    k: usize,
) -> Vec<FeatureReport> {
    let mut ranked: Vec<(&str, f64, f64)> = selected
        .iter()
        .filter(|(id, _)| is_scalar_base(id))
        .map(|(id, x)| (id, x, selector.tracker().variance(id).unwrap_or(0.0)))
        .collect();
    ranked.sort_by(|a, b| b.2.total_cmp(&a.2).then_with(|| a.0.cmp(b.0)));
    ranked
        .into_iter()
        .take(k)
        .map(|(id, value, variance)| {
            let q = population.quartiles(id);
            FeatureReport {
                feature: id.into(),
                value,
                variance,
                color: q
                    .as_ref()
                    .map_or(QuartileColor::None, |q| quartile_color(value, q)),
                quartiles: q,
            }
        })
        .collect()
}
