//! Online variance-threshold feature selection.
//!
//! The threshold is fixed once from the cold-start window (nearest-rank
//! percentile of the probe features' variances). Afterwards every incoming
//! vector updates the per-feature running variances and only features whose
//! current variance reaches the threshold are passed on.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{group_of, FeatureVector};

pub const DEFAULT_COLD_START_FRACTION: f64 = 0.005;
pub const THRESHOLD_PERCENTILE: u32 = 90;

/// Welford running moments with population variance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunningVariance {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl RunningVariance {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.m2 / self.count as f64).max(0.0)
        }
    }
}

/// Running variance of every feature id seen so far. A new id starts with
/// its first observation; earlier samples are not back-filled.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VarianceTracker {
    stats: BTreeMap<String, RunningVariance>,
}

impl VarianceTracker {
    pub fn update(&mut self, v: &FeatureVector) {
        for (id, x) in v.iter() {
            match self.stats.get_mut(id) {
                Some(s) => s.push(x),
                None => {
                    let mut s = RunningVariance::default();
                    s.push(x);
                    self.stats.insert(id.into(), s);
                }
            }
        }
    }

    pub fn variance(&self, id: &str) -> Option<f64> {
        self.stats.get(id).map(RunningVariance::variance)
    }

    pub fn get(&self, id: &str) -> Option<&RunningVariance> {
        self.stats.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &RunningVariance)> + '_ {
        self.stats.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }
}

/// Nearest-rank percentile: the value at rank `ceil(p/100 · N)` of the
/// ascending sort.
pub fn nearest_rank_percentile(values: &[f64], percentile: u32) -> Option<f64> {
    if values.is_empty() || percentile > 100 {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as u64;
    let rank = ((u64::from(percentile) * n).div_ceil(100)).max(1);
    v.get(rank as usize - 1).copied()
}

/// Features whose cold-start variances define the threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeSet {
    Groups(Vec<u8>),
    All,
}

impl ProbeSet {
    pub fn contains(&self, id: &str) -> bool {
        match self {
            ProbeSet::All => true,
            ProbeSet::Groups(gs) => group_of(id).is_some_and(|g| gs.contains(&g)),
        }
    }
}

/// 90th nearest-rank percentile of the probe-feature variances over the
/// cold-start vectors.
pub fn calibrate_threshold(cold_start: &[FeatureVector], probe: &ProbeSet) -> Result<f64> {
    if cold_start.is_empty() {
        return Err(Error::Empty("cold-start window"));
    }
    let mut tracker = VarianceTracker::default();
    for v in cold_start {
        let mut p = v.clone();
        p.retain(|id, _| probe.contains(id));
        tracker.update(&p);
    }
    let variances: Vec<f64> = tracker.iter().map(|(_, s)| s.variance()).collect();
    nearest_rank_percentile(&variances, THRESHOLD_PERCENTILE).ok_or(Error::Empty("probe features"))
}

/// Row of the selector export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorRow {
    pub feature: String,
    pub count: u64,
    pub variance: f64,
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorState {
    threshold: f64,
    cold_start_fraction: f64,
    tracker: VarianceTracker,
}

impl SelectorState {
    pub fn new(threshold: f64, cold_start_fraction: f64) -> Result<Self> {
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(Error::Config(alloc::format!(
                "invalid variance threshold {threshold}"
            )));
        }
        if !(cold_start_fraction > 0.0 && cold_start_fraction < 1.0) {
            return Err(Error::Config(alloc::format!(
                "cold-start fraction must lie in (0, 1), got {cold_start_fraction}"
            )));
        }
        Ok(SelectorState {
            threshold,
            cold_start_fraction,
            tracker: VarianceTracker::default(),
        })
    }

    pub fn calibrate(
        cold_start: &[FeatureVector],
        probe: &ProbeSet,
        cold_start_fraction: f64,
    ) -> Result<Self> {
        Self::new(calibrate_threshold(cold_start, probe)?, cold_start_fraction)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn cold_start_fraction(&self) -> f64 {
        self.cold_start_fraction
    }

    pub fn tracker(&self) -> &VarianceTracker {
        &self.tracker
    }

    pub fn is_selected(&self, id: &str) -> bool {
        self.tracker
            .variance(id)
            .is_some_and(|v| v >= self.threshold)
    }

    pub fn selected_ids(&self) -> Vec<&str> {
        self.tracker
            .iter()
            .filter(|(_, s)| s.variance() >= self.threshold)
            .map(|(id, _)| id)
            .collect()
    }

    /// Updates the running variances with `v`, then keeps the features of
    /// `v` whose variance reaches the threshold.
    pub fn update_and_select(&mut self, v: &FeatureVector) -> FeatureVector {
        self.tracker.update(v);
        self.select(v)
    }

    /// Filters without updating.
    pub fn select(&self, v: &FeatureVector) -> FeatureVector {
        let mut out = v.clone();
        out.retain(|id, _| self.is_selected(id));
        out
    }

    pub fn rows(&self) -> Vec<SelectorRow> {
        self.tracker
            .iter()
            .map(|(id, s)| SelectorRow {
                feature: id.into(),
                count: s.count,
                variance: s.variance(),
                selected: s.variance() >= self.threshold,
            })
            .collect()
    }
}
