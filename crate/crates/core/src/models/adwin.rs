//! Adaptive windowing change detector over a bounded real-valued stream.
//!
//! Exponential-histogram implementation: the window is kept as rows of
//! buckets, row `i` holding buckets that summarize `2^i` samples. Every
//! `clock` insertions the window is scanned from the oldest end for a cut
//! point whose two sub-window means differ by more than the bound.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::math;

/// Pluggable change-detector contract.
pub trait DriftDetector {
    /// Adds a sample and reports whether a change was detected.
    fn update(&mut self, value: f64) -> bool;
    /// Mean of the current window.
    fn estimation(&self) -> f64;
    /// Number of samples in the current window.
    fn width(&self) -> u64;
}

pub const DEFAULT_DELTA: f64 = 0.002;
const MAX_BUCKETS: usize = 5;
const CLOCK: u64 = 32;
const MIN_WINDOW: u64 = 10;
const MIN_SUBWINDOW: u64 = 5;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
struct Bucket {
    total: f64,
    variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Adwin {
    delta: f64,
    /// `rows[0]` holds the newest, single-sample buckets; within a row the
    /// front bucket is the oldest.
    rows: Vec<VecDeque<Bucket>>,
    width: u64,
    total: f64,
    variance: f64,
    time: u64,
    detections: u64,
}

impl Default for Adwin {
    fn default() -> Self {
        Adwin::new(DEFAULT_DELTA)
    }
}

impl Adwin {
    pub fn new(delta: f64) -> Self {
        Adwin {
            delta,
            rows: Vec::new(),
            width: 0,
            total: 0.0,
            variance: 0.0,
            time: 0,
            detections: 0,
        }
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// Population variance of the window.
    pub fn variance(&self) -> f64 {
        if self.width == 0 {
            0.0
        } else {
            self.variance / self.width as f64
        }
    }

    pub fn detections(&self) -> u64 {
        self.detections
    }

    pub fn bucket_count(&self) -> usize {
        self.rows.iter().map(VecDeque::len).sum()
    }

    fn insert(&mut self, value: f64) {
        self.width += 1;
        if self.rows.is_empty() {
            self.rows.push(VecDeque::new());
        }
        self.rows[0].push_back(Bucket {
            total: value,
            variance: 0.0,
        });
        if self.width > 1 {
            let w = self.width as f64;
            let d = value - self.total / (w - 1.0);
            self.variance += (w - 1.0) * d * d / w;
        }
        self.total += value;
        self.compress();
    }

    fn compress(&mut self) {
        let mut i = 0;
        while i < self.rows.len() && self.rows[i].len() == MAX_BUCKETS + 1 {
            let b1 = self.rows[i].pop_front().unwrap_or_default();
            let b2 = self.rows[i].pop_front().unwrap_or_default();
            let n = (1u64 << i) as f64;
            let d = b1.total / n - b2.total / n;
            let merged = Bucket {
                total: b1.total + b2.total,
                variance: b1.variance + b2.variance + n * n * d * d / (2.0 * n),
            };
            if i + 1 == self.rows.len() {
                self.rows.push(VecDeque::new());
            }
            self.rows[i + 1].push_back(merged);
            i += 1;
        }
    }

    /// Drops the oldest bucket.
    fn delete_oldest(&mut self) {
        let Some(last) = self.rows.len().checked_sub(1) else {
            return;
        };
        let Some(b) = self.rows[last].pop_front() else {
            return;
        };
        let n1 = (1u64 << last) as f64;
        self.width -= 1u64 << last;
        self.total -= b.total;
        let w = self.width as f64;
        let u1 = b.total / n1;
        let inc = if self.width > 0 {
            let d = u1 - self.total / w;
            b.variance + n1 * w * d * d / (n1 + w)
        } else {
            self.variance
        };
        self.variance -= inc;
        if self.variance < 0.0 || self.width == 0 {
            self.variance = self.variance.max(0.0);
        }
        if self.rows[last].is_empty() {
            self.rows.pop();
        }
    }

    fn cut_expression(&self, n0: u64, n1: u64, diff: f64) -> bool {
        let n = self.width as f64;
        let dd = math::ln(2.0 * math::ln(n) / self.delta);
        let v = self.variance();
        let m = 1.0 / (n0 - MIN_SUBWINDOW + 1) as f64 + 1.0 / (n1 - MIN_SUBWINDOW + 1) as f64;
        let eps = math::sqrt(2.0 * m * v * dd) + 2.0 / 3.0 * dd * m;
        diff.abs() > eps
    }

    /// One scan from the oldest end; drops the oldest bucket and returns
    /// `true` at the first cut point found.
    fn try_reduce(&mut self) -> bool {
        let mut n0 = self.width;
        let mut n1 = 0u64;
        let mut u0 = self.total;
        let mut u1 = 0.0;
        for row in (0..self.rows.len()).rev() {
            let size = 1u64 << row;
            for b in &self.rows[row] {
                n0 -= size;
                n1 += size;
                u0 -= b.total;
                u1 += b.total;
                if n0 == 0 {
                    return false;
                }
                let diff = u1 / n1 as f64 - u0 / n0 as f64;
                if n1 >= MIN_SUBWINDOW && n0 >= MIN_SUBWINDOW && self.cut_expression(n0, n1, diff) {
                    self.delete_oldest();
                    return true;
                }
            }
        }
        false
    }
}

impl DriftDetector for Adwin {
    fn update(&mut self, value: f64) -> bool {
        self.insert(value);
        self.time += 1;
        let mut change = false;
        if self.time.is_multiple_of(CLOCK) && self.width > MIN_WINDOW {
            while self.width > 0 && self.try_reduce() {
                change = true;
            }
        }
        if change {
            self.detections += 1;
        }
        change
    }

    fn estimation(&self) -> f64 {
        if self.width == 0 {
            0.0
        } else {
            self.total / self.width as f64
        }
    }

    fn width(&self) -> u64 {
        self.width
    }
}
