use serde::{Deserialize, Serialize};

use super::prequential::PredictionRecord;
use crate::models::Label;

/// Binary confusion counts indexed `[truth][predicted]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion(pub [[u64; 2]; 2]);

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

impl Confusion {
    pub fn add(&mut self, truth: Label, predicted: Label) {
        self.0[truth.index()][predicted.index()] += 1;
    }

    pub fn total(&self) -> u64 {
        self.0.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.correct(), self.total())
    }

    /// Precision / recall / F1 of one class; zero denominators give 0.
    pub fn class_scores(&self, class: Label) -> ClassScores {
        let c = class.index();
        let o = 1 - c;
        let tp = self.0[c][c];
        let p = ratio(tp, tp + self.0[o][c]);
        let r = ratio(tp, tp + self.0[c][o]);
        ClassScores {
            precision: p,
            recall: r,
            f1: f1(p, r),
        }
    }

    pub fn macro_scores(&self) -> ClassScores {
        let a = self.class_scores(Label::NonDisinformation);
        let b = self.class_scores(Label::Disinformation);
        ClassScores {
            precision: (a.precision + b.precision) / 2.0,
            recall: (a.recall + b.recall) / 2.0,
            f1: (a.f1 + b.f1) / 2.0,
        }
    }

    /// Pooled over both classes; equals accuracy for single-label data.
    pub fn micro_scores(&self) -> ClassScores {
        let tp = self.correct();
        let p = ratio(tp, self.total());
        ClassScores {
            precision: p,
            recall: p,
            f1: p,
        }
    }

    pub fn snapshot(&self, seconds: f64) -> MetricsSnapshot {
        MetricsSnapshot {
            sample_index: self.total(),
            accuracy: self.accuracy(),
            class0: self.class_scores(Label::NonDisinformation),
            class1: self.class_scores(Label::Disinformation),
            macro_avg: self.macro_scores(),
            micro_avg: self.micro_scores(),
            seconds,
        }
    }
}

/// Metrics after `sample_index` predictions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsSnapshot {
    pub sample_index: u64,
    pub accuracy: f64,
    pub class0: ClassScores,
    pub class1: ClassScores,
    pub macro_avg: ClassScores,
    pub micro_avg: ClassScores,
    /// Cumulative processing time.
    pub seconds: f64,
}

/// Recomputes the metrics of a prediction-log prefix from scratch.
pub fn compute_metrics(log: &[PredictionRecord]) -> MetricsSnapshot {
    let mut c = Confusion::default();
    let mut seconds = 0.0;
    for r in log {
        c.add(r.truth, r.predicted);
        seconds += r.latency_secs;
    }
    c.snapshot(seconds)
}
