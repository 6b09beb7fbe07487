use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::metrics::{Confusion, MetricsSnapshot};
use crate::error::{Error, Result};
use crate::event::WikiEvent;
use crate::models::{Label, ModelKind, Proba};
use crate::scenario::ScenarioConfig;

/// Metric snapshots are taken every this many predictions.
pub const DEFAULT_CADENCE: usize = 10;

/// Monotonic time source in seconds.
pub trait Clock {
    fn now(&self) -> f64;
}

/// Reports zero; for deterministic runs where timing is irrelevant.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullClock;

impl Clock for NullClock {
    fn now(&self) -> f64 {
        0.0
    }
}

/// The stages applied to every stream sample.
pub trait StreamLearner {
    type Raw;
    type Sample;

    /// Feature engineering, including the history snapshot.
    fn featurize(&mut self, event: &WikiEvent) -> Result<Self::Raw>;
    /// Feature selection.
    fn select(&mut self, raw: Self::Raw) -> Self::Sample;
    fn predict(&self, sample: &Self::Sample) -> Proba;
    fn learn(&mut self, sample: &Self::Sample, label: Label);
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub featurize: f64,
    pub select: f64,
    pub predict: f64,
    pub learn: f64,
}

impl PhaseTimes {
    pub fn total(&self) -> f64 {
        self.featurize + self.select + self.predict + self.learn
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub event_id: String,
    pub truth: Label,
    pub predicted: Label,
    pub proba: Proba,
    /// Processing time charged to this sample, including any training
    /// burst it triggered.
    pub latency_secs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub cadence: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            cadence: DEFAULT_CADENCE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRun {
    pub scenario: ScenarioConfig,
    pub model: ModelKind,
    pub log: Vec<PredictionRecord>,
    pub curve: Vec<MetricsSnapshot>,
    /// Prediction counts after which a training burst ran.
    pub training_points: Vec<u64>,
    /// Samples predicted but never trained on.
    pub untrained: usize,
    pub phases: PhaseTimes,
}

impl EvaluationRun {
    pub fn total_seconds(&self) -> f64 {
        self.phases.total()
    }

    pub fn samples_per_second(&self) -> f64 {
        let t = self.total_seconds();
        if t > 0.0 {
            self.log.len() as f64 / t
        } else {
            0.0
        }
    }

    pub fn final_metrics(&self) -> MetricsSnapshot {
        super::metrics::compute_metrics(&self.log)
    }
}

/// Predicts every event before learning from it. Scenarios 1 and 2 learn
/// right after each prediction; scenario 3 buffers samples and trains on
/// the whole buffer, in order, once it holds `delay_n` of them.
pub fn run_prequential<L: StreamLearner>(
    stream: &[WikiEvent],
    learner: &mut L,
    model: ModelKind,
    cfg: &ScenarioConfig,
    opts: EvalOptions,
    clock: &dyn Clock,
) -> Result<EvaluationRun> {
    cfg.validate()?;
    if opts.cadence == 0 {
        return Err(Error::InvalidArgument(
            "metric cadence must be at least 1".into(),
        ));
    }
    let batch = cfg.training_batch();
    let mut buffer: Vec<(L::Sample, Label)> = Vec::with_capacity(batch);
    let mut confusion = Confusion::default();
    let mut phases = PhaseTimes::default();
    let mut run = EvaluationRun {
        scenario: *cfg,
        model,
        log: Vec::with_capacity(stream.len()),
        curve: Vec::with_capacity(stream.len() / opts.cadence),
        training_points: Vec::new(),
        untrained: 0,
        phases,
    };
    let mut elapsed = 0.0;
    for event in stream {
        let truth = event
            .label
            .ok_or_else(|| Error::Unlabeled(event.event_id.clone()))?;
        let t0 = clock.now();
        let raw = learner.featurize(event)?;
        let t1 = clock.now();
        let sample = learner.select(raw);
        let t2 = clock.now();
        let proba = learner.predict(&sample);
        let t3 = clock.now();
        buffer.push((sample, truth));
        if buffer.len() >= batch {
            for (s, y) in buffer.drain(..) {
                learner.learn(&s, y);
            }
            if batch > 1 {
                run.training_points.push(run.log.len() as u64 + 1);
            }
        }
        let t4 = clock.now();
        phases.featurize += t1 - t0;
        phases.select += t2 - t1;
        phases.predict += t3 - t2;
        phases.learn += t4 - t3;
        let latency = t4 - t0;
        elapsed += latency;
        let predicted = proba.argmax();
        confusion.add(truth, predicted);
        run.log.push(PredictionRecord {
            event_id: event.event_id.clone(),
            truth,
            predicted,
            proba,
            latency_secs: latency,
        });
        if run.log.len().is_multiple_of(opts.cadence) {
            run.curve.push(confusion.snapshot(elapsed));
        }
    }
    run.untrained = buffer.len();
    run.phases = phases;
    Ok(run)
}
