//! Prequential (test-then-train) evaluation.

mod metrics;
mod prequential;

pub use metrics::{compute_metrics, ClassScores, Confusion, MetricsSnapshot};
pub use prequential::{
    run_prequential, Clock, EvalOptions, EvaluationRun, NullClock, PhaseTimes, PredictionRecord,
    StreamLearner, DEFAULT_CADENCE,
};
