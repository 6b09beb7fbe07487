//! Evaluation artifacts: metric curve, prediction log, summary, selector
//! state, entity histories and the model dump.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use wikistream_core::eval::{EvaluationRun, MetricsSnapshot, PhaseTimes, PredictionRecord};
use wikistream_core::history::HistoryStore;
use wikistream_core::pipeline::{CalibrationReport, Pipeline};
use wikistream_core::scenario::ScenarioConfig;
use wikistream_core::selection::SelectorState;

use crate::error::{Error, Result};

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub const CURVE_HEADER: [&str; 15] = [
    "sample_index",
    "accuracy",
    "precision_0",
    "recall_0",
    "f1_0",
    "precision_1",
    "recall_1",
    "f1_1",
    "macro_precision",
    "macro_recall",
    "macro_f1",
    "micro_precision",
    "micro_recall",
    "micro_f1",
    "seconds",
];

pub fn write_curve(w: impl Write, curve: &[MetricsSnapshot]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CURVE_HEADER)?;
    for m in curve {
        let mut row = vec![m.sample_index.to_string(), m.accuracy.to_string()];
        for s in [m.class0, m.class1, m.macro_avg, m.micro_avg] {
            row.extend([s.precision, s.recall, s.f1].map(|v| v.to_string()));
        }
        row.push(m.seconds.to_string());
        out.write_record(&row)?;
    }
    out.flush().map_err(|e| Error::io("<curve>", e))
}

pub fn write_predictions(w: impl Write, log: &[PredictionRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "event_id",
        "truth",
        "predicted",
        "proba_0",
        "proba_1",
        "latency_secs",
    ])?;
    for r in log {
        out.write_record([
            r.event_id.clone(),
            r.truth.index().to_string(),
            r.predicted.index().to_string(),
            r.proba.0[0].to_string(),
            r.proba.0[1].to_string(),
            r.latency_secs.to_string(),
        ])?;
    }
    out.flush().map_err(|e| Error::io("<predictions>", e))
}

pub fn write_selector(w: impl Write, selector: &SelectorState) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in selector.rows() {
        out.serialize(row)?;
    }
    out.flush().map_err(|e| Error::io("<selector>", e))
}

/// One `EntityHistory` per line, users first, each with its kind.
pub fn write_histories(mut w: impl Write, store: &HistoryStore) -> Result<()> {
    #[derive(Serialize)]
    struct Line<'a> {
        kind: &'static str,
        #[serde(flatten)]
        history: &'a wikistream_core::history::EntityHistory,
    }
    for (kind, map) in [("user", &store.users), ("page", &store.pages)] {
        for h in map.values() {
            serde_json::to_writer(&mut w, &Line { kind, history: h })?;
            w.write_all(b"\n")
                .map_err(|e| Error::io("<histories>", e))?;
        }
    }
    w.flush().map_err(|e| Error::io("<histories>", e))
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary<'a> {
    pub scenario: &'a ScenarioConfig,
    pub model: &'a str,
    pub samples: usize,
    pub untrained: usize,
    pub training_points: usize,
    pub total_seconds: f64,
    pub samples_per_second: f64,
    pub phases: PhaseTimes,
    pub calibration: &'a CalibrationReport,
    pub final_metrics: MetricsSnapshot,
}

impl<'a> Summary<'a> {
    pub fn new(run: &'a EvaluationRun, calibration: &'a CalibrationReport) -> Self {
        let mut final_metrics = run.final_metrics();
        final_metrics.seconds = run.total_seconds();
        Summary {
            scenario: &run.scenario,
            model: run.model.as_str(),
            samples: run.log.len(),
            untrained: run.untrained,
            training_points: run.training_points.len(),
            total_seconds: run.total_seconds(),
            samples_per_second: run.samples_per_second(),
            phases: run.phases,
            calibration,
            final_metrics,
        }
    }
}

/// Writes `curve.csv`, `predictions.csv`, `summary.json`, `selector.csv`,
/// `histories.jsonl` and, for tree models, `model.json`.
pub fn write_run(
    dir: &Path,
    run: &EvaluationRun,
    calibration: &CalibrationReport,
    pipeline: &Pipeline,
) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_curve(create(&dir.join("curve.csv"))?, &run.curve)?;
    write_predictions(create(&dir.join("predictions.csv"))?, &run.log)?;
    write_selector(create(&dir.join("selector.csv"))?, pipeline.selector())?;
    write_histories(create(&dir.join("histories.jsonl"))?, pipeline.history())?;
    let mut w = create(&dir.join("summary.json"))?;
    serde_json::to_writer_pretty(&mut w, &Summary::new(run, calibration))?;
    w.flush()
        .map_err(|e| Error::io(dir.join("summary.json"), e))?;
    if let Ok(dump) = pipeline.model().dump() {
        let mut w = create(&dir.join("model.json"))?;
        serde_json::to_writer(&mut w, &dump)?;
        w.flush()
            .map_err(|e| Error::io(dir.join("model.json"), e))?;
    }
    Ok(())
}
