//! Live (scenario-free) processing: events are predicted on arrival, learned
//! from when they carry a label, and can be corrected by expert feedback.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{Confusion, MetricsSnapshot};
use crate::event::{Timestamp, WikiEvent};
use crate::explain::{build_prompt, Explanation, FeedbackLedger, FeedbackRecord, Generator};
use crate::features::FeatureVector;
use crate::history::{behavioral_features, Behavior, EntityHistory};
use crate::models::{Label, Proba};
use crate::pipeline::{Pipeline, PipelineState};
use crate::text::TextAnalyzers;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub event_id: String,
    pub predicted: Label,
    pub confidence: f64,
    pub proba: Proba,
    /// Timestamp the event was admitted with.
    pub timestamp: Timestamp,
    /// The event was admitted with its arrival time because its own
    /// timestamp went back in time.
    pub restamped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub event_id: String,
    pub user_id: String,
    pub page_id: String,
    pub timestamp: Timestamp,
    pub predicted: Label,
    pub confidence: f64,
    pub label: Option<Label>,
    pub feedback: Option<Label>,
    pub selected: FeatureVector,
    pub explanation: Explanation,
    /// Prompt for the language model.
    pub prompt: String,
}

impl Contribution {
    /// Corrected or validated by an expert.
    pub fn evaluated(&self) -> bool {
        self.feedback.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContributionView {
    pub event_id: String,
    pub page_id: String,
    pub timestamp: Timestamp,
    pub predicted: Label,
    pub confidence: f64,
    pub feedback: Option<Label>,
    pub evaluated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserView {
    pub user_id: String,
    pub history: EntityHistory,
    pub behavior: Behavior,
    pub contributions: Vec<ContributionView>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionState {
    pub pipeline: PipelineState,
    pub contributions: BTreeMap<String, Contribution>,
    pub by_user: BTreeMap<String, Vec<String>>,
    pub feedback: FeedbackLedger,
    pub confusion: Confusion,
    pub predictions: u64,
}

#[derive(Debug)]
pub struct LiveSession {
    pipeline: Pipeline,
    contributions: BTreeMap<String, Contribution>,
    by_user: BTreeMap<String, Vec<String>>,
    feedback: FeedbackLedger,
    confusion: Confusion,
    predictions: u64,
}

impl LiveSession {
    pub fn new(pipeline: Pipeline) -> Self {
        LiveSession {
            pipeline,
            contributions: BTreeMap::new(),
            by_user: BTreeMap::new(),
            feedback: FeedbackLedger::new(),
            confusion: Confusion::default(),
            predictions: 0,
        }
    }

    pub fn from_state(analyzers: TextAnalyzers, s: SessionState) -> Self {
        LiveSession {
            pipeline: Pipeline::from_state(analyzers, s.pipeline),
            contributions: s.contributions,
            by_user: s.by_user,
            feedback: s.feedback,
            confusion: s.confusion,
            predictions: s.predictions,
        }
    }

    pub fn state(&self) -> SessionState {
        SessionState {
            pipeline: self.pipeline.state.clone(),
            contributions: self.contributions.clone(),
            by_user: self.by_user.clone(),
            feedback: self.feedback.clone(),
            confusion: self.confusion,
            predictions: self.predictions,
        }
    }

    pub fn pipeline(&self) -> &Pipeline {
        &self.pipeline
    }

    pub fn contains(&self, event_id: &str) -> bool {
        self.contributions.contains_key(event_id)
    }

    pub fn contribution(&self, event_id: &str) -> Option<&Contribution> {
        self.contributions.get(event_id)
    }

    pub fn feedback_ledger(&self) -> &FeedbackLedger {
        &self.feedback
    }

    /// Predicts `event`, records the explanation (template text until a
    /// language model fills it in) and learns from the event's own label
    /// when present. Events older than the latest admitted one are
    /// restamped with `arrival`.
    pub fn ingest(&mut self, mut event: WikiEvent, arrival: Timestamp) -> Result<Prediction> {
        if self.contains(&event.event_id) {
            return Err(Error::Conflict(alloc::format!(
                "event {} already ingested",
                event.event_id
            )));
        }
        event.validate()?;
        let last = self.pipeline.state.last_ts;
        let restamped = last.is_some_and(|t| event.timestamp < t);
        if restamped {
            event.timestamp = last.map_or(arrival, |t| t.max(arrival));
        }
        let out = self.pipeline.process(&event)?;
        let timestamp = event.timestamp;
        let (explanation, _) =
            self.pipeline
                .explain(&event.event_id, &event.content, &out.selected, None);
        let predicted = out.proba.argmax();
        let confidence = out.proba.confidence();
        let top: Vec<String> = explanation
            .top_features
            .iter()
            .map(|r| r.feature.clone())
            .collect();
        let prompt = build_prompt(&event.content, predicted.name(), confidence, &top);
        if let Some(y) = event.label {
            self.pipeline.learn(&out.selected, y);
            self.confusion.add(y, predicted);
        }
        self.predictions += 1;
        self.by_user
            .entry(event.user_id.clone())
            .or_default()
            .push(event.event_id.clone());
        self.contributions.insert(
            event.event_id.clone(),
            Contribution {
                event_id: event.event_id.clone(),
                user_id: event.user_id,
                page_id: event.page_id,
                timestamp: event.timestamp,
                predicted,
                confidence,
                label: event.label,
                feedback: None,
                selected: out.selected,
                explanation,
                prompt,
            },
        );
        Ok(Prediction {
            event_id: event.event_id,
            predicted,
            confidence,
            proba: out.proba,
            timestamp,
            restamped,
        })
    }

    /// Records expert feedback and trains on it once.
    pub fn submit_feedback(
        &mut self,
        event_id: &str,
        label: Label,
        now: Timestamp,
    ) -> Result<FeedbackRecord> {
        let prior = self.contributions.get(event_id).map(|c| c.predicted);
        self.feedback.submit(event_id, label, prior, now)?;
        let c = self
            .contributions
            .get_mut(event_id)
            .ok_or_else(|| Error::NotFound(alloc::format!("event {event_id}")))?;
        c.feedback = Some(label);
        if c.label.is_none() {
            self.confusion.add(label, c.predicted);
        }
        let selected = c.selected.clone();
        let user = c.user_id.clone();
        self.pipeline.apply_feedback(&selected, &user, label)?;
        self.feedback.mark_applied(event_id)?;
        self.feedback
            .get(event_id)
            .cloned()
            .ok_or_else(|| Error::NotFound(alloc::format!("feedback for {event_id}")))
    }

    pub fn explanation(&self, event_id: &str) -> Result<&Explanation> {
        self.contributions
            .get(event_id)
            .map(|c| &c.explanation)
            .ok_or_else(|| Error::NotFound(alloc::format!("explanation for {event_id}")))
    }

    /// Replaces the template text with generated text.
    pub fn set_generated_text(&mut self, event_id: &str, text: String) -> Result<()> {
        let c = self
            .contributions
            .get_mut(event_id)
            .ok_or_else(|| Error::NotFound(alloc::format!("explanation for {event_id}")))?;
        c.explanation.text = text;
        c.explanation.generator = Generator::Llm;
        Ok(())
    }

    pub fn user_view(&self, user_id: &str, now: Timestamp) -> Result<UserView> {
        let history = self
            .pipeline
            .history()
            .user(user_id)
            .cloned()
            .ok_or_else(|| Error::NotFound(alloc::format!("user {user_id}")))?;
        let contributions = self
            .by_user
            .get(user_id)
            .into_iter()
            .flatten()
            .filter_map(|id| self.contributions.get(id))
            .map(|c| ContributionView {
                event_id: c.event_id.clone(),
                page_id: c.page_id.clone(),
                timestamp: c.timestamp,
                predicted: c.predicted,
                confidence: c.confidence,
                feedback: c.feedback,
                evaluated: c.evaluated(),
            })
            .collect();
        Ok(UserView {
            user_id: user_id.into(),
            behavior: behavioral_features(&history, now),
            history,
            contributions,
        })
    }

    /// Counters over the labeled (or expert-labeled) predictions;
    /// `sample_index` counts every prediction.
    pub fn metrics(&self) -> MetricsSnapshot {
        let mut m = self.confusion.snapshot(0.0);
        m.sample_index = self.predictions;
        m
    }
}
