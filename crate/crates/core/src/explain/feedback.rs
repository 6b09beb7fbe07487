use alloc::collections::BTreeMap;
use alloc::string::String;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::Timestamp;
use crate::models::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackRecord {
    pub event_id: String,
    pub label: Label,
    pub prior_prediction: Label,
    pub timestamp: Timestamp,
    pub applied: bool,
}

/// At most one feedback per event, each applied to training exactly once.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeedbackLedger {
    records: BTreeMap<String, FeedbackRecord>,
}

impl FeedbackLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, event_id: &str) -> Option<&FeedbackRecord> {
        self.records.get(event_id)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn applied_count(&self) -> usize {
        self.records.values().filter(|r| r.applied).count()
    }

    pub fn records(&self) -> impl Iterator<Item = &FeedbackRecord> + '_ {
        self.records.values()
    }

    /// Registers feedback for a predicted event. `prior` is `None` when the
    /// event is unknown.
    pub fn submit(
        &mut self,
        event_id: &str,
        label: Label,
        prior: Option<Label>,
        timestamp: Timestamp,
    ) -> Result<&FeedbackRecord> {
        let prior = prior.ok_or_else(|| Error::NotFound(alloc::format!("event {event_id}")))?;
        if self.records.contains_key(event_id) {
            return Err(Error::Conflict(alloc::format!(
                "feedback for {event_id} already recorded"
            )));
        }
        let rec = FeedbackRecord {
            event_id: event_id.into(),
            label,
            prior_prediction: prior,
            timestamp,
            applied: false,
        };
        Ok(self.records.entry(event_id.into()).or_insert(rec))
    }

    pub fn mark_applied(&mut self, event_id: &str) -> Result<()> {
        let r = self
            .records
            .get_mut(event_id)
            .ok_or_else(|| Error::NotFound(alloc::format!("feedback for {event_id}")))?;
        if r.applied {
            return Err(Error::Conflict(alloc::format!(
                "feedback for {event_id} already applied"
            )));
        }
        r.applied = true;
        Ok(())
    }

    /// Restores a persisted record.
    pub fn restore(&mut self, record: FeedbackRecord) {
        self.records.insert(record.event_id.clone(), record);
    }
}
