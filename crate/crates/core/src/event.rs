//! Wiki revision events and stream ordering.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::Label;

/// Milliseconds since the Unix epoch, UTC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timestamp(pub i64);

impl Timestamp {
    pub const MILLIS_PER_WEEK: i64 = 7 * 24 * 60 * 60 * 1000;

    pub fn from_secs(secs: i64) -> Self {
        Timestamp(secs * 1000)
    }

    pub fn millis(self) -> i64 {
        self.0
    }

    /// Signed distance to `earlier` in weeks.
    pub fn weeks_since(self, earlier: Timestamp) -> f64 {
        (self.0 - earlier.0) as f64 / Self::MILLIS_PER_WEEK as f64
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}ms", self.0)
    }
}

/// Article quality class probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ArticleQuality {
    pub ok: f64,
    pub wp10b: f64,
    pub wp10c: f64,
    pub wp10fa: f64,
    pub wp10ga: f64,
    pub wp10start: f64,
    pub wp10stub: f64,
}

impl ArticleQuality {
    pub const NAMES: [&'static str; 7] = [
        "ok",
        "wp10b",
        "wp10c",
        "wp10fa",
        "wp10ga",
        "wp10start",
        "wp10stub",
    ];

    pub fn values(&self) -> [f64; 7] {
        [
            self.ok,
            self.wp10b,
            self.wp10c,
            self.wp10fa,
            self.wp10ga,
            self.wp10start,
            self.wp10stub,
        ]
    }
}

/// Damaging / good-faith edit probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EditQuality {
    pub damaging_false: f64,
    pub damaging_true: f64,
    pub goodfaith_false: f64,
    pub goodfaith_true: f64,
}

impl EditQuality {
    pub const NAMES: [&'static str; 4] = [
        "damaging_false",
        "damaging_true",
        "goodfaith_false",
        "goodfaith_true",
    ];

    pub fn values(&self) -> [f64; 4] {
        [
            self.damaging_false,
            self.damaging_true,
            self.goodfaith_false,
            self.goodfaith_true,
        ]
    }
}

/// Review grade probabilities, `a` best to `e` worst.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReviewQuality {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl ReviewQuality {
    pub const NAMES: [&'static str; 5] = ["a", "b", "c", "d", "e"];

    pub fn values(&self) -> [f64; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }
}

/// One timestamped wiki revision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WikiEvent {
    pub event_id: String,
    pub timestamp: Timestamp,
    pub user_id: String,
    pub page_id: String,
    pub content: String,
    pub bot_flag: bool,
    pub deleted_flag: bool,
    pub new_flag: bool,
    pub revert_flag: bool,
    pub size_diff: i64,
    pub article_quality: ArticleQuality,
    pub edit_quality: EditQuality,
    pub review_quality: Option<ReviewQuality>,
    pub label: Option<Label>,
}

const SUM_TOLERANCE: f64 = 1e-6;

fn check_probabilities(group: &str, names: &[&str], values: &[f64]) -> Result<()> {
    for (name, &p) in names.iter().zip(values) {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Validation(format!(
                "{group}.{name} = {p} is not a probability"
            )));
        }
    }
    Ok(())
}

impl WikiEvent {
    /// Checks identifier presence and probability ranges.
    pub fn validate(&self) -> Result<()> {
        if self.event_id.is_empty() {
            return Err(Error::Validation("empty event id".into()));
        }
        check_probabilities(
            "article_quality",
            &ArticleQuality::NAMES,
            &self.article_quality.values(),
        )?;
        let sum: f64 = self.article_quality.values().iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::Validation(format!(
                "article_quality sums to {sum}, expected 1"
            )));
        }
        check_probabilities(
            "edit_quality",
            &EditQuality::NAMES,
            &self.edit_quality.values(),
        )?;
        if let Some(review) = &self.review_quality {
            check_probabilities("review_quality", &ReviewQuality::NAMES, &review.values())?;
        }
        Ok(())
    }
}

/// Stable sort by `(timestamp, event_id)`.
pub fn order_stream(mut events: Vec<WikiEvent>) -> Vec<WikiEvent> {
    events.sort_by(|a, b| {
        a.timestamp
            .cmp(&b.timestamp)
            .then_with(|| a.event_id.cmp(&b.event_id))
    });
    events
}
