//! Per-user and per-page running accumulators and the behavioral user
//! features derived from them.
//!
//! Each base group 1–19 is tracked through one headline scalar (see
//! [`headline_values`]); for each entity the running sum, mean and maximum
//! of that scalar give the average / maximum historical features.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{Timestamp, WikiEvent};
use crate::features::{
    group_of, historical_id, Entity, FeatureVector, Stat, BASE_GROUPS, USER_ANTIQUITY_WEEKS,
    USER_POSTING_FREQUENCY, USER_POST_COUNT, USER_SPAM_TENDENCY,
};
use crate::math;
use crate::models::Label;

const GROUPS: usize = BASE_GROUPS as usize;

/// Headline scalar of every base group present in `base`.
///
/// Vector-valued groups are reduced to one number: character count (1),
/// lexical density adj+adv+noun+verb (2), strongest emotion load (6),
/// embedding L2 norm (8), total selected n-gram count (9), stub probability
/// (15/18), damaging probability (16/19) and expected review grade scaled
/// to [0,1] (17). Groups 1–14 always yield a value (0 when the components
/// are missing); the quality groups 15–19 only when the event supplies them.
pub fn headline_values(base: &FeatureVector) -> [Option<f64>; GROUPS] {
    let mut parts: [Vec<(&str, f64)>; GROUPS] = core::array::from_fn(|_| Vec::new());
    for (id, v) in base.iter() {
        if let Some(g) = group_of(id) {
            if (1..=BASE_GROUPS).contains(&g) {
                parts[usize::from(g) - 1].push((&id[4..], v));
            }
        }
    }
    let pick =
        |p: &[(&str, f64)], name: &str| p.iter().find(|(n, _)| *n == name).map_or(0.0, |(_, v)| *v);
    core::array::from_fn(|i| {
        let g = i + 1;
        let p = &parts[i];
        match g {
            1 => Some(pick(p, "chars")),
            2 => Some(
                ["adj", "adv", "noun", "verb"]
                    .iter()
                    .map(|n| pick(p, n))
                    .sum(),
            ),
            6 => Some(p.iter().map(|(_, v)| *v).fold(0.0, f64::max)),
            8 => Some(math::sqrt(p.iter().map(|(_, v)| v * v).sum())),
            9 => Some(p.iter().map(|(_, v)| *v).sum()),
            15 | 18 if !p.is_empty() => Some(pick(p, "wp10stub")),
            16 | 19 if !p.is_empty() => Some(pick(p, "damaging_true")),
            17 if !p.is_empty() => {
                let grade: f64 = ["a", "b", "c", "d", "e"]
                    .iter()
                    .enumerate()
                    .map(|(k, n)| k as f64 * pick(p, n))
                    .sum();
                Some(grade / 4.0)
            }
            15..=19 => None,
            _ => Some(p.first().map_or(0.0, |(_, v)| *v)),
        }
    })
}

/// Running sum / mean / max of one scalar.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Accumulator {
    pub n: u64,
    pub sum: f64,
    pub mean: f64,
    pub max: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.mean += (x - self.mean) / self.n as f64;
        self.max = if self.n == 1 { x } else { self.max.max(x) };
    }

    /// Mean, 0 when empty.
    pub fn avg(&self) -> f64 {
        self.mean
    }

    /// Maximum, 0 when empty.
    pub fn max(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.max
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntityHistory {
    pub entity_id: String,
    /// Number of events seen.
    pub n: u64,
    pub groups: [Accumulator; GROUPS],
    pub first_post: Option<Timestamp>,
    pub last_post: Option<Timestamp>,
    pub spam_count: u64,
}

impl EntityHistory {
    pub fn new(entity_id: impl Into<String>) -> Self {
        EntityHistory {
            entity_id: entity_id.into(),
            n: 0,
            groups: [Accumulator::default(); GROUPS],
            first_post: None,
            last_post: None,
            spam_count: 0,
        }
    }

    pub fn accumulator(&self, base_group: u8) -> &Accumulator {
        &self.groups[usize::from(base_group) - 1]
    }

    fn check_order(&self, ts: Timestamp) -> Result<()> {
        match self.last_post {
            Some(last) if ts < last => Err(Error::Ordering {
                entity: self.entity_id.clone(),
                ts: ts.millis(),
                last: last.millis(),
            }),
            _ => Ok(()),
        }
    }

    fn update(&mut self, values: &[Option<f64>; GROUPS], spam: bool, ts: Timestamp) {
        self.n += 1;
        for (acc, v) in self.groups.iter_mut().zip(values) {
            if let Some(v) = v {
                acc.push(*v);
            }
        }
        self.first_post.get_or_insert(ts);
        self.last_post = Some(ts);
        if spam {
            self.spam_count += 1;
        }
    }

    fn averages(&self) -> [f64; GROUPS] {
        self.groups.map(|a| a.avg())
    }

    fn maxima(&self) -> [f64; GROUPS] {
        self.groups.map(|a| a.max())
    }
}

/// Features 20–23 of one user.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Behavior {
    pub post_count: f64,
    pub spam_tendency: f64,
    pub antiquity_weeks: f64,
    pub posting_frequency: f64,
}

/// Posting frequency divides by at least one week.
pub fn behavioral_features(h: &EntityHistory, now: Timestamp) -> Behavior {
    if h.n == 0 {
        return Behavior::default();
    }
    let antiquity = h.first_post.map_or(0.0, |f| now.weeks_since(f).max(0.0));
    Behavior {
        post_count: h.n as f64,
        spam_tendency: (h.spam_count as f64 / h.n as f64).min(1.0),
        antiquity_weeks: antiquity,
        posting_frequency: h.n as f64 / antiquity.max(1.0),
    }
}

/// Historical features of one event, computed from history strictly before
/// it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoricalSnapshot {
    pub user: Behavior,
    pub user_avg: [f64; GROUPS],
    pub user_max: [f64; GROUPS],
    pub page_avg: [f64; GROUPS],
    pub page_max: [f64; GROUPS],
}

impl HistoricalSnapshot {
    pub fn take(user: &EntityHistory, page: &EntityHistory, now: Timestamp) -> Self {
        HistoricalSnapshot {
            user: behavioral_features(user, now),
            user_avg: user.averages(),
            user_max: user.maxima(),
            page_avg: page.averages(),
            page_max: page.maxima(),
        }
    }

    /// The 80 historical values keyed by feature id.
    pub fn to_features(&self) -> FeatureVector {
        let mut v = FeatureVector::new();
        v.insert(USER_POST_COUNT, self.user.post_count);
        v.insert(USER_SPAM_TENDENCY, self.user.spam_tendency);
        v.insert(USER_ANTIQUITY_WEEKS, self.user.antiquity_weeks);
        v.insert(USER_POSTING_FREQUENCY, self.user.posting_frequency);
        let blocks = [
            (Entity::User, Stat::Avg, &self.user_avg),
            (Entity::User, Stat::Max, &self.user_max),
            (Entity::Page, Stat::Avg, &self.page_avg),
            (Entity::Page, Stat::Max, &self.page_max),
        ];
        for (entity, stat, values) in blocks {
            for (i, x) in values.iter().enumerate() {
                v.insert(historical_id(entity, stat, i as u8 + 1), *x);
            }
        }
        v
    }
}

/// Snapshot the pair's history, then fold the current event into both.
/// Nothing is modified when either entity would move back in time.
pub fn snapshot_then_update(
    user: &mut EntityHistory,
    page: &mut EntityHistory,
    base: &FeatureVector,
    spam: bool,
    ts: Timestamp,
) -> Result<HistoricalSnapshot> {
    user.check_order(ts)?;
    page.check_order(ts)?;
    let snap = HistoricalSnapshot::take(user, page, ts);
    let values = headline_values(base);
    user.update(&values, spam, ts);
    page.update(&values, false, ts);
    Ok(snap)
}

/// Whether an event counts towards its author's spam tendency.
pub fn is_spam(event: &WikiEvent, label_feedback: Option<Label>) -> bool {
    event.revert_flag || label_feedback == Some(Label::Disinformation)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HistoryStore {
    pub users: BTreeMap<String, EntityHistory>,
    pub pages: BTreeMap<String, EntityHistory>,
}

impl HistoryStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn user(&self, id: &str) -> Option<&EntityHistory> {
        self.users.get(id)
    }

    pub fn page(&self, id: &str) -> Option<&EntityHistory> {
        self.pages.get(id)
    }

    pub fn observe(
        &mut self,
        event: &WikiEvent,
        base: &FeatureVector,
        label_feedback: Option<Label>,
    ) -> Result<HistoricalSnapshot> {
        let user = self
            .users
            .entry(event.user_id.clone())
            .or_insert_with(|| EntityHistory::new(event.user_id.to_string()));
        let page = self
            .pages
            .entry(event.page_id.clone())
            .or_insert_with(|| EntityHistory::new(event.page_id.to_string()));
        snapshot_then_update(
            user,
            page,
            base,
            is_spam(event, label_feedback),
            event.timestamp,
        )
    }

    /// Counts one more spam event for `user_id` (late expert feedback).
    pub fn record_spam(&mut self, user_id: &str) -> Result<()> {
        let h = self
            .users
            .get_mut(user_id)
            .ok_or_else(|| Error::NotFound(alloc::format!("user {user_id}")))?;
        if h.spam_count < h.n {
            h.spam_count += 1;
        }
        Ok(())
    }
}
