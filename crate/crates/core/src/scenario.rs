//! The three evaluation stream layouts.
//!
//! * Scenario 1: the first `s` events of each class, one class block after
//!   the other (blocks ordered by their first timestamp, class 0 first on a
//!   tie). The stream is unbalanced by time slot.
//! * Scenario 2: the first `s` minority events plus `s` majority events drawn
//!   uniformly without replacement, merged into timestamp order.
//! * Scenario 3: the scenario 2 stream; training is delayed by `delay_n`
//!   samples in the evaluation loop.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::event::{order_stream, WikiEvent};
use crate::models::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    Sequential = 1,
    Balanced = 2,
    Delayed = 3,
}

impl Scenario {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Scenario::Sequential),
            2 => Ok(Scenario::Balanced),
            3 => Ok(Scenario::Delayed),
            _ => Err(Error::InvalidArgument(alloc::format!(
                "unknown scenario {n}"
            ))),
        }
    }

    pub fn number(self) -> u8 {
        self as u8
    }
}

pub const DEFAULT_DELAY: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Samples taken per class.
    pub s: usize,
    /// Training delay in samples; only consulted by scenario 3.
    pub delay_n: usize,
    pub rng_seed: u64,
}

impl ScenarioConfig {
    pub fn new(scenario: Scenario, s: usize) -> Self {
        ScenarioConfig {
            scenario,
            s,
            delay_n: DEFAULT_DELAY,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::InvalidArgument("s must be at least 1".into()));
        }
        if self.delay_n == 0 {
            return Err(Error::InvalidArgument("delay must be at least 1".into()));
        }
        Ok(())
    }

    /// Samples buffered before each training burst.
    pub fn training_batch(&self) -> usize {
        match self.scenario {
            Scenario::Delayed => self.delay_n,
            _ => 1,
        }
    }
}

/// Splits an ordered, fully labeled stream into per-class sequences.
fn split_by_class(events: Vec<WikiEvent>) -> Result<[Vec<WikiEvent>; 2]> {
    let mut classes: [Vec<WikiEvent>; 2] = [Vec::new(), Vec::new()];
    for e in events {
        let label = e
            .label
            .ok_or_else(|| Error::Unlabeled(e.event_id.clone()))?;
        classes[label.index()].push(e);
    }
    Ok(classes)
}

/// Count of events per class, `[class 0, class 1]`.
pub fn class_counts(events: &[WikiEvent]) -> Result<[usize; 2]> {
    let mut counts = [0usize; 2];
    for e in events {
        let label = e
            .label
            .ok_or_else(|| Error::Unlabeled(e.event_id.clone()))?;
        counts[label.index()] += 1;
    }
    Ok(counts)
}

/// The class with fewer events; class 1 on a tie.
pub fn minority_class(counts: [usize; 2]) -> Label {
    if counts[0] < counts[1] {
        Label::NonDisinformation
    } else {
        Label::Disinformation
    }
}

pub fn build_scenario(events: Vec<WikiEvent>, cfg: &ScenarioConfig) -> Result<Vec<WikiEvent>> {
    cfg.validate()?;
    let events = order_stream(events);
    let [mut zeros, mut ones] = split_by_class(events)?;
    for (class, block) in [(0u8, &zeros), (1u8, &ones)] {
        if block.len() < cfg.s {
            return Err(Error::NotEnoughSamples {
                class,
                requested: cfg.s,
                available: block.len(),
            });
        }
    }
    match cfg.scenario {
        Scenario::Sequential => {
            zeros.truncate(cfg.s);
            ones.truncate(cfg.s);
            let mut out = Vec::with_capacity(2 * cfg.s);
            if ones[0].timestamp < zeros[0].timestamp {
                out.append(&mut ones);
                out.append(&mut zeros);
            } else {
                out.append(&mut zeros);
                out.append(&mut ones);
            }
            Ok(out)
        }
        Scenario::Balanced | Scenario::Delayed => {
            let counts = [zeros.len(), ones.len()];
            let (mut minority, majority) = match minority_class(counts) {
                Label::NonDisinformation => (zeros, ones),
                Label::Disinformation => (ones, zeros),
            };
            minority.truncate(cfg.s);
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            let mut picked = rand::seq::index::sample(&mut rng, majority.len(), cfg.s).into_vec();
            picked.sort_unstable();
            let mut majority: Vec<Option<WikiEvent>> = majority.into_iter().map(Some).collect();
            minority.extend(picked.into_iter().filter_map(|i| majority[i].take()));
            Ok(order_stream(minority))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::tests::event;
    use alloc::format;

    fn labeled(n0: usize, n1: usize) -> Vec<WikiEvent> {
        let mut out = Vec::new();
        for i in 0..n0 {
            let mut e = event(&format!("n{i:03}"), (i as i64) * 10);
            e.label = Some(Label::NonDisinformation);
            out.push(e);
        }
        for i in 0..n1 {
            let mut e = event(&format!("d{i:03}"), (i as i64) * 10 + 5);
            e.label = Some(Label::Disinformation);
            out.push(e);
        }
        out
    }

    #[test]
    fn scenario_one_takes_s_per_class() {
        let out =
            build_scenario(labeled(4, 2), &ScenarioConfig::new(Scenario::Sequential, 2)).unwrap();
        assert_eq!(out.len(), 4);
        assert_eq!(class_counts(&out).unwrap(), [2, 2]);
        // blocks: class 0 block starts at t=0, before class 1 at t=5
        let labels: Vec<_> = out.iter().map(|e| e.label.unwrap().index()).collect();
        assert_eq!(labels, [0, 0, 1, 1]);
    }

    #[test]
    fn scenario_two_is_balanced_and_ordered() {
        let cfg = ScenarioConfig {
            rng_seed: 7,
            ..ScenarioConfig::new(Scenario::Balanced, 3)
        };
        let out = build_scenario(labeled(20, 5), &cfg).unwrap();
        assert_eq!(class_counts(&out).unwrap(), [3, 3]);
        assert!(out.windows(2).all(|w| w[0].timestamp <= w[1].timestamp));
        let again = build_scenario(labeled(20, 5), &cfg).unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn scenario_three_matches_scenario_two() {
        let two = ScenarioConfig {
            rng_seed: 11,
            ..ScenarioConfig::new(Scenario::Balanced, 4)
        };
        let three = ScenarioConfig {
            scenario: Scenario::Delayed,
            ..two
        };
        assert_eq!(
            build_scenario(labeled(30, 6), &two).unwrap(),
            build_scenario(labeled(30, 6), &three).unwrap()
        );
    }

    #[test]
    fn errors() {
        let mut events = labeled(3, 3);
        events[0].label = None;
        assert!(matches!(
            build_scenario(events, &ScenarioConfig::new(Scenario::Balanced, 1)),
            Err(Error::Unlabeled(_))
        ));
        assert!(matches!(
            build_scenario(labeled(3, 3), &ScenarioConfig::new(Scenario::Balanced, 4)),
            Err(Error::NotEnoughSamples { .. })
        ));
    }
}
