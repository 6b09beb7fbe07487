//! Planted-signal event generator for tests, benchmarks and demos.
//!
//! Disinformation events come mostly from a minority of "bad" users, have
//! longer sensational texts with links, more reverts and deletions, larger
//! size changes and quality probabilities shifted towards stub articles and
//! damaging edits. A configurable share of events borrows the text style of
//! the other class so that no single signal is perfect.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal};
use serde::{Deserialize, Serialize};

use crate::event::{ArticleQuality, EditQuality, ReviewQuality, Timestamp, WikiEvent};
use crate::features::DatasetProfile;
use crate::models::Label;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub n_events: usize,
    pub seed: u64,
    pub profile: DatasetProfile,
    pub n_users: usize,
    pub n_pages: usize,
    pub bad_user_fraction: f64,
    /// Probability that an event's text is written in the other class's
    /// style.
    pub camouflage: f64,
    pub start: Timestamp,
}

impl SynthConfig {
    pub fn new(n_events: usize, seed: u64) -> Self {
        SynthConfig {
            n_events,
            seed,
            profile: DatasetProfile::Wikivoyage,
            n_users: 400,
            n_pages: 600,
            bad_user_fraction: 0.35,
            camouflage: 0.15,
            // 2020-01-01T00:00:00Z
            start: Timestamp(1_577_836_800_000),
        }
    }
}

const TRAVEL: &[&str] = &[
    "museum",
    "station",
    "hotel",
    "river",
    "bridge",
    "market",
    "cathedral",
    "beach",
    "harbour",
    "village",
    "train",
    "bus",
    "ticket",
    "guide",
    "park",
    "garden",
    "castle",
    "restaurant",
    "street",
    "square",
    "festival",
    "tour",
    "trail",
    "mountain",
    "lake",
    "island",
    "district",
    "airport",
    "breakfast",
    "view",
    "hostel",
    "ferry",
    "gallery",
    "library",
    "temple",
    "valley",
    "coast",
    "cafe",
    "route",
    "map",
];
const NEUTRAL: &[&str] = &[
    "good", "nice", "pleasant", "friendly", "clean", "open", "visit", "offer", "local", "small",
    "large", "historic", "famous", "popular", "near", "daily", "walk", "stay", "cheap", "old",
    "new", "quiet", "busy", "enjoy",
];
const SENSATIONAL: &[&str] = &[
    "shocking",
    "secret",
    "miracle",
    "hoax",
    "scam",
    "conspiracy",
    "fake",
    "free",
    "click",
    "win",
    "prize",
    "cure",
    "exposed",
    "banned",
    "hidden",
    "truth",
    "danger",
    "terror",
    "outrage",
    "lie",
    "corrupt",
    "evil",
    "unbelievable",
    "incredible",
    "panic",
    "threat",
    "destroy",
    "hate",
    "money",
    "casino",
    "pills",
    "offer",
    "winner",
    "bonus",
];
const GLUE: &[&str] = &[
    "the", "a", "is", "in", "of", "and", "to", "with", "for", "this", "it", "you",
];

fn sentence(rng: &mut ChaCha8Rng, spam: bool) -> String {
    let len = if spam {
        rng.random_range(9..18)
    } else {
        rng.random_range(6..12)
    };
    let mut words: Vec<String> = Vec::with_capacity(len);
    for _ in 0..len {
        let r: f64 = rng.random();
        let pool = if spam {
            if r < 0.45 {
                SENSATIONAL
            } else if r < 0.6 {
                NEUTRAL
            } else if r < 0.7 {
                TRAVEL
            } else {
                GLUE
            }
        } else if r < 0.4 {
            TRAVEL
        } else if r < 0.6 {
            NEUTRAL
        } else {
            GLUE
        };
        let w = *pool.choose(rng).unwrap_or(&"the");
        words.push(if spam && rng.random_bool(0.1) {
            w.to_uppercase()
        } else {
            w.into()
        });
    }
    let mut s = words.join(" ");
    if let Some(first) = s.get(..1) {
        s = first.to_uppercase() + &s[1..];
    }
    s.push_str(if spam && rng.random_bool(0.6) {
        "!!"
    } else {
        "."
    });
    s
}

fn text(rng: &mut ChaCha8Rng, spam: bool) -> String {
    let n = if spam {
        rng.random_range(2..6)
    } else {
        rng.random_range(1..4)
    };
    let mut parts: Vec<String> = (0..n).map(|_| sentence(rng, spam)).collect();
    if spam && rng.random_bool(0.5) {
        parts.push(format!(
            "https://deal{}.example.com/win",
            rng.random_range(0..50)
        ));
    } else if !spam && rng.random_bool(0.1) {
        parts.push(String::from("https://www.example.org/travel"));
    }
    parts.join(" ")
}

fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

fn normalized<const N: usize>(rng: &mut ChaCha8Rng, alphas: [f64; N]) -> [f64; N] {
    let mut v = alphas.map(|a| Gamma::new(a, 1.0).map_or(a, |g| g.sample(rng)));
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    } else {
        v = [1.0 / N as f64; N];
    }
    // exact unit sum for validation
    let rest: f64 = v[..N - 1].iter().sum();
    v[N - 1] = (1.0 - rest).max(0.0);
    v
}

fn normal(rng: &mut ChaCha8Rng, mean: f64, sd: f64) -> f64 {
    Normal::new(mean, sd).map_or(mean, |n| n.sample(rng))
}

/// Ordered, fully labeled synthetic stream.
pub fn generate(cfg: &SynthConfig) -> Vec<WikiEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n_users = cfg.n_users.max(1);
    let bad: Vec<bool> = (0..n_users)
        .map(|_| rng.random_bool(cfg.bad_user_fraction.clamp(0.0, 1.0)))
        .collect();
    let mut ts = cfg.start.millis();
    let mut out = Vec::with_capacity(cfg.n_events);
    for i in 0..cfg.n_events {
        ts += rng.random_range(1_000..600_000);
        let u = rng.random_range(0..n_users);
        let p_spam = if bad[u] { 0.85 } else { 0.1 };
        let spam = rng.random_bool(p_spam);
        let style = if rng.random_bool(cfg.camouflage.clamp(0.0, 1.0)) {
            !spam
        } else {
            spam
        };
        let stub = if spam { 3.0 } else { 0.6 };
        let aq = normalized(&mut rng, [1.0, 1.0, 1.0, 0.3, 0.5, 1.2, stub]);
        let damaging = clamp01(normal(&mut rng, if spam { 0.65 } else { 0.25 }, 0.2));
        let goodfaith = clamp01(normal(&mut rng, if spam { 0.4 } else { 0.8 }, 0.2));
        let review = match cfg.profile {
            DatasetProfile::Wikivoyage => {
                let r = if spam {
                    normalized(&mut rng, [0.3, 0.5, 1.0, 1.5, 2.0])
                } else {
                    normalized(&mut rng, [2.0, 1.5, 1.0, 0.5, 0.3])
                };
                Some(ReviewQuality {
                    a: r[0],
                    b: r[1],
                    c: r[2],
                    d: r[3],
                    e: r[4],
                })
            }
            DatasetProfile::Wikipedia => None,
        };
        let size = normal(&mut rng, if spam { 700.0 } else { 250.0 }, 400.0);
        out.push(WikiEvent {
            event_id: format!("ev{i:07}"),
            timestamp: Timestamp(ts),
            user_id: format!("user{u:04}"),
            page_id: format!("page{:04}", rng.random_range(0..cfg.n_pages.max(1))),
            content: text(&mut rng, style),
            bot_flag: rng.random_bool(if spam { 0.01 } else { 0.05 }),
            deleted_flag: rng.random_bool(if spam { 0.3 } else { 0.03 }),
            new_flag: rng.random_bool(if spam { 0.3 } else { 0.1 }),
            revert_flag: rng.random_bool(if spam { 0.35 } else { 0.05 }),
            size_diff: size as i64,
            article_quality: ArticleQuality {
                ok: aq[0],
                wp10b: aq[1],
                wp10c: aq[2],
                wp10fa: aq[3],
                wp10ga: aq[4],
                wp10start: aq[5],
                wp10stub: aq[6],
            },
            edit_quality: EditQuality {
                damaging_false: 1.0 - damaging,
                damaging_true: damaging,
                goodfaith_false: 1.0 - goodfaith,
                goodfaith_true: goodfaith,
            },
            review_quality: review,
            label: Some(Label::from_index(usize::from(spam))),
        });
    }
    out
}
