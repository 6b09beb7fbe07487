//! Online word n-gram counts (feature 9).
//!
//! Each sentence contributes only its `per_sentence_cap` most frequent grams
//! (ties broken lexicographically). The vocabulary grows as new grams show
//! up; every gram is a new feature dimension for the selector downstream.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::CleanTextStages;
use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NGramExtractorState {
    pub n: usize,
    pub per_sentence_cap: usize,
    pub vocabulary: BTreeSet<String>,
    /// Running totals of everything emitted so far.
    pub accumulated: BTreeMap<String, u64>,
}

impl NGramExtractorState {
    pub fn new(n: usize, per_sentence_cap: usize) -> Self {
        NGramExtractorState {
            n: n.max(1),
            per_sentence_cap: per_sentence_cap.max(1),
            vocabulary: BTreeSet::new(),
            accumulated: BTreeMap::new(),
        }
    }
}

impl Default for NGramExtractorState {
    fn default() -> Self {
        // 1-grams, capped at the four words found on the reference corpora
        NGramExtractorState::new(1, 4)
    }
}

fn grams(sentence: &[String], n: usize) -> impl Iterator<Item = String> + '_ {
    sentence.windows(n).map(|w| w.join("_"))
}

/// Median (rounded half up) of the distinct-term count per non-empty
/// sentence over the cold-start texts. Never below 1.
pub fn calibrate_ngram_cap(cold_start: &[CleanTextStages]) -> Result<usize> {
    if cold_start.is_empty() {
        return Err(Error::Empty("n-gram cold start"));
    }
    let mut counts: Vec<usize> = cold_start
        .iter()
        .flat_map(|s| s.content_ready.iter())
        .map(|sentence| sentence.iter().collect::<BTreeSet<_>>().len())
        .filter(|&c| c > 0)
        .collect();
    if counts.is_empty() {
        return Ok(1);
    }
    counts.sort_unstable();
    let mid = counts.len() / 2;
    let median = if counts.len() % 2 == 1 {
        counts[mid] as f64
    } else {
        (counts[mid - 1] + counts[mid]) as f64 / 2.0
    };
    Ok((math::floor(median + 0.5) as usize).max(1))
}

/// Sparse gram counts for one event; updates the vocabulary and totals.
pub fn extract_ngrams(
    stages: &CleanTextStages,
    state: &mut NGramExtractorState,
) -> BTreeMap<String, u64> {
    let mut out: BTreeMap<String, u64> = BTreeMap::new();
    for sentence in &stages.content_ready {
        let mut freq: BTreeMap<String, u64> = BTreeMap::new();
        for g in grams(sentence, state.n) {
            *freq.entry(g).or_default() += 1;
        }
        let mut ranked: Vec<(String, u64)> = freq.into_iter().collect();
        // BTreeMap order is lexicographic; a stable sort keeps it for ties
        ranked.sort_by_key(|g| core::cmp::Reverse(g.1));
        for (g, c) in ranked.into_iter().take(state.per_sentence_cap) {
            *out.entry(g).or_default() += c;
        }
    }
    for (g, &c) in &out {
        if !state.vocabulary.contains(g) {
            state.vocabulary.insert(g.clone());
        }
        *state.accumulated.entry(g.clone()).or_default() += c;
    }
    out
}
