//! Averaged word vectors (feature 8).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::CleanTextStages;
use crate::error::{Error, Result};

pub trait WordVectors {
    fn dim(&self) -> usize;
    /// Adds the vector of `word` into `out`; false when out of vocabulary.
    fn accumulate(&self, word: &str, out: &mut [f64]) -> bool;
}

/// Mean vector of the in-vocabulary content tokens; zero when none.
pub fn embed_average(stages: &CleanTextStages, vectors: &dyn WordVectors) -> Vec<f64> {
    let mut sum = vec![0.0; vectors.dim()];
    let mut n = 0usize;
    for token in stages.content_tokens() {
        if vectors.accumulate(token, &mut sum) {
            n += 1;
        }
    }
    if n > 0 {
        let inv = n as f64;
        sum.iter_mut().for_each(|v| *v /= inv);
    }
    sum
}

/// A `word v1 ... vD` table.
#[derive(Debug, Clone, Default)]
pub struct VectorTable {
    dim: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl VectorTable {
    /// Parses the space-separated table, requiring every row to have `dim`
    /// components.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let mut vectors = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let mut fields = line.split_whitespace();
            let Some(word) = fields.next() else { continue };
            let values = fields
                .map(|f| f.parse::<f64>())
                .collect::<core::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: i + 1,
                    message: format!("{e}"),
                })?;
            if values.len() != dim {
                return Err(Error::Config(format!(
                    "vector for {word:?} on line {} has {} components, expected {dim}",
                    i + 1,
                    values.len()
                )));
            }
            vectors.insert(word.into(), values);
        }
        Ok(VectorTable { dim, vectors })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

impl WordVectors for VectorTable {
    fn dim(&self) -> usize {
        self.dim
    }

    fn accumulate(&self, word: &str, out: &mut [f64]) -> bool {
        match self.vectors.get(word) {
            Some(v) => {
                out.iter_mut().zip(v).for_each(|(o, x)| *o += x);
                true
            }
            None => false,
        }
    }
}

/// Deterministic pseudo-random vectors derived from a hash of the word.
/// Every word is in vocabulary; equal words share a vector.
#[derive(Debug, Clone, Copy)]
pub struct HashedVectors {
    dim: usize,
    seed: u64,
}

impl HashedVectors {
    pub fn new(dim: usize, seed: u64) -> Self {
        HashedVectors { dim, seed }
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl WordVectors for HashedVectors {
    fn dim(&self) -> usize {
        self.dim
    }

    fn accumulate(&self, word: &str, out: &mut [f64]) -> bool {
        let mut state = fnv1a(word) ^ self.seed;
        for o in out.iter_mut() {
            state = splitmix64(state);
            // uniform in [-1, 1)
            *o += (state >> 11) as f64 / (1u64 << 52) as f64 - 1.0;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::TextAnalyzers;

    fn stages(text: &str) -> CleanTextStages {
        TextAnalyzers::default_english().preprocess(text)
    }

    #[test]
    fn singleton_mean_and_pair_mean() {
        let table = VectorTable::parse("cat 1 2 3\ndog 3 4 5\n", 3).unwrap();
        assert_eq!(embed_average(&stages("cat"), &table), [1.0, 2.0, 3.0]);
        assert_eq!(embed_average(&stages("cat dog"), &table), [2.0, 3.0, 4.0]);
        assert_eq!(embed_average(&stages("zebra"), &table), [0.0; 3]);
    }

    #[test]
    fn wrong_dimension_is_config_error() {
        assert!(matches!(
            VectorTable::parse("cat 1 2\n", 3),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            VectorTable::parse("cat 1 x 2\n", 3),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn hashed_vectors_are_stable() {
        let h = HashedVectors::new(300, 1);
        let mut a = vec![0.0; 300];
        let mut b = vec![0.0; 300];
        h.accumulate("cat", &mut a);
        h.accumulate("cat", &mut b);
        assert_eq!(a, b);
        assert!(a.iter().all(|v| (-1.0..1.0).contains(v)));
        let mut c = vec![0.0; 300];
        h.accumulate("dog", &mut c);
        assert_ne!(a, c);
    }
}
