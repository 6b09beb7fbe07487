//! Feature vectors and the feature-id catalogue.
//!
//! Feature ids are strings prefixed with the two-digit feature group they
//! belong to (`f01.chars`, `f09.<term>`, `f43.user_max.f01`, ...), so the
//! lexicographic order of ids follows the group numbering.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Sparse named feature vector. Absent ids are "not observed", never zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(BTreeMap<String, f64>);

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, value: f64) {
        self.0.insert(id.into(), value);
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.0.get(id).copied()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.0.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Iterates in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.keys().map(String::as_str)
    }

    pub fn extend(&mut self, other: FeatureVector) {
        self.0.extend(other.0);
    }

    /// Keeps only the entries accepted by `keep`.
    pub fn retain(&mut self, mut keep: impl FnMut(&str, f64) -> bool) {
        self.0.retain(|k, v| keep(k, *v));
    }

    pub fn dot(&self, weights: &BTreeMap<String, f64>) -> f64 {
        self.iter()
            .filter_map(|(k, v)| weights.get(k).map(|w| w * v))
            .sum()
    }
}

impl<K: Into<String>> FromIterator<(K, f64)> for FeatureVector {
    fn from_iter<I: IntoIterator<Item = (K, f64)>>(iter: I) -> Self {
        FeatureVector(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// Which wiki the event stream comes from; decides the ids of the
/// event-supplied quality probabilities (15–17 or 18–19).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum DatasetProfile {
    #[default]
    Wikivoyage,
    Wikipedia,
}

impl DatasetProfile {
    pub fn article_quality_group(self) -> u8 {
        match self {
            DatasetProfile::Wikivoyage => 15,
            DatasetProfile::Wikipedia => 18,
        }
    }

    pub fn edit_quality_group(self) -> u8 {
        match self {
            DatasetProfile::Wikivoyage => 16,
            DatasetProfile::Wikipedia => 19,
        }
    }

    /// Wikipedia events carry no review-quality probabilities.
    pub fn review_quality_group(self) -> Option<u8> {
        match self {
            DatasetProfile::Wikivoyage => Some(17),
            DatasetProfile::Wikipedia => None,
        }
    }

    /// The quality-probability groups used to calibrate the variance threshold.
    pub fn probe_groups(self) -> Vec<u8> {
        match self {
            DatasetProfile::Wikivoyage => alloc::vec![15, 16, 17],
            DatasetProfile::Wikipedia => alloc::vec![18, 19],
        }
    }
}

/// Number of base feature groups (1–19).
pub const BASE_GROUPS: u8 = 19;
/// Number of embedding dimensions of feature group 8.
pub const EMBEDDING_DIM: usize = 300;
/// Engineered historical values per event (features 24–99 plus 20–23).
pub const HISTORICAL_COUNT: usize = 80;

pub fn group_prefix(group: u8) -> String {
    format!("f{group:02}.")
}

pub fn component_id(group: u8, name: &str) -> String {
    format!("f{group:02}.{name}")
}

/// Feature group number of an id, if it follows the catalogue naming.
pub fn group_of(id: &str) -> Option<u8> {
    let digits = id.strip_prefix('f')?.get(..2)?;
    if id.as_bytes().get(3) != Some(&b'.') {
        return None;
    }
    digits.parse().ok()
}

pub fn embedding_id(dim: usize) -> String {
    format!("f08.e{dim:03}")
}

pub fn ngram_id(term: &str) -> String {
    format!("f09.{term}")
}

/// Short name of a base group, used in historical feature ids.
pub fn base_name(group: u8) -> String {
    format!("f{group:02}")
}

/// Historical average/maximum ids: user avg 24–42, user max 43–61,
/// page avg 62–80, page max 81–99, each in base-group order 1–19.
pub fn historical_id(entity: Entity, stat: Stat, base_group: u8) -> String {
    debug_assert!((1..=BASE_GROUPS).contains(&base_group));
    let offset = match (entity, stat) {
        (Entity::User, Stat::Avg) => 24,
        (Entity::User, Stat::Max) => 43,
        (Entity::Page, Stat::Avg) => 62,
        (Entity::Page, Stat::Max) => 81,
    };
    let group = offset + base_group - 1;
    format!(
        "f{group:02}.{}_{}.{}",
        entity.as_str(),
        stat.as_str(),
        base_name(base_group)
    )
}

pub const USER_POST_COUNT: &str = "f20.user_post_count";
pub const USER_SPAM_TENDENCY: &str = "f21.user_spam_tendency";
pub const USER_ANTIQUITY_WEEKS: &str = "f22.user_antiquity_weeks";
pub const USER_POSTING_FREQUENCY: &str = "f23.user_posting_frequency";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Entity {
    User,
    Page,
}

impl Entity {
    pub fn as_str(self) -> &'static str {
        match self {
            Entity::User => "user",
            Entity::Page => "page",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stat {
    Avg,
    Max,
}

impl Stat {
    pub fn as_str(self) -> &'static str {
        match self {
            Stat::Avg => "avg",
            Stat::Max => "max",
        }
    }
}

/// True for ids whose group is one of the base features 1–19, excluding the
/// open-ended embedding and n-gram dimensions.
pub fn is_scalar_base(id: &str) -> bool {
    matches!(group_of(id), Some(g) if (1..=BASE_GROUPS).contains(&g) && g != 8 && g != 9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    #[test]
    fn historical_ids_cover_24_to_99_once() {
        let mut groups = BTreeSet::new();
        for entity in [Entity::User, Entity::Page] {
            for stat in [Stat::Avg, Stat::Max] {
                for g in 1..=BASE_GROUPS {
                    let id = historical_id(entity, stat, g);
                    assert!(groups.insert(group_of(&id).unwrap()));
                }
            }
        }
        assert_eq!(groups.len(), 76);
        assert_eq!(*groups.first().unwrap(), 24);
        assert_eq!(*groups.last().unwrap(), 99);
    }

    #[test]
    fn group_parsing() {
        assert_eq!(group_of("f01.chars"), Some(1));
        assert_eq!(group_of(&ngram_id("cat")), Some(9));
        assert_eq!(group_of("x01.chars"), None);
        assert_eq!(group_of("f1.chars"), None);
        assert!(is_scalar_base("f15.wp10stub"));
        assert!(!is_scalar_base(&embedding_id(3)));
        assert!(!is_scalar_base(USER_POST_COUNT));
    }
}
