//! Incremental binary classifiers with learn-one / predict-proba-one
//! contracts.

mod adwin;
mod alma;
mod arf;
mod dump;
pub mod gnb;
mod grid;
mod hat;
mod hoeffding;

use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

pub use adwin::{Adwin, DriftDetector};
pub use alma::{Alma, AlmaParams};
pub use arf::{AdaptiveRandomForest, ArfcParams, FeatureBudget};
pub use dump::{DumpNode, ForestDump, PathStep, TreeDump};
pub use gnb::GaussianNb;
pub use grid::{grid_search_cold_start, HyperparameterGrid, ModelParams};
pub use hat::{HatcParams, HoeffdingAdaptiveTree};
pub use hoeffding::{hoeffding_bound, GaussianEstimator};

use crate::error::{Error, Result};
use crate::features::FeatureVector;

/// Binary target: 0 = non-disinformation, 1 = disinformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Label {
    NonDisinformation = 0,
    Disinformation = 1,
}

impl Label {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Label {
        if i == 0 {
            Label::NonDisinformation
        } else {
            Label::Disinformation
        }
    }

    pub fn opposite(self) -> Label {
        Label::from_index(1 - self.index())
    }

    /// `-1` / `+1`, for margin classifiers.
    pub fn sign(self) -> f64 {
        match self {
            Label::NonDisinformation => -1.0,
            Label::Disinformation => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::NonDisinformation => "non-disinformation",
            Label::Disinformation => "disinformation",
        }
    }
}

impl TryFrom<u8> for Label {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            0 => Ok(Label::NonDisinformation),
            1 => Ok(Label::Disinformation),
            _ => Err(Error::Validation(alloc::format!("label {v} is not 0 or 1"))),
        }
    }
}

impl From<Label> for u8 {
    fn from(l: Label) -> u8 {
        l as u8
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Class distribution `[P(0), P(1)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proba(pub [f64; 2]);

impl Proba {
    pub const UNIFORM: Proba = Proba([0.5, 0.5]);

    /// Normalizes non-negative weights; uniform when they sum to zero.
    pub fn from_weights(w: [f64; 2]) -> Proba {
        let total = w[0] + w[1];
        if total > 0.0 {
            Proba([w[0] / total, w[1] / total])
        } else {
            Proba::UNIFORM
        }
    }

    /// Most probable class; class 0 on a tie.
    pub fn argmax(&self) -> Label {
        if self.0[1] > self.0[0] {
            Label::Disinformation
        } else {
            Label::NonDisinformation
        }
    }

    pub fn confidence(&self) -> f64 {
        self.0[self.argmax().index()]
    }

    pub fn of(&self, label: Label) -> f64 {
        self.0[label.index()]
    }
}

pub trait Classifier {
    fn learn_one(&mut self, x: &FeatureVector, y: Label);
    fn predict_proba_one(&self, x: &FeatureVector) -> Proba;

    fn predict_one(&self, x: &FeatureVector) -> Label {
        self.predict_proba_one(x).argmax()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Gnb,
    Alma,
    Hatc,
    Arfc,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Gnb,
        ModelKind::Alma,
        ModelKind::Hatc,
        ModelKind::Arfc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Gnb => "gnb",
            ModelKind::Alma => "alma",
            ModelKind::Hatc => "hatc",
            ModelKind::Arfc => "arfc",
        }
    }

    pub fn is_tree(self) -> bool {
        matches!(self, ModelKind::Hatc | ModelKind::Arfc)
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(alloc::format!("unknown model {s:?}")))
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One of the four online classifiers.
#[allow(clippy::large_enum_variant)] // one per pipeline
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum OnlineModel {
    Gnb(GaussianNb),
    Alma(Alma),
    Hatc(HoeffdingAdaptiveTree),
    Arfc(AdaptiveRandomForest),
}

impl OnlineModel {
    pub fn new(params: &ModelParams) -> Self {
        match params {
            ModelParams::Gnb => OnlineModel::Gnb(GaussianNb::new()),
            ModelParams::Alma(p) => OnlineModel::Alma(Alma::new(*p)),
            ModelParams::Hatc(p) => OnlineModel::Hatc(HoeffdingAdaptiveTree::new(*p)),
            ModelParams::Arfc(p) => OnlineModel::Arfc(AdaptiveRandomForest::new(*p)),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            OnlineModel::Gnb(_) => ModelKind::Gnb,
            OnlineModel::Alma(_) => ModelKind::Alma,
            OnlineModel::Hatc(_) => ModelKind::Hatc,
            OnlineModel::Arfc(_) => ModelKind::Arfc,
        }
    }

    /// Tree dump for path explanations; `UnsupportedModel` for GNB and ALMA.
    pub fn dump(&self) -> Result<ForestDump> {
        match self {
            OnlineModel::Hatc(t) => Ok(ForestDump {
                trees: alloc::vec![t.dump()],
            }),
            OnlineModel::Arfc(f) => Ok(f.dump()),
            other => Err(Error::UnsupportedModel(other.kind().as_str())),
        }
    }
}

impl Classifier for OnlineModel {
    fn learn_one(&mut self, x: &FeatureVector, y: Label) {
        match self {
            OnlineModel::Gnb(m) => m.learn_one(x, y),
            OnlineModel::Alma(m) => m.learn_one(x, y),
            OnlineModel::Hatc(m) => m.learn_one(x, y),
            OnlineModel::Arfc(m) => m.learn_one(x, y),
        }
    }

    fn predict_proba_one(&self, x: &FeatureVector) -> Proba {
        match self {
            OnlineModel::Gnb(m) => m.predict_proba_one(x),
            OnlineModel::Alma(m) => m.predict_proba_one(x),
            OnlineModel::Hatc(m) => m.predict_proba_one(x),
            OnlineModel::Arfc(m) => m.predict_proba_one(x),
        }
    }

    fn predict_one(&self, x: &FeatureVector) -> Label {
        match self {
            OnlineModel::Arfc(m) => m.predict_one(x),
            other => other.predict_proba_one(x).argmax(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_serde_is_numeric() {
        assert_eq!(serde_json::to_string(&Label::Disinformation).unwrap(), "1");
        assert_eq!(
            serde_json::from_str::<Label>("0").unwrap(),
            Label::NonDisinformation
        );
        assert!(serde_json::from_str::<Label>("2").is_err());
    }

    #[test]
    fn proba_ties_go_to_class_zero() {
        assert_eq!(Proba::UNIFORM.argmax(), Label::NonDisinformation);
        assert_eq!(Proba::from_weights([0.0, 0.0]), Proba::UNIFORM);
        assert_eq!(
            Proba::from_weights([1.0, 3.0]).argmax(),
            Label::Disinformation
        );
    }

    #[test]
    fn model_kind_parsing() {
        assert_eq!("ARFC".parse::<ModelKind>().unwrap(), ModelKind::Arfc);
        assert!("svm".parse::<ModelKind>().is_err());
    }
}
