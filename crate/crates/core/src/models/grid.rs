//! Exhaustive hyperparameter search scored by prequential accuracy on the
//! cold-start sample.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::alma::AlmaParams;
use super::arf::{ArfcParams, FeatureBudget};
use super::hat::HatcParams;
use super::{Classifier, Label, ModelKind, OnlineModel};
use crate::error::{Error, Result};
use crate::features::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelParams {
    Gnb,
    Alma(AlmaParams),
    Hatc(HatcParams),
    Arfc(ArfcParams),
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Gnb => ModelKind::Gnb,
            ModelParams::Alma(_) => ModelKind::Alma,
            ModelParams::Hatc(_) => ModelKind::Hatc,
            ModelParams::Arfc(_) => ModelKind::Arfc,
        }
    }

    /// Best values of the reference grid.
    pub fn best_known(kind: ModelKind, seed: u64) -> ModelParams {
        match kind {
            ModelKind::Gnb => ModelParams::Gnb,
            ModelKind::Alma => ModelParams::Alma(AlmaParams::best_known()),
            ModelKind::Hatc => ModelParams::Hatc(HatcParams::best_known()),
            ModelKind::Arfc => ModelParams::Arfc(ArfcParams::best_known(seed)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperparameterGrid {
    pub alma_alpha: Vec<f64>,
    pub alma_b: Vec<f64>,
    pub alma_c: Vec<f64>,
    pub hatc_depth: Vec<Option<u32>>,
    pub hatc_tie_threshold: Vec<f64>,
    pub hatc_max_size_mb: Vec<f64>,
    pub arfc_models: Vec<u32>,
    pub arfc_features: Vec<FeatureBudget>,
    pub arfc_lambda: Vec<f64>,
}

impl Default for HyperparameterGrid {
    fn default() -> Self {
        HyperparameterGrid {
            alma_alpha: vec![0.3, 0.5, 0.7, 0.9],
            alma_b: vec![0.6, 1.0, 1.4, 1.8],
            alma_c: vec![0.6, 1.0, 1.1, 1.4, 1.8],
            hatc_depth: vec![None, Some(50), Some(100), Some(200)],
            hatc_tie_threshold: vec![0.9, 0.5, 0.05, 0.005],
            hatc_max_size_mb: vec![25.0, 50.0, 100.0, 200.0],
            arfc_models: vec![10, 25, 50, 75],
            arfc_features: vec![
                FeatureBudget::Sqrt,
                FeatureBudget::Count(25),
                FeatureBudget::Count(50),
                FeatureBudget::Count(100),
            ],
            arfc_lambda: vec![5.0, 25.0, 50.0, 100.0],
        }
    }
}

impl HyperparameterGrid {
    /// Grid points in nested row order (first listed parameter outermost).
    pub fn points(&self, kind: ModelKind, seed: u64) -> Vec<ModelParams> {
        let mut out = Vec::new();
        match kind {
            ModelKind::Gnb => out.push(ModelParams::Gnb),
            ModelKind::Alma => {
                for &alpha in &self.alma_alpha {
                    for &b in &self.alma_b {
                        for &c in &self.alma_c {
                            out.push(ModelParams::Alma(AlmaParams { alpha, b, c }));
                        }
                    }
                }
            }
            ModelKind::Hatc => {
                for &d in &self.hatc_depth {
                    for &t in &self.hatc_tie_threshold {
                        for &m in &self.hatc_max_size_mb {
                            out.push(ModelParams::Hatc(HatcParams::with_grid(d, t, m)));
                        }
                    }
                }
            }
            ModelKind::Arfc => {
                for &models in &self.arfc_models {
                    for &features in &self.arfc_features {
                        for &l in &self.arfc_lambda {
                            out.push(ModelParams::Arfc(ArfcParams {
                                models,
                                features,
                                lambda: Some(l),
                                seed,
                                tree: HatcParams::best_known(),
                            }));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Test-then-train accuracy of a fresh model over `samples`.
pub fn prequential_accuracy(params: &ModelParams, samples: &[(FeatureVector, Label)]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    let mut model = OnlineModel::new(params);
    let mut hits = 0usize;
    for (x, y) in samples {
        hits += usize::from(model.predict_one(x) == *y);
        model.learn_one(x, *y);
    }
    hits as f64 / samples.len() as f64
}

/// Scores every grid point; returns the best (first on ties) and the full
/// score table in grid order.
pub fn grid_search_cold_start(
    kind: ModelKind,
    grid: &HyperparameterGrid,
    samples: &[(FeatureVector, Label)],
    seed: u64,
) -> Result<(ModelParams, Vec<(ModelParams, f64)>)> {
    if samples.is_empty() {
        return Err(Error::Empty("cold-start sample"));
    }
    let scores: Vec<(ModelParams, f64)> = grid
        .points(kind, seed)
        .into_iter()
        .map(|p| {
            let acc = prequential_accuracy(&p, samples);
            (p, acc)
        })
        .collect();
    let mut best: Option<&(ModelParams, f64)> = None;
    for s in &scores {
        if best.is_none_or(|b| s.1 > b.1) {
            best = Some(s);
        }
    }
    let best = best
        .map(|b| b.0)
        .ok_or(Error::Empty("hyperparameter grid"))?;
    Ok((best, scores))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        let g = HyperparameterGrid::default();
        assert_eq!(g.points(ModelKind::Alma, 0).len(), 80);
        assert_eq!(g.points(ModelKind::Hatc, 0).len(), 64);
        assert_eq!(g.points(ModelKind::Arfc, 0).len(), 64);
        assert_eq!(g.points(ModelKind::Gnb, 0), vec![ModelParams::Gnb]);
    }

    #[test]
    fn ties_resolve_to_first_point() {
        let g = HyperparameterGrid {
            alma_alpha: vec![0.3, 0.9],
            alma_b: vec![1.0],
            alma_c: vec![1.0],
            ..Default::default()
        };
        // a single sample: every point predicts class 0 first, so all tie
        let samples = vec![([("a", 1.0)].into_iter().collect(), Label::NonDisinformation)];
        let (best, table) = grid_search_cold_start(ModelKind::Alma, &g, &samples, 0).unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(best, table[0].0);
        assert!(grid_search_cold_start(ModelKind::Alma, &g, &[], 0).is_err());
    }

    #[test]
    fn params_serde() {
        let p = ModelParams::best_known(ModelKind::Arfc, 4);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"model\":\"arfc\""));
        assert_eq!(serde_json::from_str::<ModelParams>(&s).unwrap(), p);
    }
}
