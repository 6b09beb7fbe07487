//! End-to-end stream processing: text and historical feature engineering,
//! variance-threshold selection and the online model, with cold-start
//! calibration and explanations.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::StreamLearner;
use crate::event::{ArticleQuality, EditQuality, ReviewQuality, Timestamp, WikiEvent};
use crate::explain::{
    build_prompt, extract_paths, fallback_text, filter_minority_trees, generate_explanation,
    top_features, Explanation, HistoryQuantiles, TextGenerator,
};
use crate::features::{component_id, embedding_id, ngram_id, DatasetProfile, FeatureVector};
use crate::history::HistoryStore;
use crate::models::{
    grid_search_cold_start, Classifier, HyperparameterGrid, Label, ModelKind, ModelParams,
    OnlineModel, Proba,
};
use crate::selection::{ProbeSet, SelectorState, DEFAULT_COLD_START_FRACTION};
use crate::text::{
    calibrate_ngram_cap, extract_ngrams, ContentFeatures, NGramExtractorState, SideFeatures,
    TextAnalyzers,
};
use crate::text::{Emotion, PosRatios};

/// Per-sentence n-gram cap used without a cold start.
pub const DEFAULT_NGRAM_CAP: usize = 4;
/// Features reported with each explanation.
pub const TOP_FEATURES: usize = 3;

/// Variance threshold used without a cold start.
pub fn default_threshold(profile: DatasetProfile) -> f64 {
    match profile {
        DatasetProfile::Wikivoyage => 0.067,
        DatasetProfile::Wikipedia => 0.022,
    }
}

/// Number of leading stream events used for calibration: `ceil(f·n)`,
/// at least one.
pub fn cold_start_len(n: usize, fraction: f64) -> usize {
    let k = crate::math::ceil(n as f64 * fraction) as usize;
    k.clamp(1, n.max(1))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub profile: DatasetProfile,
    pub params: ModelParams,
    /// Replace `params` by the best grid point on the cold start.
    pub grid: Option<HyperparameterGrid>,
    pub cold_start_fraction: f64,
    pub probe: ProbeSet,
    pub seed: u64,
}

impl PipelineConfig {
    pub fn new(profile: DatasetProfile, kind: ModelKind, seed: u64) -> Self {
        PipelineConfig {
            profile,
            params: ModelParams::best_known(kind, seed),
            grid: None,
            cold_start_fraction: DEFAULT_COLD_START_FRACTION,
            probe: ProbeSet::Groups(profile.probe_groups()),
            seed,
        }
    }
}

/// Outcome of the cold-start calibration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub cold_start_events: usize,
    pub ngram_cap: usize,
    pub threshold: f64,
    pub params: ModelParams,
    pub grid_scores: Vec<(ModelParams, f64)>,
    pub warm_trained: usize,
}

/// Everything the pipeline learns from the stream; serializable for
/// checkpoints.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineState {
    pub profile: DatasetProfile,
    pub params: ModelParams,
    pub ngrams: NGramExtractorState,
    pub history: HistoryStore,
    pub selector: SelectorState,
    pub model: OnlineModel,
    pub quantiles: HistoryQuantiles,
    pub last_ts: Option<Timestamp>,
}

/// Result of pushing one event through featurize → select → predict.
#[derive(Debug, Clone, PartialEq)]
pub struct Processed {
    pub features: FeatureVector,
    pub selected: FeatureVector,
    pub proba: Proba,
}

pub struct Pipeline {
    analyzers: TextAnalyzers,
    pub state: PipelineState,
}

impl core::fmt::Debug for Pipeline {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Pipeline")
            .field("state", &self.state)
            .finish_non_exhaustive()
    }
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Base features 1–19 of one event.
pub fn base_features(
    event: &WikiEvent,
    side: &SideFeatures,
    content: &ContentFeatures,
    ngrams: &alloc::collections::BTreeMap<String, u64>,
    profile: DatasetProfile,
) -> FeatureVector {
    let mut v = FeatureVector::new();
    let c = &side.counts;
    v.insert(component_id(1, "chars"), c.n_chars as f64);
    v.insert(component_id(1, "words"), c.n_words as f64);
    v.insert(
        component_id(1, "difficult_words"),
        c.n_difficult_words as f64,
    );
    v.insert(component_id(1, "urls"), c.n_urls as f64);
    for (name, x) in PosRatios::NAMES.iter().zip(side.pos.values()) {
        v.insert(component_id(2, name), x);
    }
    v.insert(
        component_id(3, "reading_time"),
        side.readability.reading_time,
    );
    v.insert(component_id(4, "flesch"), side.readability.flesch);
    v.insert(
        component_id(5, "mcalpine_eflaw"),
        side.readability.mcalpine_eflaw,
    );
    for e in Emotion::ALL {
        v.insert(component_id(6, e.as_str()), content.emotion.get(e));
    }
    v.insert(component_id(7, "polarity"), content.polarity);
    for (i, x) in content.embedding.iter().enumerate() {
        v.insert(embedding_id(i), *x);
    }
    for (term, n) in ngrams {
        v.insert(ngram_id(term), *n as f64);
    }
    v.insert(component_id(10, "bot"), flag(event.bot_flag));
    v.insert(component_id(11, "deleted"), flag(event.deleted_flag));
    v.insert(component_id(12, "new"), flag(event.new_flag));
    v.insert(component_id(13, "revert"), flag(event.revert_flag));
    v.insert(component_id(14, "size_diff"), event.size_diff as f64);
    let g = profile.article_quality_group();
    for (name, x) in ArticleQuality::NAMES
        .iter()
        .zip(event.article_quality.values())
    {
        v.insert(component_id(g, name), x);
    }
    let g = profile.edit_quality_group();
    for (name, x) in EditQuality::NAMES.iter().zip(event.edit_quality.values()) {
        v.insert(component_id(g, name), x);
    }
    if let (Some(g), Some(r)) = (profile.review_quality_group(), &event.review_quality) {
        for (name, x) in ReviewQuality::NAMES.iter().zip(r.values()) {
            v.insert(component_id(g, name), x);
        }
    }
    v
}

impl Pipeline {
    /// An uncalibrated pipeline: default n-gram cap and threshold, the
    /// configured model untrained.
    pub fn with_defaults(analyzers: TextAnalyzers, config: &PipelineConfig) -> Result<Self> {
        let selector = SelectorState::new(
            default_threshold(config.profile),
            config.cold_start_fraction,
        )?;
        Ok(Pipeline {
            analyzers,
            state: PipelineState {
                profile: config.profile,
                params: config.params,
                ngrams: NGramExtractorState::new(1, DEFAULT_NGRAM_CAP),
                history: HistoryStore::new(),
                selector,
                model: OnlineModel::new(&config.params),
                quantiles: HistoryQuantiles::default(),
                last_ts: None,
            },
        })
    }

    pub fn from_state(analyzers: TextAnalyzers, state: PipelineState) -> Self {
        Pipeline { analyzers, state }
    }

    /// Calibrates on `cold_start`: n-gram cap, variance threshold, optional
    /// hyperparameter search, then trains the model on the labeled
    /// cold-start samples in order.
    pub fn calibrate(
        analyzers: TextAnalyzers,
        config: &PipelineConfig,
        cold_start: &[WikiEvent],
    ) -> Result<(Self, CalibrationReport)> {
        if cold_start.is_empty() {
            return Err(Error::Empty("cold-start window"));
        }
        let stages: Vec<_> = cold_start
            .iter()
            .map(|e| analyzers.preprocess(&e.content))
            .collect();
        let cap = calibrate_ngram_cap(&stages)?;
        let mut p = Pipeline::with_defaults(analyzers, config)?;
        p.state.ngrams = NGramExtractorState::new(1, cap);
        let mut raw = Vec::with_capacity(cold_start.len());
        for e in cold_start {
            raw.push(p.featurize_event(e)?);
        }
        let mut selector =
            SelectorState::calibrate(&raw, &config.probe, config.cold_start_fraction)?;
        let mut samples = Vec::with_capacity(raw.len());
        for (v, e) in raw.iter().zip(cold_start) {
            let s = selector.update_and_select(v);
            if let Some(y) = e.label {
                samples.push((s, y));
            }
        }
        let threshold = selector.threshold();
        p.state.selector = selector;
        let (params, grid_scores) = match &config.grid {
            Some(grid) if !samples.is_empty() => {
                grid_search_cold_start(config.params.kind(), grid, &samples, config.seed)?
            }
            _ => (config.params, Vec::new()),
        };
        p.state.params = params;
        p.state.model = OnlineModel::new(&params);
        for (x, y) in &samples {
            p.state.model.learn_one(x, *y);
        }
        let report = CalibrationReport {
            cold_start_events: cold_start.len(),
            ngram_cap: cap,
            threshold,
            params,
            grid_scores,
            warm_trained: samples.len(),
        };
        Ok((p, report))
    }

    pub fn analyzers(&self) -> &TextAnalyzers {
        &self.analyzers
    }

    pub fn model(&self) -> &OnlineModel {
        &self.state.model
    }

    pub fn selector(&self) -> &SelectorState {
        &self.state.selector
    }

    pub fn history(&self) -> &HistoryStore {
        &self.state.history
    }

    /// Base plus historical features; updates n-gram, history and quantile
    /// state. The historical part only reflects events before this one.
    pub fn featurize_event(&mut self, event: &WikiEvent) -> Result<FeatureVector> {
        event.validate()?;
        let stages = self.analyzers.preprocess(&event.content);
        let side = self.analyzers.side_features(&stages);
        let content = self.analyzers.content_features(&stages);
        let grams = extract_ngrams(&stages, &mut self.state.ngrams);
        let mut v = base_features(event, &side, &content, &grams, self.state.profile);
        // Stream time never goes back: an event older than the latest one
        // (scenario 1's second class block) is folded in at the latest time.
        let snapshot = match self.state.last_ts {
            Some(t) if event.timestamp < t => {
                let mut at = event.clone();
                at.timestamp = t;
                self.state.history.observe(&at, &v, None)?
            }
            _ => self.state.history.observe(event, &v, None)?,
        };
        self.state.quantiles.observe_vector(&v);
        self.state.last_ts = Some(
            self.state
                .last_ts
                .map_or(event.timestamp, |t| t.max(event.timestamp)),
        );
        v.extend(snapshot.to_features());
        Ok(v)
    }

    pub fn select_features(&mut self, v: &FeatureVector) -> FeatureVector {
        self.state.selector.update_and_select(v)
    }

    pub fn predict(&self, selected: &FeatureVector) -> Proba {
        self.state.model.predict_proba_one(selected)
    }

    pub fn learn(&mut self, selected: &FeatureVector, label: Label) {
        self.state.model.learn_one(selected, label);
    }

    /// Featurize, select and predict without learning.
    pub fn process(&mut self, event: &WikiEvent) -> Result<Processed> {
        let features = self.featurize_event(event)?;
        let selected = self.select_features(&features);
        let proba = self.predict(&selected);
        Ok(Processed {
            features,
            selected,
            proba,
        })
    }

    /// Trains on an expert label and counts it towards the author's spam
    /// tendency when positive.
    pub fn apply_feedback(
        &mut self,
        selected: &FeatureVector,
        user_id: &str,
        label: Label,
    ) -> Result<()> {
        self.learn(selected, label);
        if label == Label::Disinformation {
            self.state.history.record_spam(user_id)?;
        }
        Ok(())
    }

    /// Explains the current model's decision on `selected`. Reads model
    /// state only.
    pub fn explain(
        &self,
        event_id: &str,
        text: &str,
        selected: &FeatureVector,
        generator: Option<&dyn TextGenerator>,
    ) -> (Explanation, Option<String>) {
        let proba = self.predict(selected);
        let predicted = proba.argmax();
        let (paths, total_trees) = match self.state.model.dump() {
            Ok(forest) => {
                let all = extract_paths(&forest, selected);
                let n = all.len();
                match filter_minority_trees(all) {
                    Ok((_, kept)) => (kept, n),
                    Err(_) => (Vec::new(), 0),
                }
            }
            Err(_) => (Vec::new(), 0),
        };
        let top = top_features(
            selected,
            &self.state.selector,
            &self.state.quantiles,
            TOP_FEATURES,
        );
        let top_ids: Vec<String> = top.iter().map(|r| r.feature.clone()).collect();
        let path_ids = crate::explain::path_features(
            paths
                .iter()
                .flat_map(|p| p.steps.iter().map(|s| s.feature.as_str())),
        );
        let confidence = proba.confidence();
        let prompt = build_prompt(text, predicted.name(), confidence, &top_ids);
        let (text, generator, err) = generate_explanation(generator, &prompt, || {
            fallback_text(predicted.name(), confidence, &top_ids, &path_ids)
        });
        (
            Explanation {
                event_id: event_id.into(),
                predicted,
                confidence,
                paths,
                total_trees,
                top_features: top,
                text,
                generator,
            },
            err,
        )
    }
}

impl StreamLearner for Pipeline {
    type Raw = FeatureVector;
    type Sample = FeatureVector;

    fn featurize(&mut self, event: &WikiEvent) -> Result<FeatureVector> {
        self.featurize_event(event)
    }

    fn select(&mut self, raw: FeatureVector) -> FeatureVector {
        self.select_features(&raw)
    }

    fn predict(&self, sample: &FeatureVector) -> Proba {
        Pipeline::predict(self, sample)
    }

    fn learn(&mut self, sample: &FeatureVector, label: Label) {
        Pipeline::learn(self, sample, label)
    }
}
