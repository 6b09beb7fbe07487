//! One line per acceptance criterion; exits non-zero if any fails.
//!
//! Run with `cargo test -p wikistream-core --test acceptance`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use wikistream_core::eval::{compute_metrics, run_prequential, Clock, EvalOptions, StreamLearner};
use wikistream_core::event::Timestamp;
use wikistream_core::features::{historical_id, DatasetProfile, Entity, Stat, USER_POST_COUNT};
use wikistream_core::history::{headline_values, Accumulator};
use wikistream_core::models::gnb::{gaussian_log_pdf, normalize_log_scores};
use wikistream_core::models::{
    AdaptiveRandomForest, Alma, AlmaParams, ArfcParams, Classifier, FeatureBudget, GaussianNb,
    HatcParams, HoeffdingAdaptiveTree, ModelKind, OnlineModel,
};
use wikistream_core::pipeline::{cold_start_len, Pipeline, PipelineConfig};
use wikistream_core::scenario::{build_scenario, Scenario, ScenarioConfig};
use wikistream_core::selection::{
    calibrate_threshold, nearest_rank_percentile, ProbeSet, RunningVariance,
};
use wikistream_core::session::LiveSession;
use wikistream_core::synth::{generate, SynthConfig};
use wikistream_core::text::TextAnalyzers;
use wikistream_core::{Error, FeatureVector, Label, Proba, WikiEvent};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

struct Wall(Instant);

impl Clock for Wall {
    fn now(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

// ---------------------------------------------------------------------------

fn accumulator_oracle() -> Outcome {
    let start = Instant::now();
    let mut cfg = SynthConfig::new(10_000, 31);
    // Few entities so that prefixes get long.
    cfg.n_users = 60;
    cfg.n_pages = 80;
    let events = generate(&cfg);
    let pc = PipelineConfig::new(DatasetProfile::Wikivoyage, ModelKind::Gnb, 0);
    let mut p = Pipeline::with_defaults(TextAnalyzers::default_english(), &pc)
        .map_err(|e| e.to_string())?;
    // Brute force: every headline value seen so far per entity.
    let mut seen: [BTreeMap<String, Vec<[Option<f64>; 19]>>; 2] =
        [BTreeMap::new(), BTreeMap::new()];
    let mut checks = 0u64;
    for e in &events {
        let before: [Option<[Accumulator; 19]>; 2] = [
            p.history()
                .user(&e.user_id)
                .map(|h| std::array::from_fn(|g| *h.accumulator(g as u8 + 1))),
            p.history()
                .page(&e.page_id)
                .map(|h| std::array::from_fn(|g| *h.accumulator(g as u8 + 1))),
        ];
        let v = p.featurize_event(e).map_err(|err| err.to_string())?;
        let ids = [&e.user_id, &e.page_id];
        for (k, entity) in [Entity::User, Entity::Page].into_iter().enumerate() {
            let prefix = seen[k].get(ids[k]).map(Vec::as_slice).unwrap_or(&[]);
            for g in 0..19 {
                let xs: Vec<f64> = prefix.iter().filter_map(|h| h[g]).collect();
                let sum: f64 = xs.iter().sum();
                let max = xs.iter().copied().reduce(f64::max).unwrap_or(0.0);
                let avg = if xs.is_empty() {
                    0.0
                } else {
                    sum / xs.len() as f64
                };
                let acc = before[k].map(|a| a[g]).unwrap_or_default();
                ensure!(
                    acc.n == xs.len() as u64,
                    "{}: count {} vs {}",
                    e.event_id,
                    acc.n,
                    xs.len()
                );
                ensure!(
                    acc.sum == sum,
                    "{} group {}: sum {} vs {}",
                    e.event_id,
                    g + 1,
                    acc.sum,
                    sum
                );
                ensure!(
                    acc.max() == max,
                    "{} group {}: max {} vs {}",
                    e.event_id,
                    g + 1,
                    acc.max(),
                    max
                );
                let got_avg = v
                    .get(&historical_id(entity, Stat::Avg, g as u8 + 1))
                    .unwrap_or(f64::NAN);
                let got_max = v
                    .get(&historical_id(entity, Stat::Max, g as u8 + 1))
                    .unwrap_or(f64::NAN);
                ensure!(
                    rel_close(got_avg, avg, 1e-9),
                    "{} group {}: avg {} vs {}",
                    e.event_id,
                    g + 1,
                    got_avg,
                    avg
                );
                ensure!(
                    got_max == max,
                    "{} group {}: max feature {} vs {}",
                    e.event_id,
                    g + 1,
                    got_max,
                    max
                );
                checks += 1;
            }
        }
        let n_user = seen[0].get(&e.user_id).map_or(0, Vec::len);
        ensure!(
            v.get(USER_POST_COUNT) == Some(n_user as f64),
            "{}: post count",
            e.event_id
        );
        let h = headline_values(&v);
        seen[0].entry(e.user_id.clone()).or_default().push(h);
        seen[1].entry(e.page_id.clone()).or_default().push(h);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 30.0, "took {secs:.1}s");
    Ok(format!(
        "10000 events, {checks} group snapshots match, {secs:.1}s"
    ))
}

fn variance_selector_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1_000 {
        let n = rng.random_range(2..300);
        let scale = 10f64.powi(rng.random_range(-3..4));
        let offset = rng.random_range(-1e3..1e3);
        let xs: Vec<f64> = (0..n)
            .map(|_| offset + scale * rng.random::<f64>())
            .collect();
        let mut rv = RunningVariance::default();
        xs.iter().for_each(|&x| rv.push(x));
        let mean = xs.iter().sum::<f64>() / n as f64;
        let batch = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        let rel = (rv.variance() - batch).abs() / batch.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        ensure!(
            rel_close(rv.variance(), batch, 1e-9),
            "variance {} vs batch {}",
            rv.variance(),
            batch
        );
    }
    let tenths: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    let fixtures: [(&[f64], f64); 4] = [
        (&tenths, 0.8),
        (&[3.0], 3.0),
        (&[15.0, 20.0, 35.0, 40.0, 50.0], 50.0),
        (
            &[
                1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 13.0, 14.0, 15.0,
                16.0, 17.0, 18.0, 19.0, 20.0,
            ],
            18.0,
        ),
    ];
    for (values, want) in fixtures {
        let got = nearest_rank_percentile(values, 90);
        ensure!(
            got == Some(want),
            "p90 of {values:?}: {got:?}, expected {want}"
        );
    }
    // Cold-start calibration: ten probe features whose variances are the
    // tenths {0.0, …, 0.9}. x ∈ {c−a, c+a} half the time each has variance a².
    let cold: Vec<FeatureVector> = (0..2)
        .map(|k| {
            (0..10)
                .map(|i| {
                    let a = (i as f64 / 10.0).sqrt();
                    (format!("f03.x{i}"), if k == 0 { 1.0 - a } else { 1.0 + a })
                })
                .collect()
        })
        .collect();
    let t = calibrate_threshold(&cold, &ProbeSet::All).map_err(|e| e.to_string())?;
    ensure!(rel_close(t, 0.8, 1e-12), "calibrated threshold {t}");
    Ok(format!(
        "1000 streams, worst relative error {worst:.1e}; thresholds reproduced"
    ))
}

/// Batch refit of Gaussian naive Bayes over `data`, with the streaming
/// model's conventions (population variance, skipped unseen features).
fn batch_gnb(data: &[(FeatureVector, Label)], x: &FeatureVector) -> Proba {
    let counts = [0, 1].map(|c| data.iter().filter(|(_, y)| y.index() == c).count());
    let total = counts[0] + counts[1];
    if total == 0 {
        return Proba::UNIFORM;
    }
    let mut scores: [Option<f64>; 2] =
        [0, 1].map(|c| (counts[c] > 0).then(|| (counts[c] as f64 / total as f64).ln()));
    for (id, v) in x.iter() {
        let cols: [Vec<f64>; 2] = [0, 1].map(|c| {
            data.iter()
                .filter(|(_, y)| y.index() == c)
                .filter_map(|(f, _)| f.get(id))
                .collect()
        });
        if cols.iter().all(Vec::is_empty) || (0..2).any(|c| counts[c] > 0 && cols[c].is_empty()) {
            continue;
        }
        for c in 0..2 {
            if let Some(s) = scores[c].as_mut() {
                let n = cols[c].len() as f64;
                let mean = cols[c].iter().sum::<f64>() / n;
                let var = cols[c].iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / n;
                *s += gaussian_log_pdf(v, mean, var);
            }
        }
    }
    normalize_log_scores(scores)
}

fn gnb_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise = Normal::new(0.0, 1.0).unwrap();
        let mut model = GaussianNb::new();
        let mut data: Vec<(FeatureVector, Label)> = Vec::new();
        for _ in 0..500 {
            let y = Label::from_index(rng.random_range(0..2));
            let mut x = FeatureVector::new();
            for j in 0..5 {
                let z = noise.sample(&mut rng) * (1.0 + j as f64) + y.sign() * j as f64;
                if rng.random::<f64>() < 0.85 {
                    x.insert(format!("f0{j}.x"), z);
                }
            }
            let got = model.predict_proba_one(&x);
            let want = batch_gnb(&data, &x);
            let diff = (got.0[0] - want.0[0])
                .abs()
                .max((got.0[1] - want.0[1]).abs());
            worst = worst.max(diff);
            ensure!(
                diff <= 1e-9,
                "seed {seed} prefix {}: {:?} vs {:?}",
                data.len(),
                got,
                want
            );
            model.learn_one(&x, y);
            data.push((x, y));
        }
    }
    Ok(format!(
        "5 streams x 500 prefixes, worst posterior difference {worst:.1e}"
    ))
}

fn alma_separability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let w = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()];
    let mut model = Alma::new(AlmaParams::best_known());
    let mut hits = Vec::new();
    while hits.len() < 500 {
        let x = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let m = w[0] * x[0] + w[1] * x[1];
        if m.abs() < 0.5 {
            continue;
        }
        let y = Label::from_index(usize::from(m > 0.0));
        let fv: FeatureVector = [("f01.x", x[0]), ("f01.y", x[1])].into_iter().collect();
        hits.push(model.predict_one(&fv) == y);
        model.learn_one(&fv, y);
    }
    let acc = hits[400..].iter().filter(|&&h| h).count() as f64 / 100.0;
    ensure!(acc >= 0.95, "final-100 accuracy {acc}");
    Ok(format!("final-100 accuracy {acc:.2}"))
}

fn planted(rng: &mut ChaCha8Rng, flipped: bool) -> (FeatureVector, Label) {
    let x: FeatureVector = ["f01.a", "f01.b", "f01.c", "f01.d"]
        .into_iter()
        .map(|k| (k, rng.random::<f64>()))
        .collect();
    let y = (x.get("f01.a").unwrap() > 0.5) != flipped;
    (x, Label::from_index(usize::from(y)))
}

fn hatc_drift_recovery() -> Outcome {
    let mut worst = 0;
    for seed in 0..3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = HoeffdingAdaptiveTree::new(HatcParams::default());
        let mut hits = Vec::new();
        let mut recovered = None;
        for i in 0..10_000 {
            let (x, y) = planted(&mut rng, i >= 5_000);
            hits.push(t.predict_one(&x) == y);
            t.learn_one(&x, y);
            if i >= 5_499 && recovered.is_none() {
                let acc = hits[i - 499..=i].iter().filter(|&&h| h).count() as f64 / 500.0;
                if acc >= 0.9 {
                    recovered = Some(i + 1 - 5_000);
                }
            }
        }
        let r = recovered.ok_or(format!("seed {seed}: never recovered"))?;
        ensure!(r <= 2_500, "seed {seed}: recovered after {r} samples");
        worst = worst.max(r);
    }
    Ok(format!(
        "rolling-500 accuracy >= 0.9 after at most {worst} post-drift samples"
    ))
}

fn arfc_degenerate_equivalence() -> Outcome {
    for seed in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        let params = HatcParams::best_known();
        let mut tree = HoeffdingAdaptiveTree::new(params);
        let mut forest = AdaptiveRandomForest::new(ArfcParams {
            models: 1,
            features: FeatureBudget::Count(100),
            lambda: None,
            seed,
            tree: params,
        });
        for i in 0..2_000 {
            let (x, y) = planted(&mut rng, i >= 1_000);
            ensure!(
                forest.predict_one(&x) == tree.predict_one(&x),
                "seed {seed}: sample {i} differs"
            );
            forest.learn_one(&x, y);
            tree.learn_one(&x, y);
        }
    }
    Ok("3 streams x 2000 samples, identical predictions".into())
}

struct EndToEnd {
    accuracy: f64,
    samples_per_second: f64,
    samples: usize,
    pipeline: Pipeline,
}

fn synthetic_run(seed: u64) -> Result<EndToEnd, String> {
    let events = generate(&SynthConfig::new(20_000, seed));
    let mut cfg = ScenarioConfig::new(Scenario::Balanced, 5_000);
    cfg.rng_seed = seed;
    let stream = build_scenario(events, &cfg).map_err(|e| e.to_string())?;
    let k = cold_start_len(stream.len(), 0.005);
    let pc = PipelineConfig::new(DatasetProfile::Wikivoyage, ModelKind::Arfc, seed);
    let (mut pipeline, _) =
        Pipeline::calibrate(TextAnalyzers::default_english(), &pc, &stream[..k])
            .map_err(|e| e.to_string())?;
    let run = run_prequential(
        &stream[k..],
        &mut pipeline,
        ModelKind::Arfc,
        &cfg,
        EvalOptions::default(),
        &Wall(Instant::now()),
    )
    .map_err(|e| e.to_string())?;
    Ok(EndToEnd {
        accuracy: run.final_metrics().accuracy,
        samples_per_second: run.samples_per_second(),
        samples: stream.len(),
        pipeline,
    })
}

fn synthetic_end_to_end(run: &EndToEnd) -> Outcome {
    ensure!(
        run.accuracy >= 0.85,
        "ARFC prequential accuracy {:.4} < 0.85",
        run.accuracy
    );
    Ok(format!(
        "ARFC prequential accuracy {:.4} over {} balanced samples",
        run.accuracy, run.samples
    ))
}

fn throughput(run: &EndToEnd) -> Outcome {
    let sps = run.samples_per_second;
    ensure!(
        sps >= 20.0,
        "{sps:.1} samples/s is below the 20 samples/s floor"
    );
    ensure!(
        sps >= 45.0,
        "{sps:.1} samples/s: above the floor, below the 45 samples/s target"
    );
    Ok(format!(
        "{sps:.1} samples/s (featurize + select + predict + learn, 75 trees)"
    ))
}

/// Counts learning calls per prediction index.
#[derive(Default)]
struct Recorder {
    predictions: usize,
    learned_at: Vec<usize>,
}

impl StreamLearner for Recorder {
    type Raw = ();
    type Sample = ();

    fn featurize(&mut self, _: &WikiEvent) -> Result<(), Error> {
        self.predictions += 1;
        Ok(())
    }

    fn select(&mut self, _: ()) {}

    fn predict(&self, _: &()) -> Proba {
        Proba::UNIFORM
    }

    fn learn(&mut self, _: &(), _: Label) {
        self.learned_at.push(self.predictions);
    }
}

fn scenario3_mechanics() -> Outcome {
    let events = generate(&SynthConfig::new(4_000, 8));
    let mut cfg = ScenarioConfig::new(Scenario::Delayed, 1_000);
    cfg.delay_n = 100;
    let stream = build_scenario(events, &cfg).map_err(|e| e.to_string())?;
    let stream = &stream[..1_950];
    let mut r = Recorder::default();
    let run = run_prequential(
        stream,
        &mut r,
        ModelKind::Gnb,
        &cfg,
        EvalOptions::default(),
        &Wall(Instant::now()),
    )
    .map_err(|e| e.to_string())?;
    ensure!(
        r.learned_at.iter().all(|&i| i % 100 == 0),
        "learning outside multiples of 100"
    );
    ensure!(
        r.learned_at.len() == 1_900,
        "trained on {} samples",
        r.learned_at.len()
    );
    let want: Vec<u64> = (1..=19).map(|k| k * 100).collect();
    ensure!(
        run.training_points == want,
        "training points {:?}",
        run.training_points
    );
    ensure!(run.untrained == 50, "untrained {}", run.untrained);
    Ok("19 bursts at prediction indices 100..1900, 50 samples pending".into())
}

fn metrics_oracle() -> Outcome {
    let events = generate(&SynthConfig::new(3_000, 12));
    let cfg = ScenarioConfig::new(Scenario::Balanced, 600);
    let stream = build_scenario(events, &cfg).map_err(|e| e.to_string())?;
    let pc = PipelineConfig::new(DatasetProfile::Wikivoyage, ModelKind::Gnb, 0);
    let (mut p, _) = Pipeline::calibrate(TextAnalyzers::default_english(), &pc, &stream[..6])
        .map_err(|e| e.to_string())?;
    let run = run_prequential(
        &stream[6..],
        &mut p,
        ModelKind::Gnb,
        &cfg,
        EvalOptions::default(),
        &Wall(Instant::now()),
    )
    .map_err(|e| e.to_string())?;
    let n = run.log.len();
    ensure!(
        run.curve.len() == n / 10,
        "{} snapshots for {n} samples",
        run.curve.len()
    );
    for (k, snap) in run.curve.iter().enumerate() {
        let idx = (k + 1) * 10;
        ensure!(
            snap.sample_index == idx as u64,
            "snapshot {k} at {}",
            snap.sample_index
        );
        let mut want = compute_metrics(&run.log[..idx]);
        want.seconds = snap.seconds;
        ensure!(
            *snap == want,
            "snapshot at {idx} differs from recomputation"
        );
        let secs: f64 = run.log[..idx].iter().map(|r| r.latency_secs).sum();
        ensure!(rel_close(snap.seconds, secs, 1e-9), "seconds at {idx}");
    }
    Ok(format!(
        "{} snapshots at a 10-sample cadence equal the recomputation",
        run.curve.len()
    ))
}

fn explanation_consistency(pipeline: &mut Pipeline) -> Outcome {
    let mut cfg = SynthConfig::new(1_000, 77);
    cfg.start = Timestamp(1_700_000_000_000);
    let mut retained_total = 0usize;
    for e in generate(&cfg) {
        let out = pipeline.process(&e).map_err(|e| e.to_string())?;
        let (x, _) = pipeline.explain(&e.event_id, &e.content, &out.selected, None);
        ensure!(x.total_trees == 75, "{} trees", x.total_trees);
        ensure!(
            x.confidence == out.proba.confidence(),
            "{}: confidence differs from the model",
            e.event_id
        );
        ensure!(
            x.predicted == out.proba.argmax(),
            "{}: predicted class differs",
            e.event_id
        );
        ensure!(
            x.paths.len() as f64 / x.total_trees as f64 == x.confidence,
            "{}: {} of {} retained, confidence {}",
            e.event_id,
            x.paths.len(),
            x.total_trees,
            x.confidence
        );
        ensure!(
            x.paths.iter().all(|p| p.prediction == x.predicted),
            "{}: minority path retained",
            e.event_id
        );
        retained_total += x.paths.len();
    }
    Ok(format!(
        "1000 predictions, vote share exact, mean {:.1} paths retained",
        retained_total as f64 / 1000.0
    ))
}

fn feedback_loop() -> Outcome {
    let pc = PipelineConfig::new(DatasetProfile::Wikivoyage, ModelKind::Gnb, 0);
    let pipeline = Pipeline::with_defaults(TextAnalyzers::default_english(), &pc)
        .map_err(|e| e.to_string())?;
    let mut s = LiveSession::new(pipeline);
    let mut events = generate(&SynthConfig::new(400, 15));
    for e in &mut events[300..] {
        e.label = None;
    }
    for e in &events {
        s.ingest(e.clone(), e.timestamp)
            .map_err(|e| e.to_string())?;
    }
    let trained = |s: &LiveSession| match s.pipeline().model() {
        OnlineModel::Gnb(m) => m.class_counts().iter().sum::<u64>(),
        _ => 0,
    };
    let mut shifts = 0;
    let mut applied = 0;
    for e in &events[300..340] {
        let c = s.contribution(&e.event_id).ok_or("missing contribution")?;
        let probe = c.selected.clone();
        let expert = c.predicted.opposite();
        let before = s.pipeline().predict(&probe).of(expert);
        let n0 = trained(&s);
        s.submit_feedback(&e.event_id, expert, Timestamp(0))
            .map_err(|e| e.to_string())?;
        applied += 1;
        ensure!(
            trained(&s) == n0 + 1,
            "feedback trained {} times",
            trained(&s) - n0
        );
        let after = s.pipeline().predict(&probe).of(expert);
        ensure!(
            after >= before,
            "{}: posterior of expert label fell {before} -> {after}",
            e.event_id
        );
        shifts += usize::from(after > before);
        let model = format!("{:?}", s.pipeline().model());
        let dup = s.submit_feedback(&e.event_id, expert, Timestamp(1));
        ensure!(
            matches!(dup, Err(Error::Conflict(_))),
            "duplicate accepted: {dup:?}"
        );
        ensure!(
            format!("{:?}", s.pipeline().model()) == model,
            "duplicate changed the model"
        );
    }
    ensure!(
        shifts >= 30,
        "posterior moved toward the expert label on only {shifts}/40 probes"
    );
    let missing = s.submit_feedback("no-such-event", Label::Disinformation, Timestamp(0));
    ensure!(
        matches!(missing, Err(Error::NotFound(_))),
        "unknown event: {missing:?}"
    );
    let ledger = s.feedback_ledger();
    ensure!(
        ledger.applied_count() == applied && ledger.len() == applied,
        "ledger {} / {applied}",
        ledger.applied_count()
    );
    Ok(format!("posterior moved toward the expert label on {shifts}/40 probes; duplicates rejected; {applied} applied"))
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |name: &str, outcome: Outcome| match &outcome {
        Ok(detail) => println!("PASS  {name}: {detail}"),
        Err(why) => {
            failures += 1;
            println!("FAIL  {name}: {why}");
        }
    };
    report("accumulator oracle", accumulator_oracle());
    report("variance-selector oracle", variance_selector_oracle());
    report("GNB batch equivalence", gnb_equivalence());
    report("ALMA separability", alma_separability());
    report("HATC drift recovery", hatc_drift_recovery());
    report("ARFC degenerate equivalence", arfc_degenerate_equivalence());
    match synthetic_run(7) {
        Ok(mut run) => {
            report("synthetic end-to-end", synthetic_end_to_end(&run));
            report("scenario-3 mechanics", scenario3_mechanics());
            report("throughput", throughput(&run));
            report("metrics oracle", metrics_oracle());
            report(
                "explanation consistency",
                explanation_consistency(&mut run.pipeline),
            );
        }
        Err(e) => {
            report("synthetic end-to-end", Err(e.clone()));
            report("scenario-3 mechanics", scenario3_mechanics());
            report("throughput", Err(e.clone()));
            report("metrics oracle", metrics_oracle());
            report("explanation consistency", Err(e));
        }
    }
    report("feedback loop", feedback_loop());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
