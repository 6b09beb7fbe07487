use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wikistream::error::{Error, Result};
use wikistream::service::ServiceConfig;
use wikistream::{export, jsonl, llm, WallClock};
use wikistream_core::eval::{run_prequential, EvalOptions};
use wikistream_core::event::order_stream;
use wikistream_core::features::DatasetProfile;
use wikistream_core::models::{HyperparameterGrid, ModelKind};
use wikistream_core::pipeline::{cold_start_len, Pipeline, PipelineConfig};
use wikistream_core::scenario::{
    build_scenario, class_counts, Scenario, ScenarioConfig, DEFAULT_DELAY,
};
use wikistream_core::selection::DEFAULT_COLD_START_FRACTION;
use wikistream_core::synth::{generate, SynthConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Gnb,
    Alma,
    Hatc,
    Arfc,
}

impl From<Model> for ModelKind {
    fn from(m: Model) -> Self {
        match m {
            Model::Gnb => ModelKind::Gnb,
            Model::Alma => ModelKind::Alma,
            Model::Hatc => ModelKind::Hatc,
            Model::Arfc => ModelKind::Arfc,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Profile {
    Wikivoyage,
    Wikipedia,
}

impl From<Profile> for DatasetProfile {
    fn from(p: Profile) -> Self {
        match p {
            Profile::Wikivoyage => DatasetProfile::Wikivoyage,
            Profile::Wikipedia => DatasetProfile::Wikipedia,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "wikistream",
    version,
    about = "Stream-based disinformation detection for wiki revisions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a planted-signal synthetic event stream as JSONL.
    Synth {
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "wikivoyage")]
        profile: Profile,
        #[arg(long)]
        out: PathBuf,
    },
    /// Prequential evaluation of one model under one stream scenario.
    Evaluate {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        scenario: u8,
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_COLD_START_FRACTION)]
        cold_start: f64,
        #[arg(long, default_value_t = DEFAULT_DELAY)]
        delay: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples per class; defaults to the minority class size.
        #[arg(long)]
        samples: Option<usize>,
        /// Search the hyperparameter grid on the cold start instead of
        /// using the best known values.
        #[arg(long)]
        grid: bool,
        #[arg(long, value_enum, default_value = "wikivoyage")]
        profile: Profile,
        /// Directory with lexicon overrides.
        #[arg(long)]
        resources: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run events through a live session offline and print one prediction
    /// per line, as the service would answer them.
    Replay {
        #[arg(long, value_enum, default_value = "arfc")]
        model: Model,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "wikivoyage")]
        profile: Profile,
        #[arg(long)]
        resources: Option<PathBuf>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, value_enum, default_value = "arfc")]
        model: Model,
        /// Persistence directory.
        #[arg(long)]
        state: Option<PathBuf>,
        /// JSONL events to replay before serving.
        #[arg(long)]
        replay: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "wikivoyage")]
        profile: Profile,
        #[arg(long)]
        resources: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        checkpoint_every: u64,
    },
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn analyzers(resources: &Option<PathBuf>) -> Result<wikistream_core::text::TextAnalyzers> {
    match resources {
        Some(dir) => wikistream::resources::load_analyzers(dir),
        None => Ok(wikistream_core::text::TextAnalyzers::default_english()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth {
            n,
            seed,
            profile,
            out,
        } => {
            let mut cfg = SynthConfig::new(n, seed);
            cfg.profile = profile.into();
            jsonl::write_events(create(&out)?, &generate(&cfg))?;
            tracing::info!(n, path = %out.display(), "wrote synthetic events");
        }
        Command::Evaluate {
            scenario,
            model,
            input,
            cold_start,
            delay,
            seed,
            samples,
            grid,
            profile,
            resources,
            out,
        } => {
            let events = order_stream(jsonl::read_events_file(&input)?);
            let counts = class_counts(&events)?;
            let mut cfg = ScenarioConfig::new(
                Scenario::from_number(scenario)?,
                samples.unwrap_or(counts[0].min(counts[1])),
            );
            cfg.delay_n = delay;
            cfg.rng_seed = seed;
            let stream = build_scenario(events, &cfg)?;
            let k = cold_start_len(stream.len(), cold_start);
            let kind = ModelKind::from(model);
            let mut pc = PipelineConfig::new(profile.into(), kind, seed);
            pc.cold_start_fraction = cold_start;
            if grid {
                pc.grid = Some(HyperparameterGrid::default());
            }
            let (mut pipeline, report) =
                Pipeline::calibrate(analyzers(&resources)?, &pc, &stream[..k])?;
            tracing::info!(
                cold_start = k,
                threshold = report.threshold,
                ngram_cap = report.ngram_cap,
                "calibrated"
            );
            let evaluated = &stream[k..];
            let run = run_prequential(
                evaluated,
                &mut pipeline,
                kind,
                &cfg,
                EvalOptions::default(),
                &WallClock::start(),
            )?;
            export::write_run(&out, &run, &report, &pipeline)?;
            let m = run.final_metrics();
            println!(
                "{} scenario {} samples {} accuracy {:.4} macro-f1 {:.4} samples/s {:.1}",
                kind.as_str(),
                scenario,
                run.log.len(),
                m.accuracy,
                m.macro_avg.f1,
                run.samples_per_second()
            );
        }
        Command::Replay {
            model,
            input,
            seed,
            profile,
            resources,
            out,
        } => {
            let mut cfg = ServiceConfig::new(model.into());
            cfg.seed = seed;
            cfg.profile = profile.into();
            cfg.resources = resources;
            let events = jsonl::read_events_file(&input)?;
            let predictions = wikistream::service::replay(&cfg, events)?;
            let mut w: Box<dyn Write> = match &out {
                Some(p) => Box::new(create(p)?),
                None => Box::new(std::io::stdout().lock()),
            };
            for p in &predictions {
                serde_json::to_writer(&mut w, p)?;
                writeln!(w).map_err(|e| Error::io("<replay>", e))?;
            }
            w.flush().map_err(|e| Error::io("<replay>", e))?;
        }
        Command::Serve {
            port,
            model,
            state,
            replay,
            seed,
            profile,
            resources,
            checkpoint_every,
        } => {
            let mut cfg = ServiceConfig::new(model.into());
            cfg.port = port;
            cfg.state_dir = state;
            cfg.replay = replay;
            cfg.seed = seed;
            cfg.profile = profile.into();
            cfg.resources = resources;
            cfg.checkpoint_every = checkpoint_every;
            let generator = llm::from_env()?;
            if generator.is_none() {
                tracing::info!("LLM_ENDPOINT unset; explanations use the template text");
            }
            let rt = tokio::runtime::Runtime::new().map_err(|e| Error::io("<runtime>", e))?;
            rt.block_on(wikistream::service::serve(cfg, generator))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new("info")),
        )
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
