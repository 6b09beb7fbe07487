//! Std companion of `wikistream-core`: JSONL fixtures, lexicon loading,
//! exports, the LLM client, persistence and the HTTP service.

pub mod error;
pub mod export;
pub mod jsonl;
pub mod llm;
pub mod resources;
pub mod service;
pub mod store;

pub use error::{Error, Result};

/// Current wall-clock time.
pub fn now() -> wikistream_core::Timestamp {
    wikistream_core::Timestamp(chrono::Utc::now().timestamp_millis())
}

/// Seconds since construction; the clock used for evaluation timings.
#[derive(Debug, Clone, Copy)]
pub struct WallClock(std::time::Instant);

impl WallClock {
    pub fn start() -> Self {
        WallClock(std::time::Instant::now())
    }
}

impl wikistream_core::eval::Clock for WallClock {
    fn now(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}
