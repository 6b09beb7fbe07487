//! Streaming disinformation detection over wiki revision events.
//!
//! The crate is `no_std` (with `alloc`) and holds every algorithmic piece of
//! the pipeline: event validation and stream scenarios, text and historical
//! feature engineering, online variance-threshold feature selection, four
//! incremental classifiers, prequential evaluation and prediction
//! explanations. File formats, HTTP and the command line live in the
//! `wikistream` companion crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod eval;
pub mod event;
pub mod explain;
pub mod features;
pub mod history;
pub(crate) mod math;
pub mod models;
pub mod pipeline;
pub mod scenario;
pub mod selection;
pub mod session;
pub mod synth;
pub mod text;

pub use error::{Error, Result};
pub use event::{Timestamp, WikiEvent};
pub use features::FeatureVector;
pub use models::{Label, Proba};
