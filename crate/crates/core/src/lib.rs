//! Usage profiles from software tutorial videos.
//!
//! The pipeline takes per-frame UI classifier confidences ([`score_model`]),
//! smooths them over one second ([`smoothing`]), labels each frame and
//! localizes user actions with small regular grammars ([`grammar`],
//! [`decoder`]), and aggregates the recognized execution paths into a
//! popularity-weighted [`profile::UsageProfile`]. [`metrics`] holds the
//! evaluation harness and [`synth`] generates clips with known paths.

pub mod decoder;
pub mod error;
pub mod grammar;
pub mod metrics;
pub mod parallel;
pub mod profile;
pub mod saliency;
pub mod score_model;
pub mod smoothing;
pub mod synth;

pub use decoder::{decode_clip, fallback_path, Decoder, ExecutionPath, PathPrediction};
pub use error::{Error, Result};
pub use grammar::{compile, Match, Pattern};
pub use parallel::Execution;
pub use score_model::{argmax_decode, parse_score_file, ScoreSeries, ScoreVector, SymbolString, UiClass};

/// Decodes many clips, keeping input order.
pub fn decode_batch(series: &[ScoreSeries], decoder: &Decoder, exec: Execution) -> Vec<Result<PathPrediction>> {
    parallel::map(series, exec, |s| decoder.decode(s))
}
