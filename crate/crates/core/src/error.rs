use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed score file: {0}")]
    ScoreFileSyntax(#[from] serde_json::Error),

    #[error("class header must be [\"b\",\"f\",\"F\",\"c\",\"C\",\"p\"], found {found:?}")]
    ClassOrdering { found: Vec<String> },

    #[error("fps must be positive and finite, got {0}")]
    InvalidFps(f64),

    #[error("row {row} has {len} entries, expected 6")]
    RowLength { row: usize, len: usize },

    #[error("row {row} entry {class} is {value}, outside [0, 1]")]
    ScoreOutOfRange { row: usize, class: usize, value: f64 },

    #[error("row {row} sums to {sum}")]
    RowSum { row: usize, sum: f64 },

    #[error("score series is empty")]
    EmptySeries,

    #[error("frame {index} is {found_w}x{found_h}, expected {expected_w}x{expected_h}")]
    DimensionMismatch {
        index: usize,
        expected_w: usize,
        expected_h: usize,
        found_w: usize,
        found_h: usize,
    },

    #[error("frame has {found} pixels, expected {expected}")]
    PixelCount { expected: usize, found: usize },

    #[error("no frames given")]
    NoFrames,

    #[error("threshold {0} outside [0, 1]")]
    InvalidThreshold(f64),

    #[error("malformed PGM stream at byte {offset}: {reason}")]
    Pgm { offset: usize, reason: String },

    #[error("window must be positive and finite, got {0}")]
    InvalidWindow(f64),

    #[error("pattern error at position {pos}: {reason}")]
    Pattern { pos: usize, reason: String },

    #[error("match [{start}, {end}) invalid for string of length {len}")]
    MatchOutOfRange { start: usize, end: usize, len: usize },

    #[error("unknown execution path {0:?}")]
    UnknownPath(String),

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("positives_total must be positive")]
    NoPositives,

    #[error("{correct} correct entries exceed positives_total {positives}")]
    TooManyHits { correct: usize, positives: usize },

    #[error("no classes to average")]
    NoClasses,

    #[error("video {0:?} has no metadata")]
    UnknownVideo(String),

    #[error("duplicate video id {0:?}")]
    DuplicateVideo(String),

    #[error("video {0:?} is missing a prediction")]
    MissingPrediction(String),

    #[error("rating {rating} for video {video_id:?} outside [0, 1]")]
    InvalidRating { video_id: String, rating: f64 },

    #[error("total popularity weight is zero under scheme {0}")]
    ZeroTotalWeight(&'static str),

    #[error("unknown weighting scheme {0:?}")]
    UnknownScheme(String),

    #[error("{frames} frames cannot hold path {path} at r = {r} (need at least {needed})")]
    ClipTooShort {
        path: &'static str,
        frames: usize,
        r: usize,
        needed: usize,
    },

    #[error("noise must lie in [0, 0.5), got {0}")]
    InvalidNoise(f64),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("line {line}: {source}")]
    JsonLine {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}
