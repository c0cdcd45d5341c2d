//! Class alphabet, per-frame score vectors and the score-file format.
//!
//! A score file is the JSON document
//!
//! ```json
//! {"video_id": "clip-7", "fps": 2.0, "classes": ["b","f","F","c","C","p"], "scores": [[1,0,0,0,0,0]]}
//! ```
//!
//! The `classes` header is mandatory and must list the six classes in the
//! canonical order; every other ordering is rejected rather than remapped.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum allowed distance of a row sum from 1.
pub const SIMPLEX_TOLERANCE: f64 = 1e-6;

/// Number of UI classes.
pub const NUM_CLASSES: usize = 6;

/// One of the six UI states a frame can show.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UiClass {
    /// `b`: anything that is not one of the tracked dialogs.
    Background,
    /// `f`: the Font window.
    FontWindow,
    /// `F`: the Default Font confirmation window.
    DefaultFontWindow,
    /// `c`: the Columns dropdown.
    ColumnDropdown,
    /// `C`: the Columns window.
    ColumnWindow,
    /// `p`: the Page Number dropdown.
    PageNumber,
}

impl UiClass {
    /// All classes in score-vector order.
    pub const ALL: [UiClass; NUM_CLASSES] = [
        UiClass::Background,
        UiClass::FontWindow,
        UiClass::DefaultFontWindow,
        UiClass::ColumnDropdown,
        UiClass::ColumnWindow,
        UiClass::PageNumber,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<UiClass> {
        Self::ALL.get(index).copied()
    }

    pub fn symbol(self) -> char {
        match self {
            UiClass::Background => 'b',
            UiClass::FontWindow => 'f',
            UiClass::DefaultFontWindow => 'F',
            UiClass::ColumnDropdown => 'c',
            UiClass::ColumnWindow => 'C',
            UiClass::PageNumber => 'p',
        }
    }

    pub fn from_symbol(c: char) -> Option<UiClass> {
        Self::ALL.into_iter().find(|class| class.symbol() == c)
    }
}

impl fmt::Display for UiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A softmax confidence vector over the six classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreVector([f64; NUM_CLASSES]);

impl ScoreVector {
    /// Validates range and simplex constraints. `row` is only used for error reporting.
    pub fn new(scores: [f64; NUM_CLASSES], row: usize) -> Result<Self> {
        for (class, &value) in scores.iter().enumerate() {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(Error::ScoreOutOfRange { row, class, value });
            }
        }
        let sum: f64 = scores.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOLERANCE {
            return Err(Error::RowSum { row, sum });
        }
        Ok(ScoreVector(scores))
    }

    /// A row with `1 - eps` on `class` and `eps` spread evenly over the rest.
    pub fn peaked(class: UiClass, eps: f64) -> Self {
        let mut scores = [eps / (NUM_CLASSES - 1) as f64; NUM_CLASSES];
        scores[class.index()] = 1.0 - eps;
        ScoreVector(scores)
    }

    pub fn one_hot(class: UiClass) -> Self {
        let mut scores = [0.0; NUM_CLASSES];
        scores[class.index()] = 1.0;
        ScoreVector(scores)
    }

    /// Caller guarantees the simplex invariant (e.g. averages of valid rows).
    pub(crate) fn from_raw(scores: [f64; NUM_CLASSES]) -> Self {
        ScoreVector(scores)
    }

    pub fn scores(&self) -> &[f64; NUM_CLASSES] {
        &self.0
    }

    pub fn get(&self, class: UiClass) -> f64 {
        self.0[class.index()]
    }

    /// Class with the largest score; ties go to the lowest index.
    pub fn argmax(&self) -> UiClass {
        let mut best = 0;
        for k in 1..NUM_CLASSES {
            if self.0[k] > self.0[best] {
                best = k;
            }
        }
        UiClass::ALL[best]
    }
}

/// Per-frame scores of one video clip.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreSeries {
    video_id: String,
    fps: f64,
    frames: Vec<ScoreVector>,
}

impl ScoreSeries {
    pub fn new(video_id: impl Into<String>, fps: f64, frames: Vec<ScoreVector>) -> Result<Self> {
        if !fps.is_finite() || fps <= 0.0 {
            return Err(Error::InvalidFps(fps));
        }
        Ok(ScoreSeries {
            video_id: video_id.into(),
            fps,
            frames,
        })
    }

    pub fn video_id(&self) -> &str {
        &self.video_id
    }

    pub fn fps(&self) -> f64 {
        self.fps
    }

    pub fn frames(&self) -> &[ScoreVector] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Frames per second rounded to an integer, clamped to at least one.
    /// Grammars use this as their one-second quantum.
    pub fn rate(&self) -> usize {
        (self.fps.round() as usize).max(1)
    }

    pub(crate) fn with_frames(&self, frames: Vec<ScoreVector>) -> ScoreSeries {
        ScoreSeries {
            video_id: self.video_id.clone(),
            fps: self.fps,
            frames,
        }
    }

    pub fn to_json(&self) -> String {
        let file = ScoreFile {
            video_id: self.video_id.clone(),
            fps: self.fps,
            classes: UiClass::ALL.iter().map(|c| c.symbol().to_string()).collect(),
            scores: self.frames.iter().map(|f| f.0.to_vec()).collect(),
        };
        serde_json::to_string(&file).expect("score file serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct ScoreFile {
    video_id: String,
    fps: f64,
    classes: Vec<String>,
    scores: Vec<Vec<f64>>,
}

/// Parses and validates a score file.
pub fn parse_score_file(bytes: &[u8]) -> Result<ScoreSeries> {
    let file: ScoreFile = serde_json::from_slice(bytes)?;
    if !file.fps.is_finite() || file.fps <= 0.0 {
        return Err(Error::InvalidFps(file.fps));
    }
    let canonical = UiClass::ALL.iter().map(|c| c.symbol().to_string());
    if file.classes.len() != NUM_CLASSES || !canonical.eq(file.classes.iter().cloned()) {
        return Err(Error::ClassOrdering { found: file.classes });
    }
    let frames = file
        .scores
        .iter()
        .enumerate()
        .map(|(row, values)| {
            let scores: [f64; NUM_CLASSES] = values.as_slice().try_into().map_err(|_| {
                Error::RowLength {
                    row,
                    len: values.len(),
                }
            })?;
            ScoreVector::new(scores, row)
        })
        .collect::<Result<Vec<_>>>()?;
    ScoreSeries::new(file.video_id, file.fps, frames)
}

/// A frame label: a class, or the sentinel left behind by match removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Class(UiClass),
    Removed,
}

impl Symbol {
    pub const REMOVED_CHAR: char = '·';

    pub fn class(self) -> Option<UiClass> {
        match self {
            Symbol::Class(c) => Some(c),
            Symbol::Removed => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Symbol::Class(c) => c.symbol(),
            Symbol::Removed => Self::REMOVED_CHAR,
        }
    }
}

/// Decoded per-frame labels, index-aligned with the source series.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolString(Vec<Symbol>);

impl SymbolString {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        SymbolString(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub(crate) fn symbols_mut(&mut self) -> &mut [Symbol] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::str::FromStr for SymbolString {
    type Err = Error;

    /// Accepts class symbols and `·` for removed frames.
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                Symbol::REMOVED_CHAR => Ok(Symbol::Removed),
                c => UiClass::from_symbol(c)
                    .map(Symbol::Class)
                    .ok_or_else(|| Error::UnknownLabel(c.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(SymbolString)
    }
}

impl fmt::Display for SymbolString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.to_char()))
    }
}

/// Labels every frame with its highest-scoring class.
pub fn argmax_decode(series: &ScoreSeries) -> SymbolString {
    SymbolString(
        series
            .frames
            .iter()
            .map(|frame| Symbol::Class(frame.argmax()))
            .collect(),
    )
}
