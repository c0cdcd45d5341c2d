//! Execution-path decoding: smooth, label frames, then run the action grammars
//! in priority order, blanking out every matched span before the next search.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::grammar::{self, Match, Pattern};
use crate::score_model::{argmax_decode, ScoreSeries, SymbolString, UiClass};
use crate::smoothing;

/// A user execution path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExecutionPath {
    /// Font set through the Font window alone.
    Alpha,
    /// Font window followed by the Default Font window.
    Beta,
    /// Columns chosen from the dropdown.
    Gamma,
    /// Columns dropdown followed by the Columns window.
    Delta,
    /// Page Number dropdown.
    Epsilon,
}

impl ExecutionPath {
    pub const ALL: [ExecutionPath; 5] = [
        ExecutionPath::Alpha,
        ExecutionPath::Beta,
        ExecutionPath::Gamma,
        ExecutionPath::Delta,
        ExecutionPath::Epsilon,
    ];

    /// ASCII name used in every file format.
    pub fn name(self) -> &'static str {
        match self {
            ExecutionPath::Alpha => "alpha",
            ExecutionPath::Beta => "beta",
            ExecutionPath::Gamma => "gamma",
            ExecutionPath::Delta => "delta",
            ExecutionPath::Epsilon => "epsilon",
        }
    }

    pub fn glyph(self) -> char {
        match self {
            ExecutionPath::Alpha => 'α',
            ExecutionPath::Beta => 'β',
            ExecutionPath::Gamma => 'γ',
            ExecutionPath::Delta => 'δ',
            ExecutionPath::Epsilon => 'ε',
        }
    }

    /// The class whose evidence points at this path.
    pub fn related_class(self) -> UiClass {
        match self {
            ExecutionPath::Alpha => UiClass::FontWindow,
            ExecutionPath::Beta => UiClass::DefaultFontWindow,
            ExecutionPath::Gamma => UiClass::ColumnDropdown,
            ExecutionPath::Delta => UiClass::ColumnWindow,
            ExecutionPath::Epsilon => UiClass::PageNumber,
        }
    }

    /// Inverse of [`related_class`](Self::related_class); background maps to no path.
    pub fn for_class(class: UiClass) -> Option<ExecutionPath> {
        Self::ALL.into_iter().find(|p| p.related_class() == class)
    }
}

impl fmt::Display for ExecutionPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExecutionPath {
    type Err = Error;

    /// Accepts ASCII names (any case) and the Greek glyphs.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        ExecutionPath::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s) || s.chars().eq([p.glyph()]))
            .ok_or_else(|| Error::UnknownPath(s.to_string()))
    }
}

impl Serialize for ExecutionPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ExecutionPath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A grammar bound to a path. `template` uses `r` for the one-second frame count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionGrammar {
    pub path: ExecutionPath,
    pub template: String,
    /// Lower searches earlier.
    pub priority: u32,
}

impl ActionGrammar {
    pub fn new(path: ExecutionPath, template: &str, priority: u32) -> Self {
        ActionGrammar {
            path,
            template: template.to_string(),
            priority,
        }
    }

    /// Compiles the template with `r` substituted.
    pub fn pattern(&self, rate: usize) -> Result<Pattern> {
        grammar::compile(&self.template.replace('r', &rate.to_string()))
    }

    /// The five standard grammars. Compound paths come before the path they
    /// extend, so the Default Font dialog is claimed before a bare Font window
    /// and the Columns window before a bare dropdown.
    pub fn standard() -> Vec<ActionGrammar> {
        vec![
            ActionGrammar::new(ExecutionPath::Beta, "f{r,}F{r,}f{0,r}", 0),
            ActionGrammar::new(ExecutionPath::Alpha, "f{r,}", 1),
            ActionGrammar::new(ExecutionPath::Delta, "c{r,}[^cC]{0,r}C{r,}", 2),
            ActionGrammar::new(ExecutionPath::Gamma, "c{r,}", 3),
            ActionGrammar::new(ExecutionPath::Epsilon, "p{r,}", 4),
        ]
    }
}

/// One grammar hit inside a clip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrammarHit {
    pub path: ExecutionPath,
    pub span: Match,
    pub confidence: f64,
}

/// The predicted execution path of a clip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathPrediction {
    pub video_id: String,
    pub path: ExecutionPath,
    pub confidence: f64,
    /// `None` when the prediction came from the fallback rule.
    #[serde(rename = "match", with = "span_serde")]
    pub span: Option<Match>,
}

mod span_serde {
    use super::Match;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(span: &Option<Match>, s: S) -> Result<S::Ok, S::Error> {
        span.map(|m| [m.start, m.end]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Match>, D::Error> {
        let pair = Option::<[usize; 2]>::deserialize(d)?;
        match pair {
            Some([start, end]) if start < end => Ok(Some(Match { start, end })),
            Some(_) => Err(serde::de::Error::custom("match must satisfy start < end")),
            None => Ok(None),
        }
    }
}

/// Everything the decoder saw while deciding on a clip.
#[derive(Debug, Clone)]
pub struct DecodeTrace {
    pub smoothed: ScoreSeries,
    /// Labels before any removal.
    pub symbols: SymbolString,
    /// Hits in search order.
    pub hits: Vec<GrammarHit>,
    pub prediction: PathPrediction,
}

/// Decoder configuration.
#[derive(Debug, Clone)]
pub struct Decoder {
    grammars: Vec<ActionGrammar>,
    window_seconds: f64,
}

impl Default for Decoder {
    fn default() -> Self {
        Decoder {
            grammars: ActionGrammar::standard(),
            window_seconds: 1.0,
        }
    }
}

impl Decoder {
    /// Grammars are searched by ascending priority; equal priorities keep the given order.
    pub fn with_grammars(mut grammars: Vec<ActionGrammar>) -> Self {
        grammars.sort_by_key(|g| g.priority);
        Decoder {
            grammars,
            ..Decoder::default()
        }
    }

    pub fn window_seconds(mut self, window_seconds: f64) -> Self {
        self.window_seconds = window_seconds;
        self
    }

    pub fn grammars(&self) -> &[ActionGrammar] {
        &self.grammars
    }

    pub fn decode(&self, series: &ScoreSeries) -> Result<PathPrediction> {
        self.trace(series).map(|t| t.prediction)
    }

    pub fn trace(&self, series: &ScoreSeries) -> Result<DecodeTrace> {
        if series.is_empty() {
            return Err(Error::EmptySeries);
        }
        let smoothed = smoothing::smooth(series, self.window_seconds)?;
        let symbols = argmax_decode(&smoothed);
        let rate = series.rate();

        let mut remaining = symbols.clone();
        let mut hits = Vec::new();
        for grammar in &self.grammars {
            let pattern = grammar.pattern(rate)?;
            let mut from = 0;
            while let Some(span) = pattern.find_leftmost(&remaining, from) {
                hits.push(GrammarHit {
                    path: grammar.path,
                    span,
                    confidence: span_confidence(&smoothed, &symbols, span),
                });
                grammar::remove_in_place(&mut remaining, span)?;
                from = span.end;
            }
        }

        // Highest confidence wins; ties go to the earlier span so the result does
        // not depend on grammar order.
        let best = hits.iter().reduce(|best, hit| {
            if hit.confidence > best.confidence
                || (hit.confidence == best.confidence && hit.span.start < best.span.start)
            {
                hit
            } else {
                best
            }
        });
        let prediction = match best {
            Some(hit) => PathPrediction {
                video_id: series.video_id().to_string(),
                path: hit.path,
                confidence: hit.confidence,
                span: Some(hit.span),
            },
            None => fallback_from_smoothed(&smoothed),
        };
        Ok(DecodeTrace {
            smoothed,
            symbols,
            hits,
            prediction,
        })
    }
}

/// Decodes one clip with the standard grammars and a one-second window.
pub fn decode_clip(series: &ScoreSeries) -> Result<PathPrediction> {
    Decoder::default().decode(series)
}

/// Mean smoothed score of each frame's decoded class over the span.
fn span_confidence(smoothed: &ScoreSeries, symbols: &SymbolString, span: Match) -> f64 {
    let frames = &smoothed.frames()[span.start..span.end];
    let labels = &symbols.symbols()[span.start..span.end];
    let total: f64 = frames
        .iter()
        .zip(labels)
        .map(|(frame, label)| label.class().map_or(0.0, |c| frame.get(c)))
        .sum();
    (total / span.len() as f64).clamp(0.0, 1.0)
}

/// Maps the strongest non-background (frame, class) score to its path.
///
/// Runs on the one-second smoothed series, like the grammar search. Ties keep
/// the earliest frame and then the lowest class index.
pub fn fallback_path(series: &ScoreSeries) -> Result<PathPrediction> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    Ok(fallback_from_smoothed(&smoothing::smooth(series, 1.0)?))
}

fn fallback_from_smoothed(smoothed: &ScoreSeries) -> PathPrediction {
    let mut best = (UiClass::FontWindow, f64::NEG_INFINITY);
    for frame in smoothed.frames() {
        for class in &UiClass::ALL[1..] {
            let score = frame.get(*class);
            if score > best.1 {
                best = (*class, score);
            }
        }
    }
    PathPrediction {
        video_id: smoothed.video_id().to_string(),
        path: ExecutionPath::for_class(best.0).expect("non-background class"),
        confidence: best.1,
        span: None,
    }
}

/// Writes one JSON object per line.
pub fn write_predictions_jsonl(predictions: &[PathPrediction]) -> String {
    predictions
        .iter()
        .map(|p| serde_json::to_string(p).expect("prediction serialization cannot fail") + "\n")
        .collect()
}

/// Reads prediction JSON lines; blank lines are skipped.
pub fn read_predictions_jsonl(text: &str) -> Result<Vec<PathPrediction>> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|source| Error::JsonLine { line: i + 1, source })
        })
        .collect()
}
