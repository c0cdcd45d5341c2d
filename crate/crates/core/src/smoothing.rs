//! Moving-average smoothing of score series.

use crate::error::{Error, Result};
use crate::score_model::{ScoreSeries, ScoreVector, NUM_CLASSES};

/// Odd window width in frames for `window_seconds` at `fps`.
pub fn window_frames(fps: f64, window_seconds: f64) -> usize {
    let w = ((fps * window_seconds).round() as usize).max(1);
    if w.is_multiple_of(2) {
        w + 1
    } else {
        w
    }
}

/// Centered moving average with windows truncated at the clip edges.
///
/// Each output row is the mean over the frames that actually fall inside the
/// window, so rows near the boundaries average fewer frames.
pub fn smooth(series: &ScoreSeries, window_seconds: f64) -> Result<ScoreSeries> {
    if !window_seconds.is_finite() || window_seconds <= 0.0 {
        return Err(Error::InvalidWindow(window_seconds));
    }
    let w = window_frames(series.fps(), window_seconds);
    let frames = series.frames();
    let n = frames.len();
    if w == 1 {
        return Ok(series.clone());
    }
    let half = (w - 1) / 2;

    // prefix[i] holds the column sums of frames[..i]
    let mut prefix = vec![[0.0f64; NUM_CLASSES]; n + 1];
    for (i, frame) in frames.iter().enumerate() {
        let mut next = prefix[i];
        for (acc, score) in next.iter_mut().zip(frame.scores()) {
            *acc += score;
        }
        prefix[i + 1] = next;
    }

    let smoothed = (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            let count = (hi - lo) as f64;
            let mut row = [0.0; NUM_CLASSES];
            for (k, value) in row.iter_mut().enumerate() {
                *value = ((prefix[hi][k] - prefix[lo][k]) / count).clamp(0.0, 1.0);
            }
            ScoreVector::from_raw(row)
        })
        .collect();
    Ok(series.with_frames(smoothed))
}
