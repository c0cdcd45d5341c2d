//! Synthetic clips with known execution paths.
//!
//! A clip is a symbol plan (background padding around the class runs a path's
//! grammar expects) rendered as peaked score vectors. Noise replaces the
//! argmax of randomly chosen frames with a different class.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decoder::{Decoder, ExecutionPath};
use crate::error::{Error, Result};
use crate::parallel::{self, Execution};
use crate::score_model::{ScoreSeries, ScoreVector, UiClass, NUM_CLASSES};

/// Probability mass spread over the non-dominant classes of a clean frame.
pub const PEAK_EPS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClipRequest {
    pub path: ExecutionPath,
    pub fps: f64,
    pub frames: usize,
    pub noise: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticClip {
    pub series: ScoreSeries,
    pub path: ExecutionPath,
    /// Uncorrupted per-frame classes.
    pub plan: Vec<UiClass>,
}

/// Shortest clip that can hold every path at rate `r`.
pub fn min_frames(rate: usize) -> usize {
    4 * rate + 2
}

struct Run {
    class: UiClass,
    len: usize,
    min: usize,
}

pub fn generate_clip(
    path: ExecutionPath,
    fps: f64,
    duration_frames: usize,
    noise: f64,
    seed: u64,
) -> Result<SyntheticClip> {
    if !fps.is_finite() || fps <= 0.0 {
        return Err(Error::InvalidFps(fps));
    }
    if !(0.0..0.5).contains(&noise) {
        return Err(Error::InvalidNoise(noise));
    }
    let r = (fps.round() as usize).max(1);
    let needed = min_frames(r);
    if duration_frames < needed {
        return Err(Error::ClipTooShort {
            path: path.name(),
            frames: duration_frames,
            r,
            needed,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut main = |class| Run {
        class,
        len: rng.gen_range(r..=3 * r),
        min: r,
    };
    let mut runs = match path {
        ExecutionPath::Alpha => vec![main(UiClass::FontWindow)],
        ExecutionPath::Beta => vec![
            main(UiClass::FontWindow),
            main(UiClass::DefaultFontWindow),
            Run {
                class: UiClass::FontWindow,
                len: 0,
                min: 0,
            },
        ],
        ExecutionPath::Gamma => vec![main(UiClass::ColumnDropdown)],
        ExecutionPath::Delta => vec![
            main(UiClass::ColumnDropdown),
            Run {
                class: UiClass::Background,
                len: 0,
                min: 0,
            },
            main(UiClass::ColumnWindow),
        ],
        ExecutionPath::Epsilon => vec![main(UiClass::PageNumber)],
    };
    // optional trailing font window / column gap
    for run in runs.iter_mut().filter(|run| run.min == 0) {
        run.len = rng.gen_range(0..=r);
    }

    // keep at least one background frame on each side
    let budget = duration_frames - 2;
    while runs.iter().map(|run| run.len).sum::<usize>() > budget {
        let longest = runs
            .iter_mut()
            .filter(|run| run.len > run.min)
            .max_by_key(|run| run.len)
            .expect("minimum plan always fits");
        longest.len -= 1;
    }
    let used: usize = runs.iter().map(|run| run.len).sum();
    let lead = rng.gen_range(1..=duration_frames - used - 1);

    let mut plan = vec![UiClass::Background; lead];
    for run in &runs {
        plan.extend(std::iter::repeat_n(run.class, run.len));
    }
    plan.resize(duration_frames, UiClass::Background);

    let frames = plan
        .iter()
        .map(|&class| {
            let mut scores = *ScoreVector::peaked(class, PEAK_EPS).scores();
            if noise > 0.0 && rng.gen_bool(noise) {
                let other = (class.index() + rng.gen_range(1..NUM_CLASSES)) % NUM_CLASSES;
                scores.swap(class.index(), other);
            }
            ScoreVector::new(scores, 0).expect("peaked rows are valid")
        })
        .collect();
    let video_id = format!("synth-{}-fps{}-{seed}", path.name(), fps);
    Ok(SyntheticClip {
        series: ScoreSeries::new(video_id, fps, frames)?,
        path,
        plan,
    })
}

impl ClipRequest {
    pub fn generate(&self) -> Result<SyntheticClip> {
        generate_clip(self.path, self.fps, self.frames, self.noise, self.seed)
    }
}

/// Requests cycling through the five paths with consecutive seeds.
pub fn cyclic_requests(count: usize, fps: f64, frames: usize, noise: f64, seed: u64) -> Vec<ClipRequest> {
    (0..count)
        .map(|i| ClipRequest {
            path: ExecutionPath::ALL[i % ExecutionPath::ALL.len()],
            fps,
            frames,
            noise,
            seed: seed + i as u64,
        })
        .collect()
}

pub fn generate_batch(requests: &[ClipRequest], exec: Execution) -> Result<Vec<SyntheticClip>> {
    parallel::map(requests, exec, ClipRequest::generate)
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecoveryReport {
    pub total: usize,
    pub correct: usize,
}

impl RecoveryReport {
    pub fn accuracy(&self) -> f64 {
        self.correct as f64 / self.total as f64
    }
}

/// Generates and decodes every request, counting clips whose path is recovered.
pub fn measure_recovery(
    requests: &[ClipRequest],
    decoder: &Decoder,
    exec: Execution,
) -> Result<RecoveryReport> {
    let outcomes = parallel::map(requests, exec, |request| -> Result<bool> {
        let clip = request.generate()?;
        Ok(decoder.decode(&clip.series)?.path == clip.path)
    });
    let mut correct = 0;
    for outcome in outcomes {
        correct += usize::from(outcome?);
    }
    Ok(RecoveryReport {
        total: requests.len(),
        correct,
    })
}
