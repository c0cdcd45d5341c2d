//! Popularity-weighted usage profiles.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decoder::{ExecutionPath, PathPrediction};
use crate::error::{Error, Result};

/// Popularity metadata of one video.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VideoMeta {
    pub video_id: String,
    pub views: u64,
    /// Normalized to [0, 1]; absent when the source has no rating.
    pub rating: Option<f64>,
}

/// How a video's popularity becomes a weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightScheme {
    #[default]
    Views,
    /// Views scaled by rating; a missing rating counts as 1.
    ViewsTimesRating,
    Uniform,
}

impl WeightScheme {
    pub fn name(self) -> &'static str {
        match self {
            WeightScheme::Views => "views",
            WeightScheme::ViewsTimesRating => "views-times-rating",
            WeightScheme::Uniform => "uniform",
        }
    }

    pub fn weight(self, meta: &VideoMeta) -> f64 {
        match self {
            WeightScheme::Views => meta.views as f64,
            WeightScheme::ViewsTimesRating => meta.views as f64 * meta.rating.unwrap_or(1.0),
            WeightScheme::Uniform => 1.0,
        }
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            WeightScheme::Views,
            WeightScheme::ViewsTimesRating,
            WeightScheme::Uniform,
        ]
        .into_iter()
        .find(|scheme| scheme.name() == s)
        .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

/// Distribution of popularity over execution paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UsageProfile {
    pub scheme: WeightScheme,
    pub weights: BTreeMap<ExecutionPath, f64>,
    /// Number of videos predicted on each path, regardless of weight.
    pub support: BTreeMap<ExecutionPath, usize>,
}

impl UsageProfile {
    pub fn weight(&self, path: ExecutionPath) -> f64 {
        self.weights.get(&path).copied().unwrap_or(0.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("profile serialization cannot fail")
    }
}

pub fn build_profile(
    predictions: &[PathPrediction],
    meta: &HashMap<String, VideoMeta>,
    scheme: WeightScheme,
) -> Result<UsageProfile> {
    let mut raw: BTreeMap<ExecutionPath, f64> =
        ExecutionPath::ALL.into_iter().map(|p| (p, 0.0)).collect();
    let mut support: BTreeMap<ExecutionPath, usize> =
        ExecutionPath::ALL.into_iter().map(|p| (p, 0)).collect();

    for prediction in predictions {
        let video = meta
            .get(&prediction.video_id)
            .ok_or_else(|| Error::UnknownVideo(prediction.video_id.clone()))?;
        *raw.get_mut(&prediction.path).unwrap() += scheme.weight(video);
        *support.get_mut(&prediction.path).unwrap() += 1;
    }

    let total: f64 = raw.values().sum();
    if total <= 0.0 || total.is_nan() {
        return Err(Error::ZeroTotalWeight(scheme.name()));
    }
    let weights = raw.into_iter().map(|(p, w)| (p, w / total)).collect();
    Ok(UsageProfile {
        scheme,
        weights,
        support,
    })
}

#[derive(Deserialize)]
struct MetaRow {
    video_id: String,
    views: u64,
    rating: Option<f64>,
}

/// Reads `video_id,views,rating` rows; a blank rating means absent.
pub fn read_meta_csv(text: &str) -> Result<HashMap<String, VideoMeta>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = HashMap::new();
    for row in reader.deserialize::<MetaRow>() {
        let row = row?;
        if let Some(rating) = row.rating {
            if !(0.0..=1.0).contains(&rating) {
                return Err(Error::InvalidRating {
                    video_id: row.video_id,
                    rating,
                });
            }
        }
        let meta = VideoMeta {
            video_id: row.video_id.clone(),
            views: row.views,
            rating: row.rating,
        };
        if out.insert(row.video_id.clone(), meta).is_some() {
            return Err(Error::DuplicateVideo(row.video_id));
        }
    }
    Ok(out)
}
