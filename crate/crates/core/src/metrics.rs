//! Confusion matrices, per-class precision/recall/F1 and 11-point
//! interpolated average precision.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::decoder::{ExecutionPath, PathPrediction};
use crate::error::{Error, Result};

/// Square count matrix; rows are ground truth, columns are predictions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix<L> {
    labels: Vec<L>,
    counts: Vec<Vec<u64>>,
}

impl<L: Clone + Eq + Hash + fmt::Debug> ConfusionMatrix<L> {
    pub fn from_counts(labels: Vec<L>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if counts.len() != labels.len() || counts.iter().any(|row| row.len() != labels.len()) {
            return Err(Error::UnknownLabel(format!(
                "counts are not {0}x{0}",
                labels.len()
            )));
        }
        Ok(ConfusionMatrix { labels, counts })
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn row_sum(&self, k: usize) -> u64 {
        self.counts[k].iter().sum()
    }

    pub fn col_sum(&self, k: usize) -> u64 {
        self.counts.iter().map(|row| row[k]).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

/// Counts `(truth, predicted)` pairs.
pub fn accumulate<L>(pairs: &[(L, L)], labels: &[L]) -> Result<ConfusionMatrix<L>>
where
    L: Clone + Eq + Hash + fmt::Debug,
{
    let index: HashMap<&L, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let lookup = |l: &L| {
        index
            .get(l)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(format!("{l:?}")))
    };
    let mut counts = vec![vec![0u64; labels.len()]; labels.len()];
    for (truth, predicted) in pairs {
        counts[lookup(truth)?][lookup(predicted)?] += 1;
    }
    Ok(ConfusionMatrix {
        labels: labels.to_vec(),
        counts,
    })
}

/// Per-class scores. `None` marks a 0/0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassScores {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn precision_recall_f1<L>(cm: &ConfusionMatrix<L>) -> Vec<ClassScores>
where
    L: Clone + Eq + Hash + fmt::Debug,
{
    (0..cm.labels.len())
        .map(|k| {
            let hit = cm.counts[k][k];
            let precision = ratio(hit, cm.col_sum(k));
            let recall = ratio(hit, cm.row_sum(k));
            let f1 = match (precision, recall) {
                (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
                _ => None,
            };
            ClassScores {
                precision,
                recall,
                f1,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub confidence: f64,
    pub is_correct: bool,
}

/// Scored retrievals for one class, plus the number of ground-truth positives.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedPredictionList {
    entries: Vec<RankedEntry>,
    positives_total: usize,
}

impl RankedPredictionList {
    pub fn new(entries: Vec<RankedEntry>, positives_total: usize) -> Result<Self> {
        if positives_total == 0 {
            return Err(Error::NoPositives);
        }
        let correct = entries.iter().filter(|e| e.is_correct).count();
        if correct > positives_total {
            return Err(Error::TooManyHits {
                correct,
                positives: positives_total,
            });
        }
        Ok(RankedPredictionList {
            entries,
            positives_total,
        })
    }

    pub fn entries(&self) -> &[RankedEntry] {
        &self.entries
    }

    pub fn positives_total(&self) -> usize {
        self.positives_total
    }
}

/// Number of recall levels in the interpolated AP.
pub const AP_LEVELS: usize = 11;

/// 11-point interpolated average precision.
///
/// Entries are ranked by descending confidence; equal confidences keep their
/// input order. For each recall level `0.0, 0.1, …, 1.0` the interpolated
/// precision is the best precision at any cut-off reaching that recall, or 0
/// when no cut-off does.
pub fn average_precision(list: &RankedPredictionList) -> f64 {
    let mut ranked = list.entries.clone();
    ranked.sort_by(|a, b| b.confidence.total_cmp(&a.confidence));

    let positives = list.positives_total as f64;
    let mut hits = 0usize;
    let curve: Vec<(f64, f64)> = ranked
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            hits += usize::from(entry.is_correct);
            (hits as f64 / positives, hits as f64 / (i + 1) as f64)
        })
        .collect();

    // suffix maximum of precision; recall is non-decreasing along the curve
    let mut best_after = vec![0.0f64; curve.len() + 1];
    for i in (0..curve.len()).rev() {
        best_after[i] = best_after[i + 1].max(curve[i].1);
    }

    let mut sum = 0.0;
    for level in 0..AP_LEVELS {
        let threshold = level as f64 / (AP_LEVELS - 1) as f64;
        let first = curve.partition_point(|&(recall, _)| recall < threshold);
        sum += best_after[first];
    }
    sum / AP_LEVELS as f64
}

/// Unweighted mean of per-class AP.
pub fn mean_average_precision(per_class: &[RankedPredictionList]) -> Result<f64> {
    let aps: Vec<f64> = per_class.iter().map(average_precision).collect();
    mean(&aps)
}

/// Mean of already computed AP values.
pub fn mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::NoClasses);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Two-decimal percentage, or `-` for undefined values.
pub fn percent(value: Option<f64>) -> String {
    value.map_or_else(|| "-".to_string(), |v| format!("{:.2}", v * 100.0))
}

/// Full clip-level evaluation of path predictions.
#[derive(Debug, Clone, Serialize)]
pub struct PathEvaluation {
    pub confusion: ConfusionMatrix<ExecutionPath>,
    pub scores: Vec<ClassScores>,
    /// `None` for paths with no ground-truth clips.
    pub average_precision: Vec<Option<f64>>,
    pub mean_average_precision: Option<f64>,
}

/// Evaluates predictions against ground truth keyed by video id.
///
/// For each path, the ranked list holds the clips predicted as that path,
/// scored by prediction confidence and marked correct when the truth agrees.
pub fn evaluate_paths(
    truth: &[(String, ExecutionPath)],
    predictions: &[PathPrediction],
) -> Result<PathEvaluation> {
    let mut by_id: HashMap<&str, &PathPrediction> = HashMap::new();
    for p in predictions {
        if by_id.insert(p.video_id.as_str(), p).is_some() {
            return Err(Error::DuplicateVideo(p.video_id.clone()));
        }
    }
    let mut truth_ids = HashMap::new();
    for (id, path) in truth {
        if truth_ids.insert(id.as_str(), *path).is_some() {
            return Err(Error::DuplicateVideo(id.clone()));
        }
    }
    if let Some(p) = predictions.iter().find(|p| !truth_ids.contains_key(p.video_id.as_str())) {
        return Err(Error::UnknownVideo(p.video_id.clone()));
    }

    let mut pairs = Vec::with_capacity(truth.len());
    for (id, true_path) in truth {
        let p = by_id
            .get(id.as_str())
            .ok_or_else(|| Error::MissingPrediction(id.clone()))?;
        pairs.push((*true_path, p.path));
    }
    let confusion = accumulate(&pairs, &ExecutionPath::ALL)?;
    let scores = precision_recall_f1(&confusion);

    let mut average_precision_per_path = Vec::new();
    for (k, path) in ExecutionPath::ALL.into_iter().enumerate() {
        let positives = confusion.row_sum(k) as usize;
        if positives == 0 {
            average_precision_per_path.push(None);
            continue;
        }
        let entries = truth
            .iter()
            .map(|(id, t)| (by_id[id.as_str()], *t))
            .filter(|(p, _)| p.path == path)
            .map(|(p, t)| RankedEntry {
                confidence: p.confidence,
                is_correct: t == path,
            })
            .collect();
        let list = RankedPredictionList::new(entries, positives)?;
        average_precision_per_path.push(Some(average_precision(&list)));
    }
    let defined: Vec<f64> = average_precision_per_path.iter().flatten().copied().collect();
    Ok(PathEvaluation {
        confusion,
        scores,
        average_precision: average_precision_per_path,
        mean_average_precision: mean(&defined).ok(),
    })
}

/// Reads a `video_id,path` CSV with a header row.
pub fn read_truth_csv(text: &str) -> Result<Vec<(String, ExecutionPath)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    reader
        .deserialize::<(String, String)>()
        .map(|row| {
            let (id, path) = row?;
            Ok((id, path.parse()?))
        })
        .collect()
}

pub fn write_truth_csv(rows: &[(String, ExecutionPath)]) -> String {
    let mut out = String::from("video_id,path\n");
    for (id, path) in rows {
        out.push_str(&format!("{id},{path}\n"));
    }
    out
}

/// A published confusion table. The optional rows hold the percentages printed
/// alongside it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableFixture {
    pub name: String,
    pub labels: Vec<String>,
    pub counts: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recall_percent: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_percent: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f1_percent: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub average_precision_percent: Option<Vec<f64>>,
}

impl TableFixture {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn confusion(&self) -> Result<ConfusionMatrix<String>> {
        ConfusionMatrix::from_counts(self.labels.clone(), self.counts.clone())
    }

    /// Mean of the published per-class AP values, as a fraction.
    pub fn published_map(&self) -> Option<Result<f64>> {
        self.average_precision_percent.as_ref().map(|aps| {
            let fractions: Vec<f64> = aps.iter().map(|ap| ap / 100.0).collect();
            mean(&fractions)
        })
    }
}
