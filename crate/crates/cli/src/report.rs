use std::fmt::Write;

use serde_json::json;

use usageprof::metrics::{self, percent, ClassScores, PathEvaluation, TableFixture};

/// Evaluation results ready for printing.
pub struct Report {
    labels: Vec<String>,
    counts: Vec<Vec<u64>>,
    scores: Vec<ClassScores>,
    average_precision: Vec<Option<f64>>,
    mean_average_precision: Option<f64>,
}

impl Report {
    pub fn from_evaluation(eval: &PathEvaluation) -> Report {
        Report {
            labels: eval.confusion.labels().iter().map(|p| p.name().to_string()).collect(),
            counts: eval.confusion.counts().to_vec(),
            scores: eval.scores.clone(),
            average_precision: eval.average_precision.clone(),
            mean_average_precision: eval.mean_average_precision,
        }
    }

    /// Scores are recomputed from the counts; AP comes from the published row.
    pub fn from_fixture(fixture: &TableFixture) -> usageprof::Result<Report> {
        let cm = fixture.confusion()?;
        let average_precision = match &fixture.average_precision_percent {
            Some(aps) => aps.iter().map(|ap| Some(ap / 100.0)).collect(),
            None => vec![None; fixture.labels.len()],
        };
        Ok(Report {
            labels: fixture.labels.clone(),
            counts: fixture.counts.clone(),
            scores: metrics::precision_recall_f1(&cm),
            average_precision,
            mean_average_precision: fixture.published_map().transpose()?,
        })
    }

    pub fn to_text(&self) -> String {
        let width = self
            .labels
            .iter()
            .map(String::len)
            .chain(self.counts.iter().flatten().map(|c| c.to_string().len()))
            .max()
            .unwrap_or(1)
            .max(9);
        let mut out = String::new();
        write!(out, "{:>width$}", "").unwrap();
        for label in &self.labels {
            write!(out, " {label:>width$}").unwrap();
        }
        out.push('\n');
        for (label, row) in self.labels.iter().zip(&self.counts) {
            write!(out, "{label:>width$}").unwrap();
            for count in row {
                write!(out, " {count:>width$}").unwrap();
            }
            out.push('\n');
        }
        out.push('\n');

        writeln!(
            out,
            "{:>width$} {:>9} {:>9} {:>9} {:>9}",
            "class", "%prec", "%recall", "%F1", "%AP"
        )
        .unwrap();
        for ((label, s), ap) in self.labels.iter().zip(&self.scores).zip(&self.average_precision) {
            writeln!(
                out,
                "{label:>width$} {:>9} {:>9} {:>9} {:>9}",
                percent(s.precision),
                percent(s.recall),
                percent(s.f1),
                percent(*ap)
            )
            .unwrap();
        }
        writeln!(out, "\nmAP {}%", percent(self.mean_average_precision)).unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        json!({
            "labels": self.labels,
            "counts": self.counts,
            "precision": self.scores.iter().map(|s| s.precision).collect::<Vec<_>>(),
            "recall": self.scores.iter().map(|s| s.recall).collect::<Vec<_>>(),
            "f1": self.scores.iter().map(|s| s.f1).collect::<Vec<_>>(),
            "average_precision": self.average_precision,
            "mean_average_precision": self.mean_average_precision,
        })
        .to_string()
    }
}
