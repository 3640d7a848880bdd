//! Confusion matrices and the precision/recall/F1 report.

use serde::{Deserialize, Serialize};

/// Prediction counts with rows indexed by truth and columns by
/// prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<u64>>,
    classes: Vec<String>,
}

impl ConfusionMatrix {
    pub fn from_predictions(truths: &[usize], predictions: &[usize], classes: &[String]) -> Self {
        assert_eq!(truths.len(), predictions.len());
        let k = classes.len();
        let mut counts = vec![vec![0u64; k]; k];
        for (&t, &p) in truths.iter().zip(predictions) {
            counts[t][p] += 1;
        }
        ConfusionMatrix {
            counts,
            classes: classes.to_vec(),
        }
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn accuracy(&self) -> f64 {
        let diag: u64 = (0..self.classes.len()).map(|i| self.counts[i][i]).sum();
        let total = self.total();
        if total == 0 {
            0.0
        } else {
            diag as f64 / total as f64
        }
    }

    /// Row supports (number of true samples per class).
    pub fn supports(&self) -> Vec<u64> {
        self.counts.iter().map(|row| row.iter().sum()).collect()
    }

    /// CSV table with a header row and a leading truth-label column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class");
        for c in &self.classes {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (i, row) in self.counts.iter().enumerate() {
            out.push_str(&self.classes[i]);
            for v in row {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

/// One class row of the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

/// Per-class rows plus the support-weighted average row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsSummary {
    pub per_class: Vec<ClassMetrics>,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
    pub accuracy: f64,
}

/// Support-weighted averages of (precision, recall, f1), the report's
/// `avg / total` row.
pub fn support_weighted_average(rows: &[ClassMetrics]) -> (f64, f64, f64) {
    let total: u64 = rows.iter().map(|r| r.support).sum();
    if total == 0 {
        return (0.0, 0.0, 0.0);
    }
    let t = total as f64;
    let p = rows.iter().map(|r| r.precision * r.support as f64).sum::<f64>() / t;
    let r = rows.iter().map(|r| r.recall * r.support as f64).sum::<f64>() / t;
    let f = rows.iter().map(|r| r.f1 * r.support as f64).sum::<f64>() / t;
    (p, r, f)
}

/// Derives per-class precision/recall/F1 and the weighted average row.
/// Zero denominators yield 0 rather than an error.
pub fn metrics_from_confusion(cm: &ConfusionMatrix) -> MetricsSummary {
    let k = cm.classes().len();
    let mut per_class = Vec::with_capacity(k);
    for c in 0..k {
        let tp = cm.counts()[c][c] as f64;
        let predicted: f64 = (0..k).map(|t| cm.counts()[t][c] as f64).sum();
        let actual: f64 = cm.counts()[c].iter().map(|&v| v as f64).sum();
        let precision = if predicted > 0.0 { tp / predicted } else { 0.0 };
        let recall = if actual > 0.0 { tp / actual } else { 0.0 };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        per_class.push(ClassMetrics {
            class: cm.classes()[c].clone(),
            precision,
            recall,
            f1,
            support: actual as u64,
        });
    }
    let (weighted_precision, weighted_recall, weighted_f1) = support_weighted_average(&per_class);
    MetricsSummary {
        per_class,
        weighted_precision,
        weighted_recall,
        weighted_f1,
        accuracy: cm.accuracy(),
    }
}

/// One held-out film's outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPrediction {
    pub sample_id: String,
    pub truth: usize,
    pub predicted: usize,
}

/// Full evaluation result: metrics, confusion matrix, and the per-film
/// fold outcomes the metrics were pooled from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub summary: MetricsSummary,
    pub confusion: ConfusionMatrix,
    pub fold_predictions: Vec<FoldPrediction>,
}

impl EvalReport {
    pub fn from_fold_predictions(
        fold_predictions: Vec<FoldPrediction>,
        classes: &[String],
    ) -> EvalReport {
        let truths: Vec<usize> = fold_predictions.iter().map(|f| f.truth).collect();
        let preds: Vec<usize> = fold_predictions.iter().map(|f| f.predicted).collect();
        let confusion = ConfusionMatrix::from_predictions(&truths, &preds, classes);
        EvalReport {
            summary: metrics_from_confusion(&confusion),
            confusion,
            fold_predictions,
        }
    }

    pub fn accuracy(&self) -> f64 {
        self.summary.accuracy
    }

    /// Human-readable table: one row per class, then the weighted
    /// `avg / total` row.
    pub fn to_text(&self) -> String {
        let width = self
            .summary
            .per_class
            .iter()
            .map(|r| r.class.len())
            .chain(["avg / total".len()])
            .max()
            .unwrap_or(8);
        let mut out = format!(
            "{:width$}  precision  recall  f1-score  movies\n",
            "class",
            width = width
        );
        for row in &self.summary.per_class {
            out.push_str(&format!(
                "{:width$}  {:>9.2}  {:>6.2}  {:>8.2}  {:>6}\n",
                row.class,
                row.precision,
                row.recall,
                row.f1,
                row.support,
                width = width
            ));
        }
        out.push_str(&format!(
            "{:width$}  {:>9.2}  {:>6.2}  {:>8.2}  {:>6}\n",
            "avg / total",
            self.summary.weighted_precision,
            self.summary.weighted_recall,
            self.summary.weighted_f1,
            self.confusion.total(),
            width = width
        ));
        out.push_str(&format!("accuracy: {:.4}\n", self.summary.accuracy));
        out
    }

    /// CSV table of the per-class rows plus the weighted average row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,precision,recall,f1,support\n");
        for row in &self.summary.per_class {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.class,
                crate::corpus::format_f64(row.precision),
                crate::corpus::format_f64(row.recall),
                crate::corpus::format_f64(row.f1),
                row.support
            ));
        }
        out.push_str(&format!(
            "avg / total,{},{},{},{}\n",
            crate::corpus::format_f64(self.summary.weighted_precision),
            crate::corpus::format_f64(self.summary.weighted_recall),
            crate::corpus::format_f64(self.summary.weighted_f1),
            self.confusion.total()
        ));
        out
    }
}
