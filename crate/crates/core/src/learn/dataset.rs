//! Labeled feature matrix shared by every classifier and protocol.

use serde::{Deserialize, Serialize};

use super::LearnError;
use crate::shotfeat::FeatureLayout;

/// n samples by d features with class labels and the feature layout.
///
/// Validated on construction: at least two samples, rectangular and
/// finite, class indices inside the class set, and every class present
/// at least once.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    x: Vec<Vec<f64>>,
    y: Vec<usize>,
    class_set: Vec<String>,
    layout: FeatureLayout,
    sample_ids: Vec<String>,
}

impl Dataset {
    pub fn new(
        x: Vec<Vec<f64>>,
        y: Vec<usize>,
        class_set: Vec<String>,
        layout: FeatureLayout,
        sample_ids: Vec<String>,
    ) -> Result<Dataset, LearnError> {
        if x.len() < 2 {
            return Err(LearnError::TooFewSamples);
        }
        assert_eq!(x.len(), y.len(), "one label per sample");
        assert_eq!(x.len(), sample_ids.len(), "one id per sample");
        let dim = layout.dim();
        for (sample, row) in x.iter().enumerate() {
            if row.len() != dim {
                return Err(LearnError::RaggedRow {
                    sample,
                    expected: dim,
                    got: row.len(),
                });
            }
            for (column, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(LearnError::NonFiniteInput { sample, column });
                }
            }
        }
        let mut seen = vec![false; class_set.len()];
        for &label in &y {
            if label >= class_set.len() {
                return Err(LearnError::BadClassIndex {
                    index: label,
                    classes: class_set.len(),
                });
            }
            seen[label] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(LearnError::EmptyClass(class_set[missing].clone()));
        }
        Ok(Dataset {
            x,
            y,
            class_set,
            layout,
            sample_ids,
        })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn x(&self) -> &[Vec<f64>] {
        &self.x
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i]
    }

    pub fn y(&self) -> &[usize] {
        &self.y
    }

    pub fn class_set(&self) -> &[String] {
        &self.class_set
    }

    pub fn class_count(&self) -> usize {
        self.class_set.len()
    }

    pub fn layout(&self) -> &FeatureLayout {
        &self.layout
    }

    pub fn sample_ids(&self) -> &[String] {
        &self.sample_ids
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_set.len()];
        for &label in &self.y {
            counts[label] += 1;
        }
        counts
    }

    /// Rows selected by index, keeping labels and ids aligned. Callers
    /// are responsible for leaving every class represented.
    pub(crate) fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            x: indices.iter().map(|&i| self.x[i].clone()).collect(),
            y: indices.iter().map(|&i| self.y[i]).collect(),
            class_set: self.class_set.clone(),
            layout: self.layout.clone(),
            sample_ids: indices.iter().map(|&i| self.sample_ids[i].clone()).collect(),
        }
    }

    /// Column range projected out as its own dataset (used by ablations).
    pub(crate) fn select_columns(&self, block_name: &str, range: std::ops::Range<usize>) -> Dataset {
        let names = self.layout.coordinate_names()[range.clone()].to_vec();
        Dataset {
            x: self.x.iter().map(|row| row[range.clone()].to_vec()).collect(),
            y: self.y.clone(),
            class_set: self.class_set.clone(),
            layout: FeatureLayout::single_block(block_name, names),
            sample_ids: self.sample_ids.clone(),
        }
    }

    /// Same rows under new labels (used by one-against-all relabeling).
    pub(crate) fn relabel(&self, y: Vec<usize>, class_set: Vec<String>) -> Result<Dataset, LearnError> {
        Dataset::new(
            self.x.clone(),
            y,
            class_set,
            self.layout.clone(),
            self.sample_ids.clone(),
        )
    }
}
