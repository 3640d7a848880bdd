//! From-scratch classifiers used in the attribution experiments.
//!
//! All fits are deterministic: ties are broken by class order, then by
//! sample index, and anything random takes an explicit seed. That keeps
//! leave-one-out results reproducible bit for bit.

mod dataset;
mod forest;
mod gnb;
mod knn;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dataset::Dataset;
pub use forest::{forest_fit, forest_importance, DecisionTree, ForestModel, MaxFeatures, TreeNode};
pub use gnb::{gnb_fit, gnb_predict, GnbModel, DEFAULT_EPSILON_SCALE};
pub use knn::knn_predict;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("dataset must contain at least two samples")]
    TooFewSamples,
    #[error("non-finite feature value at sample {sample}, column {column}")]
    NonFiniteInput { sample: usize, column: usize },
    #[error("class `{0}` has no samples")]
    EmptyClass(String),
    #[error("sample {sample} has {got} features, expected {expected}")]
    RaggedRow {
        sample: usize,
        expected: usize,
        got: usize,
    },
    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("class index {index} outside class set of size {classes}")]
    BadClassIndex { index: usize, classes: usize },
    #[error("k must be in 1..={n}, got {k}")]
    InvalidK { k: usize, n: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// A classifier choice plus its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModelSpec {
    Gnb { epsilon_scale: f64 },
    Knn { k: usize },
    Forest {
        trees: usize,
        max_features: MaxFeatures,
        seed: u64,
    },
}

impl ModelSpec {
    pub fn gnb() -> ModelSpec {
        ModelSpec::Gnb {
            epsilon_scale: DEFAULT_EPSILON_SCALE,
        }
    }

    /// Fits on `train` and predicts the class index of a single point.
    pub fn fit_predict(&self, train: &Dataset, x: &[f64]) -> Result<usize, LearnError> {
        match self {
            ModelSpec::Gnb { epsilon_scale } => {
                let model = gnb_fit(train, *epsilon_scale)?;
                Ok(gnb_predict(&model, x)?.0)
            }
            ModelSpec::Knn { k } => knn_predict(train, x, *k),
            ModelSpec::Forest {
                trees,
                max_features,
                seed,
            } => {
                let model = forest_fit(train, *trees, *max_features, *seed)?;
                model.predict(x)
            }
        }
    }
}

impl std::fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelSpec::Gnb { epsilon_scale } => write!(f, "gnb(epsilon_scale={epsilon_scale})"),
            ModelSpec::Knn { k } => write!(f, "knn(k={k})"),
            ModelSpec::Forest {
                trees,
                max_features,
                seed,
            } => write!(f, "forest(trees={trees}, max_features={max_features:?}, seed={seed})"),
        }
    }
}

/// Versioned text serialization for fitted models.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SavedModel {
    Gnb(GnbModel),
    Forest(ForestModel),
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    model: SavedModel,
}

pub fn save_model(model: &SavedModel) -> String {
    serde_json::to_string_pretty(&ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        model: model.clone(),
    })
    .expect("model serialization")
}

pub fn load_model(text: &str) -> Result<SavedModel, LearnError> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|_| LearnError::InvalidParameter("model file"))?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(LearnError::InvalidParameter("unsupported model version"));
    }
    Ok(file.model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shotfeat::FeatureLayout;

    fn tiny_dataset() -> Dataset {
        Dataset::new(
            vec![vec![0.0], vec![2.0], vec![10.0], vec![12.0]],
            vec![0, 0, 1, 1],
            vec!["A".into(), "B".into()],
            FeatureLayout::single_block("all", vec!["f0".into()]),
            vec!["s0".into(), "s1".into(), "s2".into(), "s3".into()],
        )
        .unwrap()
    }

    #[test]
    fn model_round_trip() {
        let data = tiny_dataset();
        let gnb = gnb_fit(&data, DEFAULT_EPSILON_SCALE).unwrap();
        let text = save_model(&SavedModel::Gnb(gnb.clone()));
        match load_model(&text).unwrap() {
            SavedModel::Gnb(loaded) => assert_eq!(loaded, gnb),
            _ => panic!("wrong variant"),
        }

        let forest = forest_fit(&data, 5, MaxFeatures::All, 3).unwrap();
        let text = save_model(&SavedModel::Forest(forest.clone()));
        match load_model(&text).unwrap() {
            SavedModel::Forest(loaded) => {
                assert_eq!(loaded, forest);
                assert_eq!(loaded.predict(&[1.0]).unwrap(), forest.predict(&[1.0]).unwrap());
            }
            _ => panic!("wrong variant"),
        }
    }

    #[test]
    fn fit_predict_dispatches() {
        let data = tiny_dataset();
        for spec in [
            ModelSpec::gnb(),
            ModelSpec::Knn { k: 1 },
            ModelSpec::Forest {
                trees: 11,
                max_features: MaxFeatures::All,
                seed: 1,
            },
        ] {
            assert_eq!(spec.fit_predict(&data, &[1.0]).unwrap(), 0);
            assert_eq!(spec.fit_predict(&data, &[11.0]).unwrap(), 1);
        }
    }
}
