//! Evaluation protocols and analyses on top of the classifiers:
//! leave-one-out attribution, grid search, single-feature ablations,
//! production-period prediction, feature similarity and correlation,
//! and per-director feature importance profiles.

mod analysis;
mod metrics;
mod protocol;

use thiserror::Error;

pub use analysis::{
    feature_correlation_matrix, feature_similarity, importance_profile, importance_profiles,
    pearson_correlation, period_label, ImportanceProfile, ImportanceTable, PeriodLabel,
    Similarity,
};
pub use metrics::{
    metrics_from_confusion, support_weighted_average, ClassMetrics, ConfusionMatrix, EvalReport,
    FoldPrediction, MetricsSummary,
};
pub use protocol::{ablation, grid_search, loocv, BlockAccuracy};

use crate::learn::LearnError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("class `{0}` has fewer than two samples; its folds are untrainable")]
    UntrainableFold(String),
    #[error("hyperparameter grid is empty")]
    EmptyGrid,
    #[error("stratification infeasible: {0}")]
    InfeasibleStratification(String),
    #[error("unknown feature block `{0}`")]
    UnknownBlock(String),
    #[error("year {0} outside the period table 1948..=2017")]
    OutOfRange(i32),
    #[error("length mismatch: {a} vs {b}")]
    LengthMismatch { a: usize, b: usize },
    #[error("need at least two components")]
    TooShort,
    #[error("Pearson correlation undefined: zero variance input")]
    ZeroVariance,
    #[error("need at least {min} samples")]
    TooFewSamples { min: usize },
    #[error("unknown director `{0}`")]
    UnknownDirector(String),
    #[error(transparent)]
    Learn(#[from] LearnError),
}
