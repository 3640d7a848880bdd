//! Leave-one-out evaluation, inner-CV grid search, and ablations.

use super::metrics::{EvalReport, FoldPrediction};
use super::EvalError;
use crate::learn::{Dataset, ModelSpec};

/// Leave-one-out cross-validation: one fold per film, metrics pooled
/// over all fold predictions. Folds are pure, so evaluation order does
/// not matter.
pub fn loocv(data: &Dataset, spec: &ModelSpec) -> Result<EvalReport, EvalError> {
    for (class, &count) in data.class_set().iter().zip(&data.class_counts()) {
        if count < 2 {
            return Err(EvalError::UntrainableFold(class.clone()));
        }
    }
    let n = data.n();
    let mut fold_predictions = Vec::with_capacity(n);
    for held_out in 0..n {
        let train_indices: Vec<usize> = (0..n).filter(|&i| i != held_out).collect();
        let train = data.subset(&train_indices);
        let predicted = spec.fit_predict(&train, data.row(held_out))?;
        fold_predictions.push(FoldPrediction {
            sample_id: data.sample_ids()[held_out].clone(),
            truth: data.y()[held_out],
            predicted,
        });
    }
    Ok(EvalReport::from_fold_predictions(
        fold_predictions,
        data.class_set(),
    ))
}

/// Deterministic stratified fold assignment: within each class, samples
/// are dealt round-robin across folds in dataset order.
fn stratified_folds(data: &Dataset, folds: usize) -> Result<Vec<Vec<usize>>, EvalError> {
    if folds < 2 {
        return Err(EvalError::InfeasibleStratification(
            "need at least two folds".into(),
        ));
    }
    if folds > data.n() {
        return Err(EvalError::InfeasibleStratification(format!(
            "{folds} folds for {} samples",
            data.n()
        )));
    }
    for (class, &count) in data.class_set().iter().zip(&data.class_counts()) {
        if count < 2 {
            return Err(EvalError::InfeasibleStratification(format!(
                "class `{class}` has {count} sample(s)"
            )));
        }
    }
    let mut assignment = vec![vec![]; folds];
    for class in 0..data.class_count() {
        for (dealt, index) in (0..data.n()).filter(|&i| data.y()[i] == class).enumerate() {
            assignment[dealt % folds].push(index);
        }
    }
    Ok(assignment)
}

/// Exhaustive grid search scored by stratified inner-CV accuracy on the
/// given data only; no information from any outer held-out sample is
/// used. Ties are broken by grid order.
pub fn grid_search(
    data: &Dataset,
    grid: &[ModelSpec],
    inner_folds: usize,
) -> Result<ModelSpec, EvalError> {
    if grid.is_empty() {
        return Err(EvalError::EmptyGrid);
    }
    let folds = stratified_folds(data, inner_folds)?;
    let mut best: Option<(f64, usize)> = None;
    for (gi, spec) in grid.iter().enumerate() {
        let mut correct = 0usize;
        let mut total = 0usize;
        for fold in &folds {
            let test: &[usize] = fold;
            let train_indices: Vec<usize> =
                (0..data.n()).filter(|i| !test.contains(i)).collect();
            let train = data.subset(&train_indices);
            for &i in test {
                if spec.fit_predict(&train, data.row(i))? == data.y()[i] {
                    correct += 1;
                }
                total += 1;
            }
        }
        let accuracy = correct as f64 / total as f64;
        let improves = match best {
            None => true,
            Some((b, _)) => accuracy > b,
        };
        if improves {
            best = Some((accuracy, gi));
        }
    }
    let (_, gi) = best.expect("non-empty grid");
    Ok(grid[gi].clone())
}

/// Leave-one-out accuracy of one feature block used on its own.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BlockAccuracy {
    pub block: String,
    pub dim: usize,
    pub accuracy: f64,
}

/// Runs LOOCV once per named block, restricting the features to that
/// block each time.
pub fn ablation(
    data: &Dataset,
    blocks: &[String],
    spec: &ModelSpec,
) -> Result<Vec<BlockAccuracy>, EvalError> {
    let mut results = Vec::with_capacity(blocks.len());
    for name in blocks {
        let block = data
            .layout()
            .block(name)
            .ok_or_else(|| EvalError::UnknownBlock(name.clone()))?;
        let range = block.range();
        let sub = data.select_columns(&block.name, range);
        let report = loocv(&sub, spec)?;
        results.push(BlockAccuracy {
            block: name.clone(),
            dim: sub.dim(),
            accuracy: report.accuracy(),
        });
    }
    Ok(results)
}
