//! k-nearest-neighbour voting with deterministic tie handling.

use super::{Dataset, LearnError};

/// Majority vote among the `k` nearest training samples by Euclidean
/// distance. Distance ties prefer the lower sample index; vote ties
/// prefer the earlier class.
pub fn knn_predict(train: &Dataset, x: &[f64], k: usize) -> Result<usize, LearnError> {
    let n = train.n();
    if k == 0 || k > n {
        return Err(LearnError::InvalidK { k, n });
    }
    if x.len() != train.dim() {
        return Err(LearnError::DimensionMismatch {
            expected: train.dim(),
            got: x.len(),
        });
    }

    let mut by_distance: Vec<(f64, usize)> = train
        .x()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let d2: f64 = row.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum();
            (d2, i)
        })
        .collect();
    by_distance.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut votes = vec![0usize; train.class_count()];
    for &(_, i) in by_distance.iter().take(k) {
        votes[train.y()[i]] += 1;
    }
    let mut best = 0;
    for c in 1..votes.len() {
        if votes[c] > votes[best] {
            best = c;
        }
    }
    Ok(best)
}
