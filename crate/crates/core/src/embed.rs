//! Exact t-SNE for corpus-scale 2-D and 3-D maps.
//!
//! Pairwise Gaussian affinities in the input space are tuned per point
//! by binary search so each conditional distribution hits the target
//! perplexity; the embedding minimizes the KL divergence to a Student-t
//! kernel by momentum gradient descent with early exaggeration.
//! Gradients are computed exactly (O(n^2)); the corpora this is meant
//! for are at most a few hundred films.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("perplexity {perplexity} infeasible for {n} points (need 1 < perplexity <= n-1)")]
    PerplexityInfeasible { perplexity: f64, n: usize },
    #[error("non-finite input at point {point}, column {column}")]
    NonFiniteInput { point: usize, column: usize },
    #[error("need at least {min} points, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("target_dims must be 2 or 3, got {0}")]
    BadTargetDims(usize),
    #[error("point {point} has {got} columns, expected {expected}")]
    RaggedRow {
        point: usize,
        expected: usize,
        got: usize,
    },
}

/// t-SNE settings. The defaults are the ones used throughout the
/// analysis: perplexity 15, 1000 iterations at learning rate 200, early
/// exaggeration x4 for the first 100 iterations, seeded Gaussian init
/// with sigma 1e-4.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbedConfig {
    pub target_dims: usize,
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub exaggeration_factor: f64,
    pub exaggeration_iters: usize,
    pub seed: u64,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        EmbedConfig {
            target_dims: 2,
            perplexity: 15.0,
            iterations: 1000,
            learning_rate: 200.0,
            exaggeration_factor: 4.0,
            exaggeration_iters: 100,
            seed: 0,
        }
    }
}

/// Convergence tolerance of the per-point perplexity binary search.
pub const PERPLEXITY_TOL: f64 = 1e-3;

const BANDWIDTH_SEARCH_ITERS: usize = 200;
const MOMENTUM_EARLY: f64 = 0.5;
const MOMENTUM_LATE: f64 = 0.8;
const MOMENTUM_SWITCH_ITER: usize = 250;

/// Row-conditional Gaussian affinities with the attained perplexities
/// and precisions (beta = 1 / (2 sigma^2)) of the bandwidth search.
#[derive(Debug, Clone)]
pub struct CondAffinities {
    /// Row-stochastic matrix; row i holds p(j|i), diagonal 0.
    pub probs: Vec<Vec<f64>>,
    pub perplexities: Vec<f64>,
    pub betas: Vec<f64>,
}

fn validate_points(points: &[Vec<f64>], min: usize) -> Result<usize, EmbedError> {
    if points.len() < min {
        return Err(EmbedError::TooFewPoints {
            min,
            got: points.len(),
        });
    }
    let d = points[0].len();
    for (i, row) in points.iter().enumerate() {
        if row.len() != d {
            return Err(EmbedError::RaggedRow {
                point: i,
                expected: d,
                got: row.len(),
            });
        }
        for (j, v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(EmbedError::NonFiniteInput {
                    point: i,
                    column: j,
                });
            }
        }
    }
    Ok(d)
}

fn squared_distances(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut d2 = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dist: f64 = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b).powi(2))
                .sum();
            d2[i][j] = dist;
            d2[j][i] = dist;
        }
    }
    d2
}

/// Shannon entropy (nats) and normalized row for one point at a given
/// precision. Distances are shifted by the row minimum before
/// exponentiation so large betas cannot underflow the whole row.
fn row_at_beta(d2_row: &[f64], i: usize, beta: f64, out: &mut [f64]) -> f64 {
    let min_d2 = d2_row
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, &v)| v)
        .fold(f64::INFINITY, f64::min);
    let mut sum = 0.0;
    for (j, &d) in d2_row.iter().enumerate() {
        if j == i {
            out[j] = 0.0;
            continue;
        }
        let w = (-beta * (d - min_d2)).exp();
        out[j] = w;
        sum += w;
    }
    let mut entropy = 0.0;
    for (j, p) in out.iter_mut().enumerate() {
        if j == i {
            continue;
        }
        *p /= sum;
        if *p > 1e-300 {
            entropy -= *p * p.ln();
        }
    }
    entropy
}

/// Tunes one Gaussian bandwidth per point so its conditional
/// distribution attains the target perplexity (within
/// [`PERPLEXITY_TOL`] whenever a matching bandwidth exists).
pub fn conditional_affinities(
    points: &[Vec<f64>],
    perplexity: f64,
) -> Result<CondAffinities, EmbedError> {
    let n = points.len();
    validate_points(points, 2)?;
    if !(perplexity > 1.0) || perplexity > (n - 1) as f64 {
        return Err(EmbedError::PerplexityInfeasible { perplexity, n });
    }
    let d2 = squared_distances(points);
    let target_entropy = perplexity.ln();

    let mut probs = vec![vec![0.0; n]; n];
    let mut perplexities = vec![0.0; n];
    let mut betas = vec![0.0; n];
    for i in 0..n {
        let mut beta = 1.0;
        let mut beta_min = f64::NEG_INFINITY;
        let mut beta_max = f64::INFINITY;
        let mut entropy = 0.0;
        for _ in 0..BANDWIDTH_SEARCH_ITERS {
            entropy = row_at_beta(&d2[i], i, beta, &mut probs[i]);
            if (entropy.exp() - perplexity).abs() < PERPLEXITY_TOL {
                break;
            }
            let diff = entropy - target_entropy;
            if diff > 0.0 {
                beta_min = beta;
                beta = if beta_max.is_finite() {
                    (beta + beta_max) / 2.0
                } else {
                    beta * 2.0
                };
            } else {
                beta_max = beta;
                beta = if beta_min.is_finite() {
                    (beta + beta_min) / 2.0
                } else {
                    beta / 2.0
                };
            }
        }
        perplexities[i] = entropy.exp();
        betas[i] = beta;
    }
    Ok(CondAffinities {
        probs,
        perplexities,
        betas,
    })
}

/// Embedding coordinates plus the KL trace sampled every 50 iterations
/// (always against the unexaggerated P).
#[derive(Debug, Clone, PartialEq)]
pub struct TsneResult {
    pub coords: Vec<Vec<f64>>,
    pub kl_trace: Vec<(usize, f64)>,
}

fn kl_divergence(p: &[Vec<f64>], q: &[Vec<f64>]) -> f64 {
    let mut kl = 0.0;
    for (prow, qrow) in p.iter().zip(q) {
        for (&pv, &qv) in prow.iter().zip(qrow) {
            if pv > 0.0 {
                kl += pv * (pv / qv.max(1e-12)).ln();
            }
        }
    }
    kl
}

/// Student-t similarities of the embedding. Returns (q, w) where
/// w_ij = 1/(1+d^2) and q is w normalized over all off-diagonal pairs.
fn low_dim_similarities(y: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let n = y.len();
    let mut w = vec![vec![0.0; n]; n];
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d2: f64 = y[i].iter().zip(&y[j]).map(|(a, b)| (a - b).powi(2)).sum();
            let v = 1.0 / (1.0 + d2);
            w[i][j] = v;
            w[j][i] = v;
            sum += 2.0 * v;
        }
    }
    let q = w
        .iter()
        .map(|row| row.iter().map(|&v| v / sum).collect())
        .collect();
    (q, w)
}

/// Embeds `points` into 2 or 3 dimensions. Deterministic given the
/// config seed; duplicates are allowed and come out near-coincident.
pub fn tsne(points: &[Vec<f64>], config: &EmbedConfig) -> Result<TsneResult, EmbedError> {
    if config.target_dims != 2 && config.target_dims != 3 {
        return Err(EmbedError::BadTargetDims(config.target_dims));
    }
    if config.iterations == 0 {
        return Err(EmbedError::TooFewPoints { min: 1, got: 0 });
    }
    let n = points.len();
    validate_points(points, 4)?;

    let cond = conditional_affinities(points, config.perplexity)?;
    // symmetrize: p_ij = (p(j|i) + p(i|j)) / 2n, sums to 1 over all pairs
    let mut p = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            p[i][j] = (cond.probs[i][j] + cond.probs[j][i]) / (2.0 * n as f64);
        }
    }

    let dims = config.target_dims;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut y: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            (0..dims)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z * 1e-4
                })
                .collect()
        })
        .collect();
    let mut velocity = vec![vec![0.0; dims]; n];
    // per-parameter gains keep the fixed learning rate stable
    let mut gains: Vec<Vec<f64>> = vec![vec![1.0; dims]; n];
    let mut kl_trace = Vec::new();

    for iter in 0..config.iterations {
        let exaggeration = if iter < config.exaggeration_iters {
            config.exaggeration_factor
        } else {
            1.0
        };
        let (q, w) = low_dim_similarities(&y);

        let mut gradient = vec![vec![0.0; dims]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let coeff = 4.0 * (exaggeration * p[i][j] - q[i][j]) * w[i][j];
                for k in 0..dims {
                    gradient[i][k] += coeff * (y[i][k] - y[j][k]);
                }
            }
        }

        let momentum = if iter < MOMENTUM_SWITCH_ITER {
            MOMENTUM_EARLY
        } else {
            MOMENTUM_LATE
        };
        for i in 0..n {
            for k in 0..dims {
                let g = gradient[i][k];
                gains[i][k] = if (g > 0.0) == (velocity[i][k] > 0.0) {
                    (gains[i][k] * 0.8).max(0.01)
                } else {
                    gains[i][k] + 0.2
                };
                velocity[i][k] =
                    momentum * velocity[i][k] - config.learning_rate * gains[i][k] * g;
                y[i][k] += velocity[i][k];
            }
        }
        // recentre to keep coordinates bounded
        for k in 0..dims {
            let mean: f64 = y.iter().map(|row| row[k]).sum::<f64>() / n as f64;
            for row in y.iter_mut() {
                row[k] -= mean;
            }
        }

        if (iter + 1) % 50 == 0 || iter + 1 == config.iterations {
            let (q, _) = low_dim_similarities(&y);
            kl_trace.push((iter + 1, kl_divergence(&p, &q)));
        }
    }

    Ok(TsneResult {
        coords: y,
        kl_trace,
    })
}

/// Serializes an embedding as `film_id,director,x,y[,z]`.
pub fn embedding_csv(film_ids: &[String], directors: &[String], coords: &[Vec<f64>]) -> String {
    let dims = coords.first().map_or(2, Vec::len);
    let mut out = String::from("film_id,director,x,y");
    if dims == 3 {
        out.push_str(",z");
    }
    out.push('\n');
    let mut wtr = csv::Writer::from_writer(Vec::new());
    for ((id, director), row) in film_ids.iter().zip(directors).zip(coords) {
        let mut record = vec![id.clone(), director.clone()];
        record.extend(row.iter().map(|v| crate::corpus::format_f64(*v)));
        wtr.write_record(&record).expect("csv write");
    }
    out.push_str(&String::from_utf8(wtr.into_inner().expect("flush")).expect("utf-8"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_points(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect()
    }

    fn blobs(per_cluster: usize, d: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for c in 0..3usize {
            for _ in 0..per_cluster {
                let mut row = vec![0.0; d];
                for (j, v) in row.iter_mut().enumerate() {
                    let center = if j % 3 == c { 5.0 } else { 0.0 };
                    *v = center + rng.gen_range(-0.5..0.5);
                }
                points.push(row);
                labels.push(c);
            }
        }
        (points, labels)
    }

    #[test]
    fn bandwidth_search_attains_target() {
        let points = random_points(60, 10, 1);
        let target = 12.0;
        let aff = conditional_affinities(&points, target).unwrap();
        for (i, perp) in aff.perplexities.iter().enumerate() {
            assert!(
                (perp - target).abs() <= PERPLEXITY_TOL,
                "point {i}: perplexity {perp}"
            );
        }
    }

    #[test]
    fn conditional_rows_are_stochastic() {
        let points = random_points(40, 6, 2);
        let aff = conditional_affinities(&points, 10.0).unwrap();
        for (i, row) in aff.probs.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "row {i} sums to {sum}");
            assert_eq!(row[i], 0.0);
        }
    }

    #[test]
    fn symmetrized_p_sums_to_one() {
        let points = random_points(30, 5, 3);
        let n = points.len();
        let cond = conditional_affinities(&points, 8.0).unwrap();
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                total += (cond.probs[i][j] + cond.probs[j][i]) / (2.0 * n as f64);
            }
        }
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn equidistant_points_sit_at_the_perplexity_ceiling() {
        // vertices of a regular simplex: all pairwise distances equal
        let n = 8;
        let points: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut row = vec![0.0; n];
                row[i] = 1.0;
                row
            })
            .collect();
        let aff = conditional_affinities(&points, (n - 1) as f64).unwrap();
        for perp in &aff.perplexities {
            assert!((perp - (n - 1) as f64).abs() <= PERPLEXITY_TOL);
        }
        // anything lower is unattainable for uniform rows; the search
        // must still terminate and report the ceiling
        let aff = conditional_affinities(&points, 3.0).unwrap();
        for perp in &aff.perplexities {
            assert!((perp - (n - 1) as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn perplexity_bounds_are_enforced() {
        let points = random_points(10, 3, 4);
        assert!(matches!(
            conditional_affinities(&points, 1.0),
            Err(EmbedError::PerplexityInfeasible { .. })
        ));
        assert!(matches!(
            conditional_affinities(&points, 9.5),
            Err(EmbedError::PerplexityInfeasible { .. })
        ));
        assert!(conditional_affinities(&points, 9.0).is_ok());
    }

    #[test]
    fn output_shape_and_determinism() {
        let points = random_points(25, 12, 5);
        let config = EmbedConfig {
            perplexity: 8.0,
            iterations: 300,
            ..EmbedConfig::default()
        };
        let a = tsne(&points, &config).unwrap();
        assert_eq!(a.coords.len(), 25);
        assert!(a.coords.iter().all(|row| row.len() == 2));
        let b = tsne(&points, &config).unwrap();
        assert_eq!(a, b);

        let different_seed = tsne(
            &points,
            &EmbedConfig {
                seed: 9,
                ..config
            },
        )
        .unwrap();
        assert_ne!(a.coords, different_seed.coords);
    }

    #[test]
    fn three_dims_supported() {
        let points = random_points(16, 6, 6);
        let config = EmbedConfig {
            target_dims: 3,
            perplexity: 5.0,
            iterations: 150,
            ..EmbedConfig::default()
        };
        let result = tsne(&points, &config).unwrap();
        assert!(result.coords.iter().all(|row| row.len() == 3));
    }

    #[test]
    fn planted_blobs_embed_with_high_neighbour_purity() {
        let (points, labels) = blobs(20, 68, 7);
        let config = EmbedConfig {
            perplexity: 15.0,
            iterations: 600,
            ..EmbedConfig::default()
        };
        let result = tsne(&points, &config).unwrap();
        let purity = knn_label_purity(&result.coords, &labels, 5);
        assert!(purity >= 0.9, "purity {purity}");
    }

    #[test]
    fn kl_trace_is_finite_and_settles() {
        let (points, _) = blobs(15, 20, 8);
        let config = EmbedConfig {
            perplexity: 10.0,
            iterations: 500,
            ..EmbedConfig::default()
        };
        let result = tsne(&points, &config).unwrap();
        for &(_, kl) in &result.kl_trace {
            assert!(kl.is_finite());
        }
        // after early exaggeration, non-increasing over 100-iteration windows
        let after: Vec<(usize, f64)> = result
            .kl_trace
            .iter()
            .copied()
            .filter(|&(it, _)| it > config.exaggeration_iters)
            .collect();
        for pair in after.windows(3) {
            let (it0, kl0) = pair[0];
            let (it2, kl2) = pair[2];
            assert_eq!(it2 - it0, 100);
            assert!(
                kl2 <= kl0 + 1e-3,
                "KL rose from {kl0} at {it0} to {kl2} at {it2}"
            );
        }
    }

    #[test]
    fn duplicates_are_allowed() {
        let mut points = random_points(12, 4, 9);
        points.push(points[0].clone());
        points.push(points[0].clone());
        let config = EmbedConfig {
            perplexity: 5.0,
            iterations: 200,
            ..EmbedConfig::default()
        };
        let result = tsne(&points, &config).unwrap();
        assert!(result
            .coords
            .iter()
            .flatten()
            .all(|v| v.is_finite()));
    }

    pub(super) fn knn_label_purity(coords: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
        let n = coords.len();
        let mut agree = 0usize;
        let mut total = 0usize;
        for i in 0..n {
            let mut dists: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d2: f64 = coords[i]
                        .iter()
                        .zip(&coords[j])
                        .map(|(a, b)| (a - b).powi(2))
                        .sum();
                    (d2, j)
                })
                .collect();
            dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            for &(_, j) in dists.iter().take(k) {
                total += 1;
                if labels[j] == labels[i] {
                    agree += 1;
                }
            }
        }
        agree as f64 / total as f64
    }
}
