//! Gaussian Naive Bayes with variance smoothing.

use serde::{Deserialize, Serialize};

use super::{Dataset, LearnError};

/// Default multiplier applied to the largest pooled feature variance to
/// obtain the variance floor.
pub const DEFAULT_EPSILON_SCALE: f64 = 1e-9;

/// Per-class priors and per-class, per-feature Gaussian parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnbModel {
    class_set: Vec<String>,
    priors: Vec<f64>,
    means: Vec<Vec<f64>>,
    variances: Vec<Vec<f64>>,
    epsilon: f64,
}

impl GnbModel {
    pub fn class_set(&self) -> &[String] {
        &self.class_set
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn means(&self) -> &[Vec<f64>] {
        &self.means
    }

    pub fn variances(&self) -> &[Vec<f64>] {
        &self.variances
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.means.first().map_or(0, Vec::len)
    }
}

/// Fits class priors (relative frequencies) and per-class feature means
/// and population variances. Every variance is floored at
/// `epsilon_scale` times the largest pooled feature variance, so
/// class-constant features cannot produce a zero denominator.
pub fn gnb_fit(data: &Dataset, epsilon_scale: f64) -> Result<GnbModel, LearnError> {
    if !(epsilon_scale > 0.0) {
        return Err(LearnError::InvalidParameter("epsilon_scale must be > 0"));
    }
    let n = data.n();
    let d = data.dim();
    let k = data.class_count();
    let counts = data.class_counts();
    if let Some(empty) = counts.iter().position(|&c| c == 0) {
        return Err(LearnError::EmptyClass(data.class_set()[empty].clone()));
    }

    let mut means = vec![vec![0.0; d]; k];
    for (row, &label) in data.x().iter().zip(data.y()) {
        for (m, v) in means[label].iter_mut().zip(row) {
            *m += v;
        }
    }
    for (c, mean) in means.iter_mut().enumerate() {
        for m in mean.iter_mut() {
            *m /= counts[c] as f64;
        }
    }

    let mut variances = vec![vec![0.0; d]; k];
    for (row, &label) in data.x().iter().zip(data.y()) {
        for ((var, v), m) in variances[label].iter_mut().zip(row).zip(&means[label]) {
            *var += (v - m).powi(2);
        }
    }
    for (c, var) in variances.iter_mut().enumerate() {
        for v in var.iter_mut() {
            *v /= counts[c] as f64;
        }
    }

    // Pooled (whole-dataset) variance per feature sets the floor scale.
    let mut pooled_mean = vec![0.0; d];
    for row in data.x() {
        for (m, v) in pooled_mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in pooled_mean.iter_mut() {
        *m /= n as f64;
    }
    let mut max_pooled_var: f64 = 0.0;
    for j in 0..d {
        let var = data
            .x()
            .iter()
            .map(|row| (row[j] - pooled_mean[j]).powi(2))
            .sum::<f64>()
            / n as f64;
        max_pooled_var = max_pooled_var.max(var);
    }
    let mut epsilon = epsilon_scale * max_pooled_var;
    if epsilon <= 0.0 {
        // Every feature is constant; fall back to the bare scale.
        epsilon = epsilon_scale;
    }
    for var in variances.iter_mut() {
        for v in var.iter_mut() {
            *v = v.max(epsilon);
        }
    }

    let priors = counts.iter().map(|&c| c as f64 / n as f64).collect();
    Ok(GnbModel {
        class_set: data.class_set().to_vec(),
        priors,
        means,
        variances,
        epsilon,
    })
}

/// Predicts the class of `x`, returning the class index and the
/// unnormalized per-class log-posteriors (log prior plus summed
/// log densities). Ties go to the earlier class.
pub fn gnb_predict(model: &GnbModel, x: &[f64]) -> Result<(usize, Vec<f64>), LearnError> {
    if x.len() != model.dim() {
        return Err(LearnError::DimensionMismatch {
            expected: model.dim(),
            got: x.len(),
        });
    }
    if let Some(col) = x.iter().position(|v| !v.is_finite()) {
        return Err(LearnError::NonFiniteInput {
            sample: 0,
            column: col,
        });
    }
    const LN_2PI: f64 = 1.8378770664093453;
    let mut log_posteriors = Vec::with_capacity(model.priors.len());
    for c in 0..model.priors.len() {
        let mut logp = model.priors[c].ln();
        for ((v, m), var) in x.iter().zip(&model.means[c]).zip(&model.variances[c]) {
            logp += -0.5 * (LN_2PI + var.ln()) - (v - m).powi(2) / (2.0 * var);
        }
        log_posteriors.push(logp);
    }
    let mut best = 0;
    for c in 1..log_posteriors.len() {
        if log_posteriors[c] > log_posteriors[best] {
            best = c;
        }
    }
    Ok((best, log_posteriors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shotfeat::FeatureLayout;

    fn layout(d: usize) -> FeatureLayout {
        FeatureLayout::single_block("all", (0..d).map(|i| format!("f{i}")).collect())
    }

    fn two_class() -> Dataset {
        Dataset::new(
            vec![vec![0.0], vec![2.0], vec![10.0], vec![12.0]],
            vec![0, 0, 1, 1],
            vec!["A".into(), "B".into()],
            layout(1),
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
        )
        .unwrap()
    }

    #[test]
    fn fit_population_moments() {
        let model = gnb_fit(&two_class(), DEFAULT_EPSILON_SCALE).unwrap();
        assert_eq!(model.means()[0][0], 1.0);
        assert_eq!(model.means()[1][0], 11.0);
        assert!((model.variances()[0][0] - 1.0).abs() < 1e-12);
        assert!((model.variances()[1][0] - 1.0).abs() < 1e-12);
        assert_eq!(model.priors(), &[0.5, 0.5]);
    }

    #[test]
    fn fit_constant_features_floor_variance() {
        let data = Dataset::new(
            vec![vec![3.0], vec![3.0], vec![3.0], vec![3.0]],
            vec![0, 0, 1, 1],
            vec!["A".into(), "B".into()],
            layout(1),
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
        )
        .unwrap();
        let model = gnb_fit(&data, DEFAULT_EPSILON_SCALE).unwrap();
        assert_eq!(model.variances()[0][0], model.epsilon());
        assert!(model.epsilon() > 0.0);
        let (_, log_posts) = gnb_predict(&model, &[3.0]).unwrap();
        assert!(log_posts.iter().all(|p| p.is_finite()));
    }

    #[test]
    fn priors_match_class_frequencies() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let n = 240;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            x.push(vec![rng.gen_range(-1.0..1.0)]);
            y.push(i % 6);
        }
        // skew the class sizes
        y.truncate(n - 3);
        x.truncate(n - 3);
        let classes: Vec<String> = (0..6).map(|c| format!("c{c}")).collect();
        let ids: Vec<String> = (0..x.len()).map(|i| format!("s{i}")).collect();
        let data = Dataset::new(x, y.clone(), classes, layout(1), ids).unwrap();
        let model = gnb_fit(&data, DEFAULT_EPSILON_SCALE).unwrap();
        // count oracle
        for c in 0..6 {
            let count = y.iter().filter(|&&l| l == c).count();
            assert!((model.priors()[c] - count as f64 / y.len() as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn predict_sides_of_the_midpoint() {
        let model = gnb_fit(&two_class(), DEFAULT_EPSILON_SCALE).unwrap();
        assert_eq!(gnb_predict(&model, &[1.0]).unwrap().0, 0);
        assert_eq!(gnb_predict(&model, &[11.0]).unwrap().0, 1);
    }

    #[test]
    fn predict_midpoint_tie_breaks_by_class_order() {
        let model = gnb_fit(&two_class(), DEFAULT_EPSILON_SCALE).unwrap();
        let (label, log_posts) = gnb_predict(&model, &[6.0]).unwrap();
        assert!((log_posts[0] - log_posts[1]).abs() < 1e-9);
        assert_eq!(label, 0);
    }

    #[test]
    fn predict_checks_dimension() {
        let model = gnb_fit(&two_class(), DEFAULT_EPSILON_SCALE).unwrap();
        assert!(matches!(
            gnb_predict(&model, &[1.0, 2.0]),
            Err(LearnError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn argmax_invariant_to_sample_duplication() {
        let data = two_class();
        let doubled = Dataset::new(
            data.x().iter().chain(data.x()).cloned().collect(),
            data.y().iter().chain(data.y()).cloned().collect(),
            data.class_set().to_vec(),
            layout(1),
            (0..data.n() * 2).map(|i| format!("s{i}")).collect(),
        )
        .unwrap();
        let m1 = gnb_fit(&data, DEFAULT_EPSILON_SCALE).unwrap();
        let m2 = gnb_fit(&doubled, DEFAULT_EPSILON_SCALE).unwrap();
        for x in [-3.0, 0.5, 5.9, 6.1, 11.0, 30.0] {
            assert_eq!(
                gnb_predict(&m1, &[x]).unwrap().0,
                gnb_predict(&m2, &[x]).unwrap().0
            );
        }
    }
}
