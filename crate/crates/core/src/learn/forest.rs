//! Decision forest with Gini splits and impurity-based importance.
//!
//! Trees are grown on bootstrap resamples to purity (or until no split
//! separates anything), with an optional random feature subset per
//! split. Importance is the impurity decrease a feature achieves,
//! weighted by the fraction of samples reaching the split.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Dataset, LearnError};

/// Candidate-feature rule at each split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MaxFeatures {
    /// floor(sqrt(d)), at least 1.
    Sqrt,
    /// Every feature at every split.
    All,
}

impl MaxFeatures {
    fn count(self, d: usize) -> usize {
        match self {
            MaxFeatures::Sqrt => ((d as f64).sqrt().floor() as usize).max(1),
            MaxFeatures::All => d,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        class: usize,
    },
    Split {
        feature: usize,
        /// Samples with value <= threshold go left.
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// One axis-aligned binary tree over an arena of nodes; the root is 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let mut node = 0;
        loop {
            match &self.nodes[node] {
                TreeNode::Leaf { class } => return *class,
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    trees: Vec<DecisionTree>,
    /// Mean impurity decrease per feature across trees, unnormalized.
    raw_importances: Vec<f64>,
    class_set: Vec<String>,
    max_features: MaxFeatures,
    bootstrap_seeds: Vec<u64>,
    n_features: usize,
}

impl ForestModel {
    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn class_set(&self) -> &[String] {
        &self.class_set
    }

    pub fn bootstrap_seeds(&self) -> &[u64] {
        &self.bootstrap_seeds
    }

    /// Majority vote over trees; ties prefer the earlier class.
    pub fn predict(&self, x: &[f64]) -> Result<usize, LearnError> {
        if x.len() != self.n_features {
            return Err(LearnError::DimensionMismatch {
                expected: self.n_features,
                got: x.len(),
            });
        }
        let mut votes = vec![0usize; self.class_set.len()];
        for tree in &self.trees {
            votes[tree.predict(x)] += 1;
        }
        let mut best = 0;
        for c in 1..votes.len() {
            if votes[c] > votes[best] {
                best = c;
            }
        }
        Ok(best)
    }

    /// Out-of-bag accuracy against the training data. Bootstrap index
    /// sets are regenerated from the stored per-tree seeds, so the
    /// caller must pass the dataset the forest was fitted on.
    pub fn oob_accuracy(&self, data: &Dataset) -> Result<Option<f64>, LearnError> {
        if data.dim() != self.n_features {
            return Err(LearnError::DimensionMismatch {
                expected: self.n_features,
                got: data.dim(),
            });
        }
        let n = data.n();
        let mut votes = vec![vec![0usize; self.class_set.len()]; n];
        for (tree, &seed) in self.trees.iter().zip(&self.bootstrap_seeds) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut in_bag = vec![false; n];
            for _ in 0..n {
                in_bag[rng.gen_range(0..n)] = true;
            }
            for i in 0..n {
                if !in_bag[i] {
                    votes[i][tree.predict(data.row(i))] += 1;
                }
            }
        }
        let mut evaluated = 0usize;
        let mut correct = 0usize;
        for i in 0..n {
            if votes[i].iter().all(|&v| v == 0) {
                continue;
            }
            let mut best = 0;
            for c in 1..votes[i].len() {
                if votes[i][c] > votes[i][best] {
                    best = c;
                }
            }
            evaluated += 1;
            if best == data.y()[i] {
                correct += 1;
            }
        }
        if evaluated == 0 {
            return Ok(None);
        }
        Ok(Some(correct as f64 / evaluated as f64))
    }
}

/// Gini impurity of the class counts.
fn gini(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / t).powi(2)).sum::<f64>()
}

struct TreeBuilder<'a> {
    data: &'a Dataset,
    max_features: MaxFeatures,
    nodes: Vec<TreeNode>,
    /// Impurity decrease per feature, weighted by node size over the
    /// bootstrap sample size.
    importances: Vec<f64>,
    bootstrap_len: usize,
}

impl<'a> TreeBuilder<'a> {
    fn leaf(&mut self, counts: &[usize]) -> usize {
        let mut best = 0;
        for c in 1..counts.len() {
            if counts[c] > counts[best] {
                best = c;
            }
        }
        self.nodes.push(TreeNode::Leaf { class: best });
        self.nodes.len() - 1
    }

    fn class_counts(&self, indices: &[usize]) -> Vec<usize> {
        let mut counts = vec![0usize; self.data.class_count()];
        for &i in indices {
            counts[self.data.y()[i]] += 1;
        }
        counts
    }

    fn build(&mut self, indices: &[usize], rng: &mut ChaCha8Rng) -> usize {
        let counts = self.class_counts(indices);
        let node_impurity = gini(&counts, indices.len());
        if node_impurity == 0.0 || indices.len() < 2 {
            return self.leaf(&counts);
        }

        let d = self.data.dim();
        let m = self.max_features.count(d);
        let mut candidates: Vec<usize> = if m >= d {
            (0..d).collect()
        } else {
            // Sample without replacement, then sort for a stable scan order.
            let mut pool: Vec<usize> = (0..d).collect();
            let mut picked = Vec::with_capacity(m);
            for _ in 0..m {
                let j = rng.gen_range(0..pool.len());
                picked.push(pool.swap_remove(j));
            }
            picked
        };
        candidates.sort_unstable();

        let mut best: Option<(f64, usize, f64)> = None; // (decrease, feature, threshold)
        for &feature in &candidates {
            let mut values: Vec<(f64, usize)> = indices
                .iter()
                .map(|&i| (self.data.row(i)[feature], self.data.y()[i]))
                .collect();
            values.sort_by(|a, b| a.0.total_cmp(&b.0));

            let total = values.len();
            let mut left_counts = vec![0usize; counts.len()];
            for split in 1..total {
                left_counts[values[split - 1].1] += 1;
                if values[split].0 == values[split - 1].0 {
                    continue;
                }
                let mut right_counts = counts.clone();
                for (r, l) in right_counts.iter_mut().zip(&left_counts) {
                    *r -= l;
                }
                let left_impurity = gini(&left_counts, split);
                let right_impurity = gini(&right_counts, total - split);
                let weighted = (split as f64 * left_impurity
                    + (total - split) as f64 * right_impurity)
                    / total as f64;
                let decrease = node_impurity - weighted;
                let improves = match &best {
                    None => decrease > 0.0,
                    Some((b, _, _)) => decrease > *b,
                };
                if improves {
                    let threshold = (values[split - 1].0 + values[split].0) / 2.0;
                    best = Some((decrease, feature, threshold));
                }
            }
        }

        let Some((decrease, feature, threshold)) = best else {
            // No candidate feature separates anything here.
            return self.leaf(&counts);
        };

        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
            .iter()
            .partition(|&&i| self.data.row(i)[feature] <= threshold);

        self.importances[feature] += decrease * indices.len() as f64 / self.bootstrap_len as f64;

        let slot = self.nodes.len();
        self.nodes.push(TreeNode::Leaf { class: 0 }); // placeholder
        let left = self.build(&left_idx, rng);
        let right = self.build(&right_idx, rng);
        self.nodes[slot] = TreeNode::Split {
            feature,
            threshold,
            left,
            right,
        };
        slot
    }
}

/// Fits `trees` bootstrap-sampled Gini trees. Deterministic given the
/// seed: per-tree seeds are drawn from one master stream and stored on
/// the model.
pub fn forest_fit(
    data: &Dataset,
    trees: usize,
    max_features: MaxFeatures,
    seed: u64,
) -> Result<ForestModel, LearnError> {
    if trees == 0 {
        return Err(LearnError::InvalidParameter("trees must be >= 1"));
    }
    let counts = data.class_counts();
    if let Some(empty) = counts.iter().position(|&c| c == 0) {
        return Err(LearnError::EmptyClass(data.class_set()[empty].clone()));
    }

    let n = data.n();
    let d = data.dim();
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let bootstrap_seeds: Vec<u64> = (0..trees).map(|_| master.next_u64()).collect();

    let mut fitted = Vec::with_capacity(trees);
    let mut importance_sums = vec![0.0; d];
    for &tree_seed in &bootstrap_seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(tree_seed);
        // The bootstrap draw comes first so oob_accuracy can replay it.
        let indices: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let mut builder = TreeBuilder {
            data,
            max_features,
            nodes: Vec::new(),
            importances: vec![0.0; d],
            bootstrap_len: indices.len(),
        };
        builder.build(&indices, &mut rng);
        for (sum, imp) in importance_sums.iter_mut().zip(&builder.importances) {
            *sum += imp;
        }
        fitted.push(DecisionTree {
            nodes: builder.nodes,
        });
    }

    let raw_importances = importance_sums
        .into_iter()
        .map(|s| s / trees as f64)
        .collect();
    Ok(ForestModel {
        trees: fitted,
        raw_importances,
        class_set: data.class_set().to_vec(),
        max_features,
        bootstrap_seeds,
        n_features: d,
    })
}

/// Mean impurity decrease per feature, normalized to sum to 1. If no
/// tree ever split (single-class data), all weights are 0.
pub fn forest_importance(model: &ForestModel) -> Vec<f64> {
    let total: f64 = model.raw_importances.iter().sum();
    if total <= 0.0 {
        return vec![0.0; model.raw_importances.len()];
    }
    model.raw_importances.iter().map(|&v| v / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shotfeat::FeatureLayout;

    fn layout(d: usize) -> FeatureLayout {
        FeatureLayout::single_block("all", (0..d).map(|i| format!("f{i}")).collect())
    }

    fn dataset(x: Vec<Vec<f64>>, y: Vec<usize>, classes: usize) -> Dataset {
        let d = x[0].len();
        let ids = (0..x.len()).map(|i| format!("s{i}")).collect();
        Dataset::new(
            x,
            y,
            (0..classes).map(|c| format!("c{c}")).collect(),
            layout(d),
            ids,
        )
        .unwrap()
    }

    fn separable() -> Dataset {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..12 {
            x.push(vec![i as f64 * 0.1]);
            y.push(0);
        }
        for i in 0..12 {
            x.push(vec![5.0 + i as f64 * 0.1]);
            y.push(1);
        }
        dataset(x, y, 2)
    }

    #[test]
    fn separable_data_trains_to_perfect_accuracy() {
        let data = separable();
        let model = forest_fit(&data, 15, MaxFeatures::All, 9).unwrap();
        for i in 0..data.n() {
            assert_eq!(model.predict(data.row(i)).unwrap(), data.y()[i]);
        }
    }

    #[test]
    fn same_seed_gives_identical_forests() {
        let data = separable();
        let a = forest_fit(&data, 10, MaxFeatures::Sqrt, 123).unwrap();
        let b = forest_fit(&data, 10, MaxFeatures::Sqrt, 123).unwrap();
        assert_eq!(a, b);
        for i in 0..data.n() {
            assert_eq!(
                a.predict(data.row(i)).unwrap(),
                b.predict(data.row(i)).unwrap()
            );
        }
    }

    #[test]
    fn shuffled_labels_give_chance_level_oob() {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 200;
        let mut x = Vec::new();
        let mut y: Vec<usize> = Vec::new();
        for i in 0..n {
            x.push(vec![
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
            ]);
            y.push(i % 2);
        }
        // Permutation-null oracle: labels carry no signal once shuffled.
        y.shuffle(&mut rng);
        let data = dataset(x, y, 2);
        let model = forest_fit(&data, 60, MaxFeatures::Sqrt, 99).unwrap();
        let oob = model.oob_accuracy(&data).unwrap().unwrap();
        assert!((oob - 0.5).abs() < 0.1, "oob {oob}");
    }

    #[test]
    fn importance_concentrates_on_planted_feature() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..80 {
            let class = i % 2;
            let mut row = vec![if class == 0 { -1.0 } else { 1.0 }];
            for _ in 0..7 {
                row.push(rng.gen_range(-1.0..1.0));
            }
            x.push(row);
            y.push(class);
        }
        let data = dataset(x, y, 2);
        let model = forest_fit(&data, 50, MaxFeatures::All, 21).unwrap();
        let importance = forest_importance(&model);
        assert!(importance[0] > 0.9, "importance {importance:?}");
        let sum: f64 = importance.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pure_noise_importance_is_roughly_uniform() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let d = 6;
        let trees = 400;
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..120 {
            x.push((0..d).map(|_| rng.gen_range(-1.0..1.0)).collect());
            y.push(i % 2);
        }
        let data = dataset(x, y, 2);
        let model = forest_fit(&data, trees, MaxFeatures::Sqrt, 77).unwrap();
        let importance = forest_importance(&model);
        let bound = 3.0 / (trees as f64).sqrt();
        for v in &importance {
            assert!(
                (v - 1.0 / d as f64).abs() < bound,
                "importance {importance:?}"
            );
        }
    }

    #[test]
    fn predictions_invariant_to_positive_feature_scaling() {
        let data = separable();
        let scaled = dataset(
            data.x().iter().map(|r| vec![r[0] * 37.5]).collect(),
            data.y().to_vec(),
            2,
        );
        let a = forest_fit(&data, 20, MaxFeatures::All, 5).unwrap();
        let b = forest_fit(&scaled, 20, MaxFeatures::All, 5).unwrap();
        for q in [-1.0, 0.3, 2.5, 4.9, 5.05, 9.0] {
            assert_eq!(
                a.predict(&[q]).unwrap(),
                b.predict(&[q * 37.5]).unwrap()
            );
        }
    }

    #[test]
    fn rejects_zero_trees() {
        let data = separable();
        assert!(matches!(
            forest_fit(&data, 0, MaxFeatures::All, 1),
            Err(LearnError::InvalidParameter(_))
        ));
    }
}
