//! Period binning, feature similarity and correlation, and per-director
//! importance profiles.

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::learn::{forest_fit, forest_importance, Dataset, MaxFeatures};

/// Production-period bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PeriodLabel {
    P0,
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
}

impl PeriodLabel {
    pub const ALL: [PeriodLabel; 7] = [
        PeriodLabel::P0,
        PeriodLabel::P1,
        PeriodLabel::P2,
        PeriodLabel::P3,
        PeriodLabel::P4,
        PeriodLabel::P5,
        PeriodLabel::P6,
    ];

    /// Inclusive year ranges of the bins.
    pub const RANGES: [(i32, i32); 7] = [
        (1948, 1959),
        (1960, 1969),
        (1970, 1979),
        (1980, 1989),
        (1990, 1999),
        (2000, 2009),
        (2010, 2017),
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn range(self) -> (i32, i32) {
        Self::RANGES[self.index()]
    }

    /// Display name like `(1) 1960-1969`.
    pub fn name(self) -> String {
        let (lo, hi) = self.range();
        format!("({}) {lo}-{hi}", self.index())
    }
}

/// Maps a production year to its decade bin.
pub fn period_label(year: i32) -> Result<PeriodLabel, EvalError> {
    for label in PeriodLabel::ALL {
        let (lo, hi) = label.range();
        if (lo..=hi).contains(&year) {
            return Ok(label);
        }
    }
    Err(EvalError::OutOfRange(year))
}

/// Pearson correlation and histogram intersection between two
/// distributions of equal length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Similarity {
    /// `None` marks an undefined correlation (zero-variance input); it
    /// is never silently reported as 0.
    pub pearson: Option<f64>,
    /// Sum of element-wise minima; in [0, 1] for normalized inputs.
    pub histogram_intersection: f64,
}

fn check_pair(a: &[f64], b: &[f64]) -> Result<(), EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(EvalError::TooShort);
    }
    Ok(())
}

pub fn feature_similarity(a: &[f64], b: &[f64]) -> Result<Similarity, EvalError> {
    check_pair(a, b)?;
    Ok(Similarity {
        pearson: pearson(a, b),
        histogram_intersection: a.iter().zip(b).map(|(x, y)| x.min(*y)).sum(),
    })
}

/// Pearson correlation alone, with zero-variance inputs rejected as an
/// error.
pub fn pearson_correlation(a: &[f64], b: &[f64]) -> Result<f64, EvalError> {
    check_pair(a, b)?;
    pearson(a, b).ok_or(EvalError::ZeroVariance)
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma).powi(2);
        vb += (y - mb).powi(2);
    }
    if va <= 0.0 || vb <= 0.0 {
        return None;
    }
    Some(cov / (va.sqrt() * vb.sqrt()))
}

/// Pearson correlation across films for every pair of feature
/// coordinates. Zero-variance coordinates yield NaN entries, including
/// on the diagonal.
pub fn feature_correlation_matrix(data: &Dataset) -> Result<Vec<Vec<f64>>, EvalError> {
    if data.n() < 3 {
        return Err(EvalError::TooFewSamples { min: 3 });
    }
    let d = data.dim();
    let columns: Vec<Vec<f64>> = (0..d)
        .map(|j| data.x().iter().map(|row| row[j]).collect())
        .collect();
    let mut matrix = vec![vec![f64::NAN; d]; d];
    for i in 0..d {
        for j in i..d {
            let r = pearson(&columns[i], &columns[j]).unwrap_or(f64::NAN);
            matrix[i][j] = r;
            matrix[j][i] = r;
        }
    }
    Ok(matrix)
}

/// Per-block importance for one director, absolute and normalized to the
/// cross-director mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportanceProfile {
    pub director: String,
    pub blocks: Vec<String>,
    pub absolute: Vec<f64>,
    pub normalized: Vec<f64>,
}

/// Importance profiles for every director in the dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportanceTable {
    pub directors: Vec<String>,
    pub blocks: Vec<String>,
    /// directors x blocks, each row sums to 1.
    pub absolute: Vec<Vec<f64>>,
    /// Absolute values divided by the per-block mean across directors.
    pub normalized: Vec<Vec<f64>>,
}

impl ImportanceTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("director,block,absolute,normalized\n");
        for (di, director) in self.directors.iter().enumerate() {
            for (bi, block) in self.blocks.iter().enumerate() {
                out.push_str(&format!(
                    "{director},{block},{},{}\n",
                    crate::corpus::format_f64(self.absolute[di][bi]),
                    crate::corpus::format_f64(self.normalized[di][bi]),
                ));
            }
        }
        out
    }
}

/// One-against-all forest importance for every director, aggregated by
/// feature block. Absolute rows sum to 1; the normalized view divides
/// each block by its mean across directors.
pub fn importance_profiles(
    data: &Dataset,
    trees: usize,
    seed: u64,
) -> Result<ImportanceTable, EvalError> {
    let directors = data.class_set().to_vec();
    let blocks: Vec<String> = data.layout().block_names();
    let mut absolute = Vec::with_capacity(directors.len());
    for (di, director) in directors.iter().enumerate() {
        let count = data.y().iter().filter(|&&y| y == di).count();
        if count < 2 {
            return Err(EvalError::InfeasibleStratification(format!(
                "director `{director}` has {count} film(s)"
            )));
        }
        // positive class second so "director vs rest" reads naturally
        let y: Vec<usize> = data.y().iter().map(|&l| usize::from(l == di)).collect();
        let relabeled = data.relabel(y, vec!["rest".to_string(), director.clone()])?;
        let forest = forest_fit(&relabeled, trees, MaxFeatures::Sqrt, seed.wrapping_add(di as u64))?;
        let per_feature = forest_importance(&forest);
        let per_block: Vec<f64> = data
            .layout()
            .blocks()
            .iter()
            .map(|b| per_feature[b.range()].iter().sum())
            .collect();
        absolute.push(per_block);
    }

    let mut normalized = absolute.clone();
    for bi in 0..blocks.len() {
        let mean: f64 =
            absolute.iter().map(|row| row[bi]).sum::<f64>() / directors.len() as f64;
        for row in normalized.iter_mut() {
            row[bi] = if mean > 0.0 { row[bi] / mean } else { 0.0 };
        }
    }
    Ok(ImportanceTable {
        directors,
        blocks,
        absolute,
        normalized,
    })
}

/// Importance profile of a single director; see [`importance_profiles`].
pub fn importance_profile(
    data: &Dataset,
    director: &str,
    trees: usize,
    seed: u64,
) -> Result<ImportanceProfile, EvalError> {
    let di = data
        .class_set()
        .iter()
        .position(|d| d == director)
        .ok_or_else(|| EvalError::UnknownDirector(director.to_string()))?;
    let table = importance_profiles(data, trees, seed)?;
    Ok(ImportanceProfile {
        director: director.to_string(),
        blocks: table.blocks.clone(),
        absolute: table.absolute[di].clone(),
        normalized: table.normalized[di].clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shotfeat::FeatureLayout;

    #[test]
    fn period_bins_match_the_table() {
        assert_eq!(period_label(1957).unwrap(), PeriodLabel::P0);
        assert_eq!(period_label(1960).unwrap(), PeriodLabel::P1);
        assert_eq!(period_label(2011).unwrap(), PeriodLabel::P6);
        assert_eq!(period_label(1948).unwrap(), PeriodLabel::P0);
        assert_eq!(period_label(2017).unwrap(), PeriodLabel::P6);
        assert!(matches!(period_label(1947), Err(EvalError::OutOfRange(_))));
        assert!(matches!(period_label(2018), Err(EvalError::OutOfRange(_))));
        assert_eq!(PeriodLabel::P1.name(), "(1) 1960-1969");
    }

    #[test]
    fn identical_distributions_similarity() {
        let a = [0.2, 0.3, 0.5];
        let sim = feature_similarity(&a, &a).unwrap();
        assert!((sim.pearson.unwrap() - 1.0).abs() < 1e-12);
        assert!((sim.histogram_intersection - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_supports_intersection_zero() {
        let sim = feature_similarity(&[1.0, 0.0, 0.0], &[0.0, 0.5, 0.5]).unwrap();
        assert_eq!(sim.histogram_intersection, 0.0);
    }

    #[test]
    fn min_sum_intersection() {
        let sim = feature_similarity(&[0.2, 0.8], &[0.5, 0.5]).unwrap();
        assert!((sim.histogram_intersection - 0.7).abs() < 1e-12);
        // the flat input has no variance: correlation undefined, not 0
        assert_eq!(sim.pearson, None);
    }

    #[test]
    fn zero_variance_is_an_error() {
        assert!(matches!(
            pearson_correlation(&[0.5, 0.5], &[0.2, 0.8]),
            Err(EvalError::ZeroVariance)
        ));
        assert!((pearson_correlation(&[0.2, 0.8], &[0.4, 0.6]).unwrap() - 1.0).abs() < 1e-12);
    }

    fn toy_dataset(x: Vec<Vec<f64>>, y: Vec<usize>, classes: usize) -> Dataset {
        let d = x[0].len();
        Dataset::new(
            x.clone(),
            y,
            (0..classes).map(|c| format!("c{c}")).collect(),
            FeatureLayout::single_block("all", (0..d).map(|i| format!("f{i}")).collect()),
            (0..x.len()).map(|i| format!("s{i}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn correlation_matrix_is_symmetric_with_unit_diagonal() {
        let data = toy_dataset(
            vec![
                vec![1.0, 2.0, 2.0],
                vec![2.0, 4.0, 4.0],
                vec![3.0, 5.5, 5.5],
            ],
            vec![0, 0, 1],
            2,
        );
        let m = feature_correlation_matrix(&data).unwrap();
        for i in 0..3 {
            assert!((m[i][i] - 1.0).abs() < 1e-9);
            for j in 0..3 {
                assert!((m[i][j] - m[j][i]).abs() < 1e-12);
            }
        }
        // duplicated coordinate: off-diagonal exactly 1
        assert!((m[1][2] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn correlation_of_independent_noise_is_small() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let x: Vec<Vec<f64>> = (0..1000)
            .map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        let y: Vec<usize> = (0..1000).map(|i| i % 2).collect();
        let data = toy_dataset(x, y, 2);
        let m = feature_correlation_matrix(&data).unwrap();
        assert!(m[0][1].abs() < 0.1, "r = {}", m[0][1]);
    }

    #[test]
    fn zero_variance_coordinate_yields_nan() {
        let data = toy_dataset(
            vec![vec![1.0, 7.0], vec![2.0, 7.0], vec![3.0, 7.0]],
            vec![0, 0, 1],
            2,
        );
        let m = feature_correlation_matrix(&data).unwrap();
        assert!(m[0][1].is_nan());
        assert!(m[1][1].is_nan());
        assert!((m[0][0] - 1.0).abs() < 1e-9);
    }

    fn blocked_dataset() -> Dataset {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut x = Vec::new();
        let mut y = Vec::new();
        // directors separable only via the first block
        for i in 0..36 {
            let class = i % 3;
            let mut row = vec![class as f64 * 2.0 + rng.gen_range(-0.2..0.2)];
            row.push(rng.gen_range(-1.0..1.0));
            row.push(rng.gen_range(-1.0..1.0));
            x.push(row);
            y.push(class);
        }
        let layout = FeatureLayout::from_named_blocks(vec![
            ("signal".to_string(), vec!["sig[0]".to_string()]),
            (
                "noise".to_string(),
                vec!["noise[0]".to_string(), "noise[1]".to_string()],
            ),
        ]);
        Dataset::new(
            x.clone(),
            y,
            vec!["a".into(), "b".into(), "c".into()],
            layout,
            (0..x.len()).map(|i| format!("s{i}")).collect(),
        )
        .unwrap()
    }

    #[test]
    fn planted_signal_block_dominates_importance() {
        let data = blocked_dataset();
        let profile = importance_profile(&data, "a", 80, 7).unwrap();
        assert_eq!(profile.blocks, vec!["signal".to_string(), "noise".to_string()]);
        // single-feature splits land on noise whenever the random
        // subset misses the signal, but the signal block still dominates
        assert!(
            profile.absolute[0] > 0.55 && profile.absolute[0] > profile.absolute[1],
            "absolute {:?}",
            profile.absolute
        );
        let sum: f64 = profile.absolute.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn unknown_director_errors() {
        let data = blocked_dataset();
        assert!(matches!(
            importance_profile(&data, "nobody", 10, 7),
            Err(EvalError::UnknownDirector(_))
        ));
    }

    #[test]
    fn identical_profiles_normalize_to_one() {
        let data = blocked_dataset();
        let table = importance_profiles(&data, 80, 7).unwrap();
        // every block mean positive, normalized rows average 1 per block
        for bi in 0..table.blocks.len() {
            let mean: f64 = table.normalized.iter().map(|r| r[bi]).sum::<f64>()
                / table.directors.len() as f64;
            assert!((mean - 1.0).abs() < 1e-9);
        }
    }
}
