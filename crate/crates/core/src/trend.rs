//! Robust regression of per-film shot statistics against production
//! year: Theil-Sen (median of pairwise slopes) and RANSAC (consensus of
//! two-point hypotheses), both chosen for their resilience to outliers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;

#[derive(Debug, Error)]
pub enum TrendError {
    #[error("need at least two points")]
    TooFewPoints,
    #[error("need at least two distinct x values")]
    DegenerateX,
    #[error("no consensus set of at least two inliers")]
    NoConsensus,
    #[error("iterations must be >= 1")]
    NoIterations,
    #[error("non-finite input point")]
    NonFiniteInput,
    #[error("director `{director}` has {n} film(s) with shot lists; need at least 2")]
    InsufficientFilms { director: String, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrendMethod {
    TheilSen,
    Ransac,
}

impl TrendMethod {
    pub fn name(self) -> &'static str {
        match self {
            TrendMethod::TheilSen => "theil_sen",
            TrendMethod::Ransac => "ransac",
        }
    }
}

/// A fitted line `y = slope * x + intercept` with, for RANSAC, the final
/// inlier mask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendLine {
    pub slope: f64,
    pub intercept: f64,
    pub method: TrendMethod,
    pub inlier_mask: Option<Vec<bool>>,
}

impl TrendLine {
    pub fn predict(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

fn validate(points: &[(f64, f64)]) -> Result<(), TrendError> {
    if points.len() < 2 {
        return Err(TrendError::TooFewPoints);
    }
    if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(TrendError::NonFiniteInput);
    }
    Ok(())
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Theil-Sen line fit: the slope is the median of all pairwise slopes
/// (vertical pairs skipped), the intercept the median of `y - slope*x`.
/// Even-count medians are averaged.
pub fn theil_sen(points: &[(f64, f64)]) -> Result<TrendLine, TrendError> {
    validate(points)?;
    let mut slopes = Vec::with_capacity(points.len() * (points.len() - 1) / 2);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let (xi, yi) = points[i];
            let (xj, yj) = points[j];
            if xi == xj {
                continue;
            }
            slopes.push((yj - yi) / (xj - xi));
        }
    }
    if slopes.is_empty() {
        return Err(TrendError::DegenerateX);
    }
    let slope = median(&mut slopes);
    let mut offsets: Vec<f64> = points.iter().map(|(x, y)| y - slope * x).collect();
    let intercept = median(&mut offsets);
    Ok(TrendLine {
        slope,
        intercept,
        method: TrendMethod::TheilSen,
        inlier_mask: None,
    })
}

fn least_squares(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    let mx = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Floor for the automatic residual threshold, so exact lines whose
/// Theil-Sen residuals are at rounding level still admit their points.
const AUTO_THRESHOLD_FLOOR: f64 = 1e-9;

/// RANSAC line fit: repeated two-point hypotheses, the largest set of
/// points within `residual_threshold` wins, and the line is refit by
/// least squares on that set (the reported mask is recomputed against
/// the refit line). With `residual_threshold` unset, the threshold is
/// 1.5 times the median absolute residual of the Theil-Sen fit.
/// Deterministic given the seed.
pub fn ransac_line(
    points: &[(f64, f64)],
    residual_threshold: Option<f64>,
    iterations: usize,
    seed: u64,
) -> Result<TrendLine, TrendError> {
    validate(points)?;
    if iterations == 0 {
        return Err(TrendError::NoIterations);
    }
    let distinct_x = {
        let mut xs: Vec<f64> = points.iter().map(|(x, _)| *x).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs.len()
    };
    if distinct_x < 2 {
        return Err(TrendError::DegenerateX);
    }

    let threshold = match residual_threshold {
        Some(t) => t,
        None => {
            let ts = theil_sen(points)?;
            let mut residuals: Vec<f64> = points
                .iter()
                .map(|&(x, y)| (y - ts.predict(x)).abs())
                .collect();
            (1.5 * median(&mut residuals)).max(AUTO_THRESHOLD_FLOOR)
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = points.len();
    let mut best: Option<(usize, f64, f64)> = None; // (inliers, slope, intercept)
    for _ in 0..iterations {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n);
        while j == i {
            j = rng.gen_range(0..n);
        }
        let (xi, yi) = points[i];
        let (xj, yj) = points[j];
        if xi == xj {
            continue;
        }
        let slope = (yj - yi) / (xj - xi);
        let intercept = yi - slope * xi;
        let inliers = points
            .iter()
            .filter(|&&(x, y)| (y - (slope * x + intercept)).abs() <= threshold)
            .count();
        let improves = match best {
            None => true,
            Some((b, _, _)) => inliers > b,
        };
        if improves {
            best = Some((inliers, slope, intercept));
        }
    }

    let Some((count, slope, intercept)) = best else {
        return Err(TrendError::NoConsensus);
    };
    if count < 2 {
        return Err(TrendError::NoConsensus);
    }

    let hypothesis_inliers: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(x, y)| (y - (slope * x + intercept)).abs() <= threshold)
        .collect();
    let (slope, intercept) =
        least_squares(&hypothesis_inliers).unwrap_or((slope, intercept));
    let inlier_mask: Vec<bool> = points
        .iter()
        .map(|&(x, y)| (y - (slope * x + intercept)).abs() <= threshold)
        .collect();
    if inlier_mask.iter().filter(|&&m| m).count() < 2 {
        return Err(TrendError::NoConsensus);
    }
    Ok(TrendLine {
        slope,
        intercept,
        method: TrendMethod::Ransac,
        inlier_mask: Some(inlier_mask),
    })
}

/// Per-film statistic regressed against year.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FilmStatistic {
    #[default]
    MeanShotDuration,
    MedianShotDuration,
}

impl FilmStatistic {
    fn of(self, durations: &[f64]) -> f64 {
        match self {
            FilmStatistic::MeanShotDuration => {
                durations.iter().sum::<f64>() / durations.len() as f64
            }
            FilmStatistic::MedianShotDuration => {
                let mut sorted = durations.to_vec();
                median(&mut sorted)
            }
        }
    }
}

/// Both robust fits for one director.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectorTrend {
    pub director: String,
    pub n_films: usize,
    pub theil_sen: TrendLine,
    pub ransac: TrendLine,
}

/// Default RANSAC iteration budget for director trends.
pub const DEFAULT_RANSAC_ITERATIONS: usize = 1000;

/// Fits both estimators per director on (year, per-film statistic)
/// points. Every director needs at least two films with shot lists.
pub fn director_trends(
    corpus: &Corpus,
    statistic: FilmStatistic,
    ransac_iterations: usize,
    seed: u64,
) -> Result<Vec<DirectorTrend>, TrendError> {
    let mut trends = Vec::with_capacity(corpus.directors.len());
    for (di, director) in corpus.directors.iter().enumerate() {
        let points: Vec<(f64, f64)> = corpus
            .films_by(director)
            .filter_map(|film| {
                film.shot_list
                    .as_ref()
                    .map(|shots| (film.year as f64, statistic.of(&shots.durations())))
            })
            .collect();
        if points.len() < 2 {
            return Err(TrendError::InsufficientFilms {
                director: director.clone(),
                n: points.len(),
            });
        }
        trends.push(DirectorTrend {
            director: director.clone(),
            n_films: points.len(),
            theil_sen: theil_sen(&points)?,
            ransac: ransac_line(
                &points,
                None,
                ransac_iterations,
                seed.wrapping_add(di as u64),
            )?,
        });
    }
    Ok(trends)
}

/// Serializes trends as `director,method,slope,intercept,n_films`.
pub fn trends_csv(trends: &[DirectorTrend]) -> String {
    let mut out = String::from("director,method,slope,intercept,n_films\n");
    for t in trends {
        for line in [&t.theil_sen, &t.ransac] {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t.director,
                line.method.name(),
                crate::corpus::format_f64(line.slope),
                crate::corpus::format_f64(line.intercept),
                t.n_films
            ));
        }
    }
    out
}
