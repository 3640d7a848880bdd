//! Planted-truth synthetic corpora.
//!
//! Each director profile is a pair of Markov chains: one over duration
//! classes driving shot generation (with a per-class log-normal sampler
//! rejected into the class bin, so classifying a sampled duration always
//! recovers the generating class) and one over scale classes driving the
//! per-second track. Optional per-film Dirichlet jitter perturbs the
//! chains so no director collapses to a single point in feature space,
//! and an optional drift term shifts mean shot duration across years.
//!
//! Everything is seeded and deterministic, and the exported files are
//! exactly the corpus module's ingestion formats, so a benchmark can be
//! round-tripped through the full pipeline.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{save_corpus, Corpus, CorpusError, FilmRecord, ScaleTrack, ScaleVocabulary,
    ShotList, ShotRecord};
use crate::shotfeat::{classify_duration, DurationClass};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("infeasible profile `{profile}`: {msg}")]
    InfeasibleProfile { profile: String, msg: String },
    #[error("need at least two profiles, got {0}")]
    TooFewProfiles(usize),
    #[error("films_per_director must be >= 1")]
    NoFilms,
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Log-normal duration sampler for one class, parameterized in ln-space.
/// Draws are rejected until they land inside the class bin; sigma 0
/// degenerates to the point mass exp(mu).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassSampler {
    pub mu: f64,
    pub sigma: f64,
}

/// Generating parameters for one synthetic director.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectorProfile {
    pub name: String,
    /// Initial distribution over the 7 duration classes.
    pub duration_initial: Vec<f64>,
    /// 7x7 row-stochastic duration-class chain.
    pub duration_chain: Vec<Vec<f64>>,
    /// One sampler per duration class.
    pub duration_samplers: Vec<ClassSampler>,
    pub scale_vocabulary: ScaleVocabulary,
    /// Initial distribution over the scale classes.
    pub scale_initial: Vec<f64>,
    /// Row-stochastic scale chain (3x3 or 7x7).
    pub scale_chain: Vec<Vec<f64>>,
    /// Film length bounds in seconds (min, max).
    pub film_length_s: (f64, f64),
    /// Shift of each class's mean duration in seconds per year relative
    /// to `base_year`.
    pub drift_per_year: Option<f64>,
    pub base_year: i32,
    /// Dirichlet concentration for per-film chain perturbation; higher
    /// means films stay closer to the profile chains.
    pub jitter: Option<f64>,
}

const STOCHASTIC_TOL: f64 = 1e-9;
const MAX_REJECTIONS: usize = 10_000;

fn check_distribution(name: &str, what: &str, v: &[f64], len: usize) -> Result<(), SynthError> {
    let err = |msg: String| SynthError::InfeasibleProfile {
        profile: name.to_string(),
        msg,
    };
    if v.len() != len {
        return Err(err(format!("{what} must have {len} entries, got {}", v.len())));
    }
    if v.iter().any(|&p| !p.is_finite() || p < 0.0) {
        return Err(err(format!("{what} has negative or non-finite entries")));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > STOCHASTIC_TOL {
        return Err(err(format!("{what} sums to {sum}, expected 1")));
    }
    Ok(())
}

impl DirectorProfile {
    pub fn validate(&self) -> Result<(), SynthError> {
        let err = |msg: String| SynthError::InfeasibleProfile {
            profile: self.name.clone(),
            msg,
        };
        check_distribution(&self.name, "duration_initial", &self.duration_initial, 7)?;
        if self.duration_chain.len() != 7 {
            return Err(err("duration_chain must be 7x7".into()));
        }
        for (i, row) in self.duration_chain.iter().enumerate() {
            check_distribution(&self.name, &format!("duration_chain row {i}"), row, 7)?;
        }
        if self.duration_samplers.len() != 7 {
            return Err(err("need 7 duration samplers".into()));
        }
        for (i, s) in self.duration_samplers.iter().enumerate() {
            if !s.mu.is_finite() || !s.sigma.is_finite() || s.sigma < 0.0 {
                return Err(err(format!("sampler {i} has invalid parameters")));
            }
        }
        let k = self.scale_vocabulary.class_count();
        check_distribution(&self.name, "scale_initial", &self.scale_initial, k)?;
        if self.scale_chain.len() != k {
            return Err(err(format!("scale_chain must be {k}x{k}")));
        }
        for (i, row) in self.scale_chain.iter().enumerate() {
            check_distribution(&self.name, &format!("scale_chain row {i}"), row, k)?;
        }
        let (min, max) = self.film_length_s;
        if !(min > 0.0) || !(max >= min) {
            return Err(err(format!("film_length_s ({min}, {max}) invalid")));
        }
        if let Some(j) = self.jitter {
            if !(j > 0.0) {
                return Err(err("jitter must be positive".into()));
            }
        }
        Ok(())
    }
}

fn sample_categorical(probs: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.gen();
    let mut cumulative = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_positive = i;
            cumulative += p;
            if u < cumulative {
                return i;
            }
        }
    }
    last_positive
}

/// Dirichlet perturbation of one stochastic row: alpha_i = jitter * p_i,
/// zero entries stay zero so the chain support is preserved.
fn jitter_row(row: &[f64], jitter: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut sampled = vec![0.0; row.len()];
    let mut sum = 0.0;
    for (i, &p) in row.iter().enumerate() {
        if p > 0.0 {
            let gamma = Gamma::new(jitter * p, 1.0).expect("positive shape");
            let g: f64 = gamma.sample(rng);
            sampled[i] = g;
            sum += g;
        }
    }
    if sum > 0.0 && sum.is_finite() {
        for v in sampled.iter_mut() {
            *v /= sum;
        }
        sampled
    } else {
        row.to_vec()
    }
}

fn jitter_chain(chain: &[Vec<f64>], jitter: Option<f64>, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    match jitter {
        None => chain.to_vec(),
        Some(j) => chain.iter().map(|row| jitter_row(row, j, rng)).collect(),
    }
}

/// Sampler parameters after the year drift: the class's arithmetic mean
/// moves by `shift` seconds, sigma unchanged. Checked only for classes
/// that are actually sampled, so drift cannot invalidate unreachable
/// classes.
fn drifted_sampler(
    sampler: &ClassSampler,
    shift: f64,
    profile_name: &str,
    year: i32,
) -> Result<ClassSampler, SynthError> {
    if shift == 0.0 {
        return Ok(*sampler);
    }
    let mean = (sampler.mu + sampler.sigma * sampler.sigma / 2.0).exp() + shift;
    if !(mean > 0.0) {
        return Err(SynthError::InfeasibleProfile {
            profile: profile_name.to_string(),
            msg: format!("drift pushes a class mean to {mean} s at year {year}"),
        });
    }
    Ok(ClassSampler {
        mu: mean.ln() - sampler.sigma * sampler.sigma / 2.0,
        sigma: sampler.sigma,
    })
}

fn sample_duration(
    class: DurationClass,
    sampler: &ClassSampler,
    profile_name: &str,
    rng: &mut ChaCha8Rng,
) -> Result<f64, SynthError> {
    for _ in 0..MAX_REJECTIONS {
        let d = if sampler.sigma == 0.0 {
            sampler.mu.exp()
        } else {
            let z: f64 = StandardNormal.sample(rng);
            (sampler.mu + sampler.sigma * z).exp()
        };
        if classify_duration(d).ok() == Some(class) {
            return Ok(d);
        }
        if sampler.sigma == 0.0 {
            break;
        }
    }
    Err(SynthError::InfeasibleProfile {
        profile: profile_name.to_string(),
        msg: format!(
            "sampler for class {} cannot reach its bin {:?}",
            class.code(),
            class.bounds_s()
        ),
    })
}

/// Generates one film: a shot list driven by the duration chain until
/// the film length is reached, and a second-by-second scale track from
/// the scale chain. Deterministic given the seed.
pub fn sample_film(
    profile: &DirectorProfile,
    year: i32,
    seed: u64,
) -> Result<FilmRecord, SynthError> {
    profile.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let duration_chain = jitter_chain(&profile.duration_chain, profile.jitter, &mut rng);
    let scale_chain = jitter_chain(&profile.scale_chain, profile.jitter, &mut rng);
    let shift = profile
        .drift_per_year
        .map_or(0.0, |d| d * (year - profile.base_year) as f64);

    let (min_len, max_len) = profile.film_length_s;
    let target_length = if min_len == max_len {
        min_len
    } else {
        rng.gen_range(min_len..max_len)
    };

    let film_id = format!("{}_y{year}", profile.name);
    let mut shots = Vec::new();
    let mut elapsed = 0.0;
    let mut state = sample_categorical(&profile.duration_initial, &mut rng);
    loop {
        let class = DurationClass::ALL[state];
        let sampler = drifted_sampler(&profile.duration_samplers[state], shift, &profile.name, year)?;
        let duration_s = sample_duration(class, &sampler, &profile.name, &mut rng)?;
        shots.push(ShotRecord {
            index: shots.len(),
            start_s: elapsed,
            duration_s,
        });
        elapsed += duration_s;
        if elapsed >= target_length {
            break;
        }
        state = sample_categorical(&duration_chain[state], &mut rng);
    }

    let seconds = (elapsed.floor() as usize).max(2);
    let mut labels = Vec::with_capacity(seconds);
    let mut scale_state = sample_categorical(&profile.scale_initial, &mut rng);
    labels.push(scale_state as u8);
    for _ in 1..seconds {
        scale_state = sample_categorical(&scale_chain[scale_state], &mut rng);
        labels.push(scale_state as u8);
    }

    Ok(FilmRecord {
        film_id: film_id.clone(),
        title: film_id.clone(),
        director: profile.name.clone(),
        year,
        is_color: seed % 2 == 0,
        shot_list: Some(ShotList {
            film_id: film_id.clone(),
            shots,
        }),
        scale_track: Some(
            ScaleTrack::from_indices(film_id, profile.scale_vocabulary, labels)
                .expect("labels from chain are in range"),
        ),
    })
}

/// Year range the benchmark spreads each director's films across.
pub const BENCHMARK_YEARS: (i32, i32) = (1950, 2010);

/// Samples `films_per_director` films per profile with years evenly
/// spaced across [`BENCHMARK_YEARS`]. Film ids are `<name>_<index>`.
pub fn build_benchmark(
    profiles: &[DirectorProfile],
    films_per_director: usize,
    seed: u64,
) -> Result<Corpus, SynthError> {
    if profiles.len() < 2 {
        return Err(SynthError::TooFewProfiles(profiles.len()));
    }
    if films_per_director == 0 {
        return Err(SynthError::NoFilms);
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let (year_lo, year_hi) = BENCHMARK_YEARS;
    let span = (year_hi - year_lo) as i64;
    let mut films = Vec::with_capacity(profiles.len() * films_per_director);
    for profile in profiles {
        for j in 0..films_per_director {
            let film_seed = master.next_u64();
            let year = if films_per_director == 1 {
                year_lo
            } else {
                year_lo + ((j as i64 * span) / (films_per_director as i64 - 1)) as i32
            };
            let mut film = sample_film(profile, year, film_seed)?;
            let film_id = format!("{}_{j:02}", profile.name);
            film.title = format!("{} no. {}", profile.name, j + 1);
            film.film_id = film_id.clone();
            if let Some(shots) = film.shot_list.as_mut() {
                shots.film_id = film_id.clone();
            }
            if let Some(track) = film.scale_track.as_mut() {
                track.film_id = film_id.clone();
            }
            films.push(film);
        }
    }
    Ok(Corpus::new(films)?)
}

/// Factory for visibly distinct synthetic directors: each one favours a
/// different duration-class neighbourhood and scale family, with sticky
/// scale chains and moderate per-film jitter.
pub fn default_profiles(count: usize, seed: u64) -> Vec<DirectorProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // geometric-mean bin centres keep rejection rates low
    let samplers = [
        ClassSampler { mu: 0.0, sigma: 0.4 },          // VS ~ 1.0 s
        ClassSampler { mu: 3.0f64.ln(), sigma: 0.2 },  // S
        ClassSampler { mu: 5.6f64.ln(), sigma: 0.1 },  // SM
        ClassSampler { mu: 8.4f64.ln(), sigma: 0.08 }, // M
        ClassSampler { mu: 15.0f64.ln(), sigma: 0.2 }, // ML
        ClassSampler { mu: 30.0f64.ln(), sigma: 0.14 },// L
        ClassSampler { mu: 60.0f64.ln(), sigma: 0.3 }, // VL
    ];
    (0..count)
        .map(|i| {
            let home = i % 7;
            let decay = 0.8 + 0.1 * rng.gen_range(0.0..1.0);
            let duration_chain: Vec<Vec<f64>> = (0..7)
                .map(|s| {
                    let mut row: Vec<f64> = (0..7)
                        .map(|t| {
                            let pull = (-(decay) * (t as f64 - home as f64).abs()).exp();
                            let stay = if t == s { 0.6 } else { 0.0 };
                            pull + stay
                        })
                        .collect();
                    let sum: f64 = row.iter().sum();
                    row.iter_mut().for_each(|v| *v /= sum);
                    row
                })
                .collect();
            let mut duration_initial = vec![0.0; 7];
            duration_initial[home] = 1.0;

            let favourite_scale = i % 3;
            let stickiness = 0.9 + 0.02 * (i % 4) as f64;
            let scale_chain: Vec<Vec<f64>> = (0..3)
                .map(|s| {
                    let mut row = vec![0.0; 3];
                    for t in 0..3 {
                        if t == s {
                            row[t] = stickiness;
                        } else if t == favourite_scale {
                            row[t] = (1.0 - stickiness) * 0.75;
                        } else {
                            row[t] = (1.0 - stickiness) * 0.25;
                        }
                    }
                    if s == favourite_scale {
                        // spread the leftover evenly away from home
                        let leftover = 1.0 - stickiness;
                        for (t, v) in row.iter_mut().enumerate() {
                            if t != s {
                                *v = leftover / 2.0;
                            }
                        }
                    }
                    let sum: f64 = row.iter().sum();
                    row.iter_mut().for_each(|v| *v /= sum);
                    row
                })
                .collect();
            let mut scale_initial = vec![0.0; 3];
            scale_initial[favourite_scale] = 1.0;

            DirectorProfile {
                name: format!("director_{i:02}"),
                duration_initial,
                duration_chain,
                duration_samplers: samplers.to_vec(),
                scale_vocabulary: ScaleVocabulary::Three,
                scale_initial,
                scale_chain,
                film_length_s: (1800.0, 3600.0),
                drift_per_year: None,
                base_year: 1950,
                jitter: Some(150.0),
            }
        })
        .collect()
}

/// Sidecar recording the generating parameters of an exported benchmark.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkTruth {
    pub seed: u64,
    pub films_per_director: usize,
    pub profiles: Vec<DirectorProfile>,
}

/// Writes the benchmark corpus in the corpus module's file formats plus
/// a `truth.json` sidecar with the generating parameters. Returns the
/// manifest path.
pub fn export_benchmark(
    corpus: &Corpus,
    truth: &BenchmarkTruth,
    dir: &Path,
) -> Result<PathBuf, SynthError> {
    let manifest = save_corpus(corpus, dir)?;
    let truth_path = dir.join("truth.json");
    let json = serde_json::to_string_pretty(truth).expect("profile serialization");
    fs::write(&truth_path, json).map_err(|source| SynthError::Io {
        path: truth_path.display().to_string(),
        source,
    })?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{load_corpus, LoadOptions};
    use crate::shotfeat::{duration_distribution, duration_transitions, scale_transitions};

    fn degenerate_profile() -> DirectorProfile {
        let mut duration_chain = vec![vec![0.0; 7]; 7];
        for (i, row) in duration_chain.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        let mut scale_chain = vec![vec![0.0; 3]; 3];
        for (i, row) in scale_chain.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        DirectorProfile {
            name: "point_mass".into(),
            duration_initial: vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            duration_chain,
            duration_samplers: vec![ClassSampler { mu: 0.0, sigma: 0.0 }; 7],
            scale_vocabulary: ScaleVocabulary::Three,
            scale_initial: vec![1.0, 0.0, 0.0],
            scale_chain,
            film_length_s: (50.0, 50.0),
            drift_per_year: None,
            base_year: 1950,
            jitter: None,
        }
    }

    #[test]
    fn degenerate_chain_concentrates_ddistr() {
        let film = sample_film(&degenerate_profile(), 1960, 1).unwrap();
        let d = duration_distribution(film.shot_list.as_ref().unwrap()).unwrap();
        assert_eq!(d.values()[0], 1.0);
        assert!(d.values()[1..].iter().all(|&v| v == 0.0));
        // sampler fixed at exp(0) = 1 s
        assert!(film
            .shot_list
            .unwrap()
            .durations()
            .iter()
            .all(|&d| d == 1.0));
    }

    #[test]
    fn identity_scale_chain_never_changes() {
        let film = sample_film(&degenerate_profile(), 1960, 2).unwrap();
        let track = film.scale_track.unwrap();
        assert!(track.indices().iter().all(|&l| l == 0));
        let changes = track
            .indices()
            .windows(2)
            .filter(|p| p[0] != p[1])
            .count();
        assert_eq!(changes, 0);
    }

    #[test]
    fn same_seed_same_film() {
        let profiles = default_profiles(3, 5);
        let a = sample_film(&profiles[0], 1972, 99).unwrap();
        let b = sample_film(&profiles[0], 1972, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_film(&profiles[0], 1972, 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_mass_initial_is_infeasible() {
        let mut profile = degenerate_profile();
        profile.duration_initial = vec![0.0; 7];
        assert!(matches!(
            sample_film(&profile, 1960, 1),
            Err(SynthError::InfeasibleProfile { .. })
        ));
    }

    #[test]
    fn point_sampler_outside_bin_is_infeasible() {
        let mut profile = degenerate_profile();
        // point mass at 3 s cannot land in the (0,2) bin
        profile.duration_samplers[0] = ClassSampler {
            mu: 3.0f64.ln(),
            sigma: 0.0,
        };
        assert!(matches!(
            sample_film(&profile, 1960, 1),
            Err(SynthError::InfeasibleProfile { .. })
        ));
    }

    #[test]
    fn sampled_durations_always_classify_to_their_class() {
        let profiles = default_profiles(2, 3);
        let film = sample_film(&profiles[1], 1980, 11).unwrap();
        // rejection sampling inverts classify_duration by construction;
        // transition counts therefore reflect the chain states exactly
        for shot in &film.shot_list.unwrap().shots {
            assert!(classify_duration(shot.duration_s).is_ok());
        }
    }

    #[test]
    fn drift_shifts_mean_duration() {
        let mut profile = degenerate_profile();
        profile.duration_initial = vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0];
        profile.duration_samplers[4] = ClassSampler {
            mu: 15.0f64.ln(),
            sigma: 0.0,
        };
        profile.drift_per_year = Some(-0.05);
        profile.base_year = 1950;
        let early = sample_film(&profile, 1950, 7).unwrap();
        let late = sample_film(&profile, 1970, 7).unwrap();
        let mean = |f: &FilmRecord| {
            let d = f.shot_list.as_ref().unwrap().durations();
            d.iter().sum::<f64>() / d.len() as f64
        };
        assert!((mean(&early) - 15.0).abs() < 1e-9);
        assert!((mean(&late) - 14.0).abs() < 1e-9);
    }

    #[test]
    fn benchmark_size_and_round_trip() {
        let profiles = default_profiles(3, 1);
        let corpus = build_benchmark(&profiles, 2, 42).unwrap();
        assert_eq!(corpus.len(), 6);
        assert_eq!(corpus.directors.len(), 3);

        let dir = tempfile::tempdir().unwrap();
        let truth = BenchmarkTruth {
            seed: 42,
            films_per_director: 2,
            profiles: profiles.clone(),
        };
        let manifest = export_benchmark(&corpus, &truth, dir.path()).unwrap();
        let reloaded = load_corpus(&manifest, dir.path(), LoadOptions::default()).unwrap();
        assert_eq!(reloaded, corpus);

        let truth_text = std::fs::read_to_string(dir.path().join("truth.json")).unwrap();
        let parsed: BenchmarkTruth = serde_json::from_str(&truth_text).unwrap();
        assert_eq!(parsed, truth);
    }

    #[test]
    fn build_benchmark_requires_two_profiles() {
        let profiles = default_profiles(1, 1);
        assert!(matches!(
            build_benchmark(&profiles, 2, 0),
            Err(SynthError::TooFewProfiles(1))
        ));
    }

    /// Power-iteration oracle for the stationary distribution.
    fn stationary(chain: &[Vec<f64>]) -> Vec<f64> {
        let k = chain.len();
        let mut dist = vec![1.0 / k as f64; k];
        for _ in 0..10_000 {
            let mut next = vec![0.0; k];
            for (s, &p) in dist.iter().enumerate() {
                for t in 0..k {
                    next[t] += p * chain[s][t];
                }
            }
            dist = next;
        }
        dist
    }

    #[test]
    fn pooled_ddistr_converges_to_stationary() {
        let mut profiles = default_profiles(2, 9);
        for p in profiles.iter_mut() {
            p.jitter = None;
            p.duration_initial = stationary(&p.duration_chain);
            p.film_length_s = (1800.0, 1800.0);
        }
        let corpus = build_benchmark(&profiles, 200, 7).unwrap();
        let target = stationary(&profiles[0].duration_chain);
        let mut counts = [0u64; 7];
        for film in corpus.films_by("director_00") {
            let hist =
                crate::shotfeat::duration_histogram(&film.shot_list.as_ref().unwrap().durations())
                    .unwrap();
            for (c, h) in counts.iter_mut().zip(hist.iter()) {
                *c += h;
            }
        }
        let total: u64 = counts.iter().sum();
        let mut kl = 0.0;
        for (c, &t) in counts.iter().zip(&target) {
            let p = *c as f64 / total as f64;
            if p > 0.0 && t > 0.0 {
                kl += p * (p / t).ln();
            }
        }
        assert!(kl < 0.01, "KL {kl}");
    }

    #[test]
    fn long_film_dtrans_matches_generating_chain() {
        // three active classes, rows moderately concentrated
        let mut profile = degenerate_profile();
        profile.name = "chain3".into();
        profile.duration_initial = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        profile.duration_chain = vec![
            vec![0.6, 0.3, 0.1, 0.0, 0.0, 0.0, 0.0],
            vec![0.25, 0.6, 0.15, 0.0, 0.0, 0.0, 0.0],
            vec![0.2, 0.2, 0.6, 0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        ];
        profile.duration_samplers = vec![
            ClassSampler { mu: 0.0, sigma: 0.3 },
            ClassSampler { mu: 3.0f64.ln(), sigma: 0.15 },
            ClassSampler { mu: 5.6f64.ln(), sigma: 0.08 },
            ClassSampler { mu: 8.4f64.ln(), sigma: 0.0 },
            ClassSampler { mu: 15.0f64.ln(), sigma: 0.0 },
            ClassSampler { mu: 30.0f64.ln(), sigma: 0.0 },
            ClassSampler { mu: 60.0f64.ln(), sigma: 0.0 },
        ];
        // mean shot ~ 3.1 s, so this yields over 10,000 shots
        profile.film_length_s = (34_000.0, 34_000.0);
        let film = sample_film(&profile, 1960, 13).unwrap();
        let shots = film.shot_list.as_ref().unwrap();
        assert!(shots.len() >= 10_000, "{} shots", shots.len());

        let empirical = duration_transitions(shots).unwrap().row_probabilities();
        let mut max_err: f64 = 0.0;
        for s in 0..3 {
            for t in 0..3 {
                max_err = max_err.max((empirical[s][t] - profile.duration_chain[s][t]).abs());
            }
        }
        assert!(max_err < 0.02, "max row-entry error {max_err}");
    }

    #[test]
    fn scale_transitions_reflect_sticky_chains() {
        let profiles = default_profiles(2, 21);
        let film = sample_film(&profiles[0], 1990, 3).unwrap();
        let strans = scale_transitions(film.scale_track.as_ref().unwrap()).unwrap();
        let rows = strans.row_probabilities();
        // self-loops dominate for every observed scale
        for (s, row) in rows.iter().enumerate() {
            if row.iter().sum::<f64>() > 0.0 {
                assert!(row[s] > 0.5, "row {s}: {row:?}");
            }
        }
    }
}
