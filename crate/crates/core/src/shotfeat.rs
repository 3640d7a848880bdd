//! Per-film style features.
//!
//! Shot durations are binned into seven classes and summarised by a
//! distribution (DDistr) and a class-transition matrix (DTrans); the
//! per-second scale track yields the analogous SDistr and STrans.
//! Concatenating the four blocks (optionally plus accessory counts)
//! gives the per-film feature vector used throughout the analysis:
//! 68 dimensions in 3-scale mode, 112 in 7-scale mode.
//!
//! Transition matrices are row-conditional by default: row `s` holds the
//! probability of moving to each class given the current class `s`, with
//! self-transitions included. Rows whose source class was never observed
//! stay all-zero; a uniform fill would fabricate mass. Raw counts are
//! retained, and a jointly normalized view is available via
//! [`TransitionNorm::Joint`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{
    reduce_scale_7to3, Corpus, FilmRecord, ScaleReduction, ScaleTrack, ScaleVocabulary, ShotList,
};
use crate::learn::{Dataset, LearnError};

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("shot duration must be positive, got {0} s")]
    NonPositiveDuration(f64),
    #[error("empty shot list")]
    EmptyShotList,
    #[error("transitions need at least two shots")]
    TooFewShots,
    #[error("empty scale track")]
    EmptyTrack,
    #[error("transitions need a scale track of at least two seconds")]
    TooShortTrack,
    #[error("film `{film_id}` is missing its {what}")]
    MissingAnnotation {
        film_id: String,
        what: &'static str,
    },
    #[error("film `{film_id}`: 7-class features requested but the track is 3-class")]
    ScaleModeUnavailable { film_id: String },
    #[error("need at least two duration samples")]
    TooFewSamples,
    #[error("degenerate sample: all durations are equal")]
    DegenerateSample,
    #[error("film `{film_id}`: {source}")]
    Film {
        film_id: String,
        #[source]
        source: Box<FeatureError>,
    },
    #[error("cannot infer a feature layout for dimension {0}")]
    UnknownLayout(usize),
    #[error("feature table: row {row}: {msg}")]
    BadTable { row: usize, msg: String },
}

impl FeatureError {
    fn for_film(self, film_id: &str) -> FeatureError {
        FeatureError::Film {
            film_id: film_id.to_string(),
            source: Box::new(self),
        }
    }
}

/// Shot duration classes. Bin edges in seconds:
/// (0,2) VS, [2,4.5) S, [4.5,7) SM, [7,10) M, [10,22.5) ML,
/// [22.5,40) L, and VL for 40 s and above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DurationClass {
    VeryShort,
    Short,
    ShortMedium,
    Medium,
    MediumLong,
    Long,
    VeryLong,
}

impl DurationClass {
    pub const COUNT: usize = 7;

    pub const ALL: [DurationClass; 7] = [
        DurationClass::VeryShort,
        DurationClass::Short,
        DurationClass::ShortMedium,
        DurationClass::Medium,
        DurationClass::MediumLong,
        DurationClass::Long,
        DurationClass::VeryLong,
    ];

    /// Lower bin edges in seconds; each class spans up to the next edge,
    /// the last class is unbounded above.
    pub const BIN_EDGES_S: [f64; 7] = [0.0, 2.0, 4.5, 7.0, 10.0, 22.5, 40.0];

    pub fn code(self) -> &'static str {
        match self {
            DurationClass::VeryShort => "VS",
            DurationClass::Short => "S",
            DurationClass::ShortMedium => "SM",
            DurationClass::Medium => "M",
            DurationClass::MediumLong => "ML",
            DurationClass::Long => "L",
            DurationClass::VeryLong => "VL",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// `[lower, upper)` bounds in seconds; the last class has an infinite
    /// upper bound.
    pub fn bounds_s(self) -> (f64, f64) {
        let i = self.index();
        let upper = if i + 1 < Self::COUNT {
            Self::BIN_EDGES_S[i + 1]
        } else {
            f64::INFINITY
        };
        (Self::BIN_EDGES_S[i], upper)
    }
}

/// Maps a shot duration to its class. Left-closed bins, so a duration of
/// exactly 2 s is Short, and anything from 40 s up is VeryLong.
pub fn classify_duration(duration_s: f64) -> Result<DurationClass, FeatureError> {
    if !(duration_s > 0.0) {
        return Err(FeatureError::NonPositiveDuration(duration_s));
    }
    for class in DurationClass::ALL.into_iter().rev() {
        if duration_s >= DurationClass::BIN_EDGES_S[class.index()] {
            return Ok(class);
        }
    }
    // duration_s > 0 always clears the lowest edge
    Ok(DurationClass::VeryShort)
}

/// Relative frequencies over an ordered class set. Entries are
/// non-negative and sum to 1 within 1e-9.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    values: Vec<f64>,
}

impl Distribution {
    /// Normalizes class counts to frequencies. `None` when the total is 0.
    pub fn from_counts(counts: &[u64]) -> Option<Distribution> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return None;
        }
        Some(Distribution {
            values: counts.iter().map(|&c| c as f64 / total as f64).collect(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn class_count(&self) -> usize {
        self.values.len()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// How to flatten a transition matrix into feature coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TransitionNorm {
    /// Row-conditional probabilities; unobserved source rows are all-zero.
    #[default]
    Row,
    /// All entries divided by the total transition count.
    Joint,
}

/// Class-transition counts with derived probability views.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    counts: Vec<Vec<u64>>,
}

impl TransitionMatrix {
    pub fn from_counts(counts: Vec<Vec<u64>>) -> TransitionMatrix {
        let n = counts.len();
        assert!(counts.iter().all(|r| r.len() == n), "count matrix must be square");
        TransitionMatrix { counts }
    }

    pub fn class_count(&self) -> usize {
        self.counts.len()
    }

    /// Raw observed counts, rows indexed by source class.
    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Row-conditional probabilities. Each row sums to 1 or, if the
    /// source class was never observed, stays all-zero.
    pub fn row_probabilities(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| {
                let total: u64 = row.iter().sum();
                if total == 0 {
                    vec![0.0; row.len()]
                } else {
                    row.iter().map(|&c| c as f64 / total as f64).collect()
                }
            })
            .collect()
    }

    /// Probabilities normalized by the total transition count; the whole
    /// matrix sums to 1.
    pub fn joint_probabilities(&self) -> Vec<Vec<f64>> {
        let total = self.total();
        self.counts
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
                    .collect()
            })
            .collect()
    }

    /// Row-major flattening of the chosen probability view.
    pub fn flattened(&self, norm: TransitionNorm) -> Vec<f64> {
        let rows = match norm {
            TransitionNorm::Row => self.row_probabilities(),
            TransitionNorm::Joint => self.joint_probabilities(),
        };
        rows.into_iter().flatten().collect()
    }
}

/// Class histogram of shot durations.
pub fn duration_histogram(durations: &[f64]) -> Result<[u64; 7], FeatureError> {
    let mut counts = [0u64; 7];
    for &d in durations {
        counts[classify_duration(d)?.index()] += 1;
    }
    Ok(counts)
}

/// Relative frequency of shots per duration class (DDistr).
pub fn duration_distribution(shots: &ShotList) -> Result<Distribution, FeatureError> {
    if shots.is_empty() {
        return Err(FeatureError::EmptyShotList);
    }
    let counts = duration_histogram(&shots.durations())?;
    Ok(Distribution::from_counts(&counts).expect("non-empty shot list"))
}

/// Transition counts between duration classes of consecutive shots,
/// self-transitions included.
pub fn duration_transition_counts(durations: &[f64]) -> Result<Vec<Vec<u64>>, FeatureError> {
    if durations.len() < 2 {
        return Err(FeatureError::TooFewShots);
    }
    let mut counts = vec![vec![0u64; 7]; 7];
    let mut prev = classify_duration(durations[0])?.index();
    for &d in &durations[1..] {
        let next = classify_duration(d)?.index();
        counts[prev][next] += 1;
        prev = next;
    }
    Ok(counts)
}

/// Duration-class transition matrix (DTrans) over consecutive shots.
pub fn duration_transitions(shots: &ShotList) -> Result<TransitionMatrix, FeatureError> {
    Ok(TransitionMatrix::from_counts(duration_transition_counts(
        &shots.durations(),
    )?))
}

/// Per-second relative frequency of scale classes (SDistr).
pub fn scale_distribution(track: &ScaleTrack) -> Result<Distribution, FeatureError> {
    if track.is_empty() {
        return Err(FeatureError::EmptyTrack);
    }
    let mut counts = vec![0u64; track.vocabulary.class_count()];
    for &label in track.indices() {
        counts[label as usize] += 1;
    }
    Ok(Distribution::from_counts(&counts).expect("non-empty track"))
}

/// Scale-class transition matrix (STrans) over consecutive seconds,
/// self-loops included. Because scale is annotated every second,
/// self-loops dominate.
pub fn scale_transitions(track: &ScaleTrack) -> Result<TransitionMatrix, FeatureError> {
    if track.len() < 2 {
        return Err(FeatureError::TooShortTrack);
    }
    let k = track.vocabulary.class_count();
    let mut counts = vec![vec![0u64; k]; k];
    let indices = track.indices();
    for pair in indices.windows(2) {
        counts[pair[0] as usize][pair[1] as usize] += 1;
    }
    Ok(TransitionMatrix::from_counts(counts))
}

/// Easily derived whole-film counts: production year, a frame-count proxy
/// (track seconds times the configured frame rate), number of shots, and
/// number of per-second scale changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessoryFeatures {
    pub year: i32,
    pub n_frames: u64,
    pub n_shots: u64,
    pub n_scale_changes: u64,
}

impl AccessoryFeatures {
    pub const NAMES: [&'static str; 4] = ["year", "n_frames", "n_shots", "n_scale_changes"];

    pub fn to_vec(self) -> [f64; 4] {
        [
            self.year as f64,
            self.n_frames as f64,
            self.n_shots as f64,
            self.n_scale_changes as f64,
        ]
    }
}

/// Default frame rate used for the frame-count proxy.
pub const DEFAULT_FRAME_RATE: f64 = 25.0;

pub fn accessory_features(
    film: &FilmRecord,
    frame_rate: f64,
) -> Result<AccessoryFeatures, FeatureError> {
    let shots = film.shot_list.as_ref().ok_or(FeatureError::MissingAnnotation {
        film_id: film.film_id.clone(),
        what: "shot list",
    })?;
    let track = film.scale_track.as_ref().ok_or(FeatureError::MissingAnnotation {
        film_id: film.film_id.clone(),
        what: "scale track",
    })?;
    let n_scale_changes = track
        .indices()
        .windows(2)
        .filter(|pair| pair[0] != pair[1])
        .count() as u64;
    Ok(AccessoryFeatures {
        year: film.year,
        n_frames: (track.len() as f64 * frame_rate).round() as u64,
        n_shots: shots.len() as u64,
        n_scale_changes,
    })
}

/// Named slice of a feature vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureBlock {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl FeatureBlock {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

/// Index map naming every coordinate of a feature vector exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureLayout {
    blocks: Vec<FeatureBlock>,
    coordinate_names: Vec<String>,
}

impl FeatureLayout {
    /// Layout for the block order DDistr | DTrans | SDistr | STrans
    /// [| accessory] at the given scale-class count.
    pub fn with_blocks(scale_classes: usize, accessory: bool) -> FeatureLayout {
        assert!(scale_classes == 3 || scale_classes == 7);
        let duration_codes: Vec<&str> = DurationClass::ALL.iter().map(|c| c.code()).collect();
        let scale_codes: Vec<&str> = if scale_classes == 3 {
            ScaleVocabulary::Three.class_codes().to_vec()
        } else {
            ScaleVocabulary::Seven.class_codes().to_vec()
        };

        let mut blocks = Vec::new();
        let mut names = Vec::new();
        let mut push_block = |name: &str, coord_names: Vec<String>| {
            blocks.push(FeatureBlock {
                name: name.to_string(),
                start: names.len(),
                len: coord_names.len(),
            });
            names.extend(coord_names);
        };

        push_block(
            "ddistr",
            duration_codes.iter().map(|c| format!("ddistr[{c}]")).collect(),
        );
        push_block(
            "dtrans",
            duration_codes
                .iter()
                .flat_map(|a| duration_codes.iter().map(move |b| format!("dtrans[{a}->{b}]")))
                .collect(),
        );
        push_block(
            "sdistr",
            scale_codes.iter().map(|c| format!("sdistr[{c}]")).collect(),
        );
        push_block(
            "strans",
            scale_codes
                .iter()
                .flat_map(|a| scale_codes.iter().map(move |b| format!("strans[{a}->{b}]")))
                .collect(),
        );
        if accessory {
            push_block(
                "accessory",
                AccessoryFeatures::NAMES.iter().map(|n| n.to_string()).collect(),
            );
        }
        FeatureLayout {
            blocks,
            coordinate_names: names,
        }
    }

    /// Reconstructs the standard layout from a vector width:
    /// 68/72 for 3-scale mode, 112/116 for 7-scale mode (the +4 variants
    /// carry the accessory block).
    pub fn infer(dim: usize) -> Option<FeatureLayout> {
        match dim {
            68 => Some(Self::with_blocks(3, false)),
            72 => Some(Self::with_blocks(3, true)),
            112 => Some(Self::with_blocks(7, false)),
            116 => Some(Self::with_blocks(7, true)),
            _ => None,
        }
    }

    /// Single-block layout over an arbitrary coordinate subset.
    pub fn single_block(name: &str, coordinate_names: Vec<String>) -> FeatureLayout {
        Self::from_named_blocks(vec![(name.to_string(), coordinate_names)])
    }

    /// Layout from explicit (block name, coordinate names) pairs, laid
    /// out contiguously in the given order.
    pub fn from_named_blocks(named: Vec<(String, Vec<String>)>) -> FeatureLayout {
        let mut blocks = Vec::with_capacity(named.len());
        let mut coordinate_names = Vec::new();
        for (name, names) in named {
            blocks.push(FeatureBlock {
                name,
                start: coordinate_names.len(),
                len: names.len(),
            });
            coordinate_names.extend(names);
        }
        FeatureLayout {
            blocks,
            coordinate_names,
        }
    }

    pub fn dim(&self) -> usize {
        self.coordinate_names.len()
    }

    pub fn blocks(&self) -> &[FeatureBlock] {
        &self.blocks
    }

    pub fn block(&self, name: &str) -> Option<&FeatureBlock> {
        self.blocks.iter().find(|b| b.name.eq_ignore_ascii_case(name))
    }

    pub fn block_names(&self) -> Vec<String> {
        self.blocks.iter().map(|b| b.name.clone()).collect()
    }

    pub fn coordinate_names(&self) -> &[String] {
        &self.coordinate_names
    }
}

/// Configuration for feature-vector assembly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    /// Scale-class count of the SDistr/STrans blocks. Tracks annotated in
    /// the 7-class vocabulary are reduced on the fly in 3-scale mode.
    pub scale_mode: ScaleVocabulary,
    pub include_accessory: bool,
    pub frame_rate: f64,
    pub reduction: ScaleReduction,
    pub transition_norm: TransitionNorm,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            scale_mode: ScaleVocabulary::Three,
            include_accessory: false,
            frame_rate: DEFAULT_FRAME_RATE,
            reduction: ScaleReduction::default(),
            transition_norm: TransitionNorm::Row,
        }
    }
}

/// A film's assembled feature vector with its layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub layout: FeatureLayout,
}

impl FeatureVector {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn block_values(&self, name: &str) -> Option<&[f64]> {
        self.layout.block(name).map(|b| &self.values[b.range()])
    }
}

/// Builds the per-film feature vector: DDistr | DTrans | SDistr | STrans
/// and, if configured, the accessory block.
pub fn assemble_feature_vector(
    film: &FilmRecord,
    config: &FeatureConfig,
) -> Result<FeatureVector, FeatureError> {
    let shots = film.shot_list.as_ref().ok_or(FeatureError::MissingAnnotation {
        film_id: film.film_id.clone(),
        what: "shot list",
    })?;
    let track = film.scale_track.as_ref().ok_or(FeatureError::MissingAnnotation {
        film_id: film.film_id.clone(),
        what: "scale track",
    })?;

    let resolved: ScaleTrack = match (config.scale_mode, track.vocabulary) {
        (ScaleVocabulary::Three, ScaleVocabulary::Three)
        | (ScaleVocabulary::Seven, ScaleVocabulary::Seven) => track.clone(),
        (ScaleVocabulary::Three, ScaleVocabulary::Seven) => {
            reduce_scale_7to3(track, &config.reduction).expect("7-class input")
        }
        (ScaleVocabulary::Seven, ScaleVocabulary::Three) => {
            return Err(FeatureError::ScaleModeUnavailable {
                film_id: film.film_id.clone(),
            });
        }
    };

    let ddistr = duration_distribution(shots).map_err(|e| e.for_film(&film.film_id))?;
    let dtrans = duration_transitions(shots).map_err(|e| e.for_film(&film.film_id))?;
    let sdistr = scale_distribution(&resolved).map_err(|e| e.for_film(&film.film_id))?;
    let strans = scale_transitions(&resolved).map_err(|e| e.for_film(&film.film_id))?;

    let mut values = Vec::new();
    values.extend_from_slice(ddistr.values());
    values.extend(dtrans.flattened(config.transition_norm));
    values.extend_from_slice(sdistr.values());
    values.extend(strans.flattened(config.transition_norm));
    if config.include_accessory {
        let acc = accessory_features(film, config.frame_rate)?;
        values.extend(acc.to_vec());
    }

    let layout = FeatureLayout::with_blocks(
        config.scale_mode.class_count(),
        config.include_accessory,
    );
    debug_assert_eq!(values.len(), layout.dim());
    Ok(FeatureVector { values, layout })
}

/// Maximum-likelihood log-normal fit of shot durations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormalFit {
    /// Mean of ln(duration).
    pub mu: f64,
    /// Population standard deviation of ln(duration).
    pub sigma: f64,
}

pub fn fit_lognormal(durations: &[f64]) -> Result<LogNormalFit, FeatureError> {
    if durations.len() < 2 {
        return Err(FeatureError::TooFewSamples);
    }
    let mut logs = Vec::with_capacity(durations.len());
    for &d in durations {
        if !(d > 0.0) {
            return Err(FeatureError::NonPositiveDuration(d));
        }
        logs.push(d.ln());
    }
    let n = logs.len() as f64;
    let mu = logs.iter().sum::<f64>() / n;
    let var = logs.iter().map(|l| (l - mu).powi(2)).sum::<f64>() / n;
    let sigma = var.sqrt();
    if sigma == 0.0 {
        return Err(FeatureError::DegenerateSample);
    }
    Ok(LogNormalFit { mu, sigma })
}

/// Feature vectors for a whole corpus, in manifest order, with the film
/// metadata needed for reports and relabelings.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub film_ids: Vec<String>,
    pub directors: Vec<String>,
    pub years: Vec<i32>,
    pub x: Vec<Vec<f64>>,
    pub layout: FeatureLayout,
}

impl FeatureTable {
    pub fn n(&self) -> usize {
        self.film_ids.len()
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    /// Exports as `film_id,director,year,f0..f{d-1}`.
    pub fn to_csv(&self) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let mut header = vec![
            "film_id".to_string(),
            "director".to_string(),
            "year".to_string(),
        ];
        header.extend((0..self.dim()).map(|i| format!("f{i}")));
        wtr.write_record(&header).expect("csv write");
        for i in 0..self.n() {
            let mut record = vec![
                self.film_ids[i].clone(),
                self.directors[i].clone(),
                self.years[i].to_string(),
            ];
            record.extend(self.x[i].iter().map(|v| crate::corpus::format_f64(*v)));
            wtr.write_record(&record).expect("csv write");
        }
        String::from_utf8(wtr.into_inner().expect("csv flush")).expect("utf-8")
    }

    /// Sidecar naming every coordinate: `index,block,name`.
    pub fn layout_csv(&self) -> String {
        let mut out = String::from("index,block,name\n");
        for block in self.layout.blocks() {
            for i in block.range() {
                out.push_str(&format!(
                    "{i},{},{}\n",
                    block.name,
                    self.layout.coordinate_names()[i]
                ));
            }
        }
        out
    }

    /// Reads a table produced by [`FeatureTable::to_csv`]; the layout is
    /// reconstructed from the vector width.
    pub fn from_csv(text: &str) -> Result<FeatureTable, FeatureError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers = rdr
            .headers()
            .map_err(|e| FeatureError::BadTable {
                row: 0,
                msg: e.to_string(),
            })?
            .clone();
        let fixed = ["film_id", "director", "year"];
        if headers.len() < 4 || headers.iter().take(3).ne(fixed) {
            return Err(FeatureError::BadTable {
                row: 0,
                msg: "expected header `film_id,director,year,f0..`".into(),
            });
        }
        let dim = headers.len() - 3;
        let layout = FeatureLayout::infer(dim).ok_or(FeatureError::UnknownLayout(dim))?;

        let mut film_ids = Vec::new();
        let mut directors = Vec::new();
        let mut years = Vec::new();
        let mut x = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let row = i + 1;
            let record = record.map_err(|e| FeatureError::BadTable {
                row,
                msg: e.to_string(),
            })?;
            if record.len() != headers.len() {
                return Err(FeatureError::BadTable {
                    row,
                    msg: "field count mismatch".into(),
                });
            }
            film_ids.push(record[0].to_string());
            directors.push(record[1].to_string());
            years.push(record[2].parse().map_err(|_| FeatureError::BadTable {
                row,
                msg: format!("bad year `{}`", &record[2]),
            })?);
            let mut values = Vec::with_capacity(dim);
            for field in record.iter().skip(3) {
                values.push(field.parse().map_err(|_| FeatureError::BadTable {
                    row,
                    msg: format!("bad feature value `{field}`"),
                })?);
            }
            x.push(values);
        }
        if film_ids.is_empty() {
            return Err(FeatureError::BadTable {
                row: 0,
                msg: "no data rows".into(),
            });
        }
        Ok(FeatureTable {
            film_ids,
            directors,
            years,
            x,
            layout,
        })
    }

    /// Labeled dataset with classes drawn from `labels` (one per film).
    pub fn dataset_with_labels(&self, labels: &[String]) -> Result<Dataset, LearnError> {
        assert_eq!(labels.len(), self.n());
        let mut class_set: Vec<String> = labels.to_vec();
        class_set.sort();
        class_set.dedup();
        let y = labels
            .iter()
            .map(|l| class_set.iter().position(|c| c == l).expect("label in set"))
            .collect();
        Dataset::new(
            self.x.clone(),
            y,
            class_set,
            self.layout.clone(),
            self.film_ids.clone(),
        )
    }

    /// Dataset labeled by director.
    pub fn dataset(&self) -> Result<Dataset, LearnError> {
        self.dataset_with_labels(&self.directors)
    }
}

/// Assembles feature vectors for every film in the corpus.
pub fn build_feature_table(
    corpus: &Corpus,
    config: &FeatureConfig,
) -> Result<FeatureTable, FeatureError> {
    let mut film_ids = Vec::with_capacity(corpus.len());
    let mut directors = Vec::with_capacity(corpus.len());
    let mut years = Vec::with_capacity(corpus.len());
    let mut x = Vec::with_capacity(corpus.len());
    let mut layout = None;
    for film in &corpus.films {
        let fv = assemble_feature_vector(film, config)?;
        layout.get_or_insert(fv.layout);
        film_ids.push(film.film_id.clone());
        directors.push(film.director.clone());
        years.push(film.year);
        x.push(fv.values);
    }
    Ok(FeatureTable {
        film_ids,
        directors,
        years,
        x,
        layout: layout.expect("corpus is non-empty"),
    })
}
