//! Film corpus data model and ingestion.
//!
//! A corpus is described by a manifest table plus, per film, a shot list
//! (shot boundaries and durations in seconds) and a per-second shot-scale
//! track. All tables are UTF-8 CSV with `.` as the decimal separator;
//! file paths in the manifest are relative to the data directory.
//!
//! Parsing is strict: gaps, overlaps, duplicate rows, and labels outside
//! the declared vocabulary are errors, not warnings. An opt-in
//! forward-fill mode exists for scale tracks with missing seconds.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for the shot contiguity check, in seconds.
pub const CONTIGUITY_TOL_S: f64 = 1e-6;

/// Valid production-year range for a film record.
pub const YEAR_RANGE: (i32, i32) = (1900, 2100);

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{file}: expected header `{expected}`")]
    BadHeader { file: String, expected: &'static str },
    #[error("{file}: row {row}: {msg}")]
    BadRow { file: String, row: usize, msg: String },
    #[error("{file}: no data rows")]
    EmptyTable { file: String },
    #[error("shot {index}: duration {duration_s} s is not positive")]
    NonPositiveDuration { index: usize, duration_s: f64 },
    #[error(
        "shot {index} starts at {actual_s} s but previous shot ends at {expected_s} s \
         (gap or overlap beyond 1e-6 s)"
    )]
    NonContiguous {
        index: usize,
        expected_s: f64,
        actual_s: f64,
    },
    #[error("duplicate shot index {index}")]
    DuplicateIndex { index: usize },
    #[error("shot indices must be consecutive from 0; expected {expected}, found {found}")]
    NonConsecutiveIndex { expected: usize, found: usize },
    #[error("unknown scale label `{label}` for the {vocabulary}-class vocabulary")]
    UnknownLabel { label: String, vocabulary: usize },
    #[error("missing annotation for second {second}")]
    MissingSecond { second: usize },
    #[error("duplicate annotation for second {second}")]
    DuplicateSecond { second: usize },
    #[error("scale reduction mapping is missing source label `{0}`")]
    IncompleteMapping(String),
    #[error("expected a {expected}-class scale track")]
    WrongVocabulary { expected: usize },
    #[error("film `{film_id}`: {source}")]
    Film {
        film_id: String,
        #[source]
        source: Box<CorpusError>,
    },
    #[error("film `{film_id}` has neither a shot list nor a scale track")]
    MissingAnnotations { film_id: String },
    #[error("duplicate film id `{0}`")]
    DuplicateFilmId(String),
    #[error("film `{film_id}`: year {year} outside {}..={}", YEAR_RANGE.0, YEAR_RANGE.1)]
    YearOutOfRange { film_id: String, year: i32 },
    #[error("corpus contains no films")]
    EmptyCorpus,
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CorpusError {
    fn for_film(self, film_id: &str) -> CorpusError {
        CorpusError::Film {
            film_id: film_id.to_string(),
            source: Box::new(self),
        }
    }
}

/// One camera take: index within the film, onset, and length in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub index: usize,
    pub start_s: f64,
    pub duration_s: f64,
}

/// Ordered, contiguous shot sequence for one film.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotList {
    pub film_id: String,
    pub shots: Vec<ShotRecord>,
}

impl ShotList {
    pub fn len(&self) -> usize {
        self.shots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shots.is_empty()
    }

    pub fn durations(&self) -> Vec<f64> {
        self.shots.iter().map(|s| s.duration_s).collect()
    }

    pub fn total_duration_s(&self) -> f64 {
        self.shots.iter().map(|s| s.duration_s).sum()
    }

    /// Checks the shot-list invariants: positive durations, consecutive
    /// indices from 0, and contiguity within [`CONTIGUITY_TOL_S`].
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.shots.is_empty() {
            return Err(CorpusError::EmptyTable {
                file: format!("shot list `{}`", self.film_id),
            });
        }
        let mut expected_start = self.shots[0].start_s;
        for (i, shot) in self.shots.iter().enumerate() {
            if shot.index != i {
                return Err(CorpusError::NonConsecutiveIndex {
                    expected: i,
                    found: shot.index,
                });
            }
            if !(shot.duration_s > 0.0) {
                return Err(CorpusError::NonPositiveDuration {
                    index: shot.index,
                    duration_s: shot.duration_s,
                });
            }
            if (shot.start_s - expected_start).abs() > CONTIGUITY_TOL_S {
                return Err(CorpusError::NonContiguous {
                    index: shot.index,
                    expected_s: expected_start,
                    actual_s: shot.start_s,
                });
            }
            expected_start = shot.start_s + shot.duration_s;
        }
        Ok(())
    }
}

/// Seven-level shot-scale vocabulary, from tightest to widest framing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScaleLabel7 {
    /// Extreme close-up.
    Ecu,
    /// Close-up.
    Cu,
    /// Medium close-up.
    Mcu,
    /// Medium shot.
    Ms,
    /// Medium long shot.
    Mls,
    /// Long shot.
    Ls,
    /// Extreme long shot.
    Els,
}

impl ScaleLabel7 {
    pub const ALL: [ScaleLabel7; 7] = [
        ScaleLabel7::Ecu,
        ScaleLabel7::Cu,
        ScaleLabel7::Mcu,
        ScaleLabel7::Ms,
        ScaleLabel7::Mls,
        ScaleLabel7::Ls,
        ScaleLabel7::Els,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ScaleLabel7::Ecu => "ECU",
            ScaleLabel7::Cu => "CU",
            ScaleLabel7::Mcu => "MCU",
            ScaleLabel7::Ms => "MS",
            ScaleLabel7::Mls => "MLS",
            ScaleLabel7::Ls => "LS",
            ScaleLabel7::Els => "ELS",
        }
    }

    pub fn parse(code: &str) -> Option<ScaleLabel7> {
        Self::ALL.into_iter().find(|l| l.code() == code)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Reduced three-family shot-scale vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScaleLabel3 {
    /// Close shots.
    Cs,
    /// Medium shots.
    Ms,
    /// Long shots.
    Ls,
}

impl ScaleLabel3 {
    pub const ALL: [ScaleLabel3; 3] = [ScaleLabel3::Cs, ScaleLabel3::Ms, ScaleLabel3::Ls];

    pub fn code(self) -> &'static str {
        match self {
            ScaleLabel3::Cs => "CS",
            ScaleLabel3::Ms => "MS",
            ScaleLabel3::Ls => "LS",
        }
    }

    pub fn parse(code: &str) -> Option<ScaleLabel3> {
        Self::ALL.into_iter().find(|l| l.code() == code)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Marker for the scale vocabulary a track is annotated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScaleVocabulary {
    Three,
    Seven,
}

impl ScaleVocabulary {
    pub fn class_count(self) -> usize {
        match self {
            ScaleVocabulary::Three => 3,
            ScaleVocabulary::Seven => 7,
        }
    }

    pub fn class_codes(self) -> &'static [&'static str] {
        match self {
            ScaleVocabulary::Three => &["CS", "MS", "LS"],
            ScaleVocabulary::Seven => &["ECU", "CU", "MCU", "MS", "MLS", "LS", "ELS"],
        }
    }

    fn parse_label(self, code: &str) -> Option<u8> {
        self.class_codes()
            .iter()
            .position(|c| *c == code)
            .map(|i| i as u8)
    }
}

impl fmt::Display for ScaleVocabulary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-class", self.class_count())
    }
}

/// Second-by-second shot-scale annotation for one film.
///
/// Labels are stored as indices into the vocabulary's class list so that
/// downstream statistics are vocabulary-agnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleTrack {
    pub film_id: String,
    pub vocabulary: ScaleVocabulary,
    labels: Vec<u8>,
}

impl ScaleTrack {
    pub fn from_labels7(film_id: impl Into<String>, labels: &[ScaleLabel7]) -> ScaleTrack {
        ScaleTrack {
            film_id: film_id.into(),
            vocabulary: ScaleVocabulary::Seven,
            labels: labels.iter().map(|l| l.index() as u8).collect(),
        }
    }

    pub fn from_labels3(film_id: impl Into<String>, labels: &[ScaleLabel3]) -> ScaleTrack {
        ScaleTrack {
            film_id: film_id.into(),
            vocabulary: ScaleVocabulary::Three,
            labels: labels.iter().map(|l| l.index() as u8).collect(),
        }
    }

    pub fn from_indices(
        film_id: impl Into<String>,
        vocabulary: ScaleVocabulary,
        labels: Vec<u8>,
    ) -> Result<ScaleTrack, CorpusError> {
        let count = vocabulary.class_count() as u8;
        if let Some(bad) = labels.iter().find(|&&l| l >= count) {
            return Err(CorpusError::UnknownLabel {
                label: bad.to_string(),
                vocabulary: vocabulary.class_count(),
            });
        }
        Ok(ScaleTrack {
            film_id: film_id.into(),
            vocabulary,
            labels,
        })
    }

    /// Label indices, one per second of annotated runtime.
    pub fn indices(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label_code(&self, second: usize) -> &'static str {
        self.vocabulary.class_codes()[self.labels[second] as usize]
    }
}

/// How to treat missing seconds when parsing a scale track.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GapPolicy {
    /// A gap is an error. Silent fills would corrupt transition counts.
    #[default]
    Strict,
    /// Fill gaps with the most recent label. The track must still start
    /// at second 0.
    ForwardFill,
}

/// Configurable mapping from the 7-level vocabulary to the 3 families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleReduction {
    map: [ScaleLabel3; 7],
}

impl Default for ScaleReduction {
    /// ECU/CU/MCU fold into close shots, MS/MLS into medium shots, and
    /// LS/ELS into long shots. MLS frames actors roughly knee-up, so it
    /// stays subject-dominated and lands in the medium family.
    fn default() -> Self {
        ScaleReduction {
            map: [
                ScaleLabel3::Cs,
                ScaleLabel3::Cs,
                ScaleLabel3::Cs,
                ScaleLabel3::Ms,
                ScaleLabel3::Ms,
                ScaleLabel3::Ls,
                ScaleLabel3::Ls,
            ],
        }
    }
}

impl ScaleReduction {
    pub fn new(map: [ScaleLabel3; 7]) -> ScaleReduction {
        ScaleReduction { map }
    }

    /// Parses a mapping spec like `ECU:CS,CU:CS,MCU:CS,MS:MS,MLS:MS,LS:LS,ELS:LS`.
    /// Every one of the seven source labels must be assigned a family.
    pub fn parse(spec: &str) -> Result<ScaleReduction, CorpusError> {
        let mut map: [Option<ScaleLabel3>; 7] = [None; 7];
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (src, dst) = part.split_once(':').ok_or_else(|| CorpusError::BadRow {
                file: "scale reduction".into(),
                row: 0,
                msg: format!("expected `SRC:DST`, got `{part}`"),
            })?;
            let src = ScaleLabel7::parse(src.trim()).ok_or_else(|| CorpusError::UnknownLabel {
                label: src.trim().to_string(),
                vocabulary: 7,
            })?;
            let dst = ScaleLabel3::parse(dst.trim()).ok_or_else(|| CorpusError::UnknownLabel {
                label: dst.trim().to_string(),
                vocabulary: 3,
            })?;
            map[src.index()] = Some(dst);
        }
        for (i, slot) in map.iter().enumerate() {
            if slot.is_none() {
                return Err(CorpusError::IncompleteMapping(
                    ScaleLabel7::ALL[i].code().to_string(),
                ));
            }
        }
        Ok(ScaleReduction {
            map: map.map(|m| m.unwrap()),
        })
    }

    pub fn target(&self, label: ScaleLabel7) -> ScaleLabel3 {
        self.map[label.index()]
    }
}

/// One film: identity plus whatever annotations exist for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilmRecord {
    pub film_id: String,
    pub title: String,
    pub director: String,
    pub year: i32,
    pub is_color: bool,
    pub shot_list: Option<ShotList>,
    pub scale_track: Option<ScaleTrack>,
}

/// An immutable collection of films with the derived director label set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub films: Vec<FilmRecord>,
    /// Sorted, deduplicated director labels.
    pub directors: Vec<String>,
}

impl Corpus {
    pub fn new(films: Vec<FilmRecord>) -> Result<Corpus, CorpusError> {
        if films.is_empty() {
            return Err(CorpusError::EmptyCorpus);
        }
        let mut seen = HashSet::new();
        for film in &films {
            if !seen.insert(film.film_id.clone()) {
                return Err(CorpusError::DuplicateFilmId(film.film_id.clone()));
            }
            if film.year < YEAR_RANGE.0 || film.year > YEAR_RANGE.1 {
                return Err(CorpusError::YearOutOfRange {
                    film_id: film.film_id.clone(),
                    year: film.year,
                });
            }
            if film.shot_list.is_none() && film.scale_track.is_none() {
                return Err(CorpusError::MissingAnnotations {
                    film_id: film.film_id.clone(),
                });
            }
        }
        let mut directors: Vec<String> = films.iter().map(|f| f.director.clone()).collect();
        directors.sort();
        directors.dedup();
        Ok(Corpus { films, directors })
    }

    pub fn len(&self) -> usize {
        self.films.len()
    }

    pub fn is_empty(&self) -> bool {
        self.films.is_empty()
    }

    pub fn director_index(&self, director: &str) -> Option<usize> {
        self.directors.iter().position(|d| d == director)
    }

    pub fn films_by<'a>(&'a self, director: &'a str) -> impl Iterator<Item = &'a FilmRecord> {
        self.films.iter().filter(move |f| f.director == director)
    }
}

const SHOT_LIST_HEADER: &str = "film_id,shot_index,start_s,duration_s";
const SCALE_TRACK_HEADER: &str = "film_id,second,label";
const MANIFEST_HEADER: &str = "film_id,title,director,year,is_color,shotlist_file,scaletrack_file";

fn check_header(
    rdr: &mut csv::Reader<&[u8]>,
    file: &str,
    expected: &'static str,
) -> Result<(), CorpusError> {
    let got = rdr
        .headers()
        .map_err(|_| CorpusError::BadHeader {
            file: file.to_string(),
            expected,
        })?
        .iter()
        .map(str::trim)
        .collect::<Vec<_>>()
        .join(",");
    if got != expected {
        return Err(CorpusError::BadHeader {
            file: file.to_string(),
            expected,
        });
    }
    Ok(())
}

fn bad_row(file: &str, row: usize, msg: impl Into<String>) -> CorpusError {
    CorpusError::BadRow {
        file: file.to_string(),
        row,
        msg: msg.into(),
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes())
}

/// Parses a shot list table with header `film_id,shot_index,start_s,duration_s`.
///
/// Rows must be sorted by shot index; indices must run 0..n-1 and shots
/// must tile the timeline without gaps or overlaps. The last shot's
/// duration is taken verbatim.
pub fn parse_shot_list(text: &str) -> Result<ShotList, CorpusError> {
    let file = "shot list";
    let mut rdr = reader(text);
    check_header(&mut rdr, file, SHOT_LIST_HEADER)?;

    let mut film_id: Option<String> = None;
    let mut shots: Vec<ShotRecord> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| bad_row(file, row, e.to_string()))?;
        if record.len() != 4 {
            return Err(bad_row(file, row, "expected 4 fields"));
        }
        let id = record[0].trim();
        match &film_id {
            None => film_id = Some(id.to_string()),
            Some(existing) if existing != id => {
                return Err(bad_row(
                    file,
                    row,
                    format!("film_id `{id}` does not match `{existing}`"),
                ));
            }
            _ => {}
        }
        let index: usize = record[1]
            .trim()
            .parse()
            .map_err(|_| bad_row(file, row, format!("bad shot_index `{}`", &record[1])))?;
        let start_s: f64 = record[2]
            .trim()
            .parse()
            .map_err(|_| bad_row(file, row, format!("bad start_s `{}`", &record[2])))?;
        let duration_s: f64 = record[3]
            .trim()
            .parse()
            .map_err(|_| bad_row(file, row, format!("bad duration_s `{}`", &record[3])))?;

        if index < shots.len() {
            return Err(CorpusError::DuplicateIndex { index });
        }
        if index > shots.len() {
            return Err(CorpusError::NonConsecutiveIndex {
                expected: shots.len(),
                found: index,
            });
        }
        if !(duration_s > 0.0) {
            return Err(CorpusError::NonPositiveDuration { index, duration_s });
        }
        if start_s < 0.0 {
            return Err(bad_row(file, row, format!("negative start_s {start_s}")));
        }
        if let Some(prev) = shots.last() {
            let expected_s = prev.start_s + prev.duration_s;
            if (start_s - expected_s).abs() > CONTIGUITY_TOL_S {
                return Err(CorpusError::NonContiguous {
                    index,
                    expected_s,
                    actual_s: start_s,
                });
            }
        }
        shots.push(ShotRecord {
            index,
            start_s,
            duration_s,
        });
    }

    let film_id = film_id.ok_or_else(|| CorpusError::EmptyTable { file: file.into() })?;
    Ok(ShotList { film_id, shots })
}

/// Parses a scale track table with header `film_id,second,label` against
/// the given vocabulary. Seconds must start at 0; gaps follow `gap_policy`.
pub fn parse_scale_track(
    text: &str,
    vocabulary: ScaleVocabulary,
    gap_policy: GapPolicy,
) -> Result<ScaleTrack, CorpusError> {
    let file = "scale track";
    let mut rdr = reader(text);
    check_header(&mut rdr, file, SCALE_TRACK_HEADER)?;

    let mut film_id: Option<String> = None;
    let mut labels: Vec<u8> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| bad_row(file, row, e.to_string()))?;
        if record.len() != 3 {
            return Err(bad_row(file, row, "expected 3 fields"));
        }
        let id = record[0].trim();
        match &film_id {
            None => film_id = Some(id.to_string()),
            Some(existing) if existing != id => {
                return Err(bad_row(
                    file,
                    row,
                    format!("film_id `{id}` does not match `{existing}`"),
                ));
            }
            _ => {}
        }
        let second: usize = record[1]
            .trim()
            .parse()
            .map_err(|_| bad_row(file, row, format!("bad second `{}`", &record[1])))?;
        let code = record[2].trim();
        let label = vocabulary
            .parse_label(code)
            .ok_or_else(|| CorpusError::UnknownLabel {
                label: code.to_string(),
                vocabulary: vocabulary.class_count(),
            })?;

        if second < labels.len() {
            return Err(CorpusError::DuplicateSecond { second });
        }
        if second > labels.len() {
            match gap_policy {
                GapPolicy::Strict => {
                    return Err(CorpusError::MissingSecond {
                        second: labels.len(),
                    });
                }
                GapPolicy::ForwardFill => {
                    let Some(&fill) = labels.last() else {
                        return Err(CorpusError::MissingSecond { second: 0 });
                    };
                    while labels.len() < second {
                        labels.push(fill);
                    }
                }
            }
        }
        labels.push(label);
    }

    let film_id = film_id.ok_or_else(|| CorpusError::EmptyTable { file: file.into() })?;
    Ok(ScaleTrack {
        film_id,
        vocabulary,
        labels,
    })
}

/// Relabels a 7-class track onto the 3 families. Pure relabeling: length
/// and order are preserved, so family counts equal the summed counts of
/// their source labels.
pub fn reduce_scale_7to3(
    track: &ScaleTrack,
    mapping: &ScaleReduction,
) -> Result<ScaleTrack, CorpusError> {
    if track.vocabulary != ScaleVocabulary::Seven {
        return Err(CorpusError::WrongVocabulary { expected: 7 });
    }
    let labels = track
        .labels
        .iter()
        .map(|&l| mapping.target(ScaleLabel7::ALL[l as usize]).index() as u8)
        .collect();
    Ok(ScaleTrack {
        film_id: track.film_id.clone(),
        vocabulary: ScaleVocabulary::Three,
        labels,
    })
}

/// One manifest row. Empty file fields mean the annotation is absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub film_id: String,
    pub title: String,
    pub director: String,
    pub year: i32,
    pub is_color: bool,
    pub shotlist_file: Option<String>,
    pub scaletrack_file: Option<String>,
}

/// Options controlling corpus ingestion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadOptions {
    /// Vocabulary the scale-track files are annotated in.
    pub vocabulary: ScaleVocabulary,
    pub gap_policy: GapPolicy,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            vocabulary: ScaleVocabulary::Three,
            gap_policy: GapPolicy::Strict,
        }
    }
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "1" => Some(true),
        "false" | "0" => Some(false),
        _ => None,
    }
}

/// Parses a manifest table with header
/// `film_id,title,director,year,is_color,shotlist_file,scaletrack_file`.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestRow>, CorpusError> {
    let file = "manifest";
    let mut rdr = reader(text);
    check_header(&mut rdr, file, MANIFEST_HEADER)?;

    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| bad_row(file, row, e.to_string()))?;
        if record.len() != 7 {
            return Err(bad_row(file, row, "expected 7 fields"));
        }
        let year: i32 = record[3]
            .trim()
            .parse()
            .map_err(|_| bad_row(file, row, format!("bad year `{}`", &record[3])))?;
        let is_color = parse_bool(&record[4])
            .ok_or_else(|| bad_row(file, row, format!("bad is_color `{}`", &record[4])))?;
        let opt = |s: &str| {
            let s = s.trim();
            (!s.is_empty()).then(|| s.to_string())
        };
        rows.push(ManifestRow {
            film_id: record[0].trim().to_string(),
            title: record[1].trim().to_string(),
            director: record[2].trim().to_string(),
            year,
            is_color,
            shotlist_file: opt(&record[5]),
            scaletrack_file: opt(&record[6]),
        });
    }
    if rows.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    Ok(rows)
}

fn read_file(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads a corpus from a manifest file. Annotation paths are resolved
/// relative to `data_dir`.
pub fn load_corpus(
    manifest_path: &Path,
    data_dir: &Path,
    options: LoadOptions,
) -> Result<Corpus, CorpusError> {
    let text = read_file(manifest_path)?;
    load_corpus_str(&text, data_dir, options)
}

/// Same as [`load_corpus`] but takes the manifest text directly.
pub fn load_corpus_str(
    manifest_text: &str,
    data_dir: &Path,
    options: LoadOptions,
) -> Result<Corpus, CorpusError> {
    let rows = parse_manifest(manifest_text)?;
    let mut films = Vec::with_capacity(rows.len());
    for row in rows {
        let shot_list = match &row.shotlist_file {
            Some(rel) => {
                let text = read_file(&data_dir.join(rel))?;
                let list = parse_shot_list(&text).map_err(|e| e.for_film(&row.film_id))?;
                if list.film_id != row.film_id {
                    return Err(CorpusError::BadRow {
                        file: rel.clone(),
                        row: 1,
                        msg: format!(
                            "film_id `{}` does not match manifest `{}`",
                            list.film_id, row.film_id
                        ),
                    });
                }
                Some(list)
            }
            None => None,
        };
        let scale_track = match &row.scaletrack_file {
            Some(rel) => {
                let text = read_file(&data_dir.join(rel))?;
                let track = parse_scale_track(&text, options.vocabulary, options.gap_policy)
                    .map_err(|e| e.for_film(&row.film_id))?;
                if track.film_id != row.film_id {
                    return Err(CorpusError::BadRow {
                        file: rel.clone(),
                        row: 1,
                        msg: format!(
                            "film_id `{}` does not match manifest `{}`",
                            track.film_id, row.film_id
                        ),
                    });
                }
                Some(track)
            }
            None => None,
        };
        films.push(FilmRecord {
            film_id: row.film_id,
            title: row.title,
            director: row.director,
            year: row.year,
            is_color: row.is_color,
            shot_list,
            scale_track,
        });
    }
    Corpus::new(films)
}

fn csv_string<F>(write: F) -> String
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut wtr = csv::Writer::from_writer(Vec::new());
    write(&mut wtr).expect("csv write to memory");
    String::from_utf8(wtr.into_inner().expect("csv flush")).expect("csv is utf-8")
}

/// Serializes a shot list in the ingestion format.
pub fn write_shot_list(list: &ShotList) -> String {
    csv_string(|w| {
        w.write_record(["film_id", "shot_index", "start_s", "duration_s"])?;
        for shot in &list.shots {
            w.write_record(&[
                list.film_id.clone(),
                shot.index.to_string(),
                format_f64(shot.start_s),
                format_f64(shot.duration_s),
            ])?;
        }
        Ok(())
    })
}

/// Serializes a scale track in the ingestion format.
pub fn write_scale_track(track: &ScaleTrack) -> String {
    csv_string(|w| {
        w.write_record(["film_id", "second", "label"])?;
        for second in 0..track.len() {
            w.write_record(&[
                track.film_id.clone(),
                second.to_string(),
                track.label_code(second).to_string(),
            ])?;
        }
        Ok(())
    })
}

/// Serializes manifest rows in the ingestion format.
pub fn write_manifest(rows: &[ManifestRow]) -> String {
    csv_string(|w| {
        w.write_record([
            "film_id",
            "title",
            "director",
            "year",
            "is_color",
            "shotlist_file",
            "scaletrack_file",
        ])?;
        for row in rows {
            w.write_record(&[
                row.film_id.clone(),
                row.title.clone(),
                row.director.clone(),
                row.year.to_string(),
                row.is_color.to_string(),
                row.shotlist_file.clone().unwrap_or_default(),
                row.scaletrack_file.clone().unwrap_or_default(),
            ])?;
        }
        Ok(())
    })
}

/// Shortest lossless decimal representation of a finite f64.
pub fn format_f64(v: f64) -> String {
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

/// Writes a whole corpus (manifest plus per-film annotation files) under
/// `dir` and returns the manifest path. File names are derived from film
/// ids, which therefore must be path-safe.
pub fn save_corpus(corpus: &Corpus, dir: &Path) -> Result<PathBuf, CorpusError> {
    fs::create_dir_all(dir).map_err(|source| CorpusError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let write = |path: &Path, contents: &str| -> Result<(), CorpusError> {
        fs::write(path, contents).map_err(|source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        })
    };

    let mut rows = Vec::with_capacity(corpus.films.len());
    for film in &corpus.films {
        let shotlist_file = match &film.shot_list {
            Some(list) => {
                let name = format!("{}.shots.csv", film.film_id);
                write(&dir.join(&name), &write_shot_list(list))?;
                Some(name)
            }
            None => None,
        };
        let scaletrack_file = match &film.scale_track {
            Some(track) => {
                let name = format!("{}.scales.csv", film.film_id);
                write(&dir.join(&name), &write_scale_track(track))?;
                Some(name)
            }
            None => None,
        };
        rows.push(ManifestRow {
            film_id: film.film_id.clone(),
            title: film.title.clone(),
            director: film.director.clone(),
            year: film.year,
            is_color: film.is_color,
            shotlist_file,
            scaletrack_file,
        });
    }
    let manifest_path = dir.join("manifest.csv");
    write(&manifest_path, &write_manifest(&rows))?;
    Ok(manifest_path)
}
