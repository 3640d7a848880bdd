//! Shot-level film stylometry.
//!
//! This crate turns shot annotations (shot boundaries plus per-second
//! shot-scale labels) into per-film style fingerprints and runs the full
//! attribution analysis on top of them:
//!
//! - [`corpus`]: data model and ingestion of film manifests, shot lists,
//!   and per-second scale tracks.
//! - [`shotfeat`]: duration classes, duration/scale distributions and
//!   transition matrices, accessory counts, and feature-vector assembly.
//! - [`learn`]: Gaussian Naive Bayes, k-nearest-neighbours, and a Gini
//!   decision forest with impurity-based feature importance.
//! - [`eval`]: leave-one-out evaluation, metrics, grid search, ablations,
//!   production-period prediction, and feature similarity/correlation.
//! - [`embed`]: exact t-SNE for 2-D/3-D corpus maps.
//! - [`trend`]: robust per-director regression of mean shot duration
//!   against production year (Theil-Sen and RANSAC).
//! - [`synth`]: planted-truth synthetic corpora for end-to-end validation
//!   when no annotated film corpus is at hand.
//!
//! All operations are pure functions of their inputs; random procedures
//! take explicit seeds and are bit-for-bit reproducible.

pub mod corpus;
pub mod embed;
pub mod eval;
pub mod learn;
pub mod shotfeat;
pub mod synth;
pub mod trend;
