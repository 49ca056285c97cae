//! Extractive, time-windowed summaries of software development artefacts.
//!
//! The library selects a subset of sentences from a window of repository
//! artefacts (issues, pull requests, commits, wiki pages, ...) that
//! maximizes cosine similarity to a target representation of a human-written
//! summary, either as stemmed word counts or as a 26-dimensional
//! lexical/readability feature vector. A benchmark harness compares the six
//! construction algorithms and reports score distributions, artefact-type
//! contributions and pairwise Mann-Whitney U tests.

pub mod analysis;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod features;
pub mod optim;
pub mod similarity;
pub mod textproc;

pub use error::{Error, Result};
