//! Topic extraction and weekly trend reporting for timestamped short-text
//! corpora: ingestion, text preprocessing, LDA by collapsed Gibbs sampling,
//! gazetteer geotagging and per-topic / per-country trend tables.

pub mod config;
pub mod corpus;
pub mod error;
pub mod geotag;
pub mod lda;
pub mod pipeline;
pub mod rng;
pub mod textprep;
pub mod trends;

pub use error::{Error, Result};
