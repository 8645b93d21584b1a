//! Corpus-adaptive text categorization.
//!
//! The toolkit learns task-specific stop-word and feature dictionaries from
//! a labeled training corpus, converts texts into fixed-length feature
//! vectors, reduces them by principal component analysis (or SVD), and
//! classifies with a least-squares polynomial classifier under forced
//! recognition. Every stage is driven by corpus statistics plus a handful
//! of linguistic parameters, so a categorizer can be retrained for a new
//! domain or language without hand-built lexical resources, and it adapts
//! to systematic recognition errors in the input text instead of breaking
//! on them.
//!
//! Typical flow: [`corpus::LabeledCorpus::load`] → [`pipeline::train`] →
//! [`pipeline::ModelBundle::save`], then classify or evaluate against the
//! saved bundle. The `textcat` binary wraps the same calls.

pub mod config;
pub mod corpus;
pub mod error;
pub mod fixture;
pub mod lexlearn;
pub mod linalg;
pub mod noise;
pub mod pipeline;
pub mod polyclassify;
pub mod reduce;
pub mod vectorize;

pub use error::{Error, Result};
