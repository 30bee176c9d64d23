//! Corpus analysis toolkit for comparing human text with model-regenerated text.
//!
//! The pipeline moves through four stages: corpora are loaded from JSON-Lines
//! article stores with per-sentence parse sidecars ([`corpus`]), filtered by
//! symmetric cleaning rules ([`cleaning`]), scored with readability and
//! syntactic-complexity metrics ([`readability`], [`syntax`]), and finally
//! binned into per-cell distributions whose mean, spread, and right-tail
//! differences are classified ([`distribution`], [`schematic`]).

pub mod cleaning;
pub mod corpus;
pub mod distribution;
pub mod readability;
pub mod schematic;
pub mod syntax;

pub use corpus::{Article, ConstTree, CorpusError, DepToken, Domain, Head, SentenceRecord, Source};
pub use syntax::{MetricKind, MetricSample, Scope};
