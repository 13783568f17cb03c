//! Corpus curation: ingest a directory, repair and parse, drop duplicates
//! and trivial programs, attach metrics, split for training.

pub mod manifest;
pub mod pipeline;
pub mod synth;

pub use manifest::{
    CorpusError, CorpusManifest, CorpusMeta, CurateSummary, Record, Split, Status, MANIFEST_FILE, META_FILE,
};
pub use pipeline::{
    curate, dedup, filter_trivial, ingest, is_trivial, load_program, program_from_text, split, IngestConfig, FOLDS,
    MIN_STATEMENTS,
};
