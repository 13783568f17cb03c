use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::MetricsRecord;
use crate::cobol::SourceFormat;

pub const MANIFEST_FILE: &str = "corpus.manifest.jsonl";
pub const META_FILE: &str = "corpus.meta.json";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: malformed manifest record: {message}")]
    Format { path: PathBuf, line: usize, message: String },
    #[error("need at least {needed} eligible records to split, found {found}")]
    Split { needed: usize, found: usize },
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Kept,
    Repaired,
    /// Same normalized text as the record with this id.
    Duplicate(String),
    Trivial,
    Rejected,
}

impl Status {
    pub fn eligible(&self) -> bool {
        matches!(self, Status::Kept | Status::Repaired)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Split {
    Train,
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    pub relative_path: String,
    /// Hex MD5 of the normalized text; empty when the file could not be read.
    pub md5: String,
    pub lines: u32,
    /// None until curated.
    pub status: Option<Status>,
    #[serde(default)]
    pub reason: Option<String>,
    #[serde(default)]
    pub metrics: Option<MetricsRecord>,
    #[serde(default)]
    pub split: Option<Split>,
    #[serde(default)]
    pub fold: Option<u8>,
    #[serde(default)]
    pub oracle_java: Option<String>,
    #[serde(default)]
    pub oracle_labels: Option<String>,
}

impl Record {
    pub fn has_oracle(&self) -> bool {
        self.oracle_labels.is_some()
    }
}

/// Where the records' relative paths are rooted and how the files are read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusMeta {
    pub root: PathBuf,
    pub format: SourceFormat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub meta: CorpusMeta,
    pub records: Vec<Record>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurateSummary {
    pub clean: usize,
    pub repaired: usize,
    pub rejected: usize,
    pub duplicate: usize,
    pub trivial: usize,
}

impl CurateSummary {
    pub fn of(records: &[Record]) -> Self {
        let mut s = Self::default();
        for r in records {
            match r.status {
                Some(Status::Kept) => s.clean += 1,
                Some(Status::Repaired) => s.repaired += 1,
                Some(Status::Rejected) => s.rejected += 1,
                Some(Status::Duplicate(_)) => s.duplicate += 1,
                Some(Status::Trivial) => s.trivial += 1,
                None => {}
            }
        }
        s
    }

    pub fn total(&self) -> usize {
        self.clean + self.repaired + self.rejected + self.duplicate + self.trivial
    }
}

impl CorpusManifest {
    pub fn summary(&self) -> CurateSummary {
        CurateSummary::of(&self.records)
    }

    pub fn eligible(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status.as_ref().is_some_and(Status::eligible))
    }

    pub fn in_split(&self, split: Split) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(move |r| r.split == Some(split))
    }

    pub fn path_of(&self, relative: &str) -> PathBuf {
        self.meta.root.join(relative)
    }

    /// Writes `corpus.manifest.jsonl` and `corpus.meta.json` into `dir`.
    pub fn save(&self, dir: &Path) -> Result<PathBuf, CorpusError> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let path = dir.join(MANIFEST_FILE);
        let file = fs::File::create(&path).map_err(io_err(&path))?;
        let mut w = BufWriter::new(file);
        for r in &self.records {
            let line = serde_json::to_string(r).expect("records serialize");
            writeln!(w, "{line}").map_err(io_err(&path))?;
        }
        w.flush().map_err(io_err(&path))?;
        let meta_path = dir.join(META_FILE);
        let meta = serde_json::to_string_pretty(&self.meta).expect("meta serializes");
        fs::write(&meta_path, meta + "\n").map_err(io_err(&meta_path))?;
        Ok(path)
    }

    /// Reads a manifest file; the meta file is looked up next to it.
    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let file = fs::File::open(path).map_err(io_err(path))?;
        let mut records = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(io_err(path))?;
            if line.trim().is_empty() {
                continue;
            }
            let r = serde_json::from_str(&line).map_err(|e| CorpusError::Format {
                path: path.to_path_buf(),
                line: i + 1,
                message: e.to_string(),
            })?;
            records.push(r);
        }
        let meta_path = path.with_file_name(META_FILE);
        let text = fs::read_to_string(&meta_path).map_err(io_err(&meta_path))?;
        let meta = serde_json::from_str(&text).map_err(|e| CorpusError::Format {
            path: meta_path.clone(),
            line: e.line(),
            message: e.to_string(),
        })?;
        Ok(Self { meta, records })
    }
}
