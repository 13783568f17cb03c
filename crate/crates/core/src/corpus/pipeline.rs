use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use walkdir::WalkDir;

use super::manifest::*;
use crate::analysis::analyze;
use crate::cobol::{normalize_for_ingest, parse_source, repair, CobolAst, SourceFile, SourceFormat, StatementKind, Verdict};

pub const DEFAULT_EXTENSIONS: &[&str] = &["cbl", "cob", "cobol"];
pub const MIN_STATEMENTS: usize = 3;
pub const FOLDS: u8 = 5;
const MIN_SPLIT: usize = 5;

#[derive(Debug, Clone)]
pub struct IngestConfig {
    pub format: SourceFormat,
    pub extensions: Vec<String>,
    pub min_statements: usize,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            format: SourceFormat::Free,
            extensions: DEFAULT_EXTENSIONS.iter().map(|s| s.to_string()).collect(),
            min_statements: MIN_STATEMENTS,
        }
    }
}

fn rel_string(p: &Path) -> String {
    p.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/")
}

fn read_text(path: &Path) -> Result<String, String> {
    let bytes = fs::read(path).map_err(|e| format!("unreadable: {e}"))?;
    String::from_utf8(bytes).map_err(|_| "unreadable: not valid UTF-8".to_string())
}

fn hex_md5(text: &str) -> String {
    format!("{:x}", md5::compute(text.as_bytes()))
}

/// One record per matching file, ordered by relative path. Unreadable files
/// are recorded as Rejected.
pub fn ingest(root: &Path, config: &IngestConfig) -> Result<CorpusManifest, CorpusError> {
    let meta = fs::metadata(root).map_err(io_err(root))?;
    if !meta.is_dir() {
        return Err(CorpusError::Io {
            path: root.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory"),
        });
    }
    let mut paths: Vec<(String, PathBuf)> = Vec::new();
    for entry in WalkDir::new(root).follow_links(false) {
        let (path, is_dir) = match entry {
            Ok(e) => (e.path().to_path_buf(), e.file_type().is_dir()),
            Err(e) => match e.path() {
                Some(p) => (p.to_path_buf(), false),
                None => continue,
            },
        };
        if is_dir {
            continue;
        }
        let ext = path.extension().map(|e| e.to_string_lossy().to_lowercase());
        if !ext.is_some_and(|e| config.extensions.iter().any(|x| x.eq_ignore_ascii_case(&e))) {
            continue;
        }
        let rel = path.strip_prefix(root).unwrap_or(&path);
        paths.push((rel_string(rel), path));
    }
    paths.sort();
    let mut taken = std::collections::HashSet::new();
    let mut records = Vec::with_capacity(paths.len());
    for (rel, path) in paths {
        let stem_rel = rel.rsplit_once('.').map_or(rel.as_str(), |(s, _)| s).to_string();
        let id = if taken.insert(stem_rel.clone()) { stem_rel.clone() } else { rel.clone() };
        taken.insert(id.clone());
        let sidecar = |suffix: &str| {
            let candidate = format!("{stem_rel}{suffix}");
            root.join(&candidate).is_file().then_some(candidate)
        };
        let mut record = Record {
            id,
            relative_path: rel.clone(),
            md5: String::new(),
            lines: 0,
            status: None,
            reason: None,
            metrics: None,
            split: None,
            fold: None,
            oracle_java: sidecar(".java"),
            oracle_labels: sidecar(".labels.json"),
        };
        match read_text(&path) {
            Ok(text) => {
                let norm = normalize_for_ingest(&text);
                record.md5 = hex_md5(&norm);
                record.lines = norm.lines().count() as u32;
            }
            Err(reason) => {
                record.status = Some(Status::Rejected);
                record.reason = Some(reason);
            }
        }
        records.push(record);
    }
    Ok(CorpusManifest { meta: CorpusMeta { root: root.to_path_buf(), format: config.format }, records })
}

/// The parsed program behind a record, after repair.
pub fn load_program(meta: &CorpusMeta, record: &Record) -> Result<(CobolAst, Verdict), String> {
    let text = read_text(&meta.root.join(&record.relative_path))?;
    program_from_text(&record.id, &text, meta.format)
}

pub fn program_from_text(id: &str, text: &str, format: SourceFormat) -> Result<(CobolAst, Verdict), String> {
    let file = SourceFile::new(id, normalize_for_ingest(text)).with_format(format);
    let (fixed, log) = repair(&file);
    if log.verdict == Verdict::Rejected {
        return Err(log.reason.unwrap_or_else(|| "rejected by repair".into()));
    }
    let ast = parse_source(&fixed).map_err(|e| e.to_string())?;
    Ok((ast, log.verdict))
}

/// Marks every record whose normalized text was already seen as a duplicate
/// of the first one in path order. Rejected records do not take part.
pub fn dedup(records: &mut [Record]) {
    let mut first: HashMap<String, String> = HashMap::new();
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| records[a].relative_path.cmp(&records[b].relative_path));
    for i in order {
        let r = &mut records[i];
        if r.status == Some(Status::Rejected) || r.md5.is_empty() {
            continue;
        }
        match first.get(&r.md5) {
            Some(of) => r.status = Some(Status::Duplicate(of.clone())),
            None => {
                first.insert(r.md5.clone(), r.id.clone());
            }
        }
    }
}

pub fn is_trivial(ast: &CobolAst, min_statements: usize) -> bool {
    let mut all_display = true;
    ast.for_each_statement(|s| all_display &= matches!(s.kind, StatementKind::Display { .. }));
    ast.statement_count() < min_statements || all_display
}

/// Eligible records whose program is trivial become Trivial. `asts` is
/// parallel to `records`.
pub fn filter_trivial(records: &mut [Record], asts: &[Option<CobolAst>], min_statements: usize) {
    for (r, ast) in records.iter_mut().zip(asts) {
        if let (Some(s), Some(ast)) = (&r.status, ast) {
            if s.eligible() && is_trivial(ast, min_statements) {
                r.status = Some(Status::Trivial);
            }
        }
    }
}

/// repair → parse → dedup → filter_trivial → metrics. Split assignments are
/// cleared; every record ends with exactly one status.
pub fn curate(manifest: &CorpusManifest, min_statements: usize) -> CorpusManifest {
    let meta = &manifest.meta;
    let processed: Vec<(Record, Option<CobolAst>)> = manifest
        .records
        .par_iter()
        .map(|r| {
            let mut r = Record { status: None, reason: None, metrics: None, split: None, fold: None, ..r.clone() };
            let text = match read_text(&meta.root.join(&r.relative_path)) {
                Ok(t) => t,
                Err(reason) => {
                    r.md5.clear();
                    r.lines = 0;
                    r.status = Some(Status::Rejected);
                    r.reason = Some(reason);
                    return (r, None);
                }
            };
            let norm = normalize_for_ingest(&text);
            r.md5 = hex_md5(&norm);
            r.lines = norm.lines().count() as u32;
            match program_from_text(&r.id, &text, meta.format) {
                Ok((ast, verdict)) => {
                    r.status = Some(if verdict == Verdict::Repaired { Status::Repaired } else { Status::Kept });
                    (r, Some(ast))
                }
                Err(reason) => {
                    r.status = Some(Status::Rejected);
                    r.reason = Some(reason);
                    (r, None)
                }
            }
        })
        .collect();
    let (mut records, asts): (Vec<Record>, Vec<Option<CobolAst>>) = processed.into_iter().unzip();
    dedup(&mut records);
    filter_trivial(&mut records, &asts, min_statements);
    let metrics: Vec<_> = records
        .par_iter()
        .zip(&asts)
        .map(|(r, ast)| match (&r.status, ast) {
            (Some(s), Some(ast)) if s.eligible() => Some(analyze(ast)),
            _ => None,
        })
        .collect();
    for (r, m) in records.iter_mut().zip(metrics) {
        r.metrics = m;
    }
    CorpusManifest { meta: meta.clone(), records }
}

/// Shuffles eligible records with `seed`; the first 80% (rounded down) are
/// Train with folds dealt round-robin, the rest Test.
pub fn split(manifest: &CorpusManifest, seed: u64) -> Result<CorpusManifest, CorpusError> {
    let mut out = manifest.clone();
    let mut eligible: Vec<usize> = Vec::new();
    for (i, r) in out.records.iter_mut().enumerate() {
        r.split = None;
        r.fold = None;
        if r.status.as_ref().is_some_and(Status::eligible) {
            eligible.push(i);
        }
    }
    if eligible.len() < MIN_SPLIT {
        return Err(CorpusError::Split { needed: MIN_SPLIT, found: eligible.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    eligible.shuffle(&mut rng);
    let n_train = eligible.len() * 4 / 5;
    for (k, &i) in eligible.iter().enumerate() {
        let r = &mut out.records[i];
        if k < n_train {
            r.split = Some(Split::Train);
            r.fold = Some((k % FOLDS as usize) as u8);
        } else {
            r.split = Some(Split::Test);
        }
    }
    Ok(out)
}
