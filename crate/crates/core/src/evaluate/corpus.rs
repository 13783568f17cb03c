use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::score::{effective_actions, score_file};
use crate::analysis::analyze;
use crate::cobol::CobolAst;
use crate::corpus::{load_program, CorpusManifest, Record, Split};
use crate::model::{predict, sample_from, to_actions, train, ModelCheckpoint, ModelConfig, ModelError, TrainSample};
use crate::transpile::{default_actions, java_metrics, parse_java, translate, Action, JavaAst};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Approach {
    Rules,
    Ai,
    /// Translations supplied from outside, e.g. hand-written.
    External(String),
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Approach::Rules => f.write_str("rules"),
            Approach::Ai => f.write_str("ai"),
            Approach::External(name) => write!(f, "external:{name}"),
        }
    }
}

impl FromStr for Approach {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "rules" => Ok(Approach::Rules),
            "ai" => Ok(Approach::Ai),
            "external" => Ok(Approach::External("manual".into())),
            _ => match s.strip_prefix("external:") {
                Some(name) if !name.is_empty() => Ok(Approach::External(name.into())),
                _ => Err(format!("unknown approach {s:?}; expected rules, ai or external[:name]")),
            },
        }
    }
}

impl From<Approach> for String {
    fn from(a: Approach) -> String {
        a.to_string()
    }
}

impl TryFrom<String> for Approach {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl Approach {
    /// File stem used for the summary: `eval.<slug>.json`.
    pub fn slug(&self) -> String {
        match self {
            Approach::External(name) => format!("external-{name}"),
            other => other.to_string(),
        }
    }

    /// Display name used in reports.
    pub fn title(&self) -> String {
        match self {
            Approach::Rules => "Rules".into(),
            Approach::Ai => "AI".into(),
            Approach::External(name) => {
                let mut c = name.chars();
                c.next().map_or_else(String::new, |f| f.to_uppercase().chain(c).collect())
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("the manifest has no records in the {0:?} split")]
    EmptySplit(Split),
    #[error("the ai approach needs a model checkpoint")]
    MissingCheckpoint,
    #[error("fold {fold} has no labelled training records outside it")]
    NoTrainingData { fold: u8 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileResult {
    pub id: String,
    pub correct: bool,
    pub reason: String,
    pub cx_before: f64,
    pub cx_after: f64,
    pub cp_before: f64,
    pub cp_after: f64,
    #[serde(default)]
    pub label_agreement: Option<f64>,
    #[serde(default)]
    pub fallbacks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub approach: Approach,
    pub n: usize,
    pub accuracy: f64,
    pub mean_cx_before: f64,
    pub mean_cx_after: f64,
    pub cx_drop_pct: f64,
    pub mean_cp_before: f64,
    pub mean_cp_after: f64,
    pub cp_drop_pct: f64,
    pub fallback_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_fold: Option<Vec<EvalSummary>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub summary: EvalSummary,
    pub files: Vec<FileResult>,
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    /// Confidence threshold for model predictions.
    pub tau: f64,
    /// Retrain and evaluate on each Train fold as well.
    pub per_fold: bool,
    /// Directory holding `<relative path>.java` translations for External;
    /// the record's own `.java` sidecar is used when unset.
    pub external_dir: Option<PathBuf>,
    /// Training settings for the per-fold models; the checkpoint's config
    /// when unset.
    pub fold_config: Option<ModelConfig>,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { tau: DEFAULT_TAU, per_fold: false, external_dir: None, fold_config: None }
    }
}

pub const DEFAULT_TAU: f64 = 0.6;

/// `100 * (before - after) / before`, or 0 when `before` is 0.
pub fn drop_pct(before: f64, after: f64) -> f64 {
    if before == 0.0 {
        0.0
    } else {
        100.0 * (before - after) / before
    }
}

/// Labels from a record's `.labels.json` sidecar.
pub fn oracle_labels(manifest: &CorpusManifest, record: &Record) -> Result<Option<Vec<Action>>, String> {
    let Some(rel) = &record.oracle_labels else { return Ok(None) };
    let path = manifest.path_of(rel);
    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map(Some).map_err(|e| format!("{}: {e}", path.display()))
}

/// Training samples for every record accepted by `keep` that has oracle
/// labels, in manifest order. Unloadable records are skipped.
pub fn training_samples(manifest: &CorpusManifest, keep: impl Fn(&Record) -> bool + Sync) -> Vec<TrainSample> {
    let records: Vec<&Record> =
        manifest.eligible().filter(|r| r.has_oracle() && keep(r)).collect();
    records
        .par_iter()
        .map(|r| {
            let (ast, _) = load_program(&manifest.meta, r).ok()?;
            let labels = oracle_labels(manifest, r).ok()??;
            sample_from(&ast, &labels)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn failed(id: &str, reason: String, ast: Option<&CobolAst>) -> FileResult {
    let m = ast.map(analyze);
    let cx = m.as_ref().map_or(0.0, |m| m.cyclomatic as f64);
    let cp = m.as_ref().map_or(0.0, |m| m.coupling as f64);
    FileResult {
        id: id.to_string(),
        correct: false,
        reason,
        cx_before: cx,
        cx_after: cx,
        cp_before: cp,
        cp_after: cp,
        label_agreement: None,
        fallbacks: 0,
    }
}

pub fn external_java(manifest: &CorpusManifest, record: &Record, opts: &EvalOptions) -> Result<JavaAst, String> {
    let path = match &opts.external_dir {
        Some(dir) => dir.join(Path::new(&record.relative_path).with_extension("java")),
        None => match &record.oracle_java {
            Some(rel) => manifest.path_of(rel),
            None => return Err("no external translation".into()),
        },
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("no external translation: {}: {e}", path.display()))?;
    parse_java(&text).map_err(|e| format!("external translation does not parse: {e}"))
}

/// The program behind `record` and its translation under `approach`.
pub fn translate_record(
    manifest: &CorpusManifest,
    record: &Record,
    approach: &Approach,
    ckpt: Option<&ModelCheckpoint>,
    opts: &EvalOptions,
) -> Result<(CobolAst, JavaAst), String> {
    let (ast, _) = load_program(&manifest.meta, record)?;
    let java = match approach {
        Approach::Rules => translate(&ast, &default_actions(&ast)).java,
        Approach::Ai => {
            let ckpt = ckpt.ok_or("no checkpoint")?;
            let preds = predict(&ast, ckpt, opts.tau).map_err(|e| e.to_string())?;
            translate(&ast, &to_actions(&preds)).java
        }
        Approach::External(_) => external_java(manifest, record, opts)?,
    };
    Ok((ast, java))
}

/// Translates and scores one record.
pub fn evaluate_record(
    manifest: &CorpusManifest,
    record: &Record,
    approach: &Approach,
    ckpt: Option<&ModelCheckpoint>,
    opts: &EvalOptions,
) -> FileResult {
    let ast = match load_program(&manifest.meta, record) {
        Ok((ast, _)) => ast,
        Err(e) => return failed(&record.id, format!("does not load: {e}"), None),
    };
    let oracle = match oracle_labels(manifest, record) {
        Ok(o) => o,
        Err(e) => return failed(&record.id, format!("unreadable oracle labels: {e}"), Some(&ast)),
    };
    let requested = match approach {
        Approach::Rules => Some(default_actions(&ast)),
        Approach::Ai => match ckpt.map(|c| predict(&ast, c, opts.tau)) {
            Some(Ok(p)) => Some(to_actions(&p)),
            Some(Err(e)) => return failed(&record.id, format!("prediction failed: {e}"), Some(&ast)),
            None => return failed(&record.id, "no checkpoint".into(), Some(&ast)),
        },
        Approach::External(_) => None,
    };
    let (java, applied, fallbacks, unstructured) = match requested {
        Some(actions) => {
            let t = translate(&ast, &actions);
            let applied = effective_actions(&ast, &actions, &t.fallbacks);
            (t.java, Some(applied), t.fallbacks.len(), t.unstructured)
        }
        None => match external_java(manifest, record, opts) {
            Ok(j) => (j, None, 0, false),
            Err(e) => return failed(&record.id, e, Some(&ast)),
        },
    };
    let labels = match (&applied, &oracle) {
        (Some(a), Some(o)) if !unstructured => Some((a.as_slice(), o.as_slice())),
        _ => None,
    };
    let score = score_file(&record.id, &ast, &java, labels);
    let before = analyze(&ast);
    let after = java_metrics(&java);
    FileResult {
        id: record.id.clone(),
        correct: score.correct,
        reason: score.reason,
        cx_before: before.cyclomatic as f64,
        cx_after: after.cyclomatic as f64,
        cp_before: before.coupling as f64,
        cp_after: after.coupling as f64,
        label_agreement: score.label_agreement,
        fallbacks,
    }
}

pub fn summarize(approach: &Approach, files: &[FileResult]) -> EvalSummary {
    let n = files.len();
    let mean = |f: fn(&FileResult) -> f64| if n == 0 { 0.0 } else { files.iter().map(f).sum::<f64>() / n as f64 };
    let (cxb, cxa) = (mean(|r| r.cx_before), mean(|r| r.cx_after));
    let (cpb, cpa) = (mean(|r| r.cp_before), mean(|r| r.cp_after));
    EvalSummary {
        approach: approach.clone(),
        n,
        accuracy: if n == 0 { 0.0 } else { files.iter().filter(|r| r.correct).count() as f64 / n as f64 },
        mean_cx_before: cxb,
        mean_cx_after: cxa,
        cx_drop_pct: drop_pct(cxb, cxa),
        mean_cp_before: cpb,
        mean_cp_after: cpa,
        cp_drop_pct: drop_pct(cpb, cpa),
        fallback_count: files.iter().map(|r| r.fallbacks).sum(),
        per_fold: None,
    }
}

fn evaluate_records(
    manifest: &CorpusManifest,
    records: &[&Record],
    approach: &Approach,
    ckpt: Option<&ModelCheckpoint>,
    opts: &EvalOptions,
) -> Vec<FileResult> {
    records.par_iter().map(|r| evaluate_record(manifest, r, approach, ckpt, opts)).collect()
}

/// Scores every Test record under `approach`.
pub fn evaluate_corpus(
    manifest: &CorpusManifest,
    approach: &Approach,
    ckpt: Option<&ModelCheckpoint>,
    opts: &EvalOptions,
) -> Result<Evaluation, EvalError> {
    if *approach == Approach::Ai && ckpt.is_none() {
        return Err(EvalError::MissingCheckpoint);
    }
    let test: Vec<&Record> = manifest.in_split(Split::Test).collect();
    if test.is_empty() {
        return Err(EvalError::EmptySplit(Split::Test));
    }
    let files = evaluate_records(manifest, &test, approach, ckpt, opts);
    let mut summary = summarize(approach, &files);
    if opts.per_fold {
        summary.per_fold = Some(per_fold(manifest, approach, ckpt, opts)?);
    }
    Ok(Evaluation { summary, files })
}

/// Cross-validation over the Train folds. For Ai, a fresh model is trained
/// on the labelled records outside each fold.
fn per_fold(
    manifest: &CorpusManifest,
    approach: &Approach,
    ckpt: Option<&ModelCheckpoint>,
    opts: &EvalOptions,
) -> Result<Vec<EvalSummary>, EvalError> {
    let mut out = Vec::new();
    for fold in 0..crate::corpus::FOLDS {
        let held: Vec<&Record> = manifest.in_split(Split::Train).filter(|r| r.fold == Some(fold)).collect();
        let model = match approach {
            Approach::Ai => {
                let config = opts.fold_config.clone().or_else(|| ckpt.map(|c| c.config.clone())).ok_or(EvalError::MissingCheckpoint)?;
                let samples = training_samples(manifest, |r| r.split == Some(Split::Train) && r.fold != Some(fold));
                if samples.is_empty() {
                    return Err(EvalError::NoTrainingData { fold });
                }
                Some(train(&samples, &config)?)
            }
            _ => None,
        };
        let files = evaluate_records(manifest, &held, approach, model.as_ref(), opts);
        out.push(summarize(approach, &files));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drop_formula() {
        assert!((drop_pct(18.0, 11.7) - 35.0).abs() < 1e-9);
        assert!((drop_pct(8.0, 5.4) - 32.5).abs() < 1e-9);
        assert_eq!(drop_pct(0.0, 3.0), 0.0);
    }

    #[test]
    fn approach_names() {
        for a in [Approach::Rules, Approach::Ai, Approach::External("manual".into())] {
            assert_eq!(a.to_string().parse::<Approach>().unwrap(), a);
            let json = serde_json::to_string(&a).unwrap();
            assert_eq!(serde_json::from_str::<Approach>(&json).unwrap(), a);
        }
        assert_eq!("external".parse::<Approach>().unwrap().slug(), "external-manual");
        assert!("neural".parse::<Approach>().is_err());
    }

    #[test]
    fn summary_means() {
        let f = |correct, cx_before, cx_after| FileResult {
            id: "x".into(),
            correct,
            reason: String::new(),
            cx_before,
            cx_after,
            cp_before: 2.0,
            cp_after: 2.0,
            label_agreement: None,
            fallbacks: 1,
        };
        let s = summarize(&Approach::Rules, &[f(true, 10.0, 5.0), f(false, 20.0, 10.0)]);
        assert_eq!(s.n, 2);
        assert_eq!(s.accuracy, 0.5);
        assert_eq!(s.mean_cx_before, 15.0);
        assert_eq!(s.cx_drop_pct, 50.0);
        assert_eq!(s.cp_drop_pct, 0.0);
        assert_eq!(s.fallback_count, 2);
    }
}
