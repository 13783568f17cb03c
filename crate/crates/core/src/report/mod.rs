//! `report.json` and a self-contained `report.html`.

mod html;
pub mod svg;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evaluate::{Approach, EvalSummary};
use crate::tree::TreeNode;

pub use html::{bar_chart_svg, line_chart_svg, render_html};
pub use svg::{path_count, render_ast_svg, standalone, Palette, MAX_RENDERED_NODES};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("a report needs at least one summary")]
    NoSummaries,
}

/// One file's source and translated trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AstPair {
    pub id: String,
    pub cobol: TreeNode,
    pub java: TreeNode,
    pub cx_before: f64,
    pub cx_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub summaries: Vec<EvalSummary>,
    pub ast_pairs: Vec<AstPair>,
    /// Supplied by the caller so reruns can be byte-identical.
    pub generated_at: String,
    pub toolkit_version: String,
}

impl ReportBundle {
    pub fn new(summaries: Vec<EvalSummary>, ast_pairs: Vec<AstPair>, generated_at: impl Into<String>) -> Self {
        Self { summaries, ast_pairs, generated_at: generated_at.into(), toolkit_version: TOOLKIT_VERSION.into() }
    }
}

/// Figure colors by approach: external (manual) blue, rules green, AI orange.
pub fn approach_color(a: &Approach) -> &'static str {
    match a {
        Approach::External(_) => "#1f77b4",
        Approach::Rules => "#2ca02c",
        Approach::Ai => "#ff7f0e",
    }
}

fn round(v: f64, places: i32) -> f64 {
    let f = 10f64.powi(places);
    let r = (v * f).round() / f;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub approach: String,
    pub n: usize,
    pub accuracy: f64,
    pub cx_drop_pct: f64,
    pub mean_cx_before: f64,
    pub mean_cx_after: f64,
    pub cp_drop_pct: f64,
    pub mean_cp_before: f64,
    pub mean_cp_after: f64,
    pub fallback_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub approach: String,
    pub metric: String,
    pub value: f64,
    pub color: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarChart {
    pub axis_max: f64,
    pub ticks: Vec<f64>,
    pub bars: Vec<Bar>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub approach: String,
    pub color: String,
    /// One value per label; None where the approach has no data.
    pub points: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineChart {
    pub labels: Vec<String>,
    pub ticks: Vec<f64>,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelCaption {
    pub id: String,
    pub cobol_nodes: usize,
    pub cobol_paths: usize,
    pub java_nodes: usize,
    pub java_paths: usize,
    /// Nodes beyond the rendering cap.
    pub cobol_elided: usize,
    pub java_elided: usize,
    pub cx_before: f64,
    pub cx_after: f64,
}

/// Display values: everything the HTML shows, already rounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figures {
    pub table: Vec<TableRow>,
    pub complexity_drop: BarChart,
    pub accuracy_trend: LineChart,
    pub panels: Vec<PanelCaption>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub toolkit_version: String,
    pub generated_at: String,
    pub summaries: Vec<EvalSummary>,
    pub ast_pairs: Vec<AstPair>,
    pub figures: Figures,
}

fn nice_max(v: f64) -> f64 {
    let v = v.max(1.0);
    let step = if v <= 10.0 { 2.0 } else if v <= 50.0 { 10.0 } else { 20.0 };
    (v / step).ceil() * step
}

pub fn figures(bundle: &ReportBundle) -> Figures {
    let table = bundle
        .summaries
        .iter()
        .map(|s| TableRow {
            approach: s.approach.title(),
            n: s.n,
            accuracy: round(s.accuracy, 2),
            cx_drop_pct: round(s.cx_drop_pct, 1),
            mean_cx_before: round(s.mean_cx_before, 1),
            mean_cx_after: round(s.mean_cx_after, 1),
            cp_drop_pct: round(s.cp_drop_pct, 1),
            mean_cp_before: round(s.mean_cp_before, 1),
            mean_cp_after: round(s.mean_cp_after, 1),
            fallback_count: s.fallback_count,
        })
        .collect::<Vec<_>>();

    let mut bars = Vec::new();
    for metric in ["cyclomatic", "coupling"] {
        for (s, row) in bundle.summaries.iter().zip(&table) {
            bars.push(Bar {
                approach: row.approach.clone(),
                metric: metric.into(),
                value: if metric == "cyclomatic" { row.cx_drop_pct } else { row.cp_drop_pct },
                color: approach_color(&s.approach).into(),
            });
        }
    }
    let axis_max = nice_max(bars.iter().map(|b| b.value).fold(0.0, f64::max));
    let step = axis_max / 5.0;
    let ticks = (0..=5).map(|i| round(i as f64 * step, 1)).collect();

    let folds = bundle.summaries.iter().filter_map(|s| s.per_fold.as_ref().map(Vec::len)).max().unwrap_or(0);
    let mut labels: Vec<String> = (1..=folds).map(|k| format!("fold {k}")).collect();
    labels.push("test".into());
    let series = bundle
        .summaries
        .iter()
        .map(|s| {
            let mut points: Vec<Option<f64>> = (0..folds)
                .map(|k| s.per_fold.as_ref().and_then(|f| f.get(k)).map(|f| round(f.accuracy, 2)))
                .collect();
            points.push(Some(round(s.accuracy, 2)));
            Series { approach: s.approach.title(), color: approach_color(&s.approach).into(), points }
        })
        .collect();

    let panels = bundle
        .ast_pairs
        .iter()
        .map(|p| PanelCaption {
            id: p.id.clone(),
            cobol_nodes: p.cobol.node_count(),
            cobol_paths: path_count(&p.cobol),
            java_nodes: p.java.node_count(),
            java_paths: path_count(&p.java),
            cobol_elided: p.cobol.node_count().saturating_sub(MAX_RENDERED_NODES),
            java_elided: p.java.node_count().saturating_sub(MAX_RENDERED_NODES),
            cx_before: round(p.cx_before, 1),
            cx_after: round(p.cx_after, 1),
        })
        .collect();

    Figures {
        table,
        complexity_drop: BarChart { axis_max, ticks, bars },
        accuracy_trend: LineChart { labels, ticks: vec![0.0, 0.25, 0.5, 0.75, 1.0], series },
        panels,
    }
}

pub fn document(bundle: &ReportBundle) -> ReportDocument {
    ReportDocument {
        schema_version: SCHEMA_VERSION,
        toolkit_version: bundle.toolkit_version.clone(),
        generated_at: bundle.generated_at.clone(),
        summaries: bundle.summaries.clone(),
        ast_pairs: bundle.ast_pairs.clone(),
        figures: figures(bundle),
    }
}

fn write(path: &Path, text: &str) -> Result<(), ReportError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| ReportError::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| ReportError::Io { path: path.to_path_buf(), source })
}

pub fn to_json(bundle: &ReportBundle) -> Result<String, ReportError> {
    if bundle.summaries.is_empty() {
        return Err(ReportError::NoSummaries);
    }
    Ok(serde_json::to_string_pretty(&document(bundle)).expect("report serializes") + "\n")
}

pub fn emit_json(bundle: &ReportBundle, path: &Path) -> Result<(), ReportError> {
    write(path, &to_json(bundle)?)
}

pub fn emit_html(bundle: &ReportBundle, path: &Path) -> Result<(), ReportError> {
    if bundle.summaries.is_empty() {
        return Err(ReportError::NoSummaries);
    }
    write(path, &render_html(bundle))
}
