use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::cfg::{build_cfg, Cfg, CfgNodeKind};
use super::features::file_features;
use crate::cobol::{CobolAst, StatementKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub cyclomatic: u32,
    pub coupling: u32,
    pub lines: u32,
    pub features: Vec<f64>,
}

/// McCabe's V(G) = E - N + 2 for a single connected graph.
pub fn cyclomatic(cfg: &Cfg) -> u32 {
    (cfg.edges.len() as i64 - cfg.nodes.len() as i64 + 2).max(1) as u32
}

/// The same number counted from decisions: one plus the extra out-edges of
/// every branch node.
pub fn decision_cyclomatic(cfg: &Cfg) -> u32 {
    let extra: usize = cfg
        .nodes
        .iter()
        .filter(|n| n.kind == CfgNodeKind::Branch)
        .map(|n| cfg.out_degree(n.id).saturating_sub(1))
        .sum();
    1 + extra as u32
}

/// Distinct CALL targets used anywhere in the program.
pub fn call_targets(ast: &CobolAst) -> BTreeSet<&str> {
    let mut out = BTreeSet::new();
    ast.for_each_statement(|s| {
        if let StatementKind::Call { program, .. } = &s.kind {
            out.insert(program.as_str());
        }
    });
    out
}

pub fn coupling(ast: &CobolAst) -> u32 {
    call_targets(ast).len() as u32
}

pub fn analyze(ast: &CobolAst) -> MetricsRecord {
    let cfg = build_cfg(ast);
    analyze_with(ast, &cfg)
}

pub fn analyze_with(ast: &CobolAst, cfg: &Cfg) -> MetricsRecord {
    let features = file_features(ast, cfg);
    MetricsRecord {
        cyclomatic: cyclomatic(cfg),
        coupling: coupling(ast),
        lines: features[0] as u32,
        features: features.to_vec(),
    }
}
