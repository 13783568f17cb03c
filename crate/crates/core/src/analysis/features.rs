//! Fixed-order file feature vector and per-node step features.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::cfg::{Cfg, EdgeKind};
use super::metrics::{call_targets, cyclomatic};
use crate::cobol::{
    pretty_print, tokenize_str, AstIndex, CobolAst, Literal, NodeKind, Picture, StatementKind,
};

pub const FILE_FEATURES: usize = 30;

pub const FILE_FEATURE_NAMES: [&str; FILE_FEATURES] = [
    "lines",
    "tokens",
    "ast_nodes",
    "cfg_edges",
    "cfg_cycles",
    "paragraphs",
    "statements",
    "calls_total",
    "calls_distinct",
    "performs",
    "ifs",
    "evaluates",
    "gotos",
    "moves",
    "computes",
    "arith_ops",
    "displays",
    "accepts",
    "max_nesting",
    "mean_nesting",
    "data_items",
    "numeric_items",
    "alnum_items",
    "group_items",
    "cyclomatic",
    "max_paragraph_len",
    "mean_paragraph_len",
    "branch_density",
    "literal_count",
    "string_literal_count",
];

pub const NODE_FEATURES: usize = 12;
pub const EDGE_FEATURES: usize = 6;
pub const STEP_FEATURES: usize = NODE_FEATURES + EDGE_FEATURES;

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Line and token counts are taken from the canonical printed form so the
/// vector depends on program structure only, not on layout.
pub fn file_features(ast: &CobolAst, cfg: &Cfg) -> [f64; FILE_FEATURES] {
    let text = pretty_print(ast);
    let lines = text.lines().count();
    let tokens = tokenize_str(&text).map_or(0, |t| t.len());
    let index = AstIndex::build(ast);

    let mut counts: HashMap<NodeKind, usize> = HashMap::new();
    let mut nesting = Vec::new();
    let mut literals = 0usize;
    let mut strings = 0usize;
    let mut calls_total = 0usize;
    for node in index.statement_nodes() {
        let stmt = node.stmt.expect("statement node");
        *counts.entry(node.kind).or_default() += 1;
        nesting.push(node.nesting);
        let lits = stmt.kind.literals();
        literals += lits.len();
        strings += lits.iter().filter(|l| matches!(l, Literal::Str(_))).count();
        if let StatementKind::Call { .. } = stmt.kind {
            calls_total += 1;
        }
    }
    let count = |k: NodeKind| *counts.get(&k).unwrap_or(&0) as f64;
    let statements = index.statement_count as f64;
    let performs = count(NodeKind::PerformPara)
        + count(NodeKind::PerformTimes)
        + count(NodeKind::PerformUntil)
        + count(NodeKind::PerformVarying);
    let branches = count(NodeKind::If) + count(NodeKind::Evaluate);

    let para_lens: Vec<f64> = ast
        .paragraphs
        .iter()
        .map(|p| {
            let mut n = 0usize;
            crate::cobol::visit_statements(&p.statements, &mut |_| n += 1);
            n as f64
        })
        .collect();

    let items = ast.all_data_items();
    let numeric = items.iter().filter(|d| matches!(d.picture, Some(Picture::Numeric(_)))).count();
    let alnum = items.iter().filter(|d| matches!(d.picture, Some(Picture::Alnum(_)))).count();
    let groups = items.iter().filter(|d| d.is_group()).count();

    [
        lines as f64,
        tokens as f64,
        index.len() as f64,
        cfg.edges.len() as f64,
        cfg.count_edges(EdgeKind::LoopBack) as f64,
        ast.paragraphs.len() as f64,
        statements,
        calls_total as f64,
        call_targets(ast).len() as f64,
        performs,
        count(NodeKind::If),
        count(NodeKind::Evaluate),
        count(NodeKind::GoTo),
        count(NodeKind::Move),
        count(NodeKind::Compute),
        count(NodeKind::Arith),
        count(NodeKind::Display),
        count(NodeKind::Accept),
        nesting.iter().copied().max().unwrap_or(0) as f64,
        ratio(nesting.iter().sum::<usize>() as f64, nesting.len() as f64),
        items.len() as f64,
        numeric as f64,
        alnum as f64,
        groups as f64,
        cyclomatic(cfg) as f64,
        para_lens.iter().copied().fold(0.0, f64::max),
        ratio(para_lens.iter().sum(), para_lens.len() as f64),
        ratio(branches, statements),
        literals as f64,
        strings as f64,
    ]
}

/// Incoming-edge categories, in one-hot order.
pub const STEP_EDGE_KINDS: [&str; EDGE_FEATURES] = ["Seq", "True", "False", "LoopBack", "Case", "TreeChild"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFeatures {
    pub node_feats: Vec<[f64; NODE_FEATURES]>,
    pub edge_feats: Vec<[f64; EDGE_FEATURES]>,
    /// Whether each step is a statement node (the positions that get labels).
    pub is_statement: Vec<bool>,
}

impl StepFeatures {
    pub fn len(&self) -> usize {
        self.node_feats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node_feats.is_empty()
    }

    /// Node and edge features concatenated per step.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.node_feats
            .iter()
            .zip(&self.edge_feats)
            .map(|(n, e)| n.iter().chain(e.iter()).copied().collect())
            .collect()
    }
}

fn edge_slot(kind: EdgeKind) -> usize {
    match kind {
        EdgeKind::Seq => 0,
        EdgeKind::True => 1,
        EdgeKind::False => 2,
        EdgeKind::LoopBack => 3,
        EdgeKind::Case => 4,
    }
}

const TREE_CHILD: usize = 5;

pub fn step_features(ast: &CobolAst, cfg: &Cfg) -> StepFeatures {
    let index = AstIndex::build(ast);
    let by_stmt = cfg.nodes_by_stmt();
    let mut edge_lookup: HashMap<(usize, usize), EdgeKind> = HashMap::new();
    for e in &cfg.edges {
        edge_lookup.entry((e.from, e.to)).or_insert(e.kind);
    }
    let kinds = NodeKind::ALL.len() as f64;
    let paras = index.paragraph_count as f64;
    let stmts = index.statement_count as f64;

    let mut node_feats = Vec::with_capacity(index.len());
    let mut edge_feats = Vec::with_capacity(index.len());
    let mut is_statement = Vec::with_capacity(index.len());
    for node in &index.nodes {
        let literal_count = match node.stmt {
            Some(s) => s.kind.literals().len(),
            None => match node.kind {
                NodeKind::When => usize::from(node.label != "OTHER"),
                _ => 0,
            },
        };
        let flag = |b: bool| if b { 1.0 } else { 0.0 };
        let st = node.stmt.map(|s| &s.kind);
        node_feats.push([
            node.kind.id() as f64 / kinds,
            node.depth as f64,
            node.child_count as f64,
            node.sibling_index as f64,
            node.subtree_size as f64,
            node.nesting as f64,
            flag(st.is_some_and(StatementKind::is_loop)),
            flag(st.is_some_and(StatementKind::is_branch)),
            flag(matches!(node.kind, NodeKind::Call | NodeKind::PerformPara)),
            literal_count as f64,
            node.paragraph.map_or(0.0, |p| ratio(p as f64, paras)),
            node.stmt_ordinal.map_or(0.0, |o| ratio(o as f64, stmts)),
        ]);

        let mut edge = [0.0; EDGE_FEATURES];
        let slot = node
            .index
            .checked_sub(1)
            .and_then(|prev| {
                let from = by_stmt.get(&prev)?;
                let to = by_stmt.get(&node.index)?;
                from.iter().flat_map(|&f| to.iter().map(move |&t| (f, t))).find_map(|k| edge_lookup.get(&k))
            })
            .map_or(TREE_CHILD, |&k| edge_slot(k));
        edge[slot] = 1.0;
        edge_feats.push(edge);
        is_statement.push(node.stmt.is_some());
    }
    StepFeatures { node_feats, edge_feats, is_statement }
}
