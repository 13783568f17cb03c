//! Pre-order node numbering of a [`CobolAst`].
//!
//! The numbering defined here is the one every other component refers to:
//! `stmt_ref` values in action lists, `ExtractMethodAt` offsets, step
//! feature sequences and the JSON tree all use these indices.
//!
//! Tree shape: `Program` → data items (nested) → paragraphs → statements.
//! An `If` holds its then-statements followed by an `Else` node (only when
//! the else branch is non-empty); an `Evaluate` holds one `When` node per
//! arm; inline PERFORM bodies hang directly off the loop statement.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::ast::{CobolAst, DataItem, PerformBody, Statement, StatementKind};
use crate::tree::TreeNode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    Program,
    DataItem,
    Paragraph,
    Move,
    Compute,
    Arith,
    If,
    Else,
    Evaluate,
    When,
    PerformPara,
    PerformTimes,
    PerformUntil,
    PerformVarying,
    Display,
    Accept,
    Call,
    GoTo,
    StopRun,
}

impl NodeKind {
    pub const ALL: [NodeKind; 19] = [
        NodeKind::Program,
        NodeKind::DataItem,
        NodeKind::Paragraph,
        NodeKind::Move,
        NodeKind::Compute,
        NodeKind::Arith,
        NodeKind::If,
        NodeKind::Else,
        NodeKind::Evaluate,
        NodeKind::When,
        NodeKind::PerformPara,
        NodeKind::PerformTimes,
        NodeKind::PerformUntil,
        NodeKind::PerformVarying,
        NodeKind::Display,
        NodeKind::Accept,
        NodeKind::Call,
        NodeKind::GoTo,
        NodeKind::StopRun,
    ];

    pub fn id(self) -> usize {
        Self::ALL.iter().position(|k| *k == self).unwrap_or(0)
    }

    pub fn of(kind: &StatementKind) -> Self {
        match kind {
            StatementKind::Move { .. } => NodeKind::Move,
            StatementKind::Compute { .. } => NodeKind::Compute,
            StatementKind::Arith { .. } => NodeKind::Arith,
            StatementKind::If { .. } => NodeKind::If,
            StatementKind::Evaluate { .. } => NodeKind::Evaluate,
            StatementKind::PerformPara { .. } => NodeKind::PerformPara,
            StatementKind::PerformTimes { .. } => NodeKind::PerformTimes,
            StatementKind::PerformUntil { .. } => NodeKind::PerformUntil,
            StatementKind::PerformVarying { .. } => NodeKind::PerformVarying,
            StatementKind::Display { .. } => NodeKind::Display,
            StatementKind::Accept { .. } => NodeKind::Accept,
            StatementKind::Call { .. } => NodeKind::Call,
            StatementKind::GoTo { .. } => NodeKind::GoTo,
            StatementKind::StopRun => NodeKind::StopRun,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Program => "Program",
            NodeKind::DataItem => "DataItem",
            NodeKind::Paragraph => "Paragraph",
            NodeKind::Move => "Move",
            NodeKind::Compute => "Compute",
            NodeKind::Arith => "Arith",
            NodeKind::If => "If",
            NodeKind::Else => "Else",
            NodeKind::Evaluate => "Evaluate",
            NodeKind::When => "When",
            NodeKind::PerformPara => "PerformPara",
            NodeKind::PerformTimes => "PerformTimes",
            NodeKind::PerformUntil => "PerformUntil",
            NodeKind::PerformVarying => "PerformVarying",
            NodeKind::Display => "Display",
            NodeKind::Accept => "Accept",
            NodeKind::Call => "Call",
            NodeKind::GoTo => "GoTo",
            NodeKind::StopRun => "StopRun",
        }
    }

    pub fn is_statement(self) -> bool {
        !matches!(
            self,
            NodeKind::Program | NodeKind::DataItem | NodeKind::Paragraph | NodeKind::Else | NodeKind::When
        )
    }
}

#[derive(Debug, Clone)]
pub struct AstNode<'a> {
    pub index: usize,
    pub kind: NodeKind,
    pub label: String,
    pub line: u32,
    pub depth: usize,
    pub parent: Option<usize>,
    pub sibling_index: usize,
    pub child_count: usize,
    pub subtree_size: usize,
    /// Number of enclosing statements (IF, EVALUATE, inline PERFORM).
    pub nesting: usize,
    pub paragraph: Option<usize>,
    pub stmt: Option<&'a Statement>,
    /// Position among statement nodes, pre-order.
    pub stmt_ordinal: Option<usize>,
}

pub struct AstIndex<'a> {
    pub nodes: Vec<AstNode<'a>>,
    by_stmt: HashMap<*const Statement, usize>,
    pub statement_count: usize,
    pub paragraph_count: usize,
}

impl<'a> AstIndex<'a> {
    pub fn build(ast: &'a CobolAst) -> Self {
        let mut b = Builder { nodes: Vec::new(), by_stmt: HashMap::new(), stmt_count: 0 };
        let root = b.push(NodeKind::Program, ast.program_id.clone(), 0, None, 0, 0, None, None);
        let mut sib = 0;
        for item in &ast.data_items {
            b.data_item(item, root, sib);
            sib += 1;
        }
        for (pi, para) in ast.paragraphs.iter().enumerate() {
            let p = b.push(NodeKind::Paragraph, para.name.clone(), para.line, Some(root), sib, 0, Some(pi), None);
            sib += 1;
            b.block(&para.statements, p, 0, 0, pi);
            b.finish(p);
        }
        b.finish(root);
        AstIndex {
            nodes: b.nodes,
            by_stmt: b.by_stmt,
            statement_count: b.stmt_count,
            paragraph_count: ast.paragraphs.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Pre-order index of a statement borrowed from the indexed AST.
    pub fn index_of(&self, stmt: &Statement) -> Option<usize> {
        self.by_stmt.get(&(stmt as *const Statement)).copied()
    }

    pub fn statement_nodes(&self) -> impl Iterator<Item = &AstNode<'a>> {
        self.nodes.iter().filter(|n| n.stmt.is_some())
    }

    pub fn statement_at(&self, index: usize) -> Option<&'a Statement> {
        self.nodes.get(index).and_then(|n| n.stmt)
    }

    pub fn children(&self, index: usize) -> impl Iterator<Item = &AstNode<'a>> {
        self.nodes.iter().filter(move |n| n.parent == Some(index))
    }

    pub fn to_tree(&self) -> TreeNode {
        fn build(idx: &AstIndex<'_>, kids: &[Vec<usize>], i: usize) -> TreeNode {
            let n = &idx.nodes[i];
            TreeNode::new(n.kind.name(), n.label.clone(), n.line)
                .with_children(kids[i].iter().map(|&c| build(idx, kids, c)).collect())
        }
        let mut kids = vec![Vec::new(); self.nodes.len()];
        for n in &self.nodes {
            if let Some(p) = n.parent {
                kids[p].push(n.index);
            }
        }
        build(self, &kids, 0)
    }
}

/// JSON-ready tree form of a COBOL program.
pub fn syntax_tree(ast: &CobolAst) -> TreeNode {
    AstIndex::build(ast).to_tree()
}

struct Builder<'a> {
    nodes: Vec<AstNode<'a>>,
    by_stmt: HashMap<*const Statement, usize>,
    stmt_count: usize,
}

impl<'a> Builder<'a> {
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        kind: NodeKind,
        label: String,
        line: u32,
        parent: Option<usize>,
        sibling_index: usize,
        nesting: usize,
        paragraph: Option<usize>,
        stmt: Option<&'a Statement>,
    ) -> usize {
        let index = self.nodes.len();
        let depth = parent.map_or(0, |p| self.nodes[p].depth + 1);
        if let Some(p) = parent {
            self.nodes[p].child_count += 1;
        }
        let stmt_ordinal = stmt.map(|s| {
            self.by_stmt.insert(s as *const Statement, index);
            self.stmt_count += 1;
            self.stmt_count - 1
        });
        self.nodes.push(AstNode {
            index,
            kind,
            label,
            line,
            depth,
            parent,
            sibling_index,
            child_count: 0,
            subtree_size: 1,
            nesting,
            paragraph,
            stmt,
            stmt_ordinal,
        });
        index
    }

    /// Subtree sizes are final once every descendant has been pushed.
    fn finish(&mut self, index: usize) {
        self.nodes[index].subtree_size = self.nodes.len() - index;
    }

    fn data_item(&mut self, item: &DataItem, parent: usize, sib: usize) {
        let i = self.push(NodeKind::DataItem, item.name.clone(), item.line, Some(parent), sib, 0, None, None);
        for (k, c) in item.children.iter().enumerate() {
            self.data_item(c, i, k);
        }
        self.finish(i);
    }

    fn block(&mut self, stmts: &'a [Statement], parent: usize, first_sib: usize, nesting: usize, para: usize) {
        for (k, s) in stmts.iter().enumerate() {
            self.statement(s, parent, first_sib + k, nesting, para);
        }
    }

    fn statement(&mut self, s: &'a Statement, parent: usize, sib: usize, nesting: usize, para: usize) {
        let kind = NodeKind::of(&s.kind);
        let i = self.push(kind, statement_label(&s.kind), s.line, Some(parent), sib, nesting, Some(para), Some(s));
        let inner = nesting + 1;
        match &s.kind {
            StatementKind::If { then_branch, else_branch, .. } => {
                self.block(then_branch, i, 0, inner, para);
                if !else_branch.is_empty() {
                    let e = self.push(NodeKind::Else, String::new(), s.line, Some(i), then_branch.len(), inner, Some(para), None);
                    self.block(else_branch, e, 0, inner, para);
                    self.finish(e);
                }
            }
            StatementKind::Evaluate { arms, .. } => {
                for (k, arm) in arms.iter().enumerate() {
                    let label = match &arm.label {
                        super::ast::WhenLabel::Lit(l) => literal_label(l),
                        super::ast::WhenLabel::Other => "OTHER".into(),
                    };
                    let w = self.push(NodeKind::When, label, s.line, Some(i), k, inner, Some(para), None);
                    self.block(&arm.body, w, 0, inner, para);
                    self.finish(w);
                }
            }
            StatementKind::PerformTimes { body: PerformBody::Inline(b), .. }
            | StatementKind::PerformUntil { body: b, .. }
            | StatementKind::PerformVarying { body: b, .. } => self.block(b, i, 0, inner, para),
            _ => {}
        }
        self.finish(i);
    }
}

fn literal_label(l: &super::ast::Literal) -> String {
    match l {
        super::ast::Literal::Int(v) => v.to_string(),
        super::ast::Literal::Str(s) => format!("'{s}'"),
    }
}

fn statement_label(kind: &StatementKind) -> String {
    match kind {
        StatementKind::Move { dst, .. } => dst.clone(),
        StatementKind::Compute { dst, .. } => dst.clone(),
        StatementKind::Arith { verb, .. } => verb.keyword().into(),
        StatementKind::Evaluate { subject, .. } => subject.clone(),
        StatementKind::PerformPara { target } | StatementKind::GoTo { target } => target.clone(),
        StatementKind::PerformTimes { body: PerformBody::Paragraph(t), .. } => t.clone(),
        StatementKind::PerformVarying { var, .. } => var.clone(),
        StatementKind::Accept { dst } => dst.clone(),
        StatementKind::Call { program, .. } => program.clone(),
        _ => String::new(),
    }
}
