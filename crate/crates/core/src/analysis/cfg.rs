//! Whole-program control-flow graphs.
//!
//! Construction threads a list of dangling exits through each block: every
//! construct takes the `(node, edge kind)` pairs that flow into it and returns
//! the pairs that flow out. Paragraphs are chained in source order, PERFORM of
//! a paragraph is summarized as a single statement node and STOP RUN is an
//! ordinary statement, so every paragraph body stays reachable and each
//! non-branch node has exactly one successor.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cobol::{AstIndex, CobolAst, PerformBody, Statement, StatementKind, WhenLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CfgNodeKind {
    Entry,
    Exit,
    Stmt,
    Branch,
    Join,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    Seq,
    True,
    False,
    LoopBack,
    Case,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfgNode {
    pub id: usize,
    pub kind: CfgNodeKind,
    pub stmt_ref: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CfgEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cfg {
    pub nodes: Vec<CfgNode>,
    pub edges: Vec<CfgEdge>,
    pub entry: usize,
    pub exit: usize,
    /// Nodes dropped because no path from Entry reached them.
    pub pruned: usize,
}

impl Cfg {
    pub fn count_kind(&self, kind: CfgNodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    pub fn count_edges(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.edges.iter().filter(|e| e.from == node).count()
    }

    /// Nodes carrying each statement reference.
    pub fn nodes_by_stmt(&self) -> HashMap<usize, Vec<usize>> {
        let mut map: HashMap<usize, Vec<usize>> = HashMap::new();
        for n in &self.nodes {
            if let Some(s) = n.stmt_ref {
                map.entry(s).or_default().push(n.id);
            }
        }
        map
    }

    fn adjacency(&self, reverse: bool) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            if reverse {
                adj[e.to].push(e.from);
            } else {
                adj[e.from].push(e.to);
            }
        }
        adj
    }

    pub fn reachable_from_entry(&self) -> Vec<bool> {
        bfs(&self.adjacency(false), self.entry)
    }

    pub fn reaches_exit(&self) -> Vec<bool> {
        bfs(&self.adjacency(true), self.exit)
    }
}

fn bfs(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(n) = queue.pop_front() {
        for &m in &adj[n] {
            if !seen[m] {
                seen[m] = true;
                queue.push_back(m);
            }
        }
    }
    seen
}

pub type Dangling = Vec<(usize, EdgeKind)>;

/// Incremental graph construction shared by the COBOL and Java front ends.
#[derive(Debug, Default)]
pub struct CfgBuilder {
    nodes: Vec<CfgNode>,
    edges: Vec<CfgEdge>,
    /// Edges whose target is resolved after construction, such as jumps.
    jumps: Vec<(usize, JumpTarget)>,
}

#[derive(Debug, Clone, Copy)]
pub enum JumpTarget {
    /// Index into the resolution table passed to `finish`.
    Label(usize),
    Exit,
}

impl CfgBuilder {
    pub fn new() -> Self {
        let mut b = Self::default();
        b.node(CfgNodeKind::Entry, None);
        b.node(CfgNodeKind::Exit, None);
        b
    }

    pub const ENTRY: usize = 0;
    pub const EXIT: usize = 1;

    pub fn node(&mut self, kind: CfgNodeKind, stmt_ref: Option<usize>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(CfgNode { id, kind, stmt_ref });
        id
    }

    pub fn edge(&mut self, from: usize, to: usize, kind: EdgeKind) {
        self.edges.push(CfgEdge { from, to, kind });
    }

    pub fn connect(&mut self, pending: &[(usize, EdgeKind)], to: usize) {
        for &(from, kind) in pending {
            self.edge(from, to, kind);
        }
    }

    /// Connects `pending` to `to`, all as back edges.
    pub fn loop_back(&mut self, pending: &[(usize, EdgeKind)], to: usize) {
        for &(from, _) in pending {
            self.edge(from, to, EdgeKind::LoopBack);
        }
    }

    /// A statement node fed by `pending`, falling through.
    pub fn stmt(&mut self, pending: &[(usize, EdgeKind)], stmt_ref: Option<usize>) -> Dangling {
        let n = self.node(CfgNodeKind::Stmt, stmt_ref);
        self.connect(pending, n);
        vec![(n, EdgeKind::Seq)]
    }

    pub fn jump(&mut self, from: usize, target: JumpTarget) {
        self.jumps.push((from, target));
    }

    /// Resolves jumps (`labels[i]` is the node for `JumpTarget::Label(i)`, or
    /// None for Exit), connects the remaining dangling exits to Exit, prunes
    /// unreachable nodes and cuts jump cycles that could never reach Exit.
    pub fn finish(mut self, pending: &[(usize, EdgeKind)], labels: &[Option<usize>]) -> Cfg {
        self.connect(pending, Self::EXIT);
        let jumps = std::mem::take(&mut self.jumps);
        let mut jump_edges = Vec::new();
        for (from, target) in jumps {
            let to = match target {
                JumpTarget::Label(i) => labels.get(i).copied().flatten().unwrap_or(Self::EXIT),
                JumpTarget::Exit => Self::EXIT,
            };
            jump_edges.push(self.edges.len());
            self.edge(from, to, EdgeKind::Seq);
        }
        let mut cfg = Cfg { nodes: self.nodes, edges: self.edges, entry: Self::ENTRY, exit: Self::EXIT, pruned: 0 };
        untrap(&mut cfg, &jump_edges);
        prune(&mut cfg);
        cfg
    }
}

/// Redirects jump edges inside regions that cannot reach Exit.
fn untrap(cfg: &mut Cfg, jump_edges: &[usize]) {
    loop {
        let from_entry = cfg.reachable_from_entry();
        let to_exit = cfg.reaches_exit();
        let trapped = |n: usize| from_entry[n] && !to_exit[n];
        if !(0..cfg.nodes.len()).any(trapped) {
            return;
        }
        let fix = jump_edges.iter().copied().find(|&e| trapped(cfg.edges[e].from) && cfg.edges[e].to != cfg.exit);
        match fix {
            Some(e) => cfg.edges[e].to = cfg.exit,
            // only jumps create cycles without an exit edge; this is unreachable
            // for well-formed input but keeps the invariant unconditional
            None => {
                let n = (0..cfg.nodes.len()).find(|&n| trapped(n)).expect("trapped node");
                cfg.edges.push(CfgEdge { from: n, to: cfg.exit, kind: EdgeKind::Seq });
            }
        }
    }
}

fn prune(cfg: &mut Cfg) {
    let keep = cfg.reachable_from_entry();
    let mut remap = vec![usize::MAX; cfg.nodes.len()];
    let mut nodes = Vec::new();
    for n in &cfg.nodes {
        if keep[n.id] {
            remap[n.id] = nodes.len();
            nodes.push(CfgNode { id: nodes.len(), ..n.clone() });
        }
    }
    cfg.pruned = cfg.nodes.len() - nodes.len();
    cfg.edges = cfg
        .edges
        .iter()
        .filter(|e| keep[e.from] && keep[e.to])
        .map(|e| CfgEdge { from: remap[e.from], to: remap[e.to], kind: e.kind })
        .collect();
    cfg.entry = remap[cfg.entry];
    cfg.exit = remap[cfg.exit];
    cfg.nodes = nodes;
}

pub fn build_cfg(ast: &CobolAst) -> Cfg {
    let index = AstIndex::build(ast);
    let mut b = CobolCfg { b: CfgBuilder::new(), index: &index, ast, para_first: vec![None; ast.paragraphs.len()] };
    let mut pending: Dangling = vec![(CfgBuilder::ENTRY, EdgeKind::Seq)];
    for (pi, p) in ast.paragraphs.iter().enumerate() {
        let before = b.b.nodes.len();
        pending = b.block(&p.statements, pending);
        if b.b.nodes.len() > before {
            b.para_first[pi] = Some(before);
        }
    }
    // an empty paragraph's label falls through to the next non-empty one
    let mut labels = b.para_first.clone();
    let mut next = None;
    for l in labels.iter_mut().rev() {
        if l.is_some() {
            next = *l;
        } else {
            *l = next;
        }
    }
    b.b.finish(&pending, &labels)
}

struct CobolCfg<'a, 'i> {
    b: CfgBuilder,
    index: &'i AstIndex<'a>,
    ast: &'a CobolAst,
    para_first: Vec<Option<usize>>,
}

impl CobolCfg<'_, '_> {
    fn block(&mut self, stmts: &[Statement], mut pending: Dangling) -> Dangling {
        for s in stmts {
            pending = self.statement(s, pending);
        }
        pending
    }

    fn statement(&mut self, s: &Statement, pending: Dangling) -> Dangling {
        let r = self.index.index_of(s);
        match &s.kind {
            StatementKind::If { then_branch, else_branch, .. } => {
                let br = self.b.node(CfgNodeKind::Branch, r);
                self.b.connect(&pending, br);
                let mut out = self.block(then_branch, vec![(br, EdgeKind::True)]);
                if else_branch.is_empty() {
                    out.push((br, EdgeKind::False));
                } else {
                    out.extend(self.block(else_branch, vec![(br, EdgeKind::False)]));
                }
                self.join(out, r)
            }
            StatementKind::Evaluate { arms, .. } => {
                let br = self.b.node(CfgNodeKind::Branch, r);
                self.b.connect(&pending, br);
                let mut out = Vec::new();
                let mut has_other = false;
                for arm in arms {
                    let kind = match arm.label {
                        WhenLabel::Lit(_) => EdgeKind::Case,
                        WhenLabel::Other => {
                            has_other = true;
                            EdgeKind::False
                        }
                    };
                    out.extend(self.block(&arm.body, vec![(br, kind)]));
                }
                if !has_other {
                    out.push((br, EdgeKind::False));
                }
                self.join(out, r)
            }
            StatementKind::PerformTimes { body, .. } => {
                let br = self.b.node(CfgNodeKind::Branch, r);
                self.b.connect(&pending, br);
                let out = match body {
                    PerformBody::Inline(stmts) => self.block(stmts, vec![(br, EdgeKind::True)]),
                    PerformBody::Paragraph(_) => self.b.stmt(&[(br, EdgeKind::True)], r),
                };
                self.b.loop_back(&out, br);
                vec![(br, EdgeKind::False)]
            }
            StatementKind::PerformUntil { body, .. } => {
                let br = self.b.node(CfgNodeKind::Branch, r);
                self.b.connect(&pending, br);
                let out = self.block(body, vec![(br, EdgeKind::True)]);
                self.b.loop_back(&out, br);
                vec![(br, EdgeKind::False)]
            }
            StatementKind::PerformVarying { body, .. } => {
                let init = self.b.stmt(&pending, r);
                let br = self.b.node(CfgNodeKind::Branch, r);
                self.b.connect(&init, br);
                let out = self.block(body, vec![(br, EdgeKind::True)]);
                let step = self.b.stmt(&out, r);
                self.b.loop_back(&step, br);
                vec![(br, EdgeKind::False)]
            }
            StatementKind::GoTo { target } => {
                let n = self.b.node(CfgNodeKind::Stmt, r);
                self.b.connect(&pending, n);
                let target = match self.ast.paragraph_index(target) {
                    Some(pi) => JumpTarget::Label(pi),
                    None => JumpTarget::Exit,
                };
                self.b.jump(n, target);
                Vec::new()
            }
            _ => self.b.stmt(&pending, r),
        }
    }

    fn join(&mut self, pending: Dangling, r: Option<usize>) -> Dangling {
        let j = self.b.node(CfgNodeKind::Join, r);
        self.b.connect(&pending, j);
        vec![(j, EdgeKind::Seq)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobol::parse_str;

    fn cfg_of(body: &str) -> Cfg {
        let src = format!("IDENTIFICATION DIVISION. PROGRAM-ID. T. PROCEDURE DIVISION. {body}");
        build_cfg(&parse_str(&src).unwrap())
    }

    #[test]
    fn straight_line() {
        let cfg = cfg_of("MAIN. MOVE 1 TO A. DISPLAY A. STOP RUN.");
        let kinds: Vec<_> = cfg.nodes.iter().map(|n| n.kind).collect();
        use CfgNodeKind::*;
        assert_eq!(kinds, vec![Entry, Exit, Stmt, Stmt, Stmt]);
        assert_eq!(cfg.edges.len(), 4);
        assert!(cfg.edges.iter().all(|e| e.kind == EdgeKind::Seq));
    }

    #[test]
    fn single_if_else() {
        let cfg = cfg_of("MAIN. IF A > 1 DISPLAY 'X' ELSE DISPLAY 'Y' END-IF.");
        assert_eq!(cfg.count_kind(CfgNodeKind::Branch), 1);
        assert_eq!(cfg.count_kind(CfgNodeKind::Join), 1);
        assert_eq!(cfg.count_edges(EdgeKind::True), 1);
        assert_eq!(cfg.count_edges(EdgeKind::False), 1);
    }

    #[test]
    fn loop_with_nested_if() {
        let cfg = cfg_of("MAIN. PERFORM UNTIL A > 3 IF A = 1 DISPLAY A END-IF ADD 1 TO A END-PERFORM.");
        assert_eq!(cfg.count_kind(CfgNodeKind::Branch), 2);
        assert_eq!(cfg.count_edges(EdgeKind::LoopBack), 1);
    }

    #[test]
    fn evaluate_edges() {
        let cfg = cfg_of("MAIN. EVALUATE A WHEN 1 DISPLAY 'A' WHEN 2 DISPLAY 'B' WHEN 3 DISPLAY 'C' END-EVALUATE.");
        assert_eq!(cfg.count_edges(EdgeKind::Case), 3);
        assert_eq!(cfg.count_edges(EdgeKind::False), 1);
    }

    #[test]
    fn goto_dead_code_is_pruned() {
        let cfg = cfg_of("MAIN. GO TO FIN. DISPLAY 'DEAD'. FIN. STOP RUN.");
        assert_eq!(cfg.pruned, 1);
        assert!(cfg.reachable_from_entry().iter().all(|&r| r));
        assert!(cfg.reaches_exit().iter().all(|&r| r));
    }

    #[test]
    fn goto_cycle_is_cut_to_exit() {
        let cfg = cfg_of("MAIN. DISPLAY 'A'. GO TO MAIN.");
        assert!(cfg.reaches_exit().iter().all(|&r| r));
        assert_eq!(cfg.count_kind(CfgNodeKind::Stmt), 2);
    }

    #[test]
    fn varying_shape() {
        let cfg = cfg_of("MAIN. PERFORM VARYING I FROM 1 BY 1 UNTIL I > 3 DISPLAY I END-PERFORM.");
        // entry, exit, init, branch, body, step
        assert_eq!(cfg.nodes.len(), 6);
        assert_eq!(cfg.count_edges(EdgeKind::LoopBack), 1);
    }
}
