//! Complexity of translated code, measured with the same CFG rules as the
//! COBOL side.

use std::collections::BTreeSet;

use super::emit::emit_java;
use super::java::*;
use crate::analysis::cfg::{Cfg, CfgBuilder, CfgNodeKind, Dangling, EdgeKind, JumpTarget};
use crate::analysis::metrics::{cyclomatic, MetricsRecord};

/// One CFG per method. `Return` jumps to Exit; `Break` to the join of the
/// innermost switch or loop.
pub fn method_cfg(m: &JMethod) -> Cfg {
    let mut w = JavaCfg { b: CfgBuilder::new(), labels: Vec::new(), breaks: Vec::new() };
    let out = w.block(&m.body, vec![(CfgBuilder::ENTRY, EdgeKind::Seq)]);
    w.b.finish(&out, &w.labels)
}

pub fn java_cfgs(j: &JavaAst) -> Vec<(String, Cfg)> {
    j.methods.iter().map(|m| (m.name.clone(), method_cfg(m))).collect()
}

/// The most complex method's V(G).
pub fn java_cyclomatic(j: &JavaAst) -> u32 {
    j.methods.iter().map(|m| cyclomatic(&method_cfg(m))).max().unwrap_or(1)
}

/// Distinct call targets that are not methods of the class itself.
pub fn java_coupling(j: &JavaAst) -> u32 {
    let own: BTreeSet<&str> = j.methods.iter().map(|m| m.name.as_str()).collect();
    let mut targets = BTreeSet::new();
    for m in &j.methods {
        visit_jstmts(&m.body, &mut |s| {
            if let JStmt::MethodCall { method, .. } = s {
                if !own.contains(method.as_str()) {
                    targets.insert(method.clone());
                }
            }
        });
    }
    targets.len() as u32
}

/// `features` stays empty: the feature vector is defined on COBOL input.
pub fn java_metrics(j: &JavaAst) -> MetricsRecord {
    MetricsRecord {
        cyclomatic: java_cyclomatic(j),
        coupling: java_coupling(j),
        lines: emit_java(j).lines().count() as u32,
        features: Vec::new(),
    }
}

struct JavaCfg {
    b: CfgBuilder,
    labels: Vec<Option<usize>>,
    /// Label slots for the enclosing breakable statements.
    breaks: Vec<usize>,
}

impl JavaCfg {
    fn block(&mut self, stmts: &[JStmt], mut pending: Dangling) -> Dangling {
        for s in stmts {
            pending = self.statement(s, pending);
        }
        pending
    }

    fn branch(&mut self, pending: &Dangling) -> usize {
        let br = self.b.node(CfgNodeKind::Branch, None);
        self.b.connect(pending, br);
        br
    }

    fn open_break(&mut self) -> usize {
        self.labels.push(None);
        self.breaks.push(self.labels.len() - 1);
        self.labels.len() - 1
    }

    fn close_break(&mut self, slot: usize, out: Dangling) -> Dangling {
        self.breaks.pop();
        let j = self.b.node(CfgNodeKind::Join, None);
        self.b.connect(&out, j);
        self.labels[slot] = Some(j);
        vec![(j, EdgeKind::Seq)]
    }

    fn statement(&mut self, s: &JStmt, pending: Dangling) -> Dangling {
        match s {
            JStmt::IfElse { then_branch, else_branch, .. } => {
                let br = self.branch(&pending);
                let mut out = self.block(then_branch, vec![(br, EdgeKind::True)]);
                if else_branch.is_empty() {
                    out.push((br, EdgeKind::False));
                } else {
                    out.extend(self.block(else_branch, vec![(br, EdgeKind::False)]));
                }
                let j = self.b.node(CfgNodeKind::Join, None);
                self.b.connect(&out, j);
                vec![(j, EdgeKind::Seq)]
            }
            JStmt::While { body, .. } => {
                let slot = self.open_break();
                let br = self.branch(&pending);
                let out = self.block(body, vec![(br, EdgeKind::True)]);
                self.b.loop_back(&out, br);
                self.close_break(slot, vec![(br, EdgeKind::False)])
            }
            JStmt::For { init, update, body, .. } => {
                let pending = self.block(init, pending);
                let slot = self.open_break();
                let br = self.branch(&pending);
                let out = self.block(body, vec![(br, EdgeKind::True)]);
                let out = self.block(update, out);
                self.b.loop_back(&out, br);
                self.close_break(slot, vec![(br, EdgeKind::False)])
            }
            JStmt::DoWhile { body, .. } => {
                let slot = self.open_break();
                let start = self.b.node(CfgNodeKind::Join, None);
                self.b.connect(&pending, start);
                let out = self.block(body, vec![(start, EdgeKind::Seq)]);
                let br = self.branch(&out);
                self.b.edge(br, start, EdgeKind::LoopBack);
                self.close_break(slot, vec![(br, EdgeKind::False)])
            }
            JStmt::Switch { cases, default, .. } => {
                let slot = self.open_break();
                let br = self.branch(&pending);
                let mut carry = Dangling::new();
                for c in cases {
                    carry.push((br, EdgeKind::Case));
                    carry = self.block(&c.body, carry);
                }
                match default {
                    Some(d) => {
                        carry.push((br, EdgeKind::False));
                        carry = self.block(d, carry);
                    }
                    None => carry.push((br, EdgeKind::False)),
                }
                self.close_break(slot, carry)
            }
            JStmt::Return => {
                let n = self.b.node(CfgNodeKind::Stmt, None);
                self.b.connect(&pending, n);
                self.b.jump(n, JumpTarget::Exit);
                Vec::new()
            }
            JStmt::Break => {
                let n = self.b.node(CfgNodeKind::Stmt, None);
                self.b.connect(&pending, n);
                let target = self.breaks.last().map_or(JumpTarget::Exit, |&slot| JumpTarget::Label(slot));
                self.b.jump(n, target);
                Vec::new()
            }
            _ => self.b.stmt(&pending, None),
        }
    }
}
