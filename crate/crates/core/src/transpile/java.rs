//! Target-side AST: one class of fields and parameterless methods.

use serde::{Deserialize, Serialize};

use crate::cobol::Picture;
use crate::tree::TreeNode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JType {
    Long,
    Str,
}

impl JType {
    pub fn keyword(self) -> &'static str {
        match self {
            JType::Long => "long",
            JType::Str => "String",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JLit {
    Long(i64),
    Str(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JBinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl JBinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            JBinOp::Add => "+",
            JBinOp::Sub => "-",
            JBinOp::Mul => "*",
            JBinOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum JCmpOp {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl JCmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            JCmpOp::Eq => "==",
            JCmpOp::Ne => "!=",
            JCmpOp::Lt => "<",
            JCmpOp::Gt => ">",
            JCmpOp::Le => "<=",
            JCmpOp::Ge => ">=",
        }
    }
}

/// Runtime helpers the emitted class inherits from its base class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Builtin {
    /// `fit(s, width)`: truncate or right-pad with spaces.
    Fit,
    /// `str(n)`: decimal rendering of a long.
    Str,
    /// `rtrim(s)`: strip trailing spaces.
    Rtrim,
    /// `compare(a, b)`: space-padded string comparison, -1/0/1.
    Compare,
    ReadLong,
    ReadString,
    /// `fail(reason)`: raise a runtime error.
    Fail,
    /// `System.exit(0)`.
    Exit,
}

impl Builtin {
    pub const ALL: [Builtin; 8] = [
        Builtin::Fit,
        Builtin::Str,
        Builtin::Rtrim,
        Builtin::Compare,
        Builtin::ReadLong,
        Builtin::ReadString,
        Builtin::Fail,
        Builtin::Exit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Fit => "fit",
            Builtin::Str => "str",
            Builtin::Rtrim => "rtrim",
            Builtin::Compare => "compare",
            Builtin::ReadLong => "readLong",
            Builtin::ReadString => "readString",
            Builtin::Fail => "fail",
            Builtin::Exit => "System.exit",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|b| b.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum JExpr {
    Lit(JLit),
    Var(String),
    Binary { op: JBinOp, lhs: Box<JExpr>, rhs: Box<JExpr> },
    Cmp { op: JCmpOp, lhs: Box<JExpr>, rhs: Box<JExpr> },
    And(Box<JExpr>, Box<JExpr>),
    Or(Box<JExpr>, Box<JExpr>),
    Not(Box<JExpr>),
    Builtin { f: Builtin, args: Vec<JExpr> },
}

impl JExpr {
    pub fn long(v: i64) -> Self {
        JExpr::Lit(JLit::Long(v))
    }

    pub fn str(s: impl Into<String>) -> Self {
        JExpr::Lit(JLit::Str(s.into()))
    }

    pub fn var(n: impl Into<String>) -> Self {
        JExpr::Var(n.into())
    }

    pub fn bin(op: JBinOp, lhs: JExpr, rhs: JExpr) -> Self {
        JExpr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn cmp(op: JCmpOp, lhs: JExpr, rhs: JExpr) -> Self {
        JExpr::Cmp { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn call(f: Builtin, args: Vec<JExpr>) -> Self {
        JExpr::Builtin { f, args }
    }

    pub fn not(e: JExpr) -> Self {
        JExpr::Not(Box::new(e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchCase {
    pub label: JLit,
    pub body: Vec<JStmt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum JStmt {
    /// `target = value;`, or a local declaration when `declare` is set.
    Assign { target: String, value: JExpr, declare: Option<JType> },
    ExprStmt(JExpr),
    IfElse { cond: JExpr, then_branch: Vec<JStmt>, else_branch: Vec<JStmt> },
    While { cond: JExpr, body: Vec<JStmt> },
    DoWhile { body: Vec<JStmt>, cond: JExpr },
    For { init: Vec<JStmt>, cond: JExpr, update: Vec<JStmt>, body: Vec<JStmt> },
    /// Each case body ends in an explicit `Break` (or `Return`).
    Switch { subject: JExpr, cases: Vec<SwitchCase>, default: Option<Vec<JStmt>> },
    MethodCall { method: String, args: Vec<JExpr> },
    Print(Vec<JExpr>),
    Return,
    Break,
}

impl JStmt {
    pub fn assign(target: impl Into<String>, value: JExpr) -> Self {
        JStmt::Assign { target: target.into(), value, declare: None }
    }

    pub fn child_blocks(&self) -> Vec<&[JStmt]> {
        match self {
            JStmt::IfElse { then_branch, else_branch, .. } => vec![then_branch, else_branch],
            JStmt::While { body, .. } | JStmt::DoWhile { body, .. } => vec![body],
            JStmt::For { init, update, body, .. } => vec![init, body, update],
            JStmt::Switch { cases, default, .. } => {
                let mut v: Vec<&[JStmt]> = cases.iter().map(|c| c.body.as_slice()).collect();
                if let Some(d) = default {
                    v.push(d);
                }
                v
            }
            _ => Vec::new(),
        }
    }
}

pub fn visit_jstmts<'a>(stmts: &'a [JStmt], f: &mut impl FnMut(&'a JStmt)) {
    for s in stmts {
        f(s);
        for b in s.child_blocks() {
            visit_jstmts(b, f);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JField {
    pub name: String,
    pub jtype: JType,
    pub initial: JLit,
    /// Declared COBOL picture, kept as metadata.
    pub pic: Picture,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JMethod {
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<JStmt>,
}

/// A stub standing in for a called COBOL program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct External {
    pub method: String,
    pub program: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JavaAst {
    pub class_name: String,
    pub fields: Vec<JField>,
    pub methods: Vec<JMethod>,
    pub externals: Vec<External>,
}

impl JavaAst {
    pub const ENTRY: &'static str = "run";

    pub fn new(class_name: impl Into<String>) -> Self {
        Self {
            class_name: class_name.into(),
            fields: Vec::new(),
            methods: vec![JMethod { name: Self::ENTRY.into(), params: Vec::new(), body: Vec::new() }],
            externals: Vec::new(),
        }
    }

    pub fn method(&self, name: &str) -> Option<&JMethod> {
        self.methods.iter().find(|m| m.name == name)
    }

    pub fn external(&self, method: &str) -> Option<&External> {
        self.externals.iter().find(|e| e.method == method)
    }

    pub fn field(&self, name: &str) -> Option<&JField> {
        self.fields.iter().find(|f| f.name == name)
    }

    pub fn to_tree(&self) -> TreeNode {
        let mut kids: Vec<TreeNode> = self
            .fields
            .iter()
            .map(|f| TreeNode::new("Field", f.name.clone(), 0))
            .collect();
        kids.extend(self.methods.iter().map(|m| TreeNode::new("Method", m.name.clone(), 0).with_children(stmt_trees(&m.body))));
        kids.extend(self.externals.iter().map(|e| TreeNode::new("External", e.method.clone(), 0)));
        TreeNode::new("Class", self.class_name.clone(), 0).with_children(kids)
    }

    pub fn node_count(&self) -> usize {
        self.to_tree().node_count()
    }

    /// Tree node count of one method, the method node included.
    pub fn method_node_count(&self, name: &str) -> Option<usize> {
        self.method(name).map(|m| 1 + stmt_trees(&m.body).iter().map(TreeNode::node_count).sum::<usize>())
    }
}

fn stmt_trees(stmts: &[JStmt]) -> Vec<TreeNode> {
    stmts.iter().map(stmt_tree).collect()
}

fn stmt_tree(s: &JStmt) -> TreeNode {
    match s {
        JStmt::Assign { target, .. } => TreeNode::new("Assign", target.clone(), 0),
        JStmt::ExprStmt(_) => TreeNode::new("ExprStmt", "", 0),
        JStmt::IfElse { then_branch, else_branch, .. } => {
            let mut kids = stmt_trees(then_branch);
            if !else_branch.is_empty() {
                kids.push(TreeNode::new("Else", "", 0).with_children(stmt_trees(else_branch)));
            }
            TreeNode::new("IfElse", "", 0).with_children(kids)
        }
        JStmt::While { body, .. } => TreeNode::new("While", "", 0).with_children(stmt_trees(body)),
        JStmt::DoWhile { body, .. } => TreeNode::new("DoWhile", "", 0).with_children(stmt_trees(body)),
        JStmt::For { body, .. } => TreeNode::new("For", "", 0).with_children(stmt_trees(body)),
        JStmt::Switch { cases, default, .. } => {
            let mut kids: Vec<TreeNode> = cases
                .iter()
                .map(|c| {
                    let label = match &c.label {
                        JLit::Long(v) => v.to_string(),
                        JLit::Str(s) => format!("{s:?}"),
                    };
                    TreeNode::new("Case", label, 0).with_children(stmt_trees(&c.body))
                })
                .collect();
            if let Some(d) = default {
                kids.push(TreeNode::new("Default", "", 0).with_children(stmt_trees(d)));
            }
            TreeNode::new("Switch", "", 0).with_children(kids)
        }
        JStmt::MethodCall { method, .. } => TreeNode::new("MethodCall", method.clone(), 0),
        JStmt::Print(_) => TreeNode::new("Print", "", 0),
        JStmt::Return => TreeNode::new("Return", "", 0),
        JStmt::Break => TreeNode::new("Break", "", 0),
    }
}
