//! Typed AST of the supported COBOL subset.
//!
//! Equality is structural: source lines are carried for rendering and error
//! reporting but never take part in `==`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CobolAst {
    pub program_id: String,
    pub data_items: Vec<DataItem>,
    pub paragraphs: Vec<Paragraph>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Picture {
    Numeric(u32),
    Alnum(u32),
}

impl Picture {
    pub fn width(self) -> u32 {
        match self {
            Picture::Numeric(w) | Picture::Alnum(w) => w,
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, Picture::Numeric(_))
    }
}

impl std::fmt::Display for Picture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Picture::Numeric(w) => write!(f, "9({w})"),
            Picture::Alnum(w) => write!(f, "X({w})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Literal {
    Int(i64),
    Str(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DataItem {
    pub level: u8,
    pub name: String,
    pub picture: Option<Picture>,
    pub initial: Option<Literal>,
    pub children: Vec<DataItem>,
    #[serde(default)]
    pub line: u32,
}

impl PartialEq for DataItem {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
            && self.name == other.name
            && self.picture == other.picture
            && self.initial == other.initial
            && self.children == other.children
    }
}
impl Eq for DataItem {}

impl DataItem {
    pub fn elementary(level: u8, name: impl Into<String>, picture: Picture) -> Self {
        Self { level, name: name.into(), picture: Some(picture), initial: None, children: Vec::new(), line: 0 }
    }

    pub fn with_initial(mut self, value: Literal) -> Self {
        self.initial = Some(value);
        self
    }

    pub fn is_group(&self) -> bool {
        self.picture.is_none()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Paragraph {
    pub name: String,
    pub statements: Vec<Statement>,
    #[serde(default)]
    pub line: u32,
}

impl PartialEq for Paragraph {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.statements == other.statements
    }
}
impl Eq for Paragraph {}

impl Paragraph {
    pub fn new(name: impl Into<String>, statements: Vec<Statement>) -> Self {
        Self { name: name.into(), statements, line: 0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Statement {
    pub kind: StatementKind,
    #[serde(default)]
    pub line: u32,
}

impl PartialEq for Statement {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}
impl Eq for Statement {}

impl From<StatementKind> for Statement {
    fn from(kind: StatementKind) -> Self {
        Statement { kind, line: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operand {
    Name(String),
    Lit(Literal),
}

impl Operand {
    pub fn name(n: impl Into<String>) -> Self {
        Operand::Name(n.into())
    }
    pub fn int(v: i64) -> Self {
        Operand::Lit(Literal::Int(v))
    }
    pub fn str(s: impl Into<String>) -> Self {
        Operand::Lit(Literal::Str(s.into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
        }
    }

    pub fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 1,
            ArithOp::Mul | ArithOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expr {
    Operand(Operand),
    Binary { op: ArithOp, lhs: Box<Expr>, rhs: Box<Expr> },
}

impl Expr {
    pub fn binary(op: ArithOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary { op, lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }
}

impl From<Operand> for Expr {
    fn from(o: Operand) -> Self {
        Expr::Operand(o)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "<>",
            CmpOp::Lt => "<",
            CmpOp::Gt => ">",
            CmpOp::Le => "<=",
            CmpOp::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "=" => CmpOp::Eq,
            "<>" => CmpOp::Ne,
            "<" => CmpOp::Lt,
            ">" => CmpOp::Gt,
            "<=" => CmpOp::Le,
            ">=" => CmpOp::Ge,
            _ => return None,
        })
    }

    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            CmpOp::Eq => ord == Equal,
            CmpOp::Ne => ord != Equal,
            CmpOp::Lt => ord == Less,
            CmpOp::Gt => ord == Greater,
            CmpOp::Le => ord != Greater,
            CmpOp::Ge => ord != Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    Compare { op: CmpOp, lhs: Operand, rhs: Operand },
    And(Box<Condition>, Box<Condition>),
    Or(Box<Condition>, Box<Condition>),
    Not(Box<Condition>),
}

impl Condition {
    pub fn compare(lhs: Operand, op: CmpOp, rhs: Operand) -> Self {
        Condition::Compare { op, lhs, rhs }
    }

    pub fn literal_count(&self) -> usize {
        match self {
            Condition::Compare { lhs, rhs, .. } => {
                [lhs, rhs].iter().filter(|o| matches!(o, Operand::Lit(_))).count()
            }
            Condition::And(a, b) | Condition::Or(a, b) => a.literal_count() + b.literal_count(),
            Condition::Not(c) => c.literal_count(),
        }
    }

    pub fn literals(&self) -> Vec<&Literal> {
        let mut out = Vec::new();
        self.collect_literals(&mut out);
        out
    }

    fn collect_literals<'a>(&'a self, out: &mut Vec<&'a Literal>) {
        match self {
            Condition::Compare { lhs, rhs, .. } => {
                for o in [lhs, rhs] {
                    if let Operand::Lit(l) = o {
                        out.push(l);
                    }
                }
            }
            Condition::And(a, b) | Condition::Or(a, b) => {
                a.collect_literals(out);
                b.collect_literals(out);
            }
            Condition::Not(c) => c.collect_literals(out),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArithVerb {
    Add,
    Subtract,
    Multiply,
    Divide,
}

impl ArithVerb {
    pub fn keyword(self) -> &'static str {
        match self {
            ArithVerb::Add => "ADD",
            ArithVerb::Subtract => "SUBTRACT",
            ArithVerb::Multiply => "MULTIPLY",
            ArithVerb::Divide => "DIVIDE",
        }
    }

    /// Preposition between the two operands (`ADD a TO b`, `DIVIDE a INTO b`).
    pub fn preposition(self) -> &'static str {
        match self {
            ArithVerb::Add => "TO",
            ArithVerb::Subtract => "FROM",
            ArithVerb::Multiply => "BY",
            ArithVerb::Divide => "INTO",
        }
    }

    /// The arithmetic the verb performs as `target OP operand` (or
    /// `operand OP target` for MULTIPLY, which commutes anyway).
    pub fn op(self) -> ArithOp {
        match self {
            ArithVerb::Add => ArithOp::Add,
            ArithVerb::Subtract => ArithOp::Sub,
            ArithVerb::Multiply => ArithOp::Mul,
            ArithVerb::Divide => ArithOp::Div,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PerformBody {
    Paragraph(String),
    Inline(Vec<Statement>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WhenLabel {
    Lit(Literal),
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhenArm {
    pub label: WhenLabel,
    pub body: Vec<Statement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StatementKind {
    Move { src: Operand, dst: String },
    Compute { dst: String, expr: Expr },
    /// `ADD operand TO target [GIVING dst]` and friends. Without GIVING the
    /// target must be a name and receives the result.
    Arith { verb: ArithVerb, operand: Operand, target: Operand, giving: Option<String> },
    If { cond: Condition, then_branch: Vec<Statement>, else_branch: Vec<Statement> },
    Evaluate { subject: String, arms: Vec<WhenArm> },
    PerformPara { target: String },
    PerformTimes { body: PerformBody, count: Operand },
    PerformUntil { body: Vec<Statement>, cond: Condition },
    PerformVarying { body: Vec<Statement>, var: String, from: Operand, by: Operand, until: Condition },
    Display { operands: Vec<Operand> },
    Accept { dst: String },
    Call { program: String, using: Vec<String> },
    GoTo { target: String },
    StopRun,
}

impl StatementKind {
    /// Directly nested statement lists, in source order.
    pub fn child_blocks(&self) -> Vec<&[Statement]> {
        match self {
            StatementKind::If { then_branch, else_branch, .. } => vec![then_branch, else_branch],
            StatementKind::Evaluate { arms, .. } => arms.iter().map(|a| a.body.as_slice()).collect(),
            StatementKind::PerformTimes { body: PerformBody::Inline(b), .. }
            | StatementKind::PerformUntil { body: b, .. }
            | StatementKind::PerformVarying { body: b, .. } => vec![b],
            _ => Vec::new(),
        }
    }

    pub fn is_loop(&self) -> bool {
        matches!(
            self,
            StatementKind::PerformTimes { .. }
                | StatementKind::PerformUntil { .. }
                | StatementKind::PerformVarying { .. }
        )
    }

    pub fn is_branch(&self) -> bool {
        matches!(self, StatementKind::If { .. } | StatementKind::Evaluate { .. })
    }

    /// Literals appearing in the statement's own operands, conditions and
    /// arm labels (nested statements excluded).
    pub fn literals(&self) -> Vec<&Literal> {
        fn op(o: &Operand) -> Option<&Literal> {
            match o {
                Operand::Lit(l) => Some(l),
                Operand::Name(_) => None,
            }
        }
        fn expr<'a>(e: &'a Expr, out: &mut Vec<&'a Literal>) {
            match e {
                Expr::Operand(o) => out.extend(op(o)),
                Expr::Binary { lhs, rhs, .. } => {
                    expr(lhs, out);
                    expr(rhs, out);
                }
            }
        }
        let mut out = Vec::new();
        match self {
            StatementKind::Move { src, .. } => out.extend(op(src)),
            StatementKind::Compute { expr: e, .. } => expr(e, &mut out),
            StatementKind::Arith { operand, target, .. } => {
                out.extend(op(operand));
                out.extend(op(target));
            }
            StatementKind::If { cond, .. } | StatementKind::PerformUntil { cond, .. } => {
                out.extend(cond.literals())
            }
            StatementKind::Evaluate { arms, .. } => out.extend(arms.iter().filter_map(|a| match &a.label {
                WhenLabel::Lit(l) => Some(l),
                WhenLabel::Other => None,
            })),
            StatementKind::PerformTimes { count, .. } => out.extend(op(count)),
            StatementKind::PerformVarying { from, by, until, .. } => {
                out.extend(op(from));
                out.extend(op(by));
                out.extend(until.literals());
            }
            StatementKind::Display { operands } => out.extend(operands.iter().filter_map(op)),
            StatementKind::Accept { .. }
            | StatementKind::Call { .. }
            | StatementKind::PerformPara { .. }
            | StatementKind::GoTo { .. }
            | StatementKind::StopRun => {}
        }
        out
    }
}

impl StatementKind {
    /// Data names the statement reads or writes, in source order (nested
    /// statements excluded).
    pub fn data_refs(&self) -> Vec<&str> {
        fn op<'a>(o: &'a Operand, out: &mut Vec<&'a str>) {
            if let Operand::Name(n) = o {
                out.push(n);
            }
        }
        fn expr<'a>(e: &'a Expr, out: &mut Vec<&'a str>) {
            match e {
                Expr::Operand(o) => op(o, out),
                Expr::Binary { lhs, rhs, .. } => {
                    expr(lhs, out);
                    expr(rhs, out);
                }
            }
        }
        fn cond<'a>(c: &'a Condition, out: &mut Vec<&'a str>) {
            match c {
                Condition::Compare { lhs, rhs, .. } => {
                    op(lhs, out);
                    op(rhs, out);
                }
                Condition::And(a, b) | Condition::Or(a, b) => {
                    cond(a, out);
                    cond(b, out);
                }
                Condition::Not(x) => cond(x, out),
            }
        }
        let mut out = Vec::new();
        match self {
            StatementKind::Move { src, dst } => {
                op(src, &mut out);
                out.push(dst);
            }
            StatementKind::Compute { dst, expr: e } => {
                expr(e, &mut out);
                out.push(dst);
            }
            StatementKind::Arith { operand, target, giving, .. } => {
                op(operand, &mut out);
                op(target, &mut out);
                out.extend(giving.as_deref());
            }
            StatementKind::If { cond: c, .. } | StatementKind::PerformUntil { cond: c, .. } => cond(c, &mut out),
            StatementKind::Evaluate { subject, .. } => out.push(subject),
            StatementKind::PerformTimes { count, .. } => op(count, &mut out),
            StatementKind::PerformVarying { var, from, by, until, .. } => {
                out.push(var);
                op(from, &mut out);
                op(by, &mut out);
                cond(until, &mut out);
            }
            StatementKind::Display { operands } => operands.iter().for_each(|o| op(o, &mut out)),
            StatementKind::Accept { dst } => out.push(dst),
            StatementKind::Call { using, .. } => out.extend(using.iter().map(String::as_str)),
            StatementKind::PerformPara { .. } | StatementKind::GoTo { .. } | StatementKind::StopRun => {}
        }
        out
    }
}

/// Depth-first visit of every statement in a block, pre-order.
pub fn visit_statements<'a>(stmts: &'a [Statement], f: &mut impl FnMut(&'a Statement)) {
    for s in stmts {
        f(s);
        for block in s.kind.child_blocks() {
            visit_statements(block, f);
        }
    }
}

impl CobolAst {
    pub fn new(program_id: impl Into<String>) -> Self {
        Self { program_id: program_id.into(), data_items: Vec::new(), paragraphs: Vec::new() }
    }

    pub fn paragraph_index(&self, name: &str) -> Option<usize> {
        self.paragraphs.iter().position(|p| p.name == name)
    }

    pub fn for_each_statement<'a>(&'a self, mut f: impl FnMut(&'a Statement)) {
        for p in &self.paragraphs {
            visit_statements(&p.statements, &mut f);
        }
    }

    pub fn statement_count(&self) -> usize {
        let mut n = 0;
        self.for_each_statement(|_| n += 1);
        n
    }

    /// All data items, groups included, in declaration order.
    pub fn all_data_items(&self) -> Vec<&DataItem> {
        fn walk<'a>(items: &'a [DataItem], out: &mut Vec<&'a DataItem>) {
            for i in items {
                out.push(i);
                walk(&i.children, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.data_items, &mut out);
        out
    }

    /// Elementary items with their flattened path (group names first).
    pub fn elementary_items(&self) -> Vec<(Vec<&str>, &DataItem)> {
        fn walk<'a>(items: &'a [DataItem], path: &mut Vec<&'a str>, out: &mut Vec<(Vec<&'a str>, &'a DataItem)>) {
            for i in items {
                path.push(&i.name);
                if i.is_group() {
                    walk(&i.children, path, out);
                } else {
                    out.push((path.clone(), i));
                }
                path.pop();
            }
        }
        let mut out = Vec::new();
        walk(&self.data_items, &mut Vec::new(), &mut out);
        out
    }

    /// Names used in the procedure division but never declared, in order of
    /// first use. They behave as numeric items initialized to zero.
    pub fn implicit_items(&self) -> Vec<&str> {
        let declared: std::collections::HashSet<&str> =
            self.all_data_items().into_iter().map(|d| d.name.as_str()).collect();
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        self.for_each_statement(|s| {
            for n in s.kind.data_refs() {
                if !declared.contains(n) && seen.insert(n) {
                    out.push(n);
                }
            }
        });
        out
    }

    pub fn uses_goto(&self) -> bool {
        let mut found = false;
        self.for_each_statement(|s| found |= matches!(s.kind, StatementKind::GoTo { .. }));
        found
    }
}
