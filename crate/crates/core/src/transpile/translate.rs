//! Rule engine: COBOL statements to Java statements, steered per statement by
//! an action label.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::actions::{default_action, default_actions, if_chain, shape_allows, Action, ActionLabel};
use super::java::*;
use super::names::{class_name, external_method, java_ident, Namespace};
use crate::cobol::*;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("action at node {stmt_ref}: {reason}")]
pub struct TranspileError {
    pub stmt_ref: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub java: JavaAst,
    /// Actions that could not be applied and were replaced by the default.
    pub fallbacks: Vec<TranspileError>,
    /// The source uses GO TO, which has no structured equivalent.
    pub unstructured: bool,
}

/// Strict application: any inapplicable action is an error.
pub fn apply_actions(ast: &CobolAst, actions: &[Action]) -> Result<JavaAst, TranspileError> {
    let t = translate(ast, actions);
    match t.fallbacks.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(t.java),
    }
}

/// Lenient application: inapplicable actions fall back to the default rule.
pub fn translate(ast: &CobolAst, actions: &[Action]) -> Translation {
    Translator::new(ast, actions).run()
}

pub fn translate_rules(ast: &CobolAst) -> JavaAst {
    translate(ast, &default_actions(ast)).java
}

/// Width recorded for undeclared names.
pub const IMPLICIT_DIGITS: u32 = 18;

#[derive(Debug, Clone)]
struct FieldInfo {
    name: String,
    jtype: JType,
    width: u32,
}

struct Translator<'a> {
    ast: &'a CobolAst,
    index: AstIndex<'a>,
    actions: HashMap<usize, ActionLabel>,
    fallbacks: Vec<TranspileError>,
    fields: HashMap<&'a str, FieldInfo>,
    paragraphs: HashMap<&'a str, String>,
    externals: BTreeMap<String, String>,
    methods: Namespace,
    extracted: Vec<JMethod>,
    part_counts: HashMap<String, usize>,
    loop_counter: usize,
}

impl<'a> Translator<'a> {
    fn new(ast: &'a CobolAst, actions: &[Action]) -> Self {
        let index = AstIndex::build(ast);
        let mut reserved: Vec<&str> = Builtin::ALL.iter().map(|b| b.name()).collect();
        reserved.push(JavaAst::ENTRY);
        let mut t = Translator {
            ast,
            index,
            actions: HashMap::new(),
            fallbacks: Vec::new(),
            fields: HashMap::new(),
            paragraphs: HashMap::new(),
            externals: BTreeMap::new(),
            methods: Namespace::with_reserved(&reserved),
            extracted: Vec::new(),
            part_counts: HashMap::new(),
            loop_counter: 0,
        };
        for a in actions {
            if t.index.statement_at(a.stmt_ref).is_none() {
                t.fallbacks.push(TranspileError {
                    stmt_ref: a.stmt_ref,
                    reason: format!("no statement at node {}", a.stmt_ref),
                });
            } else {
                t.actions.insert(a.stmt_ref, a.action);
            }
        }
        t
    }

    fn run(mut self) -> Translation {
        let mut java = JavaAst::new(class_name(&self.ast.program_id));
        let mut field_ns = Namespace::default();
        for (path, item) in self.ast.elementary_items() {
            let pic = item.picture.expect("elementary item");
            let joined: Vec<String> = path.iter().map(|p| java_ident(p)).collect();
            let name = field_ns.claim(&joined.join("_"));
            let (jtype, initial) = match (pic, &item.initial) {
                (Picture::Numeric(_), Some(Literal::Int(v))) => (JType::Long, JLit::Long(*v)),
                (Picture::Numeric(_), _) => (JType::Long, JLit::Long(0)),
                (Picture::Alnum(w), Some(Literal::Str(s))) => (JType::Str, JLit::Str(fit(s, w))),
                (Picture::Alnum(w), _) => (JType::Str, JLit::Str(fit("", w))),
            };
            java.fields.push(JField { name: name.clone(), jtype, initial, pic });
            self.fields.insert(&item.name, FieldInfo { name, jtype, width: pic.width() });
        }
        for n in self.ast.implicit_items() {
            let name = field_ns.claim(&java_ident(n));
            let pic = Picture::Numeric(IMPLICIT_DIGITS);
            java.fields.push(JField { name: name.clone(), jtype: JType::Long, initial: JLit::Long(0), pic });
            self.fields.insert(n, FieldInfo { name, jtype: JType::Long, width: IMPLICIT_DIGITS });
        }
        for p in &self.ast.paragraphs {
            let m = self.methods.claim(&java_ident(&p.name));
            self.paragraphs.insert(&p.name, m);
        }
        let run_body: Vec<JStmt> = self
            .ast
            .paragraphs
            .iter()
            .map(|p| JStmt::MethodCall { method: self.paragraphs[p.name.as_str()].clone(), args: Vec::new() })
            .collect();
        java.methods[0].body = run_body;
        for p in &self.ast.paragraphs {
            let name = self.paragraphs[p.name.as_str()].clone();
            let body = self.block(&p.statements, &name);
            java.methods.push(JMethod { name, params: Vec::new(), body });
        }
        java.methods.append(&mut self.extracted);
        java.externals = self
            .externals
            .iter()
            .map(|(program, method)| External { method: method.clone(), program: program.clone() })
            .collect();
        Translation { java, fallbacks: self.fallbacks, unstructured: self.ast.uses_goto() }
    }

    fn node(&self, s: &Statement) -> usize {
        self.index.index_of(s).expect("statement of the indexed AST")
    }

    fn fallback(&mut self, stmt_ref: usize, reason: impl Into<String>) {
        self.fallbacks.push(TranspileError { stmt_ref, reason: reason.into() });
    }

    /// The label to use for `s`, with shape checking and fallback.
    fn label(&mut self, s: &Statement) -> ActionLabel {
        let r = self.node(s);
        let default = default_action(&s.kind);
        let Some(&label) = self.actions.get(&r) else { return default };
        if !shape_allows(label, &s.kind) {
            self.fallback(r, format!("{} does not apply to {}", label.name(), NodeKind::of(&s.kind).name()));
            return default;
        }
        if let ActionLabel::ExtractMethodAt(k) = label {
            if k != r {
                self.fallback(r, format!("split offset {k} does not name this statement"));
                return default;
            }
        }
        label
    }

    fn block(&mut self, stmts: &'a [Statement], method: &str) -> Vec<JStmt> {
        let mut out = Vec::new();
        for (i, s) in stmts.iter().enumerate() {
            let label = self.label(s);
            if let ActionLabel::ExtractMethodAt(_) = label {
                let rest = &stmts[i..];
                let mut has_goto = false;
                visit_statements(rest, &mut |x| has_goto |= matches!(x.kind, StatementKind::GoTo { .. }));
                if has_goto {
                    let r = self.node(s);
                    self.fallback(r, "cannot extract a range containing GO TO");
                } else {
                    let n = self.part_counts.entry(method.to_string()).or_insert(0);
                    *n += 1;
                    let name = self.methods.claim(&format!("{method}_part{n}"));
                    let mut body = self.statement(s, default_action(&s.kind), &name);
                    body.extend(self.block(&stmts[i + 1..], &name));
                    self.extracted.push(JMethod { name: name.clone(), params: Vec::new(), body });
                    out.push(JStmt::MethodCall { method: name, args: Vec::new() });
                    return out;
                }
                out.extend(self.statement(s, default_action(&s.kind), method));
                continue;
            }
            out.extend(self.statement(s, label, method));
        }
        out
    }

    fn field(&self, name: &str) -> Option<&FieldInfo> {
        self.fields.get(name)
    }

    fn var_name(&self, name: &str) -> String {
        self.field(name).map_or_else(|| java_ident(name), |f| f.name.clone())
    }

    /// Expression and static type; undeclared names are treated as numeric
    /// and fail at run time on both sides.
    fn operand(&self, o: &Operand) -> (JExpr, JType) {
        match o {
            Operand::Name(n) => match self.field(n) {
                Some(f) => (JExpr::var(&f.name), f.jtype),
                None => (JExpr::var(java_ident(n)), JType::Long),
            },
            Operand::Lit(Literal::Int(v)) => (JExpr::long(*v), JType::Long),
            Operand::Lit(Literal::Str(s)) => (JExpr::str(s.clone()), JType::Str),
        }
    }

    fn expr(&self, e: &Expr) -> JExpr {
        match e {
            Expr::Operand(o) => self.operand(o).0,
            Expr::Binary { op, lhs, rhs } => {
                let op = match op {
                    ArithOp::Add => JBinOp::Add,
                    ArithOp::Sub => JBinOp::Sub,
                    ArithOp::Mul => JBinOp::Mul,
                    ArithOp::Div => JBinOp::Div,
                };
                JExpr::bin(op, self.expr(lhs), self.expr(rhs))
            }
        }
    }

    /// Stores `value` (of static type `vtype`) into COBOL item `dst`.
    fn store(&self, dst: &str, value: JExpr, vtype: JType) -> JStmt {
        let target = self.var_name(dst);
        let value = match self.field(dst) {
            Some(FieldInfo { jtype: JType::Str, width, .. }) => {
                let s = match vtype {
                    JType::Str => value,
                    JType::Long => JExpr::call(Builtin::Str, vec![value]),
                };
                JExpr::call(Builtin::Fit, vec![s, JExpr::long(*width as i64)])
            }
            _ => value,
        };
        JStmt::assign(target, value)
    }

    fn compare(&self, op: CmpOp, lhs: &Operand, rhs: &Operand) -> JExpr {
        let (a, ta) = self.operand(lhs);
        let (b, tb) = self.operand(rhs);
        let op = cmp_op(op);
        if ta == JType::Str && tb == JType::Str {
            JExpr::cmp(op, JExpr::call(Builtin::Compare, vec![a, b]), JExpr::long(0))
        } else {
            JExpr::cmp(op, a, b)
        }
    }

    fn condition(&self, c: &Condition) -> JExpr {
        match c {
            Condition::Compare { op, lhs, rhs } => self.compare(*op, lhs, rhs),
            Condition::And(a, b) => JExpr::And(Box::new(self.condition(a)), Box::new(self.condition(b))),
            Condition::Or(a, b) => JExpr::Or(Box::new(self.condition(a)), Box::new(self.condition(b))),
            Condition::Not(x) => JExpr::not(self.condition(x)),
        }
    }

    fn paragraph_call(&self, target: &str) -> JStmt {
        let method = self.paragraphs.get(target).cloned().unwrap_or_else(|| java_ident(target));
        JStmt::MethodCall { method, args: Vec::new() }
    }

    fn statement(&mut self, s: &'a Statement, label: ActionLabel, method: &str) -> Vec<JStmt> {
        match &s.kind {
            StatementKind::Move { src, dst } => {
                let (v, t) = self.operand(src);
                vec![self.store(dst, v, t)]
            }
            StatementKind::Compute { dst, expr } => vec![self.store(dst, self.expr(expr), JType::Long)],
            StatementKind::Arith { verb, operand, target, giving } => {
                let a = self.operand(operand).0;
                let b = self.operand(target).0;
                let value = match verb {
                    ArithVerb::Add => JExpr::bin(JBinOp::Add, a, b),
                    ArithVerb::Subtract => JExpr::bin(JBinOp::Sub, b, a),
                    ArithVerb::Multiply => JExpr::bin(JBinOp::Mul, a, b),
                    ArithVerb::Divide => JExpr::bin(JBinOp::Div, b, a),
                };
                let dst = match (giving, target) {
                    (Some(g), _) => g.as_str(),
                    (None, Operand::Name(n)) => n.as_str(),
                    (None, Operand::Lit(_)) => unreachable!("parser requires GIVING for literal targets"),
                };
                vec![self.store(dst, value, JType::Long)]
            }
            StatementKind::If { cond, then_branch, else_branch } => {
                if label == ActionLabel::IfChainToSwitch {
                    match self.if_switch(s, method) {
                        Ok(sw) => return vec![sw],
                        Err(reason) => {
                            let r = self.node(s);
                            self.fallback(r, reason);
                        }
                    }
                }
                vec![JStmt::IfElse {
                    cond: self.condition(cond),
                    then_branch: self.block(then_branch, method),
                    else_branch: self.block(else_branch, method),
                }]
            }
            StatementKind::Evaluate { subject, arms } => vec![self.evaluate(subject, arms, method)],
            StatementKind::PerformPara { target } => vec![self.paragraph_call(target)],
            StatementKind::PerformTimes { body, count } => {
                self.loop_counter += 1;
                let (i, n) = (format!("_i{}", self.loop_counter), format!("_n{}", self.loop_counter));
                let body = match body {
                    PerformBody::Paragraph(t) => vec![self.paragraph_call(t)],
                    PerformBody::Inline(b) => self.block(b, method),
                };
                vec![JStmt::For {
                    init: vec![
                        JStmt::Assign { target: i.clone(), value: JExpr::long(0), declare: Some(JType::Long) },
                        JStmt::Assign { target: n.clone(), value: self.operand(count).0, declare: Some(JType::Long) },
                    ],
                    cond: JExpr::cmp(JCmpOp::Lt, JExpr::var(&i), JExpr::var(&n)),
                    update: vec![JStmt::assign(&i, JExpr::bin(JBinOp::Add, JExpr::var(&i), JExpr::long(1)))],
                    body,
                }]
            }
            StatementKind::PerformUntil { body, cond } => {
                let test = JExpr::not(self.condition(cond));
                let body = self.block(body, method);
                match label {
                    ActionLabel::LoopToFor => vec![JStmt::For { init: vec![], cond: test, update: vec![], body }],
                    ActionLabel::LoopToDoWhile => vec![guarded_do_while(test, body)],
                    _ => vec![JStmt::While { cond: test, body }],
                }
            }
            StatementKind::PerformVarying { body, var, from, by, until } => {
                let (from, from_type) = self.operand(from);
                let init = self.store(var, from, from_type);
                let (current, _) = self.operand(&Operand::Name(var.clone()));
                let step = self.store(var, JExpr::bin(JBinOp::Add, current, self.operand(by).0), JType::Long);
                let test = JExpr::not(self.condition(until));
                let mut body = self.block(body, method);
                match label {
                    ActionLabel::LoopToWhile => {
                        body.push(step);
                        vec![init, JStmt::While { cond: test, body }]
                    }
                    ActionLabel::LoopToDoWhile => {
                        body.push(step);
                        vec![init, guarded_do_while(test, body)]
                    }
                    _ => vec![JStmt::For { init: vec![init], cond: test, update: vec![step], body }],
                }
            }
            StatementKind::Display { operands } => {
                vec![JStmt::Print(operands.iter().map(|o| self.operand(o).0).collect())]
            }
            StatementKind::Accept { dst } => {
                let value = match self.field(dst) {
                    Some(FieldInfo { jtype: JType::Str, .. }) => JExpr::call(Builtin::ReadString, vec![]),
                    _ => JExpr::call(Builtin::ReadLong, vec![]),
                };
                let vtype = self.field(dst).map_or(JType::Long, |f| f.jtype);
                vec![self.store(dst, value, vtype)]
            }
            StatementKind::Call { program, using } => {
                let method = match self.externals.get(program) {
                    Some(m) => m.clone(),
                    None => {
                        let m = self.methods.claim(&external_method(program));
                        self.externals.insert(program.clone(), m.clone());
                        m
                    }
                };
                let args = using.iter().map(|u| JExpr::var(self.var_name(u))).collect();
                vec![JStmt::MethodCall { method, args }]
            }
            StatementKind::GoTo { target } => vec![self.paragraph_call(target), JStmt::Return],
            StatementKind::StopRun => vec![JStmt::ExprStmt(JExpr::call(Builtin::Exit, vec![JExpr::long(0)]))],
        }
    }

    /// The switch subject and normalized label for literal `l`, if the
    /// literal's type matches a declared subject.
    fn switch_label(&self, subject: &str, l: &Literal) -> Option<JLit> {
        match (self.field(subject)?.jtype, l) {
            (JType::Long, Literal::Int(v)) => Some(JLit::Long(*v)),
            (JType::Str, Literal::Str(s)) => Some(JLit::Str(s.trim_end_matches(' ').to_string())),
            _ => None,
        }
    }

    fn switch_subject(&self, subject: &str) -> JExpr {
        let f = self.field(subject).expect("declared subject");
        match f.jtype {
            JType::Long => JExpr::var(&f.name),
            JType::Str => JExpr::call(Builtin::Rtrim, vec![JExpr::var(&f.name)]),
        }
    }

    fn case_body(&mut self, stmts: &'a [Statement], method: &str) -> Vec<JStmt> {
        let mut body = self.block(stmts, method);
        if body.last() != Some(&JStmt::Return) {
            body.push(JStmt::Break);
        }
        body
    }

    fn if_switch(&mut self, s: &'a Statement, method: &str) -> Result<JStmt, String> {
        let chain = if_chain(&s.kind).ok_or("not an IF chain")?;
        let mut labels = Vec::new();
        for (lit, _) in &chain.members {
            let label = self.switch_label(chain.subject, lit).ok_or("chain literal does not match the subject type")?;
            if labels.contains(&label) {
                return Err("chain literals are not distinct".into());
            }
            labels.push(label);
        }
        for inner in &chain.nested {
            let r = self.node(inner);
            match self.actions.get(&r) {
                None | Some(ActionLabel::IfToIf | ActionLabel::IfChainToSwitch | ActionLabel::PassThrough) => {}
                Some(other) => {
                    let reason = format!("{} absorbed into the enclosing switch", other.name());
                    self.fallback(r, reason);
                }
            }
        }
        let mut cases = Vec::new();
        for (label, (_, body)) in labels.into_iter().zip(&chain.members) {
            cases.push(SwitchCase { label, body: self.case_body(body, method) });
        }
        let default = if chain.otherwise.is_empty() { None } else { Some(self.block(chain.otherwise, method)) };
        Ok(JStmt::Switch { subject: self.switch_subject(chain.subject), cases, default })
    }

    fn evaluate(&mut self, subject: &str, arms: &'a [WhenArm], method: &str) -> JStmt {
        let labels: Option<Vec<Option<JLit>>> = arms
            .iter()
            .map(|a| match &a.label {
                WhenLabel::Lit(l) => self.switch_label(subject, l).map(Some),
                WhenLabel::Other => Some(None),
            })
            .collect();
        if let (Some(labels), Some(_)) = (labels, self.field(subject)) {
            let mut seen = HashSet::new();
            let mut cases = Vec::new();
            let mut default = None;
            for (label, arm) in labels.into_iter().zip(arms) {
                match label {
                    Some(l) if seen.insert(l.clone()) => {
                        cases.push(SwitchCase { label: l, body: self.case_body(&arm.body, method) })
                    }
                    Some(_) => {}
                    None => default = Some(self.block(&arm.body, method)),
                }
            }
            return JStmt::Switch { subject: self.switch_subject(subject), cases, default };
        }
        // literal types disagree with the subject: compare arm by arm
        let subj = Operand::Name(subject.to_string());
        let mut otherwise = Vec::new();
        let mut tests = Vec::new();
        for arm in arms {
            match &arm.label {
                WhenLabel::Lit(l) => tests.push((self.compare(CmpOp::Eq, &subj, &Operand::Lit(l.clone())), &arm.body)),
                WhenLabel::Other => otherwise = self.block(&arm.body, method),
            }
        }
        if tests.is_empty() {
            // only reachable for a group subject, which cannot be read
            return JStmt::ExprStmt(JExpr::call(Builtin::Fail, vec![JExpr::str(format!("{subject} is a group item"))]));
        }
        let mut tail = otherwise;
        let translated: Vec<(JExpr, Vec<JStmt>)> =
            tests.into_iter().map(|(c, body)| (c, self.block(body, method))).collect();
        for (cond, then_branch) in translated.into_iter().rev() {
            tail = vec![JStmt::IfElse { cond, then_branch, else_branch: tail }];
        }
        tail.pop().expect("at least one literal arm")
    }
}

/// A test-first loop expressed with do-while: `if (c) { do { ... } while (c); }`.
fn guarded_do_while(test: JExpr, body: Vec<JStmt>) -> JStmt {
    JStmt::IfElse { cond: test.clone(), then_branch: vec![JStmt::DoWhile { body, cond: test }], else_branch: vec![] }
}

fn cmp_op(op: CmpOp) -> JCmpOp {
    match op {
        CmpOp::Eq => JCmpOp::Eq,
        CmpOp::Ne => JCmpOp::Ne,
        CmpOp::Lt => JCmpOp::Lt,
        CmpOp::Gt => JCmpOp::Gt,
        CmpOp::Le => JCmpOp::Le,
        CmpOp::Ge => JCmpOp::Ge,
    }
}

/// Truncates or right-pads `s` with spaces to `width` characters.
pub fn fit(s: &str, width: u32) -> String {
    let w = width as usize;
    let mut out: String = s.chars().take(w).collect();
    let n = out.chars().count();
    out.extend(std::iter::repeat(' ').take(w - n));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transpile::emit::emit_java;

    fn ast(data: &str, body: &str) -> CobolAst {
        let data = if data.is_empty() { String::new() } else { format!("DATA DIVISION. WORKING-STORAGE SECTION. {data}") };
        parse_str(&format!("IDENTIFICATION DIVISION. PROGRAM-ID. T. {data} PROCEDURE DIVISION. MAIN. {body}")).unwrap()
    }

    fn main_body(j: &JavaAst) -> &[JStmt] {
        &j.method("main").unwrap().body
    }

    #[test]
    fn move_is_plain_assignment() {
        let j = translate_rules(&ast("01 A PIC 9(3). 01 B PIC 9(3).", "MOVE A TO B."));
        assert_eq!(main_body(&j), [JStmt::assign("b", JExpr::var("a"))]);
        assert!(emit_java(&j).contains("b = a;"));
    }

    #[test]
    fn alnum_store_is_fitted() {
        let j = translate_rules(&ast("01 N PIC X(3).", "MOVE 12 TO N."));
        let fitted = JExpr::call(Builtin::Fit, vec![JExpr::call(Builtin::Str, vec![JExpr::long(12)]), JExpr::long(3)]);
        assert_eq!(main_body(&j), [JStmt::assign("n", fitted)]);
        assert_eq!(j.field("n").unwrap().initial, JLit::Str("   ".into()));
    }

    #[test]
    fn undeclared_names_become_fields() {
        let j = translate_rules(&ast("", "MOVE 1 TO A. STOP RUN."));
        assert_eq!(j.fields.len(), 1);
        assert_eq!(j.fields[0].jtype, JType::Long);
        assert_eq!(j.methods.iter().map(|m| m.name.as_str()).collect::<Vec<_>>(), ["run", "main"]);
    }

    #[test]
    fn if_chain_to_switch() {
        let a = ast(
            "01 X PIC 9.",
            "IF X = 1 DISPLAY 'A' ELSE IF X = 2 DISPLAY 'B' ELSE DISPLAY 'C' END-IF END-IF.",
        );
        let r = AstIndex::build(&a).statement_nodes().next().unwrap().index;
        let j = apply_actions(&a, &[Action::new(r, ActionLabel::IfChainToSwitch)]).unwrap();
        let [JStmt::Switch { cases, default: Some(d), .. }] = main_body(&j) else { panic!("{:?}", main_body(&j)) };
        let labels: Vec<_> = cases.iter().map(|c| c.label.clone()).collect();
        assert_eq!(labels, [JLit::Long(1), JLit::Long(2)]);
        assert_eq!(d, &[JStmt::Print(vec![JExpr::str("C")])]);
        assert!(cases.iter().all(|c| c.body.last() == Some(&JStmt::Break)));
    }

    #[test]
    fn if_chain_with_mismatched_literal_falls_back() {
        let a = ast("01 X PIC 9.", "IF X = 1 DISPLAY 'A' ELSE IF X = 'Q' DISPLAY 'B' END-IF END-IF.");
        let r = AstIndex::build(&a).statement_nodes().next().unwrap().index;
        let t = translate(&a, &[Action::new(r, ActionLabel::IfChainToSwitch)]);
        assert_eq!(t.fallbacks.len(), 1);
        assert!(matches!(main_body(&t.java)[0], JStmt::IfElse { .. }));
    }

    #[test]
    fn loop_label_on_if_is_rejected() {
        let a = ast("01 X PIC 9.", "IF X = 1 DISPLAY 'A' END-IF.");
        let r = AstIndex::build(&a).statement_nodes().next().unwrap().index;
        let err = apply_actions(&a, &[Action::new(r, ActionLabel::LoopToFor)]).unwrap_err();
        assert_eq!(err.stmt_ref, r);
        let t = translate(&a, &[Action::new(r, ActionLabel::LoopToFor)]);
        assert_eq!(t.java, translate_rules(&a));
        assert_eq!(t.fallbacks, vec![err]);
    }

    #[test]
    fn extract_method_splits_long_paragraph() {
        let body: String = (0..48).map(|i| format!("DISPLAY {i}. ")).collect();
        let a = ast("", &body);
        assert_eq!(AstIndex::build(&a).len(), 50);
        let t = translate(&a, &[Action::new(25, ActionLabel::ExtractMethodAt(25))]);
        assert!(t.fallbacks.is_empty());
        let names: Vec<_> = t.java.methods.iter().map(|m| m.name.as_str()).collect();
        assert_eq!(names, ["run", "main", "main_part1"]);
        let main = main_body(&t.java);
        assert_eq!(main.len(), 24);
        assert_eq!(main.last(), Some(&JStmt::MethodCall { method: "main_part1".into(), args: vec![] }));
        assert_eq!(t.java.method("main_part1").unwrap().body.len(), 25);
        for m in ["main", "main_part1"] {
            assert!(t.java.method_node_count(m).unwrap() < 50);
        }
    }

    #[test]
    fn extract_refuses_goto_ranges() {
        let a = ast("", "DISPLAY 1. GO TO MAIN.");
        let t = translate(&a, &[Action::new(2, ActionLabel::ExtractMethodAt(2))]);
        assert_eq!(t.fallbacks.len(), 1);
        assert!(t.unstructured);
        let off = translate(&a, &[Action::new(2, ActionLabel::ExtractMethodAt(3))]);
        assert_eq!(off.fallbacks.len(), 1);
    }

    #[test]
    fn loops_and_evaluate() {
        let a = ast(
            "01 I PIC 9(2). 01 S PIC X(4).",
            "PERFORM 3 TIMES DISPLAY I END-PERFORM.
             PERFORM VARYING I FROM 1 BY 1 UNTIL I > 3 DISPLAY I END-PERFORM.
             EVALUATE S WHEN 'AB' DISPLAY 1 WHEN 'AB' DISPLAY 2 WHEN OTHER DISPLAY 3 END-EVALUATE.",
        );
        let j = translate_rules(&a);
        let body = main_body(&j);
        assert!(matches!(&body[0], JStmt::For { init, .. } if init.len() == 2));
        assert!(matches!(&body[1], JStmt::For { init, update, .. } if init.len() == 1 && update.len() == 1));
        let JStmt::Switch { subject, cases, default } = &body[2] else { panic!() };
        assert_eq!(subject, &JExpr::call(Builtin::Rtrim, vec![JExpr::var("s")]));
        assert_eq!(cases.len(), 1);
        assert!(default.is_some());
    }

    #[test]
    fn deterministic_emission() {
        let a = ast("01 A PIC 9.", "CALL 'LIB' USING A. PERFORM UNTIL A > 2 ADD 1 TO A END-PERFORM.");
        assert_eq!(emit_java(&translate_rules(&a)), emit_java(&translate_rules(&a)));
        assert_eq!(translate_rules(&a).externals, vec![External { method: "prog_LIB".into(), program: "LIB".into() }]);
    }
}
