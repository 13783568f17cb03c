//! Interpreter for the Java AST with the value rules of the COBOL side:
//! checked 64-bit arithmetic, typed fields, no implicit conversions.

use std::collections::{HashMap, VecDeque};

use super::cobol_interp::{checked, fail, Stop};
use super::trace::*;
use crate::cobol::ArithOp;
use crate::transpile::java::*;
use crate::transpile::translate::fit;

type R<T> = Result<T, Stop>;

pub fn interpret_java(j: &JavaAst, inputs: &[Value]) -> Trace {
    let mut m = Jvm::new(j, inputs);
    let outcome = match m.call(JavaAst::ENTRY, Vec::new(), 0) {
        Ok(()) | Err(Stop::Halt) => Outcome::Halted,
        Err(Stop::Limit) => Outcome::StepLimit,
        Err(Stop::Error(e)) => Outcome::RuntimeError(e),
    };
    m.trace.outcome = outcome;
    m.trace
}

#[derive(Debug, Clone, PartialEq)]
enum JVal {
    Int(i64),
    Str(String),
    Bool(bool),
}

impl JVal {
    fn display(&self) -> String {
        match self {
            JVal::Int(v) => v.to_string(),
            JVal::Str(s) => s.clone(),
            JVal::Bool(b) => b.to_string(),
        }
    }

    fn from_lit(l: &JLit) -> Self {
        match l {
            JLit::Long(v) => JVal::Int(*v),
            JLit::Str(s) => JVal::Str(s.clone()),
        }
    }

    fn fits(&self, t: JType) -> bool {
        matches!((self, t), (JVal::Int(_), JType::Long) | (JVal::Str(_), JType::Str))
    }

    fn into_value(self) -> Value {
        match self {
            JVal::Int(v) => Value::Int(v),
            JVal::Str(s) => Value::Str(s),
            JVal::Bool(b) => Value::Str(b.to_string()),
        }
    }
}

enum Flow {
    Normal,
    Break,
    Return,
}

struct Slot {
    jtype: JType,
    value: JVal,
}

struct Jvm<'a> {
    methods: HashMap<&'a str, &'a JMethod>,
    externals: HashMap<&'a str, &'a str>,
    fields: HashMap<&'a str, Slot>,
    frames: Vec<HashMap<String, Slot>>,
    inputs: VecDeque<Value>,
    trace: Trace,
    steps: usize,
}

impl<'a> Jvm<'a> {
    fn new(j: &'a JavaAst, inputs: &[Value]) -> Self {
        Jvm {
            methods: j.methods.iter().map(|m| (m.name.as_str(), m)).collect(),
            externals: j.externals.iter().map(|e| (e.method.as_str(), e.program.as_str())).collect(),
            fields: j
                .fields
                .iter()
                .map(|f| (f.name.as_str(), Slot { jtype: f.jtype, value: JVal::from_lit(&f.initial) }))
                .collect(),
            frames: Vec::new(),
            inputs: inputs.iter().cloned().collect(),
            trace: Trace::new(),
            steps: 0,
        }
    }

    fn tick(&mut self) -> R<()> {
        self.steps += 1;
        if self.steps > STEP_LIMIT {
            return Err(Stop::Limit);
        }
        Ok(())
    }

    fn call(&mut self, name: &str, args: Vec<JVal>, depth: usize) -> R<()> {
        if let Some(program) = self.externals.get(name) {
            let args = args.into_iter().map(JVal::into_value).collect();
            self.trace.call_events.push(CallEvent { program: program.to_string(), args });
            return Ok(());
        }
        let Some(m) = self.methods.get(name).copied() else { return fail(format!("undefined method {name}")) };
        if depth > MAX_DEPTH {
            return fail("call depth exceeded");
        }
        if m.params.len() != args.len() {
            return fail(format!("{name} expects {} arguments", m.params.len()));
        }
        let mut frame = HashMap::new();
        for (p, v) in m.params.iter().zip(args) {
            if !v.fits(JType::Long) {
                return fail(format!("argument {p} of {name} must be numeric"));
            }
            frame.insert(p.clone(), Slot { jtype: JType::Long, value: v });
        }
        self.frames.push(frame);
        let flow = self.block(&m.body, depth);
        self.frames.pop();
        match flow? {
            Flow::Break => fail("break outside a loop or switch"),
            Flow::Normal | Flow::Return => Ok(()),
        }
    }

    fn read(&self, name: &str) -> R<JVal> {
        if let Some(s) = self.frames.last().and_then(|f| f.get(name)) {
            return Ok(s.value.clone());
        }
        match self.fields.get(name) {
            Some(s) => Ok(s.value.clone()),
            None => fail(format!("undefined variable {name}")),
        }
    }

    fn assign(&mut self, target: &str, v: JVal, declare: Option<JType>) -> R<()> {
        let mismatch = || fail(format!("type mismatch assigning to {target}"));
        if let Some(t) = declare {
            if !v.fits(t) {
                return mismatch();
            }
            self.frames.last_mut().expect("frame").insert(target.to_string(), Slot { jtype: t, value: v });
            return Ok(());
        }
        let slot = match self.frames.last_mut().and_then(|f| f.get_mut(target)) {
            Some(s) => s,
            None => match self.fields.get_mut(target) {
                Some(s) => s,
                None => return fail(format!("undefined variable {target}")),
            },
        };
        if !v.fits(slot.jtype) {
            return mismatch();
        }
        slot.value = v;
        Ok(())
    }

    fn int(&self, e: &JExpr) -> R<i64> {
        match self.eval(e)? {
            JVal::Int(v) => Ok(v),
            _ => fail("non-numeric operand in arithmetic"),
        }
    }

    fn string(&self, e: &JExpr) -> R<String> {
        match self.eval(e)? {
            JVal::Str(s) => Ok(s),
            _ => fail("expected a string"),
        }
    }

    fn truth(&self, e: &JExpr) -> R<bool> {
        match self.eval(e)? {
            JVal::Bool(b) => Ok(b),
            _ => fail("condition is not boolean"),
        }
    }

    fn eval(&self, e: &JExpr) -> R<JVal> {
        match e {
            JExpr::Lit(l) => Ok(JVal::from_lit(l)),
            JExpr::Var(n) => self.read(n),
            JExpr::Binary { op, lhs, rhs } => {
                let a = self.int(lhs)?;
                let b = self.int(rhs)?;
                let op = match op {
                    JBinOp::Add => ArithOp::Add,
                    JBinOp::Sub => ArithOp::Sub,
                    JBinOp::Mul => ArithOp::Mul,
                    JBinOp::Div => ArithOp::Div,
                };
                Ok(JVal::Int(checked(op, a, b)?))
            }
            JExpr::Cmp { op, lhs, rhs } => {
                let a = self.eval(lhs)?;
                let b = self.eval(rhs)?;
                let holds = match (&a, &b, op) {
                    (JVal::Int(x), JVal::Int(y), _) => cmp_op(*op).holds(x.cmp(y)),
                    (JVal::Str(_), JVal::Str(_), JCmpOp::Eq) | (JVal::Bool(_), JVal::Bool(_), JCmpOp::Eq) => a == b,
                    (JVal::Str(_), JVal::Str(_), JCmpOp::Ne) | (JVal::Bool(_), JVal::Bool(_), JCmpOp::Ne) => a != b,
                    (JVal::Str(_), JVal::Str(_), _) => return fail("ordering comparison on strings"),
                    _ => return fail("comparison between numeric and alphanumeric values"),
                };
                Ok(JVal::Bool(holds))
            }
            JExpr::And(a, b) => Ok(JVal::Bool(self.truth(a)? && self.truth(b)?)),
            JExpr::Or(a, b) => Ok(JVal::Bool(self.truth(a)? || self.truth(b)?)),
            JExpr::Not(x) => Ok(JVal::Bool(!self.truth(x)?)),
            JExpr::Builtin { f, args } => self.builtin(*f, args),
        }
    }

    fn arity(f: Builtin, args: &[JExpr], n: usize) -> R<()> {
        if args.len() != n {
            return fail(format!("{} expects {n} arguments", f.name()));
        }
        Ok(())
    }

    fn builtin(&self, f: Builtin, args: &[JExpr]) -> R<JVal> {
        match f {
            Builtin::Fit => {
                Self::arity(f, args, 2)?;
                let s = self.string(&args[0])?;
                let w = self.int(&args[1])?;
                let w = u32::try_from(w).map_or_else(|_| fail("negative width"), Ok)?;
                Ok(JVal::Str(fit(&s, w)))
            }
            Builtin::Str => {
                Self::arity(f, args, 1)?;
                Ok(JVal::Str(self.int(&args[0])?.to_string()))
            }
            Builtin::Rtrim => {
                Self::arity(f, args, 1)?;
                Ok(JVal::Str(self.string(&args[0])?.trim_end_matches(' ').to_string()))
            }
            Builtin::Compare => {
                Self::arity(f, args, 2)?;
                let (a, b) = match (self.eval(&args[0])?, self.eval(&args[1])?) {
                    (JVal::Str(a), JVal::Str(b)) => (a, b),
                    _ => return fail("comparison between numeric and alphanumeric values"),
                };
                Ok(JVal::Int(padded_cmp(&a, &b) as i64))
            }
            Builtin::Fail => {
                let msg = match args.first() {
                    Some(a) => self.eval(a)?.display(),
                    None => "fail()".into(),
                };
                fail(msg)
            }
            Builtin::ReadLong | Builtin::ReadString | Builtin::Exit => {
                unreachable!("side-effecting builtin {} is evaluated by the statement executor", f.name())
            }
        }
    }

    /// Evaluation that may consume input or halt.
    fn eval_mut(&mut self, e: &JExpr) -> R<JVal> {
        match e {
            JExpr::Builtin { f: Builtin::ReadLong, .. } => match self.inputs.pop_front() {
                Some(Value::Int(v)) => Ok(JVal::Int(v)),
                Some(Value::Str(_)) => fail("alphanumeric input for a numeric read"),
                None => fail("input exhausted"),
            },
            JExpr::Builtin { f: Builtin::ReadString, .. } => match self.inputs.pop_front() {
                Some(v) => Ok(JVal::Str(v.display())),
                None => fail("input exhausted"),
            },
            JExpr::Builtin { f: Builtin::Exit, .. } => Err(Stop::Halt),
            JExpr::Builtin { f, args } if args.iter().any(has_effects) => {
                let vals = args.iter().map(|a| self.eval_mut(a)).collect::<R<Vec<_>>>()?;
                let lits: Vec<JExpr> = vals.into_iter().map(jval_expr).collect();
                self.builtin(*f, &lits)
            }
            e if has_effects(e) => fail("input read inside a compound expression"),
            e => self.eval(e),
        }
    }

    fn block(&mut self, stmts: &[JStmt], depth: usize) -> R<Flow> {
        for s in stmts {
            self.tick()?;
            match self.statement(s, depth)? {
                Flow::Normal => {}
                other => return Ok(other),
            }
        }
        Ok(Flow::Normal)
    }

    fn statement(&mut self, s: &JStmt, depth: usize) -> R<Flow> {
        match s {
            JStmt::Assign { target, value, declare } => {
                let v = self.eval_mut(value)?;
                self.assign(target, v, *declare)?;
            }
            JStmt::ExprStmt(e) => {
                self.eval_mut(e)?;
            }
            JStmt::IfElse { cond, then_branch, else_branch } => {
                let branch = if self.truth(cond)? { then_branch } else { else_branch };
                return self.block(branch, depth);
            }
            JStmt::While { cond, body } => loop {
                self.tick()?;
                if !self.truth(cond)? {
                    break;
                }
                match self.block(body, depth)? {
                    Flow::Normal => {}
                    Flow::Break => break,
                    Flow::Return => return Ok(Flow::Return),
                }
            },
            JStmt::DoWhile { body, cond } => loop {
                match self.block(body, depth)? {
                    Flow::Normal => {}
                    Flow::Break => break,
                    Flow::Return => return Ok(Flow::Return),
                }
                self.tick()?;
                if !self.truth(cond)? {
                    break;
                }
            },
            JStmt::For { init, cond, update, body } => {
                for s in init {
                    self.statement(s, depth)?;
                }
                loop {
                    self.tick()?;
                    if !self.truth(cond)? {
                        break;
                    }
                    match self.block(body, depth)? {
                        Flow::Normal => {}
                        Flow::Break => break,
                        Flow::Return => return Ok(Flow::Return),
                    }
                    for s in update {
                        self.statement(s, depth)?;
                    }
                }
            }
            JStmt::Switch { subject, cases, default } => {
                let v = self.eval(subject)?;
                let mut start = None;
                for (i, c) in cases.iter().enumerate() {
                    let label = JVal::from_lit(&c.label);
                    if std::mem::discriminant(&label) != std::mem::discriminant(&v) {
                        return fail("switch label type differs from subject");
                    }
                    if label == v {
                        start = Some(i);
                        break;
                    }
                }
                let mut bodies: Vec<&[JStmt]> = match start {
                    Some(i) => cases[i..].iter().map(|c| c.body.as_slice()).collect(),
                    None => Vec::new(),
                };
                bodies.extend(default.as_deref());
                for b in bodies {
                    match self.block(b, depth)? {
                        Flow::Normal => {}
                        Flow::Break => break,
                        Flow::Return => return Ok(Flow::Return),
                    }
                }
            }
            JStmt::MethodCall { method, args } => {
                let vals = args.iter().map(|a| self.eval_mut(a)).collect::<R<Vec<_>>>()?;
                self.call(method, vals, depth + 1)?;
            }
            JStmt::Print(args) => {
                let mut line = String::new();
                for a in args {
                    line.push_str(&self.eval_mut(a)?.display());
                }
                self.trace.display_lines.push(line);
            }
            JStmt::Return => return Ok(Flow::Return),
            JStmt::Break => return Ok(Flow::Break),
        }
        Ok(Flow::Normal)
    }
}

fn has_effects(e: &JExpr) -> bool {
    match e {
        JExpr::Builtin { f: Builtin::ReadLong | Builtin::ReadString | Builtin::Exit, .. } => true,
        JExpr::Builtin { args, .. } => args.iter().any(has_effects),
        JExpr::Binary { lhs, rhs, .. } | JExpr::Cmp { lhs, rhs, .. } => has_effects(lhs) || has_effects(rhs),
        JExpr::And(a, b) | JExpr::Or(a, b) => has_effects(a) || has_effects(b),
        JExpr::Not(x) => has_effects(x),
        JExpr::Lit(_) | JExpr::Var(_) => false,
    }
}

fn jval_expr(v: JVal) -> JExpr {
    match v {
        JVal::Int(i) => JExpr::long(i),
        JVal::Str(s) => JExpr::str(s),
        JVal::Bool(b) => JExpr::cmp(JCmpOp::Eq, JExpr::long(0), JExpr::long(if b { 0 } else { 1 })),
    }
}

fn cmp_op(op: JCmpOp) -> crate::cobol::CmpOp {
    use crate::cobol::CmpOp;
    match op {
        JCmpOp::Eq => CmpOp::Eq,
        JCmpOp::Ne => CmpOp::Ne,
        JCmpOp::Lt => CmpOp::Lt,
        JCmpOp::Gt => CmpOp::Gt,
        JCmpOp::Le => CmpOp::Le,
        JCmpOp::Ge => CmpOp::Ge,
    }
}
