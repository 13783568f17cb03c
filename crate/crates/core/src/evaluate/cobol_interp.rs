//! Reference semantics for the COBOL subset.
//!
//! Numeric items hold 64-bit integers whatever their declared width;
//! alphanumeric items always hold exactly their declared width. Undeclared
//! names behave as numeric items starting at zero.

use std::collections::{HashMap, HashSet, VecDeque};

use super::trace::*;
use crate::cobol::*;
use crate::transpile::translate::fit;

pub fn interpret_cobol(ast: &CobolAst, inputs: &[Value]) -> Trace {
    let mut m = Machine::new(ast, inputs);
    let outcome = match m.run() {
        Ok(()) | Err(Stop::Halt) => Outcome::Halted,
        Err(Stop::Limit) => Outcome::StepLimit,
        Err(Stop::Error(e)) => Outcome::RuntimeError(e),
    };
    m.trace.outcome = outcome;
    m.trace
}

pub(crate) enum Stop {
    Halt,
    Limit,
    Error(String),
}

type R<T> = Result<T, Stop>;

pub(crate) fn fail<T>(msg: impl Into<String>) -> R<T> {
    Err(Stop::Error(msg.into()))
}

enum Flow {
    Normal,
    GoTo(usize),
}

struct Item {
    pic: Picture,
    value: Value,
}

struct Machine<'a> {
    ast: &'a CobolAst,
    items: HashMap<&'a str, Item>,
    groups: HashSet<&'a str>,
    inputs: VecDeque<Value>,
    trace: Trace,
    steps: usize,
}

pub(crate) fn checked(op: ArithOp, a: i64, b: i64) -> R<i64> {
    let r = match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div if b == 0 => return fail("division by zero"),
        ArithOp::Div => a.checked_div(b),
    };
    r.map_or_else(|| fail("arithmetic overflow"), Ok)
}

impl<'a> Machine<'a> {
    fn new(ast: &'a CobolAst, inputs: &[Value]) -> Self {
        let mut items = HashMap::new();
        let mut groups = HashSet::new();
        for d in ast.all_data_items() {
            match d.picture {
                None => {
                    groups.insert(d.name.as_str());
                }
                Some(pic) => {
                    let value = match (pic, &d.initial) {
                        (Picture::Numeric(_), Some(Literal::Int(v))) => Value::Int(*v),
                        (Picture::Numeric(_), _) => Value::Int(0),
                        (Picture::Alnum(w), Some(Literal::Str(s))) => Value::Str(fit(s, w)),
                        (Picture::Alnum(w), _) => Value::Str(fit("", w)),
                    };
                    items.insert(d.name.as_str(), Item { pic, value });
                }
            }
        }
        for n in ast.implicit_items() {
            items.insert(n, Item { pic: Picture::Numeric(18), value: Value::Int(0) });
        }
        Machine { ast, items, groups, inputs: inputs.iter().cloned().collect(), trace: Trace::new(), steps: 0 }
    }

    fn tick(&mut self) -> R<()> {
        self.steps += 1;
        if self.steps > STEP_LIMIT {
            return Err(Stop::Limit);
        }
        Ok(())
    }

    fn run(&mut self) -> R<()> {
        let mut pc = 0;
        while pc < self.ast.paragraphs.len() {
            pc = match self.paragraph(pc, 1)? {
                Flow::Normal => pc + 1,
                Flow::GoTo(t) => t,
            };
        }
        Ok(())
    }

    fn paragraph(&mut self, i: usize, depth: usize) -> R<Flow> {
        if depth > MAX_DEPTH {
            return fail("call depth exceeded");
        }
        self.block(&self.ast.paragraphs[i].statements, depth)
    }

    /// A PERFORM: the paragraph and any GO TO chain it starts.
    fn perform(&mut self, target: &str, depth: usize) -> R<()> {
        let Some(mut i) = self.ast.paragraph_index(target) else { return fail(format!("no paragraph {target}")) };
        while let Flow::GoTo(t) = self.paragraph(i, depth + 1)? {
            i = t;
        }
        Ok(())
    }

    fn block(&mut self, stmts: &'a [Statement], depth: usize) -> R<Flow> {
        for s in stmts {
            self.tick()?;
            if let Flow::GoTo(t) = self.statement(s, depth)? {
                return Ok(Flow::GoTo(t));
            }
        }
        Ok(Flow::Normal)
    }

    fn read(&self, name: &str) -> R<Value> {
        if self.groups.contains(name) {
            return fail(format!("group item {name} used as a value"));
        }
        match self.items.get(name) {
            Some(i) => Ok(i.value.clone()),
            None => fail(format!("undefined variable {name}")),
        }
    }

    fn store(&mut self, name: &str, v: Value) -> R<()> {
        if self.groups.contains(name) {
            return fail(format!("group item {name} used as a receiver"));
        }
        let Some(item) = self.items.get_mut(name) else { return fail(format!("undefined variable {name}")) };
        item.value = match (item.pic, v) {
            (Picture::Numeric(_), Value::Int(v)) => Value::Int(v),
            (Picture::Numeric(_), Value::Str(_)) => return fail(format!("alphanumeric value moved to numeric {name}")),
            (Picture::Alnum(w), v) => Value::Str(fit(&v.display(), w)),
        };
        Ok(())
    }

    fn operand(&self, o: &Operand) -> R<Value> {
        match o {
            Operand::Name(n) => self.read(n),
            Operand::Lit(Literal::Int(v)) => Ok(Value::Int(*v)),
            Operand::Lit(Literal::Str(s)) => Ok(Value::Str(s.clone())),
        }
    }

    fn int(&self, o: &Operand) -> R<i64> {
        match self.operand(o)? {
            Value::Int(v) => Ok(v),
            Value::Str(_) => fail("non-numeric operand in arithmetic"),
        }
    }

    fn expr(&self, e: &Expr) -> R<i64> {
        match e {
            Expr::Operand(o) => self.int(o),
            Expr::Binary { op, lhs, rhs } => {
                let a = self.expr(lhs)?;
                let b = self.expr(rhs)?;
                checked(*op, a, b)
            }
        }
    }

    fn compare(&self, op: CmpOp, a: &Value, b: &Value) -> R<bool> {
        let ord = match (a, b) {
            (Value::Int(x), Value::Int(y)) => x.cmp(y),
            (Value::Str(x), Value::Str(y)) => padded_cmp(x, y),
            _ => return fail("comparison between numeric and alphanumeric values"),
        };
        Ok(op.holds(ord))
    }

    fn condition(&self, c: &Condition) -> R<bool> {
        match c {
            Condition::Compare { op, lhs, rhs } => self.compare(*op, &self.operand(lhs)?, &self.operand(rhs)?),
            Condition::And(a, b) => Ok(self.condition(a)? && self.condition(b)?),
            Condition::Or(a, b) => Ok(self.condition(a)? || self.condition(b)?),
            Condition::Not(x) => Ok(!self.condition(x)?),
        }
    }

    fn statement(&mut self, s: &'a Statement, depth: usize) -> R<Flow> {
        match &s.kind {
            StatementKind::Move { src, dst } => {
                let v = self.operand(src)?;
                self.store(dst, v)?;
            }
            StatementKind::Compute { dst, expr } => {
                let v = self.expr(expr)?;
                self.store(dst, Value::Int(v))?;
            }
            StatementKind::Arith { verb, operand, target, giving } => {
                let a = self.int(operand)?;
                let b = self.int(target)?;
                let v = match verb {
                    ArithVerb::Add => checked(ArithOp::Add, a, b)?,
                    ArithVerb::Subtract => checked(ArithOp::Sub, b, a)?,
                    ArithVerb::Multiply => checked(ArithOp::Mul, a, b)?,
                    ArithVerb::Divide => checked(ArithOp::Div, b, a)?,
                };
                let dst = match (giving, target) {
                    (Some(g), _) => g.as_str(),
                    (None, Operand::Name(n)) => n.as_str(),
                    (None, Operand::Lit(_)) => return fail("literal receiver"),
                };
                self.store(dst, Value::Int(v))?;
            }
            StatementKind::If { cond, then_branch, else_branch } => {
                let branch = if self.condition(cond)? { then_branch } else { else_branch };
                return self.block(branch, depth);
            }
            StatementKind::Evaluate { subject, arms } => {
                let v = self.read(subject)?;
                for arm in arms {
                    let hit = match &arm.label {
                        WhenLabel::Lit(l) => self.compare(CmpOp::Eq, &v, &self.operand(&Operand::Lit(l.clone()))?)?,
                        WhenLabel::Other => true,
                    };
                    if hit {
                        return self.block(&arm.body, depth);
                    }
                }
            }
            StatementKind::PerformPara { target } => self.perform(target, depth)?,
            StatementKind::PerformTimes { body, count } => {
                let n = self.int(count)?;
                for _ in 0..n.max(0) {
                    self.tick()?;
                    match body {
                        PerformBody::Paragraph(t) => self.perform(t, depth)?,
                        PerformBody::Inline(b) => {
                            if let Flow::GoTo(t) = self.block(b, depth)? {
                                return Ok(Flow::GoTo(t));
                            }
                        }
                    }
                }
                self.tick()?;
            }
            StatementKind::PerformUntil { body, cond } => loop {
                self.tick()?;
                if self.condition(cond)? {
                    break;
                }
                if let Flow::GoTo(t) = self.block(body, depth)? {
                    return Ok(Flow::GoTo(t));
                }
            },
            StatementKind::PerformVarying { body, var, from, by, until } => {
                let start = self.operand(from)?;
                self.store(var, start)?;
                loop {
                    self.tick()?;
                    if self.condition(until)? {
                        break;
                    }
                    if let Flow::GoTo(t) = self.block(body, depth)? {
                        return Ok(Flow::GoTo(t));
                    }
                    let cur = self.int(&Operand::Name(var.clone()))?;
                    let step = self.int(by)?;
                    self.store(var, Value::Int(checked(ArithOp::Add, cur, step)?))?;
                }
            }
            StatementKind::Display { operands } => {
                let mut line = String::new();
                for o in operands {
                    line.push_str(&self.operand(o)?.display());
                }
                self.trace.display_lines.push(line);
            }
            StatementKind::Accept { dst } => {
                let Some(v) = self.inputs.pop_front() else { return fail("input exhausted") };
                self.store(dst, v)?;
            }
            StatementKind::Call { program, using } => {
                let args = using.iter().map(|u| self.read(u)).collect::<R<Vec<_>>>()?;
                self.trace.call_events.push(CallEvent { program: program.clone(), args });
            }
            StatementKind::GoTo { target } => match self.ast.paragraph_index(target) {
                Some(t) => return Ok(Flow::GoTo(t)),
                None => return fail(format!("no paragraph {target}")),
            },
            StatementKind::StopRun => return Err(Stop::Halt),
        }
        Ok(Flow::Normal)
    }
}
