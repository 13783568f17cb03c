//! Random COBOL programs with known best actions.
//!
//! The oracle prefers a switch for a top-level IF chain over one variable,
//! and moves everything from a top-level loop onward into its own method when
//! the loop is not the first statement of its paragraph. Everything else
//! keeps the rule default.

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cobol::*;
use crate::transpile::actions::if_chain;
use crate::transpile::{default_actions, emit_java, translate, Action, ActionLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Wide grammar coverage, semantics ignored (GO TO, negative and quoted
    /// literals, compound conditions anywhere).
    RoundTrip,
    /// Structured programs rich in IF chains and loops.
    Acceptance,
    /// Program statistics of the bundled sample corpus.
    Sample,
}

struct Knobs {
    paragraphs: (usize, usize),
    main_stmts: (usize, usize),
    para_stmts: (usize, usize),
    max_depth: usize,
    /// Relative weights: simple, if, chain, evaluate, loop, perform, call, display.
    weights: [u32; 8],
}

impl Profile {
    fn knobs(self) -> Knobs {
        match self {
            Profile::RoundTrip => Knobs {
                paragraphs: (1, 4),
                main_stmts: (0, 8),
                para_stmts: (0, 6),
                max_depth: 4,
                weights: [6, 3, 1, 2, 3, 2, 1, 2],
            },
            Profile::Acceptance => Knobs {
                paragraphs: (2, 3),
                main_stmts: (6, 10),
                para_stmts: (3, 6),
                max_depth: 1,
                weights: [1, 1, 2, 0, 14, 1, 1, 1],
            },
            Profile::Sample => Knobs {
                paragraphs: (2, 4),
                main_stmts: (2, 4),
                para_stmts: (2, 3),
                max_depth: 1,
                weights: [1, 1, 1, 0, 1, 6, 5, 1],
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthProgram {
    pub ast: CobolAst,
    pub oracle: Vec<Action>,
}

pub struct Synth {
    rng: ChaCha8Rng,
    profile: Profile,
}

const PROGRAMS: &[&str] = &["AUDIT-LOG", "TAXCALC", "RATE-LOOKUP", "PRINT-LINE", "CURRENCY", "DATE-UTIL", "LEDGER"];
const WORDS: &[&str] = &["ALPHA", "BETA", "OK", "ERR", "NET", "GROSS", "TOTAL", "DONE", "X", "Q1"];

impl Synth {
    pub fn new(seed: u64, profile: Profile) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), profile }
    }

    pub fn program(&mut self, program_id: &str) -> SynthProgram {
        let seed = self.rng.gen();
        let ast = Gen::new(seed, self.profile).program(program_id);
        let oracle = oracle_actions(&ast);
        SynthProgram { ast, oracle }
    }
}

struct Gen {
    rng: ChaCha8Rng,
    profile: Profile,
    knobs: Knobs,
    nums: Vec<String>,
    strs: Vec<(String, u32)>,
    loop_vars: Vec<String>,
    busy: Vec<bool>,
    paragraphs: Vec<String>,
}

impl Gen {
    fn new(seed: u64, profile: Profile) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            profile,
            knobs: profile.knobs(),
            nums: Vec::new(),
            strs: Vec::new(),
            loop_vars: Vec::new(),
            busy: Vec::new(),
            paragraphs: Vec::new(),
        }
    }

    fn range(&mut self, (lo, hi): (usize, usize)) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn wild(&self) -> bool {
        self.profile == Profile::RoundTrip
    }

    fn program(mut self, program_id: &str) -> CobolAst {
        let mut ast = CobolAst::new(program_id);
        let n_nums = self.rng.gen_range(2..=4);
        for i in 1..=n_nums {
            let name = format!("WS-N{i}");
            let mut item = DataItem::elementary(1, &name, Picture::Numeric(self.rng.gen_range(2..=6)));
            if self.chance(0.4) {
                item = item.with_initial(Literal::Int(self.rng.gen_range(0..=50)));
            }
            ast.data_items.push(item);
            self.nums.push(name);
        }
        let n_strs = self.rng.gen_range(1..=3);
        for i in 1..=n_strs {
            let name = format!("WS-S{i}");
            let w = self.rng.gen_range(1..=8);
            let mut item = DataItem::elementary(1, &name, Picture::Alnum(w));
            if self.chance(0.4) {
                let word = self.word();
                item = item.with_initial(Literal::Str(word));
            }
            ast.data_items.push(item);
            self.strs.push((name, w));
        }
        if self.chance(0.5) {
            let mut group = DataItem { level: 1, name: "WS-REC".into(), picture: None, initial: None, children: vec![], line: 0 };
            group.children.push(DataItem::elementary(5, "REC-ID", Picture::Numeric(4)));
            group.children.push(DataItem::elementary(5, "REC-NAME", Picture::Alnum(6)));
            ast.data_items.push(group);
            self.nums.push("REC-ID".into());
            self.strs.push(("REC-NAME".into(), 6));
        }
        for i in 1..=3 {
            let name = format!("WS-I{i}");
            ast.data_items.push(DataItem::elementary(1, &name, Picture::Numeric(3)));
            self.loop_vars.push(name);
            self.busy.push(false);
        }
        let n_paras = self.range(self.knobs.paragraphs);
        self.paragraphs = (0..n_paras).map(|i| if i == 0 { "MAIN-PARA".to_string() } else { format!("STEP-{i}") }).collect();
        for p in 0..n_paras {
            let n = if p == 0 { self.range(self.knobs.main_stmts) } else { self.range(self.knobs.para_stmts) };
            let mut body = self.block(n, 0, p);
            if p == 0 && self.profile != Profile::RoundTrip {
                body.push(StatementKind::StopRun.into());
            }
            if self.wild() && self.chance(0.2) {
                let target = self.paragraphs.choose(&mut self.rng).expect("paragraph").clone();
                body.push(StatementKind::GoTo { target }.into());
            }
            ast.paragraphs.push(Paragraph::new(self.paragraphs[p].clone(), body));
        }
        ast
    }

    fn word(&mut self) -> String {
        let w = WORDS.choose(&mut self.rng).expect("word").to_string();
        if self.wild() && self.chance(0.1) {
            return format!("IT'S {w}");
        }
        w
    }

    fn int_lit(&mut self) -> i64 {
        if self.wild() && self.chance(0.15) {
            return -self.rng.gen_range(1..=99);
        }
        self.rng.gen_range(0..=20)
    }

    fn num(&mut self) -> String {
        self.nums.choose(&mut self.rng).expect("numeric item").clone()
    }

    fn str_var(&mut self) -> String {
        self.strs.choose(&mut self.rng).expect("alphanumeric item").0.clone()
    }

    /// A readable numeric operand: a variable, an active loop index or a literal.
    fn num_operand(&mut self) -> Operand {
        let active: Vec<String> =
            self.loop_vars.iter().zip(&self.busy).filter(|(_, b)| **b).map(|(v, _)| v.clone()).collect();
        match self.rng.gen_range(0..4) {
            0 => Operand::Lit(Literal::Int(self.int_lit())),
            1 if !active.is_empty() => Operand::Name(active.choose(&mut self.rng).expect("active").clone()),
            _ => Operand::Name(self.num()),
        }
    }

    fn block(&mut self, n: usize, depth: usize, para: usize) -> Vec<Statement> {
        let mut out = Vec::new();
        for _ in 0..n {
            self.statement(depth, para, &mut out);
        }
        out
    }

    fn body(&mut self, depth: usize, para: usize) -> Vec<Statement> {
        let most = if self.profile == Profile::Acceptance { 1 } else { 3 };
        let n = self.rng.gen_range(1..=most);
        let mut b = self.block(n, depth, para);
        if b.is_empty() {
            b.push(self.display());
        }
        b
    }

    fn display(&mut self) -> Statement {
        let n = self.rng.gen_range(1..=3);
        let operands = (0..n)
            .map(|_| match self.rng.gen_range(0..3) {
                0 => Operand::Lit(Literal::Str(self.word())),
                1 => self.num_operand(),
                _ => Operand::Name(self.str_var()),
            })
            .collect();
        StatementKind::Display { operands }.into()
    }

    fn simple(&mut self) -> Statement {
        let kind = match self.rng.gen_range(0..6) {
            0 => {
                let src = self.num_operand();
                StatementKind::Move { src, dst: self.num() }
            }
            1 => {
                let src = if self.chance(0.5) { Operand::Lit(Literal::Str(self.word())) } else { Operand::Name(self.str_var()) };
                StatementKind::Move { src, dst: self.str_var() }
            }
            2 => {
                let dst = self.num();
                StatementKind::Compute { dst, expr: self.expr(2) }
            }
            3 => {
                let verb = *[ArithVerb::Add, ArithVerb::Subtract, ArithVerb::Multiply, ArithVerb::Divide]
                    .choose(&mut self.rng)
                    .expect("verb");
                let operand = match verb {
                    ArithVerb::Divide | ArithVerb::Multiply => Operand::Lit(Literal::Int(self.rng.gen_range(1..=3))),
                    _ => self.num_operand(),
                };
                if self.chance(0.3) {
                    let target = self.num_operand();
                    StatementKind::Arith { verb, operand, target, giving: Some(self.num()) }
                } else {
                    StatementKind::Arith { verb, operand, target: Operand::Name(self.num()), giving: None }
                }
            }
            4 => {
                let dst = if self.chance(0.7) { self.num() } else { self.str_var() };
                StatementKind::Accept { dst }
            }
            _ => return self.display(),
        };
        kind.into()
    }

    fn expr(&mut self, depth: usize) -> Expr {
        if depth == 0 || self.chance(0.4) {
            return Expr::Operand(self.num_operand());
        }
        let op = *[ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div].choose(&mut self.rng).expect("op");
        let lhs = self.expr(depth - 1);
        let rhs = match op {
            ArithOp::Div => Expr::Operand(Operand::Lit(Literal::Int(self.rng.gen_range(1..=4)))),
            _ => self.expr(depth - 1),
        };
        Expr::binary(op, lhs, rhs)
    }

    fn cmp_op(&mut self) -> CmpOp {
        *[CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Gt, CmpOp::Le, CmpOp::Ge].choose(&mut self.rng).expect("cmp")
    }

    /// A type-consistent comparison. Top-level conditions in structured
    /// profiles compare two variables, so only chain heads carry literals there.
    fn comparison(&mut self, top: bool) -> Condition {
        let op = self.cmp_op();
        let with_literal = self.wild() || !top;
        if self.chance(0.7) {
            let lhs = Operand::Name(self.num());
            let rhs = if with_literal { self.num_operand() } else { Operand::Name(self.num()) };
            Condition::compare(lhs, op, rhs)
        } else {
            let lhs = Operand::Name(self.str_var());
            let rhs =
                if with_literal && self.chance(0.5) { Operand::Lit(Literal::Str(self.word())) } else { Operand::Name(self.str_var()) };
            Condition::compare(lhs, op, rhs)
        }
    }

    fn condition(&mut self, top: bool) -> Condition {
        let c = self.comparison(top);
        if !self.wild() || self.chance(0.5) {
            return c;
        }
        match self.rng.gen_range(0..3) {
            0 => Condition::And(Box::new(c), Box::new(self.condition(top))),
            1 => Condition::Or(Box::new(c), Box::new(self.condition(top))),
            _ => Condition::Not(Box::new(c)),
        }
    }

    fn free_loop_var(&mut self) -> Option<usize> {
        let free: Vec<usize> = (0..self.busy.len()).filter(|&i| !self.busy[i]).collect();
        free.choose(&mut self.rng).copied()
    }

    fn statement(&mut self, depth: usize, para: usize, out: &mut Vec<Statement>) {
        let compound = depth < self.knobs.max_depth;
        let top = depth == 0;
        let mut weights = self.knobs.weights;
        if !compound {
            for w in &mut weights[1..5] {
                *w = 0;
            }
        }
        if !top && !self.wild() {
            weights[2] = 0;
        }
        if para + 1 >= self.paragraphs.len() {
            weights[5] = 0;
        }
        let pick = {
            let total: u32 = weights.iter().sum();
            let mut r = self.rng.gen_range(0..total);
            weights.iter().position(|&w| {
                if r < w {
                    true
                } else {
                    r -= w;
                    false
                }
            })
        };
        match pick.expect("nonzero weight") {
            0 => out.push(self.simple()),
            1 => {
                let cond = self.condition(top);
                let then_branch = self.body(depth + 1, para);
                let else_branch = if self.chance(0.4) { self.body(depth + 1, para) } else { Vec::new() };
                out.push(StatementKind::If { cond, then_branch, else_branch }.into());
            }
            2 => out.push(self.chain(depth, para)),
            3 => out.push(self.evaluate(depth, para)),
            4 => self.looped(depth, para, out),
            5 => {
                let target = self.paragraphs[self.rng.gen_range(para + 1..self.paragraphs.len())].clone();
                let kind = if self.chance(0.3) {
                    StatementKind::PerformTimes {
                        body: PerformBody::Paragraph(target),
                        count: Operand::Lit(Literal::Int(self.rng.gen_range(1..=3))),
                    }
                } else {
                    StatementKind::PerformPara { target }
                };
                out.push(kind.into());
            }
            6 => {
                let program = PROGRAMS.choose(&mut self.rng).expect("program").to_string();
                let n = self.rng.gen_range(0..=2);
                let using = (0..n).map(|_| if self.chance(0.6) { self.num() } else { self.str_var() }).collect();
                out.push(StatementKind::Call { program, using }.into());
            }
            _ => out.push(self.display()),
        }
    }

    fn chain(&mut self, depth: usize, para: usize) -> Statement {
        let numeric = self.chance(0.6);
        let subject = if numeric { self.num() } else { self.str_var() };
        let n = if self.profile == Profile::Acceptance { self.rng.gen_range(2..=3) } else { self.rng.gen_range(2..=4) };
        let mut labels: Vec<Literal> = if numeric {
            let mut v: Vec<i64> = (1..=9).collect();
            v.shuffle(&mut self.rng);
            v.into_iter().take(n).map(Literal::Int).collect()
        } else {
            let mut v: Vec<&str> = WORDS.to_vec();
            v.shuffle(&mut self.rng);
            v.into_iter().take(n).map(|s| Literal::Str(s.to_string())).collect()
        };
        let mut tail = if self.chance(0.3) { self.body(depth + 1, para) } else { Vec::new() };
        while let Some(lit) = labels.pop() {
            let cond = Condition::compare(Operand::Name(subject.clone()), CmpOp::Eq, Operand::Lit(lit));
            let then_branch = self.body(depth + 1, para);
            tail = vec![StatementKind::If { cond, then_branch, else_branch: tail }.into()];
        }
        tail.pop().expect("chain head")
    }

    fn evaluate(&mut self, depth: usize, para: usize) -> Statement {
        let numeric = self.chance(0.6);
        let subject = if numeric { self.num() } else { self.str_var() };
        let n = self.rng.gen_range(1..=3);
        let mut arms = Vec::new();
        for i in 0..n {
            let lit = if numeric {
                Literal::Int(i as i64 + self.rng.gen_range(0..=2) * 3)
            } else {
                Literal::Str(WORDS[(i * 3 + self.rng.gen_range(0..3)) % WORDS.len()].to_string())
            };
            arms.push(WhenArm { label: WhenLabel::Lit(lit), body: self.body(depth + 1, para) });
        }
        if self.chance(0.5) {
            arms.push(WhenArm { label: WhenLabel::Other, body: self.body(depth + 1, para) });
        }
        StatementKind::Evaluate { subject, arms }.into()
    }

    fn looped(&mut self, depth: usize, para: usize, out: &mut Vec<Statement>) {
        let Some(v) = self.free_loop_var() else {
            out.push(self.simple());
            return;
        };
        let var = self.loop_vars[v].clone();
        self.busy[v] = true;
        let bound = Operand::Lit(Literal::Int(self.rng.gen_range(1..=4)));
        let later = para + 1 < self.paragraphs.len();
        let form = if self.profile == Profile::Acceptance && self.chance(0.8) {
            [0, 2, if later { 3 } else { 0 }][self.rng.gen_range(0..3)]
        } else {
            self.rng.gen_range(0..3)
        };
        match form {
            0 => {
                let body = self.body(depth + 1, para);
                out.push(StatementKind::PerformTimes { body: PerformBody::Inline(body), count: bound }.into());
            }
            3 => {
                let target = self.paragraphs[self.rng.gen_range(para + 1..self.paragraphs.len())].clone();
                out.push(StatementKind::PerformTimes { body: PerformBody::Paragraph(target), count: bound }.into());
            }
            1 => {
                let mut body = self.body(depth + 1, para);
                body.push(
                    StatementKind::Arith {
                        verb: ArithVerb::Add,
                        operand: Operand::Lit(Literal::Int(1)),
                        target: Operand::Name(var.clone()),
                        giving: None,
                    }
                    .into(),
                );
                out.push(StatementKind::Move { src: Operand::Lit(Literal::Int(0)), dst: var.clone() }.into());
                let cond = Condition::compare(Operand::Name(var), CmpOp::Ge, bound);
                out.push(StatementKind::PerformUntil { body, cond }.into());
            }
            _ => {
                let body = self.body(depth + 1, para);
                let until = Condition::compare(Operand::Name(var.clone()), CmpOp::Gt, bound);
                let by = Operand::Lit(Literal::Int(self.rng.gen_range(1..=2)));
                out.push(
                    StatementKind::PerformVarying { body, var, from: Operand::Lit(Literal::Int(1)), by, until }.into(),
                );
            }
        }
        self.busy[v] = false;
    }
}

fn switchable(ast: &CobolAst, s: &Statement) -> bool {
    let Some(chain) = if_chain(&s.kind) else { return false };
    if chain.members.len() < 2 {
        return false;
    }
    let Some(item) = ast.all_data_items().into_iter().find(|d| d.name == chain.subject) else { return false };
    let mut seen = std::collections::HashSet::new();
    chain.members.iter().all(|(lit, _)| match (item.picture, lit) {
        (Some(Picture::Numeric(_)), Literal::Int(v)) => seen.insert(v.to_string()),
        (Some(Picture::Alnum(_)), Literal::Str(v)) => seen.insert(v.trim_end_matches(' ').to_string()),
        _ => false,
    })
}

/// Best action per statement under the generator's conventions.
pub fn oracle_actions(ast: &CobolAst) -> Vec<Action> {
    let index = AstIndex::build(ast);
    let mut labels = default_actions(ast);
    let pos = |labels: &[Action], r: usize| labels.iter().position(|a| a.stmt_ref == r).expect("statement");
    for p in &ast.paragraphs {
        for (i, s) in p.statements.iter().enumerate() {
            let r = index.index_of(s).expect("indexed");
            let mut rest_has_goto = false;
            visit_statements(&p.statements[i..], &mut |x| rest_has_goto |= matches!(x.kind, StatementKind::GoTo { .. }));
            let k = pos(&labels, r);
            if matches!(s.kind, StatementKind::If { .. }) && switchable(ast, s) {
                labels[k].action = ActionLabel::IfChainToSwitch;
            } else if s.kind.is_loop() && i > 0 && !rest_has_goto {
                labels[k].action = ActionLabel::ExtractMethodAt(r);
            }
        }
    }
    labels
}

/// Fraction of statements whose oracle label differs from the rule default.
pub fn non_default_fraction(programs: &[SynthProgram]) -> f64 {
    let (mut diff, mut total) = (0usize, 0usize);
    for p in programs {
        let defaults = default_actions(&p.ast);
        total += defaults.len();
        diff += defaults.iter().zip(&p.oracle).filter(|(d, o)| d.action != o.action).count();
    }
    if total == 0 {
        0.0
    } else {
        diff as f64 / total as f64
    }
}

/// Writes `n` programs as `<prefix>-NNNN.cbl`. Every `oracle_every`-th file
/// also gets `.labels.json` and a reference `.java` translation.
pub fn write_corpus(
    dir: &Path,
    n: usize,
    seed: u64,
    profile: Profile,
    prefix: &str,
    oracle_every: Option<usize>,
) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut synth = Synth::new(seed, profile);
    let mut paths = Vec::new();
    for i in 0..n {
        let id = format!("{prefix}-{:04}", i + 1);
        let program = synth.program(&id.to_uppercase());
        let path = dir.join(format!("{id}.cbl"));
        fs::write(&path, pretty_print(&program.ast))?;
        if oracle_every.is_some_and(|k| k > 0 && i % k == 0) {
            let labels = serde_json::to_string_pretty(&program.oracle).expect("actions serialize");
            fs::write(dir.join(format!("{id}.labels.json")), labels + "\n")?;
            let java = translate(&program.ast, &program.oracle).java;
            fs::write(dir.join(format!("{id}.java")), emit_java(&java))?;
        }
        paths.push(path);
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transpile::translate;

    #[test]
    fn deterministic_and_parseable() {
        for profile in [Profile::RoundTrip, Profile::Acceptance, Profile::Sample] {
            let a: Vec<_> = (0..20).map(|i| Synth::new(i, profile).program("P").ast).collect();
            let b: Vec<_> = (0..20).map(|i| Synth::new(i, profile).program("P").ast).collect();
            assert_eq!(a, b);
            for ast in &a {
                let text = pretty_print(ast);
                let back = parse_str(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
                assert_eq!(&back, ast, "{text}");
            }
        }
    }

    #[test]
    fn oracle_actions_apply_cleanly() {
        let mut s = Synth::new(3, Profile::Acceptance);
        let programs: Vec<_> = (0..200).map(|i| s.program(&format!("A{i}"))).collect();
        for p in &programs {
            assert!(translate(&p.ast, &p.oracle).fallbacks.is_empty());
        }
        let f = non_default_fraction(&programs);
        println!("non-default {f}");
        assert!((0.25..=0.35).contains(&f), "{f}");
    }
}
