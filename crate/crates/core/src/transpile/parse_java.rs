//! Reader for the Java subset the emitter produces, plus the common
//! shorthands (`+=`, `++`, `else if`, `String.valueOf`) found in
//! hand-written translations.

use thiserror::Error;

use super::java::*;
use crate::cobol::Picture;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("java parse error at {line}:{col}: {message}")]
pub struct JavaParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Long(i64),
    Str(String),
    Sym(&'static str),
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

const SYMBOLS: &[&str] = &[
    "...", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=", "*=", "/=", "++", "--", "{", "}", "(", ")", ";", ",",
    ":", ".", "@", "=", "<", ">", "+", "-", "*", "/", "!",
];

fn lex(src: &str) -> Result<Vec<Spanned>, JavaParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let err = |line, col, m: &str| JavaParseError { line, col, message: m.to_string() };
    while i < chars.len() {
        let c = chars[i];
        let (sl, sc) = (line, col);
        let advance = |n: usize, i: &mut usize, line: &mut u32, col: &mut u32| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    *line += 1;
                    *col = 1;
                } else {
                    *col += 1;
                }
                *i += 1;
            }
        };
        if c.is_whitespace() {
            advance(1, &mut i, &mut line, &mut col);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance(1, &mut i, &mut line, &mut col);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            advance(2, &mut i, &mut line, &mut col);
            while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                advance(1, &mut i, &mut line, &mut col);
            }
            if i >= chars.len() {
                return Err(err(sl, sc, "unterminated comment"));
            }
            advance(2, &mut i, &mut line, &mut col);
            continue;
        }
        if c == '"' {
            advance(1, &mut i, &mut line, &mut col);
            let mut s = String::new();
            loop {
                let Some(&d) = chars.get(i) else { return Err(err(sl, sc, "unterminated string")) };
                if d == '\n' {
                    return Err(err(sl, sc, "unterminated string"));
                }
                advance(1, &mut i, &mut line, &mut col);
                match d {
                    '"' => break,
                    '\\' => {
                        let Some(&e) = chars.get(i) else { return Err(err(sl, sc, "bad escape")) };
                        advance(1, &mut i, &mut line, &mut col);
                        match e {
                            'n' => s.push('\n'),
                            't' => s.push('\t'),
                            'r' => s.push('\r'),
                            '"' => s.push('"'),
                            '\'' => s.push('\''),
                            '\\' => s.push('\\'),
                            'u' => {
                                let hex: String = chars.get(i..i + 4).map(|h| h.iter().collect()).unwrap_or_default();
                                let code = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32);
                                let Some(ch) = code else { return Err(err(sl, sc, "bad unicode escape")) };
                                advance(4, &mut i, &mut line, &mut col);
                                s.push(ch);
                            }
                            _ => return Err(err(sl, sc, "bad escape")),
                        }
                    }
                    d => s.push(d),
                }
            }
            out.push(Spanned { tok: Tok::Str(s), line: sl, col: sc });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(1, &mut i, &mut line, &mut col);
            }
            let digits: String = chars[start..i].iter().collect();
            if matches!(chars.get(i), Some('L') | Some('l')) {
                advance(1, &mut i, &mut line, &mut col);
            }
            // magnitude may be 2^63 when preceded by unary minus
            let v: u64 = digits.parse().map_err(|_| err(sl, sc, "integer literal out of range"))?;
            if v > i64::MAX as u64 + 1 {
                return Err(err(sl, sc, "integer literal out of range"));
            }
            out.push(Spanned { tok: Tok::Long(v as i64), line: sl, col: sc });
            continue;
        }
        if c.is_alphabetic() || c == '_' || c == '$' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '$') {
                advance(1, &mut i, &mut line, &mut col);
            }
            out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line: sl, col: sc });
            continue;
        }
        let rest: String = chars[i..(i + 3).min(chars.len())].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                advance(s.len(), &mut i, &mut line, &mut col);
                out.push(Spanned { tok: Tok::Sym(s), line: sl, col: sc });
            }
            None => return Err(err(sl, sc, &format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

pub fn parse_java(src: &str) -> Result<JavaAst, JavaParseError> {
    let toks = lex(src)?;
    let mut p = P { toks, pos: 0 };
    p.class()
}

struct P {
    toks: Vec<Spanned>,
    pos: usize,
}

const MODIFIERS: &[&str] = &["public", "private", "protected", "static", "final"];

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.toks.get(self.pos + n).map(|t| &t.tok)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, JavaParseError> {
        let (line, col) = self.toks.get(self.pos).or(self.toks.last()).map_or((1, 1), |t| (t.line, t.col));
        Err(JavaParseError { line, col, message: message.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(x)) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sym(&mut self, s: &str) -> Result<(), JavaParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn ident(&mut self) -> Result<String, JavaParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected identifier"),
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), JavaParseError> {
        if self.is_ident(k) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{k}'"))
        }
    }

    fn class(&mut self) -> Result<JavaAst, JavaParseError> {
        while self.is_ident("import") || self.is_ident("package") {
            while !self.eat_sym(";") {
                if self.bump().is_none() {
                    return self.err("unexpected end of input");
                }
            }
        }
        while matches!(self.peek(), Some(Tok::Ident(m)) if MODIFIERS.contains(&m.as_str())) {
            self.pos += 1;
        }
        self.keyword("class")?;
        let name = self.ident()?;
        if self.is_ident("extends") {
            self.pos += 1;
            self.ident()?;
        }
        self.sym("{")?;
        let mut j = JavaAst { class_name: name, fields: Vec::new(), methods: Vec::new(), externals: Vec::new() };
        while !self.eat_sym("}") {
            if self.peek().is_none() {
                return self.err("unexpected end of class");
            }
            self.member(&mut j)?;
        }
        if self.peek().is_some() {
            return self.err("trailing input after class");
        }
        if j.method(JavaAst::ENTRY).is_none() {
            return self.err("class has no run() method");
        }
        Ok(j)
    }

    fn annotation(&mut self) -> Result<(String, Option<String>), JavaParseError> {
        self.sym("@")?;
        let name = self.ident()?;
        let mut arg = None;
        if self.eat_sym("(") {
            match self.bump() {
                Some(Tok::Str(s)) => arg = Some(s),
                _ => return self.err("expected string annotation argument"),
            }
            self.sym(")")?;
        }
        Ok((name, arg))
    }

    fn member(&mut self, j: &mut JavaAst) -> Result<(), JavaParseError> {
        let mut pic = None;
        let mut external = None;
        while self.is_sym("@") {
            let (name, arg) = self.annotation()?;
            match name.as_str() {
                "Pic" => pic = arg,
                "External" => external = Some(arg.unwrap_or_default()),
                _ => {}
            }
        }
        while matches!(self.peek(), Some(Tok::Ident(m)) if MODIFIERS.contains(&m.as_str())) {
            self.pos += 1;
        }
        let ty = self.ident()?;
        let name = self.ident()?;
        if self.eat_sym("(") {
            let mut params = Vec::new();
            while !self.eat_sym(")") {
                self.ident()?;
                self.eat_sym("...");
                params.push(self.ident()?);
                if !self.is_sym(")") {
                    self.sym(",")?;
                }
            }
            self.sym("{")?;
            let body = self.block_rest()?;
            if ty != "void" {
                return self.err("methods must return void");
            }
            let implicit = external.is_none() && body.is_empty() && name.starts_with("prog_");
            if let Some(program) = external.or_else(|| implicit.then(|| name["prog_".len()..].to_string())) {
                j.externals.push(External { method: name, program });
            } else {
                let params = if params == ["args"] { Vec::new() } else { params };
                j.methods.push(JMethod { name, params, body });
            }
            return Ok(());
        }
        let jtype = field_type(&ty).map_or_else(|| self.err(format!("unsupported field type {ty}")), Ok)?;
        let initial = if self.eat_sym("=") {
            match self.expr()? {
                JExpr::Lit(l) => l,
                _ => return self.err("field initializer must be a literal"),
            }
        } else {
            match jtype {
                JType::Long => JLit::Long(0),
                JType::Str => JLit::Str(String::new()),
            }
        };
        self.sym(";")?;
        let pic = match pic.as_deref().map(crate::cobol::parser::parse_picture) {
            Some(Some(p)) => p,
            Some(None) => return self.err("bad @Pic picture"),
            None => match &initial {
                JLit::Str(s) => Picture::Alnum(s.chars().count().max(1) as u32),
                JLit::Long(_) => Picture::Numeric(18),
            },
        };
        j.fields.push(JField { name, jtype, initial, pic });
        Ok(())
    }

    /// Statements up to the closing brace (already past the opening one).
    fn block_rest(&mut self) -> Result<Vec<JStmt>, JavaParseError> {
        let mut out = Vec::new();
        while !self.eat_sym("}") {
            if self.peek().is_none() {
                return self.err("unexpected end of block");
            }
            out.extend(self.statement()?);
        }
        Ok(out)
    }

    fn body(&mut self) -> Result<Vec<JStmt>, JavaParseError> {
        if self.eat_sym("{") {
            self.block_rest()
        } else {
            self.statement()
        }
    }

    fn paren_expr(&mut self) -> Result<JExpr, JavaParseError> {
        self.sym("(")?;
        let e = self.expr()?;
        self.sym(")")?;
        Ok(e)
    }

    fn statement(&mut self) -> Result<Vec<JStmt>, JavaParseError> {
        let Some(Tok::Ident(word)) = self.peek().cloned() else {
            if self.eat_sym(";") {
                return Ok(Vec::new());
            }
            return self.err("expected statement");
        };
        match word.as_str() {
            "if" => {
                self.pos += 1;
                let cond = self.paren_expr()?;
                let then_branch = self.body()?;
                let else_branch = if self.is_ident("else") {
                    self.pos += 1;
                    self.body()?
                } else {
                    Vec::new()
                };
                Ok(vec![JStmt::IfElse { cond, then_branch, else_branch }])
            }
            "while" => {
                self.pos += 1;
                let cond = self.paren_expr()?;
                Ok(vec![JStmt::While { cond, body: self.body()? }])
            }
            "do" => {
                self.pos += 1;
                let body = self.body()?;
                self.keyword("while")?;
                let cond = self.paren_expr()?;
                self.sym(";")?;
                Ok(vec![JStmt::DoWhile { body, cond }])
            }
            "for" => {
                self.pos += 1;
                self.sym("(")?;
                let init = if self.is_sym(";") { Vec::new() } else { self.simple_list()? };
                self.sym(";")?;
                let cond = self.expr()?;
                self.sym(";")?;
                let update = if self.is_sym(")") { Vec::new() } else { self.simple_list()? };
                self.sym(")")?;
                Ok(vec![JStmt::For { init, cond, update, body: self.body()? }])
            }
            "switch" => {
                self.pos += 1;
                let subject = self.paren_expr()?;
                self.sym("{")?;
                let mut cases = Vec::new();
                let mut default = None;
                loop {
                    if self.eat_sym("}") {
                        break;
                    }
                    let is_default = if self.is_ident("case") {
                        false
                    } else if self.is_ident("default") {
                        true
                    } else {
                        return self.err("expected case or default");
                    };
                    self.pos += 1;
                    let label = if is_default {
                        None
                    } else {
                        match self.expr()? {
                            JExpr::Lit(l) => Some(l),
                            _ => return self.err("case label must be a literal"),
                        }
                    };
                    self.sym(":")?;
                    let mut body = Vec::new();
                    while !(self.is_ident("case") || self.is_ident("default") || self.is_sym("}")) {
                        if self.peek().is_none() {
                            return self.err("unexpected end of switch");
                        }
                        body.extend(self.statement()?);
                    }
                    match label {
                        Some(label) => cases.push(SwitchCase { label, body }),
                        None => default = Some(body),
                    }
                }
                Ok(vec![JStmt::Switch { subject, cases, default }])
            }
            "return" => {
                self.pos += 1;
                self.sym(";")?;
                Ok(vec![JStmt::Return])
            }
            "break" => {
                self.pos += 1;
                self.sym(";")?;
                Ok(vec![JStmt::Break])
            }
            _ => {
                let s = self.simple_list()?;
                self.sym(";")?;
                Ok(s)
            }
        }
    }

    /// Comma-separated simple statements (declarations, assignments, calls).
    fn simple_list(&mut self) -> Result<Vec<JStmt>, JavaParseError> {
        let declare = match (self.peek(), self.peek_at(1)) {
            (Some(Tok::Ident(t)), Some(Tok::Ident(_))) => match field_type(t) {
                Some(jt) => {
                    self.pos += 1;
                    Some(jt)
                }
                None => return self.err(format!("unsupported local type {t}")),
            },
            _ => None,
        };
        let mut out = vec![self.simple(declare)?];
        while self.eat_sym(",") {
            out.push(self.simple(declare)?);
        }
        Ok(out)
    }

    fn simple(&mut self, declare: Option<JType>) -> Result<JStmt, JavaParseError> {
        let mut name = self.ident()?;
        if name == "this" && self.eat_sym(".") {
            name = self.ident()?;
        }
        if declare.is_some() {
            self.sym("=")?;
            return Ok(JStmt::Assign { target: name, value: self.expr()?, declare });
        }
        let compound = |op| {
            move |p: &mut P, name: String| -> Result<JStmt, JavaParseError> {
                let rhs = p.expr()?;
                Ok(JStmt::assign(name.clone(), JExpr::bin(op, JExpr::var(name), rhs)))
            }
        };
        if self.eat_sym("=") {
            return Ok(JStmt::assign(name, self.expr()?));
        }
        for (sym, op) in [("+=", JBinOp::Add), ("-=", JBinOp::Sub), ("*=", JBinOp::Mul), ("/=", JBinOp::Div)] {
            if self.eat_sym(sym) {
                return compound(op)(self, name);
            }
        }
        for (sym, op) in [("++", JBinOp::Add), ("--", JBinOp::Sub)] {
            if self.eat_sym(sym) {
                return Ok(JStmt::assign(name.clone(), JExpr::bin(op, JExpr::var(name), JExpr::long(1))));
            }
        }
        // dotted call targets: System.out.println, System.exit
        let mut path = name;
        while self.eat_sym(".") {
            path.push('.');
            path.push_str(&self.ident()?);
        }
        let args = self.args()?;
        Ok(match path.as_str() {
            "System.out.println" | "System.out.print" => JStmt::Print(print_args(args)),
            _ => match Builtin::from_name(&path) {
                Some(f) => JStmt::ExprStmt(JExpr::call(f, args)),
                None => JStmt::MethodCall { method: path, args },
            },
        })
    }

    fn args(&mut self) -> Result<Vec<JExpr>, JavaParseError> {
        self.sym("(")?;
        let mut args = Vec::new();
        while !self.eat_sym(")") {
            args.push(self.expr()?);
            if !self.is_sym(")") {
                self.sym(",")?;
            }
        }
        Ok(args)
    }

    fn expr(&mut self) -> Result<JExpr, JavaParseError> {
        let mut lhs = self.and()?;
        while self.eat_sym("||") {
            lhs = JExpr::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<JExpr, JavaParseError> {
        let mut lhs = self.comparison()?;
        while self.eat_sym("&&") {
            lhs = JExpr::And(Box::new(lhs), Box::new(self.comparison()?));
        }
        Ok(lhs)
    }

    fn comparison(&mut self) -> Result<JExpr, JavaParseError> {
        let lhs = self.additive()?;
        let op = [
            ("==", JCmpOp::Eq),
            ("!=", JCmpOp::Ne),
            ("<=", JCmpOp::Le),
            (">=", JCmpOp::Ge),
            ("<", JCmpOp::Lt),
            (">", JCmpOp::Gt),
        ]
        .into_iter()
        .find(|(s, _)| self.is_sym(s));
        match op {
            Some((s, op)) => {
                self.sym(s)?;
                Ok(JExpr::cmp(op, lhs, self.additive()?))
            }
            None => Ok(lhs),
        }
    }

    fn additive(&mut self) -> Result<JExpr, JavaParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_sym("+") {
                JBinOp::Add
            } else if self.eat_sym("-") {
                JBinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = JExpr::bin(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<JExpr, JavaParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_sym("*") {
                JBinOp::Mul
            } else if self.eat_sym("/") {
                JBinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = JExpr::bin(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<JExpr, JavaParseError> {
        if self.eat_sym("!") {
            return Ok(JExpr::not(self.unary()?));
        }
        if self.eat_sym("-") {
            if let Some(Tok::Long(v)) = self.peek().cloned() {
                self.pos += 1;
                return Ok(JExpr::long(v.wrapping_neg()));
            }
            return Ok(JExpr::bin(JBinOp::Sub, JExpr::long(0), self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<JExpr, JavaParseError> {
        match self.bump() {
            Some(Tok::Long(v)) if v >= 0 => Ok(JExpr::long(v)),
            Some(Tok::Long(_)) => self.err("integer literal out of range"),
            Some(Tok::Str(s)) => Ok(JExpr::str(s)),
            Some(Tok::Sym("(")) => {
                let e = self.expr()?;
                self.sym(")")?;
                Ok(e)
            }
            Some(Tok::Ident(mut name)) => {
                if name == "this" && self.eat_sym(".") {
                    name = self.ident()?;
                }
                while self.is_sym(".") {
                    self.pos += 1;
                    name.push('.');
                    name.push_str(&self.ident()?);
                }
                if !self.is_sym("(") {
                    return Ok(JExpr::Var(name));
                }
                let args = self.args()?;
                match name.as_str() {
                    "String.valueOf" | "Long.toString" => Ok(JExpr::call(Builtin::Str, args)),
                    _ => match Builtin::from_name(&name) {
                        Some(f) => Ok(JExpr::call(f, args)),
                        None => self.err(format!("unsupported call {name} in expression")),
                    },
                }
            }
            _ => {
                self.pos -= 1;
                self.err("expected expression")
            }
        }
    }
}

fn field_type(t: &str) -> Option<JType> {
    match t {
        "long" | "int" => Some(JType::Long),
        "String" => Some(JType::Str),
        _ => None,
    }
}

/// `"" + a + b` is the emitter's spelling of a multi-operand print.
fn print_args(mut args: Vec<JExpr>) -> Vec<JExpr> {
    if args.len() != 1 {
        return args;
    }
    let single = args.pop().expect("one argument");
    let mut terms = Vec::new();
    flatten_concat(&single, &mut terms);
    match terms.first() {
        Some(JExpr::Lit(JLit::Str(s))) if s.is_empty() && terms.len() >= 3 => terms.split_off(1),
        Some(JExpr::Lit(JLit::Str(_))) if terms.len() >= 2 => terms,
        _ => vec![single],
    }
}

fn flatten_concat(e: &JExpr, out: &mut Vec<JExpr>) {
    match e {
        JExpr::Binary { op: JBinOp::Add, lhs, rhs } => {
            flatten_concat(lhs, out);
            out.push((**rhs).clone());
        }
        other => out.push(other.clone()),
    }
}
