//! Recursive-descent parser for the COBOL subset.
//!
//! Scoped statements must be closed explicitly (`END-IF`, `END-EVALUATE`,
//! `END-PERFORM`); a period inside an open scope is an error. After an error
//! the parser skips to the next period and carries on, so one bad sentence
//! yields one error instead of rejecting the rest of the file.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use super::ast::*;
use super::lexer::{tokenize, LexError, Token, TokenKind};
use super::source::SourceFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scope {
    If,
    Evaluate,
    Perform,
}

impl Scope {
    pub fn terminator(self) -> &'static str {
        match self {
            Scope::If => "END-IF",
            Scope::Evaluate => "END-EVALUATE",
            Scope::Perform => "END-PERFORM",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ParseErrorKind {
    Syntax,
    /// A scope was still open at a sentence boundary.
    UnclosedScope(Scope),
    /// A sentence was not terminated before a paragraph header or end of input.
    MissingPeriod,
    UnresolvedParagraph(String),
    DuplicateName(String),
    InvalidLiteral,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("parse error at line {line}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    /// Byte offset in the normalized text where a fix would be inserted.
    pub offset: usize,
    pub expected: String,
    pub found: String,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("{} parse error(s); first: {}", .0.len(), .0[0])]
    Parse(Vec<ParseError>),
}

pub fn parse_source(file: &SourceFile) -> Result<CobolAst, FrontError> {
    let tokens = tokenize(file)?;
    parse(&tokens).map_err(FrontError::Parse)
}

pub fn parse_str(text: &str) -> Result<CobolAst, FrontError> {
    parse_source(&SourceFile::new("<inline>", text))
}

pub fn parse(tokens: &[Token]) -> Result<CobolAst, Vec<ParseError>> {
    let mut p = Parser { tokens, pos: 0, errors: Vec::new() };
    let ast = p.program();
    match ast {
        Some(ast) if p.errors.is_empty() => {
            let errs = validate(&ast);
            if errs.is_empty() {
                Ok(ast)
            } else {
                Err(errs)
            }
        }
        _ => Err(p.errors),
    }
}

type PResult<T> = Result<T, ParseError>;

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    errors: Vec<ParseError>,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, ahead: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + ahead)
    }

    fn bump(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_offset(&self) -> usize {
        self.tokens.last().map_or(0, |t| t.offset + t.len)
    }

    fn prev_end(&self) -> usize {
        self.pos.checked_sub(1).and_then(|p| self.tokens.get(p)).map_or(0, |t| t.offset + t.len)
    }

    fn err(&self, expected: impl Into<String>, kind: ParseErrorKind) -> ParseError {
        match self.peek() {
            Some(t) => ParseError {
                line: t.line,
                col: t.col,
                offset: t.offset,
                expected: expected.into(),
                found: t.text.clone(),
                kind,
            },
            None => {
                let (line, col) = self.tokens.last().map_or((1, 1), |t| (t.line, t.col + t.len as u32));
                ParseError {
                    line,
                    col,
                    offset: self.end_offset(),
                    expected: expected.into(),
                    found: "end of input".into(),
                    kind,
                }
            }
        }
    }

    fn syntax(&self, expected: impl Into<String>) -> ParseError {
        self.err(expected, ParseErrorKind::Syntax)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(kw))
    }

    fn at_kind(&self, kind: TokenKind) -> bool {
        self.peek().is_some_and(|t| t.kind == kind)
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<&'t Token> {
        if self.at_keyword(kw) {
            Ok(self.bump().expect("checked"))
        } else {
            Err(self.syntax(kw))
        }
    }

    fn expect_period(&mut self) -> PResult<()> {
        if self.at_kind(TokenKind::Period) {
            self.bump();
            Ok(())
        } else if self.peek().is_none() {
            let mut e = self.err("'.'", ParseErrorKind::MissingPeriod);
            e.offset = self.prev_end();
            Err(e)
        } else {
            Err(self.syntax("'.'"))
        }
    }

    fn expect_name(&mut self) -> PResult<(String, u32)> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                self.bump();
                Ok((t.text.clone(), t.line))
            }
            _ => Err(self.syntax("identifier")),
        }
    }

    /// An identifier immediately followed by a period at statement position.
    fn at_paragraph_header(&self) -> bool {
        self.at_kind(TokenKind::Identifier)
            && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Period)
    }

    fn skip_past_period(&mut self) {
        while let Some(t) = self.bump() {
            if t.kind == TokenKind::Period {
                break;
            }
        }
    }

    fn program(&mut self) -> Option<CobolAst> {
        let header = (|| -> PResult<String> {
            self.expect_keyword("IDENTIFICATION")?;
            self.expect_keyword("DIVISION")?;
            self.expect_period()?;
            self.expect_keyword("PROGRAM-ID")?;
            self.expect_period()?;
            let (name, _) = self.expect_name()?;
            self.expect_period()?;
            Ok(name)
        })();
        let program_id = match header {
            Ok(n) => n,
            Err(e) => {
                self.errors.push(e);
                return None;
            }
        };
        let mut ast = CobolAst::new(program_id);

        if self.at_keyword("DATA") {
            let r = (|| -> PResult<()> {
                self.bump();
                self.expect_keyword("DIVISION")?;
                self.expect_period()?;
                if self.at_keyword("WORKING-STORAGE") {
                    self.bump();
                    self.expect_keyword("SECTION")?;
                    self.expect_period()?;
                }
                Ok(())
            })();
            if let Err(e) = r {
                self.errors.push(e);
                return None;
            }
            ast.data_items = self.data_items();
        }

        let r = (|| -> PResult<()> {
            self.expect_keyword("PROCEDURE")?;
            self.expect_keyword("DIVISION")?;
            self.expect_period()
        })();
        if let Err(e) = r {
            self.errors.push(e);
            return None;
        }
        ast.paragraphs = self.paragraphs();
        Some(ast)
    }

    fn data_items(&mut self) -> Vec<DataItem> {
        // flat list of (level, item) then folded into a tree by level numbers
        let mut flat: Vec<DataItem> = Vec::new();
        while self.at_kind(TokenKind::IntLiteral) {
            match self.data_item() {
                Ok(item) => flat.push(item),
                Err(e) => {
                    self.errors.push(e);
                    self.skip_past_period();
                }
            }
        }
        let mut roots: Vec<DataItem> = Vec::new();
        let mut stack: Vec<DataItem> = Vec::new();
        for item in flat {
            while let Some(top) = stack.last() {
                if item.level == 77 || top.level >= item.level || top.picture.is_some() {
                    let done = stack.pop().expect("nonempty");
                    attach(&mut stack, &mut roots, done);
                } else {
                    break;
                }
            }
            stack.push(item);
        }
        while let Some(done) = stack.pop() {
            attach(&mut stack, &mut roots, done);
        }
        for item in &roots {
            check_groups(item, &mut self.errors);
        }
        roots
    }

    fn data_item(&mut self) -> PResult<DataItem> {
        let tok = self.bump().expect("level token");
        let level: u8 = tok.text.parse().ok().filter(|l| (1..=49).contains(l) || *l == 77).ok_or_else(|| {
            ParseError {
                line: tok.line,
                col: tok.col,
                offset: tok.offset,
                expected: "level number 01-49 or 77".into(),
                found: tok.text.clone(),
                kind: ParseErrorKind::InvalidLiteral,
            }
        })?;
        let (name, line) = self.expect_name()?;
        let mut picture = None;
        if self.at_keyword("PIC") || self.at_keyword("PICTURE") {
            self.bump();
            if self.at_keyword("IS") {
                self.bump();
            }
            let t = match self.peek() {
                Some(t) if t.kind == TokenKind::PictureClause => t,
                _ => return Err(self.syntax("picture string")),
            };
            picture = Some(parse_picture(&t.text).ok_or_else(|| {
                let mut e = self.err("picture 9(n) or X(n)", ParseErrorKind::InvalidLiteral);
                e.found = t.text.clone();
                e
            })?);
            self.bump();
        }
        let mut initial = None;
        if self.at_keyword("VALUE") {
            self.bump();
            if self.at_keyword("IS") {
                self.bump();
            }
            let lit = match self.operand()? {
                Operand::Lit(l) => l,
                Operand::Name(_) => return Err(self.syntax("literal")),
            };
            let ok = match (&picture, &lit) {
                (Some(Picture::Numeric(_)), Literal::Int(_)) => true,
                (Some(Picture::Alnum(_)), Literal::Str(_)) => true,
                _ => false,
            };
            if !ok {
                let mut e = self.err("VALUE matching the PICTURE", ParseErrorKind::InvalidLiteral);
                e.line = line;
                return Err(e);
            }
            initial = Some(lit);
        }
        if level == 77 && picture.is_none() {
            return Err(self.syntax("PIC for level-77 item"));
        }
        self.expect_period()?;
        Ok(DataItem { level, name, picture, initial, children: Vec::new(), line })
    }

    fn paragraphs(&mut self) -> Vec<Paragraph> {
        let mut paras: Vec<Paragraph> = Vec::new();
        // whether the previous statement closed its sentence
        let mut terminated = true;
        while let Some(tok) = self.peek() {
            if self.at_paragraph_header() {
                if !terminated {
                    let mut e = self.err("'.'", ParseErrorKind::MissingPeriod);
                    e.offset = self.prev_end();
                    self.errors.push(e);
                }
                self.bump();
                self.bump();
                paras.push(Paragraph { name: tok.text.clone(), statements: Vec::new(), line: tok.line });
                terminated = true;
                continue;
            }
            if tok.kind == TokenKind::Period {
                self.bump();
                terminated = true;
                continue;
            }
            if paras.is_empty() {
                self.errors.push(self.syntax("paragraph name"));
                self.skip_past_period();
                continue;
            }
            match self.statement() {
                Ok(s) => {
                    paras.last_mut().expect("nonempty").statements.push(s);
                    terminated = false;
                    if self.at_kind(TokenKind::Period) {
                        self.bump();
                        terminated = true;
                    }
                }
                Err(e) => {
                    let at_period = self.at_kind(TokenKind::Period);
                    self.errors.push(e);
                    if at_period {
                        self.bump();
                    } else {
                        self.skip_past_period();
                    }
                    terminated = true;
                }
            }
        }
        if !terminated {
            let mut e = self.err("'.'", ParseErrorKind::MissingPeriod);
            e.offset = self.prev_end();
            self.errors.push(e);
        }
        paras
    }

    /// Statements up to (not including) one of the `stops` keywords.
    fn block(&mut self, scope: Scope, stops: &[&str]) -> PResult<Vec<Statement>> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None => return Err(self.err(scope.terminator(), ParseErrorKind::UnclosedScope(scope))),
                Some(t) if t.kind == TokenKind::Period => {
                    return Err(self.err(scope.terminator(), ParseErrorKind::UnclosedScope(scope)))
                }
                Some(t) if t.kind == TokenKind::Keyword && stops.contains(&t.text.as_str()) => return Ok(out),
                Some(_) if self.at_paragraph_header() => {
                    return Err(self.err(scope.terminator(), ParseErrorKind::UnclosedScope(scope)))
                }
                Some(_) => out.push(self.statement()?),
            }
        }
    }

    fn nonempty(&self, body: &[Statement], what: &str) -> PResult<()> {
        if body.is_empty() {
            Err(self.syntax(format!("at least one statement in {what}")))
        } else {
            Ok(())
        }
    }

    fn statement(&mut self) -> PResult<Statement> {
        let tok = match self.peek() {
            Some(t) if t.kind == TokenKind::Keyword => t,
            _ => return Err(self.syntax("statement")),
        };
        let line = tok.line;
        self.bump();
        let kind = match tok.text.as_str() {
            "MOVE" => {
                let src = self.operand()?;
                self.expect_keyword("TO")?;
                let (dst, _) = self.expect_name()?;
                StatementKind::Move { src, dst }
            }
            "COMPUTE" => {
                let (dst, _) = self.expect_name()?;
                if !self.peek().is_some_and(|t| t.is_operator("=")) {
                    return Err(self.syntax("'='"));
                }
                self.bump();
                let expr = self.expr()?;
                StatementKind::Compute { dst, expr }
            }
            "ADD" | "SUBTRACT" | "MULTIPLY" | "DIVIDE" => {
                let verb = match tok.text.as_str() {
                    "ADD" => ArithVerb::Add,
                    "SUBTRACT" => ArithVerb::Subtract,
                    "MULTIPLY" => ArithVerb::Multiply,
                    _ => ArithVerb::Divide,
                };
                let operand = self.operand()?;
                self.expect_keyword(verb.preposition())?;
                let target = self.operand()?;
                let giving = if self.at_keyword("GIVING") {
                    self.bump();
                    Some(self.expect_name()?.0)
                } else {
                    None
                };
                if giving.is_none() && !matches!(target, Operand::Name(_)) {
                    return Err(self.syntax("GIVING for a literal target"));
                }
                StatementKind::Arith { verb, operand, target, giving }
            }
            "IF" => {
                let cond = self.condition()?;
                if self.at_keyword("THEN") {
                    self.bump();
                }
                let then_branch = self.block(Scope::If, &["ELSE", "END-IF"])?;
                self.nonempty(&then_branch, "IF")?;
                let else_branch = if self.at_keyword("ELSE") {
                    self.bump();
                    let b = self.block(Scope::If, &["END-IF"])?;
                    self.nonempty(&b, "ELSE")?;
                    b
                } else {
                    Vec::new()
                };
                self.expect_keyword("END-IF")?;
                StatementKind::If { cond, then_branch, else_branch }
            }
            "EVALUATE" => {
                let (subject, _) = self.expect_name()?;
                let mut arms = Vec::new();
                while self.at_keyword("WHEN") {
                    self.bump();
                    let label = if self.at_keyword("OTHER") {
                        self.bump();
                        WhenLabel::Other
                    } else {
                        match self.operand()? {
                            Operand::Lit(l) => WhenLabel::Lit(l),
                            Operand::Name(_) => return Err(self.syntax("literal or OTHER")),
                        }
                    };
                    if arms.last().is_some_and(|a: &WhenArm| a.label == WhenLabel::Other) {
                        return Err(self.syntax("END-EVALUATE after WHEN OTHER"));
                    }
                    let body = self.block(Scope::Evaluate, &["WHEN", "END-EVALUATE"])?;
                    self.nonempty(&body, "WHEN")?;
                    arms.push(WhenArm { label, body });
                }
                if arms.is_empty() {
                    return Err(self.syntax("WHEN"));
                }
                self.expect_keyword("END-EVALUATE")?;
                StatementKind::Evaluate { subject, arms }
            }
            "PERFORM" => self.perform()?,
            "DISPLAY" => {
                let mut operands = Vec::new();
                while self.peek().is_some_and(|t| {
                    matches!(t.kind, TokenKind::Identifier | TokenKind::IntLiteral | TokenKind::StringLiteral)
                }) {
                    operands.push(self.operand()?);
                }
                if operands.is_empty() {
                    return Err(self.syntax("DISPLAY operand"));
                }
                StatementKind::Display { operands }
            }
            "ACCEPT" => StatementKind::Accept { dst: self.expect_name()?.0 },
            "CALL" => {
                let program = match self.peek() {
                    Some(t) if t.kind == TokenKind::StringLiteral => {
                        self.bump();
                        t.string_value().unwrap_or_default()
                    }
                    _ => return Err(self.syntax("program name literal")),
                };
                let mut using = Vec::new();
                if self.at_keyword("USING") {
                    self.bump();
                    while self.at_kind(TokenKind::Identifier) {
                        using.push(self.expect_name()?.0);
                    }
                    if using.is_empty() {
                        return Err(self.syntax("USING argument"));
                    }
                }
                StatementKind::Call { program, using }
            }
            "GO" => {
                self.expect_keyword("TO")?;
                StatementKind::GoTo { target: self.expect_name()?.0 }
            }
            "STOP" => {
                self.expect_keyword("RUN")?;
                StatementKind::StopRun
            }
            _ => {
                self.pos -= 1;
                return Err(self.syntax("statement"));
            }
        };
        Ok(Statement { kind, line })
    }

    fn perform(&mut self) -> PResult<StatementKind> {
        if self.at_keyword("VARYING") {
            self.bump();
            let (var, _) = self.expect_name()?;
            self.expect_keyword("FROM")?;
            let from = self.operand()?;
            self.expect_keyword("BY")?;
            let by = self.operand()?;
            self.expect_keyword("UNTIL")?;
            let until = self.condition()?;
            let body = self.block(Scope::Perform, &["END-PERFORM"])?;
            self.nonempty(&body, "PERFORM VARYING")?;
            self.expect_keyword("END-PERFORM")?;
            return Ok(StatementKind::PerformVarying { body, var, from, by, until });
        }
        if self.at_keyword("UNTIL") {
            self.bump();
            let cond = self.condition()?;
            let body = self.block(Scope::Perform, &["END-PERFORM"])?;
            self.nonempty(&body, "PERFORM UNTIL")?;
            self.expect_keyword("END-PERFORM")?;
            return Ok(StatementKind::PerformUntil { body, cond });
        }
        let times_next = self.peek_at(1).is_some_and(|t| t.is_keyword("TIMES"));
        if self.at_kind(TokenKind::IntLiteral) || (self.at_kind(TokenKind::Identifier) && times_next) {
            let count = self.operand()?;
            self.expect_keyword("TIMES")?;
            let body = self.block(Scope::Perform, &["END-PERFORM"])?;
            self.nonempty(&body, "PERFORM TIMES")?;
            self.expect_keyword("END-PERFORM")?;
            return Ok(StatementKind::PerformTimes { body: PerformBody::Inline(body), count });
        }
        let (target, _) = self.expect_name()?;
        let counted = matches!(self.peek().map(|t| t.kind), Some(TokenKind::IntLiteral | TokenKind::Identifier))
            && self.peek_at(1).is_some_and(|t| t.is_keyword("TIMES"));
        if counted {
            let count = self.operand()?;
            self.bump();
            return Ok(StatementKind::PerformTimes { body: PerformBody::Paragraph(target), count });
        }
        Ok(StatementKind::PerformPara { target })
    }

    fn operand(&mut self) -> PResult<Operand> {
        let t = match self.peek() {
            Some(t) => t,
            None => return Err(self.syntax("operand")),
        };
        let op = match t.kind {
            TokenKind::Identifier => Operand::Name(t.text.clone()),
            TokenKind::IntLiteral => match t.text.parse::<i64>() {
                Ok(v) => Operand::Lit(Literal::Int(v)),
                Err(_) => return Err(self.err("64-bit integer literal", ParseErrorKind::InvalidLiteral)),
            },
            TokenKind::StringLiteral => Operand::Lit(Literal::Str(t.string_value().unwrap_or_default())),
            _ => return Err(self.syntax("operand")),
        };
        self.bump();
        Ok(op)
    }

    fn condition(&mut self) -> PResult<Condition> {
        let mut lhs = self.and_condition()?;
        while self.at_keyword("OR") {
            self.bump();
            let rhs = self.and_condition()?;
            lhs = Condition::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and_condition(&mut self) -> PResult<Condition> {
        let mut lhs = self.not_condition()?;
        while self.at_keyword("AND") {
            self.bump();
            let rhs = self.not_condition()?;
            lhs = Condition::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn not_condition(&mut self) -> PResult<Condition> {
        if self.at_keyword("NOT") {
            self.bump();
            return Ok(Condition::Not(Box::new(self.not_condition()?)));
        }
        if self.at_kind(TokenKind::Lparen) {
            self.bump();
            let c = self.condition()?;
            if !self.at_kind(TokenKind::Rparen) {
                return Err(self.syntax("')'"));
            }
            self.bump();
            return Ok(c);
        }
        let lhs = self.operand()?;
        let op = match self.peek() {
            Some(t) if t.kind == TokenKind::Operator => CmpOp::from_symbol(&t.text),
            _ => None,
        }
        .ok_or_else(|| self.syntax("comparison operator"))?;
        self.bump();
        let rhs = self.operand()?;
        Ok(Condition::Compare { op, lhs, rhs })
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(t) if t.is_operator("+") => ArithOp::Add,
                Some(t) if t.is_operator("-") => ArithOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(t) if t.is_operator("*") => ArithOp::Mul,
                Some(t) if t.is_operator("/") => ArithOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> PResult<Expr> {
        if self.at_kind(TokenKind::Lparen) {
            self.bump();
            let e = self.expr()?;
            if !self.at_kind(TokenKind::Rparen) {
                return Err(self.syntax("')'"));
            }
            self.bump();
            return Ok(e);
        }
        match self.operand()? {
            o @ (Operand::Name(_) | Operand::Lit(Literal::Int(_))) => Ok(Expr::Operand(o)),
            Operand::Lit(Literal::Str(_)) => Err(self.syntax("numeric operand")),
        }
    }
}

fn attach(stack: &mut [DataItem], roots: &mut Vec<DataItem>, item: DataItem) {
    match stack.last_mut() {
        Some(parent) => parent.children.push(item),
        None => roots.push(item),
    }
}

fn check_groups(item: &DataItem, errors: &mut Vec<ParseError>) {
    if item.picture.is_none() && item.children.is_empty() {
        errors.push(ParseError {
            line: item.line,
            col: 1,
            offset: 0,
            expected: "PIC clause or subordinate items".into(),
            found: item.name.clone(),
            kind: ParseErrorKind::Syntax,
        });
    }
    if item.picture.is_none() && item.initial.is_some() {
        errors.push(ParseError {
            line: item.line,
            col: 1,
            offset: 0,
            expected: "no VALUE on a group item".into(),
            found: item.name.clone(),
            kind: ParseErrorKind::Syntax,
        });
    }
    for c in &item.children {
        check_groups(c, errors);
    }
}

pub fn parse_picture(text: &str) -> Option<Picture> {
    let text = text.to_ascii_uppercase();
    let symbol = text.chars().next()?;
    if symbol != '9' && symbol != 'X' {
        return None;
    }
    let width = if let Some(rest) = text.strip_prefix(symbol).and_then(|r| r.strip_prefix('(')) {
        let digits = rest.strip_suffix(')')?;
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        digits.parse::<u32>().ok()?
    } else {
        if !text.chars().all(|c| c == symbol) {
            return None;
        }
        text.len() as u32
    };
    if width == 0 || width > 4096 {
        return None;
    }
    Some(if symbol == '9' { Picture::Numeric(width) } else { Picture::Alnum(width) })
}

/// Name resolution: paragraph and data names unique, jump targets declared.
fn validate(ast: &CobolAst) -> Vec<ParseError> {
    let mut errors = Vec::new();
    let mut seen = HashSet::new();
    for p in &ast.paragraphs {
        if !seen.insert(p.name.as_str()) {
            errors.push(name_error(p.line, &p.name, ParseErrorKind::DuplicateName(p.name.clone())));
        }
    }
    let mut data = HashSet::new();
    for d in ast.all_data_items() {
        if !data.insert(d.name.as_str()) {
            errors.push(name_error(d.line, &d.name, ParseErrorKind::DuplicateName(d.name.clone())));
        }
    }
    ast.for_each_statement(|s| {
        let target = match &s.kind {
            StatementKind::PerformPara { target }
            | StatementKind::GoTo { target }
            | StatementKind::PerformTimes { body: PerformBody::Paragraph(target), .. } => target,
            _ => return,
        };
        if !seen.contains(target.as_str()) {
            errors.push(name_error(s.line, target, ParseErrorKind::UnresolvedParagraph(target.clone())));
        }
    });
    errors
}

fn name_error(line: u32, name: &str, kind: ParseErrorKind) -> ParseError {
    ParseError { line, col: 1, offset: 0, expected: "declared, unique name".into(), found: name.into(), kind }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T1: &str = "IDENTIFICATION DIVISION. PROGRAM-ID. T1. PROCEDURE DIVISION. MAIN. MOVE 1 TO A. STOP RUN.";

    #[test]
    fn minimal_program() {
        let ast = parse_str(T1).unwrap();
        let expected = CobolAst {
            program_id: "T1".into(),
            data_items: vec![],
            paragraphs: vec![Paragraph::new(
                "MAIN",
                vec![
                    StatementKind::Move { src: Operand::int(1), dst: "A".into() }.into(),
                    StatementKind::StopRun.into(),
                ],
            )],
        };
        assert_eq!(ast, expected);
        assert_eq!(ast.paragraphs[0].statements[0].line, 1);
    }

    #[test]
    fn unresolved_perform_target() {
        let src = "IDENTIFICATION DIVISION. PROGRAM-ID. T. PROCEDURE DIVISION. MAIN. PERFORM NOPARA.";
        match parse_str(src) {
            Err(FrontError::Parse(errs)) => {
                assert_eq!(errs[0].kind, ParseErrorKind::UnresolvedParagraph("NOPARA".into()))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nested_if_with_end_ifs() {
        let src = "IDENTIFICATION DIVISION. PROGRAM-ID. T. PROCEDURE DIVISION. MAIN.
            IF A > 1 IF B = 2 DISPLAY 'X' END-IF ELSE DISPLAY 'Y' END-IF.";
        let ast = parse_str(src).unwrap();
        let inner: Statement = StatementKind::If {
            cond: Condition::compare(Operand::name("B"), CmpOp::Eq, Operand::int(2)),
            then_branch: vec![StatementKind::Display { operands: vec![Operand::str("X")] }.into()],
            else_branch: vec![],
        }
        .into();
        let outer = StatementKind::If {
            cond: Condition::compare(Operand::name("A"), CmpOp::Gt, Operand::int(1)),
            then_branch: vec![inner],
            else_branch: vec![StatementKind::Display { operands: vec![Operand::str("Y")] }.into()],
        };
        assert_eq!(ast.paragraphs[0].statements, vec![Statement::from(outer)]);
    }

    #[test]
    fn period_inside_if_reports_unclosed_scope_at_the_period() {
        let src = "IDENTIFICATION DIVISION. PROGRAM-ID. T. PROCEDURE DIVISION. MAIN. IF A > 1 DISPLAY 'X'.";
        let Err(FrontError::Parse(errs)) = parse_str(src) else { panic!() };
        assert_eq!(errs[0].kind, ParseErrorKind::UnclosedScope(Scope::If));
        assert_eq!(errs[0].offset, src.len() - 1);
    }

    #[test]
    fn recovery_reports_each_bad_sentence() {
        let src = "IDENTIFICATION DIVISION. PROGRAM-ID. T. PROCEDURE DIVISION. MAIN.
            MOVE TO A. DISPLAY 'OK'. ADD 1 B. DISPLAY 'OK2'.";
        let Err(FrontError::Parse(errs)) = parse_str(src) else { panic!() };
        assert_eq!(errs.len(), 2);
    }

    #[test]
    fn data_division_groups() {
        let src = "IDENTIFICATION DIVISION. PROGRAM-ID. T. DATA DIVISION. WORKING-STORAGE SECTION.
            01 WS-REC. 05 WS-NAME PIC X(5) VALUE 'AB'. 05 WS-AGE PIC 999.
            77 WS-N PIC 9(4) VALUE 10.
            PROCEDURE DIVISION. MAIN. STOP RUN.";
        let ast = parse_str(src).unwrap();
        assert_eq!(ast.data_items.len(), 2);
        let rec = &ast.data_items[0];
        assert!(rec.is_group());
        assert_eq!(rec.children.len(), 2);
        assert_eq!(rec.children[1].picture, Some(Picture::Numeric(3)));
        assert_eq!(ast.data_items[1].initial, Some(Literal::Int(10)));
    }

    #[test]
    fn empty_group_is_rejected() {
        let src = "IDENTIFICATION DIVISION. PROGRAM-ID. T. DATA DIVISION. WORKING-STORAGE SECTION.
            01 WS-REC. PROCEDURE DIVISION. MAIN. STOP RUN.";
        assert!(parse_str(src).is_err());
    }

    #[test]
    fn perform_forms() {
        let src = "IDENTIFICATION DIVISION. PROGRAM-ID. T. PROCEDURE DIVISION. MAIN.
            PERFORM SUB. PERFORM SUB 3 TIMES. PERFORM N TIMES DISPLAY 'A' END-PERFORM.
            PERFORM UNTIL I > 3 ADD 1 TO I END-PERFORM.
            PERFORM VARYING I FROM 1 BY 1 UNTIL I > 3 DISPLAY I END-PERFORM.
            STOP RUN.
            SUB. DISPLAY 'S'.";
        let ast = parse_str(src).unwrap();
        let kinds: Vec<_> = ast.paragraphs[0].statements.iter().map(|s| crate::cobol::NodeKind::of(&s.kind)).collect();
        use crate::cobol::NodeKind::*;
        assert_eq!(kinds, vec![PerformPara, PerformTimes, PerformTimes, PerformUntil, PerformVarying, StopRun]);
    }

    #[test]
    fn expression_precedence() {
        let src = "IDENTIFICATION DIVISION. PROGRAM-ID. T. PROCEDURE DIVISION. MAIN. COMPUTE X = A + B * (C - 1).";
        let ast = parse_str(src).unwrap();
        let StatementKind::Compute { expr, .. } = &ast.paragraphs[0].statements[0].kind else { panic!() };
        let Expr::Binary { op: ArithOp::Add, rhs, .. } = expr else { panic!() };
        assert!(matches!(**rhs, Expr::Binary { op: ArithOp::Mul, .. }));
    }

    #[test]
    fn missing_final_period() {
        let src = "IDENTIFICATION DIVISION. PROGRAM-ID. T. PROCEDURE DIVISION. MAIN. STOP RUN";
        let Err(FrontError::Parse(errs)) = parse_str(src) else { panic!() };
        assert_eq!(errs[0].kind, ParseErrorKind::MissingPeriod);
        assert_eq!(errs[0].offset, src.len());
    }

    #[test]
    fn pictures() {
        assert_eq!(parse_picture("9(4)"), Some(Picture::Numeric(4)));
        assert_eq!(parse_picture("XXX"), Some(Picture::Alnum(3)));
        assert_eq!(parse_picture("x(2)"), Some(Picture::Alnum(2)));
        assert_eq!(parse_picture("9X"), None);
        assert_eq!(parse_picture("9(0)"), None);
    }
}
