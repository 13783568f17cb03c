//! Canonical COBOL text for an AST. Every top-level statement is its own
//! sentence; nested blocks are indented four spaces per level.

use std::fmt::Write;

use super::ast::*;

pub fn pretty_print(ast: &CobolAst) -> String {
    let mut out = String::new();
    out.push_str("IDENTIFICATION DIVISION.\n");
    let _ = writeln!(out, "PROGRAM-ID. {}.", ast.program_id);
    if !ast.data_items.is_empty() {
        out.push_str("DATA DIVISION.\nWORKING-STORAGE SECTION.\n");
        for item in &ast.data_items {
            data_item(&mut out, item, 0);
        }
    }
    out.push_str("PROCEDURE DIVISION.\n");
    for p in &ast.paragraphs {
        let _ = writeln!(out, "{}.", p.name);
        for s in &p.statements {
            statement(&mut out, s, 1);
            out.push_str(".\n");
        }
    }
    out
}

fn data_item(out: &mut String, item: &DataItem, depth: usize) {
    indent(out, depth);
    let _ = write!(out, "{:02} {}", item.level, item.name);
    if let Some(p) = item.picture {
        let _ = write!(out, " PIC {p}");
    }
    if let Some(v) = &item.initial {
        let _ = write!(out, " VALUE {}", literal(v));
    }
    out.push_str(".\n");
    for c in &item.children {
        data_item(out, c, depth + 1);
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("    ");
    }
}

pub fn literal(l: &Literal) -> String {
    match l {
        Literal::Int(v) => v.to_string(),
        Literal::Str(s) => format!("'{}'", s.replace('\'', "''")),
    }
}

pub fn operand(o: &Operand) -> String {
    match o {
        Operand::Name(n) => n.clone(),
        Operand::Lit(l) => literal(l),
    }
}

pub fn expr(e: &Expr) -> String {
    match e {
        Expr::Operand(o) => operand(o),
        Expr::Binary { op, lhs, rhs } => {
            let wrap = |child: &Expr, strict: bool| {
                let text = expr(child);
                match child {
                    Expr::Binary { op: c, .. }
                        if c.precedence() < op.precedence() || (strict && c.precedence() == op.precedence()) =>
                    {
                        format!("({text})")
                    }
                    _ => text,
                }
            };
            format!("{} {} {}", wrap(lhs, false), op.symbol(), wrap(rhs, true))
        }
    }
}

fn cond_prec(c: &Condition) -> u8 {
    match c {
        Condition::Or(..) => 1,
        Condition::And(..) => 2,
        Condition::Not(_) => 3,
        Condition::Compare { .. } => 4,
    }
}

pub fn condition(c: &Condition) -> String {
    let wrap = |child: &Condition, min: u8| {
        let text = condition(child);
        if cond_prec(child) < min {
            format!("({text})")
        } else {
            text
        }
    };
    match c {
        Condition::Compare { op, lhs, rhs } => format!("{} {} {}", operand(lhs), op.symbol(), operand(rhs)),
        Condition::Or(a, b) => format!("{} OR {}", wrap(a, 1), wrap(b, 2)),
        Condition::And(a, b) => format!("{} AND {}", wrap(a, 2), wrap(b, 3)),
        Condition::Not(x) => format!("NOT {}", wrap(x, 3)),
    }
}

fn block(out: &mut String, stmts: &[Statement], depth: usize) {
    for s in stmts {
        statement(out, s, depth);
        out.push('\n');
    }
}

/// Writes one statement without its terminating period or newline.
fn statement(out: &mut String, s: &Statement, depth: usize) {
    indent(out, depth);
    match &s.kind {
        StatementKind::Move { src, dst } => {
            let _ = write!(out, "MOVE {} TO {dst}", operand(src));
        }
        StatementKind::Compute { dst, expr: e } => {
            let _ = write!(out, "COMPUTE {dst} = {}", expr(e));
        }
        StatementKind::Arith { verb, operand: a, target, giving } => {
            let _ = write!(out, "{} {} {} {}", verb.keyword(), operand(a), verb.preposition(), operand(target));
            if let Some(g) = giving {
                let _ = write!(out, " GIVING {g}");
            }
        }
        StatementKind::If { cond, then_branch, else_branch } => {
            let _ = writeln!(out, "IF {}", condition(cond));
            block(out, then_branch, depth + 1);
            if !else_branch.is_empty() {
                indent(out, depth);
                out.push_str("ELSE\n");
                block(out, else_branch, depth + 1);
            }
            indent(out, depth);
            out.push_str("END-IF");
        }
        StatementKind::Evaluate { subject, arms } => {
            let _ = writeln!(out, "EVALUATE {subject}");
            for arm in arms {
                indent(out, depth + 1);
                match &arm.label {
                    WhenLabel::Lit(l) => {
                        let _ = writeln!(out, "WHEN {}", literal(l));
                    }
                    WhenLabel::Other => out.push_str("WHEN OTHER\n"),
                }
                block(out, &arm.body, depth + 2);
            }
            indent(out, depth);
            out.push_str("END-EVALUATE");
        }
        StatementKind::PerformPara { target } => {
            let _ = write!(out, "PERFORM {target}");
        }
        StatementKind::PerformTimes { body: PerformBody::Paragraph(t), count } => {
            let _ = write!(out, "PERFORM {t} {} TIMES", operand(count));
        }
        StatementKind::PerformTimes { body: PerformBody::Inline(b), count } => {
            let _ = writeln!(out, "PERFORM {} TIMES", operand(count));
            block(out, b, depth + 1);
            indent(out, depth);
            out.push_str("END-PERFORM");
        }
        StatementKind::PerformUntil { body, cond } => {
            let _ = writeln!(out, "PERFORM UNTIL {}", condition(cond));
            block(out, body, depth + 1);
            indent(out, depth);
            out.push_str("END-PERFORM");
        }
        StatementKind::PerformVarying { body, var, from, by, until } => {
            let _ = writeln!(
                out,
                "PERFORM VARYING {var} FROM {} BY {} UNTIL {}",
                operand(from),
                operand(by),
                condition(until)
            );
            block(out, body, depth + 1);
            indent(out, depth);
            out.push_str("END-PERFORM");
        }
        StatementKind::Display { operands } => {
            out.push_str("DISPLAY");
            for o in operands {
                out.push(' ');
                out.push_str(&operand(o));
            }
        }
        StatementKind::Accept { dst } => {
            let _ = write!(out, "ACCEPT {dst}");
        }
        StatementKind::Call { program, using } => {
            let _ = write!(out, "CALL {}", literal(&Literal::Str(program.clone())));
            if !using.is_empty() {
                let _ = write!(out, " USING {}", using.join(" "));
            }
        }
        StatementKind::GoTo { target } => {
            let _ = write!(out, "GO TO {target}");
        }
        StatementKind::StopRun => out.push_str("STOP RUN"),
    }
}
