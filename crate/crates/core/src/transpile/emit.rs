//! Java source text: 4-space indent, one statement per line, braces always.

use std::fmt::Write;

use super::java::*;

pub const RUNTIME_BASE: &str = "CobolRuntime";

pub fn emit_java(j: &JavaAst) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "public class {} extends {RUNTIME_BASE} {{", j.class_name);
    let mut first = true;
    let mut gap = |out: &mut String| {
        if !first {
            out.push('\n');
        }
        first = false;
    };
    if !j.fields.is_empty() {
        gap(&mut out);
        for f in &j.fields {
            let _ = writeln!(
                out,
                "    @Pic(\"{}\") private {} {} = {};",
                f.pic,
                f.jtype.keyword(),
                f.name,
                lit(&f.initial)
            );
        }
    }
    for m in &j.methods {
        gap(&mut out);
        let vis = if m.name == JavaAst::ENTRY { "public" } else { "private" };
        let params: Vec<String> = m.params.iter().map(|p| format!("long {p}")).collect();
        let _ = writeln!(out, "    {vis} void {}({}) {{", m.name, params.join(", "));
        block(&mut out, &m.body, 2);
        out.push_str("    }\n");
    }
    for e in &j.externals {
        gap(&mut out);
        let _ = writeln!(
            out,
            "    @External({}) private void {}(Object... args) {{\n    }}",
            quote(&e.program),
            e.method
        );
    }
    out.push_str("}\n");
    out
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("    ");
    }
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn lit(l: &JLit) -> String {
    match l {
        JLit::Long(v) => v.to_string(),
        JLit::Str(s) => quote(s),
    }
}

fn prec(e: &JExpr) -> u8 {
    match e {
        JExpr::Or(..) => 1,
        JExpr::And(..) => 2,
        JExpr::Cmp { .. } => 3,
        JExpr::Binary { op: JBinOp::Add | JBinOp::Sub, .. } => 4,
        JExpr::Binary { .. } => 5,
        JExpr::Not(_) => 6,
        JExpr::Lit(JLit::Long(v)) if *v < 0 => 6,
        JExpr::Lit(_) | JExpr::Var(_) | JExpr::Builtin { .. } => 7,
    }
}

fn wrap(e: &JExpr, min: u8) -> String {
    let text = expr(e);
    if prec(e) < min {
        format!("({text})")
    } else {
        text
    }
}

pub fn expr(e: &JExpr) -> String {
    match e {
        JExpr::Lit(l) => lit(l),
        JExpr::Var(v) => v.clone(),
        JExpr::Binary { op, lhs, rhs } => {
            let p = prec(e);
            format!("{} {} {}", wrap(lhs, p), op.symbol(), wrap(rhs, p + 1))
        }
        JExpr::Cmp { op, lhs, rhs } => format!("{} {} {}", wrap(lhs, 4), op.symbol(), wrap(rhs, 4)),
        JExpr::And(a, b) => format!("{} && {}", wrap(a, 2), wrap(b, 3)),
        JExpr::Or(a, b) => format!("{} || {}", wrap(a, 1), wrap(b, 2)),
        JExpr::Not(x) => format!("!{}", wrap(x, 7)),
        JExpr::Builtin { f, args } => {
            let args: Vec<String> = args.iter().map(expr).collect();
            format!("{}({})", f.name(), args.join(", "))
        }
    }
}

fn simple(s: &JStmt) -> String {
    match s {
        JStmt::Assign { target, value, declare: None } => format!("{target} = {}", expr(value)),
        JStmt::Assign { target, value, declare: Some(t) } => format!("{} {target} = {}", t.keyword(), expr(value)),
        JStmt::ExprStmt(e) => expr(e),
        JStmt::MethodCall { method, args } => {
            let args: Vec<String> = args.iter().map(expr).collect();
            format!("{method}({})", args.join(", "))
        }
        JStmt::Print(args) => match args.as_slice() {
            [] => "System.out.println()".into(),
            [one] => format!("System.out.println({})", expr(one)),
            many => {
                let parts: Vec<String> = many.iter().map(|a| wrap(a, 5)).collect();
                format!("System.out.println(\"\" + {})", parts.join(" + "))
            }
        },
        JStmt::Return => "return".into(),
        JStmt::Break => "break".into(),
        _ => unreachable!("compound statement"),
    }
}

/// The init or update clause of a `for` header.
fn for_clause(stmts: &[JStmt]) -> String {
    match stmts {
        [] => String::new(),
        [JStmt::Assign { declare: Some(t), .. }, ..]
            if stmts.iter().all(|s| matches!(s, JStmt::Assign { declare: Some(u), .. } if u == t)) =>
        {
            let parts: Vec<String> = stmts
                .iter()
                .map(|s| match s {
                    JStmt::Assign { target, value, .. } => format!("{target} = {}", expr(value)),
                    _ => unreachable!(),
                })
                .collect();
            format!("{} {}", t.keyword(), parts.join(", "))
        }
        _ => stmts.iter().map(simple).collect::<Vec<_>>().join(", "),
    }
}

fn block(out: &mut String, stmts: &[JStmt], depth: usize) {
    for s in stmts {
        statement(out, s, depth);
    }
}

fn statement(out: &mut String, s: &JStmt, depth: usize) {
    indent(out, depth);
    match s {
        JStmt::IfElse { cond, then_branch, else_branch } => {
            let _ = writeln!(out, "if ({}) {{", expr(cond));
            block(out, then_branch, depth + 1);
            if !else_branch.is_empty() {
                indent(out, depth);
                out.push_str("} else {\n");
                block(out, else_branch, depth + 1);
            }
            indent(out, depth);
            out.push_str("}\n");
        }
        JStmt::While { cond, body } => {
            let _ = writeln!(out, "while ({}) {{", expr(cond));
            block(out, body, depth + 1);
            indent(out, depth);
            out.push_str("}\n");
        }
        JStmt::DoWhile { body, cond } => {
            out.push_str("do {\n");
            block(out, body, depth + 1);
            indent(out, depth);
            let _ = writeln!(out, "}} while ({});", expr(cond));
        }
        JStmt::For { init, cond, update, body } => {
            let _ = writeln!(out, "for ({}; {}; {}) {{", for_clause(init), expr(cond), for_clause(update));
            block(out, body, depth + 1);
            indent(out, depth);
            out.push_str("}\n");
        }
        JStmt::Switch { subject, cases, default } => {
            let _ = writeln!(out, "switch ({}) {{", expr(subject));
            for c in cases {
                indent(out, depth + 1);
                let _ = writeln!(out, "case {}:", lit(&c.label));
                block(out, &c.body, depth + 2);
            }
            if let Some(d) = default {
                indent(out, depth + 1);
                out.push_str("default:\n");
                block(out, d, depth + 2);
            }
            indent(out, depth);
            out.push_str("}\n");
        }
        other => {
            out.push_str(&simple(other));
            out.push_str(";\n");
        }
    }
}
