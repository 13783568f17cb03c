//! Rule-based syntax repair.
//!
//! The first error of each failed parse is mapped to one textual edit; the
//! edit is applied and the text re-parsed, up to `max_repairs` times. Unclosed
//! scopes surface innermost first, so repeated application closes nested
//! scopes from the inside out.

use serde::{Deserialize, Serialize};

use super::lexer::{tokenize_str, LexErrorReason};
use super::parser::{parse, ParseErrorKind, Scope};
use super::source::{SourceFile, SourceFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepairRule {
    InsertEndIf,
    InsertEndEvaluate,
    InsertEndPerform,
    CloseStringLiteral,
    AppendFinalPeriod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Clean,
    Repaired,
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairEntry {
    pub rule: RepairRule,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairLog {
    pub entries: Vec<RepairEntry>,
    pub verdict: Verdict,
    /// First remaining error when rejected.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairConfig {
    pub max_repairs: usize,
}

impl Default for RepairConfig {
    fn default() -> Self {
        Self { max_repairs: 10 }
    }
}

pub fn repair(file: &SourceFile) -> (SourceFile, RepairLog) {
    repair_with(file, RepairConfig::default())
}

pub fn repair_with(file: &SourceFile, config: RepairConfig) -> (SourceFile, RepairLog) {
    let mut text = file.normalized_text();
    let mut entries = Vec::new();
    loop {
        let failure = match diagnose(&text) {
            None if entries.is_empty() => {
                return (file.clone(), RepairLog { entries, verdict: Verdict::Clean, reason: None })
            }
            None => {
                let repaired = SourceFile::new(file.id.clone(), text).with_format(SourceFormat::Free);
                return (repaired, RepairLog { entries, verdict: Verdict::Repaired, reason: None });
            }
            Some(f) => f,
        };
        let fix = match failure.fix {
            Some(fix) if entries.len() < config.max_repairs => fix,
            Some(_) => {
                let reason = format!("still failing after {} repairs: {}", config.max_repairs, failure.message);
                return reject(file, entries, reason);
            }
            None => return reject(file, entries, failure.message),
        };
        text.insert_str(fix.offset, fix.insert);
        entries.push(RepairEntry { rule: fix.rule, line: fix.line });
    }
}

fn reject(file: &SourceFile, entries: Vec<RepairEntry>, reason: String) -> (SourceFile, RepairLog) {
    (file.clone(), RepairLog { entries, verdict: Verdict::Rejected, reason: Some(reason) })
}

struct Fix {
    rule: RepairRule,
    line: u32,
    offset: usize,
    insert: &'static str,
}

struct Failure {
    message: String,
    fix: Option<Fix>,
}

fn diagnose(text: &str) -> Option<Failure> {
    let tokens = match tokenize_str(text) {
        Ok(t) => t,
        Err(e) => {
            let fix = (e.reason == LexErrorReason::UnterminatedString).then(|| Fix {
                rule: RepairRule::CloseStringLiteral,
                line: e.line,
                offset: string_close_offset(text, e.offset),
                insert: "'",
            });
            return Some(Failure { message: e.to_string(), fix });
        }
    };
    let errs = parse(&tokens).err()?;
    let first = &errs[0];
    let fix = match &first.kind {
        ParseErrorKind::UnclosedScope(scope) => Some(match scope {
            Scope::If => (RepairRule::InsertEndIf, " END-IF"),
            Scope::Evaluate => (RepairRule::InsertEndEvaluate, " END-EVALUATE"),
            Scope::Perform => (RepairRule::InsertEndPerform, " END-PERFORM"),
        }),
        ParseErrorKind::MissingPeriod => Some((RepairRule::AppendFinalPeriod, ".")),
        _ => None,
    }
    .map(|(rule, insert)| Fix { rule, line: first.line, offset: first.offset, insert });
    Some(Failure { message: first.to_string(), fix })
}

/// Where the closing quote goes for a string opened at `start`: before a
/// sentence-ending period on that line, otherwise at the end of the line.
fn string_close_offset(text: &str, start: usize) -> usize {
    let line_end = text[start..].find('\n').map_or(text.len(), |i| start + i);
    let content = text[start..line_end].trim_end();
    let end = start + content.len();
    if content.len() > 1 && content.ends_with('.') {
        end - 1
    } else {
        end
    }
}
