use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cobol_interp::interpret_cobol;
use super::java_interp::interpret_java;
use super::trace::{trace_mismatch, Value};
use crate::cobol::{CobolAst, StatementKind};
use crate::transpile::{default_action, Action, TranspileError};

pub const BATTERY_SIZE: usize = 5;
/// Minimum fraction of oracle labels the applied actions must reproduce.
pub const LABEL_AGREEMENT: f64 = 0.9;

fn file_seed(file_id: &str) -> u64 {
    let digest = md5::compute(file_id.as_bytes());
    u64::from_le_bytes(digest.0[..8].try_into().expect("8 bytes"))
}

/// Five input queues keyed by the file id. Each is long enough for every
/// ACCEPT to run a few times inside loops.
pub fn input_battery(file_id: &str, ast: &CobolAst) -> Vec<Vec<Value>> {
    let mut accepts = 0;
    ast.for_each_statement(|s| accepts += matches!(s.kind, StatementKind::Accept { .. }) as usize);
    let len = 8 + 4 * accepts;
    let mut rng = ChaCha8Rng::seed_from_u64(file_seed(file_id));
    (0..BATTERY_SIZE).map(|_| (0..len).map(|_| Value::Int(rng.gen_range(0..=20))).collect()).collect()
}

/// The label each statement actually received: the requested action unless
/// it fell back, otherwise the rule default.
pub fn effective_actions(ast: &CobolAst, requested: &[Action], fallbacks: &[TranspileError]) -> Vec<Action> {
    let index = crate::cobol::AstIndex::build(ast);
    index
        .statement_nodes()
        .map(|n| {
            let failed = fallbacks.iter().any(|f| f.stmt_ref == n.index);
            let asked = requested.iter().rev().find(|a| a.stmt_ref == n.index);
            let label = match asked {
                Some(a) if !failed => a.action,
                _ => default_action(&n.stmt.expect("statement").kind),
            };
            Action::new(n.index, label)
        })
        .collect()
}

/// Fraction of oracle entries reproduced by `applied`; 1.0 for an empty oracle.
pub fn label_agreement(applied: &[Action], oracle: &[Action]) -> f64 {
    if oracle.is_empty() {
        return 1.0;
    }
    let hits = oracle.iter().filter(|o| applied.iter().any(|a| a.stmt_ref == o.stmt_ref && a.action == o.action)).count();
    hits as f64 / oracle.len() as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileScore {
    pub correct: bool,
    pub reason: String,
    pub label_agreement: Option<f64>,
}

/// A translation is correct when it reproduces the COBOL trace on every
/// battery vector and, given an oracle, agrees with enough of its labels.
pub fn score_file(
    file_id: &str,
    ast: &CobolAst,
    java: &crate::transpile::JavaAst,
    labels: Option<(&[Action], &[Action])>,
) -> FileScore {
    let agreement = labels.map(|(applied, oracle)| label_agreement(applied, oracle));
    for (i, inputs) in input_battery(file_id, ast).iter().enumerate() {
        let expected = interpret_cobol(ast, inputs);
        let actual = interpret_java(java, inputs);
        if let Some(reason) = trace_mismatch(&expected, &actual) {
            return FileScore { correct: false, reason: format!("{reason} (input vector {})", i + 1), label_agreement: agreement };
        }
    }
    match agreement {
        Some(a) if a < LABEL_AGREEMENT => FileScore {
            correct: false,
            reason: format!("label agreement {:.0}% below {:.0}%", a * 100.0, LABEL_AGREEMENT * 100.0),
            label_agreement: agreement,
        },
        _ => FileScore { correct: true, reason: "traces match".into(), label_agreement: agreement },
    }
}
