//! COBOL to Java translation: a fixed rule table, optionally steered by
//! per-statement action labels, over a small Java AST.

pub mod actions;
pub mod emit;
pub mod java;
pub mod metrics;
pub mod names;
pub mod parse_java;
pub mod translate;

pub use actions::{default_action, default_actions, shape_allows, Action, ActionLabel};
pub use emit::emit_java;
pub use java::*;
pub use metrics::{java_cfgs, java_coupling, java_cyclomatic, java_metrics, method_cfg};
pub use parse_java::{parse_java, JavaParseError};
pub use translate::{apply_actions, translate, translate_rules, TranspileError, Translation};
