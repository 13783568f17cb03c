//! Differential evaluation: run the COBOL source and its translation on the
//! same inputs and compare what they print and call.

pub mod cobol_interp;
pub mod corpus;
pub mod java_interp;
pub mod score;
pub mod trace;

pub use cobol_interp::interpret_cobol;
pub use corpus::{
    drop_pct, evaluate_corpus, evaluate_record, external_java, oracle_labels, summarize, training_samples, translate_record, Approach, EvalError,
    EvalOptions, EvalSummary, Evaluation, FileResult, DEFAULT_TAU,
};
pub use java_interp::interpret_java;
pub use score::{effective_actions, input_battery, label_agreement, score_file, FileScore, BATTERY_SIZE, LABEL_AGREEMENT};
pub use trace::{padded_cmp, trace_mismatch, CallEvent, Outcome, Trace, Value, MAX_DEPTH, STEP_LIMIT};
