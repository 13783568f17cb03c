use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use proptest::prelude::*;
use relicforge::analysis::analyze;
use relicforge::cobol::{parse_str, AstIndex, CobolAst};
use relicforge::corpus::synth::{Profile, Synth};
use relicforge::evaluate::{input_battery, interpret_cobol, interpret_java, score_file, trace_mismatch, Value};
use relicforge::transpile::{
    default_actions, emit_java, java_metrics, parse_java, translate, translate_rules, Action, ActionLabel,
};

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn programs() -> Vec<(String, CobolAst)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(fixtures_dir().join("programs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cbl"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let id = p.file_stem().unwrap().to_string_lossy().into_owned();
            let ast = parse_str(&fs::read_to_string(&p).unwrap()).unwrap_or_else(|e| panic!("{id}: {e}"));
            (id, ast)
        })
        .collect()
}

fn sample_corpus() -> Vec<CobolAst> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples/corpus");
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cbl"))
        .collect();
    paths.sort();
    paths.iter().map(|p| parse_str(&fs::read_to_string(p).unwrap()).unwrap()).collect()
}

#[test]
fn rules_preserve_traces_on_every_fixture() {
    let start = Instant::now();
    let fixtures = programs();
    let goto_free: Vec<_> = fixtures.iter().filter(|(_, a)| !a.uses_goto()).collect();
    assert!(goto_free.len() >= 30);
    let failures: Vec<String> = goto_free
        .iter()
        .filter_map(|(id, ast)| {
            let s = score_file(id, ast, &translate_rules(ast), None);
            (!s.correct).then(|| format!("{id}: {}", s.reason))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
    assert!(start.elapsed().as_secs() < 10);
}

fn run_both(name: &str, inputs: &[Value]) -> Vec<String> {
    let (_, ast) = programs().into_iter().find(|(id, _)| id == name).unwrap();
    let cobol = interpret_cobol(&ast, inputs);
    let java = interpret_java(&translate_rules(&ast), inputs);
    assert_eq!(cobol, java);
    cobol.display_lines
}

#[test]
fn move_truncation_cases() {
    // numeric items hold plain integers; only alphanumeric moves truncate
    assert_eq!(run_both("move-truncation", &[]), ["ABC", "ABC       END", "123456", "7"]);
}

#[test]
fn varying_boundary_cases() {
    assert_eq!(run_both("varying-boundary", &[]), ["156", "1", "3", "5", "7"]);
    assert_eq!(run_both("varying-zero-trips", &[]), ["AFTER5", "4", "7", "10"]);
    assert_eq!(run_both("times-zero", &[]), ["30"]);
    assert_eq!(run_both("varying-overshoot", &[]), ["1", "5", "9", "3"]);
}

#[test]
fn golden_java() {
    let dir = fixtures_dir().join("golden");
    let ast = parse_str(&fs::read_to_string(dir.join("nested-perform.cbl")).unwrap()).unwrap();
    assert_eq!(emit_java(&translate_rules(&ast)), fs::read_to_string(dir.join("nested-perform.java")).unwrap());
}

#[test]
fn rules_path_is_total_and_deterministic() {
    for ast in sample_corpus().iter().chain(programs().iter().map(|(_, a)| a)) {
        let actions = default_actions(ast);
        let a = translate(ast, &actions);
        let b = translate(ast, &actions);
        assert!(a.fallbacks.is_empty());
        assert_eq!(emit_java(&a.java), emit_java(&b.java));
        assert_eq!(parse_java(&emit_java(&a.java)).unwrap(), a.java);
    }
}

#[test]
fn complexity_is_not_inflated() {
    for (id, ast) in programs() {
        let before = analyze(&ast).cyclomatic;
        let after = java_metrics(&translate_rules(&ast)).cyclomatic;
        assert!(after <= before + 1, "{id}: {before} -> {after}");
    }
}

#[test]
fn extract_method_is_a_pure_refactoring() {
    let mut applied = 0;
    for (id, ast) in programs().into_iter().filter(|(_, a)| !a.uses_goto()) {
        let reference = translate_rules(&ast);
        let index = AstIndex::build(&ast);
        for node in index.statement_nodes().map(|n| n.index) {
            let mut actions = default_actions(&ast);
            for a in actions.iter_mut().filter(|a| a.stmt_ref == node) {
                a.action = ActionLabel::ExtractMethodAt(node);
            }
            let t = translate(&ast, &actions);
            if !t.fallbacks.is_empty() {
                continue;
            }
            applied += 1;
            for inputs in input_battery(&id, &ast) {
                let want = interpret_java(&reference, &inputs);
                let got = interpret_java(&t.java, &inputs);
                assert_eq!(trace_mismatch(&want, &got), None, "{id} split at {node}");
                assert_eq!(trace_mismatch(&interpret_cobol(&ast, &inputs), &got), None);
            }
        }
    }
    assert!(applied >= 30, "only {applied} splits applied");
}

#[test]
fn oracle_actions_preserve_traces() {
    let mut synth = Synth::new(21, Profile::Acceptance);
    for i in 0..100 {
        let p = synth.program(&format!("O{i}"));
        let t = translate(&p.ast, &p.oracle);
        assert!(t.fallbacks.is_empty());
        let applied: Vec<Action> = p.oracle.clone();
        let s = score_file(&format!("O{i}"), &p.ast, &t.java, Some((&applied, &p.oracle)));
        assert!(s.correct, "program {i}: {}", s.reason);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interpreters_are_deterministic(seed in 0u64..100_000) {
        let ast = Synth::new(seed, Profile::RoundTrip).program("DET").ast;
        let java = translate_rules(&ast);
        for inputs in input_battery("DET", &ast) {
            prop_assert_eq!(interpret_cobol(&ast, &inputs), interpret_cobol(&ast, &inputs));
            prop_assert_eq!(interpret_java(&java, &inputs), interpret_java(&java, &inputs));
        }
    }

    #[test]
    fn trace_comparison_is_symmetric(seed in 0u64..100_000, other in 0u64..100_000) {
        let a = Synth::new(seed, Profile::RoundTrip).program("SYM").ast;
        let b = Synth::new(other, Profile::RoundTrip).program("SYM").ast;
        let (ja, jb) = (translate_rules(&a), translate_rules(&b));
        for inputs in input_battery("SYM", &a) {
            let pairs = [
                (interpret_cobol(&a, &inputs), interpret_java(&ja, &inputs)),
                (interpret_cobol(&a, &inputs), interpret_java(&jb, &inputs)),
                (interpret_cobol(&b, &inputs), interpret_cobol(&a, &inputs)),
            ];
            for (x, y) in &pairs {
                prop_assert_eq!(trace_mismatch(x, y).is_none(), trace_mismatch(y, x).is_none());
            }
        }
    }
}
