use std::collections::HashSet;
use std::fs;
use std::path::Path;

use relicforge::cobol::{parse_str, syntax_tree};
use relicforge::corpus::synth::{write_corpus, Profile};
use relicforge::corpus::{curate, ingest, split, CorpusManifest, IngestConfig, MIN_STATEMENTS};
use relicforge::evaluate::{drop_pct, evaluate_corpus, summarize, Approach, EvalOptions, EvalSummary};
use relicforge::report::{
    emit_html, emit_json, figures, render_ast_svg, standalone, AstPair, Palette, ReportBundle, SCHEMA_VERSION,
};
use relicforge::transpile::translate_rules;
use relicforge::tree::TreeNode;

fn corpus(dir: &Path, n: usize, profile: Profile, every: usize) -> CorpusManifest {
    write_corpus(dir, n, 3, profile, "e", Some(every)).unwrap();
    split(&curate(&ingest(dir, &IngestConfig::default()).unwrap(), MIN_STATEMENTS), 42).unwrap()
}

fn assert_drop_exact(s: &EvalSummary) {
    assert!((s.cx_drop_pct - drop_pct(s.mean_cx_before, s.mean_cx_after)).abs() < 1e-9);
    assert!((s.cp_drop_pct - drop_pct(s.mean_cp_before, s.mean_cp_after)).abs() < 1e-9);
}

#[test]
fn table_one_arithmetic() {
    assert!((drop_pct(18.0, 11.7) - 35.0).abs() < 1e-9);
    // printed as 33% after rounding
    assert!((drop_pct(8.0, 5.4) - 32.5).abs() < 0.05);
    assert_eq!(drop_pct(0.0, 0.0), 0.0);
}

#[test]
fn summaries_are_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let m = corpus(dir.path(), 30, Profile::Acceptance, 1);
    let opts = EvalOptions::default();
    let rules = evaluate_corpus(&m, &Approach::Rules, None, &opts).unwrap();
    assert_eq!(rules.files.len(), 6);
    assert_eq!(rules.summary, summarize(&Approach::Rules, &rules.files));
    assert_drop_exact(&rules.summary);
    assert!((0.0..=1.0).contains(&rules.summary.accuracy));

    // the sidecar Java carries the oracle translation, which must match
    let manual = evaluate_corpus(&m, &Approach::External("manual".into()), None, &opts).unwrap();
    assert_eq!(manual.summary.accuracy, 1.0, "{:#?}", manual.files);
    assert!(manual.files.iter().all(|f| f.label_agreement.is_none()));
    assert_drop_exact(&manual.summary);

    assert!(evaluate_corpus(&m, &Approach::Ai, None, &opts).is_err());
    let again = evaluate_corpus(&m, &Approach::Rules, None, &opts).unwrap();
    assert_eq!(again, rules);
}

#[test]
fn per_fold_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let m = corpus(dir.path(), 25, Profile::Acceptance, 1);
    let opts = EvalOptions { per_fold: true, ..EvalOptions::default() };
    let e = evaluate_corpus(&m, &Approach::Rules, None, &opts).unwrap();
    let folds = e.summary.per_fold.as_ref().unwrap();
    assert_eq!(folds.len(), 5);
    assert_eq!(folds.iter().map(|f| f.n).sum::<usize>(), 20);
    folds.iter().for_each(assert_drop_exact);
}

fn summary(approach: Approach, before: f64, after: f64, accuracy: f64) -> EvalSummary {
    let mut s = summarize(&approach, &[]);
    s.n = 10;
    s.accuracy = accuracy;
    s.mean_cx_before = before;
    s.mean_cx_after = after;
    s.cx_drop_pct = drop_pct(before, after);
    s
}

fn chain(n: usize, kind: &str) -> TreeNode {
    // a root with n-1 leaf children: n nodes, n-1 paths
    TreeNode::new("Root", "", 0).with_children((1..n).map(|i| TreeNode::new(kind, i.to_string(), 0)).collect())
}

fn bundle(pairs: Vec<AstPair>) -> ReportBundle {
    ReportBundle::new(
        vec![
            summary(Approach::External("manual".into()), 18.0, 15.3, 0.75),
            summary(Approach::Rules, 18.0, 14.04, 0.82),
            summary(Approach::Ai, 18.0, 11.7, 0.93),
        ],
        pairs,
        "2026-01-01T00:00:00Z",
    )
}

fn attr(tag: &str, name: &str) -> Option<f64> {
    let key = format!("{name}=\"");
    let start = tag.find(&key)? + key.len();
    tag[start..].split('"').next()?.parse().ok()
}

fn text_content(html: &str) -> String {
    let mut out = String::new();
    let mut in_tag = false;
    let mut in_style = false;
    for (i, c) in html.char_indices() {
        if html[i..].starts_with("<style") {
            in_style = true;
        }
        if html[i..].starts_with("</style") {
            in_style = false;
        }
        match c {
            '<' => in_tag = true,
            '>' => {
                in_tag = false;
                out.push(' ');
            }
            c if !in_tag && !in_style => out.push(c),
            _ => {}
        }
    }
    out
}

fn numbers(text: &str) -> Vec<f64> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars().chain(std::iter::once(' ')) {
        if c.is_ascii_digit() || (c == '.' && !cur.is_empty() && !cur.contains('.')) {
            cur.push(c);
        } else if !cur.is_empty() {
            out.push(cur.trim_end_matches('.').parse().unwrap());
            cur.clear();
        }
    }
    out
}

fn json_numbers(v: &serde_json::Value, out: &mut HashSet<u64>) {
    match v {
        serde_json::Value::Number(n) => {
            out.insert(n.as_f64().unwrap().to_bits());
        }
        serde_json::Value::String(s) => {
            for x in numbers(s) {
                out.insert(x.to_bits());
            }
        }
        serde_json::Value::Array(a) => a.iter().for_each(|x| json_numbers(x, out)),
        serde_json::Value::Object(o) => o.values().for_each(|x| json_numbers(x, out)),
        _ => {}
    }
}

#[test]
fn html_is_self_contained_and_agrees_with_json() {
    let pair = AstPair { id: "e-0001".into(), cobol: chain(50, "Stmt"), java: chain(25, "JStmt"), cx_before: 18.0, cx_after: 11.7 };
    let b = bundle(vec![pair]);
    let dir = tempfile::tempdir().unwrap();
    let (json_path, html_path) = (dir.path().join("report.json"), dir.path().join("report.html"));
    emit_json(&b, &json_path).unwrap();
    emit_html(&b, &html_path).unwrap();
    let html = fs::read_to_string(&html_path).unwrap();
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(json["schema_version"], SCHEMA_VERSION);

    assert!(!html.contains("http://") && !html.contains("https://"));
    assert!(!html.contains("<script src") && !html.contains("<link"));

    // bar heights proportional to the drops
    let fig = figures(&b);
    let mut checked = 0;
    for tag in html.split("<rect").skip(1).filter(|t| t.contains("class=\"bar\"") && t.contains("cyclomatic")) {
        let h = attr(tag, "height").unwrap();
        let approach = tag.split("data-approach=\"").nth(1).unwrap().split('"').next().unwrap();
        let bar = fig.complexity_drop.bars.iter().find(|x| x.approach == approach && x.metric == "cyclomatic").unwrap();
        assert!((h - bar.value / fig.complexity_drop.axis_max * 200.0).abs() <= 1.0);
        checked += 1;
    }
    assert_eq!(checked, 3);

    assert!(html.contains("50 nodes") && html.contains("49 paths"));
    assert!(html.contains("25 nodes") && html.contains("24 paths"));
    assert_eq!(json["figures"]["panels"][0]["cobol_nodes"], 50);
    assert_eq!(json["figures"]["panels"][0]["java_paths"], 24);

    let mut known = HashSet::new();
    json_numbers(&json, &mut known);
    for n in numbers(&text_content(&html)) {
        assert!(known.contains(&n.to_bits()), "{n} shown in HTML but absent from JSON");
    }
}

#[test]
fn charts_only_without_pairs() {
    let html = relicforge::report::render_html(&bundle(vec![]));
    assert!(html.contains("class=\"bar\""));
    assert!(!html.contains("class=\"pair\"") && !html.contains("class=\"ast\""));
}

#[test]
fn ast_svgs_are_well_formed_xml() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let dirs = [root.join("../../samples/corpus"), root.join("tests/fixtures/programs")];
    let mut count = 0;
    for dir in dirs {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.extension().is_none_or(|e| e != "cbl") {
                continue;
            }
            let ast = parse_str(&fs::read_to_string(&path).unwrap()).unwrap();
            for svg in [
                render_ast_svg(&syntax_tree(&ast), Palette::Red),
                render_ast_svg(&translate_rules(&ast).to_tree(), Palette::Green),
            ] {
                roxmltree::Document::parse(&svg).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                roxmltree::Document::parse(&standalone(&svg)).unwrap();
            }
            count += 1;
        }
    }
    assert!(count >= 70);
}
