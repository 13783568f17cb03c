use std::collections::HashSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relicforge::analysis::{
    analyze, build_cfg, cyclomatic, decision_cyclomatic, step_features, Cfg, CfgBuilder, CfgNodeKind, EdgeKind,
};
use relicforge::cobol::{
    parse_str, AstIndex, CmpOp, CobolAst, Condition, Operand, Statement, StatementKind,
};
use relicforge::corpus::synth::{Profile, Synth};

/// Structured flow shapes; the graph built from one is the test input.
#[derive(Debug, Clone)]
enum Shape {
    Stmt,
    Seq(Vec<Shape>),
    If(Box<Shape>, Box<Shape>),
    Switch(Vec<Shape>),
    Loop(Box<Shape>),
}

impl Shape {
    fn random(rng: &mut ChaCha8Rng, depth: u32) -> Shape {
        let pick = if depth == 0 { 0 } else { rng.gen_range(0..5) };
        match pick {
            0 => Shape::Stmt,
            1 => Shape::Seq((0..rng.gen_range(1..4)).map(|_| Shape::random(rng, depth - 1)).collect()),
            2 => Shape::If(Box::new(Shape::random(rng, depth - 1)), Box::new(Shape::random(rng, depth - 1))),
            3 => Shape::Switch((0..rng.gen_range(2..5)).map(|_| Shape::random(rng, depth - 1)).collect()),
            _ => Shape::Loop(Box::new(Shape::random(rng, depth - 1))),
        }
    }

    /// Binary decisions the shape contains, counted from the shape alone.
    fn decisions(&self) -> u32 {
        match self {
            Shape::Stmt => 0,
            Shape::Seq(v) => v.iter().map(Shape::decisions).sum(),
            Shape::If(a, b) => 1 + a.decisions() + b.decisions(),
            Shape::Switch(arms) => arms.len() as u32 - 1 + arms.iter().map(Shape::decisions).sum::<u32>(),
            Shape::Loop(body) => 1 + body.decisions(),
        }
    }

    fn build(&self, b: &mut CfgBuilder, pending: Vec<(usize, EdgeKind)>) -> Vec<(usize, EdgeKind)> {
        match self {
            Shape::Stmt => b.stmt(&pending, None),
            Shape::Seq(v) => v.iter().fold(pending, |p, s| s.build(b, p)),
            Shape::If(t, e) => {
                let br = b.node(CfgNodeKind::Branch, None);
                b.connect(&pending, br);
                let mut out = t.build(b, vec![(br, EdgeKind::True)]);
                out.extend(e.build(b, vec![(br, EdgeKind::False)]));
                let join = b.node(CfgNodeKind::Join, None);
                b.connect(&out, join);
                vec![(join, EdgeKind::Seq)]
            }
            Shape::Switch(arms) => {
                let br = b.node(CfgNodeKind::Branch, None);
                b.connect(&pending, br);
                let mut out = Vec::new();
                for a in arms {
                    out.extend(a.build(b, vec![(br, EdgeKind::Case)]));
                }
                let join = b.node(CfgNodeKind::Join, None);
                b.connect(&out, join);
                vec![(join, EdgeKind::Seq)]
            }
            Shape::Loop(body) => {
                let head = b.node(CfgNodeKind::Branch, None);
                b.connect(&pending, head);
                let out = body.build(b, vec![(head, EdgeKind::True)]);
                b.loop_back(&out, head);
                vec![(head, EdgeKind::False)]
            }
        }
    }

    fn graph(&self) -> Cfg {
        let mut b = CfgBuilder::new();
        let out = self.build(&mut b, vec![(CfgBuilder::ENTRY, EdgeKind::Seq)]);
        b.finish(&out, &[])
    }
}

/// E - N + 2P with P counted by flood fill over the undirected graph.
fn tally(cfg: &Cfg) -> i64 {
    let n = cfg.nodes.len();
    let mut adj = vec![Vec::new(); n];
    let mut distinct = HashSet::new();
    for e in &cfg.edges {
        adj[e.from].push(e.to);
        adj[e.to].push(e.from);
        distinct.insert((e.from, e.to, e.kind));
    }
    let mut seen = vec![false; n];
    let mut parts = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        parts += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    assert_eq!(distinct.len(), cfg.edges.len(), "parallel duplicate edges");
    cfg.edges.len() as i64 - n as i64 + 2 * parts
}

#[test]
fn random_graphs_agree_with_the_edge_tally() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut mismatches = 0;
    for _ in 0..500 {
        let shape = Shape::random(&mut rng, 4);
        let cfg = shape.graph();
        let expected = shape.decisions() + 1;
        let ok = cyclomatic(&cfg) == expected
            && decision_cyclomatic(&cfg) == expected
            && tally(&cfg) == expected as i64;
        if !ok {
            mismatches += 1;
        }
    }
    assert_eq!(mismatches, 0);
}

#[test]
fn program_graphs_agree_with_the_edge_tally() {
    let mut synth = Synth::new(9, Profile::RoundTrip);
    for i in 0..500 {
        let ast = synth.program(&format!("G{i}")).ast;
        let cfg = build_cfg(&ast);
        assert_eq!(cyclomatic(&cfg), decision_cyclomatic(&cfg), "program {i}");
        assert_eq!(cyclomatic(&cfg) as i64, tally(&cfg), "program {i}");
    }
}

#[test]
fn single_if_is_two() {
    let ast = parse_str(
        "IDENTIFICATION DIVISION.\nPROGRAM-ID. ONE-IF.\nDATA DIVISION.\nWORKING-STORAGE SECTION.\n01 A PIC 9(2).\n\
         PROCEDURE DIVISION.\nMAIN-PARA.\n    IF A > 1\n        DISPLAY A\n    END-IF.\n    STOP RUN.\n",
    )
    .unwrap();
    assert_eq!(analyze(&ast).cyclomatic, 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn metrics_are_deterministic(seed in 0u64..100_000) {
        let ast = Synth::new(seed, Profile::RoundTrip).program("D").ast;
        prop_assert_eq!(analyze(&ast), analyze(&ast.clone()));
        prop_assert!(analyze(&ast).cyclomatic >= 1);
    }

    #[test]
    fn an_extra_if_adds_exactly_one(seed in 0u64..100_000, para in 0usize..8, at in 0usize..8) {
        let mut ast = Synth::new(seed, Profile::RoundTrip).program("M").ast;
        // a GO TO can leave code unreachable, and pruned code adds nothing
        prop_assume!(!ast.uses_goto());
        let before = analyze(&ast).cyclomatic;
        let p = para % ast.paragraphs.len();
        let stmts = &mut ast.paragraphs[p].statements;
        let at = at.min(stmts.len());
        let cond = Condition::compare(Operand::name("WS-N1"), CmpOp::Gt, Operand::int(1));
        stmts.insert(at, Statement::from(StatementKind::If { cond, then_branch: vec![display()], else_branch: vec![] }));
        prop_assert_eq!(analyze(&ast).cyclomatic, before + 1);
    }

    #[test]
    fn repeated_calls_do_not_add_coupling(seed in 0u64..100_000) {
        let mut ast = Synth::new(seed, Profile::Sample).program("C").ast;
        let before = analyze(&ast).coupling;
        let mut first_call = None;
        ast.for_each_statement(|s| {
            if first_call.is_none() && matches!(s.kind, StatementKind::Call { .. }) {
                first_call = Some(s.clone());
            }
        });
        if let Some(call) = first_call {
            ast.paragraphs[0].statements.insert(0, call);
            prop_assert_eq!(analyze(&ast).coupling, before);
        }
    }

    #[test]
    fn features_are_finite_and_cover_every_node(seed in 0u64..100_000) {
        let ast = Synth::new(seed, Profile::RoundTrip).program("F").ast;
        check_features(&ast);
    }
}

fn display() -> Statement {
    Statement::from(StatementKind::Display { operands: vec![Operand::str("X")] })
}

fn check_features(ast: &CobolAst) {
    let cfg = build_cfg(ast);
    let steps = step_features(ast, &cfg);
    assert_eq!(steps.len(), AstIndex::build(ast).len());
    assert!(steps.rows().iter().flatten().all(|v| v.is_finite()));
    assert!(analyze(ast).features.iter().all(|v| v.is_finite()));
}

#[test]
fn sample_corpus_features() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../samples/corpus");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "cbl") {
            let text = std::fs::read_to_string(&path).unwrap();
            let a = parse_str(&text).unwrap();
            let b = parse_str(&text.clone()).unwrap();
            check_features(&a);
            let (fa, fb) = (analyze(&a).features, analyze(&b).features);
            assert!(fa.iter().zip(&fb).all(|(x, y)| x.to_bits() == y.to_bits()));
            n += 1;
        }
    }
    assert_eq!(n, 40);
}
