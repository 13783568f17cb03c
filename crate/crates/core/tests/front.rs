use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use proptest::prelude::*;
use relicforge::cobol::{parse_source, parse_str, pretty_print, repair, CobolAst, SourceFile, Verdict};
use relicforge::corpus::synth::{Profile, Synth};

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn cobol_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cbl"))
        .collect();
    v.sort();
    v
}

fn fixed_point(ast: &CobolAst) -> Result<(), String> {
    let text = pretty_print(ast);
    let back = parse_str(&text).map_err(|e| format!("{e}\n{text}"))?;
    if &back != ast {
        return Err(format!("reparse differs:\n{text}"));
    }
    if pretty_print(&back) != text {
        return Err("printing is not stable".into());
    }
    Ok(())
}

#[test]
fn sample_corpus_round_trips() {
    let files = cobol_files(&repo_root().join("samples/corpus"));
    assert_eq!(files.len(), 40);
    for f in files {
        let ast = parse_str(&fs::read_to_string(&f).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        fixed_point(&ast).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
    }
}

#[test]
fn generated_programs_round_trip() {
    let start = Instant::now();
    let mut synth = Synth::new(1000, Profile::RoundTrip);
    for i in 0..1000 {
        let ast = synth.program(&format!("RT-{i}")).ast;
        fixed_point(&ast).unwrap_or_else(|e| panic!("program {i}: {e}"));
    }
    assert!(start.elapsed().as_secs() < 30);
}

#[test]
fn program_fixtures_parse() {
    let files = cobol_files(&repo_root().join("crates/core/tests/fixtures/programs"));
    assert!(files.len() >= 30);
    for f in files {
        let ast = parse_str(&fs::read_to_string(&f).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", f.display()));
        fixed_point(&ast).unwrap();
    }
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_str("IDENTIFICATION DIVISION.\nPROGRAM-ID. X.\nPROCEDURE DIVISION.\nP.\n    MOVE TO.\n").unwrap_err();
    assert!(err.to_string().contains("line 5"), "{err}");
}

fn sample_text(seed: u64) -> String {
    pretty_print(&Synth::new(seed, Profile::RoundTrip).program("PROP").ast)
}

/// Deletes one of the scope terminators or periods the repair pass knows
/// how to restore.
fn damage(text: &str, pick: usize) -> String {
    let marks: Vec<(usize, usize)> = ["END-IF", "END-PERFORM", "END-EVALUATE"]
        .iter()
        .flat_map(|t| text.match_indices(t).map(|(i, m)| (i, m.len())).collect::<Vec<_>>())
        .collect();
    if marks.is_empty() {
        return text.trim_end().trim_end_matches('.').to_string();
    }
    let (i, len) = marks[pick % marks.len()];
    format!("{}{}", &text[..i], &text[i + len..])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn repair_is_idempotent(seed in 0u64..10_000, pick in 0usize..50) {
        let broken = SourceFile::new("P", damage(&sample_text(seed), pick));
        let (fixed, log) = repair(&broken);
        if log.verdict != Verdict::Rejected {
            prop_assert!(parse_source(&fixed).is_ok());
            let (again, log2) = repair(&fixed);
            prop_assert_eq!(log2.verdict, Verdict::Clean);
            prop_assert!(log2.entries.is_empty());
            prop_assert_eq!(again.text, fixed.text);
        }
    }

    #[test]
    fn clean_input_is_untouched(seed in 0u64..10_000) {
        let text = sample_text(seed);
        let (fixed, log) = repair(&SourceFile::new("P", text.clone()));
        prop_assert_eq!(log.verdict, Verdict::Clean);
        prop_assert_eq!(fixed.text, text);
    }

    #[test]
    fn repair_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..400), seed in 0u64..1000, cut in 0usize..2000) {
        // arbitrary text, and a real program truncated at a random point
        let noise = String::from_utf8_lossy(&bytes).into_owned();
        let text = sample_text(seed);
        let mut at = cut.min(text.len());
        while !text.is_char_boundary(at) {
            at -= 1;
        }
        for input in [noise, text[..at].to_string()] {
            let (fixed, log) = repair(&SourceFile::new("P", input));
            match log.verdict {
                Verdict::Rejected => prop_assert!(log.reason.is_some()),
                _ => prop_assert!(parse_source(&fixed).is_ok()),
            }
            prop_assert!(log.entries.len() <= 10);
        }
    }
}
