use std::collections::HashSet;
use std::path::{Path, PathBuf};

use proptest::prelude::*;
use relicforge::cobol::SourceFormat;
use relicforge::corpus::synth::{write_corpus, Profile};
use relicforge::corpus::{
    curate, ingest, split, CorpusManifest, CorpusMeta, CurateSummary, IngestConfig, Record, Split, Status,
    MIN_STATEMENTS,
};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn built(dir: &Path) -> CorpusManifest {
    curate(&ingest(dir, &IngestConfig::default()).unwrap(), MIN_STATEMENTS)
}

#[test]
fn curate_fixture_counts() {
    let m = built(&fixture("curate"));
    assert_eq!(
        m.summary(),
        CurateSummary { clean: 9, repaired: 3, rejected: 2, duplicate: 4, trivial: 2 }
    );
    let status = |id: &str| m.records.iter().find(|r| r.id == id).unwrap().status.clone().unwrap();
    assert_eq!(status("zz-copy-02"), Status::Duplicate("clean-02".into()));
    assert_eq!(status("zz-copy-04"), Status::Duplicate("clean-01".into()));
    assert_eq!(status("trivial-02"), Status::Trivial);
    assert!(m.records.iter().filter(|r| r.status == Some(Status::Rejected)).all(|r| r.reason.is_some()));
    assert!(m.eligible().all(|r| r.metrics.is_some()));
}

#[test]
fn statuses_partition_and_hashes_are_canonical() {
    let m = built(&fixture("curate"));
    assert!(m.records.iter().all(|r| r.status.is_some()));
    assert_eq!(m.summary().total(), m.records.len());
    let mut seen = HashSet::new();
    for r in m.records.iter().filter(|r| !matches!(r.status, Some(Status::Duplicate(_)) | Some(Status::Rejected))) {
        assert!(seen.insert(r.md5.clone()), "{} shares a hash", r.id);
    }
}

#[test]
fn curate_is_idempotent_on_its_output() {
    let once = built(&fixture("curate"));
    assert_eq!(curate(&once, MIN_STATEMENTS), once);
}

#[test]
fn reseeding_only_moves_split_fields() {
    let base = built(&fixture("curate"));
    let (a, b) = (split(&base, 1).unwrap(), split(&base, 2).unwrap());
    assert_ne!(a, b);
    let strip = |m: &CorpusManifest| -> Vec<Record> {
        m.records.iter().map(|r| Record { split: None, fold: None, ..r.clone() }).collect()
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(strip(&a), base.records);
}

#[test]
fn curate_is_deterministic_and_saves_losslessly() {
    let a = split(&built(&fixture("curate")), 42).unwrap();
    let b = split(&built(&fixture("curate")), 42).unwrap();
    assert_eq!(a, b);
    let dir = tempfile::tempdir().unwrap();
    let path = a.save(dir.path()).unwrap();
    let first = std::fs::read(&path).unwrap();
    assert_eq!(CorpusManifest::load(&path).unwrap(), a);
    b.save(dir.path()).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

fn synthetic(n: usize) -> CorpusManifest {
    let records = (0..n)
        .map(|i| Record {
            id: format!("f{i:06}"),
            relative_path: format!("f{i:06}.cbl"),
            md5: format!("{i:032x}"),
            lines: 35,
            status: Some(Status::Kept),
            reason: None,
            metrics: None,
            split: None,
            fold: None,
            oracle_java: None,
            oracle_labels: None,
        })
        .collect();
    CorpusManifest { meta: CorpusMeta { root: PathBuf::from("."), format: SourceFormat::Free }, records }
}

fn fold_sizes(m: &CorpusManifest) -> [usize; 5] {
    let mut sizes = [0; 5];
    for r in m.in_split(Split::Train) {
        sizes[r.fold.unwrap() as usize] += 1;
    }
    sizes
}

#[test]
fn paper_scale_split() {
    let m = split(&synthetic(42_000), 42).unwrap();
    assert_eq!(m.in_split(Split::Train).count(), 33_600);
    assert_eq!(m.in_split(Split::Test).count(), 8_400);
    let sizes = fold_sizes(&m);
    assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
}

#[test]
fn too_few_records_to_split() {
    assert!(split(&synthetic(4), 1).is_err());
}

#[test]
fn oracle_sidecars_are_linked() {
    let dir = tempfile::tempdir().unwrap();
    write_corpus(dir.path(), 10, 5, Profile::Sample, "s", Some(3)).unwrap();
    let m = ingest(dir.path(), &IngestConfig::default()).unwrap();
    assert_eq!(m.records.len(), 10);
    let with: Vec<&str> = m.records.iter().filter(|r| r.has_oracle()).map(|r| r.id.as_str()).collect();
    assert_eq!(with, ["s-0001", "s-0004", "s-0007", "s-0010"]);
    for r in m.records.iter().filter(|r| r.has_oracle()) {
        assert!(m.path_of(r.oracle_labels.as_ref().unwrap()).is_file());
        assert!(m.path_of(r.oracle_java.as_ref().unwrap()).is_file());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn split_partitions_eligible_records(n in 5usize..400, seed in any::<u64>()) {
        let m = split(&synthetic(n), seed).unwrap();
        let train = m.in_split(Split::Train).count();
        let test = m.in_split(Split::Test).count();
        prop_assert_eq!(train + test, n);
        prop_assert_eq!(train, n * 4 / 5);
        let sizes = fold_sizes(&m);
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        prop_assert!(m.in_split(Split::Test).all(|r| r.fold.is_none()));
        prop_assert_eq!(split(&synthetic(n), seed).unwrap(), m);
    }
}
