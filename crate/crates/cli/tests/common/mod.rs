#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_relicforge"));
    c.env_remove("RELICFORGE_SEED").env_remove("SOURCE_DATE_EPOCH");
    c
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn relicforge")
}

pub fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "relicforge {} failed: {}",
        args.join(" "),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

pub fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for e in fs::read_dir(from).unwrap() {
        let p = e.unwrap().path();
        if p.is_file() {
            fs::copy(&p, to.join(p.file_name().unwrap())).unwrap();
        }
    }
}

pub const GENERATED_AT: &str = "2026-01-01T00:00:00Z";

/// Paths written by one end-to-end run.
pub struct Artifacts {
    pub manifest: PathBuf,
    pub checkpoint: PathBuf,
    pub eval_rules: PathBuf,
    pub eval_ai: PathBuf,
    pub json: PathBuf,
    pub html: PathBuf,
}

/// corpus build, train, evaluate rules and ai, report; all under `out`.
pub fn pipeline(corpus: &Path, out: &Path, extra: &[&str]) -> Artifacts {
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let with = |args: &[String]| {
        let mut v: Vec<String> = args.to_vec();
        v.extend(extra.iter().map(|x| x.to_string()));
        let refs: Vec<&str> = v.iter().map(String::as_str).collect();
        ok(&refs)
    };
    let mdir = out.join("corpus");
    with(&["corpus".into(), "build".into(), s(corpus), "--out".into(), s(&mdir)]);
    let ckpt = out.join("model.rlfm");
    with(&[
        "train".into(), "--manifest".into(), s(&mdir), "--out".into(), s(&ckpt),
        "--lr".into(), "0.01".into(), "--batch".into(), "4".into(), "--epochs".into(), "30".into(),
    ]);
    let edir = out.join("eval");
    with(&["evaluate".into(), "--manifest".into(), s(&mdir), "--approach".into(), "rules".into(), "--out".into(), s(&edir)]);
    with(&[
        "evaluate".into(), "--manifest".into(), s(&mdir), "--approach".into(), "ai".into(),
        "--model".into(), s(&ckpt), "--out".into(), s(&edir),
    ]);
    let rdir = out.join("report");
    with(&[
        "report".into(), "--eval".into(), s(&edir.join("eval.rules.json")), s(&edir.join("eval.ai.json")),
        "--pairs".into(), s(&edir.join("pairs.ai.jsonl")), "--manifest".into(), s(&mdir),
        "--generated-at".into(), GENERATED_AT.into(), "--out".into(), s(&rdir),
    ]);
    Artifacts {
        manifest: mdir.join(relicforge::corpus::MANIFEST_FILE),
        checkpoint: ckpt,
        eval_rules: edir.join("eval.rules.json"),
        eval_ai: edir.join("eval.ai.json"),
        json: rdir.join("report.json"),
        html: rdir.join("report.html"),
    }
}

impl Artifacts {
    pub fn files(&self) -> [&PathBuf; 6] {
        [&self.manifest, &self.checkpoint, &self.eval_rules, &self.eval_ai, &self.json, &self.html]
    }
}
