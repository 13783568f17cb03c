use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chrono::{DateTime, SecondsFormat, Utc};
use relicforge::analysis::analyze;
use relicforge::cobol::{parse_source, repair, syntax_tree, CobolAst, SourceFile, Verdict};
use relicforge::corpus::synth::{write_corpus, Profile};
use relicforge::corpus::{self, CorpusManifest, IngestConfig, Split, MANIFEST_FILE};
use relicforge::evaluate::{evaluate_corpus, training_samples, translate_record, Approach, EvalOptions, EvalSummary};
use relicforge::model::{self, train_validated, ModelCheckpoint, ModelConfig};
use relicforge::report::{
    emit_html, emit_json, render_ast_svg, standalone, AstPair, Palette, ReportBundle,
};
use relicforge::transpile::{default_actions, emit_java, translate};
use serde::Serialize;

use crate::{Cli, Command, CorpusCommand, EvaluateArgs, ProfileArg, ReportArgs, SynthArgs, TrainArgs};

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Parse { file, repair } => {
            let ast = load_cobol(cli, file, *repair)?;
            print_json(&ast)
        }
        Command::Analyze { file, repair } => {
            let ast = load_cobol(cli, file, *repair)?;
            print_json(&analyze(&ast))
        }
        Command::Corpus { command: CorpusCommand::Build { dir, min_statements } } => {
            corpus_build(cli, dir, *min_statements)
        }
        Command::Transpile { file, model, tau } => transpile(cli, file, model.as_deref(), *tau),
        Command::Train(args) => train(cli, args),
        Command::Evaluate(args) => evaluate(cli, args),
        Command::Report(args) => report(cli, args),
        Command::Synth(args) => synth(cli, args),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    Ok(())
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

fn load_cobol(cli: &Cli, path: &Path, with_repair: bool) -> Result<CobolAst> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let id = path.file_stem().map_or_else(|| "program".into(), |s| s.to_string_lossy().into_owned());
    let mut file = SourceFile::new(id, text).with_format(cli.format.into());
    if with_repair {
        let (fixed, log) = repair(&file);
        if log.verdict == Verdict::Rejected {
            bail!("{}: rejected by repair: {}", path.display(), log.reason.unwrap_or_default());
        }
        for e in &log.entries {
            eprintln!("repaired: {e:?}");
        }
        file = fixed;
    }
    parse_source(&file).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn manifest_path(p: &Path) -> PathBuf {
    if p.is_dir() {
        p.join(MANIFEST_FILE)
    } else {
        p.to_path_buf()
    }
}

fn load_manifest(p: &Path) -> Result<CorpusManifest> {
    Ok(CorpusManifest::load(&manifest_path(p))?)
}

#[derive(Serialize)]
struct BuildSummary {
    manifest: PathBuf,
    total: usize,
    clean: usize,
    repaired: usize,
    rejected: usize,
    duplicate: usize,
    trivial: usize,
    train: usize,
    test: usize,
    with_oracle: usize,
}

fn corpus_build(cli: &Cli, dir: &Path, min_statements: usize) -> Result<()> {
    let root = dir.canonicalize().with_context(|| format!("cannot open corpus directory {}", dir.display()))?;
    let config = IngestConfig { format: cli.format.into(), min_statements, ..IngestConfig::default() };
    let ingested = corpus::ingest(&root, &config)?;
    let curated = corpus::curate(&ingested, min_statements);
    let split = corpus::split(&curated, cli.seed)?;
    let out = cli.out.clone().unwrap_or_else(|| root.clone());
    let path = split.save(&out)?;
    let s = split.summary();
    print_json(&BuildSummary {
        manifest: path,
        total: s.total(),
        clean: s.clean,
        repaired: s.repaired,
        rejected: s.rejected,
        duplicate: s.duplicate,
        trivial: s.trivial,
        train: split.in_split(Split::Train).count(),
        test: split.in_split(Split::Test).count(),
        with_oracle: split.eligible().filter(|r| r.has_oracle()).count(),
    })
}

fn transpile(cli: &Cli, file: &Path, model_path: Option<&Path>, tau: f64) -> Result<()> {
    let ast = load_cobol(cli, file, true)?;
    let actions = match model_path {
        Some(p) => {
            let ckpt = model::load(p)?;
            model::to_actions(&model::predict(&ast, &ckpt, tau)?)
        }
        None => default_actions(&ast),
    };
    let t = translate(&ast, &actions);
    for f in &t.fallbacks {
        eprintln!("fallback: {f}");
    }
    let java = emit_java(&t.java);
    match &cli.out {
        Some(out) => write_file(out, java),
        None => {
            print!("{java}");
            Ok(())
        }
    }
}

fn model_config(cli: &Cli, args: &TrainArgs) -> ModelConfig {
    let mut c = if args.paper_scale { ModelConfig::paper_scale() } else { ModelConfig::default() };
    c.seed = cli.seed;
    if let Some(v) = args.layers {
        c.layers = v;
    }
    if let Some(v) = args.hidden {
        c.hidden = v;
    }
    if let Some(v) = args.epochs {
        c.epochs = v;
    }
    if let Some(v) = args.batch {
        c.batch = v;
    }
    if let Some(v) = args.lr {
        c.lr = v;
    }
    if let Some(v) = args.dropout {
        c.dropout = v;
    }
    c
}

#[derive(Serialize)]
struct TrainSummary<'a> {
    checkpoint: &'a Path,
    samples: usize,
    validation_samples: usize,
    parameters: usize,
    config: &'a ModelConfig,
    final_loss: f64,
    train_accuracy: f64,
    val_accuracy: Option<f64>,
}

fn train(cli: &Cli, args: &TrainArgs) -> Result<()> {
    let out = cli.out.as_deref().context("train needs --out <checkpoint path>")?;
    let manifest = load_manifest(&args.manifest)?;
    let config = model_config(cli, args);
    config.validate()?;
    let val_fold = args.val_fold;
    let in_train = |r: &corpus::Record| r.split == Some(Split::Train);
    let data = training_samples(&manifest, |r| in_train(r) && (val_fold.is_none() || r.fold != val_fold));
    let validation = match val_fold {
        Some(k) => training_samples(&manifest, |r| in_train(r) && r.fold == Some(k)),
        None => Vec::new(),
    };
    if data.is_empty() {
        bail!("no labelled Train records in {}", args.manifest.display());
    }
    let ckpt = train_validated(&data, &validation, &config)?;
    model::save(&ckpt, out)?;
    let last = ckpt.history.last().context("empty training history")?;
    print_json(&TrainSummary {
        checkpoint: out,
        samples: data.len(),
        validation_samples: validation.len(),
        parameters: ckpt.parameter_count(),
        config: &ckpt.config,
        final_loss: last.loss,
        train_accuracy: last.train_accuracy,
        val_accuracy: last.val_accuracy,
    })
}

fn to_jsonl<T: Serialize>(items: &[T]) -> Result<String> {
    let mut s = String::new();
    for item in items {
        s.push_str(&serde_json::to_string(item)?);
        s.push('\n');
    }
    Ok(s)
}

fn evaluate(cli: &Cli, args: &EvaluateArgs) -> Result<()> {
    let approach: Approach = args.approach.parse().map_err(anyhow::Error::msg)?;
    let manifest = load_manifest(&args.manifest)?;
    let ckpt: Option<ModelCheckpoint> = match &args.model {
        Some(p) => Some(model::load(p)?),
        None => None,
    };
    let opts =
        EvalOptions { tau: args.tau, per_fold: args.per_fold, external_dir: args.external_dir.clone(), fold_config: None };
    let eval = evaluate_corpus(&manifest, &approach, ckpt.as_ref(), &opts)?;

    let test: Vec<&corpus::Record> = manifest.in_split(Split::Test).collect();
    let mut pairs = Vec::new();
    for (record, result) in test.iter().zip(&eval.files) {
        if let Ok((ast, java)) = translate_record(&manifest, record, &approach, ckpt.as_ref(), &opts) {
            pairs.push(AstPair {
                id: record.id.clone(),
                cobol: syntax_tree(&ast),
                java: java.to_tree(),
                cx_before: result.cx_before,
                cx_after: result.cx_after,
            });
        }
    }

    let out = match &cli.out {
        Some(o) => o.clone(),
        None => manifest_path(&args.manifest).parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf),
    };
    let slug = approach.slug();
    write_file(&out.join(format!("eval.{slug}.json")), serde_json::to_string_pretty(&eval.summary)? + "\n")?;
    write_file(&out.join(format!("results.{slug}.jsonl")), to_jsonl(&eval.files)?)?;
    write_file(&out.join(format!("pairs.{slug}.jsonl")), to_jsonl(&pairs)?)?;
    print_json(&eval.summary)
}

fn timestamp(explicit: Option<&str>) -> Result<String> {
    if let Some(t) = explicit {
        return Ok(t.to_string());
    }
    if let Ok(epoch) = std::env::var("SOURCE_DATE_EPOCH") {
        let secs: i64 = epoch.trim().parse().with_context(|| format!("SOURCE_DATE_EPOCH is not an integer: {epoch}"))?;
        let t = DateTime::<Utc>::from_timestamp(secs, 0).context("SOURCE_DATE_EPOCH out of range")?;
        return Ok(t.to_rfc3339_opts(SecondsFormat::Secs, true));
    }
    Ok(Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true))
}

fn read_pairs(path: &Path) -> Result<Vec<AstPair>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).with_context(|| format!("{}:{}: malformed AST pair", path.display(), i + 1)))
        .collect()
}

fn report(cli: &Cli, args: &ReportArgs) -> Result<()> {
    let out = cli.out.as_deref().context("report needs --out <directory>")?;
    let mut summaries = Vec::new();
    for p in &args.eval {
        let text = fs::read_to_string(p).with_context(|| format!("cannot read {}", p.display()))?;
        let s: EvalSummary = serde_json::from_str(&text).with_context(|| format!("{}: not an evaluation summary", p.display()))?;
        summaries.push(s);
    }
    let mut pairs = match &args.pairs {
        Some(p) => read_pairs(p)?,
        None => Vec::new(),
    };
    if let Some(m) = &args.manifest {
        let manifest = load_manifest(m)?;
        if let Some(bad) = pairs.iter().find(|p| !manifest.records.iter().any(|r| r.id == p.id)) {
            bail!("AST pair {} is not in the manifest", bad.id);
        }
    }
    pairs.truncate(args.max_pairs);
    let bundle = ReportBundle::new(summaries, pairs, timestamp(args.generated_at.as_deref())?);
    emit_json(&bundle, &out.join("report.json"))?;
    emit_html(&bundle, &out.join("report.html"))?;
    for p in &bundle.ast_pairs {
        let stem = p.id.to_lowercase();
        write_file(&out.join(format!("ast-{stem}-cobol.svg")), standalone(&render_ast_svg(&p.cobol, Palette::Red)))?;
        write_file(&out.join(format!("ast-{stem}-java.svg")), standalone(&render_ast_svg(&p.java, Palette::Green)))?;
    }
    eprintln!("wrote {}", out.join("report.html").display());
    Ok(())
}

fn synth(cli: &Cli, args: &SynthArgs) -> Result<()> {
    let out = cli.out.as_deref().context("synth needs --out <directory>")?;
    let profile = match args.profile {
        ProfileArg::Acceptance => Profile::Acceptance,
        ProfileArg::Sample => Profile::Sample,
        ProfileArg::Roundtrip => Profile::RoundTrip,
    };
    let every = (args.oracle_every > 0).then_some(args.oracle_every);
    let paths = write_corpus(out, args.count, cli.seed, profile, &args.prefix, every)
        .with_context(|| format!("cannot write corpus to {}", out.display()))?;
    eprintln!("wrote {} programs to {}", paths.len(), out.display());
    Ok(())
}
