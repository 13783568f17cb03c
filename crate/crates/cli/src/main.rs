//! `relicforge` command line.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use relicforge::cobol::SourceFormat;

#[derive(Debug, Parser)]
#[command(name = "relicforge", version, about = "COBOL analysis, translation to Java and differential evaluation")]
pub struct Cli {
    /// Seed for splits, training and generated corpora.
    #[arg(long, global = true, env = "RELICFORGE_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Worker threads for per-file work (default: logical cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    /// Source reference format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Free)]
    pub format: Format,
    /// Output location; a file or directory depending on the subcommand.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Free,
    Fixed,
}

impl From<Format> for SourceFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Free => SourceFormat::Free,
            Format::Fixed => SourceFormat::Fixed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the AST of a COBOL file as JSON.
    Parse {
        file: PathBuf,
        /// Apply the repair pass before parsing.
        #[arg(long)]
        repair: bool,
    },
    /// Print complexity, coupling and features of a COBOL file as JSON.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        repair: bool,
    },
    /// Corpus operations.
    Corpus {
        #[command(subcommand)]
        command: CorpusCommand,
    },
    /// Translate a COBOL file to Java (printed, or written to --out).
    Transpile {
        file: PathBuf,
        /// Model checkpoint steering the translation.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Confidence a prediction needs to replace the rule default.
        #[arg(long, default_value_t = relicforge::evaluate::DEFAULT_TAU)]
        tau: f64,
    },
    /// Train the action classifier on the labelled Train records (--out: checkpoint path).
    Train(TrainArgs),
    /// Score the Test records under one approach (--out: directory).
    Evaluate(EvaluateArgs),
    /// Build report.json and report.html from evaluation summaries (--out: directory).
    Report(ReportArgs),
    /// Generate a synthetic COBOL corpus (--out: directory).
    Synth(SynthArgs),
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Ingest, repair, deduplicate, filter and split a directory of sources
    /// (--out: manifest directory, default the corpus directory).
    Build {
        dir: PathBuf,
        /// Programs with fewer statements are dropped as trivial.
        #[arg(long, default_value_t = relicforge::corpus::MIN_STATEMENTS)]
        min_statements: usize,
    },
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub batch: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long)]
    pub dropout: Option<f64>,
    /// Three layers of 256 units; explicit flags still apply on top.
    #[arg(long)]
    pub paper_scale: bool,
    /// Hold out this Train fold and record validation accuracy on it.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..5))]
    pub val_fold: Option<u8>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// rules, ai, external or external:<name>.
    #[arg(long, default_value = "rules")]
    pub approach: String,
    /// Checkpoint for the ai approach.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = relicforge::evaluate::DEFAULT_TAU)]
    pub tau: f64,
    /// Also cross-validate over the five Train folds.
    #[arg(long)]
    pub per_fold: bool,
    /// Directory of external translations mirroring the corpus layout.
    #[arg(long)]
    pub external_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Evaluation summaries (eval.<approach>.json).
    #[arg(long, num_args = 1.., required = true)]
    pub eval: Vec<PathBuf>,
    /// AST pairs (pairs.<approach>.jsonl).
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    /// How many AST pairs to draw.
    #[arg(long, default_value_t = 2)]
    pub max_pairs: usize,
    /// Timestamp written into the report; falls back to SOURCE_DATE_EPOCH,
    /// then the current time.
    #[arg(long)]
    pub generated_at: Option<String>,
    /// Manifest the pair ids must belong to.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Acceptance,
    Sample,
    Roundtrip,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = ProfileArg::Acceptance)]
    pub profile: ProfileArg,
    /// Write oracle labels and Java for every k-th file (0: none).
    #[arg(long, default_value_t = 1)]
    pub oracle_every: usize,
    #[arg(long, default_value = "syn")]
    pub prefix: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
