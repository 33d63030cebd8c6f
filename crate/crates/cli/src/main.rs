//! `morphtag` command-line front end.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::PipelineConfig;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_SEGMENTATION: u8 = 2;
pub const EXIT_DECODE: u8 = 3;
pub const EXIT_FORMAT: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            msg: msg.into(),
        }
    }

    pub fn format(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_FORMAT,
            msg: msg.into(),
        }
    }
}

impl From<morphtag::Error> for CliError {
    fn from(e: morphtag::Error) -> Self {
        use morphtag::Error as E;
        let code = match &e {
            E::Segmentation(_) => EXIT_SEGMENTATION,
            E::Decode(_) | E::Training(_) => EXIT_DECODE,
            E::InvalidArgument(_) => EXIT_USAGE,
            E::Format { .. } | E::TagPath { .. } | E::UnknownTags(_) | E::Model(_) | E::Io(_) => {
                EXIT_FORMAT
            }
        };
        CliError {
            code,
            msg: e.to_string(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "morphtag",
    version,
    about = "Dictionary segmentation, HMM tagging and rule-based correction"
)]
struct Cli {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Dictionary file (overrides config key `dict`).
    #[arg(long, global = true)]
    dict: Option<PathBuf>,
    /// Connectivity file (`conn`).
    #[arg(long, global = true)]
    conn: Option<PathBuf>,
    /// Tagset projection file (`projection`).
    #[arg(long, global = true)]
    projection: Option<PathBuf>,
    /// Model file (`model`).
    #[arg(long, global = true)]
    model: Option<PathBuf>,
    /// Seed (`seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override any config key, e.g. `--set min_score=3`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true, value_parser = config::parse_override)]
    overrides: Vec<(String, String)>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every segmentation candidate of each input sentence.
    Analyze(AnalyzeArgs),
    /// Train an HMM and write it to a model file.
    Train(TrainArgs),
    /// Tag text with the HMM, optionally followed by correction rules.
    Tag(TagArgs),
    /// Learn correction rules from tagger output and gold annotation.
    LearnRules(LearnArgs),
    /// Compare tagged corpora against gold and print a results row.
    Eval(EvalArgs),
    /// Generate a synthetic corpus with its dictionary.
    Synth(SynthArgs),
    /// Split a corpus into EM, rule-learning and test parts.
    Split(SplitArgs),
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Raw text, one sentence per line.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrainMode {
    Supervised,
    Em,
    BootstrapThenEm,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long, value_enum)]
    pub mode: TrainMode,
    /// Tagged corpus (supervised, bootstrap-then-em).
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Segmented corpus whose tags are ignored (em, bootstrap-then-em).
    #[arg(long)]
    pub untagged: Option<PathBuf>,
    /// Starting model for em; defaults to the `model` setting.
    #[arg(long)]
    pub init: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    /// One sentence per line, Eojeols separated by whitespace.
    Raw,
    /// Corpus format; the given segmentation is kept and tags are replaced.
    Corpus,
}

#[derive(Args, Debug)]
pub struct TagArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "raw")]
    pub input_format: InputFormat,
    /// Apply correction rules; without a value, the `rules` setting is used.
    #[arg(long, num_args = 0..=1)]
    pub rules: Option<Option<PathBuf>>,
    /// Output corpus file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LearnArgs {
    #[arg(long)]
    pub gold: PathBuf,
    /// First-phase tagger output aligned with `--gold`; computed with the
    /// model if absent.
    #[arg(long)]
    pub current: Option<PathBuf>,
    /// Rules file to write; defaults to the `rules` setting.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub gold: PathBuf,
    /// HMM-alone output.
    #[arg(long)]
    pub hmm: PathBuf,
    /// Two-phase output; the HMM output is reused if absent.
    #[arg(long)]
    pub two_phase: Option<PathBuf>,
    /// Row label.
    #[arg(long, default_value = "total")]
    pub name: String,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub sentences: Option<usize>,
    /// Drop the context-dependent perturbations.
    #[arg(long)]
    pub control: bool,
}

#[derive(Args, Debug)]
pub struct SplitArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut overrides = Vec::new();
    for (key, value) in [
        ("dict", &cli.dict),
        ("conn", &cli.conn),
        ("projection", &cli.projection),
        ("model", &cli.model),
    ] {
        if let Some(p) = value {
            overrides.push((key.to_string(), p.display().to_string()));
        }
    }
    if let Some(s) = cli.seed {
        overrides.push(("seed".into(), s.to_string()));
    }
    overrides.extend(cli.overrides);
    let cfg = PipelineConfig::load(cli.config.as_deref(), &overrides)?;
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Analyze(a) => commands::analyze(&cfg, &a, &mut out),
        Command::Train(a) => commands::train(&cfg, &a, &mut out),
        Command::Tag(a) => commands::tag(&cfg, &a, &mut out),
        Command::LearnRules(a) => commands::learn_rules(&cfg, &a, &mut out),
        Command::Eval(a) => commands::eval(&cfg, &a, &mut out),
        Command::Synth(a) => commands::synth(&cfg, &a, &mut out),
        Command::Split(a) => commands::split(&cfg, &a, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("morphtag: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
