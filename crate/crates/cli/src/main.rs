use std::path::PathBuf;
use std::process::ExitCode;

use chaoswave::metrics::DEFAULT_PAIRS;
use chaoswave_cli::{run, CliConfig, Command, ReportFormat};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "chaoswave", version, about = "Wavelet-domain chaotic image cipher")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encrypt a P5 PGM into a cipher blob
    Encrypt(Io),
    /// Decrypt a cipher blob into a P5 PGM
    Decrypt(Io),
    /// Report correlation, entropy, NPCR and histograms for a plain/cipher pair
    Analyze(AnalyzeArgs),
    /// Write a key file with default parameters and a fresh x0
    Keygen {
        #[arg(long = "out")]
        output: PathBuf,
    },
    /// Write the shuffled, modulated wavelet-domain image as a normalized PGM
    Preview(Io),
}

#[derive(Args)]
struct KeyArg {
    /// Key file
    #[arg(long, env = "CHAOSWAVE_KEY")]
    key: Option<PathBuf>,
}

#[derive(Args)]
struct Io {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long = "out")]
    output: PathBuf,
    #[command(flatten)]
    key: KeyArg,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Plain image
    #[arg(long = "in")]
    input: PathBuf,
    /// Output directory
    #[arg(long = "out")]
    output: PathBuf,
    #[command(flatten)]
    key: KeyArg,
    /// Cipher blob; encrypted from --in with --key when omitted
    #[arg(long)]
    cipher: Option<PathBuf>,
    /// Seed for pair sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_PAIRS)]
    pairs: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn config(cli: Cli) -> CliConfig {
    let base = |command, input, output, key: KeyArg| CliConfig {
        command,
        input,
        output,
        key: key.key,
        cipher: None,
        seed: 0,
        pairs: DEFAULT_PAIRS,
        format: ReportFormat::Json,
    };
    match cli.command {
        Cmd::Encrypt(io) => base(Command::Encrypt, Some(io.input), io.output, io.key),
        Cmd::Decrypt(io) => base(Command::Decrypt, Some(io.input), io.output, io.key),
        Cmd::Preview(io) => base(Command::Preview, Some(io.input), io.output, io.key),
        Cmd::Keygen { output } => base(Command::Keygen, None, output, KeyArg { key: None }),
        Cmd::Analyze(a) => CliConfig {
            cipher: a.cipher,
            seed: a.seed,
            pairs: a.pairs,
            format: match a.format {
                Format::Json => ReportFormat::Json,
                Format::Csv => ReportFormat::Csv,
            },
            ..base(Command::Analyze, Some(a.input), a.output, a.key)
        },
    }
}

fn main() -> ExitCode {
    let config = config(Cli::parse());
    match run(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("chaoswave: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
