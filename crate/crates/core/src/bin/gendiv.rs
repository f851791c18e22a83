use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gendiv::cli::{check_text, fmt_text, recheck_text, CommandOutput, ParseOptions, RunOptions};

#[derive(Parser)]
#[command(name = "gendiv", version, about = "Check algebra documents and re-validate their certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every assertion in a document.
    Check {
        file: PathBuf,
        /// Emit a JSON report with certificates.
        #[arg(long)]
        json: bool,
        /// Default bound for bounded searches.
        #[arg(long)]
        bound: Option<u32>,
        /// Accept declared primes without verifying them.
        #[arg(long)]
        trust_primes: bool,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Re-validate the certificates of a JSON report.
    Recheck { report: PathBuf },
    /// Print a document in canonical form.
    Fmt { file: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, CommandOutput> {
    std::fs::read_to_string(path).map_err(|e| CommandOutput {
        stdout: String::new(),
        stderr: format!("error: {}: {}\n", path.display(), e),
        code: 3,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Check { file, json, bound, trust_primes, jobs } => read(file).map(|text| {
            check_text(&text, &ParseOptions { trust_primes: *trust_primes }, &RunOptions { bound: *bound, jobs: *jobs }, *json)
        }),
        Command::Recheck { report } => read(report).map(|t| recheck_text(&t)),
        Command::Fmt { file } => read(file).map(|t| fmt_text(&t)),
    }
    .unwrap_or_else(|e| e);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
