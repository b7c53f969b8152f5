use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use projconst_cli::{exit_code, parse_config, run_suite, CliError, Command, Flags, Lemma};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Space,
    Params,
    Ledger,
    Classify,
    Minproj,
    Verify,
    Corollary,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Space => Command::Space,
            Cmd::Params => Command::Params,
            Cmd::Ledger => Command::Ledger,
            Cmd::Classify => Command::Classify,
            Cmd::Minproj => Command::Minproj,
            Cmd::Verify => Command::Verify,
            Cmd::Corollary => Command::Corollary,
        }
    }
}

/// Minimal projections onto hyperplanes: bounds, searches and certificates.
#[derive(Debug, Parser)]
#[command(name = "projconst", version)]
struct Args {
    command: Cmd,
    /// JSON space definition.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the JSON report on stdout.
    #[arg(long)]
    json: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Dimension of the explicit family (`corollary`, `ledger`, `verify`).
    #[arg(long)]
    n: Option<usize>,
    /// One of funkcjonaly, objetosc, modul, modul2, markov, vandermonde, zawezenie.
    #[arg(long)]
    lemma: Option<String>,
}

fn threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PROJCONST_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| CliError::Usage(format!("PROJCONST_THREADS={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let outcome = (|| {
        threads()?;
        let lemma = match &args.lemma {
            None => None,
            Some(s) => Some(Lemma::parse(s).ok_or_else(|| CliError::Usage(format!("unknown lemma {s:?}")))?),
        };
        let config = match &args.config {
            None => None,
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                Some(parse_config(&text)?)
            }
        };
        let flags = Flags { seed: args.seed, restarts: args.restarts, n: args.n, lemma };
        run_suite(args.command.into(), config.as_ref(), &flags)
    })();
    let code = exit_code(&outcome);
    match &outcome {
        Ok(report) => {
            if args.json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.summary());
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    eprintln!("runtime: {:.3} s", start.elapsed().as_secs_f64());
    ExitCode::from(code as u8)
}
