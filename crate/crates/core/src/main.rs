use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use reshetnyak::cli::{self, Dim, Report, RunConfig, Settings};
use reshetnyak::{Error, Result};

/// Derive sphere operators of higher-order Reshetnyak formulas and verify ray-transform isometries.
#[derive(Parser)]
#[command(name = "reshetnyak", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print Ã^(m,r,l) and A^(m,r,l) for l = 0..r with their structural checks.
    Derive(Flags),
    /// Run a verification suite; exit status 0 iff every asserted check passes.
    Verify(Flags),
    /// Render one or more saved reports as a table.
    Report {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Integer dimension or "symbolic".
    #[arg(long)]
    n: Option<Dim>,
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    #[arg(long)]
    grid_volume: Option<usize>,
    #[arg(long)]
    grid_dirs: Option<usize>,
    #[arg(long)]
    grid_offsets: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Where to write the JSON report.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    suite: Option<String>,
    /// File of `key = value` lines; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn resolve(self) -> Result<RunConfig> {
        let file = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                Settings::parse_file(&text)?
            }
            None => Settings::default(),
        };
        let flags = Settings {
            m: self.m,
            r: self.r,
            n: self.n,
            s: self.s,
            t: self.t,
            grid_volume: self.grid_volume,
            grid_dirs: self.grid_dirs,
            grid_offsets: self.grid_offsets,
            tol: self.tol,
            out: self.out,
            suite: self.suite,
        };
        RunConfig::resolve(flags.over(file))
    }
}

fn finish(rep: &Report, cfg: &RunConfig) -> Result<ExitCode> {
    if let Some(out) = &cfg.out {
        rep.write(out)?;
    }
    Ok(if rep.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Derive(flags) => {
            let cfg = flags.resolve()?;
            let (text, rep) = cli::derive(&cfg)?;
            print!("{text}");
            finish(&rep, &cfg)
        }
        Command::Verify(flags) => {
            let cfg = flags.resolve()?;
            let rep = cli::verify(&cfg)?;
            print!("{}", cli::render(std::slice::from_ref(&rep)));
            finish(&rep, &cfg)
        }
        Command::Report { paths } => {
            print!("{}", cli::report(&paths)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
