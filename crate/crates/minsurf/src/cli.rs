use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::run;
use crate::config::{Command, JetChoice, RunConfig, Source, DEFAULT_N};
use crate::error::{Failure, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "minsurf", version, about = "Minimal surfaces in S^4: invariants, associated family, monodromy")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Pointwise invariants: report.json plus one CSV per field.
    Analyze(Common),
    /// Integrates one member of the associated family and fits it to the input.
    Deform(Common),
    /// Scans the deck-generator monodromy over theta and locates the closing set.
    Monodromy(Common),
    /// Runs the full identity suite; exit 1 when any item fails.
    Verify(Common),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Jets {
    Analytic,
    Fd,
}

#[derive(Debug, Args)]
struct Common {
    /// Catalog surface: clifford, veronese or geodesic.
    #[arg(long, conflicts_with = "manifest", required_unless_present = "manifest")]
    catalog: Option<String>,
    /// Sampled surface described by a JSON manifest.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Nodes per axis for catalog surfaces (power of two, 32..=1024).
    #[arg(long, default_value_t = DEFAULT_N)]
    n: usize,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Number of uniformly spaced theta samples (at least 64).
    #[arg(long)]
    scan: Option<usize>,
    /// Distance below which a generator image counts as the identity.
    #[arg(long)]
    tol_close: Option<f64>,
    /// Amplitude of a seeded normal perturbation applied to the source.
    #[arg(long)]
    perturb: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Jet source override.
    #[arg(long, value_enum)]
    jets: Option<Jets>,
}

fn config(cli: Cli) -> RunConfig {
    let (command, c) = match cli.command {
        Cmd::Analyze(c) => (Command::Analyze, c),
        Cmd::Deform(c) => (Command::Deform, c),
        Cmd::Monodromy(c) => (Command::Monodromy, c),
        Cmd::Verify(c) => (Command::Verify, c),
    };
    let source = match (c.catalog, c.manifest) {
        (Some(name), _) => Source::Catalog(name),
        (None, Some(path)) => Source::Manifest(path),
        (None, None) => unreachable!("clap requires one source"),
    };
    RunConfig {
        command,
        source,
        n: c.n,
        theta: c.theta,
        scan: c.scan,
        tol_close: c.tol_close,
        perturb: c.perturb,
        seed: c.seed,
        out: c.out,
        jets: c.jets.map(|j| match j {
            Jets::Analytic => JetChoice::Analytic,
            Jets::Fd => JetChoice::Fd,
        }),
    }
}

/// Parses `args` into a [`RunConfig`]. Help and version requests come back
/// as `Err(Ok(text))`.
pub fn parse<I, T>(args: I) -> Result<RunConfig, Result<String, Failure>>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => Ok(config(cli)),
        Err(e) => match e.kind() {
            clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Err(Ok(e.to_string())),
            _ => Err(Err(Failure::config(e.to_string().trim_end().to_string()))),
        },
    }
}

/// Parses, runs and reports; returns the process exit code. Errors go to
/// stderr as JSON.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = match parse(args) {
        Ok(cfg) => run(&cfg),
        Err(Ok(text)) => {
            print!("{text}");
            return EXIT_OK;
        }
        Err(Err(f)) => Err(f),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", f.to_json());
            f.exit
        }
    }
}
