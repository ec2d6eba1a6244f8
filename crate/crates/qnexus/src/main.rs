use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qnexus::config::{arch_to_toml, builtin_names, split_override, ConfigError};
use qnexus::run::log_sizes;
use qnexus::{resolve_arch, run, sweep, Format, RunConfig, RunError, SweepConfig};

/// Compile workloads onto modular fault-tolerant architectures and estimate
/// their error, runtime and physical resources.
#[derive(Parser)]
#[command(name = "qnexus", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile one workload on one architecture.
    Run(RunArgs),
    /// Compile a workload at several sizes on several architectures.
    Sweep(SweepArgs),
    /// Inspect architectures.
    #[command(subcommand)]
    Arch(ArchCommand),
}

#[derive(Args)]
struct Common {
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Report formats to write.
    #[arg(long = "format", value_enum, value_delimiter = ',', default_values_t = Format::ALL.to_vec())]
    formats: Vec<Format>,
    /// Architecture override `<module>.<field>=<value>`, e.g. `qpu.d=21`.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Args)]
struct RunArgs {
    /// aqft:n=<n>[,k=<k>] | adder:bits=<b> | hubbard:lx=<x>[,ly=<y>,steps=<s>] | rsa | file:<path>
    #[arg(long)]
    workload: String,
    /// Builtin architecture name or architecture file.
    #[arg(long)]
    arch: String,
    #[command(flatten)]
    common: Common,
    /// Program fidelity used for the RSA runtime.
    #[arg(long)]
    fidelity: Option<f64>,
    /// Resize the architecture to the circuit width.
    #[arg(long)]
    fit: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Workload without its size parameter, e.g. `aqft` or `aqft:k=8`.
    #[arg(long)]
    workload: String,
    /// Explicit sizes.
    #[arg(long, value_delimiter = ',', conflicts_with = "range")]
    sizes: Vec<u32>,
    /// Log-spaced size range `<lo>..<hi>`.
    #[arg(long)]
    range: Option<String>,
    /// Number of sizes in `--range`.
    #[arg(long, default_value_t = 8)]
    points: usize,
    /// Architectures, repeated or comma separated.
    #[arg(long = "arch", value_delimiter = ',', required = true)]
    archs: Vec<String>,
    #[command(flatten)]
    common: Common,
    /// Cells compiled in parallel.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum ArchCommand {
    /// List builtin architectures.
    List,
    /// Print an architecture as a config file.
    Show {
        arch: String,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Check an architecture and print its diagnostics.
    Validate {
        arch: String,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn overrides(raw: &[String]) -> Result<Vec<(String, String)>, ConfigError> {
    raw.iter().map(|o| split_override(o)).collect()
}

fn parse_range(s: &str, points: usize) -> Result<Vec<u32>, ConfigError> {
    let bad = || ConfigError::Invalid(format!("range `{s}`: expected <lo>..<hi> with 1 <= lo <= hi"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let (lo, hi): (u32, u32) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok(log_sizes(lo, hi, points))
}

fn list_files(artifacts: &qnexus::run::Artifacts, dir: &std::path::Path) {
    for name in artifacts.keys() {
        println!("{}", dir.join(name).display());
    }
}

fn execute(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Run(a) => {
            let cfg = RunConfig {
                workload: a.workload,
                arch: a.arch,
                out: a.common.out,
                formats: a.common.formats,
                overrides: overrides(&a.common.overrides)?,
                fidelity: a.fidelity,
                fit: a.fit,
            };
            let artifacts = run(&cfg)?;
            list_files(&artifacts, &cfg.out);
        }
        Command::Sweep(a) => {
            let sizes = match &a.range {
                Some(r) => parse_range(r, a.points)?,
                None => a.sizes,
            };
            let cfg = SweepConfig {
                workload: a.workload,
                sizes,
                archs: a.archs,
                out: a.common.out,
                formats: a.common.formats,
                overrides: overrides(&a.common.overrides)?,
                jobs: a.jobs,
            };
            let cells = sweep(&cfg)?;
            let failed = cells.iter().filter(|c| c.outcome.is_err()).count();
            println!("{}", cfg.out.join("comparison.csv").display());
            println!("{} cells, {} failed", cells.len(), failed);
        }
        Command::Arch(ArchCommand::List) => {
            for name in builtin_names() {
                println!("{name}");
            }
        }
        Command::Arch(ArchCommand::Show { arch, overrides: o }) => {
            let spec = qnexus::apply_overrides(&qnexus::load_arch(&arch)?, &overrides(&o)?)?;
            print!("{}", arch_to_toml(&spec));
        }
        Command::Arch(ArchCommand::Validate { arch, overrides: o }) => {
            resolve_arch(&arch, &overrides(&o)?)?.map_err(RunError::Validation)?;
            println!("{arch}: ok");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
