//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{CommandKind, ConfigLayer, RunConfig};
use crate::error::{Result, ScanError};
use crate::selftest::Fault;
use crate::{average, evolve, oracle, phase, selftest, with_workers};

#[derive(Debug, Parser)]
#[command(
    name = "floquet-scan",
    version,
    about = "Circuit complexity scans of the periodically driven Ising chain"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Time series C(t), one column per detuning
    Evolve(RunArgs),
    /// Time-averaged complexity and Floquet-mode complexities along a sweep
    Average(RunArgs),
    /// Phase labels on a (g0, g1) grid
    PhaseDiagram(RunArgs),
    /// High-frequency solution against RK4 integration
    Oracle(RunArgs),
    /// Sampled invariant checks
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON file with any of the flag values; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    layer: ConfigLayer,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<Fault>,
}

/// Parse `args` (program name first), run the command and return the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let (kind, args, fault) = match cli.command {
        Command::Evolve(a) => (CommandKind::Evolve, a, None),
        Command::Average(a) => (CommandKind::Average, a, None),
        Command::PhaseDiagram(a) => (CommandKind::PhaseDiagram, a, None),
        Command::Oracle(a) => (CommandKind::Oracle, a, None),
        Command::Selftest(s) => (CommandKind::Selftest, s.run, s.inject_fault),
    };
    let file = match &args.config {
        Some(path) => ConfigLayer::from_file(path)?,
        None => ConfigLayer::default(),
    };
    let cfg = RunConfig::resolve(kind, args.layer.over(file))?;
    with_workers(cfg.workers, || dispatch(&cfg, fault))?
}

fn dispatch(cfg: &RunConfig, fault: Option<Fault>) -> Result<()> {
    let out = cfg.out.as_deref();
    match cfg.command {
        CommandKind::Evolve => evolve::run(cfg)?.to_table(cfg).emit(out),
        CommandKind::Average => average::to_table(cfg, &average::run(cfg)?).emit(out),
        CommandKind::PhaseDiagram => {
            let diagram = phase::run(cfg)?;
            eprintln!("critical g0: {:?}", diagram.critical_g0);
            eprintln!("critical g1: {:?}", diagram.critical_g1);
            diagram.to_table(cfg).emit(out)
        }
        CommandKind::Oracle => {
            let runs = oracle::run(cfg)?;
            oracle::to_table(cfg, &runs).emit(out)?;
            for r in &runs {
                eprintln!(
                    "omega/J={:.6e}  max|C_analytic - C_ode|={:.6e}  norm drift={:.3e}",
                    r.params.omega / r.params.j,
                    r.max_dev,
                    r.norm_drift
                );
            }
            match oracle::drift_violation(&runs) {
                Some(msg) => Err(ScanError::Invariant(msg)),
                None => Ok(()),
            }
        }
        CommandKind::Selftest => {
            let report = selftest::run(cfg.seed, fault)?;
            let text = format!("{report}\n");
            match out {
                Some(path) => fs::write(path, &text).map_err(|source| ScanError::Io {
                    path: path.to_path_buf(),
                    source,
                })?,
                None => print!("{text}"),
            }
            if report.ok() {
                Ok(())
            } else {
                let failed: usize = report.suites.iter().map(|s| s.failures.len()).sum();
                Err(ScanError::Invariant(format!("{failed} self-test checks failed")))
            }
        }
    }
}
