//! `qpd`: run discrimination experiments from JSON configs.
//!
//! Exit status: 0 on success, 2 for configuration errors, 3 for model or
//! I/O failures.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qpd_core::Error;
use qpd_core::experiment::{
    self, ExperimentConfig, OperatorRef, OutputFormat, ProtocolKind, RunMode,
};

#[derive(Parser)]
#[command(
    name = "qpd",
    version,
    about = "Quantum process discrimination simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Worker threads for sampling (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the protocol catalog as JSON.
    ListProtocols,
    /// Minimal parallel uses to tell two unitaries apart.
    Plan {
        /// Gate name (i, x, y, z, h) or path to a JSON matrix.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
}

fn output_format(f: FormatArg) -> OutputFormat {
    match f {
        FormatArg::Json => OutputFormat::Json,
        FormatArg::Csv => OutputFormat::Csv,
    }
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            config,
            seed,
            trials,
            mode,
            out,
            format,
            threads,
        } => {
            let mut cfg = ExperimentConfig::from_path(&config)?;
            if let Some(s) = seed {
                cfg.seed = Some(s);
            }
            if let Some(t) = trials {
                cfg.trials = Some(t);
            }
            if let Some(m) = mode {
                cfg.mode = match m {
                    ModeArg::Exact => RunMode::Exact,
                    ModeArg::Sample => RunMode::Sample,
                };
            }
            if let Some(o) = out {
                cfg.out = Some(o);
            }
            if let Some(f) = format {
                cfg.format = output_format(f);
            }
            let report = experiment::run_with_threads(&cfg, threads)?;
            experiment::emit(&report, cfg.format, cfg.out.as_deref())?;
        }
        Command::ListProtocols => {
            let text = serde_json::to_string_pretty(&experiment::list_protocols())?;
            println!("{text}");
        }
        Command::Plan { a, b, format } => {
            let mut cfg = ExperimentConfig::new(ProtocolKind::Plan);
            cfg.a = Some(OperatorRef::Reference(a));
            cfg.b = Some(OperatorRef::Reference(b));
            let report = experiment::run(&cfg)?;
            experiment::emit(
                &report,
                format.map_or(OutputFormat::Json, output_format),
                None,
            )?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qpd: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}
