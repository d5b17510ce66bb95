//! `liecontact` command-line runner.
//!
//! `run` executes verification suites and writes a JSON report; `chains`
//! samples a chain curve into CSV. Exit status is 0 when every check passes,
//! 1 when a check fails and 2 on usage or I/O errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use liecontact::exec::Strategy;
use liecontact::report::{chains_export, run, ExportConfig, GSpec, Suite, SuiteConfig};

#[derive(Parser, Debug)]
#[command(name = "liecontact", version, about = "Exact checks for Lie contact models and their chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification suites and emit a JSON report.
    Run(RunArgs),
    /// Sample a chain through the model and emit CSV.
    Chains(ChainsArgs),
}

#[derive(Args, Debug)]
struct SignatureArgs {
    #[arg(long, default_value_t = 2)]
    p: usize,
    #[arg(long, default_value_t = 1)]
    q: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    sig: SignatureArgs,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Suite to run; repeat for several. Defaults to all suites.
    #[arg(long = "suite", value_name = "NAME")]
    suites: Vec<String>,
    /// Report path; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock time per check (makes reports run-dependent).
    #[arg(long)]
    timing: bool,
    /// Evaluate trials on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct ChainsArgs {
    #[command(flatten)]
    sig: SignatureArgs,
    /// `identity` or `random` (drawn from the seed).
    #[arg(long, default_value = "identity")]
    g: String,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    t_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t_max: f64,
    #[arg(long, default_value_t = 21)]
    steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_out(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_cmd(args: RunArgs) -> anyhow::Result<bool> {
    let suites = if args.suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        args.suites.iter().map(|s| s.parse()).collect::<Result<Vec<Suite>, _>>()?
    };
    let mut cfg = SuiteConfig::new(args.sig.p, args.sig.q, args.sig.seed, args.trials, suites);
    cfg.timing = args.timing;
    if args.sequential {
        cfg.strategy = Strategy::Sequential;
    }
    let report = run(&cfg)?;
    write_out(&args.out, &report.to_json())?;
    for r in report.failures() {
        eprintln!("FAIL {}: {}", r.name, r.anchor);
    }
    Ok(report.passed)
}

fn chains_cmd(args: ChainsArgs) -> anyhow::Result<bool> {
    let cfg = ExportConfig {
        p: args.sig.p,
        q: args.sig.q,
        seed: args.sig.seed,
        g: args.g.parse::<GSpec>()?,
        t_min: args.t_min,
        t_max: args.t_max,
        steps: args.steps,
    };
    write_out(&args.out, &chains_export(&cfg)?)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run_cmd(a),
        Command::Chains(a) => chains_cmd(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
