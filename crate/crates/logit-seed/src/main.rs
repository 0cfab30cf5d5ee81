//! `logit-seed`: run the crate's experiments from the command line.
//!
//! Three subcommands, all driven by the same flat `key = value` config
//! format (every flag is optional; sensible desk-scale defaults per task):
//!
//! ```text
//! logit-seed analyze  [--config FILE] [--out DIR]
//! logit-seed train    [--config FILE] [--task T] [--init S] [--seed N] [--out DIR]
//! logit-seed compare  [--config FILE] [--task T] [--seed N] [--out DIR]
//! ```

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use logit_seed::config::Task;
use logit_seed::experiment::{compare_strategies, run_experiment};
use logit_seed::{ExperimentConfig, InitStrategy, Result};

#[derive(Parser)]
#[command(
    name = "logit-seed",
    version,
    about = "Entropy-guided initialization experiments for logistic networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the entropy-bound surface grid (surface.csv) without training.
    Analyze(RunArgs),
    /// Train one task with one strategy across the configured seeds.
    Train(RunArgs),
    /// Train every applicable strategy on the same task and tabulate.
    Compare(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Flat `key = value` config file; omitted keys take task defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Task override: xor | mnist-shallow | mnist-deep | copy-memory | analyze.
    #[arg(long)]
    task: Option<String>,
    /// Initialization override: lecun | glorot | ortho | lsuv | random+EP | ortho+EP.
    #[arg(long)]
    init: Option<String>,
    /// Replace the configured seed list with this single seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for CSV outputs.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flatten the file (if any) and the CLI overrides into one config text,
/// relying on the parser's last-key-wins task selection.
fn build_config(args: &RunArgs, forced_task: Option<Task>) -> Result<ExperimentConfig> {
    let mut text = match &args.config {
        Some(path) => std::fs::read_to_string(path).map_err(|e| {
            logit_seed::Error::Config(format!("cannot read config {}: {e}", path.display()))
        })?,
        None => String::new(),
    };
    let mut push = |key: &str, value: &str| {
        let _ = writeln!(text, "\n{key} = {value}");
    };
    if let Some(task) = &args.task {
        push("task", task);
    }
    if let Some(task) = forced_task {
        push("task", task.name());
    }
    if let Some(init) = &args.init {
        push("init", init);
    }
    if let Some(seed) = args.seed {
        push("seeds", &seed.to_string());
    }
    if let Some(out) = &args.out {
        push("output_dir", &out.display().to_string());
    }
    ExperimentConfig::from_text(&text)
}

fn run_train(config: &ExperimentConfig) -> Result<()> {
    let summary = run_experiment(config)?;
    println!(
        "task {}  strategy {}  config {}",
        summary.task, summary.strategy, summary.config_hash
    );
    for o in &summary.outcomes {
        println!(
            "seed {:>3}: objective {:.6}  train_error {:.4}  {} {:.6}  ({:.1} s)",
            o.seed,
            o.final_objective,
            o.final_train_error,
            summary.metric_name,
            o.final_metric,
            o.wall_clock_s
        );
    }
    println!(
        "{} mean {:.6}  std {:.6}",
        summary.metric_name, summary.metric_mean, summary.metric_std
    );
    println!("outputs in {}", config.output_dir.display());
    Ok(())
}

fn run_compare(config: &ExperimentConfig) -> Result<()> {
    let mut configs = Vec::new();
    for strategy in InitStrategy::all() {
        if config.task == Task::CopyMemory && matches!(strategy, InitStrategy::Lsuv { .. }) {
            eprintln!("note: skipping lsuv (not defined for the recurrent task)");
            continue;
        }
        let mut c = config.clone();
        c.strategy = strategy;
        configs.push(c);
    }
    let comparison = compare_strategies(&configs)?;
    print!("{}", comparison.to_text());
    println!("outputs in {}", config.output_dir.display());
    Ok(())
}

fn real_main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Analyze(args) => run_train(&build_config(args, Some(Task::Analyze))?),
        Command::Train(args) => run_train(&build_config(args, None)?),
        Command::Compare(args) => run_compare(&build_config(args, None)?),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
