//! Run the same task under several initialization strategies and print the
//! aggregated comparison table (the library call behind `logit-seed
//! compare`). Writes comparison.csv plus one run directory per strategy.

use logit_seed::{compare_strategies, ExperimentConfig, InitStrategy, Task};

fn main() -> logit_seed::Result<()> {
    let mut base = ExperimentConfig::defaults(Task::Xor);
    base.seeds = (0..5).collect();
    base.iterations = 4000;
    base.output_dir = "target/example-runs/compare".into();

    let configs: Vec<ExperimentConfig> = [
        InitStrategy::Lecun,
        InitStrategy::Glorot,
        InitStrategy::Ortho,
        InitStrategy::lsuv(),
        InitStrategy::RandomEp,
        InitStrategy::OrthoEp,
    ]
    .into_iter()
    .map(|strategy| {
        let mut c = base.clone();
        c.strategy = strategy;
        c
    })
    .collect();

    let comparison = compare_strategies(&configs)?;
    println!(
        "{:>10} | {:>5} | {:>12} | {:>12} | {:>8}",
        "strategy", "seeds", comparison.metric_name, "std", "mean s"
    );
    println!("{}", "-".repeat(60));
    for row in &comparison.rows {
        println!(
            "{:>10} | {:>5} | {:>12.6} | {:>12.6} | {:>8.2}",
            row.strategy, row.seeds, row.metric_mean, row.metric_std, row.wall_clock_mean_s
        );
    }
    println!("\nfull table in {}/comparison.csv", base.output_dir.display());
    Ok(())
}
