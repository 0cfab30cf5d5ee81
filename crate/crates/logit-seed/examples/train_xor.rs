//! Train the Gaussian-cluster XOR task across seeds with two strategies and
//! compare outcomes. Writes summary.csv and per-seed telemetry under
//! target/example-runs/xor/.

use logit_seed::{run_experiment, ExperimentConfig, InitStrategy, Task};

fn main() -> logit_seed::Result<()> {
    let mut config = ExperimentConfig::defaults(Task::Xor);
    config.seeds = (0..5).collect();

    for strategy in [InitStrategy::RandomEp, InitStrategy::Ortho] {
        config.strategy = strategy;
        config.output_dir = format!("target/example-runs/xor/{}", strategy.name()).into();
        let summary = run_experiment(&config)?;

        println!("strategy {}:", strategy.name());
        for o in &summary.outcomes {
            println!(
                "  seed {:>2}: objective {:.6}  train error {:>5.1}%  test error {:>5.1}%  ({:.1} s)",
                o.seed,
                o.final_objective,
                100.0 * o.final_train_error,
                100.0 * o.final_metric,
                o.wall_clock_s
            );
        }
        let solved = summary
            .outcomes
            .iter()
            .filter(|o| o.final_train_error == 0.0)
            .count();
        println!(
            "  {solved}/{} seeds reached zero training error; outputs in {}\n",
            summary.outcomes.len(),
            config.output_dir.display()
        );
    }
    Ok(())
}
