//! Compare all six initialization strategies on a six-hidden-layer logistic
//! network: push one batch through and watch the per-layer activation spread.
//! Variance-normalizing recipes collapse toward the fixed point g(0) = 0.5
//! with depth; the elliptical projection keeps every layer spread out.

use logit_seed::init::{initialize, InitData};
use logit_seed::net::{forward, NetworkSpec, OutputHead};
use logit_seed::{InitStrategy, InputStats};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn std_dev(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

fn main() -> logit_seed::Result<()> {
    let net = NetworkSpec::new(
        vec![784, 64, 64, 64, 64, 64, 64, 10],
        OutputHead::SoftmaxCrossEntropy,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let batch = Array2::from_shape_fn((256, 784), |_| rng.gen_range(-1.0..1.0));
    let input_stats = InputStats::from_batch(batch.view())?;
    let data = InitData {
        calibration: Some(batch.view()),
        input_stats: Some(&input_stats),
    };

    println!("std of hidden activations after one forward pass (seed 0):");
    print!("{:>10} |", "strategy");
    for l in 1..=6 {
        print!("  layer {l}");
    }
    println!();
    println!("{}", "-".repeat(12 + 6 * 9));
    for strategy in InitStrategy::all() {
        let params = initialize(&strategy, &net, 0, &data)?;
        let pass = forward(&net, &params, batch.view())?;
        print!("{:>10} |", strategy.name());
        for l in 1..=6 {
            let std = std_dev(pass.activations[l].as_slice().expect("standard layout"));
            print!(" {std:>8.4}");
        }
        println!();
    }

    println!();
    println!("a spread near sqrt(0.0589) = 0.2427 is the entropy-optimal operating point;");
    println!("values sliding toward 0 with depth mean the layer outputs are freezing at 0.5.");
    Ok(())
}
