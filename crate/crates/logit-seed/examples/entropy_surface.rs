//! Sweep the logit-moment plane, print a coarse map of the output-entropy
//! bound, and verify the sandwich `H_B - 2 ln 2 <= H(y) < H_B` along the way.

use logit_seed::neuron::{entropy_output, h_bound, GaussianLogitStats};

fn main() -> logit_seed::Result<()> {
    let mus: Vec<f64> = (0..=16).map(|i| -4.0 + 0.5 * f64::from(i)).collect();
    let sigmas: Vec<f64> = (1..=12).map(|j| 0.25 * f64::from(j)).collect();

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    let mut sandwich_ok = true;

    println!("h_b(mu, sigma) — rows are sigma (top = largest), columns are mu");
    print!("{:>6} |", "sigma");
    for &mu in &mus {
        print!("{mu:>7.1}");
    }
    println!();
    println!("{}", "-".repeat(8 + 7 * mus.len()));
    for &sigma in sigmas.iter().rev() {
        print!("{sigma:>6.2} |");
        for &mu in &mus {
            let stats = GaussianLogitStats::new(mu, sigma)?;
            let bound = h_bound(stats);
            let h = entropy_output(stats);
            sandwich_ok &= h >= bound.lower && h < bound.upper + 1e-9;
            if bound.h_b > best.0 {
                best = (bound.h_b, mu, sigma);
            }
            print!("{:>7.3}", bound.h_b);
        }
        println!();
    }

    println!();
    println!(
        "grid maximum h_b = {:.4} at (mu, sigma) = ({}, {})",
        best.0, best.1, best.2
    );
    println!(
        "analytic optimum sits at (0, sqrt(pi/2)) = (0, {:.6}) with h_b = ln(pi) - 1/2 = {:.6}",
        (std::f64::consts::PI / 2.0).sqrt(),
        std::f64::consts::PI.ln() - 0.5
    );
    println!(
        "sandwich H_B - 2 ln 2 <= H(y) < H_B held at all {} grid points: {}",
        mus.len() * sigmas.len(),
        sandwich_ok
    );
    Ok(())
}
