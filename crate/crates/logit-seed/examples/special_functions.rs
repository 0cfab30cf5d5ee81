//! The numerical kernels everything else leans on: the logistic pair,
//! `erf`/`erfc` in the far tail, the Lambert W principal branch, and
//! Gauss–Hermite expectations under a Gaussian logit.

use logit_seed::neuron::GaussianLogitStats;
use logit_seed::special::{
    erf, erfc, lambert_w0, logistic, softplus, GaussHermite, LAMBERT_BRANCH_POINT,
};

fn main() -> logit_seed::Result<()> {
    println!("logistic and softplus stay finite and consistent across the range:");
    for z in [-700.0, -30.0, 0.0, 30.0, 700.0] {
        println!(
            "  z = {z:>6}: g(z) = {:>12.5e}  softplus(z) = {:>12.5e}",
            logistic(z),
            softplus(z)
        );
    }

    println!("\nerror function, including the far tail where 1 - erf(x) loses all digits:");
    for x in [0.5, 1.0, 2.0, 5.0, 8.0] {
        println!("  erf({x:>3}) = {:>22.16e}   erfc({x:>3}) = {:>22.16e}", erf(x), erfc(x));
    }

    println!("\nLambert W solves w e^w = x on the principal branch:");
    for x in [LAMBERT_BRANCH_POINT, -0.2, 0.0, 1.0, 100.0] {
        let w = lambert_w0(x)?;
        println!(
            "  W({x:>20.16}) = {w:>19.16}   residual {:.2e}",
            (w * w.exp() - x).abs()
        );
    }
    println!("  W(-0.4): {:?}", lambert_w0(-0.4).unwrap_err().to_string());

    let rule = GaussHermite::new(200)?;
    let stats = GaussianLogitStats::optimal();
    let mean = rule.expectation(stats, logistic);
    let second = rule.expectation(stats, |z| logistic(z) * logistic(z));
    println!("\n{}-node Gauss–Hermite rule under the optimal logit law:", rule.len());
    println!("  E[g(z)]   = {mean:.12}");
    println!("  Var[g(z)] = {:.12}", second - mean * mean);
    println!(
        "  weights sum to sqrt(pi): {:.16} vs {:.16}",
        rule.weights().iter().sum::<f64>(),
        std::f64::consts::PI.sqrt()
    );
    Ok(())
}
