//! The entropy-optimal single-neuron operating point: the closed-form
//! `sigma*(mu)` curve, the stationarity and curvature checks at the global
//! optimum, and the output moments the initializer targets.

use logit_seed::neuron::{
    entropy_output, h_bound, hessian_check, optimal_output_stats, optimal_sigma,
    stationarity_residuals, GaussianLogitStats, OPTIMAL_LOGIT_SIGMA, OPTIMAL_OUTPUT_VARIANCE,
};

fn main() -> logit_seed::Result<()> {
    println!("optimal logit scale sigma*(mu) = sqrt(pi/2) * exp(W(2 mu^2 / pi) / 2):");
    for mu in [0.0, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let sigma = optimal_sigma(mu);
        let stats = GaussianLogitStats::new(mu, sigma)?;
        println!(
            "  mu = {mu:>4.1}  sigma* = {sigma:.6}  h_b = {:.6}  H(y) = {:.6}",
            h_bound(stats).h_b,
            entropy_output(stats)
        );
    }

    let optimum = GaussianLogitStats::optimal();
    let (d_mu, d_sigma) = stationarity_residuals(optimum);
    let hess = hessian_check(optimum);
    println!();
    println!(
        "at (0, {OPTIMAL_LOGIT_SIGMA}): gradient of h_b = ({d_mu:.2e}, {d_sigma:.2e})"
    );
    println!(
        "Hessian [[{:.4}, {:.4}], [{:.4}, {:.4}]] — negative definite, so a maximum",
        hess[0][0], hess[0][1], hess[1][0], hess[1][1]
    );

    let (mean, var) = optimal_output_stats();
    println!();
    println!("output moments under the optimal logit law:");
    println!("  E[g(z)]   = {mean:.12}  (symmetry gives exactly 1/2)");
    println!("  Var[g(z)] = {var:.12}  (rounds to the k = {OPTIMAL_OUTPUT_VARIANCE} the norm law uses)");
    Ok(())
}
