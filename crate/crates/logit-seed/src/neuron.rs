//! Entropy analysis of a single logistic unit with a Gaussian logit.
//!
//! A unit computes `y = g(z)` with `g` the standard logistic and
//! `z ~ N(mu, sigma^2)` — the usual central-limit picture of a pre-activation
//! that sums many weighted inputs. This module answers: how much information
//! does the output carry, and which `(mu, sigma)` maximises it?
//!
//! The differential entropy of the output decomposes exactly as
//!
//! ```text
//! H(y) = H(z) + E[ln g'(z)]
//!      = 1/2 + 1/2 ln(2 pi sigma^2) + mu - 2 E[ln(1 + e^z)]
//! ```
//!
//! and is sandwiched by a closed-form bound `H_B(mu, sigma)`:
//!
//! ```text
//! H_B - 2 ln 2 <= H(y) < H_B,
//! H_B = 1/2 + 1/2 ln(2 pi sigma^2) - mu erf(mu / (sigma sqrt(2)))
//!       - (2 sigma / sqrt(2 pi)) e^{-mu^2 / (2 sigma^2)}
//! ```
//!
//! Maximising `H_B` in closed form gives the operating point this whole crate
//! is built around: `mu = 0`, `sigma = sqrt(pi/2)`, and more generally
//! `sigma*(mu) = sqrt(pi/2) e^{W(2 mu^2 / pi) / 2}` along the ridge.

use crate::error::{Error, Result};
use crate::special::{self, gauss_quadrature, DEFAULT_QUADRATURE_NODES};

/// Entropy-optimal logit standard deviation at `mu = 0`: `sqrt(pi/2)`.
pub const OPTIMAL_LOGIT_SIGMA: f64 = 1.2533141373155003;

/// Output mean of a unit driven at the optimal operating point. The logit is
/// symmetric around zero, so the logistic output averages exactly one half.
pub const OPTIMAL_OUTPUT_MEAN: f64 = 0.5;

/// Output variance of a unit driven at the optimal operating point,
/// conventionally rounded to four significant digits. This is the `k` that
/// variance-targeting initialisation aims at; the unrounded value is
/// available from [`optimal_output_stats`].
pub const OPTIMAL_OUTPUT_VARIANCE: f64 = 0.0589;

/// First two moments of a Gaussian pre-activation (logit): mean `mu` and
/// standard deviation `sigma > 0`.
///
/// The constructor enforces finiteness and `sigma > 0`, so every function
/// accepting this type works on its full domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLogitStats {
    mu: f64,
    sigma: f64,
}

impl GaussianLogitStats {
    /// Validate and wrap `(mu, sigma)`.
    ///
    /// # Errors
    ///
    /// [`Error::Domain`] when either value is non-finite or `sigma <= 0`.
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() || !sigma.is_finite() {
            return Err(Error::Domain {
                op: "GaussianLogitStats::new",
                msg: format!("non-finite parameters mu = {mu}, sigma = {sigma}"),
            });
        }
        if sigma <= 0.0 {
            return Err(Error::Domain {
                op: "GaussianLogitStats::new",
                msg: format!("sigma must be positive, got {sigma}"),
            });
        }
        Ok(Self { mu, sigma })
    }

    /// Logit mean.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Logit standard deviation (always positive).
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// The entropy-optimal operating point `(0, sqrt(pi/2))`.
    pub fn optimal() -> Self {
        Self {
            mu: 0.0,
            sigma: OPTIMAL_LOGIT_SIGMA,
        }
    }
}

/// Closed-form entropy bound `H_B` together with the interval it certifies
/// for the true output entropy: `lower <= H(y) < upper`, with
/// `upper = H_B` and `lower = H_B - 2 ln 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBound {
    /// The bound value `H_B(mu, sigma)` itself.
    pub h_b: f64,
    /// Certified lower end, `H_B - 2 ln 2`.
    pub lower: f64,
    /// Certified (strict) upper end, equal to `H_B`.
    pub upper: f64,
}

/// Differential entropy of the Gaussian logit itself:
/// `H(z) = 1/2 + 1/2 ln(2 pi sigma^2)`.
pub fn entropy_logit(stats: GaussianLogitStats) -> f64 {
    0.5 + 0.5 * (2.0 * std::f64::consts::PI * stats.sigma() * stats.sigma()).ln()
}

/// Expected log-slope of the logistic under the logit distribution:
/// `E[ln g'(z)] = mu - 2 E[ln(1 + e^z)]`, the (always negative) entropy cost
/// of squashing the logit through `g`.
///
/// The softplus expectation is evaluated by Gauss–Hermite quadrature with the
/// crate-default node count.
pub fn expected_log_gprime(stats: GaussianLogitStats) -> f64 {
    let softplus_mean = gauss_quadrature(special::softplus, stats, DEFAULT_QUADRATURE_NODES)
        .expect("default node count is valid");
    stats.mu() - 2.0 * softplus_mean
}

/// Differential entropy of the output `y = g(z)`:
/// `H(y) = H(z) + E[ln g'(z)]`.
pub fn entropy_output(stats: GaussianLogitStats) -> f64 {
    entropy_logit(stats) + expected_log_gprime(stats)
}

/// The closed-form bound `H_B(mu, sigma)` and the sandwich it certifies.
pub fn h_bound(stats: GaussianLogitStats) -> EntropyBound {
    let (mu, sigma) = (stats.mu(), stats.sigma());
    let h_z = entropy_logit(stats);
    let tail = 2.0 * sigma / (2.0 * std::f64::consts::PI).sqrt()
        * (-mu * mu / (2.0 * sigma * sigma)).exp();
    let h_b = h_z - mu * special::erf(mu / (sigma * std::f64::consts::SQRT_2)) - tail;
    EntropyBound {
        h_b,
        lower: h_b - 2.0 * std::f64::consts::LN_2,
        upper: h_b,
    }
}

/// The `sigma` that maximises `H_B` for a given logit mean:
/// `sigma*(mu) = sqrt(pi/2) * exp(W(2 mu^2 / pi) / 2)` with `W` the principal
/// Lambert branch. At `mu = 0` this is [`OPTIMAL_LOGIT_SIGMA`].
///
/// # Panics
///
/// Panics on non-finite `mu`; `2 mu^2 / pi` is otherwise always inside the
/// Lambert W0 domain.
pub fn optimal_sigma(mu: f64) -> f64 {
    assert!(mu.is_finite(), "optimal_sigma: mu must be finite");
    let arg = 2.0 * mu * mu / std::f64::consts::PI;
    let w = special::lambert_w0(arg).expect("non-negative argument is inside the W0 domain");
    OPTIMAL_LOGIT_SIGMA * (0.5 * w).exp()
}

/// Gradient of the bound, `(dH_B/dmu, dH_B/dsigma)`:
///
/// ```text
/// dH_B/dmu    = -erf(mu / (sigma sqrt(2)))
/// dH_B/dsigma = 1/sigma - sqrt(2/pi) e^{-mu^2 / (2 sigma^2)}
/// ```
///
/// Both components vanish exactly at `(0, sqrt(pi/2))`; along the ridge
/// `sigma = sigma*(mu)` only the `sigma` component vanishes.
pub fn stationarity_residuals(stats: GaussianLogitStats) -> (f64, f64) {
    let (mu, sigma) = (stats.mu(), stats.sigma());
    let d_mu = -special::erf(mu / (sigma * std::f64::consts::SQRT_2));
    let d_sigma = 1.0 / sigma
        - (2.0 / std::f64::consts::PI).sqrt() * (-mu * mu / (2.0 * sigma * sigma)).exp();
    (d_mu, d_sigma)
}

/// Hessian of the bound at `(mu, sigma)`, row-major `[[d2/dmu2, d2/dmudsigma],
/// [d2/dmudsigma, d2/dsigma2]]`:
///
/// ```text
/// d2H_B/dmu2       = -sqrt(2/pi) (1/sigma)        e^{-mu^2/(2 sigma^2)}
/// d2H_B/dmu dsigma =  sqrt(2/pi) (mu/sigma^2)     e^{-mu^2/(2 sigma^2)}
/// d2H_B/dsigma2    = -1/sigma^2
///                    - sqrt(2/pi) (mu^2/sigma^3)  e^{-mu^2/(2 sigma^2)}
/// ```
///
/// At the optimum this is `diag(-2/pi, -2/pi)`: negative definite, confirming
/// the stationary point is a maximum.
pub fn hessian_check(stats: GaussianLogitStats) -> [[f64; 2]; 2] {
    let (mu, sigma) = (stats.mu(), stats.sigma());
    let gauss = (2.0 / std::f64::consts::PI).sqrt() * (-mu * mu / (2.0 * sigma * sigma)).exp();
    let d_mu_mu = -gauss / sigma;
    let d_mu_sigma = gauss * mu / (sigma * sigma);
    let d_sigma_sigma = -1.0 / (sigma * sigma) - gauss * mu * mu / (sigma * sigma * sigma);
    [[d_mu_mu, d_mu_sigma], [d_mu_sigma, d_sigma_sigma]]
}

/// Output mean and variance `(E[y], Var[y])` of a unit driven at the optimal
/// operating point `(0, sqrt(pi/2))`, evaluated by quadrature.
///
/// The mean is exactly one half by symmetry; the variance evaluates to
/// `0.0589` to three significant digits and is the `k` used as a
/// variance target by initialisation.
pub fn optimal_output_stats() -> (f64, f64) {
    let stats = GaussianLogitStats::optimal();
    let mean = gauss_quadrature(special::logistic, stats, DEFAULT_QUADRATURE_NODES)
        .expect("default node count is valid");
    let second = gauss_quadrature(
        |z| {
            let y = special::logistic(z);
            y * y
        },
        stats,
        DEFAULT_QUADRATURE_NODES,
    )
    .expect("default node count is valid");
    (mean, second - mean * mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn stats(mu: f64, sigma: f64) -> GaussianLogitStats {
        GaussianLogitStats::new(mu, sigma).unwrap()
    }

    #[test]
    fn stats_constructor_guards_domain() {
        assert!(GaussianLogitStats::new(0.0, 0.0).is_err());
        assert!(GaussianLogitStats::new(0.0, -1.0).is_err());
        assert!(GaussianLogitStats::new(f64::NAN, 1.0).is_err());
        assert!(GaussianLogitStats::new(0.0, f64::INFINITY).is_err());
        assert!(GaussianLogitStats::new(-2.0, 0.3).is_ok());
    }

    #[test]
    fn logit_entropy_at_the_optimum() {
        // 1/2 + 1/2 ln(2 pi * pi/2) = 1/2 + ln(pi).
        let h = entropy_logit(GaussianLogitStats::optimal());
        assert_abs_diff_eq!(h, 0.5 + std::f64::consts::PI.ln(), epsilon = 1e-12);
        assert_abs_diff_eq!(h, 1.6447298858494002, epsilon = 1e-12);
    }

    #[test]
    fn bound_at_the_optimum_is_ln_pi_minus_half() {
        let b = h_bound(GaussianLogitStats::optimal());
        assert_abs_diff_eq!(b.h_b, std::f64::consts::PI.ln() - 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b.h_b, 0.6447298858494002, epsilon = 1e-12);
        assert_abs_diff_eq!(b.upper, b.h_b);
        assert_abs_diff_eq!(b.lower, b.h_b - 2.0 * std::f64::consts::LN_2);
    }

    #[test]
    fn sandwich_holds_across_the_plane() {
        for &mu in &[-3.0, -0.7, 0.0, 0.4, 2.0] {
            for &sigma in &[0.2, 0.9, OPTIMAL_LOGIT_SIGMA, 3.0] {
                let s = stats(mu, sigma);
                let h = entropy_output(s);
                let b = h_bound(s);
                assert!(
                    b.lower <= h && h < b.upper,
                    "sandwich violated at ({mu}, {sigma}): {} <= {h} < {}",
                    b.lower,
                    b.upper
                );
            }
        }
    }

    #[test]
    fn optimum_is_stationary_and_concave() {
        let s = GaussianLogitStats::optimal();
        let (d_mu, d_sigma) = stationarity_residuals(s);
        assert_abs_diff_eq!(d_mu, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d_sigma, 0.0, epsilon = 1e-12);
        let hess = hessian_check(s);
        let expect = -2.0 / std::f64::consts::PI;
        assert_abs_diff_eq!(hess[0][0], expect, epsilon = 1e-12);
        assert_abs_diff_eq!(hess[1][1], expect, epsilon = 1e-12);
        assert_abs_diff_eq!(hess[0][1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(hess[1][0], hess[0][1]);
    }

    #[test]
    fn sigma_ridge_zeroes_the_sigma_gradient() {
        for &mu in &[0.0, 0.3, 1.0, 2.0, 5.0] {
            let sigma = optimal_sigma(mu);
            let (_, d_sigma) = stationarity_residuals(stats(mu, sigma));
            assert_abs_diff_eq!(d_sigma, 0.0, epsilon = 1e-12);
            // The ridge value also satisfies its defining Lambert identity:
            // (2 mu^2 / pi) = W e^W with W = 2 ln(sigma / sqrt(pi/2)).
            let w = 2.0 * (sigma / OPTIMAL_LOGIT_SIGMA).ln();
            assert_abs_diff_eq!(
                w * w.exp(),
                2.0 * mu * mu / std::f64::consts::PI,
                epsilon = 1e-10
            );
        }
        assert_abs_diff_eq!(optimal_sigma(0.0), OPTIMAL_LOGIT_SIGMA);
        assert!(optimal_sigma(2.0) > optimal_sigma(0.5));
    }

    #[test]
    fn optimal_output_moments() {
        let (mean, var) = optimal_output_stats();
        assert_abs_diff_eq!(mean, OPTIMAL_OUTPUT_MEAN, epsilon = 1e-10);
        // High-precision value of Var(g(z)) at (0, sqrt(pi/2)), frozen from
        // an independent adaptive integration: 0.058959825751718236. The
        // working constant 0.0589 is that value truncated to the precision
        // the norm-scaling law quotes it at.
        assert_relative_eq!(var, 0.058959825751718236, max_relative = 1e-12);
        assert_abs_diff_eq!(var, OPTIMAL_OUTPUT_VARIANCE, epsilon = 5e-4);
        assert!(var > 0.0 && var < 0.25); // cannot exceed a Bernoulli's variance
    }

    #[test]
    fn expected_log_gprime_is_negative() {
        // g' <= 1/4, so ln g' <= -2 ln 2 < 0 pointwise and in expectation.
        for &mu in &[-2.0, 0.0, 1.5] {
            for &sigma in &[0.3, 1.0, 2.5] {
                let v = expected_log_gprime(stats(mu, sigma));
                assert!(v <= -2.0 * std::f64::consts::LN_2 + 1e-12, "got {v}");
            }
        }
    }
}
