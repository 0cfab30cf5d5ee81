//! Scalar special functions and Gaussian quadrature.
//!
//! Everything downstream — entropy bounds, variance targets, gradient-norm
//! criticality — reduces to a handful of scalar primitives evaluated under a
//! Gaussian measure:
//!
//! * the standard logistic `g(z) = 1 / (1 + e^{-z})` and its derivative,
//! * the error function `erf`,
//! * the principal branch of the Lambert W function,
//! * the push-forward density of a Gaussian logit through `g`,
//! * Gauss–Hermite quadrature for `E[f(z)]` with `z ~ N(mu, sigma^2)`.
//!
//! All routines are plain `f64`. Domain violations come back as
//! [`Error::Domain`](crate::error::Error::Domain); nothing here returns NaN
//! for in-domain input.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigen_first_components;
use crate::neuron::GaussianLogitStats;

/// Node count used by the crate whenever a caller does not pick one.
///
/// Gauss–Hermite with 200 nodes integrates the smooth integrands used here
/// (softplus, low moments, entropy integrands) to well below `1e-10` over the
/// parameter ranges the crate works in.
pub const DEFAULT_QUADRATURE_NODES: usize = 200;

/// Standard logistic function `g(z) = 1 / (1 + e^{-z})`.
///
/// Evaluated branch-wise so that large `|z|` neither overflows nor loses
/// precision: for `z >= 0` the result is `1 / (1 + e^{-z})`, otherwise
/// `e^z / (1 + e^z)`.
pub fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let ez = z.exp();
        ez / (1.0 + ez)
    }
}

/// Derivative of the logistic, `g'(z) = g(z) * (1 - g(z))`.
///
/// Computed as `g(z) * g(-z)`, which keeps full relative accuracy in the
/// tails where `1 - g(z)` would cancel.
pub fn logistic_deriv(z: f64) -> f64 {
    logistic(z) * logistic(-z)
}

/// Natural logarithm of `1 + e^z` (softplus), evaluated without overflow.
///
/// For `z > 0` this is `z + ln(1 + e^{-z})`; the second term underflows
/// harmlessly to zero once `e^{-z}` does.
pub fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Error function `erf(x) = (2/sqrt(pi)) * Integral_0^x e^{-t^2} dt`.
///
/// For `|x| <= 2` a rescaled Maclaurin series with all-positive terms is
/// summed (no cancellation); beyond that the complement is evaluated with the
/// classical continued fraction for `erfc`, so the result stays accurate to a
/// few ulp across the whole axis. `erf(NaN)` is NaN.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    if ax == 0.0 {
        return x; // preserves signed zero
    }
    if ax <= 2.0 {
        x.signum() * erf_series(ax)
    } else if ax < 6.5 {
        x.signum() * (1.0 - erfc_cf(ax))
    } else {
        // erfc(6.5) < 4e-20: unrepresentable next to 1.
        x.signum()
    }
}

/// Complement `erfc(x) = 1 - erf(x)`, accurate for large positive `x`.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x > 2.0 {
        if x >= 27.3 {
            0.0 // e^{-x^2} underflows
        } else {
            erfc_cf(x)
        }
    } else if x >= -2.0 {
        1.0 - erf(x)
    } else {
        2.0 - erfc(-x)
    }
}

/// Series `erf(x) = (2/sqrt(pi)) x e^{-x^2} * sum_n (2x^2)^n / (2n+1)!!`
/// for `0 < x <= 2`. Every term is positive, so no cancellation occurs.
fn erf_series(x: f64) -> f64 {
    let x2 = 2.0 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0u32;
    loop {
        n += 1;
        term *= x2 / f64::from(2 * n + 1);
        sum += term;
        if term < sum * 1e-17 || n > 200 {
            break;
        }
    }
    FRAC_2_SQRT_PI * x * (-x * x).exp() * sum
}

/// Continued fraction `erfc(x) = e^{-x^2} / (sqrt(pi) * K)` with
/// `K = x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...)))`, evaluated bottom-up by
/// the modified Lentz algorithm. Converges quickly for `x > 2`.
fn erfc_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = if x != 0.0 { x } else { TINY };
    let mut c = f;
    let mut d = 0.0;
    for k in 1..=300 {
        let a = k as f64 / 2.0;
        d = x + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = x + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (std::f64::consts::PI.sqrt() * f)
}

/// Lower end of the Lambert W0 domain, `-1/e`.
pub const LAMBERT_BRANCH_POINT: f64 = -0.36787944117144233;

/// Principal branch of the Lambert W function: the solution `w >= -1` of
/// `w * e^w = x`.
///
/// Halley iteration from a branch-aware starting guess, with a bisection
/// fallback should the iteration stall. Converged when the residual
/// `|w e^w - x|` drops below `1e-13 * max(1, |x|)`.
///
/// # Errors
///
/// [`Error::Domain`](crate::error::Error::Domain) for `x < -1/e` or NaN,
/// where no real principal-branch value exists.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if !(x >= LAMBERT_BRANCH_POINT) {
        return Err(Error::Domain {
            op: "lambert_w0",
            msg: format!("x = {x} is below -1/e = {LAMBERT_BRANCH_POINT}"),
        });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == LAMBERT_BRANCH_POINT {
        return Ok(-1.0);
    }
    let tol = 1e-13 * x.abs().max(1.0);

    // Starting guess: ln(1 + x) tracks W well for x >= 0; near the branch
    // point W behaves like -1 + sqrt(2(1 + e x)).
    let mut w = if x >= 0.0 {
        x.ln_1p()
    } else {
        let p = (2.0 * (1.0 + std::f64::consts::E * x)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0
    };

    for _ in 0..50 {
        let ew = w.exp();
        let r = w * ew - x;
        if r.abs() <= tol {
            return Ok(w);
        }
        // Halley step: w <- w - r / (e^w (w+1) - (w+2) r / (2 (w+1))).
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * r / (2.0 * wp1);
        if !denom.is_finite() || denom == 0.0 {
            break;
        }
        let next = w - r / denom;
        if !next.is_finite() {
            break;
        }
        w = next.max(-1.0);
    }

    // Fallback: w e^w - x is monotone increasing on [-1, inf), so bisection
    // is safe. Upper bracket: W(x) <= ln(1+x) for x >= 0, and W(x) < 0 for
    // negative x.
    let (mut lo, mut hi) = if x >= 0.0 {
        (0.0, x.ln_1p().max(1e-9))
    } else {
        (-1.0, 0.0)
    };
    let mut best = w;
    let mut best_res = (w * w.exp() - x).abs();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let r = mid * mid.exp() - x;
        if r.abs() < best_res {
            best = mid;
            best_res = r.abs();
        }
        if r.abs() <= tol {
            return Ok(mid);
        }
        if r > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if best_res <= tol {
        Ok(best)
    } else {
        Err(Error::NoConvergence {
            op: "lambert_w0",
            iters: 250,
            residual: best_res,
        })
    }
}

/// Density of `y = g(z)` when the logit is Gaussian, `z ~ N(mu, sigma^2)`:
///
/// ```text
/// p(y) = exp(-(ln(y/(1-y)) - mu)^2 / (2 sigma^2)) / (y (1-y) sqrt(2 pi sigma^2))
/// ```
///
/// This is the change-of-variables push-forward of the logit normal; it is a
/// proper density supported on the open interval `(0, 1)`.
///
/// # Errors
///
/// [`Error::Domain`](crate::error::Error::Domain) when `y` lies outside
/// `(0, 1)`, where the logit is undefined.
pub fn output_density(y: f64, stats: GaussianLogitStats) -> Result<f64> {
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::Domain {
            op: "output_density",
            msg: format!("y = {y} outside the open unit interval"),
        });
    }
    let (mu, sigma) = (stats.mu(), stats.sigma());
    let z = (y / (1.0 - y)).ln();
    let dev = (z - mu) / sigma;
    let norm = y * (1.0 - y) * sigma * (2.0 * std::f64::consts::PI).sqrt();
    Ok((-0.5 * dev * dev).exp() / norm)
}

/// A Gauss–Hermite rule: nodes `x_i` and weights `w_i` such that
/// `Integral f(t) e^{-t^2} dt ~ sum_i w_i f(x_i)`, exact for polynomials of
/// degree `2n - 1`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Build an `n`-point rule.
    ///
    /// Golub–Welsch construction: the nodes are the eigenvalues of the
    /// symmetric tridiagonal Jacobi matrix of the orthonormal Hermite
    /// recurrence (zero diagonal, off-diagonals `sqrt(k/2)`), and each weight
    /// is `sqrt(pi)` — the total mass of `e^{-t^2}` — times the squared first
    /// component of the matching unit eigenvector. Unlike Newton polishing of
    /// asymptotic root guesses, the eigenvalue route has no starting-guess
    /// basins to fall out of, so it stays reliable at the few-hundred-node
    /// sizes the entropy integrals use.
    ///
    /// # Errors
    ///
    /// [`Error::Domain`](crate::error::Error::Domain) for `n < 2`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain {
                op: "GaussHermite::new",
                msg: format!("need at least 2 nodes, got {n}"),
            });
        }
        let mut diag = vec![0.0; n];
        let mut off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
        off.push(0.0); // workspace slot
        let mut first = vec![0.0; n];
        first[0] = 1.0;
        tridiagonal_eigen_first_components(&mut diag, &mut off, &mut first);

        // Eigenvalues arrive ascending; flip to the descending layout used
        // throughout (largest node first, mirrored negatives at the end).
        let root_pi = std::f64::consts::PI.sqrt();
        diag.reverse();
        first.reverse();
        let mut nodes = diag;
        let mut weights: Vec<f64> = first.iter().map(|z| root_pi * z * z).collect();

        // The rule is symmetric about zero by construction; average the +/-
        // pairs so the symmetry holds exactly rather than to rounding.
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let x = 0.5 * (nodes[i] - nodes[j]);
            nodes[i] = x;
            nodes[j] = -x;
            let w = 0.5 * (weights[i] + weights[j]);
            weights[i] = w;
            weights[j] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    /// Number of nodes in the rule.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True only for a degenerate rule, which `new` never builds.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in descending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights matching [`Self::nodes`].
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Expectation `E[f(z)]` for `z ~ N(mu, sigma^2)`.
    ///
    /// Substituting `z = mu + sqrt(2) sigma t` maps the Gaussian expectation
    /// onto the Hermite weight: `E[f] = (1/sqrt(pi)) sum_i w_i f(mu + sqrt(2) sigma x_i)`.
    pub fn expectation<F: Fn(f64) -> f64>(&self, stats: GaussianLogitStats, f: F) -> f64 {
        let scale = std::f64::consts::SQRT_2 * stats.sigma();
        let mu = stats.mu();
        let mut acc = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mu + scale * x);
        }
        acc / std::f64::consts::PI.sqrt()
    }
}

fn default_rule() -> &'static GaussHermite {
    static RULE: OnceLock<GaussHermite> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussHermite::new(DEFAULT_QUADRATURE_NODES).expect("default rule has >= 2 nodes")
    })
}

/// Expectation `E[f(z)]` for `z ~ N(mu, sigma^2)` with an `nodes`-point
/// Gauss–Hermite rule.
///
/// The accuracy/cost trade-off is entirely the caller's: more nodes, tighter
/// integral. Passing [`DEFAULT_QUADRATURE_NODES`] reuses a lazily built,
/// cached rule, so the common path costs no rebuilding.
///
/// # Errors
///
/// [`Error::Domain`](crate::error::Error::Domain) for `nodes < 2`.
pub fn gauss_quadrature<F: Fn(f64) -> f64>(
    f: F,
    stats: GaussianLogitStats,
    nodes: usize,
) -> Result<f64> {
    if nodes == DEFAULT_QUADRATURE_NODES {
        Ok(default_rule().expectation(stats, f))
    } else {
        Ok(GaussHermite::new(nodes)?.expectation(stats, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn stats(mu: f64, sigma: f64) -> GaussianLogitStats {
        GaussianLogitStats::new(mu, sigma).unwrap()
    }

    #[test]
    fn logistic_basics() {
        assert_abs_diff_eq!(logistic(0.0), 0.5);
        assert_abs_diff_eq!(logistic(2.0) + logistic(-2.0), 1.0, epsilon = 1e-15);
        assert_eq!(logistic(800.0), 1.0);
        // e^{-700} ~ 1e-304 is still representable, so the branch-wise form
        // must keep it positive; by -800 the true value (~1e-348) sits below
        // the smallest subnormal and a clean underflow to zero is correct.
        assert!(logistic(-700.0) > 0.0);
        assert!(logistic(-700.0) < 1e-300);
        assert_eq!(logistic(-800.0), 0.0);
    }

    #[test]
    fn logistic_deriv_matches_identity() {
        for &z in &[-30.0, -4.0, -0.7, 0.0, 0.3, 5.0, 30.0] {
            let g = logistic(z);
            assert_relative_eq!(logistic_deriv(z), g * (1.0 - g), max_relative = 1e-12);
        }
        assert_abs_diff_eq!(logistic_deriv(0.0), 0.25);
        // Symmetric in z.
        assert_relative_eq!(logistic_deriv(3.7), logistic_deriv(-3.7), max_relative = 1e-14);
    }

    #[test]
    fn softplus_is_stable() {
        assert_abs_diff_eq!(softplus(0.0), 2.0_f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(softplus(1000.0), 1000.0);
        assert!(softplus(-745.0) > 0.0);
        assert_relative_eq!(softplus(3.0), (1.0 + 3.0_f64.exp()).ln(), max_relative = 1e-14);
    }

    #[test]
    fn erf_reference_points() {
        // Frozen from an adaptive-Simpson integration of (2/sqrt(pi)) e^{-t^2}
        // (see tests/special_fns.rs for the live oracle comparison).
        assert_abs_diff_eq!(erf(1.0), 0.842700792949715, epsilon = 1e-12);
        assert_abs_diff_eq!(erf(0.5), 0.520499877813047, epsilon = 1e-12);
        assert_abs_diff_eq!(erf(2.0), 0.995322265018953, epsilon = 1e-12);
        assert_abs_diff_eq!(erf(3.0), 0.999977909503001, epsilon = 1e-12);
        assert_eq!(erf(0.0), 0.0);
        assert_abs_diff_eq!(erf(-1.0), -erf(1.0));
        assert_eq!(erf(10.0), 1.0);
        assert!(erf(f64::NAN).is_nan());
    }

    #[test]
    fn erfc_tail_has_relative_accuracy() {
        // erfc(5) = 1.5374597944280351e-12 (deep tail, far past the series).
        assert_relative_eq!(erfc(5.0), 1.5374597944280351e-12, max_relative = 1e-10);
        assert_relative_eq!(erfc(0.0), 1.0);
        assert_relative_eq!(erfc(-3.0), 2.0 - erfc(3.0), max_relative = 1e-14);
    }

    #[test]
    fn lambert_reference_points() {
        // W(1) is the omega constant; W(e) = 1; W(0) = 0; W(-1/e) = -1.
        assert_abs_diff_eq!(lambert_w0(1.0).unwrap(), 0.567143290409784, epsilon = 1e-12);
        assert_abs_diff_eq!(lambert_w0(std::f64::consts::E).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(lambert_w0(LAMBERT_BRANCH_POINT).unwrap(), -1.0);
        // Defining identity w e^w = x across magnitudes.
        for &x in &[-0.36, -0.2, -1e-3, 1e-6, 0.3, 2.0, 10.0, 1e4, 1e12] {
            let w = lambert_w0(x).unwrap();
            assert_abs_diff_eq!(w * w.exp(), x, epsilon = 1e-13 * x.abs().max(1.0));
        }
    }

    #[test]
    fn lambert_rejects_points_below_branch() {
        assert!(lambert_w0(-0.4).is_err());
        assert!(lambert_w0(f64::NAN).is_err());
    }

    #[test]
    fn output_density_domain() {
        let s = stats(0.0, 1.0);
        assert!(output_density(0.0, s).is_err());
        assert!(output_density(1.0, s).is_err());
        assert!(output_density(-0.3, s).is_err());
        assert!(output_density(0.5, s).unwrap() > 0.0);
    }

    #[test]
    fn output_density_matches_change_of_variables() {
        // p(g(z)) * g'(z) must equal the Gaussian density of z.
        let s = stats(0.4, 1.3);
        for &z in &[-3.0, -1.0, 0.0, 0.4, 2.5] {
            let y = logistic(z);
            let lhs = output_density(y, s).unwrap() * logistic_deriv(z);
            let gauss = (-0.5 * ((z - 0.4) / 1.3_f64).powi(2)).exp()
                / (1.3 * (2.0 * std::f64::consts::PI).sqrt());
            assert_relative_eq!(lhs, gauss, max_relative = 1e-12);
        }
    }

    #[test]
    fn quadrature_recovers_moments() {
        let unit = stats(0.0, 2.0);
        let shifted = stats(3.0, 2.0);
        assert_abs_diff_eq!(gauss_quadrature(|_| 1.0, unit, 200).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(gauss_quadrature(|z| z, shifted, 200).unwrap(), 3.0, epsilon = 1e-10);
        assert_relative_eq!(
            gauss_quadrature(|z| z * z, unit, 200).unwrap(),
            4.0,
            max_relative = 1e-8
        );
        // Fourth central moment of N(0, sigma^2) is 3 sigma^4.
        assert_relative_eq!(
            gauss_quadrature(|z| z.powi(4), unit, 64).unwrap(),
            48.0,
            max_relative = 1e-8
        );
    }

    #[test]
    fn quadrature_needs_two_nodes() {
        assert!(GaussHermite::new(1).is_err());
        assert!(gauss_quadrature(|z| z, stats(0.0, 1.0), 0).is_err());
    }

    #[test]
    fn rule_weights_sum_to_sqrt_pi() {
        for &n in &[2usize, 3, 7, 64, 200] {
            let rule = GaussHermite::new(n).unwrap();
            let total: f64 = rule.weights().iter().sum();
            assert_relative_eq!(total, std::f64::consts::PI.sqrt(), max_relative = 1e-12);
            // Symmetry of nodes.
            for i in 0..n {
                assert_abs_diff_eq!(rule.nodes()[i], -rule.nodes()[n - 1 - i], epsilon = 1e-13);
            }
        }
    }
}
