//! Parameter-initialization strategies.
//!
//! Six recipes, selectable by name on the CLI:
//!
//! * `lecun` — weights uniform in `±1/sqrt(fan_in)`, zero biases;
//! * `glorot` — uniform in `±sqrt(6)/sqrt(fan_in + fan_out)`, zero biases;
//! * `ortho` — Haar-uniform (semi-)orthogonal matrices, zero biases;
//! * `lsuv` — orthogonal seed, then each layer rescaled until its
//!   pre-activation variance on a calibration batch is 1;
//! * `random+EP`, `ortho+EP` — the entropy-targeting recipes: each neuron's
//!   weight row is placed on the ellipsoid `w' D w = pi/2` (`D` the diagonal
//!   of input variances) and its bias centres the logit at zero, which is
//!   exactly the operating point where the unit's output entropy peaks.
//!
//! For EP layers fed by other logistic units, the input moments are the
//! fixed constants of [`crate::neuron::optimal_output_stats`]: mean `0.5`,
//! variance `k = 0.0589`, so the ellipsoid is a sphere of radius
//! `sqrt(pi/(2k))`. For data-fed first layers with per-feature variances the
//! general elliptical projection of [`elliptical_project`] is used.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::orthonormal_columns;
use crate::net::{LayerParams, NetworkSpec};
use crate::special::logistic;
use crate::neuron::{OPTIMAL_OUTPUT_MEAN, OPTIMAL_OUTPUT_VARIANCE};
use crate::rnn::RnnParams;

/// Default LSUV variance tolerance.
pub const LSUV_TOLERANCE: f64 = 0.01;
/// Default LSUV iteration cap per layer.
pub const LSUV_MAX_ITERS: usize = 10;

/// The six strategies, as selectable on the CLI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitStrategy {
    Lecun,
    Glorot,
    Ortho,
    Lsuv { tolerance: f64, max_iters: usize },
    RandomEp,
    OrthoEp,
}

impl InitStrategy {
    /// LSUV with the default tolerance (0.01) and iteration cap (10).
    pub fn lsuv() -> Self {
        Self::Lsuv {
            tolerance: LSUV_TOLERANCE,
            max_iters: LSUV_MAX_ITERS,
        }
    }

    /// Canonical CLI name of the strategy.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Lecun => "lecun",
            Self::Glorot => "glorot",
            Self::Ortho => "ortho",
            Self::Lsuv { .. } => "lsuv",
            Self::RandomEp => "random+EP",
            Self::OrthoEp => "ortho+EP",
        }
    }

    /// All six strategies with default settings, in canonical order.
    pub fn all() -> [Self; 6] {
        [
            Self::Lecun,
            Self::Glorot,
            Self::Ortho,
            Self::lsuv(),
            Self::RandomEp,
            Self::OrthoEp,
        ]
    }
}

impl std::fmt::Display for InitStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for InitStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lecun" => Ok(Self::Lecun),
            "glorot" => Ok(Self::Glorot),
            "ortho" => Ok(Self::Ortho),
            "lsuv" => Ok(Self::lsuv()),
            "random+ep" => Ok(Self::RandomEp),
            "ortho+ep" => Ok(Self::OrthoEp),
            other => Err(Error::Config(format!(
                "unknown init strategy '{other}' (expected lecun|glorot|ortho|lsuv|random+EP|ortho+EP)"
            ))),
        }
    }
}

/// Per-dimension first and second moments of a layer's input.
#[derive(Debug, Clone, PartialEq)]
pub struct InputStats {
    means: Vec<f64>,
    variances: Vec<f64>,
}

impl InputStats {
    /// Validate and wrap per-dimension means and variances.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] for unequal lengths or empty vectors;
    /// [`Error::Domain`] for non-finite entries or non-positive variances.
    pub fn new(means: Vec<f64>, variances: Vec<f64>) -> Result<Self> {
        if means.len() != variances.len() || means.is_empty() {
            return Err(Error::Shape {
                op: "InputStats::new",
                msg: format!(
                    "means ({}) and variances ({}) must be equal-length and non-empty",
                    means.len(),
                    variances.len()
                ),
            });
        }
        if means.iter().any(|m| !m.is_finite()) {
            return Err(Error::Domain {
                op: "InputStats::new",
                msg: "non-finite mean".into(),
            });
        }
        if variances.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::Domain {
                op: "InputStats::new",
                msg: "variances must be positive and finite".into(),
            });
        }
        Ok(Self { means, variances })
    }

    /// Identical moments across all `dim` dimensions.
    pub fn isotropic(dim: usize, mean: f64, variance: f64) -> Result<Self> {
        Self::new(vec![mean; dim], vec![variance; dim])
    }

    /// Per-feature empirical moments of a data batch (population variance).
    ///
    /// # Errors
    ///
    /// [`Error::Domain`] if any feature has zero variance; use
    /// [`Self::from_batch_with_floor`] for data with constant features.
    pub fn from_batch(batch: ArrayView2<'_, f64>) -> Result<Self> {
        Self::from_batch_with_floor(batch, 0.0)
    }

    /// Like [`Self::from_batch`], but clamps each variance to at least
    /// `floor`, keeping the diagonal positive definite in the presence of
    /// constant features (common in image data with blank borders).
    pub fn from_batch_with_floor(batch: ArrayView2<'_, f64>, floor: f64) -> Result<Self> {
        if batch.nrows() == 0 || batch.ncols() == 0 {
            return Err(Error::Shape {
                op: "InputStats::from_batch",
                msg: "empty batch".into(),
            });
        }
        let n = batch.nrows() as f64;
        let means: Vec<f64> = batch.mean_axis(Axis(0)).expect("non-empty").to_vec();
        let variances: Vec<f64> = batch
            .axis_iter(Axis(1))
            .zip(&means)
            .map(|(col, &m)| {
                let v = col.iter().map(|&x| (x - m) * (x - m)).sum::<f64>() / n;
                v.max(floor)
            })
            .collect();
        Self::new(means, variances)
    }

    /// Number of input dimensions.
    pub fn dim(&self) -> usize {
        self.means.len()
    }

    /// Per-dimension means.
    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Per-dimension variances (all positive).
    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    /// True when all variances agree to within a part in 10^12 — the regime
    /// where the ellipsoid degenerates to a sphere and radial scaling is
    /// exact.
    pub fn is_isotropic(&self) -> bool {
        let first = self.variances[0];
        self.variances
            .iter()
            .all(|&v| (v - first).abs() <= 1e-12 * first.abs())
    }
}

/// The Lagrangian projection problem: find the point of the ellipsoid
/// `w' diag(d) w = target` nearest to the seed `w_tilde`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionProblem {
    w_tilde: Vec<f64>,
    d: Vec<f64>,
    target: f64,
}

impl ProjectionProblem {
    /// The constraint level used by EP initialisation: the optimal logit
    /// variance `pi/2`.
    pub const DEFAULT_TARGET: f64 = std::f64::consts::FRAC_PI_2;

    /// Validate and wrap a problem instance.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] for unequal or empty vectors; [`Error::Domain`] for
    /// non-positive `d` entries, non-positive target, or non-finite values.
    pub fn new(w_tilde: Vec<f64>, d: Vec<f64>, target: f64) -> Result<Self> {
        if w_tilde.len() != d.len() || w_tilde.is_empty() {
            return Err(Error::Shape {
                op: "ProjectionProblem::new",
                msg: format!(
                    "seed ({}) and diagonal ({}) must be equal-length and non-empty",
                    w_tilde.len(),
                    d.len()
                ),
            });
        }
        if w_tilde.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain {
                op: "ProjectionProblem::new",
                msg: "non-finite seed entry".into(),
            });
        }
        if d.iter().any(|&x| !x.is_finite() || x <= 0.0) {
            return Err(Error::Domain {
                op: "ProjectionProblem::new",
                msg: "diagonal entries must be positive and finite".into(),
            });
        }
        if !target.is_finite() || target <= 0.0 {
            return Err(Error::Domain {
                op: "ProjectionProblem::new",
                msg: format!("target must be positive and finite, got {target}"),
            });
        }
        Ok(Self { w_tilde, d, target })
    }

    /// The unconstrained seed vector.
    pub fn w_tilde(&self) -> &[f64] {
        &self.w_tilde
    }

    /// The (positive) diagonal of `D`.
    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// The constraint level.
    pub fn target(&self) -> f64 {
        self.target
    }
}

/// Result of an elliptical projection: the constrained point and the
/// Lagrange multiplier certifying it (`w - w_tilde + lambda D w = 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub w: Vec<f64>,
    pub multiplier: f64,
}

/// Nearest point on the ellipsoid `w' diag(d) w = target` to the seed.
///
/// The KKT system reduces along the diagonal to `w_i = w~_i / (1 + lambda d_i)`
/// with a single scalar unknown; the global minimiser's multiplier lies on
/// `(-1/max(d), inf)`, where the constraint function is strictly decreasing,
/// so a safeguarded Newton/bisection root-find locates it. When the seed has
/// no component along the largest-`d` axes and the remaining coordinates
/// cannot reach the constraint level, the multiplier sits exactly at the pole
/// and the deficit is placed on the first largest-`d` axis (the trust-region
/// "hard case").
///
/// # Errors
///
/// [`Error::ZeroSeed`] for an all-zero seed (its projection is not unique);
/// [`Error::NoConvergence`] if the root-find exhausts its iteration cap.
pub fn elliptical_project(problem: &ProjectionProblem) -> Result<Projection> {
    let w_tilde = &problem.w_tilde;
    let d = &problem.d;
    let target = problem.target;

    if w_tilde.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroSeed {
            context: "projection seed".into(),
        });
    }

    let d_max = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lambda_min = -1.0 / d_max;

    // Constraint value (minus target) along the KKT family, and its
    // derivative; phi is strictly decreasing on (lambda_min, inf).
    let phi = |lambda: f64| -> f64 {
        w_tilde
            .iter()
            .zip(d)
            .map(|(&wt, &di)| {
                let denom = 1.0 + lambda * di;
                di * wt * wt / (denom * denom)
            })
            .sum::<f64>()
            - target
    };
    let phi_prime = |lambda: f64| -> f64 {
        -2.0 * w_tilde
            .iter()
            .zip(d)
            .map(|(&wt, &di)| {
                let denom = 1.0 + lambda * di;
                di * di * wt * wt / (denom * denom * denom)
            })
            .sum::<f64>()
    };

    let seed_on_pole: f64 = w_tilde
        .iter()
        .zip(d)
        .filter(|(_, &di)| di == d_max)
        .map(|(&wt, _)| wt * wt)
        .sum();
    if seed_on_pole == 0.0 {
        // phi stays finite at the pole; check whether the branch can reach
        // the target at all.
        let at_pole: f64 = w_tilde
            .iter()
            .zip(d)
            .filter(|(_, &di)| di < d_max)
            .map(|(&wt, &di)| {
                let w = wt * d_max / (d_max - di);
                di * w * w
            })
            .sum();
        if at_pole < target {
            // Hard case: multiplier at the pole, deficit placed on the first
            // largest-d axis. KKT still holds there since (1 + lambda d) = 0
            // multiplies that coordinate.
            let mut w: Vec<f64> = w_tilde
                .iter()
                .zip(d)
                .map(|(&wt, &di)| {
                    if di == d_max {
                        0.0
                    } else {
                        wt * d_max / (d_max - di)
                    }
                })
                .collect();
            let deficit = target - at_pole;
            let slot = d
                .iter()
                .position(|&di| di == d_max)
                .expect("d_max is attained");
            w[slot] = (deficit / d_max).sqrt();
            return Ok(Projection {
                w,
                multiplier: lambda_min,
            });
        }
    }

    let residual_tol = 1e-12 * target;
    let build = |lambda: f64| -> Projection {
        let w = w_tilde
            .iter()
            .zip(d)
            .map(|(&wt, &di)| wt / (1.0 + lambda * di))
            .collect();
        Projection {
            w,
            multiplier: lambda,
        }
    };

    // Bracket the root: phi(lo) > 0 > phi(hi).
    let at_zero = phi(0.0);
    if at_zero.abs() <= residual_tol {
        return Ok(build(0.0)); // the seed is already feasible
    }
    let (mut lo, mut hi);
    if at_zero > 0.0 {
        lo = 0.0;
        hi = 1.0 / d_max;
        let mut guard = 0;
        while phi(hi) > 0.0 {
            lo = hi;
            hi *= 2.0;
            guard += 1;
            if guard > 500 {
                return Err(Error::NoConvergence {
                    op: "elliptical_project",
                    iters: guard,
                    residual: phi(hi).abs(),
                });
            }
        }
    } else {
        hi = 0.0;
        lo = f64::NAN;
        // Walk towards the pole until the constraint value crosses the
        // target; guaranteed since phi grows without bound (seed mass on the
        // pole) or exceeds the target there (checked above).
        for k in 1..=200 {
            let cand = lambda_min * (1.0 - 0.5_f64.powi(k));
            let val = phi(cand);
            if val > 0.0 {
                lo = cand;
                break;
            }
            hi = cand;
        }
        if lo.is_nan() {
            return Err(Error::NoConvergence {
                op: "elliptical_project",
                iters: 200,
                residual: phi(hi).abs(),
            });
        }
    }

    // Safeguarded Newton: fall back to bisection whenever the step leaves
    // the bracket. phi is monotone, so the bracket only shrinks.
    let mut lambda = 0.5 * (lo + hi);
    let mut best = (f64::INFINITY, lambda);
    for _ in 0..200 {
        let f = phi(lambda);
        if f.abs() < best.0 {
            best = (f.abs(), lambda);
        }
        if f.abs() <= residual_tol {
            return Ok(build(lambda));
        }
        if f > 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        let fp = phi_prime(lambda);
        let newton = lambda - f / fp;
        lambda = if fp.is_finite() && fp < 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    if best.0 <= 1e-11 * target {
        Ok(build(best.1))
    } else {
        Err(Error::NoConvergence {
            op: "elliptical_project",
            iters: 200,
            residual: best.0,
        })
    }
}

/// The bias that centres a neuron's logit at zero for the given input means:
/// `b = -sum_i w_i E[x_i]`.
///
/// # Panics
///
/// Panics when the two slices differ in length.
pub fn ep_bias(weights_row: &[f64], means: &[f64]) -> f64 {
    assert_eq!(
        weights_row.len(),
        means.len(),
        "ep_bias: weight row and means must be equal-length"
    );
    -weights_row.iter().zip(means).map(|(w, m)| w * m).sum::<f64>()
}

/// One standard normal via Box–Muller (cosine branch only, for a fixed
/// draws-per-value count).
pub(crate) fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Deterministic per-layer RNG: one independent ChaCha stream per layer so
/// layers can be drawn in any order without changing the result.
pub(crate) fn layer_rng(seed: u64, layer: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(layer as u64);
    rng
}

pub(crate) fn uniform_matrix(out: usize, input: usize, half_width: f64, rng: &mut ChaCha8Rng) -> Array2<f64> {
    Array2::from_shape_fn((out, input), |_| rng.gen_range(-half_width..half_width))
}

/// Haar-uniform (semi-)orthogonal `(out x in)` matrix: orthonormal columns
/// when `out >= in`, orthonormal rows otherwise.
pub(crate) fn orthogonal_matrix(out: usize, input: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let (tall, wide) = (out.max(input), out.min(input));
    let gauss = Array2::from_shape_fn((tall, wide), |_| standard_normal(rng));
    let q = orthonormal_columns(gauss);
    if out >= input {
        q
    } else {
        // Copy into row-major order: `to_owned` on the transposed view would
        // keep the flipped strides, and downstream code (the optimizer in
        // particular) views parameter tensors as contiguous slices.
        q.t().as_standard_layout().into_owned()
    }
}

/// Uniform weights in `±1/sqrt(fan_in)`, zero biases.
pub fn init_lecun(net: &NetworkSpec, seed: u64) -> Vec<LayerParams> {
    (0..net.layer_count())
        .map(|l| {
            let (input, out) = (net.widths()[l], net.widths()[l + 1]);
            let mut rng = layer_rng(seed, l);
            let half = 1.0 / (input as f64).sqrt();
            LayerParams {
                weights: uniform_matrix(out, input, half, &mut rng),
                biases: Array1::zeros(out),
            }
        })
        .collect()
}

/// Uniform weights in `±sqrt(6)/sqrt(fan_in + fan_out)`, zero biases.
pub fn init_glorot(net: &NetworkSpec, seed: u64) -> Vec<LayerParams> {
    (0..net.layer_count())
        .map(|l| {
            let (input, out) = (net.widths()[l], net.widths()[l + 1]);
            let mut rng = layer_rng(seed, l);
            let half = 6.0_f64.sqrt() / ((input + out) as f64).sqrt();
            LayerParams {
                weights: uniform_matrix(out, input, half, &mut rng),
                biases: Array1::zeros(out),
            }
        })
        .collect()
}

/// Haar-uniform (semi-)orthogonal weights, zero biases.
pub fn init_ortho(net: &NetworkSpec, seed: u64) -> Vec<LayerParams> {
    (0..net.layer_count())
        .map(|l| {
            let (input, out) = (net.widths()[l], net.widths()[l + 1]);
            let mut rng = layer_rng(seed, l);
            LayerParams {
                weights: orthogonal_matrix(out, input, &mut rng),
                biases: Array1::zeros(out),
            }
        })
        .collect()
}

/// Layer-sequential unit-variance initialisation: orthogonal seed, then each
/// layer's weights rescaled until its pre-activation variance over the
/// calibration batch reaches `1` within `tolerance` (or `max_iters` passes).
///
/// # Errors
///
/// [`Error::Shape`] for a calibration batch narrower than the input layer or
/// with fewer than two samples; [`Error::DegenerateBatch`] when a layer sees
/// zero pre-activation variance (rescaling undefined).
pub fn init_lsuv(
    net: &NetworkSpec,
    seed: u64,
    calibration: ArrayView2<'_, f64>,
    tolerance: f64,
    max_iters: usize,
) -> Result<Vec<LayerParams>> {
    if calibration.nrows() < 2 || calibration.ncols() != net.input_width() {
        return Err(Error::Shape {
            op: "init_lsuv",
            msg: format!(
                "calibration batch {:?} unusable for input width {} (need >= 2 samples)",
                calibration.dim(),
                net.input_width()
            ),
        });
    }
    let mut params = init_ortho(net, seed);
    // Activations feeding layer l stay fixed while that layer is rescaled,
    // so they are propagated once per layer.
    let mut a_prev: Array2<f64> = calibration.to_owned();
    for l in 0..params.len() {
        for _ in 0..max_iters {
            let z = a_prev.dot(&params[l].weights.t()) + &params[l].biases;
            let (_, std) = crate::net::matrix_stats(&z);
            let var = std * std;
            if (var - 1.0).abs() < tolerance {
                break;
            }
            if var == 0.0 {
                return Err(Error::DegenerateBatch { layer: l });
            }
            params[l].weights /= var.sqrt();
        }
        if l + 1 < params.len() {
            let z = a_prev.dot(&params[l].weights.t()) + &params[l].biases;
            a_prev = z.mapv(logistic);
        }
    }
    Ok(params)
}

/// Base family for the entropy-targeting strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpBase {
    /// Seeds drawn uniformly from `U(-1, 1)`.
    Random,
    /// Haar-orthogonal seeds.
    Ortho,
}

fn ep_base_layers(net: &NetworkSpec, seed: u64, base: EpBase) -> Vec<LayerParams> {
    match base {
        EpBase::Random => (0..net.layer_count())
            .map(|l| {
                let (input, out) = (net.widths()[l], net.widths()[l + 1]);
                let mut rng = layer_rng(seed, l);
                LayerParams {
                    weights: uniform_matrix(out, input, 1.0, &mut rng),
                    biases: Array1::zeros(out),
                }
            })
            .collect(),
        EpBase::Ortho => init_ortho(net, seed),
    }
}

/// Rescale one row onto the sphere `k ||w||^2 = pi/2` (the isotropic special
/// case of the elliptical projection, solved radially and exactly).
fn ep_rescale_row(row: &mut [f64], k: f64, context: &str) -> Result<()> {
    let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroSeed {
            context: context.to_string(),
        });
    }
    let radius = (std::f64::consts::FRAC_PI_2 / k).sqrt();
    for x in row.iter_mut() {
        *x *= radius / norm;
    }
    Ok(())
}

/// Entropy-targeting initialisation: every neuron's logit is given mean 0
/// and variance `pi/2` under the layer's input statistics.
///
/// First layer: per-feature data statistics; when the variances are
/// (numerically) isotropic the rows are rescaled radially, otherwise each row
/// is moved to the ellipsoid by [`elliptical_project`]. Hidden and output
/// layers use the optimal-operating-point constants (mean `0.5`, variance
/// `k = 0.0589`). All biases come from [`ep_bias`].
///
/// # Errors
///
/// [`Error::Shape`] when the stats width does not match the input layer;
/// [`Error::ZeroSeed`] for a zero base row; projection errors pass through.
pub fn init_ep(
    net: &NetworkSpec,
    seed: u64,
    base: EpBase,
    first_layer_stats: &InputStats,
) -> Result<Vec<LayerParams>> {
    if first_layer_stats.dim() != net.input_width() {
        return Err(Error::Shape {
            op: "init_ep",
            msg: format!(
                "input stats dimension {} does not match input width {}",
                first_layer_stats.dim(),
                net.input_width()
            ),
        });
    }
    let mut params = ep_base_layers(net, seed, base);
    for (l, layer) in params.iter_mut().enumerate() {
        let first = l == 0;
        let means: Vec<f64> = if first {
            first_layer_stats.means().to_vec()
        } else {
            vec![OPTIMAL_OUTPUT_MEAN; layer.fan_in()]
        };
        let elliptical = first && !first_layer_stats.is_isotropic();
        for j in 0..layer.fan_out() {
            if elliptical {
                let seed_row: Vec<f64> = layer.weights.row(j).to_vec();
                if seed_row.iter().all(|&x| x == 0.0) {
                    return Err(Error::ZeroSeed {
                        context: format!("layer {l} row {j}"),
                    });
                }
                let problem = ProjectionProblem::new(
                    seed_row,
                    first_layer_stats.variances().to_vec(),
                    ProjectionProblem::DEFAULT_TARGET,
                )?;
                let projected = elliptical_project(&problem)?;
                layer
                    .weights
                    .row_mut(j)
                    .iter_mut()
                    .zip(&projected.w)
                    .for_each(|(dst, &src)| *dst = src);
            } else {
                let k = if first {
                    first_layer_stats.variances()[0]
                } else {
                    OPTIMAL_OUTPUT_VARIANCE
                };
                let mut row = layer.weights.row_mut(j);
                ep_rescale_row(
                    row.as_slice_mut().expect("row is contiguous"),
                    k,
                    &format!("layer {l} row {j}"),
                )?;
            }
            let row = layer.weights.row(j);
            layer.biases[j] = ep_bias(row.as_slice().expect("row is contiguous"), &means);
        }
    }
    Ok(params)
}

/// EP-scaled square recurrent matrix: every row on the sphere
/// `||w||^2 = pi/(2 k_var)`, so the whole matrix satisfies the norm law
/// `||W||_F = sqrt(pi h / (2 k_var))` exactly.
///
/// # Errors
///
/// [`Error::Domain`] for non-positive `k_var` or `hidden == 0`;
/// [`Error::ZeroSeed`] for a zero base row.
pub fn init_ep_recurrent(
    hidden: usize,
    k_var: f64,
    seed: u64,
    base: EpBase,
) -> Result<Array2<f64>> {
    if hidden == 0 || !k_var.is_finite() || k_var <= 0.0 {
        return Err(Error::Domain {
            op: "init_ep_recurrent",
            msg: format!("need hidden > 0 and k_var > 0, got hidden = {hidden}, k_var = {k_var}"),
        });
    }
    let mut rng = layer_rng(seed, 0);
    let mut w = match base {
        EpBase::Random => uniform_matrix(hidden, hidden, 1.0, &mut rng),
        EpBase::Ortho => orthogonal_matrix(hidden, hidden, &mut rng),
    };
    for j in 0..hidden {
        let mut row = w.row_mut(j);
        ep_rescale_row(
            row.as_slice_mut().expect("row is contiguous"),
            k_var,
            &format!("recurrent row {j}"),
        )?;
    }
    Ok(w)
}

/// EP initialisation of a full recurrent cell.
///
/// Each hidden neuron sees the concatenated `(y^{t-1}, x^t)` input, so the
/// `pi/2` logit-variance constraint is applied to the combined
/// `(W_rec | W_in)` row: variance `k = 0.0589` on the recurrent part, the
/// data statistics on the input part, solved by elliptical projection.
/// The output rows are spheres with `k = 0.0589`; every bias centres its
/// logit via [`ep_bias`].
///
/// # Errors
///
/// [`Error::Shape`] when stats do not match `input_dim`; seed and projection
/// errors pass through.
pub fn init_rnn_ep(
    input_dim: usize,
    hidden: usize,
    output_dim: usize,
    seed: u64,
    base: EpBase,
    input_stats: &InputStats,
) -> Result<RnnParams> {
    if input_stats.dim() != input_dim {
        return Err(Error::Shape {
            op: "init_rnn_ep",
            msg: format!(
                "input stats dimension {} does not match input dim {input_dim}",
                input_stats.dim()
            ),
        });
    }
    let mut rng = layer_rng(seed, 0);
    let (mut w_rec, mut w_in) = match base {
        EpBase::Random => (
            uniform_matrix(hidden, hidden, 1.0, &mut rng),
            uniform_matrix(hidden, input_dim, 1.0, &mut rng),
        ),
        EpBase::Ortho => {
            let rec = orthogonal_matrix(hidden, hidden, &mut rng);
            let inp = orthogonal_matrix(hidden, input_dim, &mut rng);
            (rec, inp)
        }
    };
    let mut rng_out = layer_rng(seed, 1);
    let mut w_out = match base {
        EpBase::Random => uniform_matrix(output_dim, hidden, 1.0, &mut rng_out),
        EpBase::Ortho => orthogonal_matrix(output_dim, hidden, &mut rng_out),
    };

    let mut d = vec![OPTIMAL_OUTPUT_VARIANCE; hidden];
    d.extend_from_slice(input_stats.variances());
    let mut b = Array1::zeros(hidden);
    for j in 0..hidden {
        let mut combined: Vec<f64> = w_rec.row(j).to_vec();
        combined.extend(w_in.row(j).iter());
        if combined.iter().all(|&x| x == 0.0) {
            return Err(Error::ZeroSeed {
                context: format!("recurrent row {j}"),
            });
        }
        let problem =
            ProjectionProblem::new(combined, d.clone(), ProjectionProblem::DEFAULT_TARGET)?;
        let projected = elliptical_project(&problem)?;
        let (rec_part, in_part) = projected.w.split_at(hidden);
        w_rec
            .row_mut(j)
            .iter_mut()
            .zip(rec_part)
            .for_each(|(dst, &src)| *dst = src);
        w_in
            .row_mut(j)
            .iter_mut()
            .zip(in_part)
            .for_each(|(dst, &src)| *dst = src);
        b[j] = -(rec_part.iter().sum::<f64>() * OPTIMAL_OUTPUT_MEAN)
            + ep_bias(in_part, input_stats.means());
    }

    let mut b_out = Array1::zeros(output_dim);
    let hidden_means = vec![OPTIMAL_OUTPUT_MEAN; hidden];
    for j in 0..output_dim {
        let mut row = w_out.row_mut(j);
        ep_rescale_row(
            row.as_slice_mut().expect("row is contiguous"),
            OPTIMAL_OUTPUT_VARIANCE,
            &format!("output row {j}"),
        )?;
        b_out[j] = ep_bias(w_out.row(j).as_slice().expect("contiguous"), &hidden_means);
    }

    Ok(RnnParams {
        w_in,
        w_rec,
        w_out,
        b,
        b_out,
    })
}

/// Auxiliary inputs a strategy may need: a calibration batch (LSUV) and
/// first-layer input statistics (EP).
#[derive(Debug, Clone, Copy, Default)]
pub struct InitData<'a> {
    pub calibration: Option<ArrayView2<'a, f64>>,
    pub input_stats: Option<&'a InputStats>,
}

/// Dispatch a strategy by name, validating that its auxiliary inputs are
/// present.
///
/// # Errors
///
/// [`Error::Domain`] when LSUV lacks a calibration batch or EP lacks input
/// statistics; strategy-specific errors pass through.
pub fn initialize(
    strategy: &InitStrategy,
    net: &NetworkSpec,
    seed: u64,
    data: &InitData<'_>,
) -> Result<Vec<LayerParams>> {
    match strategy {
        InitStrategy::Lecun => Ok(init_lecun(net, seed)),
        InitStrategy::Glorot => Ok(init_glorot(net, seed)),
        InitStrategy::Ortho => Ok(init_ortho(net, seed)),
        InitStrategy::Lsuv {
            tolerance,
            max_iters,
        } => {
            let calibration = data.calibration.ok_or_else(|| Error::Domain {
                op: "initialize",
                msg: "lsuv needs a calibration batch".into(),
            })?;
            init_lsuv(net, seed, calibration, *tolerance, *max_iters)
        }
        InitStrategy::RandomEp | InitStrategy::OrthoEp => {
            let stats = data.input_stats.ok_or_else(|| Error::Domain {
                op: "initialize",
                msg: "EP strategies need first-layer input statistics".into(),
            })?;
            let base = if matches!(strategy, InitStrategy::RandomEp) {
                EpBase::Random
            } else {
                EpBase::Ortho
            };
            init_ep(net, seed, base, stats)
        }
    }
}
