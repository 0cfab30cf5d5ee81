//! First-order optimizers over flat views of parameter sets.
//!
//! The two training loops in this crate (feedforward and recurrent) share
//! these steppers through the [`ParamTensors`] trait, which exposes any
//! parameter set as a list of contiguous `f64` slices. Supported updates:
//!
//! * heavy-ball momentum SGD: `v <- momentum v - lr g`, `p <- p + v`;
//! * Adam with bias correction (`beta1`, `beta2`, `epsilon` as usual).
//!
//! Gradient clipping, when configured, rescales the *global* gradient norm
//! before any moment accumulation, so the optimizer state only ever sees the
//! clipped gradient.

use crate::error::{Error, Result};
use crate::net::LayerParams;
use crate::rnn::RnnParams;

/// Which update rule to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimKind {
    MomentumSgd,
    Adam,
}

/// Hyper-parameters for [`step`]. Build via [`OptimizerConfig::momentum_sgd`]
/// or [`OptimizerConfig::adam`], then adjust fields or chain
/// [`OptimizerConfig::with_clip`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub kind: OptimKind,
    pub learning_rate: f64,
    /// Heavy-ball coefficient (MomentumSgd only).
    pub momentum: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    /// Global-norm ceiling applied to the gradient before the update;
    /// `None` disables clipping.
    pub clip_threshold: Option<f64>,
}

impl OptimizerConfig {
    /// Heavy-ball SGD with the given learning rate and momentum.
    pub fn momentum_sgd(learning_rate: f64, momentum: f64) -> Self {
        Self {
            kind: OptimKind::MomentumSgd,
            learning_rate,
            momentum,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            clip_threshold: None,
        }
    }

    /// Adam with the conventional moment coefficients 0.9 / 0.999 and
    /// epsilon 1e-8.
    pub fn adam(learning_rate: f64) -> Self {
        Self {
            kind: OptimKind::Adam,
            learning_rate,
            momentum: 0.0,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            clip_threshold: None,
        }
    }

    /// Same configuration with gradient clipping at the given global norm.
    pub fn with_clip(mut self, threshold: f64) -> Self {
        self.clip_threshold = Some(threshold);
        self
    }

    /// Check every field is in its legal range.
    ///
    /// # Errors
    ///
    /// [`Error::Config`] naming the offending field.
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config(format!(
                "learning_rate must be positive and finite, got {}",
                self.learning_rate
            )));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::Config(format!(
                "momentum must lie in [0, 1), got {}",
                self.momentum
            )));
        }
        for (name, beta) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(0.0..1.0).contains(&beta) {
                return Err(Error::Config(format!(
                    "{name} must lie in [0, 1), got {beta}"
                )));
            }
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::Config(format!(
                "epsilon must be positive and finite, got {}",
                self.epsilon
            )));
        }
        if let Some(c) = self.clip_threshold {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::Config(format!(
                    "clip_threshold must be positive and finite, got {c}"
                )));
            }
        }
        Ok(())
    }
}

/// A parameter set viewed as a list of flat `f64` slices, in a fixed order.
/// Implementations must return the same number of slices with the same
/// lengths on every call for a given value's shape.
pub trait ParamTensors {
    fn tensors(&self) -> Vec<&[f64]>;
    fn tensors_mut(&mut self) -> Vec<&mut [f64]>;
}

impl ParamTensors for Vec<LayerParams> {
    fn tensors(&self) -> Vec<&[f64]> {
        self.iter()
            .flat_map(|layer| {
                [
                    layer.weights.as_slice().expect("standard layout"),
                    layer.biases.as_slice().expect("standard layout"),
                ]
            })
            .collect()
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        self.iter_mut()
            .flat_map(|layer| {
                [
                    layer.weights.as_slice_mut().expect("standard layout"),
                    layer.biases.as_slice_mut().expect("standard layout"),
                ]
            })
            .collect()
    }
}

impl ParamTensors for RnnParams {
    fn tensors(&self) -> Vec<&[f64]> {
        vec![
            self.w_in.as_slice().expect("standard layout"),
            self.w_rec.as_slice().expect("standard layout"),
            self.w_out.as_slice().expect("standard layout"),
            self.b.as_slice().expect("standard layout"),
            self.b_out.as_slice().expect("standard layout"),
        ]
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        vec![
            self.w_in.as_slice_mut().expect("standard layout"),
            self.w_rec.as_slice_mut().expect("standard layout"),
            self.w_out.as_slice_mut().expect("standard layout"),
            self.b.as_slice_mut().expect("standard layout"),
            self.b_out.as_slice_mut().expect("standard layout"),
        ]
    }
}

/// Global L2 norm across every tensor of a parameter (or gradient) set.
pub fn global_norm(params: &impl ParamTensors) -> f64 {
    params
        .tensors()
        .iter()
        .flat_map(|s| s.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
}

/// Mutable per-tensor buffers (first and second moments), allocated lazily
/// to match whatever parameter set the first [`step`] sees.
#[derive(Debug, Clone, Default)]
pub struct OptimState {
    step_count: u64,
    first_moment: Vec<Vec<f64>>,
    second_moment: Vec<Vec<f64>>,
}

impl OptimState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of completed updates.
    pub fn steps(&self) -> u64 {
        self.step_count
    }

    fn ensure_shape(&mut self, shapes: &[usize]) -> Result<()> {
        if self.first_moment.is_empty() {
            self.first_moment = shapes.iter().map(|&n| vec![0.0; n]).collect();
            self.second_moment = shapes.iter().map(|&n| vec![0.0; n]).collect();
            return Ok(());
        }
        let stored: Vec<usize> = self.first_moment.iter().map(Vec::len).collect();
        if stored != shapes {
            return Err(Error::Shape {
                op: "optim::step",
                msg: format!(
                    "optimizer state shaped for {stored:?} applied to tensors {shapes:?}"
                ),
            });
        }
        Ok(())
    }
}

/// Apply one update to `params` in place.
///
/// The gradient is first rescaled so its global norm does not exceed
/// `config.clip_threshold` (when set); moments accumulate the clipped
/// gradient. MomentumSgd uses only the first-moment buffer as its velocity.
///
/// # Errors
///
/// [`Error::Config`] for invalid hyper-parameters, [`Error::Shape`] when
/// `params`, `grads` and the optimizer state disagree on tensor sizes, and
/// [`Error::NonFiniteLoss`]-free here — non-finite gradients are the
/// caller's concern.
pub fn step<P: ParamTensors>(
    state: &mut OptimState,
    params: &mut P,
    grads: &P,
    config: &OptimizerConfig,
) -> Result<()> {
    config.validate()?;
    let grad_slices = grads.tensors();
    let mut param_slices = params.tensors_mut();
    let shapes: Vec<usize> = param_slices.iter().map(|s| s.len()).collect();
    let grad_shapes: Vec<usize> = grad_slices.iter().map(|s| s.len()).collect();
    if shapes != grad_shapes {
        return Err(Error::Shape {
            op: "optim::step",
            msg: format!("params have tensors {shapes:?} but grads have {grad_shapes:?}"),
        });
    }
    state.ensure_shape(&shapes)?;

    let mut scale = 1.0;
    if let Some(threshold) = config.clip_threshold {
        let norm = grad_slices
            .iter()
            .flat_map(|s| s.iter())
            .map(|g| g * g)
            .sum::<f64>()
            .sqrt();
        if norm > threshold {
            scale = threshold / norm;
        }
    }

    state.step_count += 1;
    match config.kind {
        OptimKind::MomentumSgd => {
            for ((p, g), v) in param_slices
                .iter_mut()
                .zip(&grad_slices)
                .zip(&mut state.first_moment)
            {
                for i in 0..p.len() {
                    v[i] = config.momentum * v[i] - config.learning_rate * scale * g[i];
                    p[i] += v[i];
                }
            }
        }
        OptimKind::Adam => {
            let t = state.step_count as i32;
            let bias1 = 1.0 - config.beta1.powi(t);
            let bias2 = 1.0 - config.beta2.powi(t);
            for (((p, g), m), v) in param_slices
                .iter_mut()
                .zip(&grad_slices)
                .zip(&mut state.first_moment)
                .zip(&mut state.second_moment)
            {
                for i in 0..p.len() {
                    let gi = scale * g[i];
                    m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * gi;
                    v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * gi * gi;
                    let m_hat = m[i] / bias1;
                    let v_hat = v[i] / bias2;
                    p[i] -= config.learning_rate * m_hat / (v_hat.sqrt() + config.epsilon);
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use ndarray::{array, Array1, Array2};

    fn one_layer(w: Array2<f64>, b: Array1<f64>) -> Vec<LayerParams> {
        vec![LayerParams {
            weights: w,
            biases: b,
        }]
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        assert!(OptimizerConfig::momentum_sgd(0.1, 0.9).validate().is_ok());
        assert!(OptimizerConfig::momentum_sgd(0.0, 0.9).validate().is_err());
        assert!(OptimizerConfig::momentum_sgd(0.1, 1.0).validate().is_err());
        assert!(OptimizerConfig::adam(0.001).validate().is_ok());
        let mut bad = OptimizerConfig::adam(0.001);
        bad.beta2 = 1.0;
        assert!(bad.validate().is_err());
        assert!(OptimizerConfig::adam(0.001).with_clip(0.0).validate().is_err());
    }

    #[test]
    fn plain_sgd_is_momentum_zero() {
        let mut params = one_layer(array![[1.0, 2.0]], array![0.5]);
        let grads = one_layer(array![[0.5, -1.0]], array![2.0]);
        let mut state = OptimState::new();
        let config = OptimizerConfig::momentum_sgd(0.1, 0.0);
        step(&mut state, &mut params, &grads, &config).unwrap();
        assert_abs_diff_eq!(params[0].weights[[0, 0]], 1.0 - 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(params[0].weights[[0, 1]], 2.0 + 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(params[0].biases[0], 0.5 - 0.2, epsilon = 1e-15);
    }

    #[test]
    fn heavy_ball_velocity_accumulates() {
        let mut params = one_layer(array![[0.0]], array![0.0]);
        let grads = one_layer(array![[1.0]], array![0.0]);
        let mut state = OptimState::new();
        let config = OptimizerConfig::momentum_sgd(1.0, 0.5);
        // v: -1, -1.5, -1.75; p: -1, -2.5, -4.25.
        step(&mut state, &mut params, &grads, &config).unwrap();
        assert_abs_diff_eq!(params[0].weights[[0, 0]], -1.0);
        step(&mut state, &mut params, &grads, &config).unwrap();
        assert_abs_diff_eq!(params[0].weights[[0, 0]], -2.5);
        step(&mut state, &mut params, &grads, &config).unwrap();
        assert_abs_diff_eq!(params[0].weights[[0, 0]], -4.25);
    }

    #[test]
    fn first_adam_step_moves_by_learning_rate() {
        // With bias correction, step one is lr * g / (|g| + eps) regardless
        // of the gradient's magnitude.
        let mut params = one_layer(array![[3.0, -2.0]], array![1.0]);
        let grads = one_layer(array![[100.0, -0.001]], array![0.0]);
        let mut state = OptimState::new();
        let config = OptimizerConfig::adam(0.01);
        step(&mut state, &mut params, &grads, &config).unwrap();
        assert_relative_eq!(params[0].weights[[0, 0]], 3.0 - 0.01, max_relative = 1e-6);
        assert_relative_eq!(params[0].weights[[0, 1]], -2.0 + 0.01, max_relative = 1e-4);
        assert_abs_diff_eq!(params[0].biases[0], 1.0); // zero gradient, no move
    }

    #[test]
    fn clipping_rescales_the_global_norm_before_momentum() {
        let mut params = one_layer(array![[0.0, 0.0]], array![0.0]);
        let grads = one_layer(array![[3.0, 0.0]], array![4.0]); // norm 5
        let mut state = OptimState::new();
        let config = OptimizerConfig::momentum_sgd(1.0, 0.0).with_clip(1.0);
        step(&mut state, &mut params, &grads, &config).unwrap();
        // Effective gradient is (0.6, 0, 0.8).
        assert_abs_diff_eq!(params[0].weights[[0, 0]], -0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(params[0].biases[0], -0.8, epsilon = 1e-15);
        // Below the threshold nothing changes.
        let mut params2 = one_layer(array![[0.0, 0.0]], array![0.0]);
        let small = one_layer(array![[0.3, 0.0]], array![0.4]);
        let mut state2 = OptimState::new();
        step(&mut state2, &mut params2, &small, &config).unwrap();
        assert_abs_diff_eq!(params2[0].weights[[0, 0]], -0.3, epsilon = 1e-15);
    }

    #[test]
    fn state_shape_mismatch_is_an_error() {
        let mut params = one_layer(array![[0.0, 0.0]], array![0.0]);
        let grads = one_layer(array![[1.0, 1.0]], array![1.0]);
        let mut state = OptimState::new();
        let config = OptimizerConfig::adam(0.001);
        step(&mut state, &mut params, &grads, &config).unwrap();
        let mut other = one_layer(array![[0.0], [0.0]], array![0.0, 0.0]);
        let other_grads = one_layer(array![[1.0], [1.0]], array![1.0, 1.0]);
        assert!(step(&mut state, &mut other, &other_grads, &config).is_err());
        // Params/grads disagreement is also caught.
        let wrong = one_layer(array![[1.0]], array![1.0]);
        assert!(step(&mut state, &mut params, &wrong, &config).is_err());
    }

    #[test]
    fn rnn_params_round_trip_through_the_trait() {
        let mut p = RnnParams::zeros(2, 3, 2);
        assert_eq!(p.tensors().len(), 5);
        let total: usize = p.tensors().iter().map(|s| s.len()).sum();
        assert_eq!(total, 3 * 2 + 3 * 3 + 2 * 3 + 3 + 2);
        let mut g = RnnParams::zeros(2, 3, 2);
        g.w_rec[[1, 1]] = 2.0;
        let mut state = OptimState::new();
        let config = OptimizerConfig::momentum_sgd(0.5, 0.0);
        step(&mut state, &mut p, &g, &config).unwrap();
        assert_abs_diff_eq!(p.w_rec[[1, 1]], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(global_norm(&p), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn adam_descends_on_a_quadratic() {
        // Minimize 0.5 * ||p - target||^2 with one tensor.
        let target = array![[1.0, -2.0, 0.5]];
        let mut params = one_layer(Array2::zeros((1, 3)), Array1::zeros(0));
        let mut state = OptimState::new();
        let config = OptimizerConfig::adam(0.05);
        for _ in 0..2000 {
            let grads = one_layer(&params[0].weights - &target, Array1::zeros(0));
            step(&mut state, &mut params, &grads, &config).unwrap();
        }
        for (a, b) in params[0].weights.iter().zip(target.iter()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-6);
        }
    }
}
