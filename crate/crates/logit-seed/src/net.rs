//! Dense feedforward networks with logistic hidden units.
//!
//! A network is a list of layers `z = W a + b`, `a' = g(z)` with `g` the
//! standard logistic, finished by either a softmax–cross-entropy head for
//! 1-of-K targets or an independent logistic (Bernoulli) head. Forward,
//! exact backpropagation, inverted dropout, and per-layer telemetry live
//! here; parameter *construction* is the business of [`crate::init`].
//!
//! Conventions: batches are `(samples x features)` matrices, weights are
//! `(out x in)`, and all objectives are mean cross-entropy in nats.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::special::{logistic, logistic_deriv, softplus};

/// Output-layer behaviour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputHead {
    /// Softmax over the final logits, trained with cross-entropy against
    /// class indices (or exact probability vectors).
    SoftmaxCrossEntropy,
    /// Independent logistic per output unit, trained with per-unit
    /// cross-entropy against targets in `(0, 1)`.
    LogisticPerUnit,
}

/// Architecture description: layer widths from input to output, plus the
/// output head. Hidden activations are always the standard logistic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkSpec {
    widths: Vec<usize>,
    head: OutputHead,
}

impl NetworkSpec {
    /// Validate and build. `widths` runs input-first, output-last.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] if fewer than two widths are given or any width is 0.
    pub fn new(widths: Vec<usize>, head: OutputHead) -> Result<Self> {
        if widths.len() < 2 {
            return Err(Error::Shape {
                op: "NetworkSpec::new",
                msg: format!("need at least input and output widths, got {}", widths.len()),
            });
        }
        if widths.iter().any(|&w| w == 0) {
            return Err(Error::Shape {
                op: "NetworkSpec::new",
                msg: format!("zero-width layer in {widths:?}"),
            });
        }
        Ok(Self { widths, head })
    }

    /// All layer widths, input first.
    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    /// Width of the input layer.
    pub fn input_width(&self) -> usize {
        self.widths[0]
    }

    /// Width of the output layer.
    pub fn output_width(&self) -> usize {
        *self.widths.last().expect("validated non-empty")
    }

    /// Number of weight layers (one less than the number of widths).
    pub fn layer_count(&self) -> usize {
        self.widths.len() - 1
    }

    /// The configured output head.
    pub fn head(&self) -> OutputHead {
        self.head
    }
}

/// One dense layer: `weights` is `(out x in)`, `biases` has length `out`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerParams {
    pub weights: Array2<f64>,
    pub biases: Array1<f64>,
}

impl LayerParams {
    /// Wrap a weight matrix and bias vector, checking they agree on `out`.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] when `biases.len() != weights.nrows()`.
    pub fn new(weights: Array2<f64>, biases: Array1<f64>) -> Result<Self> {
        if biases.len() != weights.nrows() {
            return Err(Error::Shape {
                op: "LayerParams::new",
                msg: format!(
                    "bias length {} does not match weight rows {}",
                    biases.len(),
                    weights.nrows()
                ),
            });
        }
        Ok(Self { weights, biases })
    }

    /// All-zero layer of the given dimensions.
    pub fn zeros(out: usize, input: usize) -> Self {
        Self {
            weights: Array2::zeros((out, input)),
            biases: Array1::zeros(out),
        }
    }

    /// Zero-filled layer with the same shape as `self` (gradient container).
    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.weights.nrows(), self.weights.ncols())
    }

    /// Input dimension.
    pub fn fan_in(&self) -> usize {
        self.weights.ncols()
    }

    /// Output dimension.
    pub fn fan_out(&self) -> usize {
        self.weights.nrows()
    }
}

/// Training targets: class indices for the softmax head, or a dense
/// `(samples x outputs)` matrix for either head.
#[derive(Debug, Clone, Copy)]
pub enum Targets<'a> {
    Classes(&'a [usize]),
    Dense(ArrayView2<'a, f64>),
}

/// Everything the forward pass computed, retained for backprop and
/// telemetry.
///
/// `activations[0]` is the input batch; `activations[l+1]` is layer `l`'s
/// output *after* any dropout mask. `pre_activations[l]` holds the logits
/// `z` of layer `l`. When dropout ran, `masks[l]` is the inverted-dropout
/// mask applied to hidden layer `l`'s activations.
#[derive(Debug, Clone)]
pub struct ForwardPass {
    pub pre_activations: Vec<Array2<f64>>,
    pub activations: Vec<Array2<f64>>,
    pub masks: Option<Vec<Array2<f64>>>,
}

impl ForwardPass {
    /// Final network output (softmax probabilities or logistic activations).
    pub fn output(&self) -> &Array2<f64> {
        self.activations.last().expect("pass has at least one layer")
    }

    /// Final-layer logits.
    pub fn logits(&self) -> &Array2<f64> {
        self.pre_activations.last().expect("pass has at least one layer")
    }
}

/// Per-iteration training telemetry: activation statistics and weight
/// gradient norms, one entry per non-input layer.
#[derive(Debug, Clone, PartialEq)]
pub struct TelemetryRecord {
    pub iteration: usize,
    pub per_layer_mean: Vec<f64>,
    pub per_layer_std: Vec<f64>,
    /// L2 norm of each layer's weight gradient.
    pub gradient_norms: Vec<f64>,
    /// Objective in nats.
    pub objective: f64,
}

fn check_net_shapes(
    net: &NetworkSpec,
    params: &[LayerParams],
    batch: ArrayView2<'_, f64>,
) -> Result<()> {
    if params.len() != net.layer_count() {
        return Err(Error::Shape {
            op: "forward",
            msg: format!(
                "{} parameter layers for a {}-layer network",
                params.len(),
                net.layer_count()
            ),
        });
    }
    for (l, layer) in params.iter().enumerate() {
        let (want_out, want_in) = (net.widths()[l + 1], net.widths()[l]);
        if layer.fan_out() != want_out || layer.fan_in() != want_in {
            return Err(Error::Shape {
                op: "forward",
                msg: format!(
                    "layer {l}: weights are {}x{}, spec wants {}x{}",
                    layer.fan_out(),
                    layer.fan_in(),
                    want_out,
                    want_in
                ),
            });
        }
    }
    if batch.ncols() != net.input_width() {
        return Err(Error::Shape {
            op: "forward",
            msg: format!(
                "batch width {} does not match input width {}",
                batch.ncols(),
                net.input_width()
            ),
        });
    }
    Ok(())
}

/// Row-wise softmax with the usual max-shift stabilization.
fn softmax_rows(logits: &Array2<f64>) -> Array2<f64> {
    let mut out = logits.clone();
    for mut row in out.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        row.mapv_inplace(|z| (z - max).exp());
        let sum = row.sum();
        row.mapv_inplace(|e| e / sum);
    }
    out
}

fn run_forward(
    net: &NetworkSpec,
    params: &[LayerParams],
    batch: ArrayView2<'_, f64>,
    mut dropout: Option<(f64, &mut ChaCha8Rng)>,
) -> Result<ForwardPass> {
    check_net_shapes(net, params, batch)?;
    let layers = net.layer_count();
    let mut activations = Vec::with_capacity(layers + 1);
    let mut pre_activations = Vec::with_capacity(layers);
    let mut masks = dropout.as_ref().map(|_| Vec::with_capacity(layers.saturating_sub(1)));
    activations.push(batch.to_owned());

    for (l, layer) in params.iter().enumerate() {
        let z = activations[l].dot(&layer.weights.t()) + &layer.biases;
        let is_output = l + 1 == layers;
        let mut a = if is_output {
            match net.head() {
                OutputHead::SoftmaxCrossEntropy => softmax_rows(&z),
                OutputHead::LogisticPerUnit => z.mapv(logistic),
            }
        } else {
            z.mapv(logistic)
        };
        if !is_output {
            if let Some((p, rng)) = dropout.as_mut() {
                let mask = dropout_mask(a.dim(), *p, rng);
                a *= &mask;
                masks.as_mut().expect("masks allocated with dropout").push(mask);
            }
        }
        pre_activations.push(z);
        activations.push(a);
    }
    Ok(ForwardPass {
        pre_activations,
        activations,
        masks,
    })
}

/// Evaluation-mode forward pass (no dropout).
///
/// # Errors
///
/// [`Error::Shape`] when parameters or batch do not match the spec.
pub fn forward(
    net: &NetworkSpec,
    params: &[LayerParams],
    batch: ArrayView2<'_, f64>,
) -> Result<ForwardPass> {
    run_forward(net, params, batch, None)
}

/// Training-mode forward pass with optional inverted dropout on every hidden
/// layer. The masks are retained in the returned pass so backprop sees the
/// same network the forward pass used.
///
/// # Errors
///
/// [`Error::Shape`] on dimension mismatch; [`Error::Domain`] for `p` outside
/// `[0, 1)`.
pub fn forward_train(
    net: &NetworkSpec,
    params: &[LayerParams],
    batch: ArrayView2<'_, f64>,
    dropout: Option<(f64, &mut ChaCha8Rng)>,
) -> Result<ForwardPass> {
    if let Some((p, _)) = dropout {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Domain {
                op: "forward_train",
                msg: format!("dropout probability {p} outside [0, 1)"),
            });
        }
    }
    run_forward(net, params, batch, dropout)
}

/// Inverted-dropout mask: entries are `0` with probability `p`, else
/// `1/(1-p)`, so the masked activation is unbiased in expectation.
fn dropout_mask(dim: (usize, usize), p: f64, rng: &mut ChaCha8Rng) -> Array2<f64> {
    if p == 0.0 {
        return Array2::ones(dim);
    }
    let keep_scale = 1.0 / (1.0 - p);
    Array2::from_shape_fn(dim, |_| {
        if rng.gen::<f64>() < p {
            0.0
        } else {
            keep_scale
        }
    })
}

/// Standalone inverted dropout on an activation matrix.
///
/// In training mode each unit is zeroed with probability `p` and survivors
/// are scaled by `1/(1-p)`; in evaluation mode the input is returned
/// unchanged. Requires `p` in `[0, 1)`.
pub fn apply_dropout(
    activations: ArrayView2<'_, f64>,
    p: f64,
    seed: u64,
    train: bool,
) -> Array2<f64> {
    assert!((0.0..1.0).contains(&p), "dropout probability {p} outside [0, 1)");
    if !train {
        return activations.to_owned();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = dropout_mask(activations.dim(), p, &mut rng);
    &activations.to_owned() * &mask
}

fn check_targets(net: &NetworkSpec, rows: usize, targets: &Targets<'_>) -> Result<()> {
    match targets {
        Targets::Classes(labels) => {
            if labels.len() != rows {
                return Err(Error::Shape {
                    op: "objective",
                    msg: format!("{} labels for {} samples", labels.len(), rows),
                });
            }
            let classes = net.output_width();
            for &label in *labels {
                if label >= classes {
                    return Err(Error::InvalidLabel { label, classes });
                }
            }
        }
        Targets::Dense(t) => {
            if t.dim() != (rows, net.output_width()) {
                return Err(Error::Shape {
                    op: "objective",
                    msg: format!(
                        "target matrix is {:?}, expected ({}, {})",
                        t.dim(),
                        rows,
                        net.output_width()
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Mean cross-entropy (nats) from final-layer logits; numerically stable via
/// log-sum-exp for the softmax head and softplus for the logistic head.
fn objective_from_logits(
    net: &NetworkSpec,
    logits: &Array2<f64>,
    targets: &Targets<'_>,
) -> Result<f64> {
    check_targets(net, logits.nrows(), targets)?;
    let n = logits.nrows() as f64;
    let total = match net.head() {
        OutputHead::SoftmaxCrossEntropy => {
            let mut acc = 0.0;
            for (i, row) in logits.rows().into_iter().enumerate() {
                let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
                let lse = max + row.iter().map(|&z| (z - max).exp()).sum::<f64>().ln();
                match targets {
                    Targets::Classes(labels) => acc += lse - row[labels[i]],
                    Targets::Dense(t) => {
                        acc += row
                            .iter()
                            .zip(t.row(i))
                            .map(|(&z, &p)| p * (lse - z))
                            .sum::<f64>();
                    }
                }
            }
            acc
        }
        OutputHead::LogisticPerUnit => {
            let Targets::Dense(t) = targets else {
                return Err(Error::Shape {
                    op: "objective",
                    msg: "logistic head needs dense targets in (0,1)".into(),
                });
            };
            logits
                .iter()
                .zip(t.iter())
                .map(|(&z, &tv)| softplus(z) - tv * z)
                .sum()
        }
    };
    Ok(total / n)
}

/// Mean cross-entropy of a completed forward pass against targets.
///
/// # Errors
///
/// [`Error::Shape`] / [`Error::InvalidLabel`] for malformed targets.
pub fn objective(net: &NetworkSpec, pass: &ForwardPass, targets: &Targets<'_>) -> Result<f64> {
    objective_from_logits(net, pass.logits(), targets)
}

/// Exact gradients of the mean cross-entropy with respect to every weight
/// and bias, reusing a completed forward pass (dropout masks included).
/// Returns `(gradients, objective)`.
///
/// # Errors
///
/// [`Error::Shape`] / [`Error::InvalidLabel`] for malformed inputs.
pub fn backward_from(
    net: &NetworkSpec,
    params: &[LayerParams],
    pass: &ForwardPass,
    targets: &Targets<'_>,
) -> Result<(Vec<LayerParams>, f64)> {
    let loss = objective_from_logits(net, pass.logits(), targets)?;
    let layers = net.layer_count();
    let batch = pass.activations[0].nrows() as f64;

    // Output-layer delta dL/dz in both heads is (prediction - target) / n.
    let mut delta = pass.output().clone();
    match targets {
        Targets::Classes(labels) => {
            for (i, &label) in labels.iter().enumerate() {
                delta[[i, label]] -= 1.0;
            }
        }
        Targets::Dense(t) => delta -= t,
    }
    delta /= batch;

    let mut grads: Vec<LayerParams> = params.iter().map(LayerParams::zeros_like).collect();
    for l in (0..layers).rev() {
        // `dot` yields a column-major result when both operands have unit
        // row stride (single-column activations); the optimizer needs
        // contiguous row-major tensors.
        let w = delta.t().dot(&pass.activations[l]);
        grads[l].weights = if w.is_standard_layout() {
            w
        } else {
            w.as_standard_layout().into_owned()
        };
        grads[l].biases = delta.sum_axis(Axis(0));
        if l > 0 {
            let mut prev = delta.dot(&params[l].weights);
            prev.zip_mut_with(&pass.pre_activations[l - 1], |d, &z| *d *= logistic_deriv(z));
            if let Some(masks) = &pass.masks {
                prev *= &masks[l - 1];
            }
            delta = prev;
        }
    }
    Ok((grads, loss))
}

/// Exact gradients of the mean cross-entropy, running its own clean
/// (dropout-free) forward pass. Matches central finite differences of
/// [`objective`] on the same inputs.
///
/// # Errors
///
/// [`Error::Shape`] / [`Error::InvalidLabel`] for malformed inputs.
pub fn backward(
    net: &NetworkSpec,
    params: &[LayerParams],
    batch: ArrayView2<'_, f64>,
    targets: &Targets<'_>,
) -> Result<Vec<LayerParams>> {
    let pass = forward(net, params, batch)?;
    backward_from(net, params, &pass, targets).map(|(grads, _)| grads)
}

/// Mean and population standard deviation over every entry of a matrix.
pub(crate) fn matrix_stats(a: &Array2<f64>) -> (f64, f64) {
    let n = a.len() as f64;
    let mean = a.sum() / n;
    let var = a.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Summarise a training step: per-layer activation mean/std over
/// `(units x batch)` and the L2 norm of each layer's weight gradient.
///
/// `pass` supplies the activations (non-input layers, in order); `grads` may
/// be empty when no backward pass has run yet.
pub fn collect_telemetry(
    pass: &ForwardPass,
    grads: &[LayerParams],
    iteration: usize,
    objective: f64,
) -> TelemetryRecord {
    let mut per_layer_mean = Vec::with_capacity(pass.activations.len() - 1);
    let mut per_layer_std = Vec::with_capacity(pass.activations.len() - 1);
    for a in &pass.activations[1..] {
        let (mean, std) = matrix_stats(a);
        per_layer_mean.push(mean);
        per_layer_std.push(std);
    }
    let gradient_norms = grads
        .iter()
        .map(|g| g.weights.iter().map(|&x| x * x).sum::<f64>().sqrt())
        .collect();
    TelemetryRecord {
        iteration,
        per_layer_mean,
        per_layer_std,
        gradient_norms,
        objective,
    }
}
