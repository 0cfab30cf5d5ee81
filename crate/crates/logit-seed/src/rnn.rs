//! Recurrent networks with logistic state units, BPTT, and gradient-chain
//! diagnostics.
//!
//! The cell is `y^t = g(W y^{t-1} + W_in x^t + b)` with readout
//! `W_out y^t + b_out`, finished by either a softmax (symbol tasks, the
//! default) or a per-unit logistic head. Besides training gradients, this
//! module measures what actually happens to long-range credit assignment:
//! the chain `dL^t/dy^k` shrinks or explodes with the per-step factors
//! `diag(g'(z^l)) W`, each of which is bounded by `||W||_F / 4` because the
//! logistic slope never exceeds one quarter. Comparing the exact chain norm
//! against the product bound, and `||W||_F` against the vanishing threshold
//! `4`, is the whole point of [`gradient_chain_norms`] and
//! [`frobenius_criticality`].
//!
//! Everything is batched time-major internally (`inputs[t]` is a
//! `(batch x dim)` matrix); single-sequence wrappers are provided for the
//! vector-in, vector-out view.

use ndarray::{Array1, Array2, Axis};

use crate::error::{Error, Result};
use crate::special::{logistic, logistic_deriv, softplus};

/// Parameters of one recurrent cell. Shapes: `w_in (h x d)`, `w_rec (h x h)`,
/// `w_out (o x h)`, `b (h)`, `b_out (o)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RnnParams {
    pub w_in: Array2<f64>,
    pub w_rec: Array2<f64>,
    pub w_out: Array2<f64>,
    pub b: Array1<f64>,
    pub b_out: Array1<f64>,
}

impl RnnParams {
    /// All-zero parameters for the given input/hidden/output dimensions.
    pub fn zeros(input: usize, hidden: usize, output: usize) -> Self {
        Self {
            w_in: Array2::zeros((hidden, input)),
            w_rec: Array2::zeros((hidden, hidden)),
            w_out: Array2::zeros((output, hidden)),
            b: Array1::zeros(hidden),
            b_out: Array1::zeros(output),
        }
    }

    /// `(input, hidden, output)` dimensions.
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.w_in.ncols(), self.w_rec.nrows(), self.w_out.nrows())
    }

    /// Zero-filled clone of the same shape (gradient container).
    pub fn zeros_like(&self) -> Self {
        let (d, h, o) = self.dims();
        Self::zeros(d, h, o)
    }

    /// Check the five tensors agree on dimensions.
    ///
    /// # Errors
    ///
    /// [`Error::Shape`] describing the first inconsistency found.
    pub fn validate(&self) -> Result<()> {
        let (_, h, o) = self.dims();
        if self.w_rec.ncols() != h {
            return Err(Error::Shape {
                op: "RnnParams::validate",
                msg: format!("w_rec is {:?}, must be square", self.w_rec.dim()),
            });
        }
        if self.w_in.nrows() != h || self.b.len() != h {
            return Err(Error::Shape {
                op: "RnnParams::validate",
                msg: format!(
                    "hidden dims disagree: w_in rows {}, b len {}, w_rec {}",
                    self.w_in.nrows(),
                    self.b.len(),
                    h
                ),
            });
        }
        if self.w_out.ncols() != h || self.b_out.len() != o {
            return Err(Error::Shape {
                op: "RnnParams::validate",
                msg: format!(
                    "output dims disagree: w_out {:?}, b_out len {}",
                    self.w_out.dim(),
                    self.b_out.len()
                ),
            });
        }
        Ok(())
    }
}

/// Output-head behaviour of the readout layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RnnHead {
    /// Softmax over symbols with cross-entropy loss (the training default).
    Softmax,
    /// Per-unit logistic with per-unit cross-entropy, the literal recurrent
    /// readout `g(W_out y + b_out)`.
    Logistic,
}

/// The full unrolled computation of one forward pass, time-major.
///
/// `states[0]` is the initial state; `states[t+1]`, `pre_activations[t]`,
/// `output_logits[t]` and `outputs[t]` belong to step `t` (0-based).
#[derive(Debug, Clone)]
pub struct RnnForward {
    pub states: Vec<Array2<f64>>,
    pub pre_activations: Vec<Array2<f64>>,
    pub output_logits: Vec<Array2<f64>>,
    pub outputs: Vec<Array2<f64>>,
}

/// The conventional initial state: 0.5 everywhere (the logistic image of a
/// zero logit — the maximum-entropy resting point). Treated as a constant by
/// BPTT.
pub fn default_initial_state(batch: usize, hidden: usize) -> Array2<f64> {
    Array2::from_elem((batch, hidden), 0.5)
}

/// Targets for a batch of sequences, time-major: `Classes[t]` holds one
/// class index per batch row; `Dense[t]` is a `(batch x output)` matrix.
#[derive(Debug, Clone, Copy)]
pub enum BatchTargets<'a> {
    Classes(&'a [Vec<usize>]),
    Dense(&'a [Array2<f64>]),
}

/// Targets for a single sequence.
#[derive(Debug, Clone, Copy)]
pub enum SeqTargets<'a> {
    Classes(&'a [usize]),
    Dense(&'a [Array1<f64>]),
}

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

fn check_sequence(params: &RnnParams, inputs: &[Array2<f64>], y0: &Array2<f64>) -> Result<usize> {
    params.validate()?;
    let (d, h, _) = params.dims();
    if inputs.is_empty() {
        return Err(Error::Shape {
            op: "rnn_forward",
            msg: "empty input sequence".into(),
        });
    }
    let batch = inputs[0].nrows();
    if y0.dim() != (batch, h) {
        return Err(Error::Shape {
            op: "rnn_forward",
            msg: format!("y0 is {:?}, expected ({batch}, {h})", y0.dim()),
        });
    }
    for (t, x) in inputs.iter().enumerate() {
        if x.dim() != (batch, d) {
            return Err(Error::Shape {
                op: "rnn_forward",
                msg: format!("inputs[{t}] is {:?}, expected ({batch}, {d})", x.dim()),
            });
        }
    }
    Ok(batch)
}

/// Unroll the recurrence over a batch of sequences.
///
/// # Errors
///
/// [`Error::Shape`] for inconsistent dimensions or an empty sequence.
pub fn rnn_forward_batch(
    params: &RnnParams,
    head: RnnHead,
    inputs: &[Array2<f64>],
    y0: &Array2<f64>,
) -> Result<RnnForward> {
    check_sequence(params, inputs, y0)?;
    let steps = inputs.len();
    let mut states = Vec::with_capacity(steps + 1);
    let mut pre_activations = Vec::with_capacity(steps);
    let mut output_logits = Vec::with_capacity(steps);
    let mut outputs = Vec::with_capacity(steps);
    states.push(y0.clone());

    for x in inputs {
        let prev = states.last().expect("states non-empty");
        let z = prev.dot(&params.w_rec.t()) + x.dot(&params.w_in.t()) + &params.b;
        let y = z.mapv(logistic);
        let logits = y.dot(&params.w_out.t()) + &params.b_out;
        let out = match head {
            RnnHead::Softmax => softmax_rows(&logits),
            RnnHead::Logistic => logits.mapv(logistic),
        };
        pre_activations.push(z);
        states.push(y);
        output_logits.push(logits);
        outputs.push(out);
    }
    Ok(RnnForward {
        states,
        pre_activations,
        output_logits,
        outputs,
    })
}

fn row_matrix(v: &Array1<f64>) -> Array2<f64> {
    v.clone().insert_axis(Axis(0))
}

/// Single-sequence forward pass: inputs and initial state as plain vectors.
///
/// # Errors
///
/// [`Error::Shape`] as for [`rnn_forward_batch`].
pub fn rnn_forward(
    params: &RnnParams,
    head: RnnHead,
    inputs: &[Array1<f64>],
    y0: &Array1<f64>,
) -> Result<RnnForward> {
    let batched: Vec<Array2<f64>> = inputs.iter().map(row_matrix).collect();
    rnn_forward_batch(params, head, &batched, &row_matrix(y0))
}

fn check_batch_targets(
    pass: &RnnForward,
    output_dim: usize,
    targets: &BatchTargets<'_>,
) -> Result<()> {
    let steps = pass.outputs.len();
    let batch = pass.outputs[0].nrows();
    match targets {
        BatchTargets::Classes(seq) => {
            if seq.len() != steps {
                return Err(Error::Shape {
                    op: "rnn_objective",
                    msg: format!("{} target steps for {} input steps", seq.len(), steps),
                });
            }
            for step in *seq {
                if step.len() != batch {
                    return Err(Error::Shape {
                        op: "rnn_objective",
                        msg: format!("{} labels for batch of {}", step.len(), batch),
                    });
                }
                for &label in step {
                    if label >= output_dim {
                        return Err(Error::InvalidLabel {
                            label,
                            classes: output_dim,
                        });
                    }
                }
            }
        }
        BatchTargets::Dense(seq) => {
            if seq.len() != steps {
                return Err(Error::Shape {
                    op: "rnn_objective",
                    msg: format!("{} target steps for {} input steps", seq.len(), steps),
                });
            }
            for (t, m) in seq.iter().enumerate() {
                if m.dim() != (batch, output_dim) {
                    return Err(Error::Shape {
                        op: "rnn_objective",
                        msg: format!(
                            "targets[{t}] is {:?}, expected ({batch}, {output_dim})",
                            m.dim()
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Summed-over-time loss `L = sum_t L^t`, each `L^t` the batch-mean
/// cross-entropy of step `t` (nats).
///
/// # Errors
///
/// [`Error::Shape`] / [`Error::InvalidLabel`] for malformed targets.
pub fn rnn_objective(
    params: &RnnParams,
    head: RnnHead,
    pass: &RnnForward,
    targets: &BatchTargets<'_>,
) -> Result<f64> {
    let (_, _, o) = params.dims();
    check_batch_targets(pass, o, targets)?;
    let batch = pass.outputs[0].nrows() as f64;
    let mut total = 0.0;
    for (t, logits) in pass.output_logits.iter().enumerate() {
        match head {
            RnnHead::Softmax => {
                for (i, row) in logits.rows().into_iter().enumerate() {
                    let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
                    let lse = max + row.iter().map(|&z| (z - max).exp()).sum::<f64>().ln();
                    match targets {
                        BatchTargets::Classes(seq) => total += (lse - row[seq[t][i]]) / batch,
                        BatchTargets::Dense(seq) => {
                            total += row
                                .iter()
                                .zip(seq[t].row(i))
                                .map(|(&z, &p)| p * (lse - z))
                                .sum::<f64>()
                                / batch;
                        }
                    }
                }
            }
            RnnHead::Logistic => {
                let BatchTargets::Dense(seq) = targets else {
                    return Err(Error::Shape {
                        op: "rnn_objective",
                        msg: "logistic head needs dense targets in (0,1)".into(),
                    });
                };
                total += logits
                    .iter()
                    .zip(seq[t].iter())
                    .map(|(&z, &tv)| softplus(z) - tv * z)
                    .sum::<f64>()
                    / batch;
            }
        }
    }
    Ok(total)
}

/// `dL^t/dlogits^t` for every step — `(prediction - target) / batch` in both
/// heads.
fn output_deltas(
    pass: &RnnForward,
    targets: &BatchTargets<'_>,
) -> Vec<Array2<f64>> {
    let batch = pass.outputs[0].nrows() as f64;
    pass.outputs
        .iter()
        .enumerate()
        .map(|(t, out)| {
            let mut delta = out.clone();
            match targets {
                BatchTargets::Classes(seq) => {
                    for (i, &label) in seq[t].iter().enumerate() {
                        delta[[i, label]] -= 1.0;
                    }
                }
                BatchTargets::Dense(seq) => delta -= &seq[t],
            }
            delta /= batch;
            delta
        })
        .collect()
}

/// Exact gradients of the summed loss via backpropagation through time,
/// along with the loss value. The initial state is a constant (no gradient
/// flows into it).
///
/// # Errors
///
/// [`Error::Shape`] / [`Error::InvalidLabel`] for malformed inputs.
pub fn bptt_batch(
    params: &RnnParams,
    head: RnnHead,
    inputs: &[Array2<f64>],
    targets: &BatchTargets<'_>,
    y0: &Array2<f64>,
) -> Result<(RnnParams, f64)> {
    let pass = rnn_forward_batch(params, head, inputs, y0)?;
    let loss = rnn_objective(params, head, &pass, targets)?;
    let steps = inputs.len();
    let mut grads = params.zeros_like();
    let deltas = output_deltas(&pass, targets);

    let (batch, h) = (inputs[0].nrows(), params.w_rec.nrows());
    let mut carry: Array2<f64> = Array2::zeros((batch, h));
    for t in (0..steps).rev() {
        let dlogits = &deltas[t];
        grads.w_out += &dlogits.t().dot(&pass.states[t + 1]);
        grads.b_out += &dlogits.sum_axis(Axis(0));

        let mut dz = dlogits.dot(&params.w_out) + &carry;
        dz.zip_mut_with(&pass.pre_activations[t], |d, &z| *d *= logistic_deriv(z));

        grads.b += &dz.sum_axis(Axis(0));
        grads.w_in += &dz.t().dot(&inputs[t]);
        grads.w_rec += &dz.t().dot(&pass.states[t]);
        carry = dz.dot(&params.w_rec);
    }
    Ok((grads, loss))
}

/// Single-sequence BPTT. See [`bptt_batch`].
///
/// # Errors
///
/// [`Error::Shape`] / [`Error::InvalidLabel`] for malformed inputs.
pub fn bptt(
    params: &RnnParams,
    head: RnnHead,
    inputs: &[Array1<f64>],
    targets: &SeqTargets<'_>,
    y0: &Array1<f64>,
) -> Result<(RnnParams, f64)> {
    let batched: Vec<Array2<f64>> = inputs.iter().map(row_matrix).collect();
    match targets {
        SeqTargets::Classes(labels) => {
            let per_step: Vec<Vec<usize>> = labels.iter().map(|&c| vec![c]).collect();
            bptt_batch(
                params,
                head,
                &batched,
                &BatchTargets::Classes(&per_step),
                &row_matrix(y0),
            )
        }
        SeqTargets::Dense(rows) => {
            let per_step: Vec<Array2<f64>> = rows.iter().map(row_matrix).collect();
            bptt_batch(
                params,
                head,
                &batched,
                &BatchTargets::Dense(&per_step),
                &row_matrix(y0),
            )
        }
    }
}

/// How one step-`t` loss term reaches back to the step-`k` state.
///
/// `norm` is the exact `||dL^t/dy^k||_2`; `bound` is the product bound
/// `||dL^t/dy^t||_2 (||W||_F/4)^{t-k}`, whose per-step factor comes from
/// `||diag(g'(z)) W||_2 <= ||W||_F / 4`; `frobenius` is `||W||_F` itself.
/// Indices are 1-based over the unrolled steps, `1 <= k < t <= T`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientChainReport {
    pub t: usize,
    pub k: usize,
    pub norm: f64,
    pub bound: f64,
    pub frobenius: f64,
}

fn seq_to_batch_targets(targets: &SeqTargets<'_>) -> BatchTargetsOwned {
    match targets {
        SeqTargets::Classes(labels) => {
            BatchTargetsOwned::Classes(labels.iter().map(|&c| vec![c]).collect())
        }
        SeqTargets::Dense(rows) => {
            BatchTargetsOwned::Dense(rows.iter().map(row_matrix).collect())
        }
    }
}

enum BatchTargetsOwned {
    Classes(Vec<Vec<usize>>),
    Dense(Vec<Array2<f64>>),
}

impl BatchTargetsOwned {
    fn as_ref(&self) -> BatchTargets<'_> {
        match self {
            Self::Classes(v) => BatchTargets::Classes(v),
            Self::Dense(v) => BatchTargets::Dense(v),
        }
    }
}

/// All chain reports `(t, k)` for fixed `t` and every `k` in `1..t`,
/// computed in one backward walk over a single sequence.
///
/// # Errors
///
/// [`Error::Domain`] for `t` outside `2..=T`; shape errors as in
/// [`rnn_forward`].
pub fn gradient_chain_sweep(
    params: &RnnParams,
    head: RnnHead,
    inputs: &[Array1<f64>],
    targets: &SeqTargets<'_>,
    y0: &Array1<f64>,
    t: usize,
) -> Result<Vec<GradientChainReport>> {
    if t < 2 || t > inputs.len() {
        return Err(Error::Domain {
            op: "gradient_chain_sweep",
            msg: format!("t = {t} outside 2..={}", inputs.len()),
        });
    }
    let batched: Vec<Array2<f64>> = inputs.iter().map(row_matrix).collect();
    let owned = seq_to_batch_targets(targets);
    let pass = rnn_forward_batch(params, head, &batched, &row_matrix(y0))?;
    let (_, _, o) = params.dims();
    check_batch_targets(&pass, o, &owned.as_ref())?;

    let frobenius = params.w_rec.iter().map(|x| x * x).sum::<f64>().sqrt();
    let step_bound = frobenius / 4.0;

    // dL^t/dy^t: the loss-head leading factor (single sequence, so no batch
    // scaling).
    let logits = pass.output_logits[t - 1].row(0);
    let mut dlogits: Array1<f64> = match head {
        RnnHead::Softmax => {
            let max = logits.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
            let mut p = logits.mapv(|z| (z - max).exp());
            p /= p.sum();
            p
        }
        RnnHead::Logistic => logits.mapv(logistic),
    };
    match &owned {
        BatchTargetsOwned::Classes(seq) => dlogits[seq[t - 1][0]] -= 1.0,
        BatchTargetsOwned::Dense(seq) => dlogits -= &seq[t - 1].row(0),
    }
    let mut v: Array1<f64> = dlogits.dot(&params.w_out);
    let leading = v.dot(&v).sqrt();

    let mut reports = Vec::with_capacity(t - 1);
    for k in (1..t).rev() {
        // Multiply by d y^{l} / d y^{l-1} for l = k+1 (walking down).
        let gprime = pass.pre_activations[k].row(0).mapv(logistic_deriv);
        v = (&v * &gprime).dot(&params.w_rec);
        let norm = v.dot(&v).sqrt();
        let bound = leading * step_bound.powi((t - k) as i32);
        reports.push(GradientChainReport {
            t,
            k,
            norm,
            bound,
            frobenius,
        });
    }
    reports.reverse();
    Ok(reports)
}

/// One chain report for a specific `(t, k)` pair, `1 <= k < t <= T`.
///
/// # Errors
///
/// [`Error::Domain`] for out-of-range indices; shape errors as in
/// [`rnn_forward`].
pub fn gradient_chain_norms(
    params: &RnnParams,
    head: RnnHead,
    inputs: &[Array1<f64>],
    targets: &SeqTargets<'_>,
    y0: &Array1<f64>,
    t: usize,
    k: usize,
) -> Result<GradientChainReport> {
    if k == 0 || k >= t {
        return Err(Error::Domain {
            op: "gradient_chain_norms",
            msg: format!("need 1 <= k < t, got k = {k}, t = {t}"),
        });
    }
    let sweep = gradient_chain_sweep(params, head, inputs, targets, y0, t)?;
    Ok(sweep.into_iter().find(|r| r.k == k).expect("k < t covered by sweep"))
}

/// `(||W||_F, h_critic, vanishing)` for a recurrent matrix under the
/// per-input-variance assumption `k_var`:
///
/// * `h_critic = 32 k_var / pi` — the hidden width at which the EP norm law
///   `||W||_F = sqrt(pi h / (2 k_var))` crosses the vanishing threshold;
/// * `vanishing` is true when `||W||_F < 4`, the sufficient condition for
///   long chains to decay (each step factor is then below 1).
///
/// # Errors
///
/// [`Error::Shape`] for a non-square matrix; [`Error::Domain`] for `k_var`
/// outside `(0, 1/4]` (a logistic output's variance cannot exceed 1/4).
pub fn frobenius_criticality(
    w_rec: ndarray::ArrayView2<'_, f64>,
    k_var: f64,
) -> Result<(f64, f64, bool)> {
    if w_rec.nrows() != w_rec.ncols() {
        return Err(Error::Shape {
            op: "frobenius_criticality",
            msg: format!("recurrent matrix is {:?}, must be square", w_rec.dim()),
        });
    }
    if !(k_var > 0.0 && k_var <= 0.25) {
        return Err(Error::Domain {
            op: "frobenius_criticality",
            msg: format!("k_var = {k_var} outside (0, 1/4]"),
        });
    }
    let frobenius = w_rec.iter().map(|x| x * x).sum::<f64>().sqrt();
    let h_critic = 32.0 * k_var / std::f64::consts::PI;
    Ok((frobenius, h_critic, frobenius < 4.0))
}

/// Scale the whole gradient set so its global L2 norm does not exceed
/// `threshold`; a norm already below the threshold is left untouched.
/// Direction is preserved exactly.
///
/// # Panics
///
/// Panics for `threshold <= 0`.
pub fn clip_gradients(mut grads: RnnParams, threshold: f64) -> RnnParams {
    assert!(threshold > 0.0, "clip threshold must be positive");
    let sq: f64 = grads.w_in.iter().map(|x| x * x).sum::<f64>()
        + grads.w_rec.iter().map(|x| x * x).sum::<f64>()
        + grads.w_out.iter().map(|x| x * x).sum::<f64>()
        + grads.b.iter().map(|x| x * x).sum::<f64>()
        + grads.b_out.iter().map(|x| x * x).sum::<f64>();
    let norm = sq.sqrt();
    if norm > threshold {
        let scale = threshold / norm;
        grads.w_in *= scale;
        grads.w_rec *= scale;
        grads.w_out *= scale;
        grads.b *= scale;
        grads.b_out *= scale;
    }
    grads
}
