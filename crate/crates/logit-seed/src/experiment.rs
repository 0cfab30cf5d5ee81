//! Seeded multi-run experiment execution with CSV telemetry.
//!
//! [`run_experiment`] takes one [`ExperimentConfig`], runs a full training
//! (or analysis) pipeline per seed, and writes:
//!
//! * `telemetry_seed<k>.csv` — per-layer activation statistics, gradient
//!   norms and the objective along training;
//! * `summary.csv` — one row per seed with the final objective, training
//!   error, task metric and wall-clock time, plus mean/std footer comments;
//! * `surface.csv` — the entropy-bound grid with stationarity residuals
//!   (analyze task);
//! * `chains.csv` — exact long-range gradient norms against the product
//!   bound, at initialization and after training (copy-memory task).
//!
//! Every output is a pure function of the config (the first line of each
//! CSV carries the config hash); the only nondeterministic value is the
//! wall-clock column, which is always the last column of `summary.csv` and
//! `comparison.csv`.
//!
//! Per-seed RNG streams are split by consumer (initialization uses per-layer
//! streams, shuffling and dropout their own fixed streams), so adding or
//! removing one consumer never perturbs the others.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, Task};
use crate::data::{
    gen_copy_task, gen_xor, load_mnist, memoryless_perplexity, perplexity, CopyTaskData,
    CopyTaskSpec, LabeledBatch,
};
use crate::error::{Error, Result};
use crate::init::{
    init_rnn_ep, initialize, layer_rng, orthogonal_matrix, uniform_matrix, EpBase, InitData,
    InitStrategy, InputStats,
};
use crate::net::{
    backward_from, collect_telemetry, forward, forward_train, LayerParams, NetworkSpec,
    OutputHead, Targets, TelemetryRecord,
};
use crate::neuron::{entropy_output, h_bound, stationarity_residuals, GaussianLogitStats};
use crate::optim::{global_norm, step, OptimState};
use crate::rnn::{
    bptt_batch, default_initial_state, gradient_chain_sweep, rnn_forward_batch, BatchTargets,
    RnnHead, RnnParams, SeqTargets,
};

/// RNG stream for mini-batch shuffling (clear of per-layer init streams).
const STREAM_SHUFFLE: u64 = 1 << 20;
/// RNG stream for dropout masks.
const STREAM_DROPOUT: u64 = 1 << 21;
/// Variance floor when estimating input statistics for EP initialization
/// (constant features, like MNIST border pixels, carry no signal but must
/// not break the projection).
const STATS_FLOOR: f64 = 1e-6;

/// Final numbers of one seed's run.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedOutcome {
    pub seed: u64,
    /// Last training objective (nats).
    pub final_objective: f64,
    /// Classification or symbol error rate on the training data.
    pub final_train_error: f64,
    /// Task metric: held-out error (xor), validation error (mnist),
    /// perplexity (copy-memory), max bound value (analyze).
    pub final_metric: f64,
    /// Seconds spent training this seed; excluded from determinism.
    pub wall_clock_s: f64,
}

/// Everything `run_experiment` produced, aggregated across seeds.
#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub config_hash: String,
    pub task: Task,
    pub strategy: InitStrategy,
    /// What `final_metric` measures for this task.
    pub metric_name: &'static str,
    pub outcomes: Vec<SeedOutcome>,
    pub metric_mean: f64,
    pub metric_std: f64,
}

fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

fn write_csv(path: &Path, config_hash: &str, header: &str, body: &str) -> Result<()> {
    let mut text = String::with_capacity(body.len() + 64);
    let _ = writeln!(text, "# config {config_hash}");
    let _ = writeln!(text, "{header}");
    text.push_str(body);
    fs::write(path, text)?;
    Ok(())
}

fn telemetry_rows(records: &[TelemetryRecord]) -> String {
    let mut body = String::new();
    for rec in records {
        for layer in 0..rec.per_layer_mean.len() {
            let _ = writeln!(
                body,
                "{},{},{},{},{},{}",
                rec.iteration,
                layer + 1,
                rec.per_layer_mean[layer],
                rec.per_layer_std[layer],
                rec.gradient_norms.get(layer).copied().unwrap_or(0.0),
                rec.objective
            );
        }
    }
    body
}

const TELEMETRY_HEADER: &str = "iteration,layer,mean,std,grad_norm,objective";
const SUMMARY_HEADER: &str = "seed,final_objective,final_train_error,final_metric,wall_clock_s";

fn write_summary_csv(dir: &Path, summary: &ExperimentSummary) -> Result<()> {
    let mut body = String::new();
    for o in &summary.outcomes {
        let _ = writeln!(
            body,
            "{},{},{},{},{:.3}",
            o.seed, o.final_objective, o.final_train_error, o.final_metric, o.wall_clock_s
        );
    }
    let _ = writeln!(body, "# metric {}", summary.metric_name);
    let _ = writeln!(body, "# metric_mean {}", summary.metric_mean);
    let _ = writeln!(body, "# metric_std {}", summary.metric_std);
    write_csv(
        &dir.join("summary.csv"),
        &summary.config_hash,
        SUMMARY_HEADER,
        &body,
    )
}

/// Fraction of samples whose argmax prediction misses the label.
///
/// # Errors
///
/// Shape errors from the forward pass.
pub fn classification_error(
    net: &NetworkSpec,
    params: &[LayerParams],
    batch: &LabeledBatch,
) -> Result<f64> {
    let pass = forward(net, params, batch.inputs.view())?;
    let mut wrong = 0usize;
    for (row, &label) in pass.output().rows().into_iter().zip(&batch.labels) {
        let predicted = row
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        if predicted != label {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / batch.len().max(1) as f64)
}

struct FfData {
    train: LabeledBatch,
    eval: Option<LabeledBatch>,
    metric_name: &'static str,
}

fn feedforward_data(config: &ExperimentConfig) -> Result<FfData> {
    match config.task {
        Task::Xor => {
            let train = gen_xor(config.samples, config.data_seed)?;
            let eval = if config.eval_samples >= 4 {
                let n = config.eval_samples - config.eval_samples % 4;
                Some(gen_xor(n, config.data_seed + 1)?)
            } else {
                None
            };
            Ok(FfData {
                train,
                eval,
                metric_name: "test_error",
            })
        }
        Task::MnistShallow | Task::MnistDeep => {
            let dir = config.data_dir.as_ref().ok_or_else(|| {
                Error::Config("MNIST tasks need data_dir pointing at the IDX files".into())
            })?;
            let splits = load_mnist(dir)?;
            let train = if config.samples > 0 && config.samples < splits.train.len() {
                let rows: Vec<usize> = (0..config.samples).collect();
                splits.train.select(&rows)
            } else {
                splits.train
            };
            Ok(FfData {
                train,
                eval: Some(splits.validation),
                metric_name: "validation_error",
            })
        }
        _ => Err(Error::Config(format!(
            "task {} is not a feedforward task",
            config.task
        ))),
    }
}

/// Calibration batch for LSUV: a prefix of the training inputs.
fn calibration_rows(train: &LabeledBatch) -> Array2<f64> {
    let n = train.len().min(256);
    train.inputs.slice(ndarray::s![..n, ..]).to_owned()
}

struct FfRun {
    params: Vec<LayerParams>,
    telemetry: Vec<TelemetryRecord>,
    final_objective: f64,
}

fn train_feedforward(
    config: &ExperimentConfig,
    net: &NetworkSpec,
    train: &LabeledBatch,
    seed: u64,
) -> Result<FfRun> {
    let calibration = calibration_rows(train);
    let stats = InputStats::from_batch_with_floor(train.inputs.view(), STATS_FLOOR)?;
    let init_data = InitData {
        calibration: Some(calibration.view()),
        input_stats: Some(&stats),
    };
    let mut params = initialize(&config.strategy, net, seed, &init_data)?;

    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(seed);
    shuffle_rng.set_stream(STREAM_SHUFFLE);
    let mut dropout_rng = ChaCha8Rng::seed_from_u64(seed);
    dropout_rng.set_stream(STREAM_DROPOUT);

    let n = train.len();
    let batch_size = config.batch_size.min(n);
    let mut order: Vec<usize> = (0..n).collect();
    let mut pos = n; // force an initial shuffle
    let mut opt_state = OptimState::new();
    let mut telemetry = Vec::new();
    let mut final_objective = f64::NAN;

    for iter in 0..config.iterations {
        if pos + batch_size > n {
            order.shuffle(&mut shuffle_rng);
            pos = 0;
        }
        let batch = train.select(&order[pos..pos + batch_size]);
        pos += batch_size;

        let dropout = config.dropout_p.map(|p| (p, &mut dropout_rng));
        let pass = forward_train(net, &params, batch.inputs.view(), dropout)?;
        let (grads, objective) =
            backward_from(net, &params, &pass, &Targets::Classes(&batch.labels))?;
        if !objective.is_finite() {
            return Err(Error::NonFiniteLoss { iteration: iter });
        }
        if iter % config.telemetry_every == 0 || iter + 1 == config.iterations {
            telemetry.push(collect_telemetry(&pass, &grads, iter, objective));
        }
        step(&mut opt_state, &mut params, &grads, &config.optimizer)?;
        final_objective = objective;
    }
    Ok(FfRun {
        params,
        telemetry,
        final_objective,
    })
}

fn feedforward_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    let data = feedforward_data(config)?;
    let mut widths = Vec::with_capacity(config.hidden.len() + 2);
    widths.push(data.train.features());
    widths.extend_from_slice(&config.hidden);
    widths.push(data.train.classes);
    let net = NetworkSpec::new(widths, OutputHead::SoftmaxCrossEntropy)?;

    let hash = config.config_hash();
    let mut outcomes = Vec::with_capacity(config.seeds.len());
    for &seed in &config.seeds {
        let started = Instant::now();
        let run = train_feedforward(config, &net, &data.train, seed)?;
        let train_error = classification_error(&net, &run.params, &data.train)?;
        let metric = match &data.eval {
            Some(eval) => classification_error(&net, &run.params, eval)?,
            None => train_error,
        };
        let wall_clock_s = started.elapsed().as_secs_f64();
        write_csv(
            &config.output_dir.join(format!("telemetry_seed{seed}.csv")),
            &hash,
            TELEMETRY_HEADER,
            &telemetry_rows(&run.telemetry),
        )?;
        outcomes.push(SeedOutcome {
            seed,
            final_objective: run.final_objective,
            final_train_error: train_error,
            final_metric: metric,
            wall_clock_s,
        });
    }
    let metrics: Vec<f64> = outcomes.iter().map(|o| o.final_metric).collect();
    let (metric_mean, metric_std) = mean_and_sample_std(&metrics);
    Ok(ExperimentSummary {
        config_hash: hash,
        task: config.task,
        strategy: config.strategy,
        metric_name: data.metric_name,
        outcomes,
        metric_mean,
        metric_std,
    })
}

/// Initialize a recurrent cell per strategy. The non-EP baselines apply
/// their feedforward rule to each of the three matrices (with the recurrent
/// matrix square-orthogonal under `ortho`); biases start at zero.
///
/// # Errors
///
/// [`Error::Config`] for LSUV (undefined on the recurrence); EP errors pass
/// through.
pub fn rnn_initialize(
    strategy: &InitStrategy,
    input_dim: usize,
    hidden: usize,
    output_dim: usize,
    seed: u64,
    input_stats: &InputStats,
) -> Result<RnnParams> {
    let uniform_cell = |half_widths: [f64; 3]| -> RnnParams {
        let mut params = RnnParams::zeros(input_dim, hidden, output_dim);
        let mut rng = layer_rng(seed, 0);
        params.w_in = uniform_matrix(hidden, input_dim, half_widths[0], &mut rng);
        let mut rng = layer_rng(seed, 1);
        params.w_rec = uniform_matrix(hidden, hidden, half_widths[1], &mut rng);
        let mut rng = layer_rng(seed, 2);
        params.w_out = uniform_matrix(output_dim, hidden, half_widths[2], &mut rng);
        params
    };
    match strategy {
        InitStrategy::Lecun => {
            let w = |fan_in: usize| 1.0 / (fan_in as f64).sqrt();
            Ok(uniform_cell([w(input_dim), w(hidden), w(hidden)]))
        }
        InitStrategy::Glorot => {
            let w = |fan_in: usize, fan_out: usize| (6.0 / (fan_in + fan_out) as f64).sqrt();
            Ok(uniform_cell([
                w(input_dim, hidden),
                w(hidden, hidden),
                w(hidden, output_dim),
            ]))
        }
        InitStrategy::Ortho => {
            let mut params = RnnParams::zeros(input_dim, hidden, output_dim);
            let mut rng = layer_rng(seed, 0);
            params.w_in = orthogonal_matrix(hidden, input_dim, &mut rng);
            let mut rng = layer_rng(seed, 1);
            params.w_rec = orthogonal_matrix(hidden, hidden, &mut rng);
            let mut rng = layer_rng(seed, 2);
            params.w_out = orthogonal_matrix(output_dim, hidden, &mut rng);
            Ok(params)
        }
        InitStrategy::Lsuv { .. } => Err(Error::Config(
            "lsuv calibrates layer-by-layer on a feedforward batch and is not \
             defined for the recurrent task"
                .into(),
        )),
        InitStrategy::RandomEp => init_rnn_ep(
            input_dim,
            hidden,
            output_dim,
            seed,
            EpBase::Random,
            input_stats,
        ),
        InitStrategy::OrthoEp => init_rnn_ep(
            input_dim,
            hidden,
            output_dim,
            seed,
            EpBase::Ortho,
            input_stats,
        ),
    }
}

/// Per-feature statistics of a time-major one-hot (or dense) sequence
/// batch, flattened over time and samples.
fn sequence_input_stats(inputs: &[Array2<f64>]) -> Result<InputStats> {
    let features = inputs[0].ncols();
    let mut count = 0.0;
    let mut mean = vec![0.0; features];
    for x in inputs {
        for row in x.rows() {
            for (m, &v) in mean.iter_mut().zip(row) {
                *m += v;
            }
        }
        count += x.nrows() as f64;
    }
    for m in &mut mean {
        *m /= count;
    }
    let mut var = vec![0.0; features];
    for x in inputs {
        for row in x.rows() {
            for ((v, &m), &val) in var.iter_mut().zip(&mean).zip(row) {
                *v += (val - m) * (val - m);
            }
        }
    }
    for v in &mut var {
        *v = (*v / count).max(STATS_FLOOR);
    }
    InputStats::new(mean, var)
}

fn select_steps(steps: &[Array2<f64>], idx: &[usize]) -> Vec<Array2<f64>> {
    steps.iter().map(|m| m.select(Axis(0), idx)).collect()
}

fn select_labels(labels: &[Vec<usize>], idx: &[usize]) -> Vec<Vec<usize>> {
    labels
        .iter()
        .map(|step| idx.iter().map(|&i| step[i]).collect())
        .collect()
}

/// Symbol error rate of argmax predictions over all positions.
fn symbol_error(outputs: &[Array2<f64>], labels: &[Vec<usize>]) -> f64 {
    let mut wrong = 0usize;
    let mut total = 0usize;
    for (p, step_labels) in outputs.iter().zip(labels) {
        for (row, &label) in p.rows().into_iter().zip(step_labels) {
            let predicted = row
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap_or(0);
            if predicted != label {
                wrong += 1;
            }
            total += 1;
        }
    }
    wrong as f64 / total.max(1) as f64
}

fn rnn_telemetry(
    iteration: usize,
    states: &[Array2<f64>],
    grad_norm: f64,
    objective: f64,
) -> TelemetryRecord {
    let mut sum = 0.0;
    let mut count = 0.0;
    for s in &states[1..] {
        sum += s.sum();
        count += s.len() as f64;
    }
    let mean = sum / count;
    let mut var = 0.0;
    for s in &states[1..] {
        var += s.iter().map(|&y| (y - mean) * (y - mean)).sum::<f64>();
    }
    TelemetryRecord {
        iteration,
        per_layer_mean: vec![mean],
        per_layer_std: vec![(var / count).sqrt()],
        gradient_norms: vec![grad_norm],
        objective,
    }
}

struct CopyRun {
    params: RnnParams,
    init_params: RnnParams,
    telemetry: Vec<TelemetryRecord>,
    final_objective: f64,
}

fn train_copy(
    config: &ExperimentConfig,
    train: &CopyTaskData,
    seed: u64,
) -> Result<CopyRun> {
    let hidden = config.hidden[0];
    let alphabet = CopyTaskSpec::ALPHABET;
    let stats = sequence_input_stats(&train.inputs)?;
    let init_params = rnn_initialize(&config.strategy, alphabet, hidden, alphabet, seed, &stats)?;
    let mut params = init_params.clone();

    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(seed);
    shuffle_rng.set_stream(STREAM_SHUFFLE);
    let n = train.inputs[0].nrows();
    let batch_size = config.batch_size.min(n);
    let mut order: Vec<usize> = (0..n).collect();
    let mut pos = n;
    let mut opt_state = OptimState::new();
    let mut telemetry = Vec::new();
    let mut final_objective = f64::NAN;
    let y0 = default_initial_state(batch_size, hidden);

    for iter in 0..config.iterations {
        if pos + batch_size > n {
            order.shuffle(&mut shuffle_rng);
            pos = 0;
        }
        let idx = &order[pos..pos + batch_size];
        pos += batch_size;
        let inputs = select_steps(&train.inputs, idx);
        let labels = select_labels(&train.target_labels, idx);
        let targets = BatchTargets::Classes(&labels);

        let (grads, objective) = bptt_batch(&params, RnnHead::Softmax, &inputs, &targets, &y0)?;
        if !objective.is_finite() {
            return Err(Error::NonFiniteLoss { iteration: iter });
        }
        if iter % config.telemetry_every == 0 || iter + 1 == config.iterations {
            // One clean forward on the same mini-batch for state statistics.
            let pass = rnn_forward_batch(&params, RnnHead::Softmax, &inputs, &y0)?;
            telemetry.push(rnn_telemetry(
                iter,
                &pass.states,
                global_norm(&grads),
                objective,
            ));
        }
        step(&mut opt_state, &mut params, &grads, &config.optimizer)?;
        final_objective = objective;
    }
    Ok(CopyRun {
        params,
        init_params,
        telemetry,
        final_objective,
    })
}

/// Perplexity and symbol error of a parameter set on a generated
/// copy-memory set.
fn evaluate_copy(params: &RnnParams, data: &CopyTaskData, hidden: usize) -> Result<(f64, f64)> {
    let n = data.inputs[0].nrows();
    let y0 = default_initial_state(n, hidden);
    let pass = rnn_forward_batch(params, RnnHead::Softmax, &data.inputs, &y0)?;
    let ppl = perplexity(&pass.outputs, &data.target_labels)?;
    let err = symbol_error(&pass.outputs, &data.target_labels);
    Ok((ppl, err))
}

const CHAINS_HEADER: &str = "phase,t,k,exact_norm,bound,frobenius";

fn chains_rows(
    phase: &str,
    params: &RnnParams,
    data: &CopyTaskData,
    hidden: usize,
) -> Result<String> {
    // One representative sequence (sample 0), chains from the final step.
    let inputs: Vec<ndarray::Array1<f64>> =
        data.inputs.iter().map(|m| m.row(0).to_owned()).collect();
    let labels: Vec<usize> = data.target_labels.iter().map(|step| step[0]).collect();
    let y0 = ndarray::Array1::from_elem(hidden, 0.5);
    let t = inputs.len();
    let sweep = gradient_chain_sweep(
        params,
        RnnHead::Softmax,
        &inputs,
        &SeqTargets::Classes(&labels),
        &y0,
        t,
    )?;
    let mut body = String::new();
    for r in sweep {
        let _ = writeln!(
            body,
            "{phase},{},{},{},{},{}",
            r.t, r.k, r.norm, r.bound, r.frobenius
        );
    }
    Ok(body)
}

fn copy_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    let spec = CopyTaskSpec::new(config.t_delay)?;
    let train = gen_copy_task(spec, config.samples, config.data_seed)?;
    let eval = gen_copy_task(spec, config.eval_samples, config.data_seed + 1)?;
    let hidden = config.hidden[0];
    let hash = config.config_hash();

    let mut outcomes = Vec::with_capacity(config.seeds.len());
    let mut chains = String::new();
    for (run_index, &seed) in config.seeds.iter().enumerate() {
        let started = Instant::now();
        let run = train_copy(config, &train, seed)?;
        let (ppl, _) = evaluate_copy(&run.params, &eval, hidden)?;
        let (_, train_err) = evaluate_copy(&run.params, &train, hidden)?;
        let wall_clock_s = started.elapsed().as_secs_f64();
        write_csv(
            &config.output_dir.join(format!("telemetry_seed{seed}.csv")),
            &hash,
            TELEMETRY_HEADER,
            &telemetry_rows(&run.telemetry),
        )?;
        if run_index == 0 {
            chains.push_str(&chains_rows("init", &run.init_params, &eval, hidden)?);
            chains.push_str(&chains_rows("trained", &run.params, &eval, hidden)?);
        }
        outcomes.push(SeedOutcome {
            seed,
            final_objective: run.final_objective,
            final_train_error: train_err,
            final_metric: ppl,
            wall_clock_s,
        });
    }
    write_csv(&config.output_dir.join("chains.csv"), &hash, CHAINS_HEADER, &chains)?;

    let metrics: Vec<f64> = outcomes.iter().map(|o| o.final_metric).collect();
    let (metric_mean, metric_std) = mean_and_sample_std(&metrics);
    Ok(ExperimentSummary {
        config_hash: hash,
        task: config.task,
        strategy: config.strategy,
        metric_name: "perplexity",
        outcomes,
        metric_mean,
        metric_std,
    })
}

const SURFACE_HEADER: &str = "mu,sigma,h_b,entropy_output,residual_mu,residual_sigma";

fn analyze_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    let hash = config.config_hash();
    let started = Instant::now();
    let mut body = String::new();
    let mut best = f64::NEG_INFINITY;
    // mu in [-4, 4], sigma in [0.1, 4], both at step 0.05.
    for i in 0..=160 {
        let mu = -4.0 + 0.05 * i as f64;
        for j in 0..79 {
            let sigma = 0.1 + 0.05 * j as f64;
            let stats = GaussianLogitStats::new(mu, sigma)?;
            let bound = h_bound(stats);
            let entropy = entropy_output(stats);
            let (r_mu, r_sigma) = stationarity_residuals(stats);
            best = best.max(bound.h_b);
            let _ = writeln!(
                body,
                "{mu},{sigma},{},{entropy},{r_mu},{r_sigma}",
                bound.h_b
            );
        }
    }
    write_csv(&config.output_dir.join("surface.csv"), &hash, SURFACE_HEADER, &body)?;

    let outcome = SeedOutcome {
        seed: config.seeds.first().copied().unwrap_or(0),
        final_objective: 0.0,
        final_train_error: 0.0,
        final_metric: best,
        wall_clock_s: started.elapsed().as_secs_f64(),
    };
    Ok(ExperimentSummary {
        config_hash: hash,
        task: config.task,
        strategy: config.strategy,
        metric_name: "max_h_bound",
        outcomes: vec![outcome],
        metric_mean: best,
        metric_std: 0.0,
    })
}

/// Run every seed of one experiment and write its CSV outputs.
///
/// # Errors
///
/// Config validation errors, missing datasets, [`Error::NonFiniteLoss`]
/// with the iteration index when training diverges, and I/O errors.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    config.validate()?;
    fs::create_dir_all(&config.output_dir)?;
    let summary = match config.task {
        Task::Xor | Task::MnistShallow | Task::MnistDeep => feedforward_experiment(config)?,
        Task::CopyMemory => copy_experiment(config)?,
        Task::Analyze => analyze_experiment(config)?,
    };
    write_summary_csv(&config.output_dir, &summary)?;
    Ok(summary)
}

/// One line of a strategy comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyRow {
    pub strategy: String,
    pub seeds: usize,
    pub metric_mean: f64,
    pub metric_std: f64,
    /// Mean wall-clock seconds per seed; excluded from determinism.
    pub wall_clock_mean_s: f64,
}

/// A rendered strategy comparison (the desk-scale analogue of a results
/// table).
#[derive(Debug, Clone)]
pub struct Comparison {
    pub metric_name: &'static str,
    pub rows: Vec<StrategyRow>,
}

impl Comparison {
    /// Plain-text rendering with aligned columns.
    pub fn to_text(&self) -> String {
        let mut text = String::new();
        let _ = writeln!(
            text,
            "{:<12} {:>6} {:>16} {:>16} {:>12}",
            "strategy",
            "seeds",
            format!("{}_mean", self.metric_name),
            format!("{}_std", self.metric_name),
            "seconds"
        );
        for row in &self.rows {
            let _ = writeln!(
                text,
                "{:<12} {:>6} {:>16.6} {:>16.6} {:>12.2}",
                row.strategy, row.seeds, row.metric_mean, row.metric_std, row.wall_clock_mean_s
            );
        }
        text
    }
}

const COMPARISON_HEADER: &str = "strategy,seeds,metric_mean,metric_std,wall_clock_mean_s";

/// Run the same experiment once per strategy and produce an aligned table.
///
/// All configs must be identical except for `strategy` (and may differ in
/// `output_dir`, which is ignored: each run lands in a per-strategy
/// subdirectory of the first config's output directory). For copy-memory
/// the table gains a `memoryless` baseline row computed analytically.
///
/// # Errors
///
/// [`Error::Config`] for an empty or heterogeneous config list; everything
/// [`run_experiment`] can raise.
pub fn compare_strategies(configs: &[ExperimentConfig]) -> Result<Comparison> {
    let Some(first) = configs.first() else {
        return Err(Error::Config("compare needs at least one config".into()));
    };
    let reference: Vec<String> = strip_strategy_lines(first);
    for c in &configs[1..] {
        if strip_strategy_lines(c) != reference {
            return Err(Error::Config(
                "compare requires configs identical except for strategy".into(),
            ));
        }
    }

    let base_dir = first.output_dir.clone();
    let mut rows = Vec::with_capacity(configs.len() + 1);
    let mut metric_name = "metric";
    for config in configs {
        let mut run_config = config.clone();
        run_config.output_dir = base_dir.join(config.strategy.name());
        let summary = run_experiment(&run_config)?;
        metric_name = summary.metric_name;
        let walls: Vec<f64> = summary.outcomes.iter().map(|o| o.wall_clock_s).collect();
        let (wall_mean, _) = mean_and_sample_std(&walls);
        rows.push(StrategyRow {
            strategy: config.strategy.name().to_string(),
            seeds: summary.outcomes.len(),
            metric_mean: summary.metric_mean,
            metric_std: summary.metric_std,
            wall_clock_mean_s: wall_mean,
        });
    }
    if first.task == Task::CopyMemory {
        let spec = CopyTaskSpec::new(first.t_delay)?;
        rows.push(StrategyRow {
            strategy: "memoryless".into(),
            seeds: 0,
            metric_mean: memoryless_perplexity(spec),
            metric_std: 0.0,
            wall_clock_mean_s: 0.0,
        });
    }

    let comparison = Comparison {
        metric_name,
        rows,
    };
    fs::create_dir_all(&base_dir)?;
    let mut body = String::new();
    for row in &comparison.rows {
        let _ = writeln!(
            body,
            "{},{},{},{},{:.3}",
            row.strategy, row.seeds, row.metric_mean, row.metric_std, row.wall_clock_mean_s
        );
    }
    write_csv(
        &base_dir.join("comparison.csv"),
        &first.config_hash(),
        COMPARISON_HEADER,
        &body,
    )?;
    fs::write(base_dir.join("comparison.txt"), comparison.to_text())?;
    Ok(comparison)
}

fn strip_strategy_lines(config: &ExperimentConfig) -> Vec<String> {
    config
        .canonical_lines()
        .into_iter()
        .filter(|line| !line.starts_with("strategy="))
        .collect()
}
