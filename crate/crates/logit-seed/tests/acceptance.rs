//! Acceptance gate for the crate: twelve numbered criteria covering the
//! analytic optimum, the entropy sandwich, kernel accuracy, gradient
//! exactness, the norm law, chain-norm bounds, the projection, and the
//! desk-scale experiment behaviours.
//!
//! Each test prints one `criterion NN [PASS|FAIL] name: detail` line
//! (visible with `cargo test --test acceptance -- --nocapture`) and fails
//! the build when its criterion is violated.

mod common;

use std::time::{Duration, Instant};

use common::{adaptive_simpson, ellipse_sweep_2d, fd_gradient, flatten_tensors, grad_entries_agree, mean_std};
use logit_seed::config::Task;
use logit_seed::data::{memoryless_perplexity, CopyTaskSpec};
use logit_seed::init::{init_ep_recurrent, init_glorot, init_lecun, initialize, EpBase, InitData};
use logit_seed::net::{backward, forward, objective, LayerParams, NetworkSpec, OutputHead, Targets};
use logit_seed::neuron::{entropy_output, h_bound, optimal_sigma, optimal_output_stats};
use logit_seed::rnn::{
    bptt_batch, default_initial_state, frobenius_criticality, gradient_chain_sweep, rnn_forward_batch,
    rnn_objective, BatchTargets, RnnHead, RnnParams, SeqTargets,
};
use logit_seed::special::{erf, lambert_w0};
use logit_seed::{
    elliptical_project, run_experiment, ExperimentConfig, GaussianLogitStats, InitStrategy,
    InputStats, ProjectionProblem,
};
use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn stats(mu: f64, sigma: f64) -> GaussianLogitStats {
    GaussianLogitStats::new(mu, sigma).expect("valid stats")
}

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    println!("criterion {n:02} [{status}] {name}: {detail}");
    assert!(pass, "criterion {n:02} ({name}) failed: {detail}");
}

fn within(elapsed: Duration, budget_s: u64) -> bool {
    elapsed <= Duration::from_secs(budget_s)
}

#[test]
fn criterion_01_bound_peak_and_optimal_sigma() {
    let t0 = Instant::now();
    let mut best = (f64::NEG_INFINITY, 0.0_f64, 0.0_f64);
    for i in 0..=160 {
        let mu = -4.0 + 0.05 * f64::from(i);
        for j in 0..=78 {
            let sigma = 0.1 + 0.05 * f64::from(j);
            let hb = h_bound(stats(mu, sigma)).h_b;
            if hb > best.0 {
                best = (hb, mu, sigma);
            }
        }
    }
    let sigma_err = (optimal_sigma(0.0) - 1.253314).abs();
    let elapsed = t0.elapsed();
    // The grid point nearest (0, 1.2533) is (0, 1.25): half a step away.
    let peak_ok = best.1.abs() <= 0.025 && (best.2 - 1.25).abs() <= 0.025;
    let pass = peak_ok && sigma_err <= 1e-6 && within(elapsed, 1);
    report(
        1,
        "bound peak and optimal sigma",
        pass,
        &format!(
            "grid argmax at (mu, sigma) = ({:.2}, {:.2}), |optimal_sigma(0) - 1.253314| = {:.2e}, {:.3} s",
            best.1, best.2, sigma_err, elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_entropy_sandwich_on_grid() {
    let t0 = Instant::now();
    let mut worst_low = f64::INFINITY; // H - lower, must stay >= -1e-4
    let mut worst_high = f64::NEG_INFINITY; // H - upper, must stay <= 1e-4
    for i in 0..40 {
        let mu = -4.0 + 8.0 * f64::from(i) / 39.0;
        for j in 0..40 {
            let sigma = 0.1 + 3.9 * f64::from(j) / 39.0;
            let st = stats(mu, sigma);
            let h = entropy_output(st);
            let bound = h_bound(st);
            worst_low = worst_low.min(h - bound.lower);
            worst_high = worst_high.max(h - bound.upper);
        }
    }
    let elapsed = t0.elapsed();
    let pass = worst_low >= -1e-4 && worst_high <= 1e-4 && within(elapsed, 10);
    report(
        2,
        "entropy sandwich on 1600 grid points",
        pass,
        &format!(
            "min(H - lower) = {worst_low:.3e}, max(H - upper) = {worst_high:.3e}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_03_output_moment_constants() {
    let (mean, var) = optimal_output_stats();
    let pass = (var - 0.0589).abs() <= 5e-4 && (mean - 0.5).abs() <= 1e-8;
    report(
        3,
        "output moments at the optimum",
        pass,
        &format!("mean = {mean:.10}, variance = {var:.6}"),
    );
}

#[test]
fn criterion_04_lambert_and_erf_kernels() {
    // 1000 arguments spanning the branch point to 1e9.
    let mut worst = 0.0_f64;
    let mut checked = 0_u32;
    for i in 0..500 {
        // Dense near the branch point: x in (-1/e, 0).
        let x = -0.367879 * (1.0 - f64::from(i) / 500.0).powi(2);
        let w = lambert_w0(x).unwrap();
        let residual = (w * w.exp() - x).abs();
        worst = worst.max(residual / x.abs().max(1.0));
        checked += 1;
    }
    for i in 0..500 {
        // Log-spaced positive arguments 1e-9 .. 1e9.
        let x = 10f64.powf(-9.0 + 18.0 * f64::from(i) / 499.0);
        let w = lambert_w0(x).unwrap();
        let residual = (w * w.exp() - x).abs();
        worst = worst.max(residual / x.abs().max(1.0));
        checked += 1;
    }
    let lambert_ok = worst < 1e-13;

    let erf_oracle = adaptive_simpson(
        &|t: f64| std::f64::consts::FRAC_2_SQRT_PI * (-t * t).exp(),
        0.0,
        1.0,
        1e-14,
    );
    let erf_ref_err = (erf(1.0) - 0.842700792949715).abs();
    let erf_oracle_err = (erf(1.0) - erf_oracle).abs();
    let erf_ok = erf_ref_err <= 1e-12 && erf_oracle_err <= 1e-12;

    report(
        4,
        "Lambert W and erf kernels",
        lambert_ok && erf_ok,
        &format!(
            "max scaled Lambert residual {worst:.2e} over {checked} points, |erf(1) - ref| = {erf_ref_err:.2e}, |erf(1) - oracle| = {erf_oracle_err:.2e}"
        ),
    );
}

#[test]
fn criterion_05_gradients_match_finite_differences() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_rel = 0.0_f64;
    let mut configs = 0;

    // 15 feedforward configurations, widths <= 8.
    for _ in 0..15 {
        let depth = rng.gen_range(1..=3);
        let mut widths = vec![rng.gen_range(1..=8usize)];
        for _ in 0..depth {
            widths.push(rng.gen_range(1..=8));
        }
        let head = if rng.gen_bool(0.5) {
            OutputHead::SoftmaxCrossEntropy
        } else {
            OutputHead::LogisticPerUnit
        };
        let net = NetworkSpec::new(widths.clone(), head).unwrap();
        let params: Vec<LayerParams> = (0..net.layer_count())
            .map(|l| {
                let (inp, out) = (widths[l], widths[l + 1]);
                LayerParams::new(
                    Array2::from_shape_fn((out, inp), |_| rng.gen_range(-0.8..0.8)),
                    Array1::from_shape_fn(out, |_| rng.gen_range(-0.3..0.3)),
                )
                .unwrap()
            })
            .collect();
        let batch_n = rng.gen_range(1..=4);
        let batch = Array2::from_shape_fn((batch_n, widths[0]), |_| rng.gen_range(-1.5..1.5));
        let labels: Vec<usize> = (0..batch_n)
            .map(|_| rng.gen_range(0..*widths.last().unwrap()))
            .collect();
        let dense = Array2::from_shape_fn((batch_n, *widths.last().unwrap()), |_| {
            rng.gen_range(0.05..0.95)
        });
        let targets = match head {
            OutputHead::SoftmaxCrossEntropy => Targets::Classes(&labels),
            OutputHead::LogisticPerUnit => Targets::Dense(dense.view()),
        };

        let analytic = backward(&net, &params, batch.view(), &targets).unwrap();
        let loss = |p: &Vec<LayerParams>| {
            let pass = forward(&net, p, batch.view()).unwrap();
            objective(&net, &pass, &targets).unwrap()
        };
        let fd = fd_gradient(&loss, &params.clone(), 1e-5);
        for (a_t, f_t) in flatten_tensors(&analytic).iter().zip(&fd) {
            for (&a, &f) in a_t.iter().zip(f_t) {
                assert!(
                    grad_entries_agree(a, f, 1e-4, 1e-6),
                    "feedforward gradient mismatch: analytic {a}, fd {f}"
                );
                let scale = a.abs().max(f.abs());
                if scale > 1e-6 {
                    worst_rel = worst_rel.max((a - f).abs() / scale);
                }
            }
        }
        configs += 1;
    }

    // 15 recurrent configurations, T <= 12.
    for _ in 0..15 {
        let (d, h, o) = (
            rng.gen_range(1..=6usize),
            rng.gen_range(1..=6usize),
            rng.gen_range(2..=6usize),
        );
        let steps = rng.gen_range(2..=12usize);
        let batch_n = rng.gen_range(1..=3usize);
        let head = if rng.gen_bool(0.5) {
            RnnHead::Softmax
        } else {
            RnnHead::Logistic
        };
        let mut params = RnnParams::zeros(d, h, o);
        for t in [&mut params.w_in, &mut params.w_rec, &mut params.w_out] {
            t.mapv_inplace(|_| rng.gen_range(-0.8..0.8));
        }
        for t in [&mut params.b, &mut params.b_out] {
            t.mapv_inplace(|_| rng.gen_range(-0.3..0.3));
        }
        let inputs: Vec<Array2<f64>> = (0..steps)
            .map(|_| Array2::from_shape_fn((batch_n, d), |_| rng.gen_range(-1.5..1.5)))
            .collect();
        let labels: Vec<Vec<usize>> = (0..steps)
            .map(|_| (0..batch_n).map(|_| rng.gen_range(0..o)).collect())
            .collect();
        let dense: Vec<Array2<f64>> = (0..steps)
            .map(|_| Array2::from_shape_fn((batch_n, o), |_| rng.gen_range(0.05..0.95)))
            .collect();
        let targets = match head {
            RnnHead::Softmax => BatchTargets::Classes(&labels),
            RnnHead::Logistic => BatchTargets::Dense(&dense),
        };
        let y0 = default_initial_state(batch_n, h);

        let (analytic, _) = bptt_batch(&params, head, &inputs, &targets, &y0).unwrap();
        let loss = |p: &RnnParams| {
            let pass = rnn_forward_batch(p, head, &inputs, &y0).unwrap();
            rnn_objective(p, head, &pass, &targets).unwrap()
        };
        let fd = fd_gradient(&loss, &params, 1e-5);
        for (a_t, f_t) in flatten_tensors(&analytic).iter().zip(&fd) {
            for (&a, &f) in a_t.iter().zip(f_t) {
                assert!(
                    grad_entries_agree(a, f, 1e-4, 1e-6),
                    "BPTT gradient mismatch: analytic {a}, fd {f}"
                );
                let scale = a.abs().max(f.abs());
                if scale > 1e-6 {
                    worst_rel = worst_rel.max((a - f).abs() / scale);
                }
            }
        }
        configs += 1;
    }

    let elapsed = t0.elapsed();
    let pass = configs == 30 && within(elapsed, 30);
    report(
        5,
        "gradients vs central differences",
        pass,
        &format!(
            "{configs} configurations, worst relative deviation {worst_rel:.2e}, {:.3} s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_06_recurrent_norm_law() {
    let w = init_ep_recurrent(100, 0.0589, 7, EpBase::Random).unwrap();
    let frobenius = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm_ok = (frobenius - 51.64).abs() <= 0.01;

    let (_, h_critic, _) = frobenius_criticality(w.view(), 0.25).unwrap();
    let critic_ok = (h_critic - 8.0 / std::f64::consts::PI).abs() <= 1e-10;

    report(
        6,
        "recurrent norm law",
        norm_ok && critic_ok,
        &format!(
            "||W||_F = {frobenius:.4} (want 51.64 +/- 0.01), h_critic = {h_critic:.12} (want 8/pi)"
        ),
    );
}

#[test]
fn criterion_07_chain_norm_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut violations = 0_u32;
    let mut reports = 0_u32;
    for cfg in 0..50 {
        let (d, h, o) = (
            rng.gen_range(1..=5usize),
            rng.gen_range(2..=8usize),
            rng.gen_range(2..=5usize),
        );
        let steps = rng.gen_range(3..=9usize);
        // Mix contracting and expanding recurrent scales.
        let scale = [0.2, 0.8, 1.6][cfg % 3];
        let mut params = RnnParams::zeros(d, h, o);
        params.w_in.mapv_inplace(|_| rng.gen_range(-0.8..0.8));
        params.w_rec.mapv_inplace(|_| scale * rng.gen_range(-1.0..1.0));
        params.w_out.mapv_inplace(|_| rng.gen_range(-0.8..0.8));
        params.b.mapv_inplace(|_| rng.gen_range(-0.3..0.3));
        params.b_out.mapv_inplace(|_| rng.gen_range(-0.3..0.3));
        let inputs: Vec<Array1<f64>> = (0..steps)
            .map(|_| Array1::from_shape_fn(d, |_| rng.gen_range(-1.5..1.5)))
            .collect();
        let labels: Vec<usize> = (0..steps).map(|_| rng.gen_range(0..o)).collect();
        let y0 = Array1::from_elem(h, 0.5);
        let sweep = gradient_chain_sweep(
            &params,
            RnnHead::Softmax,
            &inputs,
            &SeqTargets::Classes(&labels),
            &y0,
            steps,
        )
        .unwrap();
        for r in &sweep {
            reports += 1;
            if r.norm > r.bound * (1.0 + 1e-12) {
                violations += 1;
            }
        }
    }
    report(
        7,
        "chain norms bounded",
        violations == 0,
        &format!("{violations} violations over {reports} (t, k) pairs from 50 configurations"),
    );
}

#[test]
fn criterion_08_elliptical_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    // Constraint residual on 100 random problems.
    let mut worst_residual = 0.0_f64;
    for _ in 0..100 {
        let dim = rng.gen_range(1..=8usize);
        let w_tilde: Vec<f64> = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let d: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.05..4.0)).collect();
        let target = rng.gen_range(0.2..3.0);
        let problem = ProjectionProblem::new(w_tilde, d.clone(), target).unwrap();
        let proj = elliptical_project(&problem).unwrap();
        let residual =
            (proj.w.iter().zip(&d).map(|(w, di)| w * w * di).sum::<f64>() - target).abs();
        worst_residual = worst_residual.max(residual);
    }
    let residual_ok = worst_residual < 1e-10;

    // 2-D objective against the exhaustive sweep.
    let mut worst_gap = 0.0_f64;
    for _ in 0..20 {
        let w_tilde = [rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5)];
        let d = [rng.gen_range(0.1..3.0), rng.gen_range(0.1..3.0)];
        let target = ProjectionProblem::DEFAULT_TARGET;
        let problem = ProjectionProblem::new(w_tilde.to_vec(), d.to_vec(), target).unwrap();
        let proj = elliptical_project(&problem).unwrap();
        let obj: f64 = proj
            .w
            .iter()
            .zip(&w_tilde)
            .map(|(w, t)| (w - t).powi(2))
            .sum();
        let swept = ellipse_sweep_2d(w_tilde, d, target, 2_000_000);
        worst_gap = worst_gap.max((obj - swept).abs());
    }
    let sweep_ok = worst_gap <= 1e-5;

    // Isotropic case collapses to radial scaling.
    let mut worst_radial = 0.0_f64;
    for _ in 0..20 {
        let dim = rng.gen_range(1..=8usize);
        let w_tilde: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
        if w_tilde.iter().all(|w| w.abs() < 1e-6) {
            continue;
        }
        let d_iso = rng.gen_range(0.2..3.0);
        let target = rng.gen_range(0.3..2.5);
        let problem =
            ProjectionProblem::new(w_tilde.clone(), vec![d_iso; dim], target).unwrap();
        let proj = elliptical_project(&problem).unwrap();
        let norm2: f64 = w_tilde.iter().map(|w| w * w).sum();
        let scale = (target / (d_iso * norm2)).sqrt();
        for (got, want) in proj.w.iter().zip(w_tilde.iter().map(|w| w * scale)) {
            worst_radial = worst_radial.max((got - want).abs());
        }
    }
    let radial_ok = worst_radial <= 1e-12;

    report(
        8,
        "elliptical projection",
        residual_ok && sweep_ok && radial_ok,
        &format!(
            "worst residual {worst_residual:.2e}, worst sweep gap {worst_gap:.2e}, worst radial gap {worst_radial:.2e}"
        ),
    );
}

#[test]
fn criterion_09_xor_desk_run() {
    let t0 = Instant::now();
    let dir = tempfile::tempdir().unwrap();

    let mut config = ExperimentConfig::defaults(Task::Xor);
    config.seeds = (0..10).collect();
    config.output_dir = dir.path().join("ep");
    config.strategy = InitStrategy::RandomEp;
    let ep = run_experiment(&config).unwrap();
    let ep_solved = ep
        .outcomes
        .iter()
        .filter(|o| o.final_train_error == 0.0)
        .count();

    config.output_dir = dir.path().join("ortho");
    config.strategy = InitStrategy::Ortho;
    let ortho = run_experiment(&config).unwrap();
    let ortho_failed = ortho
        .outcomes
        .iter()
        .filter(|o| o.final_train_error > 0.0)
        .count();

    let elapsed = t0.elapsed();
    let pass = ep_solved >= 8 && within(elapsed, 60);
    report(
        9,
        "XOR desk run",
        pass,
        &format!(
            "random+EP reached zero training error in {ep_solved}/10 seeds (need >= 8); ortho failed seeds: {ortho_failed}/10 (reported, not asserted); {:.1} s",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_10_depth_saturation_signature() {
    let t0 = Instant::now();
    // Six hidden layers shaped like the deep image experiment; inputs are a
    // synthetic stand-in batch with the same scale as the normalized images.
    let widths = vec![784, 64, 64, 64, 64, 64, 64, 10];
    let net = NetworkSpec::new(widths, OutputHead::SoftmaxCrossEntropy).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let batch = Array2::from_shape_fn((128, 784), |_| rng.gen_range(-1.0..1.0));
    let input_stats = InputStats::from_batch(batch.view()).unwrap();

    let layer_stds = |params: &[LayerParams]| -> (f64, f64) {
        let pass = forward(&net, params, batch.view()).unwrap();
        // activations[0] is the input; hidden layers are 1..=6.
        let first = mean_std(pass.activations[1].as_slice().unwrap()).1;
        let deepest = mean_std(pass.activations[6].as_slice().unwrap()).1;
        (first, deepest)
    };

    let mut shrinking = [0_u32; 2]; // lecun, glorot
    let mut preserved = 0_u32; // random+EP
    for seed in 0..10_u64 {
        for (slot, params) in [init_lecun(&net, seed), init_glorot(&net, seed)]
            .into_iter()
            .enumerate()
        {
            let (first, deepest) = layer_stds(&params);
            if deepest < first {
                shrinking[slot] += 1;
            }
        }
        let data = InitData {
            calibration: None,
            input_stats: Some(&input_stats),
        };
        let params = initialize(&InitStrategy::RandomEp, &net, seed, &data).unwrap();
        let (first, deepest) = layer_stds(&params);
        if deepest >= 0.5 * first {
            preserved += 1;
        }
    }

    let elapsed = t0.elapsed();
    let pass =
        shrinking[0] >= 8 && shrinking[1] >= 8 && preserved >= 8 && within(elapsed, 300);
    report(
        10,
        "depth saturation signature",
        pass,
        &format!(
            "std decays toward depth: lecun {}/10, glorot {}/10 (need >= 8); random+EP preserves >= half: {preserved}/10 (need >= 8); {:.1} s",
            shrinking[0], shrinking[1], elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_11_copy_memory_beats_baseline() {
    let t0 = Instant::now();
    let spec100 = CopyTaskSpec::new(100).unwrap();
    let baseline100 = memoryless_perplexity(spec100);
    let baseline_ok = (baseline100 - 1.0606).abs() <= 5e-4;

    let dir = tempfile::tempdir().unwrap();
    let mut config = ExperimentConfig::defaults(Task::CopyMemory);
    config.output_dir = dir.path().to_path_buf();
    config.strategy = InitStrategy::RandomEp;
    let summary = run_experiment(&config).unwrap();
    let baseline50 = memoryless_perplexity(CopyTaskSpec::new(config.t_delay).unwrap());
    let beating = summary
        .outcomes
        .iter()
        .filter(|o| o.final_metric < baseline50)
        .count();

    let elapsed = t0.elapsed();
    let pass = baseline_ok && beating >= 3 && within(elapsed, 900);
    report(
        11,
        "copy-memory training beats the baseline",
        pass,
        &format!(
            "memoryless(T=100) = {baseline100:.4}; {beating}/{} seeds below memoryless(T=50) = {baseline50:.4}; {:.1} s",
            summary.outcomes.len(),
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_12_bitwise_determinism() {
    // Drop the wall-clock field (always the last column of non-comment rows
    // in summary.csv); everything else must match byte for byte.
    fn strip_timing(text: &str) -> String {
        text.lines()
            .map(|line| {
                if line.starts_with('#') {
                    line.to_string()
                } else {
                    match line.rfind(',') {
                        Some(pos) => line[..pos].to_string(),
                        None => line.to_string(),
                    }
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    let dir = tempfile::tempdir().unwrap();
    let mut mismatches = Vec::new();

    for (label, mut config) in [
        ("xor", {
            let mut c = ExperimentConfig::defaults(Task::Xor);
            c.iterations = 400;
            c.seeds = vec![0, 1];
            c.samples = 80;
            c.eval_samples = 40;
            c
        }),
        ("copy-memory", {
            let mut c = ExperimentConfig::defaults(Task::CopyMemory);
            c.iterations = 40;
            c.seeds = vec![0];
            c.t_delay = 2;
            c.samples = 32;
            c.eval_samples = 16;
            c.batch_size = 8;
            c.hidden = vec![12];
            c
        }),
        ("analyze", ExperimentConfig::defaults(Task::Analyze)),
    ] {
        let dir_a = dir.path().join(format!("{label}_a"));
        let dir_b = dir.path().join(format!("{label}_b"));
        config.output_dir = dir_a.clone();
        run_experiment(&config).unwrap();
        config.output_dir = dir_b.clone();
        run_experiment(&config).unwrap();

        let mut names: Vec<String> = std::fs::read_dir(&dir_a)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        names.sort();
        assert!(!names.is_empty(), "{label}: no outputs written");
        for name in names {
            let a = std::fs::read_to_string(dir_a.join(&name)).unwrap();
            let b = std::fs::read_to_string(dir_b.join(&name)).unwrap();
            let (a, b) = if name == "summary.csv" {
                (strip_timing(&a), strip_timing(&b))
            } else {
                (a, b)
            };
            if a != b {
                mismatches.push(format!("{label}/{name}"));
            }
        }
    }

    report(
        12,
        "bitwise determinism",
        mismatches.is_empty(),
        &format!(
            "xor, copy-memory and analyze reruns compared; mismatches: {:?}",
            mismatches
        ),
    );
}
