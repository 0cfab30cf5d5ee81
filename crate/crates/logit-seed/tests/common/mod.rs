//! Shared numerical oracles for the integration suites.
//!
//! Everything here is deliberately independent of the library's numerics:
//! plain adaptive Simpson quadrature, central finite differences, exhaustive
//! sweeps, and a pivoted LU determinant. Slow and simple on purpose, so a
//! bug in the library cannot hide in its own oracle.

#![allow(dead_code)] // each test binary uses its own subset

use logit_seed::optim::ParamTensors;
use ndarray::Array2;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`, with the usual Richardson correction term.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 60)
}

/// Central finite difference `f'(x)` with step `h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Central second difference `f''(x)` with step `h`.
pub fn second_diff<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// Mixed second difference `d^2 f / dx dy` with steps `hx`, `hy`.
pub fn mixed_diff<F: Fn(f64, f64) -> f64>(f: &F, x: f64, y: f64, hx: f64, hy: f64) -> f64 {
    (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy))
        / (4.0 * hx * hy)
}

/// Element-wise central-difference gradient of a scalar loss over any
/// parameter set the optimizer can see, returned tensor by tensor in the
/// same flat layout as [`ParamTensors::tensors`].
pub fn fd_gradient<P, F>(loss: &F, params: &P, h: f64) -> Vec<Vec<f64>>
where
    P: ParamTensors + Clone,
    F: Fn(&P) -> f64,
{
    let lens: Vec<usize> = params.tensors().iter().map(|t| t.len()).collect();
    let mut out = Vec::with_capacity(lens.len());
    for (t, &len) in lens.iter().enumerate() {
        let mut g = vec![0.0; len];
        for (i, slot) in g.iter_mut().enumerate() {
            let mut plus = params.clone();
            plus.tensors_mut()[t][i] += h;
            let mut minus = params.clone();
            minus.tensors_mut()[t][i] -= h;
            *slot = (loss(&plus) - loss(&minus)) / (2.0 * h);
        }
        out.push(g);
    }
    out
}

/// Flatten an analytic gradient set into the same shape [`fd_gradient`]
/// returns, for uniform comparison.
pub fn flatten_tensors(params: &impl ParamTensors) -> Vec<Vec<f64>> {
    params.tensors().iter().map(|t| t.to_vec()).collect()
}

/// Compare an analytic gradient entry against its finite-difference value:
/// relative where the magnitude supports it, absolute near zero.
pub fn grad_entries_agree(analytic: f64, fd: f64, rel_tol: f64, abs_floor: f64) -> bool {
    let scale = analytic.abs().max(fd.abs());
    if scale < abs_floor {
        (analytic - fd).abs() < abs_floor
    } else {
        (analytic - fd).abs() / scale < rel_tol
    }
}

/// Exhaustive sweep for the 2-D elliptical projection: minimum of
/// `||w - w_tilde||^2` over the ellipse `d0 w0^2 + d1 w1^2 = c`,
/// parametrised by angle and sampled at `points` positions.
pub fn ellipse_sweep_2d(w_tilde: [f64; 2], d: [f64; 2], c: f64, points: usize) -> f64 {
    let (ax0, ax1) = ((c / d[0]).sqrt(), (c / d[1]).sqrt());
    let mut best = f64::INFINITY;
    for i in 0..points {
        let th = 2.0 * std::f64::consts::PI * (i as f64) / (points as f64);
        let w0 = ax0 * th.cos();
        let w1 = ax1 * th.sin();
        let obj = (w0 - w_tilde[0]).powi(2) + (w1 - w_tilde[1]).powi(2);
        if obj < best {
            best = obj;
        }
    }
    best
}

/// Determinant via LU with partial pivoting. Good enough for the small
/// square matrices the init strategies produce.
pub fn lu_determinant(a: &Array2<f64>) -> f64 {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "determinant needs a square matrix");
    let mut m = a.clone();
    let mut det = 1.0;
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| m[[i, k]].abs().total_cmp(&m[[j, k]].abs()))
            .unwrap();
        if m[[pivot, k]] == 0.0 {
            return 0.0;
        }
        if pivot != k {
            for j in 0..n {
                let tmp = m[[k, j]];
                m[[k, j]] = m[[pivot, j]];
                m[[pivot, j]] = tmp;
            }
            det = -det;
        }
        det *= m[[k, k]];
        for i in (k + 1)..n {
            let factor = m[[i, k]] / m[[k, k]];
            for j in k..n {
                m[[i, j]] -= factor * m[[k, j]];
            }
        }
    }
    det
}

/// Population mean and standard deviation of a flat slice.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
