//! Small dense linear-algebra helpers.
//!
//! Just enough for this crate: Householder QR to sample orthogonal matrices,
//! and a cyclic Jacobi eigensolver to get spectral norms of the modest
//! matrices that show up in gradient-chain diagnostics. Nothing here is tuned
//! for large problems.

use ndarray::{s, Array1, Array2, ArrayView2};

/// Spectral norm (largest singular value) of a dense matrix.
///
/// Formed as the square root of the largest eigenvalue of the smaller Gram
/// matrix, which a cyclic Jacobi sweep diagonalises to machine precision.
/// Intended for the small matrices used in chain-norm diagnostics.
pub fn spectral_norm(a: ArrayView2<'_, f64>) -> f64 {
    let (rows, cols) = a.dim();
    if rows == 0 || cols == 0 {
        return 0.0;
    }
    let gram = if cols <= rows {
        a.t().dot(&a)
    } else {
        a.dot(&a.t())
    };
    let eigs = symmetric_eigenvalues(gram);
    eigs.into_iter().fold(0.0_f64, f64::max).max(0.0).sqrt()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Plain two-sided rotations, sweeping until the off-diagonal mass is
/// negligible relative to the matrix scale.
pub(crate) fn symmetric_eigenvalues(mut a: Array2<f64>) -> Vec<f64> {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols(), "symmetric_eigenvalues: matrix must be square");
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![a[[0, 0]]];
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[[p, q]] * a[[p, q]])
            .sum();
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[[p, q]];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                // Rotation angle that zeroes a[p][q].
                let tau = (a[[q, q]] - a[[p, p]]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[[i, i]]).collect()
}

/// Eigen-decomposition of a symmetric tridiagonal matrix, tracking only the
/// first component of each eigenvector.
///
/// `d` holds the diagonal and is overwritten with the eigenvalues in
/// ascending order. `e` holds the sub-diagonal in `e[0..n-1]` (`e[n-1]` is
/// workspace) and is destroyed. `z` must be seeded with the first row of the
/// identity; on return `z[i]` is the first component of the unit eigenvector
/// paired with `d[i]`. That single row is exactly what Golub-Welsch
/// quadrature construction consumes, so full eigenvectors are never formed.
///
/// Implicit-shift QL iteration: each eigenvalue settles in a handful of
/// sweeps, and the hard cap only trips on malformed (non-finite) input.
pub(crate) fn tridiagonal_eigen_first_components(d: &mut [f64], e: &mut [f64], z: &mut [f64]) {
    let n = d.len();
    assert_eq!(e.len(), n, "tridiagonal solve: e must match d in length");
    assert_eq!(z.len(), n, "tridiagonal solve: z must match d in length");
    if n == 0 {
        return;
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // Find a negligible sub-diagonal entry splitting off the block.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break; // d[l] has converged
            }
            sweeps += 1;
            assert!(sweeps <= 50, "tridiagonal QL did not converge in 50 sweeps");

            // Shift from the leading 2x2 block, then chase the bulge from the
            // bottom of the active window back up to row `l`.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0_f64;
            let mut c = 1.0_f64;
            let mut p = 0.0_f64;
            let mut deflated = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Rotation chain annihilated early: deflate and retry.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                // Carry the tracked first-row vector through the rotation.
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Insertion sort into ascending order, carrying components along.
    for i in 1..n {
        let (di, zi) = (d[i], z[i]);
        let mut j = i;
        while j > 0 && d[j - 1] > di {
            d[j] = d[j - 1];
            z[j] = z[j - 1];
            j -= 1;
        }
        d[j] = di;
        z[j] = zi;
    }
}

/// Thin-Q Householder factorisation of a tall matrix (`rows >= cols`),
/// with the sign convention that makes the implicit `R` have a positive
/// diagonal.
///
/// Fed with i.i.d. standard normal entries this yields a matrix with
/// orthonormal columns drawn uniformly (Haar) over the Stiefel manifold —
/// the sign correction is what removes the bias a raw QR would introduce.
pub(crate) fn orthonormal_columns(mut a: Array2<f64>) -> Array2<f64> {
    let (n, m) = a.dim();
    debug_assert!(n >= m, "orthonormal_columns: need rows >= cols");
    let mut reflectors: Vec<Array1<f64>> = Vec::with_capacity(m);

    for k in 0..m {
        let mut v = a.slice(s![k.., k]).to_owned();
        let norm = v.dot(&v).sqrt();
        if norm == 0.0 {
            reflectors.push(v); // degenerate column: identity reflector
            continue;
        }
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vnorm = v.dot(&v).sqrt();
        v /= vnorm;
        for j in k..m {
            let proj = 2.0 * v.dot(&a.slice(s![k.., j]));
            a.slice_mut(s![k.., j]).scaled_add(-proj, &v);
        }
        reflectors.push(v);
    }

    let diag_signs: Vec<f64> = (0..m)
        .map(|j| if a[[j, j]] < 0.0 { -1.0 } else { 1.0 })
        .collect();

    // Accumulate Q = H_0 H_1 ... H_{m-1} applied to the thin identity.
    let mut q = Array2::zeros((n, m));
    for j in 0..m {
        q[[j, j]] = 1.0;
    }
    for k in (0..m).rev() {
        let v = &reflectors[k];
        if v.iter().all(|&x| x == 0.0) {
            continue;
        }
        for j in 0..m {
            let proj = 2.0 * v.dot(&q.slice(s![k.., j]));
            q.slice_mut(s![k.., j]).scaled_add(-proj, v);
        }
    }
    for (j, sign) in diag_signs.iter().enumerate() {
        if *sign < 0.0 {
            q.column_mut(j).mapv_inplace(|x| -x);
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spectral_norm_of_known_matrices() {
        let diag = array![[3.0, 0.0], [0.0, -5.0]];
        assert_abs_diff_eq!(spectral_norm(diag.view()), 5.0, epsilon = 1e-12);
        // Rank-one uv^T has spectral norm |u||v|.
        let rank_one = array![[2.0, 4.0], [1.0, 2.0], [2.0, 4.0]];
        let expect = (4.0_f64 + 1.0 + 4.0).sqrt() * (1.0_f64 + 4.0).sqrt();
        assert_abs_diff_eq!(spectral_norm(rank_one.view()), expect, epsilon = 1e-10);
        // Orthogonal rotation has norm exactly one.
        let th = 0.77_f64;
        let rot = array![[th.cos(), -th.sin()], [th.sin(), th.cos()]];
        assert_abs_diff_eq!(spectral_norm(rot.view()), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn jacobi_recovers_eigenvalues() {
        let m = array![[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]];
        let mut eig = symmetric_eigenvalues(m.clone());
        eig.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // det(M - tI) = -t^3 + 9t^2 - 24t + 18 = -(t - 3)(t^2 - 6t + 6),
        // so the spectrum is 3 plus or minus sqrt(3), and 3 itself.
        let root = 3.0_f64.sqrt();
        let expect = [3.0 - root, 3.0, 3.0 + root];
        for (got, want) in eig.iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
        }
        // Trace and sum of eigenvalues agree.
        let tr = 2.0 + 3.0 + 4.0;
        assert_abs_diff_eq!(eig.iter().sum::<f64>(), tr, epsilon = 1e-10);
    }

    #[test]
    fn tridiagonal_ql_matches_closed_forms_and_jacobi() {
        // Second-difference matrix: eigenpairs known in closed form. With
        // v_k(j) = sin(j k pi / (n+1)) the first components squared are
        // 2/(n+1) * sin^2(k pi / (n+1)).
        let n = 12;
        let mut d = vec![2.0; n];
        let mut e = vec![-1.0; n];
        let mut z = vec![0.0; n];
        z[0] = 1.0;
        tridiagonal_eigen_first_components(&mut d, &mut e, &mut z);
        let h = std::f64::consts::PI / (n as f64 + 1.0);
        for k in 0..n {
            let angle = (k + 1) as f64 * h;
            assert_abs_diff_eq!(d[k], 2.0 - 2.0 * angle.cos(), epsilon = 1e-12);
            let expect_z2 = 2.0 / (n as f64 + 1.0) * angle.sin().powi(2);
            assert_abs_diff_eq!(z[k] * z[k], expect_z2, epsilon = 1e-12);
        }

        // Random tridiagonal: eigenvalues agree with the dense Jacobi path
        // and the tracked components stay those of unit vectors.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 9;
        let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let mut dense = Array2::zeros((n, n));
        for i in 0..n {
            dense[[i, i]] = diag[i];
        }
        for i in 0..n - 1 {
            dense[[i, i + 1]] = off[i];
            dense[[i + 1, i]] = off[i];
        }
        let mut jacobi = symmetric_eigenvalues(dense);
        jacobi.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut d = diag;
        let mut e = off;
        e.push(0.0);
        let mut z = vec![0.0; n];
        z[0] = 1.0;
        tridiagonal_eigen_first_components(&mut d, &mut e, &mut z);
        for (ql, full) in d.iter().zip(&jacobi) {
            assert_abs_diff_eq!(*ql, *full, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(z.iter().map(|v| v * v).sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn householder_q_has_orthonormal_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &(n, m) in &[(5usize, 5usize), (8, 3), (12, 12), (40, 17)] {
            let a = Array2::from_shape_fn((n, m), |_| {
                // Box-Muller standard normals.
                let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            });
            let q = orthonormal_columns(a);
            let gram = q.t().dot(&q);
            for i in 0..m {
                for j in 0..m {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(gram[[i, j]], expect, epsilon = 1e-10);
                }
            }
        }
    }
}
