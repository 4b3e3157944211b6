//! Restarted GMRES with diagonal (Jacobi) left preconditioning, for the
//! nonsymmetric linearized operators arising from general coordinates.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct GmresOptions {
    /// Relative tolerance on the preconditioned residual.
    pub rel_tol: f64,
    /// Arnoldi basis size between restarts.
    pub restart: usize,
    /// Total matvec cap across restarts.
    pub max_iters: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions {
            rel_tol: 1e-10,
            restart: 80,
            max_iters: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GmresStats {
    pub iters: usize,
    pub residual: f64,
    pub converged: bool,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solve A x = b with y = apply(x) and the diagonal preconditioner `diag`
/// (entries must be nonzero); `x` holds the initial guess and the solution.
pub fn gmres(
    mut apply: impl FnMut(&[f64], &mut [f64]),
    b: &[f64],
    x: &mut [f64],
    diag: &[f64],
    opts: &GmresOptions,
) -> Result<GmresStats> {
    let n = b.len();
    if x.len() != n || diag.len() != n {
        return Err(Error::DimensionMismatch("gmres vector lengths".into()));
    }
    if diag.iter().any(|d| *d == 0.0 || !d.is_finite()) {
        return Err(Error::LinearSolve {
            iters: 0,
            residual: f64::NAN,
        });
    }
    let m = opts.restart.max(1);
    let precond = |v: &mut [f64]| {
        for (vi, di) in v.iter_mut().zip(diag) {
            *vi /= *di;
        }
    };

    let mut pb = b.to_vec();
    precond(&mut pb);
    let b_norm = norm(&pb).max(f64::MIN_POSITIVE);
    let target = opts.rel_tol * b_norm;

    let mut scratch = vec![0.0; n];
    let mut total_iters = 0usize;
    let mut residual = f64::INFINITY;

    while total_iters < opts.max_iters {
        // r = M^{-1}(b - A x)
        apply(x, &mut scratch);
        let mut r: Vec<f64> = b.iter().zip(&scratch).map(|(bi, ax)| bi - ax).collect();
        precond(&mut r);
        let beta = norm(&r);
        residual = beta;
        if beta <= target {
            return Ok(GmresStats {
                iters: total_iters,
                residual: beta,
                converged: true,
            });
        }

        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        basis.push(r.iter().map(|v| v / beta).collect());
        let mut h = vec![vec![0.0f64; m]; m + 1];
        let mut cs = vec![0.0f64; m];
        let mut sn = vec![0.0f64; m];
        let mut g = vec![0.0f64; m + 1];
        g[0] = beta;
        let mut k_used = 0;

        for j in 0..m {
            if total_iters >= opts.max_iters {
                break;
            }
            total_iters += 1;
            apply(&basis[j], &mut scratch);
            let mut w = scratch.clone();
            precond(&mut w);
            // modified Gram-Schmidt
            for (i, vi) in basis.iter().enumerate().take(j + 1) {
                let hij: f64 = w.iter().zip(vi).map(|(a, b)| a * b).sum();
                h[i][j] = hij;
                for (wk, vk) in w.iter_mut().zip(vi) {
                    *wk -= hij * vk;
                }
            }
            let hn = norm(&w);
            h[j + 1][j] = hn;
            // previous Givens rotations
            for i in 0..j {
                let t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
                h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
                h[i][j] = t;
            }
            // new rotation annihilating h[j+1][j]
            let denom = (h[j][j] * h[j][j] + hn * hn).sqrt();
            if denom == 0.0 {
                k_used = j;
                break;
            }
            cs[j] = h[j][j] / denom;
            sn[j] = hn / denom;
            h[j][j] = denom;
            h[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] *= cs[j];
            k_used = j + 1;
            residual = g[j + 1].abs();
            if residual <= target || hn == 0.0 {
                break;
            }
            basis.push(w.iter().map(|v| v / hn).collect());
        }

        // back substitution on the k_used x k_used triangle
        if k_used > 0 {
            let mut y = vec![0.0f64; k_used];
            for i in (0..k_used).rev() {
                let mut s = g[i];
                for j in i + 1..k_used {
                    s -= h[i][j] * y[j];
                }
                y[i] = s / h[i][i];
            }
            for (j, yj) in y.iter().enumerate() {
                for (xi, vi) in x.iter_mut().zip(&basis[j]) {
                    *xi += yj * vi;
                }
            }
        }
        if residual <= target {
            return Ok(GmresStats {
                iters: total_iters,
                residual,
                converged: true,
            });
        }
        if k_used == 0 {
            break; // stagnation
        }
    }
    Err(Error::LinearSolve {
        iters: total_iters,
        residual,
    })
}
