//! Matrix-level operator F(A) = f(lambda(A)) with respect to a metric, its
//! derivative F^{ij}, and the matrix inequalities used by the boundary
//! estimates (partial-trace ratio, negative-eigenvalue bound, the
//! epsilon-split empirical constant).

use serde::{Deserialize, Serialize};

pub use crate::linalg::{jacobi_eigen, Mat, SymMatrix};

use crate::error::{Error, Result};
use crate::symfun::{OperatorSpec, Spectrum};

/// Relative gap below which eigenvalues are treated as one cluster when
/// assembling the spectral derivative; within a cluster the gradient entries
/// are averaged (the divided-difference limit for coinciding eigenvalues).
pub const CLUSTER_TOL: f64 = 1e-9;

/// Largest dimension served by the dense fixed-size eigenpath.
pub const MAX_EIG_DIM: usize = 8;

/// Positive definite metric with its inverse and the symmetric square root
/// gamma of the inverse (gamma * gamma = g^{-1} to 1e-12).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricTensor {
    g: SymMatrix,
    g_inv: SymMatrix,
    gamma: SymMatrix,
}

impl MetricTensor {
    pub fn new(g: SymMatrix) -> Result<Self> {
        g.cholesky()?; // positive definiteness gate
        let n = g.dim();
        let (vals, q) = jacobi_eigen(&g)?;
        if vals[n - 1] <= 0.0 {
            return Err(Error::SingularMetric(format!(
                "metric eigenvalue {:.3e} <= 0",
                vals[n - 1]
            )));
        }
        let build = |f: &dyn Fn(f64) -> f64| {
            SymMatrix::from_fn(n, |i, j| {
                (0..n)
                    .map(|k| q.get(i, k) * f(vals[k]) * q.get(j, k))
                    .sum()
            })
        };
        let g_inv = build(&|d| 1.0 / d);
        let gamma = build(&|d| 1.0 / d.sqrt());
        // invariant: gamma * gamma == g_inv
        let prod = gamma.to_dense().mul(&gamma.to_dense());
        for i in 0..n {
            for j in 0..n {
                if (prod.get(i, j) - g_inv.get(i, j)).abs() > 1e-12 * (1.0 + g_inv.frobenius()) {
                    return Err(Error::SingularMetric(
                        "square root of the inverse metric failed its defining identity".into(),
                    ));
                }
            }
        }
        Ok(MetricTensor { g, g_inv, gamma })
    }

    pub fn identity(n: usize) -> Self {
        MetricTensor {
            g: SymMatrix::identity(n),
            g_inv: SymMatrix::identity(n),
            gamma: SymMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn g(&self) -> &SymMatrix {
        &self.g
    }

    pub fn g_inv(&self) -> &SymMatrix {
        &self.g_inv
    }

    pub fn gamma(&self) -> &SymMatrix {
        &self.gamma
    }
}

/// Eigenvalues of A with respect to the metric (the eigenvalues of
/// gamma A gamma, equivalently of g^{-1} A), sorted descending, together
/// with the orthonormal eigenframe of gamma A gamma (columns).
pub fn eig_metric(a: &SymMatrix, g: &MetricTensor) -> Result<(Spectrum, Mat)> {
    let n = a.dim();
    if n != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {n}x{n}, metric is {}x{}",
            g.dim(),
            g.dim()
        )));
    }
    if n > MAX_EIG_DIM {
        return Err(Error::InvalidInput(format!(
            "metric eigenpath supports n <= {MAX_EIG_DIM}, got {n}"
        )));
    }
    let m = a.sandwich(g.gamma());
    let (vals, frame) = jacobi_eigen(&m)?;
    Ok((Spectrum::new(vals)?, frame))
}

/// Eigen-decomposition without metric factors (the flat-metric fast path).
pub fn eig_plain(a: &SymMatrix) -> Result<(Spectrum, Mat)> {
    let (vals, frame) = jacobi_eigen(a)?;
    Ok((Spectrum::new(vals)?, frame))
}

/// F(A) = f(lambda(A)) for the metric eigenvalues.
pub fn big_f(a: &SymMatrix, g: &MetricTensor, spec: &OperatorSpec) -> Result<f64> {
    let (lam, _) = eig_metric(a, g)?;
    spec.eval(&lam)
}

/// Group indices of a descending eigenvalue list into clusters of relative
/// gap below CLUSTER_TOL.
fn clusters(vals: &[f64]) -> Vec<(usize, usize)> {
    let scale = vals.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=vals.len() {
        if i == vals.len() || (vals[i - 1] - vals[i]).abs() > CLUSTER_TOL * scale {
            out.push((start, i));
            start = i;
        }
    }
    out
}

/// Derivative F^{ij}(A): the symmetric matrix with
/// d/dt F(A + tB)|_0 = sum_{ij} F^{ij} B_ij for every symmetric B.
/// Assembled in the eigenframe as diag(f_i) rotated back, with the metric
/// square-root factors applied; gradient entries are averaged over
/// eigenvalue clusters (tolerance CLUSTER_TOL), which keeps the expression
/// frame-independent when eigenvalues repeat.
pub fn big_f_grad(a: &SymMatrix, g: &MetricTensor, spec: &OperatorSpec) -> Result<SymMatrix> {
    let n = a.dim();
    let (lam, frame) = eig_metric(a, g)?;
    let mut f = spec.grad(&lam)?;
    for (s, e) in clusters(lam.values()) {
        if e - s > 1 {
            let avg = f[s..e].iter().sum::<f64>() / (e - s) as f64;
            f[s..e].iter_mut().for_each(|x| *x = avg);
        }
    }
    let d = SymMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| frame.get(i, k) * f[k] * frame.get(j, k))
            .sum()
    });
    Ok(d.sandwich(g.gamma()))
}

/// Partial-trace ratio: the largest c with
/// sum_{l != normal} (A F' A)_{ll} >= c * sum_{i != r} f_i lambda_i^2,
/// where r is chosen to make the right side largest (dropping the smallest
/// term). Returns (c, r); c = +inf when the right side vanishes. `normal`
/// is the distinguished ambient coordinate excluded from the partial trace
/// (the boundary-normal direction in the boundary-adapted frame).
pub fn partial_trace_ratio(
    a: &SymMatrix,
    g: &MetricTensor,
    spec: &OperatorSpec,
    normal: usize,
) -> Result<(f64, usize)> {
    let n = a.dim();
    if normal >= n {
        return Err(Error::Parameter(format!(
            "normal index {normal} out of range for n={n}"
        )));
    }
    let (lam, _) = eig_metric(a, g)?;
    let f = spec.grad(&lam)?;
    let fprime = big_f_grad(a, g, spec)?;
    let p = a.to_dense().mul(&fprime.to_dense()).mul(&a.to_dense());
    let lhs: f64 = (0..n).filter(|&l| l != normal).map(|l| p.get(l, l)).sum();
    let terms: Vec<f64> = (0..n)
        .map(|i| f[i] * lam.values()[i] * lam.values()[i])
        .collect();
    let total: f64 = terms.iter().sum();
    let r = (0..n)
        .min_by(|&i, &j| terms[i].partial_cmp(&terms[j]).unwrap())
        .unwrap();
    let denom = total - terms[r];
    if denom <= 0.0 {
        return Ok((f64::INFINITY, r));
    }
    Ok((lhs / denom, r))
}

/// True iff sum_{i != r} f_i lambda_i^2 >= (1/n) sum f_i lambda_i^2 for
/// every index r with lambda_r < 0.
pub fn negative_component_square_bound(lambda: &Spectrum, spec: &OperatorSpec) -> Result<bool> {
    let f = spec.grad(lambda)?;
    let n = lambda.dim();
    let terms: Vec<f64> = (0..n)
        .map(|i| f[i] * lambda.values()[i] * lambda.values()[i])
        .collect();
    let total: f64 = terms.iter().sum();
    let guard = 1e-12 * total.abs().max(1.0);
    for r in 0..n {
        if lambda.values()[r] < 0.0 && total - terms[r] + guard < total / n as f64 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// How the excluded index r is chosen in the epsilon-split constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RSelector {
    /// Maximize over all r (the bound must hold for any index).
    WorstOverAll,
    /// Evaluate at one fixed index.
    Fixed(usize),
}

/// Empirical constant C* = max over samples (and r per the selector) of
/// (sum f_i |lambda_i| - eps * sum_{i != r} f_i lambda_i^2) /
/// (1 + eps^{-1} sum f_i).
pub fn epsilon_split_constant(
    spec: &OperatorSpec,
    epsilon: f64,
    samples: &[Spectrum],
    selector: RSelector,
) -> Result<f64> {
    if epsilon <= 0.0 {
        return Err(Error::Parameter("epsilon must be > 0".into()));
    }
    let mut c_star = f64::NEG_INFINITY;
    for lam in samples {
        let f = spec.grad(lam)?;
        let n = lam.dim();
        let abs_sum: f64 = (0..n).map(|i| f[i] * lam.values()[i].abs()).sum();
        let f_sum: f64 = f.iter().sum();
        let sq: Vec<f64> = (0..n)
            .map(|i| f[i] * lam.values()[i] * lam.values()[i])
            .collect();
        let sq_total: f64 = sq.iter().sum();
        let denom = 1.0 + f_sum / epsilon;
        let value_at = |r: usize| (abs_sum - epsilon * (sq_total - sq[r])) / denom;
        let v = match selector {
            RSelector::Fixed(r) => {
                if r >= n {
                    return Err(Error::Parameter(format!("r = {r} out of range")));
                }
                value_at(r)
            }
            RSelector::WorstOverAll => (0..n)
                .map(value_at)
                .fold(f64::NEG_INFINITY, f64::max),
        };
        c_star = c_star.max(v);
    }
    Ok(c_star)
}
