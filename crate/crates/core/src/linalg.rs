//! Small dense linear algebra: packed symmetric matrices, a cyclic Jacobi
//! eigensolver, and a Cholesky positive-definiteness check. Everything here
//! targets the small fixed sizes of the rest of the crate (n <= 16).

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Symmetric n x n matrix storing only the upper triangle (row-packed), so
/// A_ij == A_ji holds by construction. Serializes as a row-major dense
/// array of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    upper: Vec<f64>,
}

impl Serialize for SymMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<f64>> = Vec::deserialize(deserializer)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(D::Error::custom("matrix rows must form a square"));
        }
        let dense: Vec<f64> = rows.into_iter().flatten().collect();
        SymMatrix::from_dense(n, &dense).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[inline]
fn tri_len(n: usize) -> usize {
    n * (n + 1) / 2
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            upper: vec![0.0; tri_len(n)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn scaled_identity(n: usize, c: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    /// Build from an entry function; only the upper triangle is sampled.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from a row-major dense slice, symmetrizing via the mean of the
    /// two triangles.
    pub fn from_dense(n: usize, dense: &[f64]) -> Result<Self> {
        if dense.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "dense slice has {} entries, expected {}",
                dense.len(),
                n * n
            )));
        }
        Ok(Self::from_fn(n, |i, j| {
            0.5 * (dense[i * n + j] + dense[j * n + i])
        }))
    }

    /// Packed upper-triangle slice (row-packed: (0,0),(0,1),..,(1,1),..).
    pub fn packed(&self) -> &[f64] {
        &self.upper
    }

    pub fn from_packed(n: usize, packed: Vec<f64>) -> Result<Self> {
        if packed.len() != tri_len(n) {
            return Err(Error::DimensionMismatch(format!(
                "packed slice has {} entries, expected {}",
                packed.len(),
                tri_len(n)
            )));
        }
        Ok(SymMatrix { n, upper: packed })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.upper[k] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.upper[k] += v;
    }

    pub fn to_dense(&self) -> Mat {
        let mut d = Mat::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                d.set(i, j, self.get(i, j));
            }
        }
        d
    }

    pub fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let v = self.get(i, j);
                s += v * v;
            }
        }
        s.sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// self + c * other
    pub fn axpy(&self, c: f64, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        let upper = self
            .upper
            .iter()
            .zip(&other.upper)
            .map(|(a, b)| a + c * b)
            .collect();
        SymMatrix { n: self.n, upper }
    }

    pub fn scale(&self, c: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            upper: self.upper.iter().map(|a| a * c).collect(),
        }
    }

    /// Quadratic form x^T A x.
    pub fn quad(&self, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.get(i, j) * x[i] * x[j];
            }
        }
        s
    }

    /// Matrix-vector product A x.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                y[i] += self.get(i, j) * x[j];
            }
        }
        y
    }

    /// Full contraction sum_ij A_ij B_ij.
    pub fn inner(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += self.get(i, j) * other.get(i, j);
            }
        }
        s
    }

    /// Symmetric product gamma * A * gamma for symmetric gamma.
    pub fn sandwich(&self, gamma: &SymMatrix) -> SymMatrix {
        let a = gamma.to_dense().mul(&self.to_dense()).mul(&gamma.to_dense());
        // exact symmetrization; the product is symmetric up to roundoff
        SymMatrix::from_fn(self.n, |i, j| 0.5 * (a.get(i, j) + a.get(j, i)))
    }

    /// Cholesky factorization check; `Ok` iff the matrix is positive definite.
    pub fn cholesky(&self) -> Result<Vec<f64>> {
        let n = self.n;
        let mut l = vec![0.0f64; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(Error::SingularMetric(format!(
                            "Cholesky pivot {s:.3e} <= 0 at row {i}"
                        )));
                    }
                    l[i * n + i] = s.sqrt();
                } else {
                    l[i * n + j] = s / l[j * n + j];
                }
            }
        }
        Ok(l)
    }
}

/// Row-major dense matrix; just enough operations for frames and products.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
}

/// Off-diagonal Frobenius norm, the Jacobi convergence measure.
fn off_norm(a: &Mat) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j) * a.get(i, j);
            }
        }
    }
    s.sqrt()
}

pub const JACOBI_TOL: f64 = 1e-13;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues sorted descending and the orthonormal eigenframe as
/// columns of the returned matrix, in the same order. Convergence is
/// off-diagonal norm <= JACOBI_TOL * ||A||_F, capped at JACOBI_MAX_SWEEPS
/// full sweeps.
pub fn jacobi_eigen(a: &SymMatrix) -> Result<(Vec<f64>, Mat)> {
    let n = a.dim();
    let mut m = a.to_dense();
    let mut q = Mat::identity(n);
    let scale = a.frobenius();
    if scale == 0.0 {
        return Ok((vec![0.0; n], q));
    }
    let tol = JACOBI_TOL * scale;
    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_norm(&m) <= tol {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for r in p + 1..n {
                let apq = m.get(p, r);
                if apq.abs() <= tol / (n as f64 * n as f64) {
                    continue;
                }
                let app = m.get(p, p);
                let aqq = m.get(r, r);
                let theta = (aqq - app) / (2.0 * apq);
                // stable rotation: t = sign(theta)/(|theta| + sqrt(theta^2+1))
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, r);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, r, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(r, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(r, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let qkp = q.get(k, p);
                    let qkq = q.get(k, r);
                    q.set(k, p, c * qkp - s * qkq);
                    q.set(k, r, s * qkp + c * qkq);
                }
            }
        }
    }
    if !converged && off_norm(&m) > tol {
        return Err(Error::Numerical(format!(
            "Jacobi did not converge within {JACOBI_MAX_SWEEPS} sweeps (off-norm {:.3e}, tol {:.3e})",
            off_norm(&m),
            tol
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut frame = Mat::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            frame.set(k, new_col, q.get(k, old_col));
        }
    }
    Ok((values, frame))
}
