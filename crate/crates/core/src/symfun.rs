//! Elementary symmetric functions, the operator families f(lambda), and
//! their first and second derivatives on their natural admissibility cones.
//!
//! The families implemented are
//!
//! - `Linear`            f = sigma_1 on Gamma_1,
//! - `Sigma(k)`          f = sigma_k on Gamma_k (evaluation/derivatives only;
//!                        not concave for k >= 2 — it is the designated
//!                        concavity counterexample),
//! - `SigmaRoot(k)`      f = sigma_k^(1/k) on Gamma_k,
//! - `SigmaQuotient(k,l)` f = (sigma_k/sigma_l)^(1/(k-l)) on Gamma_k,
//!   with l = 0 reducing to SigmaRoot(k) by sigma_0 := 1,
//! - `LogPk(k)`          f = sum over k-subsets S of log(lambda_S) on P_k,
//!   where lambda_S is the sum of the entries indexed by S,
//! - `Pk(k)`             f = product over k-subsets of lambda_S on P_k
//!   (evaluation/derivatives only; not verified concave).
//!
//! Quotients are restricted to Gamma_k, where sigma_l > 0 holds
//! automatically; the behavior as sigma_l -> 0 on the boundary is untested.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;

/// Largest supported dimension for the eigenvalue-space families.
pub const MAX_DIM: usize = 16;

/// Ordered eigenvalue vector, the argument of the operator families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "spectrum needs length >= 2, got {}",
                values.len()
            )));
        }
        if values.len() > MAX_DIM {
            return Err(Error::InvalidInput(format!(
                "spectrum length {} exceeds supported maximum {MAX_DIM}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("spectrum has non-finite entries".into()));
        }
        Ok(Spectrum(values))
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn min_entry(&self) -> f64 {
        self.0.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn scale(&self, c: f64) -> Spectrum {
        Spectrum(self.0.iter().map(|v| c * v).collect())
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// All elementary symmetric functions sigma_0..sigma_n of `values` in one
/// pass, by accumulating the coefficients of prod_i (t + lambda_i).
pub fn sigma_all(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (count, &x) in values.iter().enumerate() {
        for j in (1..=count + 1).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// sigma_k(lambda); sigma_0 := 1.
pub fn sigma(k: usize, lambda: &Spectrum) -> Result<f64> {
    if k > lambda.dim() {
        return Err(Error::InvalidInput(format!(
            "sigma_{k} undefined for spectrum of length {}",
            lambda.dim()
        )));
    }
    Ok(sigma_all(lambda.values())[k])
}

/// sigma_0..sigma_upto of `values` with the entries at `skip` removed.
fn sigma_reduced(values: &[f64], skip: &[usize], upto: usize) -> Vec<f64> {
    let mut e = vec![0.0; upto + 1];
    e[0] = 1.0;
    let mut count = 0usize;
    for (i, &x) in values.iter().enumerate() {
        if skip.contains(&i) {
            continue;
        }
        count += 1;
        let hi = count.min(upto);
        for j in (1..=hi).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// Visit every k-subset of 0..n (lexicographic), passing the index slice.
pub(crate) fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    debug_assert!(k >= 1 && k <= n);
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // advance lexicographically
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: usize = 1;
    let mut den: usize = 1;
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Admissibility cone in eigenvalue space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "cone", rename_all = "snake_case")]
pub enum ConeKind {
    /// Gamma_k = { sigma_j(lambda) > 0 for 1 <= j <= k }.
    GammaK { k: usize },
    /// P_k = { every sum of k distinct entries > 0 }.
    PK { k: usize },
    /// Gamma_n^+ = { every entry > 0 }.
    PositiveOrthant,
}

/// An open convex symmetric cone containing the positive orthant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub kind: ConeKind,
    pub n: usize,
}

impl ConeSpec {
    pub fn gamma_k(k: usize, n: usize) -> Result<Self> {
        if k < 1 || k > n {
            return Err(Error::InvalidOperator(format!(
                "Gamma_k needs 1 <= k <= n, got k={k}, n={n}"
            )));
        }
        Ok(ConeSpec {
            kind: ConeKind::GammaK { k },
            n,
        })
    }

    pub fn p_k(k: usize, n: usize) -> Result<Self> {
        if k < 1 || k > n {
            return Err(Error::InvalidOperator(format!(
                "P_k needs 1 <= k <= n, got k={k}, n={n}"
            )));
        }
        Ok(ConeSpec {
            kind: ConeKind::PK { k },
            n,
        })
    }

    pub fn positive_orthant(n: usize) -> Self {
        ConeSpec {
            kind: ConeKind::PositiveOrthant,
            n,
        }
    }

    /// Minimum over the cone's defining inequalities, a distance-to-boundary
    /// proxy. Positive iff the point is strictly inside.
    pub fn margin(&self, lambda: &Spectrum) -> f64 {
        match self.kind {
            ConeKind::GammaK { k } => {
                let e = sigma_all(lambda.values());
                e[1..=k].iter().cloned().fold(f64::INFINITY, f64::min)
            }
            ConeKind::PK { k } => {
                let mut v = lambda.values().to_vec();
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                v[..k].iter().sum()
            }
            ConeKind::PositiveOrthant => lambda.min_entry(),
        }
    }

    /// Strict membership in the open cone.
    pub fn contains(&self, lambda: &Spectrum) -> bool {
        self.contains_with_tol(lambda, 0.0)
    }

    /// Membership with a relative tolerance knob: each defining inequality q
    /// of homogeneity degree d must satisfy q > rel_tol * max(1, |lambda|)^d.
    /// The default rel_tol = 0 is the strict open-cone test; grid-level
    /// admissibility checks may pass a small negative rel_tol to absorb
    /// roundoff.
    pub fn contains_with_tol(&self, lambda: &Spectrum, rel_tol: f64) -> bool {
        let scale = lambda
            .values()
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1.0);
        match self.kind {
            ConeKind::GammaK { k } => {
                let e = sigma_all(lambda.values());
                (1..=k).all(|j| e[j] > rel_tol * scale.powi(j as i32))
            }
            ConeKind::PK { .. } | ConeKind::PositiveOrthant => {
                self.margin(lambda) > rel_tol * scale
            }
        }
    }

    /// Description of the violated defining inequality, if any.
    pub fn violated(&self, lambda: &Spectrum) -> Option<String> {
        match self.kind {
            ConeKind::GammaK { k } => {
                let e = sigma_all(lambda.values());
                (1..=k)
                    .find(|&j| e[j] <= 0.0)
                    .map(|j| format!("sigma_{j}(lambda) = {:.6e} <= 0", e[j]))
            }
            ConeKind::PK { k } => {
                let m = self.margin(lambda);
                (m <= 0.0).then(|| format!("minimal {k}-term sum = {m:.6e} <= 0"))
            }
            ConeKind::PositiveOrthant => {
                let m = lambda.min_entry();
                (m <= 0.0).then(|| format!("min entry = {m:.6e} <= 0"))
            }
        }
    }
}

/// `in_cone(cone, lambda)`: strict membership in the open cone.
pub fn in_cone(cone: &ConeSpec, lambda: &Spectrum) -> bool {
    cone.contains(lambda)
}

/// Which member of the operator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// f = sigma_1.
    Linear,
    /// f = sigma_k (plain; not concave for k >= 2).
    Sigma(usize),
    /// f = sigma_k^(1/k).
    SigmaRoot(usize),
    /// f = (sigma_k / sigma_l)^(1/(k-l)), 0 <= l < k.
    SigmaQuotient(usize, usize),
    /// f = log prod over k-subsets of the subset sums.
    LogPk(usize),
    /// f = prod over k-subsets of the subset sums (not verified concave).
    Pk(usize),
}

/// Scaling behavior of a family, used for closed-form level points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Homogeneity {
    /// f(t lambda) = t^degree f(lambda).
    Homogeneous { degree: f64 },
    /// f(t lambda) = f(lambda) + constant * log t.
    LogHomogeneous { constant: f64 },
}

/// A member of the operator family on its natural cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub n: usize,
    pub cone: ConeSpec,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, n: usize) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::InvalidOperator(format!(
                "dimension must satisfy 2 <= n <= {MAX_DIM}, got {n}"
            )));
        }
        let cone = match kind {
            OperatorKind::Linear => ConeSpec::gamma_k(1, n)?,
            OperatorKind::Sigma(k) | OperatorKind::SigmaRoot(k) => ConeSpec::gamma_k(k, n)?,
            OperatorKind::SigmaQuotient(k, l) => {
                if l >= k {
                    return Err(Error::InvalidOperator(format!(
                        "quotient needs 0 <= l < k, got k={k}, l={l}"
                    )));
                }
                ConeSpec::gamma_k(k, n)?
            }
            OperatorKind::LogPk(k) | OperatorKind::Pk(k) => ConeSpec::p_k(k, n)?,
        };
        Ok(OperatorSpec { kind, n, cone })
    }

    pub fn linear(n: usize) -> Result<Self> {
        Self::new(OperatorKind::Linear, n)
    }

    pub fn sigma(k: usize, n: usize) -> Result<Self> {
        Self::new(OperatorKind::Sigma(k), n)
    }

    pub fn sigma_root(k: usize, n: usize) -> Result<Self> {
        Self::new(OperatorKind::SigmaRoot(k), n)
    }

    pub fn sigma_quotient(k: usize, l: usize, n: usize) -> Result<Self> {
        Self::new(OperatorKind::SigmaQuotient(k, l), n)
    }

    pub fn log_pk(k: usize, n: usize) -> Result<Self> {
        Self::new(OperatorKind::LogPk(k), n)
    }

    pub fn pk(k: usize, n: usize) -> Result<Self> {
        Self::new(OperatorKind::Pk(k), n)
    }

    pub fn homogeneity(&self) -> Homogeneity {
        match self.kind {
            OperatorKind::Linear | OperatorKind::SigmaRoot(_) | OperatorKind::SigmaQuotient(..) => {
                Homogeneity::Homogeneous { degree: 1.0 }
            }
            OperatorKind::Sigma(k) => Homogeneity::Homogeneous { degree: k as f64 },
            OperatorKind::Pk(k) => Homogeneity::Homogeneous {
                degree: binomial(self.n, k) as f64,
            },
            OperatorKind::LogPk(k) => Homogeneity::LogHomogeneous {
                constant: binomial(self.n, k) as f64,
            },
        }
    }

    /// sup of f over the cone boundary (limsup along sequences). Hard-coded
    /// per family: 0 for the sigma-based kinds and plain Pk, -inf for LogPk.
    pub fn sup_boundary_f(&self) -> f64 {
        match self.kind {
            OperatorKind::LogPk(_) => f64::NEG_INFINITY,
            _ => 0.0,
        }
    }

    /// Whether this family is one of the concavity-verified representatives.
    /// Plain `Sigma(k)` (k >= 2) and `Pk` are provided for evaluation only.
    pub fn verified_concave(&self) -> bool {
        match self.kind {
            OperatorKind::Sigma(k) => k == 1,
            OperatorKind::Pk(_) => false,
            _ => true,
        }
    }

    fn check_dim(&self, lambda: &Spectrum) -> Result<()> {
        if lambda.dim() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "operator has n={}, spectrum has length {}",
                self.n,
                lambda.dim()
            )));
        }
        Ok(())
    }

    fn check_admissible(&self, lambda: &Spectrum) -> Result<()> {
        self.check_dim(lambda)?;
        if let Some(violated) = self.cone.violated(lambda) {
            return Err(Error::NotAdmissible {
                violated,
                spectrum: lambda.values().to_vec(),
                node: None,
            });
        }
        Ok(())
    }

    /// f(lambda).
    pub fn eval(&self, lambda: &Spectrum) -> Result<f64> {
        self.check_admissible(lambda)?;
        let v = lambda.values();
        Ok(match self.kind {
            OperatorKind::Linear => v.iter().sum(),
            OperatorKind::Sigma(k) => sigma_all(v)[k],
            OperatorKind::SigmaRoot(k) => sigma_all(v)[k].powf(1.0 / k as f64),
            OperatorKind::SigmaQuotient(k, l) => {
                let e = sigma_all(v);
                (e[k] / e[l]).powf(1.0 / (k - l) as f64)
            }
            OperatorKind::LogPk(k) => {
                let mut s = 0.0;
                for_each_subset(self.n, k, |idx| {
                    s += idx.iter().map(|&i| v[i]).sum::<f64>().ln();
                });
                s
            }
            OperatorKind::Pk(k) => {
                let mut p = 1.0;
                for_each_subset(self.n, k, |idx| {
                    p *= idx.iter().map(|&i| v[i]).sum::<f64>();
                });
                p
            }
        })
    }

    /// Gradient (f_1, ..., f_n) in closed form.
    pub fn grad(&self, lambda: &Spectrum) -> Result<Vec<f64>> {
        self.check_admissible(lambda)?;
        let v = lambda.values();
        let n = self.n;
        Ok(match self.kind {
            OperatorKind::Linear => vec![1.0; n],
            OperatorKind::Sigma(k) => (0..n)
                .map(|i| sigma_reduced(v, &[i], k - 1)[k - 1])
                .collect(),
            OperatorKind::SigmaRoot(k) => {
                let ek = sigma_all(v)[k];
                let kk = k as f64;
                let c = ek.powf(1.0 / kk - 1.0) / kk;
                (0..n)
                    .map(|i| c * sigma_reduced(v, &[i], k - 1)[k - 1])
                    .collect()
            }
            OperatorKind::SigmaQuotient(k, l) => {
                let e = sigma_all(v);
                let f = (e[k] / e[l]).powf(1.0 / (k - l) as f64);
                let m = (k - l) as f64;
                (0..n)
                    .map(|i| {
                        let dk = sigma_reduced(v, &[i], k - 1)[k - 1];
                        let dl = if l >= 1 {
                            sigma_reduced(v, &[i], l - 1)[l - 1]
                        } else {
                            0.0
                        };
                        f * (dk / e[k] - dl / e[l]) / m
                    })
                    .collect()
            }
            OperatorKind::LogPk(k) => {
                let mut g = vec![0.0; n];
                for_each_subset(n, k, |idx| {
                    let s: f64 = idx.iter().map(|&i| v[i]).sum();
                    for &i in idx {
                        g[i] += 1.0 / s;
                    }
                });
                g
            }
            OperatorKind::Pk(k) => {
                let p = self.eval(lambda)?;
                let mut g = vec![0.0; n];
                for_each_subset(n, k, |idx| {
                    let s: f64 = idx.iter().map(|&i| v[i]).sum();
                    for &i in idx {
                        g[i] += 1.0 / s;
                    }
                });
                g.iter_mut().for_each(|gi| *gi *= p);
                g
            }
        })
    }

    /// Hessian of f in eigenvalue space, in closed form.
    pub fn hess(&self, lambda: &Spectrum) -> Result<SymMatrix> {
        self.check_admissible(lambda)?;
        let v = lambda.values();
        let n = self.n;
        Ok(match self.kind {
            OperatorKind::Linear => SymMatrix::zeros(n),
            OperatorKind::Sigma(k) => SymMatrix::from_fn(n, |i, j| {
                if i == j || k < 2 {
                    0.0
                } else {
                    sigma_reduced(v, &[i, j], k - 2)[k - 2]
                }
            }),
            OperatorKind::SigmaRoot(k) => {
                // f = e_k^(1/k): f_ij = c1 * e_k,ij + c2 * e_k,i e_k,j
                let ek = sigma_all(v)[k];
                let kk = k as f64;
                let c1 = ek.powf(1.0 / kk - 1.0) / kk;
                let c2 = (1.0 / kk) * (1.0 / kk - 1.0) * ek.powf(1.0 / kk - 2.0);
                let d: Vec<f64> = (0..n)
                    .map(|i| sigma_reduced(v, &[i], k - 1)[k - 1])
                    .collect();
                SymMatrix::from_fn(n, |i, j| {
                    let dij = if i == j || k < 2 {
                        0.0
                    } else {
                        sigma_reduced(v, &[i, j], k - 2)[k - 2]
                    };
                    c1 * dij + c2 * d[i] * d[j]
                })
            }
            OperatorKind::SigmaQuotient(k, l) => {
                // f = exp(u/m), u = log e_k - log e_l, m = k - l
                let e = sigma_all(v);
                let m = (k - l) as f64;
                let f = (e[k] / e[l]).powf(1.0 / m);
                let dk: Vec<f64> = (0..n)
                    .map(|i| sigma_reduced(v, &[i], k - 1)[k - 1])
                    .collect();
                let dl: Vec<f64> = (0..n)
                    .map(|i| {
                        if l >= 1 {
                            sigma_reduced(v, &[i], l - 1)[l - 1]
                        } else {
                            0.0
                        }
                    })
                    .collect();
                let u_i: Vec<f64> = (0..n).map(|i| dk[i] / e[k] - dl[i] / e[l]).collect();
                SymMatrix::from_fn(n, |i, j| {
                    let dkij = if i == j || k < 2 {
                        0.0
                    } else {
                        sigma_reduced(v, &[i, j], k - 2)[k - 2]
                    };
                    let dlij = if i == j || l < 2 {
                        0.0
                    } else {
                        sigma_reduced(v, &[i, j], l - 2)[l - 2]
                    };
                    let u_ij = dkij / e[k] - dk[i] * dk[j] / (e[k] * e[k]) - dlij / e[l]
                        + dl[i] * dl[j] / (e[l] * e[l]);
                    f * (u_i[i] * u_i[j] / (m * m) + u_ij / m)
                })
            }
            OperatorKind::LogPk(k) => {
                let mut h = SymMatrix::zeros(n);
                for_each_subset(n, k, |idx| {
                    let s: f64 = idx.iter().map(|&i| v[i]).sum();
                    let w = -1.0 / (s * s);
                    for a in 0..idx.len() {
                        for b in a..idx.len() {
                            h.add_to(idx[a], idx[b], w);
                        }
                    }
                });
                h
            }
            OperatorKind::Pk(k) => {
                // P = exp(g) with g = log P_k: P_ij = P (g_i g_j + g_ij)
                let p = self.eval(lambda)?;
                let logspec = OperatorSpec::new(OperatorKind::LogPk(k), n)?;
                let g = logspec.grad(lambda)?;
                let gh = logspec.hess(lambda)?;
                SymMatrix::from_fn(n, |i, j| p * (g[i] * g[j] + gh.get(i, j)))
            }
        })
    }
}

/// `f_eval(spec, lambda)`.
pub fn f_eval(spec: &OperatorSpec, lambda: &Spectrum) -> Result<f64> {
    spec.eval(lambda)
}

/// `f_grad(spec, lambda)`.
pub fn f_grad(spec: &OperatorSpec, lambda: &Spectrum) -> Result<Vec<f64>> {
    spec.grad(lambda)
}

/// `f_hess(spec, lambda)`.
pub fn f_hess(spec: &OperatorSpec, lambda: &Spectrum) -> Result<SymMatrix> {
    spec.hess(lambda)
}

#[derive(Serialize, Deserialize)]
struct RawOperatorSpec {
    kind: String,
    k: usize,
    l: usize,
    n: usize,
}

impl Serialize for OperatorSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (kind, k, l) = match self.kind {
            OperatorKind::Linear => ("linear", 1, 0),
            OperatorKind::Sigma(k) => ("sigma", k, 0),
            OperatorKind::SigmaRoot(k) => ("sigma_root", k, 0),
            OperatorKind::SigmaQuotient(k, l) => ("sigma_quotient", k, l),
            OperatorKind::LogPk(k) => ("log_pk", k, 0),
            OperatorKind::Pk(k) => ("pk", k, 0),
        };
        RawOperatorSpec {
            kind: kind.to_string(),
            k,
            l,
            n: self.n,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OperatorSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawOperatorSpec::deserialize(deserializer)?;
        let kind = match raw.kind.as_str() {
            "linear" => OperatorKind::Linear,
            "sigma" => OperatorKind::Sigma(raw.k),
            "sigma_root" => OperatorKind::SigmaRoot(raw.k),
            "sigma_quotient" => OperatorKind::SigmaQuotient(raw.k, raw.l),
            "log_pk" => OperatorKind::LogPk(raw.k),
            "pk" => OperatorKind::Pk(raw.k),
            other => {
                return Err(D::Error::custom(format!(
                    "unknown operator kind '{other}' (expected linear, sigma, sigma_root, sigma_quotient, log_pk, pk)"
                )))
            }
        };
        OperatorSpec::new(kind, raw.n).map_err(|e| D::Error::custom(e.to_string()))
    }
}
