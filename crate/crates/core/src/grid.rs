//! Box-domain grids carrying a Riemannian metric: per-node metric tensors,
//! Christoffel symbols by second-order differences, covariant gradient and
//! Hessian, and distance to the boundary (exact for the flat metric, fast
//! marching otherwise).
//!
//! Grids are products of intervals in n = 2 or 3 dimensions, optionally
//! periodic per axis. Interior stencils are second-order central; boundary
//! stencils are one-sided second-order so the global order is preserved.
//! Fields are immutable after construction and safe to read concurrently.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::matrix::MetricTensor;

/// One monomial of a small fixed expression grammar: coef * prod x_a^p_a.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyTerm {
    pub coef: f64,
    pub powers: Vec<u32>,
}

/// Multivariate polynomial used for conformal weights and simple field data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Polynomial {
    pub terms: Vec<PolyTerm>,
}

impl Polynomial {
    pub fn constant(c: f64) -> Self {
        Polynomial {
            terms: vec![PolyTerm {
                coef: c,
                powers: vec![],
            }],
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let mut v = t.coef;
                for (a, &p) in t.powers.iter().enumerate() {
                    if a < x.len() {
                        v *= x[a].powi(p as i32);
                    }
                }
                v
            })
            .sum()
    }
}

/// How the metric is supplied.
#[derive(Debug, Clone)]
pub enum MetricKind {
    Flat,
    /// g = exp(2 w(x)) * identity for a polynomial weight w.
    Conformal(Polynomial),
    /// Raw per-node tensors. Smoothness is the caller's responsibility;
    /// discrete Christoffel noise for rough tensors is the caller's risk.
    Tensor,
}

/// Christoffel symbols per node, layout (k, i, j), symmetric in i, j.
#[derive(Debug, Clone)]
pub struct ChristoffelField {
    n: usize,
    data: Vec<f64>,
}

impl ChristoffelField {
    #[inline]
    pub fn get(&self, node: usize, k: usize, i: usize, j: usize) -> f64 {
        let n = self.n;
        self.data[((node * n + k) * n + i) * n + j]
    }
}

/// Box-domain grid with a metric: geometry, node metric tensors, and cached
/// Christoffel symbols (absent for the flat metric, where they vanish).
#[derive(Debug, Clone)]
pub struct MetricGrid {
    n: usize,
    shape: Vec<usize>,
    spacing: Vec<f64>,
    origin: Vec<f64>,
    periodic: Vec<bool>,
    kind: MetricKind,
    metrics: Option<Vec<MetricTensor>>,
    christoffel: Option<ChristoffelField>,
}

impl MetricGrid {
    fn validate(shape: &[usize], lo: &[f64], hi: &[f64], periodic: &[bool]) -> Result<()> {
        let n = shape.len();
        if !(n == 2 || n == 3) {
            return Err(Error::InvalidInput(format!(
                "grids support n in {{2, 3}}, got {n}"
            )));
        }
        if lo.len() != n || hi.len() != n || periodic.len() != n {
            return Err(Error::DimensionMismatch(
                "shape, corners and periodicity must agree in length".into(),
            ));
        }
        for a in 0..n {
            if shape[a] < 5 {
                return Err(Error::InvalidInput(format!(
                    "axis {a} has {} nodes; stencils need >= 5",
                    shape[a]
                )));
            }
            if !(hi[a] > lo[a]) {
                return Err(Error::InvalidInput(format!(
                    "axis {a}: box corners {} >= {}",
                    lo[a], hi[a]
                )));
            }
        }
        Ok(())
    }

    fn spacing_of(shape: &[usize], lo: &[f64], hi: &[f64], periodic: &[bool]) -> Vec<f64> {
        // periodic axes cover [lo, hi) with `shape` cells; others place nodes
        // on both endpoints
        shape
            .iter()
            .zip(lo.iter().zip(hi))
            .zip(periodic)
            .map(|((&s, (&l, &h)), &p)| if p { (h - l) / s as f64 } else { (h - l) / (s - 1) as f64 })
            .collect()
    }

    pub fn flat(shape: &[usize], lo: &[f64], hi: &[f64], periodic: &[bool]) -> Result<Self> {
        Self::validate(shape, lo, hi, periodic)?;
        Ok(MetricGrid {
            n: shape.len(),
            shape: shape.to_vec(),
            spacing: Self::spacing_of(shape, lo, hi, periodic),
            origin: lo.to_vec(),
            periodic: periodic.to_vec(),
            kind: MetricKind::Flat,
            metrics: None,
            christoffel: None,
        })
    }

    pub fn conformal(
        shape: &[usize],
        lo: &[f64],
        hi: &[f64],
        periodic: &[bool],
        weight: Polynomial,
    ) -> Result<Self> {
        Self::validate(shape, lo, hi, periodic)?;
        let n = shape.len();
        let mut grid = MetricGrid {
            n,
            shape: shape.to_vec(),
            spacing: Self::spacing_of(shape, lo, hi, periodic),
            origin: lo.to_vec(),
            periodic: periodic.to_vec(),
            kind: MetricKind::Conformal(weight.clone()),
            metrics: None,
            christoffel: None,
        };
        let mut metrics = Vec::with_capacity(grid.num_nodes());
        for node in 0..grid.num_nodes() {
            let x = grid.coords(node);
            let c = (2.0 * weight.eval(&x)).exp();
            metrics.push(MetricTensor::new(SymMatrix::scaled_identity(n, c))?);
        }
        grid.metrics = Some(metrics);
        grid.christoffel = Some(grid.compute_christoffel()?);
        Ok(grid)
    }

    pub fn from_tensors(
        shape: &[usize],
        lo: &[f64],
        hi: &[f64],
        periodic: &[bool],
        tensors: Vec<SymMatrix>,
    ) -> Result<Self> {
        Self::validate(shape, lo, hi, periodic)?;
        let n = shape.len();
        let mut grid = MetricGrid {
            n,
            shape: shape.to_vec(),
            spacing: Self::spacing_of(shape, lo, hi, periodic),
            origin: lo.to_vec(),
            periodic: periodic.to_vec(),
            kind: MetricKind::Tensor,
            metrics: None,
            christoffel: None,
        };
        if tensors.len() != grid.num_nodes() {
            return Err(Error::DimensionMismatch(format!(
                "{} tensors for {} nodes",
                tensors.len(),
                grid.num_nodes()
            )));
        }
        let metrics: Result<Vec<MetricTensor>> =
            tensors.into_iter().map(MetricTensor::new).collect();
        grid.metrics = Some(metrics?);
        grid.christoffel = Some(grid.compute_christoffel()?);
        Ok(grid)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.kind, MetricKind::Flat)
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn num_nodes(&self) -> usize {
        self.shape.iter().product()
    }

    #[inline]
    fn strides(&self) -> [usize; 3] {
        let mut s = [1usize; 3];
        for a in (0..self.n.saturating_sub(1)).rev() {
            s[a] = s[a + 1] * self.shape[a + 1];
        }
        s
    }

    #[inline]
    pub fn decode(&self, node: usize) -> [usize; 3] {
        let s = self.strides();
        let mut m = [0usize; 3];
        let mut rem = node;
        for a in 0..self.n {
            m[a] = rem / s[a];
            rem %= s[a];
        }
        m
    }

    #[inline]
    pub fn encode(&self, m: &[usize; 3]) -> usize {
        let s = self.strides();
        (0..self.n).map(|a| m[a] * s[a]).sum()
    }

    pub fn coords(&self, node: usize) -> Vec<f64> {
        let m = self.decode(node);
        (0..self.n)
            .map(|a| self.origin[a] + self.spacing[a] * m[a] as f64)
            .collect()
    }

    /// Linear index of the neighbor `offset` nodes along `axis`, or None if
    /// it falls off a non-periodic edge.
    #[inline]
    pub fn neighbor(&self, m: &[usize; 3], axis: usize, offset: isize) -> Option<usize> {
        let size = self.shape[axis] as isize;
        let raw = m[axis] as isize + offset;
        let wrapped = if self.periodic[axis] {
            raw.rem_euclid(size)
        } else if raw < 0 || raw >= size {
            return None;
        } else {
            raw
        };
        let mut mm = *m;
        mm[axis] = wrapped as usize;
        Some(self.encode(&mm))
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        let m = self.decode(node);
        (0..self.n).any(|a| !self.periodic[a] && (m[a] == 0 || m[a] == self.shape[a] - 1))
    }

    pub fn has_boundary(&self) -> bool {
        self.periodic.iter().any(|p| !p)
    }

    /// Metric tensor at a node (identity for the flat metric).
    pub fn metric_at(&self, node: usize) -> MetricTensor {
        match &self.metrics {
            Some(ms) => ms[node].clone(),
            None => MetricTensor::identity(self.n),
        }
    }

    pub fn christoffel(&self) -> Option<&ChristoffelField> {
        self.christoffel.as_ref()
    }

    /// Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij), with metric
    /// derivatives by the grid's second-order stencils.
    fn compute_christoffel(&self) -> Result<ChristoffelField> {
        let n = self.n;
        let nodes = self.num_nodes();
        let metrics = self.metrics.as_ref().expect("metric grid");
        // component scalar fields of g
        let mut comp = Vec::new();
        for i in 0..n {
            for j in i..n {
                let mut f = ScalarField::zeros_like_len(self.shape.clone(), nodes);
                for node in 0..nodes {
                    f.data[node] = metrics[node].g().get(i, j);
                }
                comp.push(((i, j), f));
            }
        }
        let comp_at = |i: usize, j: usize| -> usize {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            // row-packed upper triangle offset
            i * n - i * (i + 1) / 2 + j
        };
        // derivative fields d_c g_ij
        let mut dg = vec![Vec::new(); n];
        for (c, slot) in dg.iter_mut().enumerate() {
            for (_, f) in &comp {
                slot.push(self.deriv1(f, c)?);
            }
        }
        let mut data = vec![0.0; nodes * n * n * n];
        for node in 0..nodes {
            let ginv = metrics[node].g_inv();
            for k in 0..n {
                for i in 0..n {
                    for j in i..n {
                        let mut s = 0.0;
                        for l in 0..n {
                            let t = dg[i][comp_at(j, l)].data[node]
                                + dg[j][comp_at(i, l)].data[node]
                                - dg[l][comp_at(i, j)].data[node];
                            s += 0.5 * ginv.get(k, l) * t;
                        }
                        data[((node * n + k) * n + i) * n + j] = s;
                        data[((node * n + k) * n + j) * n + i] = s;
                    }
                }
            }
        }
        Ok(ChristoffelField { n, data })
    }

    /// First derivative along `axis`: central in the interior and on
    /// periodic axes, one-sided second-order at non-periodic edges.
    pub fn deriv1(&self, u: &ScalarField, axis: usize) -> Result<ScalarField> {
        self.check_field(u)?;
        let h = self.spacing[axis];
        let size = self.shape[axis];
        let mut out = ScalarField::zeros_like_len(self.shape.clone(), self.num_nodes());
        for node in 0..self.num_nodes() {
            let m = self.decode(node);
            let at = |off: isize| u.data[self.neighbor(&m, axis, off).unwrap()];
            let v = if self.periodic[axis] || (m[axis] > 0 && m[axis] < size - 1) {
                (at(1) - at(-1)) / (2.0 * h)
            } else if m[axis] == 0 {
                (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h)
            } else {
                (3.0 * at(0) - 4.0 * at(-1) + at(-2)) / (2.0 * h)
            };
            out.data[node] = v;
        }
        Ok(out)
    }

    /// Second derivative along `axis`: 3-point central in the interior,
    /// 4-point one-sided at non-periodic edges (second order, exact through
    /// cubics).
    pub fn deriv2(&self, u: &ScalarField, axis: usize) -> Result<ScalarField> {
        self.check_field(u)?;
        let h2 = self.spacing[axis] * self.spacing[axis];
        let size = self.shape[axis];
        let mut out = ScalarField::zeros_like_len(self.shape.clone(), self.num_nodes());
        for node in 0..self.num_nodes() {
            let m = self.decode(node);
            let at = |off: isize| u.data[self.neighbor(&m, axis, off).unwrap()];
            let v = if self.periodic[axis] || (m[axis] > 0 && m[axis] < size - 1) {
                (at(1) - 2.0 * at(0) + at(-1)) / h2
            } else if m[axis] == 0 {
                (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / h2
            } else {
                (2.0 * at(0) - 5.0 * at(-1) + 4.0 * at(-2) - at(-3)) / h2
            };
            out.data[node] = v;
        }
        Ok(out)
    }

    /// Per-axis partial derivatives of u.
    pub fn gradient(&self, u: &ScalarField) -> Result<Vec<ScalarField>> {
        (0..self.n).map(|a| self.deriv1(u, a)).collect()
    }

    /// Covariant Hessian field: D_ij u = d_ij u - Gamma^k_ij d_k u. Pure
    /// second derivatives use direct stencils; mixed ones compose the two
    /// first-derivative operators (a 4-point cross in the interior), which
    /// commutes, so the result is symmetric by construction.
    pub fn covariant_hessian(&self, u: &ScalarField) -> Result<SymMatrixField> {
        self.check_field(u)?;
        let n = self.n;
        let grads = self.gradient(u)?;
        let mut out = SymMatrixField::zeros(self);
        for i in 0..n {
            for j in i..n {
                let part = if i == j {
                    self.deriv2(u, i)?
                } else {
                    self.deriv1(&grads[j], i)?
                };
                for node in 0..self.num_nodes() {
                    out.set_entry(node, i, j, part.data[node]);
                }
            }
        }
        if let Some(chris) = &self.christoffel {
            for node in 0..self.num_nodes() {
                for i in 0..n {
                    for j in i..n {
                        let mut corr = 0.0;
                        for k in 0..n {
                            corr += chris.get(node, k, i, j) * grads[k].data[node];
                        }
                        let v = out.entry(node, i, j) - corr;
                        out.set_entry(node, i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Distance to the box boundary in the grid metric: exact for the flat
    /// metric, a first-order fast-marching Eikonal solve |grad d|_g = 1
    /// otherwise.
    pub fn boundary_distance(&self) -> Result<ScalarField> {
        if !self.has_boundary() {
            return Err(Error::Parameter(
                "all axes periodic: the grid has no boundary".into(),
            ));
        }
        if self.is_flat() {
            let mut d = ScalarField::zeros_like_len(self.shape.clone(), self.num_nodes());
            for node in 0..self.num_nodes() {
                let x = self.coords(node);
                let mut best = f64::INFINITY;
                for a in 0..self.n {
                    if self.periodic[a] {
                        continue;
                    }
                    let lo = self.origin[a];
                    let hi = self.origin[a] + self.spacing[a] * (self.shape[a] - 1) as f64;
                    best = best.min(x[a] - lo).min(hi - x[a]);
                }
                d.data[node] = best;
            }
            Ok(d)
        } else {
            self.fast_marching_distance()
        }
    }

    fn check_field(&self, u: &ScalarField) -> Result<()> {
        if u.shape != self.shape {
            return Err(Error::DimensionMismatch(format!(
                "field shape {:?} does not match grid {:?}",
                u.shape, self.shape
            )));
        }
        Ok(())
    }

    /// Upwind fast-marching solve of g^{ij} d_i d d_j d = 1 with d = 0 on
    /// the boundary. First-order accurate; cross-metric terms use the chosen
    /// upwind neighbors, with an axis-dropping fallback when causality
    /// fails.
    fn fast_marching_distance(&self) -> Result<ScalarField> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;

        #[derive(PartialEq)]
        struct HeapItem(f64, usize);
        impl Eq for HeapItem {}
        impl PartialOrd for HeapItem {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for HeapItem {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                self.0.partial_cmp(&other.0).unwrap().then(self.1.cmp(&other.1))
            }
        }

        let nodes = self.num_nodes();
        let mut dist = vec![f64::INFINITY; nodes];
        let mut known = vec![false; nodes];
        let mut heap: BinaryHeap<Reverse<HeapItem>> = BinaryHeap::new();
        for node in 0..nodes {
            if self.is_boundary(node) {
                dist[node] = 0.0;
                heap.push(Reverse(HeapItem(0.0, node)));
            }
        }

        let update = |node: usize, dist: &[f64], known: &[bool]| -> f64 {
            let m = self.decode(node);
            let ginv = self.metric_at(node).g_inv().clone();
            // upwind neighbor per axis: smaller known value wins
            let mut vals = Vec::new(); // (axis, value, sign)
            for a in 0..self.n {
                let mut best: Option<(f64, f64)> = None;
                for (off, sign) in [(-1isize, 1.0f64), (1, -1.0)] {
                    if let Some(nb) = self.neighbor(&m, a, off) {
                        if known[nb] && dist[nb].is_finite() {
                            if best.map_or(true, |(v, _)| dist[nb] < v) {
                                best = Some((dist[nb], sign));
                            }
                        }
                    }
                }
                if let Some((v, s)) = best {
                    vals.push((a, v, s));
                }
            }
            // try the full quadratic, dropping the largest-value axis on
            // causality failure
            let mut active = vals.clone();
            active.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
            while !active.is_empty() {
                let mut qa = 0.0;
                let mut qb = 0.0;
                let mut qc = -1.0;
                for &(a, va, sa) in &active {
                    for &(b, vb, sb) in &active {
                        let c = ginv.get(a, b) * sa * sb / (self.spacing[a] * self.spacing[b]);
                        qa += c;
                        qb -= c * (va + vb);
                        qc += c * va * vb;
                    }
                }
                let disc = qb * qb - 4.0 * qa * qc;
                if disc >= 0.0 && qa > 0.0 {
                    let x = (-qb + disc.sqrt()) / (2.0 * qa);
                    let vmax = active.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
                    if x >= vmax {
                        return x;
                    }
                }
                active.pop();
            }
            // single-axis fallback
            let mut best = f64::INFINITY;
            for &(a, va, _) in &vals {
                let gaa = ginv.get(a, a);
                if gaa > 0.0 {
                    best = best.min(va + self.spacing[a] / gaa.sqrt());
                }
            }
            best
        };

        while let Some(Reverse(HeapItem(d, node))) = heap.pop() {
            if known[node] || d > dist[node] {
                continue;
            }
            known[node] = true;
            let m = self.decode(node);
            for a in 0..self.n {
                for off in [-1isize, 1] {
                    if let Some(nb) = self.neighbor(&m, a, off) {
                        if known[nb] {
                            continue;
                        }
                        let cand = update(nb, &dist, &known);
                        if cand < dist[nb] {
                            dist[nb] = cand;
                            heap.push(Reverse(HeapItem(cand, nb)));
                        }
                    }
                }
            }
        }
        Ok(ScalarField {
            shape: self.shape.clone(),
            data: dist,
        })
    }
}

/// Grid function with one value per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    pub(crate) shape: Vec<usize>,
    pub(crate) data: Vec<f64>,
}

impl ScalarField {
    fn zeros_like_len(shape: Vec<usize>, len: usize) -> Self {
        ScalarField {
            shape,
            data: vec![0.0; len],
        }
    }

    pub fn zeros(grid: &MetricGrid) -> Self {
        Self::zeros_like_len(grid.shape().to_vec(), grid.num_nodes())
    }

    pub fn constant(grid: &MetricGrid, c: f64) -> Self {
        ScalarField {
            shape: grid.shape().to_vec(),
            data: vec![c; grid.num_nodes()],
        }
    }

    pub fn from_fn(grid: &MetricGrid, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        let mut out = Self::zeros(grid);
        for node in 0..grid.num_nodes() {
            out.data[node] = f(&grid.coords(node));
        }
        out
    }

    pub fn from_values(grid: &MetricGrid, data: Vec<f64>) -> Result<Self> {
        if data.len() != grid.num_nodes() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} nodes",
                data.len(),
                grid.num_nodes()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("field has non-finite values".into()));
        }
        Ok(ScalarField {
            shape: grid.shape().to_vec(),
            data,
        })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, node: usize) -> f64 {
        self.data[node]
    }

    #[inline]
    pub fn set(&mut self, node: usize, v: f64) {
        self.data[node] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn inf_norm(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.data.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// self + c * other
    pub fn axpy(&self, c: f64, other: &ScalarField) -> ScalarField {
        ScalarField {
            shape: self.shape.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }
}

/// Symmetric-matrix-valued grid function (packed upper triangle per node).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrixField {
    pub(crate) shape: Vec<usize>,
    pub(crate) n: usize,
    pub(crate) data: Vec<f64>,
}

impl SymMatrixField {
    pub fn zeros(grid: &MetricGrid) -> Self {
        let n = grid.dim();
        SymMatrixField {
            shape: grid.shape().to_vec(),
            n,
            data: vec![0.0; grid.num_nodes() * n * (n + 1) / 2],
        }
    }

    pub fn constant(grid: &MetricGrid, m: &SymMatrix) -> Self {
        let mut out = Self::zeros(grid);
        for node in 0..grid.num_nodes() {
            out.set_node(node, m);
        }
        out
    }

    pub fn from_fn(grid: &MetricGrid, mut f: impl FnMut(&[f64]) -> SymMatrix) -> Self {
        let mut out = Self::zeros(grid);
        for node in 0..grid.num_nodes() {
            out.set_node(node, &f(&grid.coords(node)));
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_nodes(&self) -> usize {
        self.data.len() / (self.n * (self.n + 1) / 2)
    }

    #[inline]
    fn tri(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    #[inline]
    pub fn entry(&self, node: usize, i: usize, j: usize) -> f64 {
        self.data[node * self.tri() + self.offset(i, j)]
    }

    #[inline]
    pub fn set_entry(&mut self, node: usize, i: usize, j: usize, v: f64) {
        let k = node * self.tri() + self.offset(i, j);
        self.data[k] = v;
    }

    pub fn node(&self, node: usize) -> SymMatrix {
        let t = self.tri();
        SymMatrix::from_packed(self.n, self.data[node * t..(node + 1) * t].to_vec())
            .expect("packed length")
    }

    pub fn set_node(&mut self, node: usize, m: &SymMatrix) {
        let t = self.tri();
        self.data[node * t..(node + 1) * t].copy_from_slice(m.packed());
    }

    /// node-wise self + c * other
    pub fn axpy(&self, c: f64, other: &SymMatrixField) -> SymMatrixField {
        SymMatrixField {
            shape: self.shape.clone(),
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }
}
