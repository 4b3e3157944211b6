//! Dirichlet solver for F(Hess u + chi) = psi with u = phi on the boundary:
//! damped Newton inside the admissibility cone with a GMRES inner solve,
//! driven by a continuation in psi anchored at a subsolution, plus the
//! estimate monitor and the boundary-strip barrier diagnostic.
//!
//! Admissibility is checked on the node-wise eigenvalues of the discrete
//! covariant Hessian (narrow second-order stencils, no wide monotone
//! schemes), which targets smooth data on desk-scale grids; expect trouble
//! near singular right-hand sides.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cone::Verdict;
use crate::error::{Error, Result};
use crate::grid::{MetricGrid, ScalarField, SymMatrixField};
use crate::krylov::{gmres, GmresOptions};
use crate::linalg::{Mat, SymMatrix};
use crate::matrix::{big_f_grad, eig_metric, eig_plain, MetricTensor};
use crate::symfun::{OperatorSpec, Spectrum};
use crate::verify::{verify_subsolution, Certificate, ConeTestOptions, SubsolutionMode};

/// A Dirichlet problem instance: operator, geometry, data fields, boundary
/// values and the subsolution used as anchor / initial guess. `ubar` is
/// expected to satisfy the pointwise inequality F(Hess ubar + chi) >= psi;
/// `continuity_solve` enforces this before marching (check_subsolution),
/// while `newton_solve` only needs an admissible start.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub op: OperatorSpec,
    pub grid: MetricGrid,
    pub chi: SymMatrixField,
    pub psi: ScalarField,
    /// Boundary data; only boundary-node entries are read.
    pub phi: ScalarField,
    pub ubar: ScalarField,
    /// Required pointwise gap psi > sup_dGamma f + delta.
    pub feasibility_delta: f64,
}

impl ProblemSpec {
    pub fn new(
        op: OperatorSpec,
        grid: MetricGrid,
        chi: SymMatrixField,
        psi: ScalarField,
        phi: ScalarField,
        ubar: ScalarField,
    ) -> Result<Self> {
        if op.n != grid.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator dimension {} vs grid dimension {}",
                op.n,
                grid.dim()
            )));
        }
        if !grid.has_boundary() {
            return Err(Error::Parameter(
                "the Dirichlet solver needs a non-periodic grid".into(),
            ));
        }
        let p = ProblemSpec {
            op,
            grid,
            chi,
            psi,
            phi,
            ubar,
            feasibility_delta: 1e-6,
        };
        p.check_feasibility()?;
        Ok(p)
    }

    /// psi > sup_dGamma f + delta pointwise.
    pub fn check_feasibility(&self) -> Result<()> {
        let floor = self.op.sup_boundary_f();
        if floor.is_finite() && self.psi.min() <= floor + self.feasibility_delta {
            return Err(Error::Parameter(format!(
                "psi reaches {:.6e}, within delta = {:.1e} of the boundary sup {:.6e}",
                self.psi.min(),
                self.feasibility_delta,
                floor
            )));
        }
        Ok(())
    }

    /// Inequality-mode subsolution certificate for ubar.
    pub fn check_subsolution(&self) -> Result<Certificate> {
        verify_subsolution(
            &self.ubar,
            &self.chi,
            &self.psi,
            &self.grid,
            &self.op,
            SubsolutionMode::Inequality19,
            &ConeTestOptions::default(),
        )
    }
}

/// Outcome and field statistics of a solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub converged: bool,
    pub residual_inf: f64,
    pub max_hess_interior: f64,
    pub max_hess_boundary: f64,
    pub max_grad: f64,
    pub newton_iters: usize,
    pub krylov_iters: usize,
    pub continuation_steps: usize,
    pub wall_time_s: f64,
}

/// One accepted continuation stage.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContinuationStep {
    pub t: f64,
    pub newton_iters: usize,
    pub residual: f64,
}

/// State of a continuation run (diagnostic; every accepted u_t is
/// admissible and Newton-converged to the stage tolerance).
#[derive(Debug, Clone)]
pub struct ContinuationState {
    pub t: f64,
    pub u: ScalarField,
    pub history: Vec<ContinuationStep>,
}

fn spectrum_at(grid: &MetricGrid, node: usize, m: &SymMatrix) -> Result<(Spectrum, Mat)> {
    if grid.is_flat() {
        eig_plain(m)
    } else {
        eig_metric(m, &grid.metric_at(node))
    }
}

/// Residual field: F(Hess u + chi) - psi at interior nodes, u - phi on
/// boundary rows. Errors name the first inadmissible node and its spectrum.
pub fn residual(u: &ScalarField, p: &ProblemSpec) -> Result<ScalarField> {
    let hess = p.grid.covariant_hessian(u)?;
    let big_u = hess.axpy(1.0, &p.chi);
    let mut r = ScalarField::zeros(&p.grid);
    for node in 0..p.grid.num_nodes() {
        if p.grid.is_boundary(node) {
            r.set(node, u.get(node) - p.phi.get(node));
            continue;
        }
        let (lam, _) = spectrum_at(&p.grid, node, &big_u.node(node))?;
        if let Some(violated) = p.op.cone.violated(&lam) {
            return Err(Error::NotAdmissible {
                violated,
                spectrum: lam.values().to_vec(),
                node: Some(node),
            });
        }
        r.set(node, p.op.eval(&lam)? - p.psi.get(node));
    }
    Ok(r)
}

/// Frozen linearization at a state u: coefficients F^{ij}(Hess u + chi) per
/// interior node and the diagonal preconditioner of the discrete operator.
struct Linearized {
    coeffs: SymMatrixField,
    diag: Vec<f64>,
}

fn assemble_linearized(u: &ScalarField, p: &ProblemSpec) -> Result<Linearized> {
    let hess = p.grid.covariant_hessian(u)?;
    let big_u = hess.axpy(1.0, &p.chi);
    let ident = MetricTensor::identity(p.op.n);
    let mut coeffs = SymMatrixField::zeros(&p.grid);
    let mut diag = vec![1.0; p.grid.num_nodes()];
    let h = p.grid.spacing().to_vec();
    for node in 0..p.grid.num_nodes() {
        if p.grid.is_boundary(node) {
            continue;
        }
        let fp = if p.grid.is_flat() {
            big_f_grad(&big_u.node(node), &ident, &p.op)?
        } else {
            big_f_grad(&big_u.node(node), &p.grid.metric_at(node), &p.op)?
        };
        // center coefficient of the discrete operator: only the pure second
        // derivatives touch the center node
        let mut d = 0.0;
        for a in 0..p.op.n {
            d += fp.get(a, a) * (-2.0 / (h[a] * h[a]));
        }
        diag[node] = d;
        coeffs.set_node(node, &fp);
    }
    Ok(Linearized { coeffs, diag })
}

/// How boundary rows of the discrete linearized operator behave: zero rows
/// for the public PDE-part operator, identity rows inside Newton's coupled
/// system where boundary values are unknowns.
#[derive(Clone, Copy, PartialEq)]
enum BoundaryRows {
    Zero,
    Identity,
}

fn apply_linearized(
    lin: &Linearized,
    p: &ProblemSpec,
    v: &ScalarField,
    boundary: BoundaryRows,
) -> Result<ScalarField> {
    let hess = p.grid.covariant_hessian(v)?;
    let mut out = ScalarField::zeros(&p.grid);
    let n = p.op.n;
    for node in 0..p.grid.num_nodes() {
        if p.grid.is_boundary(node) {
            if boundary == BoundaryRows::Identity {
                out.set(node, v.get(node));
            }
            continue;
        }
        let mut s = 0.0;
        for i in 0..n {
            s += lin.coeffs.entry(node, i, i) * hess.entry(node, i, i);
            for j in i + 1..n {
                s += 2.0 * lin.coeffs.entry(node, i, j) * hess.entry(node, i, j);
            }
        }
        out.set(node, s);
    }
    Ok(out)
}

/// Linearized operator v -> F^{ij}(Hess u + chi) D_ij v at interior nodes,
/// zero on boundary rows.
pub fn linearized_apply(u: &ScalarField, p: &ProblemSpec, v: &ScalarField) -> Result<ScalarField> {
    let lin = assemble_linearized(u, p)?;
    apply_linearized(&lin, p, v, BoundaryRows::Zero)
}

/// Options of the damped Newton loop.
#[derive(Debug, Clone)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub krylov: GmresOptions,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-10,
            max_iters: 50,
            krylov: GmresOptions::default(),
        }
    }
}

struct NewtonOutcome {
    u: ScalarField,
    residual_inf: f64,
    newton_iters: usize,
    krylov_iters: usize,
}

/// Damped Newton against a caller-chosen right-hand side psi (which the
/// continuation varies). Boundary values are unknowns of the coupled system
/// (identity rows carrying u - phi), so a mismatched initial trace is
/// absorbed by damped steps that move interior and boundary together
/// instead of clamping, which would kink the Hessian at the boundary ring.
fn newton_loop(
    p: &ProblemSpec,
    psi: &ScalarField,
    u0: &ScalarField,
    opts: &NewtonOptions,
) -> Result<NewtonOutcome> {
    let mut prob = p.clone();
    prob.psi = psi.clone();
    let mut u = u0.clone();
    let mut r = residual(&u, &prob)?;
    let mut r_norm = r.inf_norm();
    let mut newton_iters = 0usize;
    let mut krylov_iters = 0usize;
    while r_norm > opts.tol {
        if newton_iters >= opts.max_iters {
            return Err(Error::Nonconvergence {
                stage: "newton".into(),
                residual: r_norm,
                last_t: None,
            });
        }
        newton_iters += 1;
        let lin = assemble_linearized(&u, &prob)?;
        let b: Vec<f64> = r.values().iter().map(|v| -v).collect();
        let mut delta = vec![0.0; b.len()];
        let stats = gmres(
            |x, y| {
                let xf = ScalarField {
                    shape: u.shape.clone(),
                    data: x.to_vec(),
                };
                let out =
                    apply_linearized(&lin, &prob, &xf, BoundaryRows::Identity).expect("apply");
                y.copy_from_slice(out.values());
            },
            &b,
            &mut delta,
            &lin.diag,
            &opts.krylov,
        )?;
        krylov_iters += stats.iters;
        // line search: largest dyadic step that stays admissible and
        // reduces the sup-norm residual
        let mut alpha = 1.0f64;
        let mut accepted = false;
        for _ in 0..=20 {
            let mut u_try = u.clone();
            for (ui, di) in u_try.values_mut().iter_mut().zip(&delta) {
                *ui += alpha * di;
            }
            match residual(&u_try, &prob) {
                Ok(r_try) => {
                    let t_norm = r_try.inf_norm();
                    if t_norm < r_norm {
                        u = u_try;
                        r = r_try;
                        r_norm = t_norm;
                        accepted = true;
                        break;
                    }
                }
                Err(Error::NotAdmissible { .. }) => {}
                Err(e) => return Err(e),
            }
            alpha *= 0.5;
        }
        if !accepted {
            return Err(Error::Nonconvergence {
                stage: "newton line search".into(),
                residual: r_norm,
                last_t: None,
            });
        }
    }
    Ok(NewtonOutcome {
        u,
        residual_inf: r_norm,
        newton_iters,
        krylov_iters,
    })
}

/// Damped Newton solve from the admissible initial guess u0 (its boundary
/// entries are overwritten by phi).
pub fn newton_solve(
    p: &ProblemSpec,
    u0: &ScalarField,
    tol: f64,
    max_iters: usize,
) -> Result<(ScalarField, SolveReport)> {
    let opts = NewtonOptions {
        tol,
        max_iters,
        ..Default::default()
    };
    newton_solve_with(p, u0, &opts)
}

pub fn newton_solve_with(
    p: &ProblemSpec,
    u0: &ScalarField,
    opts: &NewtonOptions,
) -> Result<(ScalarField, SolveReport)> {
    let start = Instant::now();
    let out = newton_loop(p, &p.psi, u0, opts)?;
    let est = estimate_monitor(&out.u, p)?;
    Ok((
        out.u,
        SolveReport {
            converged: true,
            residual_inf: out.residual_inf,
            max_hess_interior: est.max_hess_interior,
            max_hess_boundary: est.max_hess_boundary,
            max_grad: est.max_grad,
            newton_iters: out.newton_iters,
            krylov_iters: out.krylov_iters,
            continuation_steps: 0,
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    ))
}

/// Continuation in the right-hand side: psi_t = t psi + (1-t) F(Hess ubar +
/// chi), marched adaptively from t = 0 (where ubar solves the equation
/// exactly) to t = 1, warm-starting Newton at each stage. The subsolution
/// inequality F(Hess ubar + chi) >= psi makes ubar a subsolution of every
/// stage. When the trace of ubar does not match phi, the boundary mismatch
/// is ramped down along the same parameter (phi_t = t phi + (1-t) ubar), so
/// t = 0 keeps its exact anchor; for matched traces this is a no-op and the
/// homotopy is in psi alone.
pub fn continuity_solve(
    p: &ProblemSpec,
    steps: usize,
    tol: f64,
) -> Result<(ScalarField, SolveReport)> {
    let start = Instant::now();
    let sub = p.check_subsolution()?;
    if !sub.passed() {
        return Err(Error::Parameter(format!(
            "ubar is not a subsolution: margin {:.6e} at node {:?}",
            sub.margin,
            sub.witnesses.first().and_then(|w| w.node)
        )));
    }
    // psi at t = 0: the operator value of the subsolution
    let hess = p.grid.covariant_hessian(&p.ubar)?;
    let big_u = hess.axpy(1.0, &p.chi);
    let mut psi0 = ScalarField::zeros(&p.grid);
    for node in 0..p.grid.num_nodes() {
        let (lam, _) = spectrum_at(&p.grid, node, &big_u.node(node))?;
        psi0.set(node, p.op.eval(&lam)?);
    }

    let opts = NewtonOptions {
        tol,
        max_iters: 50,
        ..Default::default()
    };
    let dt_init = 1.0 / steps.max(1) as f64;
    let mut dt = dt_init;
    let mut state = ContinuationState {
        t: 0.0,
        u: p.ubar.clone(),
        history: Vec::new(),
    };
    let mut krylov_iters = 0usize;
    let mut newton_iters = 0usize;

    let stage_problem = |t: f64| -> ProblemSpec {
        let mut q = p.clone();
        for node in 0..p.grid.num_nodes() {
            q.psi
                .set(node, t * p.psi.get(node) + (1.0 - t) * psi0.get(node));
            if p.grid.is_boundary(node) {
                q.phi
                    .set(node, t * p.phi.get(node) + (1.0 - t) * p.ubar.get(node));
            }
        }
        q
    };

    // t = 0 stage: ubar is the exact solution; a zero-iteration check
    {
        let q0 = stage_problem(0.0);
        let out = newton_loop(&q0, &q0.psi, &state.u, &opts)?;
        newton_iters += out.newton_iters;
        krylov_iters += out.krylov_iters;
        state.u = out.u;
        state.history.push(ContinuationStep {
            t: 0.0,
            newton_iters: out.newton_iters,
            residual: out.residual_inf,
        });
    }

    while state.t < 1.0 {
        let t_next = (state.t + dt).min(1.0);
        let q = stage_problem(t_next);
        match newton_loop(&q, &q.psi, &state.u, &opts) {
            Ok(out) => {
                newton_iters += out.newton_iters;
                krylov_iters += out.krylov_iters;
                state.u = out.u;
                state.t = t_next;
                state.history.push(ContinuationStep {
                    t: t_next,
                    newton_iters: out.newton_iters,
                    residual: out.residual_inf,
                });
                dt = (dt * 2.0).min(dt_init);
            }
            Err(Error::Nonconvergence { .. }) | Err(Error::LinearSolve { .. }) => {
                dt *= 0.5;
                if dt < 1e-4 {
                    return Err(Error::Nonconvergence {
                        stage: "continuation".into(),
                        residual: f64::NAN,
                        last_t: Some(state.t),
                    });
                }
            }
            Err(e) => return Err(e),
        }
    }

    let est = estimate_monitor(&state.u, p)?;
    let final_res = {
        let r = residual(&state.u, p)?;
        r.inf_norm()
    };
    Ok((
        state.u.clone(),
        SolveReport {
            converged: true,
            residual_inf: final_res,
            max_hess_interior: est.max_hess_interior,
            max_hess_boundary: est.max_hess_boundary,
            max_grad: est.max_grad,
            newton_iters,
            krylov_iters,
            continuation_steps: state.history.len(),
            wall_time_s: start.elapsed().as_secs_f64(),
        },
    ))
}

/// Field statistics entering the a priori estimate monitor.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EstimateReport {
    pub max_hess_interior: f64,
    pub max_hess_boundary: f64,
    pub max_grad: f64,
}

/// Metric norms of Hess u and grad u: interior and boundary maxima of the
/// Frobenius norm of gamma H gamma and the maximum of |grad u|_g. Boundary
/// values use the grid's one-sided stencils.
pub fn estimate_monitor(u: &ScalarField, p: &ProblemSpec) -> Result<EstimateReport> {
    let hess = p.grid.covariant_hessian(u)?;
    let grads = p.grid.gradient(u)?;
    let n = p.op.n;
    let mut max_int = 0.0f64;
    let mut max_bnd = 0.0f64;
    let mut max_grad = 0.0f64;
    for node in 0..p.grid.num_nodes() {
        let (hnorm, gnorm) = if p.grid.is_flat() {
            let h = hess.node(node);
            let mut g2 = 0.0;
            for a in 0..n {
                g2 += grads[a].get(node) * grads[a].get(node);
            }
            (h.frobenius(), g2.sqrt())
        } else {
            let m = p.grid.metric_at(node);
            let h = hess.node(node).sandwich(m.gamma());
            let mut g2 = 0.0;
            for a in 0..n {
                for b in 0..n {
                    g2 += m.g_inv().get(a, b) * grads[a].get(node) * grads[b].get(node);
                }
            }
            (h.frobenius(), g2.sqrt())
        };
        if p.grid.is_boundary(node) {
            max_bnd = max_bnd.max(hnorm);
        } else {
            max_int = max_int.max(hnorm);
        }
        max_grad = max_grad.max(gnorm);
    }
    Ok(EstimateReport {
        max_hess_interior: max_int,
        max_hess_boundary: max_bnd,
        max_grad,
    })
}

/// Outcome of the boundary-strip barrier diagnostic for
/// v = (u - ubar) + t d - N d^2 / 2 on the strip {d < delta}:
/// `min_v` over the strip closure (nonnegativity part) and the largest
/// epsilon with F^{ij} D_ij v <= -epsilon (1 + sum F^{ii}) on the strip.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BarrierCertificate {
    pub t: f64,
    pub n_coeff: f64,
    pub delta: f64,
    pub min_v: f64,
    pub epsilon: f64,
    pub strip_nodes: usize,
    pub nonneg: Verdict,
    pub decay: Verdict,
    pub verdict: Verdict,
}

/// Barrier diagnostic at a solved state u with the subsolution ubar.
/// Requires delta <= 2 t / N (so the distance part of v is nonnegative on
/// the strip); N = 0 imposes no constraint.
pub fn barrier_check(
    u: &ScalarField,
    ubar: &ScalarField,
    p: &ProblemSpec,
    t: f64,
    n_coeff: f64,
    delta: f64,
) -> Result<BarrierCertificate> {
    if t < 0.0 || n_coeff < 0.0 || delta <= 0.0 {
        return Err(Error::Parameter(
            "barrier needs t >= 0, N >= 0 and delta > 0".into(),
        ));
    }
    if n_coeff > 0.0 && delta > 2.0 * t / n_coeff {
        return Err(Error::Parameter(format!(
            "delta = {delta} exceeds 2t/N = {}",
            2.0 * t / n_coeff
        )));
    }
    let d = p.grid.boundary_distance()?;
    let mut v = ScalarField::zeros(&p.grid);
    for node in 0..p.grid.num_nodes() {
        let dn = d.get(node);
        v.set(
            node,
            u.get(node) - ubar.get(node) + t * dn - 0.5 * n_coeff * dn * dn,
        );
    }
    // part (a): min over the strip closure {d <= delta}
    let mut min_v = f64::INFINITY;
    for node in 0..p.grid.num_nodes() {
        if d.get(node) <= delta {
            min_v = min_v.min(v.get(node));
        }
    }
    // part (b): largest epsilon with L v <= -eps (1 + sum F^{ii}) over
    // interior strip nodes, with F^{ij} frozen at the solved state
    let lin = assemble_linearized(u, p)?;
    let lv = apply_linearized(&lin, p, &v, BoundaryRows::Zero)?;
    let mut eps = f64::INFINITY;
    let mut strip_nodes = 0usize;
    for node in 0..p.grid.num_nodes() {
        if p.grid.is_boundary(node) || d.get(node) >= delta {
            continue;
        }
        strip_nodes += 1;
        let mut trace = 0.0;
        for a in 0..p.op.n {
            trace += lin.coeffs.entry(node, a, a);
        }
        eps = eps.min(-lv.get(node) / (1.0 + trace));
    }
    if strip_nodes == 0 {
        return Err(Error::Parameter(format!(
            "no interior nodes inside the strip d < {delta}"
        )));
    }
    let scale = 1.0 + u.inf_norm().max(ubar.inf_norm());
    let nonneg = min_v >= -1e-10 * scale;
    let decay = eps > 0.0;
    let as_verdict = |b: bool| if b { Verdict::Pass } else { Verdict::Fail };
    Ok(BarrierCertificate {
        t,
        n_coeff,
        delta,
        min_v,
        epsilon: eps,
        strip_nodes,
        nonneg: as_verdict(nonneg),
        decay: as_verdict(decay),
        verdict: as_verdict(nonneg && decay),
    })
}

/// One row of the psi-amplitude sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub s: f64,
    pub max_hess_interior: f64,
    pub max_hess_boundary: f64,
    pub max_grad: f64,
    pub residual: f64,
    pub iters: usize,
}

/// Sweep summary: rows per amplitude and the empirical constant
/// max over the family of max_M |Hess u| / (1 + max_dM |Hess u|).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub empirical_c1: f64,
}

/// Solve the family psi_s = (1-s) floor + s psi for s on a uniform grid of
/// `n_steps` points, warm-starting each stage, and report the estimate
/// ratios.
pub fn sweep_psi_amplitude(
    p: &ProblemSpec,
    floor: &ScalarField,
    n_steps: usize,
    tol: f64,
) -> Result<SweepReport> {
    if n_steps < 2 {
        return Err(Error::Parameter("sweep needs at least two steps".into()));
    }
    let opts = NewtonOptions {
        tol,
        max_iters: 50,
        ..Default::default()
    };
    let mut rows = Vec::new();
    let mut c1 = 0.0f64;
    let mut u = p.ubar.clone();
    for i in 0..n_steps {
        let s = i as f64 / (n_steps - 1) as f64;
        let mut psi_s = ScalarField::zeros(&p.grid);
        for node in 0..p.grid.num_nodes() {
            psi_s.set(node, (1.0 - s) * floor.get(node) + s * p.psi.get(node));
        }
        let out = newton_loop(p, &psi_s, &u, &opts)?;
        u = out.u;
        let est = {
            let mut q = p.clone();
            q.psi = psi_s;
            estimate_monitor(&u, &q)?
        };
        let ratio = est.max_hess_interior / (1.0 + est.max_hess_boundary);
        c1 = c1.max(ratio);
        rows.push(SweepRow {
            s,
            max_hess_interior: est.max_hess_interior,
            max_hess_boundary: est.max_hess_boundary,
            max_grad: est.max_grad,
            residual: out.residual_inf,
            iters: out.newton_iters,
        });
    }
    Ok(SweepReport {
        rows,
        empirical_c1: c1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::MetricGrid;

    fn unit_square(nodes: usize) -> MetricGrid {
        MetricGrid::flat(&[nodes, nodes], &[0.0, 0.0], &[1.0, 1.0], &[false, false]).unwrap()
    }

    /// sqrt(det) problem with exact quadratic solution |x|^2/2 and psi = 1.
    fn quadratic_problem(nodes: usize) -> (ProblemSpec, ScalarField) {
        let grid = unit_square(nodes);
        let op = OperatorSpec::sigma_root(2, 2).unwrap();
        let u_star = ScalarField::from_fn(&grid, |x| 0.5 * (x[0] * x[0] + x[1] * x[1]));
        let p = ProblemSpec::new(
            op,
            grid.clone(),
            SymMatrixField::zeros(&grid),
            ScalarField::constant(&grid, 1.0),
            u_star.clone(),
            u_star.clone(),
        )
        .unwrap();
        (p, u_star)
    }

    #[test]
    fn residual_examples() {
        let (p, u_star) = quadratic_problem(9);
        let r = residual(&u_star, &p).unwrap();
        assert!(r.inf_norm() < 1e-11);

        let mut p2 = p.clone();
        p2.psi = ScalarField::constant(&p.grid, 2.0);
        let r = residual(&u_star, &p2).unwrap();
        for node in 0..p.grid.num_nodes() {
            if !p.grid.is_boundary(node) {
                assert!((r.get(node) + 1.0).abs() < 1e-11);
            }
        }

        // chi = identity, u = 0, sigma_1, psi = n
        let grid = unit_square(9);
        let lin = OperatorSpec::linear(2).unwrap();
        let chi = SymMatrixField::constant(&grid, &SymMatrix::identity(2));
        let p3 = ProblemSpec::new(
            lin,
            grid.clone(),
            chi,
            ScalarField::constant(&grid, 2.0),
            ScalarField::zeros(&grid),
            ScalarField::zeros(&grid),
        )
        .unwrap();
        let r = residual(&ScalarField::zeros(&grid), &p3).unwrap();
        assert!(r.inf_norm() < 1e-11);
    }

    #[test]
    fn residual_names_inadmissible_node() {
        let (p, _) = quadratic_problem(9);
        let saddle = ScalarField::from_fn(&p.grid, |x| x[0] * x[0] - x[1] * x[1]);
        match residual(&saddle, &p) {
            Err(Error::NotAdmissible { node, .. }) => assert!(node.is_some()),
            other => panic!("expected admissibility error, got {other:?}"),
        }
    }

    #[test]
    fn linearized_examples() {
        let grid = unit_square(9);
        let lin = OperatorSpec::linear(2).unwrap();
        let p = ProblemSpec::new(
            lin,
            grid.clone(),
            SymMatrixField::zeros(&grid),
            ScalarField::constant(&grid, 1.0),
            ScalarField::zeros(&grid),
            ScalarField::zeros(&grid),
        )
        .unwrap();
        // sigma_1 linearization is the Laplacian: v = x^2 -> 2 at interior
        let u = ScalarField::from_fn(&grid, |x| 0.5 * (x[0] * x[0] + x[1] * x[1]));
        let v = ScalarField::from_fn(&grid, |x| x[0] * x[0]);
        let lv = linearized_apply(&u, &p, &v).unwrap();
        for node in 0..grid.num_nodes() {
            let want = if grid.is_boundary(node) { 0.0 } else { 2.0 };
            assert!((lv.get(node) - want).abs() < 1e-11);
        }
        // constants map to zero
        let c = ScalarField::constant(&grid, 3.7);
        let lv = linearized_apply(&u, &p, &c).unwrap();
        assert!(lv.inf_norm() < 1e-12);
    }

    #[test]
    fn linearized_symmetric_for_constant_diagonal_coeffs() {
        // discrete summation-by-parts: with spatially constant diagonal
        // coefficients and homogeneous boundary data the operator matrix is
        // symmetric
        let grid = unit_square(9);
        let p = ProblemSpec::new(
            OperatorSpec::linear(2).unwrap(),
            grid.clone(),
            SymMatrixField::zeros(&grid),
            ScalarField::constant(&grid, 1.0),
            ScalarField::zeros(&grid),
            ScalarField::zeros(&grid),
        )
        .unwrap();
        let lin = Linearized {
            coeffs: SymMatrixField::constant(
                &grid,
                &SymMatrix::from_fn(2, |i, j| if i == j { (i + 2) as f64 } else { 0.0 }),
            ),
            diag: vec![1.0; grid.num_nodes()],
        };
        let mut s = 0.9f64;
        let mut next = || {
            s = (s * 613.3 + 0.17).fract();
            s - 0.5
        };
        let mut v = ScalarField::zeros(&grid);
        let mut w = ScalarField::zeros(&grid);
        for node in 0..grid.num_nodes() {
            if !grid.is_boundary(node) {
                v.set(node, next());
                w.set(node, next());
            }
        }
        let lv = apply_linearized(&lin, &p, &v, BoundaryRows::Zero).unwrap();
        let lw = apply_linearized(&lin, &p, &w, BoundaryRows::Zero).unwrap();
        let a: f64 = lv.values().iter().zip(w.values()).map(|(x, y)| x * y).sum();
        let b: f64 = v.values().iter().zip(lw.values()).map(|(x, y)| x * y).sum();
        assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()), "{a} vs {b}");
    }

    #[test]
    fn newton_exact_start_needs_no_iterations() {
        let (p, u_star) = quadratic_problem(9);
        let (u, report) = newton_solve(&p, &u_star, 1e-10, 10).unwrap();
        assert_eq!(report.newton_iters, 0);
        assert!((u.values()[40] - u_star.values()[40]).abs() < 1e-12);
    }

    #[test]
    fn newton_three_dimensional_quadratic() {
        // sigma_2 in n = 3 with exact quadratic solution; scaled start
        let grid =
            MetricGrid::flat(&[9, 9, 9], &[0.0; 3], &[1.0; 3], &[false; 3]).unwrap();
        let op = OperatorSpec::sigma_root(2, 3).unwrap();
        let u_star = ScalarField::from_fn(&grid, |x| {
            0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
        });
        let p = ProblemSpec::new(
            op,
            grid.clone(),
            SymMatrixField::zeros(&grid),
            ScalarField::constant(&grid, 3f64.sqrt()),
            u_star.clone(),
            u_star.clone(),
        )
        .unwrap();
        let u0 = ScalarField::from_fn(&grid, |x| {
            0.45 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
        });
        let (u, report) = newton_solve(&p, &u0, 1e-10, 30).unwrap();
        assert!(report.converged);
        let mut err = 0.0f64;
        for node in 0..grid.num_nodes() {
            err = err.max((u.get(node) - u_star.get(node)).abs());
        }
        assert!(err < 1e-9, "error {err}");
    }

    /// Manufactured solution u* = exp((x^2+y^2)/2) of sqrt(det Hess u) = psi
    /// with psi = exp(r^2/2) sqrt(1 + r^2).
    fn manufactured(nodes: usize) -> (ProblemSpec, ScalarField) {
        let grid = unit_square(nodes);
        let op = OperatorSpec::sigma_root(2, 2).unwrap();
        let u_star = ScalarField::from_fn(&grid, |x| (0.5 * (x[0] * x[0] + x[1] * x[1])).exp());
        let psi = ScalarField::from_fn(&grid, |x| {
            let r2 = x[0] * x[0] + x[1] * x[1];
            (0.5 * r2).exp() * (1.0 + r2).sqrt()
        });
        let ubar = ScalarField::from_fn(&grid, |x| 4.0 * (x[0] * x[0] + x[1] * x[1]));
        let p = ProblemSpec::new(
            op,
            grid.clone(),
            SymMatrixField::zeros(&grid),
            psi,
            u_star.clone(),
            ubar,
        )
        .unwrap();
        (p, u_star)
    }

    #[test]
    fn newton_manufactured_small_grid() {
        let (p, u_star) = manufactured(17);
        let (u, report) = newton_solve(&p, &p.ubar.clone(), 1e-10, 50).unwrap();
        assert!(report.converged);
        let mut err = 0.0f64;
        for node in 0..p.grid.num_nodes() {
            err = err.max((u.get(node) - u_star.get(node)).abs());
        }
        // discretization error at h = 1/16
        assert!(err < 5e-3, "error {err}");
    }

    #[test]
    fn continuity_trivial_when_ubar_solves() {
        let (p, u_star) = quadratic_problem(9);
        let (u, report) = continuity_solve(&p, 4, 1e-10).unwrap();
        assert!(report.converged);
        assert_eq!(report.newton_iters, 0);
        let mut err = 0.0f64;
        for node in 0..p.grid.num_nodes() {
            err = err.max((u.get(node) - u_star.get(node)).abs());
        }
        assert!(err < 1e-12);
    }

    #[test]
    fn continuity_matches_newton_path_independence() {
        let (p, _) = manufactured(17);
        let (u_newton, _) = newton_solve(&p, &p.ubar.clone(), 1e-11, 50).unwrap();
        let (u_cont, report) = continuity_solve(&p, 4, 1e-11).unwrap();
        assert!(report.continuation_steps >= 2);
        let mut diff = 0.0f64;
        for node in 0..p.grid.num_nodes() {
            diff = diff.max((u_newton.get(node) - u_cont.get(node)).abs());
        }
        assert!(diff < 1e-8, "paths differ by {diff}");
    }

    #[test]
    fn solver_requires_a_boundary() {
        let grid =
            MetricGrid::flat(&[9, 9], &[0.0, 0.0], &[1.0, 1.0], &[true, true]).unwrap();
        let u = ScalarField::zeros(&grid);
        assert!(matches!(
            ProblemSpec::new(
                OperatorSpec::linear(2).unwrap(),
                grid.clone(),
                SymMatrixField::zeros(&grid),
                ScalarField::constant(&grid, 1.0),
                u.clone(),
                u,
            ),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn continuity_rejects_infeasible_psi() {
        let (p, _) = quadratic_problem(9);
        let mut bad = p.clone();
        bad.psi = ScalarField::constant(&p.grid, 0.0);
        assert!(bad.check_feasibility().is_err());
        // and a non-subsolution ubar is rejected by the gate
        let mut bad2 = p.clone();
        bad2.psi = ScalarField::constant(&p.grid, 1.5);
        assert!(matches!(
            continuity_solve(&bad2, 4, 1e-10),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn estimate_monitor_examples() {
        let (p, u_star) = quadratic_problem(17);
        let est = estimate_monitor(&u_star, &p).unwrap();
        let sqrt2 = 2f64.sqrt();
        assert!((est.max_hess_interior - sqrt2).abs() < 1e-10);
        assert!((est.max_hess_boundary - sqrt2).abs() < 1e-10);
        // |grad u| = |x| peaks at the far corner
        assert!((est.max_grad - sqrt2).abs() < 1e-10);

        let zero = ScalarField::zeros(&p.grid);
        let est = estimate_monitor(&zero, &p).unwrap();
        assert_eq!(est.max_hess_interior, 0.0);
        assert_eq!(est.max_grad, 0.0);
    }

    #[test]
    fn barrier_degenerate_and_gate() {
        let (p, u_star) = quadratic_problem(17);
        // u = ubar, t = 1, N = 0: v = d >= 0
        let cert = barrier_check(&u_star, &u_star, &p, 1.0, 0.0, 0.25).unwrap();
        assert_eq!(cert.nonneg, Verdict::Pass);
        assert!(cert.min_v >= -1e-12);

        assert!(matches!(
            barrier_check(&u_star, &u_star, &p, 0.1, 100.0, 0.25),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn barrier_strict_subsolution_gives_positive_epsilon() {
        let (p, _) = manufactured(17);
        // strict subsolution below the boundary data
        let ubar_b =
            ScalarField::from_fn(&p.grid, |x| 4.0 * (x[0] * x[0] + x[1] * x[1]) - 6.0);
        let mut p2 = p.clone();
        p2.ubar = ubar_b.clone();
        assert!(p2.check_subsolution().unwrap().passed());
        let (u, _) = newton_solve(&p2, &p2.ubar.clone(), 1e-10, 50).unwrap();
        // comparison ordering
        for node in 0..p.grid.num_nodes() {
            assert!(u.get(node) >= ubar_b.get(node) - 1e-8 * (1.0 + u.inf_norm()));
        }
        let cert = barrier_check(&u, &ubar_b, &p2, 0.5, 1.0, 0.25).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass, "{cert:?}");
        assert!(cert.epsilon > 0.0);
    }

    #[test]
    fn sweep_reports_bounded_ratio() {
        let (p, _) = manufactured(17);
        let floor = ScalarField::constant(&p.grid, 1.0);
        let report = sweep_psi_amplitude(&p, &floor, 5, 1e-9).unwrap();
        assert_eq!(report.rows.len(), 5);
        assert!(report.empirical_c1.is_finite());
        let ratios: Vec<f64> = report
            .rows
            .iter()
            .map(|r| r.max_hess_interior / (1.0 + r.max_hess_boundary))
            .collect();
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(0.0f64, f64::max);
        assert!(hi / lo < 2.0, "ratio spread {lo}..{hi}");
    }
}
