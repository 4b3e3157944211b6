//! Degenerate-direction guard: with the linear family the solver reduces to
//! a Poisson solve, recovered here to solver tolerance in one Newton step.
//!
//! Run with: cargo run --release --example poisson_regression

use hesseq::grid::{MetricGrid, ScalarField, SymMatrixField};
use hesseq::solver::{newton_solve, residual, ProblemSpec};
use hesseq::symfun::OperatorSpec;

fn main() -> hesseq::Result<()> {
    let nodes = 65usize;
    let grid = MetricGrid::flat(&[nodes, nodes], &[0.0, 0.0], &[1.0, 1.0], &[false, false])?;
    // u* = x^4 + y^4 + xy + (x^2 + y^2)/2 has Laplacian 12(x^2+y^2) + 2,
    // bounded away from the Gamma_1 boundary
    let u_star = ScalarField::from_fn(&grid, |x| {
        x[0].powi(4) + x[1].powi(4) + x[0] * x[1] + 0.5 * (x[0] * x[0] + x[1] * x[1])
    });
    let psi = ScalarField::from_fn(&grid, |x| 12.0 * (x[0] * x[0] + x[1] * x[1]) + 2.0);
    let p = ProblemSpec::new(
        OperatorSpec::linear(2)?,
        grid.clone(),
        SymMatrixField::zeros(&grid),
        psi,
        u_star.clone(),
        ScalarField::from_fn(&grid, |x| 8.0 * (x[0] * x[0] + x[1] * x[1])),
    )?;

    let (u, report) = newton_solve(&p, &p.ubar.clone(), 1e-11, 20)?;
    println!(
        "linear family solve: {} newton step(s), {} krylov iterations, residual {:.3e}",
        report.newton_iters, report.krylov_iters, report.residual_inf
    );

    let mut err = 0.0f64;
    for node in 0..grid.num_nodes() {
        err = err.max((u.get(node) - u_star.get(node)).abs());
    }
    println!("|u - u*|_inf = {err:.3e} (discretization error of the quartic term)");
    println!(
        "discrete residual at u*: {:.3e}",
        residual(&u_star, &p)?.inf_norm()
    );
    Ok(())
}
