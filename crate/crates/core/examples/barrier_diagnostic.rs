//! Boundary-strip barrier diagnostic: after a solve with a strict
//! subsolution lying below the boundary data, the function
//! v = (u - ubar) + t d - N d^2/2 is nonnegative on the strip and its
//! linearized image is uniformly negative, with a certified epsilon.
//!
//! Run with: cargo run --release --example barrier_diagnostic

use hesseq::grid::{MetricGrid, ScalarField, SymMatrixField};
use hesseq::jsonfmt::to_json;
use hesseq::solver::{barrier_check, newton_solve, ProblemSpec};
use hesseq::symfun::OperatorSpec;

fn main() -> hesseq::Result<()> {
    let nodes = 33usize;
    let grid = MetricGrid::flat(&[nodes, nodes], &[0.0, 0.0], &[1.0, 1.0], &[false, false])?;
    let u_star = ScalarField::from_fn(&grid, |x| (0.5 * (x[0] * x[0] + x[1] * x[1])).exp());
    let psi = ScalarField::from_fn(&grid, |x| {
        let r2 = x[0] * x[0] + x[1] * x[1];
        (0.5 * r2).exp() * (1.0 + r2).sqrt()
    });
    // strict subsolution shifted below the boundary data, so the comparison
    // ordering u >= ubar holds up to the boundary
    let ubar = ScalarField::from_fn(&grid, |x| 4.0 * (x[0] * x[0] + x[1] * x[1]) - 6.0);
    let p = ProblemSpec::new(
        OperatorSpec::sigma_root(2, 2)?,
        grid.clone(),
        SymMatrixField::zeros(&grid),
        psi,
        u_star,
        ubar.clone(),
    )?;

    let sub = p.check_subsolution()?;
    println!("subsolution margin {:.4} ({:?})", sub.margin, sub.verdict);

    let (u, report) = newton_solve(&p, &p.ubar.clone(), 1e-10, 60)?;
    println!(
        "solved: residual {:.3e} after {} newton iterations",
        report.residual_inf, report.newton_iters
    );

    // comparison principle, discretely
    let mut min_gap = f64::INFINITY;
    for node in 0..grid.num_nodes() {
        min_gap = min_gap.min(u.get(node) - ubar.get(node));
    }
    println!("min (u - ubar) over the grid: {min_gap:.6} (>= 0)");

    let (t, n_coeff, delta) = (0.5, 1.0, 0.25);
    let cert = barrier_check(&u, &ubar, &p, t, n_coeff, delta)?;
    println!(
        "\nbarrier with (t, N, delta) = ({t}, {n_coeff}, {delta}), delta <= 2t/N = {}:",
        2.0 * t / n_coeff
    );
    print!("{}", to_json(&cert)?);
    Ok(())
}
