//! The matrix-level operator F(A) = f(lambda[A]): metric eigenvalues, the
//! derivative F^{ij} with its spectral identities, and the boundary-estimate
//! inequalities (partial-trace ratio, negative-component bound, epsilon
//! split).
//!
//! Run with: cargo run --example matrix_operator

use hesseq::linalg::SymMatrix;
use hesseq::matrix::{
    big_f, big_f_grad, epsilon_split_constant, eig_metric, negative_component_square_bound, partial_trace_ratio, MetricTensor,
    RSelector,
};
use hesseq::sampling::{cone_points, random_admissible_matrix, rng_from_seed};
use hesseq::symfun::{OperatorSpec, Spectrum};

fn main() -> hesseq::Result<()> {
    let s2 = OperatorSpec::sigma_root(2, 3)?;
    let id = MetricTensor::identity(3);

    let a = SymMatrix::from_fn(3, |i, j| if i == j { (i + 1) as f64 } else { 0.3 });
    let (lam, _) = eig_metric(&a, &id)?;
    println!("lambda[A] = {:?}", lam.values());
    println!("F(A) = {:.8}", big_f(&a, &id, &s2)?);

    // the generalized problem: eigenvalues with respect to a scaled metric
    let g4 = MetricTensor::new(SymMatrix::scaled_identity(3, 4.0))?;
    let (lam4, _) = eig_metric(&a, &g4)?;
    println!("lambda[A] w.r.t. 4*identity = {:?} (quartered)", lam4.values());

    // F^{ij} and the two spectral identities
    let fp = big_f_grad(&a, &id, &s2)?;
    let f = s2.grad(&lam)?;
    let tr1 = fp.inner(&a);
    let want1: f64 = f.iter().zip(lam.values()).map(|(x, y)| x * y).sum();
    let p = fp.to_dense().mul(&a.to_dense()).mul(&a.to_dense());
    let tr2: f64 = (0..3).map(|i| p.get(i, i)).sum();
    let want2: f64 = f.iter().zip(lam.values()).map(|(x, y)| x * y * y).sum();
    println!("\nsum F^ij A_ij      = {tr1:.10} vs sum f_i l_i  = {want1:.10}");
    println!("sum F^ij A_ik A_kj = {tr2:.10} vs sum f_i l_i^2 = {want2:.10}");

    // partial-trace ratio stays positive over random admissible matrices
    let mut rng = rng_from_seed(11);
    let mut worst = f64::INFINITY;
    for _ in 0..500 {
        let (m, _) = random_admissible_matrix(&mut rng, &s2.cone, 0.1, 50.0)?;
        let (ratio, _) = partial_trace_ratio(&m, &id, &s2, 2)?;
        worst = worst.min(ratio);
    }
    println!("\nsmallest partial-trace ratio over 500 samples: {worst:.6e} (> 0)");

    // negative-component bound
    let lam_neg = Spectrum::from_slice(&[3.0, 3.0, -1.0])?;
    println!(
        "negative-component bound at (3,3,-1): {}",
        negative_component_square_bound(&lam_neg, &s2)?
    );

    // empirical epsilon-split constant is stable when the radius doubles
    let inner = cone_points(&s2.cone, 5_000, 0.1, 25.0, 3)?;
    let outer = cone_points(&s2.cone, 5_000, 0.1, 50.0, 4)?;
    let c_inner = epsilon_split_constant(&s2, 1.0, &inner, RSelector::WorstOverAll)?;
    let mut all = inner;
    all.extend(outer);
    let c_all = epsilon_split_constant(&s2, 1.0, &all, RSelector::WorstOverAll)?;
    println!("\nepsilon-split constant: radius 25 -> {c_inner:.6}, radius 50 -> {c_all:.6}");
    Ok(())
}
