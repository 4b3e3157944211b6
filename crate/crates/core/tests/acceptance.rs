//! Acceptance suite: one test per release criterion, each asserting at its
//! stated tolerance and printing a single pass line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use hesseq::cone::{tangent_cone_plus_test, theta_r, Verdict};
use hesseq::grid::{MetricGrid, ScalarField, SymMatrixField};
use hesseq::jsonfmt::to_json;
use hesseq::linalg::SymMatrix;
use hesseq::matrix::{
    big_f, big_f_grad, epsilon_split_constant, eig_plain, negative_component_square_bound, partial_trace_ratio, MetricTensor,
    RSelector,
};
use hesseq::sampling::{
    cone_points, cone_points_with_negative_entry, random_admissible_matrix, rng_from_seed,
};
use hesseq::solver::{
    barrier_check, continuity_solve, newton_solve, residual, sweep_psi_amplitude, ProblemSpec,
};
use hesseq::symfun::{Homogeneity, OperatorSpec, Spectrum};
use hesseq::verify::{verify_concave, verify_monotone};

fn family_catalogue() -> Vec<OperatorSpec> {
    let mut specs = Vec::new();
    for n in [2usize, 3, 4] {
        for k in [1usize, 2, 3] {
            if k <= n {
                specs.push(OperatorSpec::sigma_root(k, n).unwrap());
            }
        }
    }
    specs.push(OperatorSpec::sigma_quotient(2, 1, 3).unwrap());
    specs.push(OperatorSpec::log_pk(2, 2).unwrap());
    specs.push(OperatorSpec::log_pk(2, 3).unwrap());
    specs
}

#[test]
fn criterion_01_structure_condition_suite() {
    let start = Instant::now();
    let samples = 10_000;
    for spec in family_catalogue() {
        let mono = verify_monotone(&spec, samples, 1).unwrap();
        assert!(
            mono.passed() && mono.margin > 0.0,
            "monotone failed for {:?}: margin {}",
            spec.kind,
            mono.margin
        );
        let conc = verify_concave(&spec, samples, 1).unwrap();
        assert!(conc.passed(), "concavity failed for {:?}", spec.kind);
        assert!(
            conc.margin >= -1e-8,
            "concavity margin {} for {:?}",
            conc.margin,
            spec.kind
        );
    }
    // plain sigma_2 must fail concavity with witness eigenvalue 2
    let plain = OperatorSpec::sigma(2, 3).unwrap();
    let cert = verify_concave(&plain, samples, 1).unwrap();
    assert!(!cert.passed());
    assert!(
        (cert.witnesses[0].value - 2.0).abs() < 1e-10,
        "witness eigenvalue {}",
        cert.witnesses[0].value
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "criterion 1 took {elapsed:.1} s");
    println!(
        "[PASS] criterion 1: structure conditions (1.4)/(1.5) over 11 families, \
         plain sigma_2 fails with witness 2 ({elapsed:.1} s)"
    );
}

#[test]
fn criterion_02_section2_inequality_suite() {
    let start = Instant::now();

    // segment-maximum quantity nondecreasing at radii 2R, 4R, 8R (R = 2.5)
    let radii = [5.0, 10.0, 20.0];
    let cases: Vec<(OperatorSpec, f64, Vec<f64>)> = vec![
        (OperatorSpec::sigma_root(2, 2).unwrap(), 1.0, vec![1.0, 1.0]),
        (OperatorSpec::sigma_root(2, 3).unwrap(), 1.0, vec![1.0, 1.0, 1.0]),
        (OperatorSpec::log_pk(2, 3).unwrap(), 0.0, vec![1.0, 1.0, 1.0]),
        (OperatorSpec::linear(3).unwrap(), 3.0, vec![1.0, 1.0, 1.0]),
    ];
    for (op, sigma, mu) in &cases {
        let mu = Spectrum::new(mu.clone()).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for &r in &radii {
            let theta = theta_r(op, *sigma, &mu, r, 400, 21).unwrap();
            assert!(
                theta >= prev - 1e-9,
                "{:?}: Theta({r}) = {theta} < previous {prev}",
                op.kind
            );
            prev = theta;
        }
    }

    // negative-component square bound on 1e4 Gamma_2 samples
    let s2 = OperatorSpec::sigma_root(2, 3).unwrap();
    let negs =
        cone_points_with_negative_entry(&s2.cone, 10_000, 1e-2, 1e3, 7).unwrap();
    for lam in &negs {
        assert!(negative_component_square_bound(lam, &s2).unwrap(), "failed at {:?}", lam);
    }

    // Cor 2.8: empirical constant stable under radius doubling (< 5%)
    let inner = cone_points(&s2.cone, 20_000, 0.1, 30.0, 11).unwrap();
    let outer = cone_points(&s2.cone, 20_000, 0.1, 60.0, 12).unwrap();
    let c1 = epsilon_split_constant(&s2, 1.0, &inner, RSelector::WorstOverAll).unwrap();
    let mut all = inner;
    all.extend(outer);
    let c2 = epsilon_split_constant(&s2, 1.0, &all, RSelector::WorstOverAll).unwrap();
    assert!(
        (c2 - c1) / c1.abs().max(1e-12) < 0.05,
        "epsilon-split constant grew {c1} -> {c2}"
    );

    // Prop 2.6: partial-trace ratio positive on 1e3 random admissible A
    let mut rng = rng_from_seed(5);
    let id = MetricTensor::identity(3);
    for _ in 0..1000 {
        let (a, _) = random_admissible_matrix(&mut rng, &s2.cone, 0.1, 100.0).unwrap();
        let (ratio, _) = partial_trace_ratio(&a, &id, &s2, 2).unwrap();
        assert!(ratio > 0.0);
    }

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "criterion 2 took {elapsed:.1} s");
    println!(
        "[PASS] criterion 2: Theta monotone, negative-component bound on 1e4 samples, \
         epsilon-split constant stable ({c1:.4} -> {c2:.4}), partial-trace ratio > 0 \
         ({elapsed:.1} s)"
    );
}

#[test]
fn criterion_03_tangent_cone_suite() {
    let start = Instant::now();
    let s2 = OperatorSpec::sigma_root(2, 3).unwrap();
    let radii = [10.0, 20.0, 40.0];

    // mu = (2,2,2) and 100 random mu from a compact subset of the positive
    // orthant (membership of all of it is a large-R limit statement; at
    // fixed R we keep min entry 0.2 and epsilon 0.05)
    let mut mus = vec![vec![2.0, 2.0, 2.0]];
    let mut rng = rng_from_seed(33);
    use rand::Rng;
    while mus.len() < 101 {
        let m: Vec<f64> = (0..3).map(|_| rng.gen_range(0.2..3.0)).collect();
        mus.push(m);
    }
    for mu in &mus {
        let mu = Spectrum::new(mu.clone()).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for &r in &radii {
            let cert = tangent_cone_plus_test(&s2, 1.0, &mu, 0.05, r, 96, 3).unwrap();
            assert_eq!(
                cert.verdict,
                Verdict::Pass,
                "mu {:?} failed at R={r}: {}",
                mu.values(),
                cert.theta_estimate
            );
            assert!(
                cert.theta_estimate >= prev - 1e-9,
                "theta decreased at R={r} for {:?}",
                mu.values()
            );
            prev = cert.theta_estimate;
        }
    }

    // log P_2: sampled mu from a compact subset of P_2 (pair sums >= 0.5)
    let lp2 = OperatorSpec::log_pk(2, 3).unwrap();
    let mut count = 0;
    while count < 50 {
        let m: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.5..2.0)).collect();
        let mut sums = [m[0] + m[1], m[0] + m[2], m[1] + m[2]];
        sums.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if sums[0] < 0.5 {
            continue;
        }
        count += 1;
        let mu = Spectrum::new(m).unwrap();
        let cert = tangent_cone_plus_test(&lp2, 0.0, &mu, 0.05, 10.0, 96, 3).unwrap();
        assert_eq!(
            cert.verdict,
            Verdict::Pass,
            "log P_2 mu {:?}: {}",
            mu.values(),
            cert.theta_estimate
        );
    }

    // linear family: every on-plane mu fails
    let lin = OperatorSpec::linear(3).unwrap();
    for mu in [[1.0, 1.0, 1.0], [0.5, 1.0, 1.5], [2.0, 0.5, 0.5]] {
        let sigma: f64 = mu.iter().sum();
        let cert =
            tangent_cone_plus_test(&lin, sigma, &Spectrum::new(mu.to_vec()).unwrap(), 0.05, 10.0, 96, 3)
                .unwrap();
        assert_eq!(cert.verdict, Verdict::Fail);
    }

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "criterion 3 took {elapsed:.1} s");
    println!(
        "[PASS] criterion 3: tangent-cone certificates pass for 101 orthant points at \
         R in {{10,20,40}} with nondecreasing margins, 50 two-convex points pass, \
         on-plane points fail ({elapsed:.1} s)"
    );
}

#[test]
fn criterion_04_euler_identity_suite() {
    let start = Instant::now();
    // eigenvalue-space identities
    for spec in family_catalogue() {
        let pts = cone_points(&spec.cone, 10_000, 1e-2, 1e3, 9).unwrap();
        for lam in &pts {
            let g = spec.grad(lam).unwrap();
            let dot: f64 = g.iter().zip(lam.values()).map(|(a, b)| a * b).sum();
            match spec.homogeneity() {
                Homogeneity::Homogeneous { degree } if degree == 1.0 => {
                    let f = spec.eval(lam).unwrap();
                    assert!(
                        (dot - f).abs() <= 1e-10 * (1.0 + f.abs()),
                        "{:?}: {dot} vs {f}",
                        spec.kind
                    );
                }
                Homogeneity::LogHomogeneous { constant } => {
                    assert!(
                        (dot - constant).abs() <= 1e-10 * constant,
                        "{:?}: {dot} vs {constant}",
                        spec.kind
                    );
                }
                _ => unreachable!("catalogue contains degree-1 and log families"),
            }
        }
    }

    // matrix identities on 1e3 random admissible matrices
    let s2 = OperatorSpec::sigma_root(2, 3).unwrap();
    let id = MetricTensor::identity(3);
    let mut rng = rng_from_seed(17);
    for _ in 0..1000 {
        let (a, _) = random_admissible_matrix(&mut rng, &s2.cone, 0.1, 100.0).unwrap();
        let (lam, _) = eig_plain(&a).unwrap();
        let f = s2.grad(&lam).unwrap();
        let fp = big_f_grad(&a, &id, &s2).unwrap();
        let want1: f64 = f.iter().zip(lam.values()).map(|(x, y)| x * y).sum();
        let got1 = fp.inner(&a);
        assert!(
            (got1 - want1).abs() <= 1e-9 * (1.0 + want1.abs()),
            "trace identity: {got1} vs {want1}"
        );
        let p = fp.to_dense().mul(&a.to_dense()).mul(&a.to_dense());
        let got2: f64 = (0..3).map(|i| p.get(i, i)).sum();
        let want2: f64 = f
            .iter()
            .zip(lam.values())
            .map(|(x, y)| x * y * y)
            .sum();
        assert!(
            (got2 - want2).abs() <= 1e-9 * (1.0 + want2.abs()),
            "square identity: {got2} vs {want2}"
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "[PASS] criterion 4: Euler identities to 1e-10 and matrix contraction \
         identities to 1e-9 on 1e3 admissible matrices ({elapsed:.1} s)"
    );
}

#[test]
fn criterion_05_derivative_oracles() {
    let start = Instant::now();
    let h = 1e-5;
    let specs = [
        OperatorSpec::sigma_root(2, 3).unwrap(),
        OperatorSpec::sigma_quotient(2, 1, 3).unwrap(),
        OperatorSpec::log_pk(2, 3).unwrap(),
    ];

    // f_grad and f_hess against central differences, 1e3 samples each
    for spec in &specs {
        let mut rng = rng_from_seed(41);
        let mut checked = 0;
        while checked < 1000 {
            use rand::Rng;
            let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..3.0)).collect();
            let lam = match Spectrum::new(v) {
                Ok(l) => l,
                Err(_) => continue,
            };
            if spec.cone.margin(&lam) < 5e-2 {
                continue;
            }
            checked += 1;
            let g = spec.grad(&lam).unwrap();
            let hess = spec.hess(&lam).unwrap();
            let fscale = spec.eval(&lam).unwrap().abs().max(1.0);
            let hscale = hess.frobenius().max(1.0);
            for i in 0..3 {
                let mut vp = lam.values().to_vec();
                let mut vm = lam.values().to_vec();
                vp[i] += h;
                vm[i] -= h;
                let sp = Spectrum::new(vp).unwrap();
                let sm = Spectrum::new(vm).unwrap();
                let fd = (spec.eval(&sp).unwrap() - spec.eval(&sm).unwrap()) / (2.0 * h);
                assert!(
                    (g[i] - fd).abs() <= 1e-6 * (g[i].abs() + fd.abs() + fscale),
                    "{:?} grad[{i}]",
                    spec.kind
                );
                let gp = spec.grad(&sp).unwrap();
                let gm = spec.grad(&sm).unwrap();
                for j in 0..3 {
                    let fd = (gp[j] - gm[j]) / (2.0 * h);
                    assert!(
                        (hess.get(j, i) - fd).abs() <= 1e-6 * hscale,
                        "{:?} hess[{j}][{i}]",
                        spec.kind
                    );
                }
            }
        }
    }

    // big_f_grad against matrix finite differences, including clustered
    // eigenvalues with gap 1e-3
    let id = MetricTensor::identity(3);
    let s2 = OperatorSpec::sigma_root(2, 3).unwrap();
    let mut rng = rng_from_seed(43);
    for trial in 0..1000 {
        let a = if trial % 3 == 0 {
            // clustered spectrum rotated by a random frame
            let q = hesseq::sampling::random_orthogonal(&mut rng, 3);
            let d = [2.0, 1.0 + 1e-3, 1.0];
            SymMatrix::from_fn(3, |i, j| {
                (0..3).map(|k| q.get(i, k) * d[k] * q.get(j, k)).sum()
            })
        } else {
            let (a, lam) = random_admissible_matrix(&mut rng, &s2.cone, 0.5, 5.0).unwrap();
            if s2.cone.margin(&lam) < 5e-2 {
                continue;
            }
            a
        };
        let fp = big_f_grad(&a, &id, &s2).unwrap();
        let scale = fp.frobenius().max(1.0);
        for i in 0..3 {
            for j in i..3 {
                let mut ap = a.clone();
                let mut am = a.clone();
                ap.add_to(i, j, h);
                am.add_to(i, j, -h);
                let fd =
                    (big_f(&ap, &id, &s2).unwrap() - big_f(&am, &id, &s2).unwrap()) / (2.0 * h);
                let want = if i == j { fp.get(i, i) } else { 2.0 * fp.get(i, j) };
                assert!(
                    (want - fd).abs() <= 1e-6 * scale,
                    "matrix fd ({i},{j}): {want} vs {fd}"
                );
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "[PASS] criterion 5: analytic first/second derivatives match central \
         differences to 1e-6, clusters included ({elapsed:.1} s)"
    );
}

/// Manufactured Monge-Ampere instance on [0,1]^2 with exact solution
/// u* = exp(r^2/2): sqrt(det Hess u) = exp(r^2/2) sqrt(1 + r^2).
fn manufactured(nodes: usize, shift: f64) -> (ProblemSpec, ScalarField) {
    let grid =
        MetricGrid::flat(&[nodes, nodes], &[0.0, 0.0], &[1.0, 1.0], &[false, false]).unwrap();
    let u_star = ScalarField::from_fn(&grid, |x| (0.5 * (x[0] * x[0] + x[1] * x[1])).exp());
    let psi = ScalarField::from_fn(&grid, |x| {
        let r2 = x[0] * x[0] + x[1] * x[1];
        (0.5 * r2).exp() * (1.0 + r2).sqrt()
    });
    let ubar = ScalarField::from_fn(&grid, |x| 4.0 * (x[0] * x[0] + x[1] * x[1]) + shift);
    let p = ProblemSpec::new(
        OperatorSpec::sigma_root(2, 2).unwrap(),
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
fn criterion_06_manufactured_monge_ampere() {
    let start = Instant::now();
    let mut errors = Vec::new();
    for nodes in [33usize, 65, 129] {
        let (p, u_star) = manufactured(nodes, 0.0);
        let (u, report) = newton_solve(&p, &p.ubar.clone(), 1e-10, 60).unwrap();
        assert!(report.converged);
        let mut err = 0.0f64;
        for node in 0..p.grid.num_nodes() {
            err = err.max((u.get(node) - u_star.get(node)).abs());
        }
        errors.push(err);
    }
    let r1 = errors[0] / errors[1];
    let r2 = errors[1] / errors[2];
    assert!(
        (3.2..=4.8).contains(&r1) && (3.2..=4.8).contains(&r2),
        "convergence ratios {r1:.2}, {r2:.2} (errors {errors:?})"
    );

    // path independence on the 65^2 grid
    let (p, _) = manufactured(65, 0.0);
    let (u_newton, _) = newton_solve(&p, &p.ubar.clone(), 1e-11, 60).unwrap();
    let (u_cont, rep) = continuity_solve(&p, 8, 1e-11).unwrap();
    assert!(rep.continuation_steps >= 2);
    let mut diff = 0.0f64;
    for node in 0..p.grid.num_nodes() {
        diff = diff.max((u_newton.get(node) - u_cont.get(node)).abs());
    }
    assert!(diff < 1e-8, "path difference {diff}");

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 120.0, "criterion 6 took {elapsed:.1} s");
    println!(
        "[PASS] criterion 6: second-order convergence (ratios {r1:.2}, {r2:.2}), \
         continuation matches Newton to {diff:.1e} ({elapsed:.1} s)"
    );
}

/// Banded Cholesky solve of the 5-point Dirichlet Poisson problem; the
/// independent oracle for the linear-family regression.
fn poisson_direct(
    grid: &MetricGrid,
    psi: &ScalarField,
    phi: &ScalarField,
) -> ScalarField {
    let shape = grid.shape();
    let (nx, ny) = (shape[0], shape[1]);
    let (ix_max, iy_max) = (nx - 2, ny - 2); // interior counts
    let m = ix_max * iy_max;
    let band = iy_max; // super-diagonal reach of the row-major interior order
    let h = grid.spacing()[0];
    assert!((grid.spacing()[1] - h).abs() < 1e-14);
    let inv_h2 = 1.0 / (h * h);
    let unk = |ix: usize, iy: usize| (ix - 1) * iy_max + (iy - 1);

    // A = -Laplacian (SPD), banded storage a[r][c - r] for c in r..=r+band
    let mut a = vec![vec![0.0f64; band + 1]; m];
    let mut rhs = vec![0.0f64; m];
    for ix in 1..=ix_max {
        for iy in 1..=iy_max {
            let r = unk(ix, iy);
            a[r][0] = 4.0 * inv_h2;
            rhs[r] = -psi.get(grid.encode(&[ix, iy, 0]));
            let mut couple = |jx: usize, jy: usize| {
                let node = grid.encode(&[jx, jy, 0]);
                if jx == 0 || jx == nx - 1 || jy == 0 || jy == ny - 1 {
                    rhs[r] += inv_h2 * phi.get(node);
                } else {
                    let c = unk(jx, jy);
                    if c > r {
                        a[r][c - r] = -inv_h2;
                    }
                }
            };
            couple(ix - 1, iy);
            couple(ix + 1, iy);
            couple(ix, iy - 1);
            couple(ix, iy + 1);
        }
    }
    // banded Cholesky A = L L^T
    let mut l = vec![vec![0.0f64; band + 1]; m];
    for j in 0..m {
        let lo = j.saturating_sub(band);
        for i in j..m.min(j + band + 1) {
            let mut s = a[j][i - j];
            for k in lo..j {
                if i - k <= band && j - k <= band {
                    s -= l[k][i - k] * l[k][j - k];
                }
            }
            if i == j {
                l[j][0] = s.sqrt();
            } else {
                l[j][i - j] = s / l[j][0];
            }
        }
    }
    // forward/backward substitution
    let mut y = vec![0.0f64; m];
    for i in 0..m {
        let mut s = rhs[i];
        for k in i.saturating_sub(band)..i {
            s -= l[k][i - k] * y[k];
        }
        y[i] = s / l[i][0];
    }
    let mut x = vec![0.0f64; m];
    for i in (0..m).rev() {
        let mut s = y[i];
        for c in i + 1..m.min(i + band + 1) {
            s -= l[i][c - i] * x[c];
        }
        x[i] = s / l[i][0];
    }
    let mut u = phi.clone();
    for ix in 1..=ix_max {
        for iy in 1..=iy_max {
            u.set(grid.encode(&[ix, iy, 0]), x[unk(ix, iy)]);
        }
    }
    u
}

#[test]
fn criterion_07_linear_family_poisson_regression() {
    let start = Instant::now();
    let nodes = 65usize;
    let grid =
        MetricGrid::flat(&[nodes, nodes], &[0.0, 0.0], &[1.0, 1.0], &[false, false]).unwrap();
    let phi = ScalarField::from_fn(&grid, |x| {
        x[0].powi(4) + x[1].powi(4) + x[0] * x[1] + 0.5 * (x[0] * x[0] + x[1] * x[1])
    });
    let psi = ScalarField::from_fn(&grid, |x| 12.0 * (x[0] * x[0] + x[1] * x[1]) + 2.0);
    let p = ProblemSpec::new(
        OperatorSpec::linear(2).unwrap(),
        grid.clone(),
        SymMatrixField::zeros(&grid),
        psi.clone(),
        phi.clone(),
        ScalarField::from_fn(&grid, |x| 8.0 * (x[0] * x[0] + x[1] * x[1])),
    )
    .unwrap();
    // tolerance sits just above the floor the 1e-10 inner Krylov tolerance
    // allows; the comparison budget below is 1e-9
    let (u, _) = newton_solve(&p, &p.ubar.clone(), 1e-11, 20).unwrap();
    let direct = poisson_direct(&grid, &psi, &phi);
    let mut diff = 0.0f64;
    for node in 0..grid.num_nodes() {
        diff = diff.max((u.get(node) - direct.get(node)).abs());
    }
    assert!(diff <= 1e-9, "solver vs direct Poisson: {diff}");
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "[PASS] criterion 7: linear-family solve matches the banded-Cholesky Poisson \
         oracle to {diff:.1e} on 65^2 ({elapsed:.1} s)"
    );
}

#[test]
fn criterion_08_estimate_monitor_sweep() {
    let start = Instant::now();
    let (p, _) = manufactured(33, 0.0);
    let floor = ScalarField::constant(&p.grid, 1.0);
    let sweep = sweep_psi_amplitude(&p, &floor, 11, 1e-9).unwrap();
    assert_eq!(sweep.rows.len(), 11);
    let ratios: Vec<f64> = sweep
        .rows
        .iter()
        .map(|r| r.max_hess_interior / (1.0 + r.max_hess_boundary))
        .collect();
    assert!(ratios.iter().all(|r| r.is_finite()));
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0f64, f64::max);
    // qualitative reflection of the global estimate only: the literature
    // constant is not numerically specified, so no quantitative target
    // exists; we require a bounded, slowly varying ratio across the family
    assert!(hi / lo < 2.0, "ratio varies {lo:.4}..{hi:.4}");
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "[PASS] criterion 8: interior/boundary Hessian ratio finite and varies \
         {lo:.3}..{hi:.3} (< 2x) across the 11-step amplitude sweep; empirical \
         C1 = {:.3} ({elapsed:.1} s)",
        sweep.empirical_c1
    );
}

#[test]
fn criterion_09_barrier_diagnostic() {
    let start = Instant::now();
    // strict subsolution shifted below the boundary data
    let (p, _) = manufactured(65, -6.0);
    let sub = p.check_subsolution().unwrap();
    assert!(sub.passed() && sub.margin > 0.0);
    let ubar = p.ubar.clone();
    let (u, _) = newton_solve(&p, &ubar, 1e-10, 60).unwrap();

    // discrete comparison ordering against the strict subsolution
    let scale = 1.0 + u.inf_norm();
    for node in 0..p.grid.num_nodes() {
        assert!(u.get(node) >= ubar.get(node) - 1e-8 * scale);
    }

    let (t, n_coeff, delta) = (0.5, 1.0, 0.25);
    assert!(delta <= 2.0 * t / n_coeff);
    let cert = barrier_check(&u, &ubar, &p, t, n_coeff, delta).unwrap();
    assert_eq!(cert.nonneg, Verdict::Pass, "{cert:?}");
    assert!(cert.min_v >= -1e-10 * scale);
    assert!(cert.epsilon > 0.0, "{cert:?}");
    assert_eq!(cert.verdict, Verdict::Pass);
    let elapsed = start.elapsed().as_secs_f64();
    println!(
        "[PASS] criterion 9: barrier with (t, N, delta) = ({t}, {n_coeff}, {delta}): \
         min v = {:.3e} >= 0, epsilon = {:.3e} > 0 ({elapsed:.1} s)",
        cert.min_v, cert.epsilon
    );
}

#[test]
fn criterion_10_certificate_determinism() {
    let s2 = OperatorSpec::sigma_root(2, 3).unwrap();
    let mu = Spectrum::from_slice(&[2.0, 2.0, 2.0]).unwrap();

    let a = tangent_cone_plus_test(&s2, 1.0, &mu, 0.05, 10.0, 128, 99).unwrap();
    let b = tangent_cone_plus_test(&s2, 1.0, &mu, 0.05, 10.0, 128, 99).unwrap();
    assert_eq!(to_json(&a).unwrap(), to_json(&b).unwrap());

    let c = verify_concave(&s2, 5_000, 99).unwrap();
    let d = verify_concave(&s2, 5_000, 99).unwrap();
    assert_eq!(to_json(&c).unwrap(), to_json(&d).unwrap());

    let e = verify_monotone(&OperatorSpec::log_pk(2, 3).unwrap(), 5_000, 5).unwrap();
    let f = verify_monotone(&OperatorSpec::log_pk(2, 3).unwrap(), 5_000, 5).unwrap();
    assert_eq!(to_json(&e).unwrap(), to_json(&f).unwrap());

    // different seeds produce different bytes (the seed is recorded)
    let g = verify_monotone(&s2, 5_000, 6).unwrap();
    assert_ne!(to_json(&c).unwrap(), to_json(&g).unwrap());

    println!(
        "[PASS] criterion 10: certificates byte-identical under seed replay \
         (17-significant-digit JSON)"
    );
}

// cross-check used by criterion 6's manufactured instance: the discrete
// residual of the exact solution shrinks at second order too
#[test]
fn manufactured_exact_solution_residual_is_second_order() {
    let (p33, u33) = manufactured(33, 0.0);
    let (p65, u65) = manufactured(65, 0.0);
    let r33 = residual(&u33, &p33).unwrap();
    let r65 = residual(&u65, &p65).unwrap();
    // boundary rows vanish (phi is the exact trace); interior truncation
    let ratio = r33.inf_norm() / r65.inf_norm();
    assert!((3.2..=4.8).contains(&ratio), "truncation ratio {ratio}");
}
