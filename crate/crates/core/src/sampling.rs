//! Seeded rejection samplers over cones. Everything is deterministic for a
//! fixed (seed, count): samplers own a ChaCha stream and no global state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::symfun::{ConeSpec, Spectrum};

/// Deterministic RNG used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform direction on the unit sphere in R^n.
pub fn unit_direction(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform direction on the sphere intersected with the open cone
/// (rejection).
pub fn direction_in_cone(
    rng: &mut ChaCha8Rng,
    cone: &ConeSpec,
    max_draws: usize,
) -> Result<Spectrum> {
    for _ in 0..max_draws {
        let d = Spectrum::new(unit_direction(rng, cone.n))?;
        if cone.contains(&d) {
            return Ok(d);
        }
    }
    Err(Error::SamplingFailed {
        wanted: 1,
        accepted: 0,
        draws: max_draws,
        context: format!("direction in {:?}", cone.kind),
    })
}

/// Cone point with log-uniform radius in [r_lo, r_hi]; the mixed-radii
/// sampler behind the structure verifiers.
pub fn cone_point_log_radius(
    rng: &mut ChaCha8Rng,
    cone: &ConeSpec,
    r_lo: f64,
    r_hi: f64,
) -> Result<Spectrum> {
    let d = direction_in_cone(rng, cone, 100_000)?;
    let u: f64 = rng.gen_range(0.0..1.0);
    let r = r_lo * (r_hi / r_lo).powf(u);
    Ok(d.scale(r))
}

/// `count` cone points with mixed log-uniform radii.
pub fn cone_points(
    cone: &ConeSpec,
    count: usize,
    r_lo: f64,
    r_hi: f64,
    seed: u64,
) -> Result<Vec<Spectrum>> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| cone_point_log_radius(&mut rng, cone, r_lo, r_hi))
        .collect()
}

/// Cone points that have at least one negative entry (rejected otherwise).
pub fn cone_points_with_negative_entry(
    cone: &ConeSpec,
    count: usize,
    r_lo: f64,
    r_hi: f64,
    seed: u64,
) -> Result<Vec<Spectrum>> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(count);
    let max_draws = 10_000 * count.max(1);
    let mut draws = 0;
    while out.len() < count && draws < max_draws {
        draws += 1;
        let p = cone_point_log_radius(&mut rng, cone, r_lo, r_hi)?;
        if p.min_entry() < 0.0 {
            out.push(p);
        }
    }
    if out.len() < count {
        return Err(Error::SamplingFailed {
            wanted: count,
            accepted: out.len(),
            draws,
            context: format!("{:?} with a negative entry", cone.kind),
        });
    }
    Ok(out)
}

/// Random orthogonal frame by Gram-Schmidt on a Gaussian matrix.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> crate::linalg::Mat {
    use crate::linalg::Mat;
    loop {
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut ok = true;
        for _ in 0..n {
            let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            for c in &cols {
                let dot: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= dot * ci;
                }
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-6 {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            cols.push(v);
        }
        if ok {
            let mut q = Mat::zeros(n, n);
            for (j, c) in cols.iter().enumerate() {
                for i in 0..n {
                    q.set(i, j, c[i]);
                }
            }
            return q;
        }
    }
}

/// Random symmetric matrix with spectrum inside the cone: a cone point in a
/// log-uniform radius band conjugated by a random orthogonal frame.
pub fn random_admissible_matrix(
    rng: &mut ChaCha8Rng,
    cone: &ConeSpec,
    r_lo: f64,
    r_hi: f64,
) -> Result<(crate::linalg::SymMatrix, Spectrum)> {
    let lam = cone_point_log_radius(rng, cone, r_lo, r_hi)?;
    let q = random_orthogonal(rng, cone.n);
    let v = lam.values();
    let a = crate::linalg::SymMatrix::from_fn(cone.n, |i, j| {
        (0..cone.n).map(|k| q.get(i, k) * v[k] * q.get(j, k)).sum()
    });
    Ok((a, lam))
}
