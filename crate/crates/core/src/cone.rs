//! Level-set geometry of the operator families: points on the level
//! hypersurface {f = sigma}, the segment-maximum quantity Theta_R, an
//! empirical omega lower bound, and the sampled tangent-cone-at-infinity
//! membership test. All quantities are sampled semi-decisions with explicit
//! seeds; a passing certificate is evidence, never a proof.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{rng_from_seed, unit_direction};
use crate::symfun::{Homogeneity, OperatorSpec, Spectrum};

/// Relative width of the norm band accepted around a target radius when
/// sampling the level surface: accepted norms lie in [R, (1+SHELL_BAND) R].
/// Monotonicity of Theta in R makes the band conservative.
pub const SHELL_BAND: f64 = 0.25;

/// Golden-section iterations for the segment maximum; the integrand is
/// concave in t, so the search is exact up to the final interval width.
const GOLDEN_ITERS: usize = 60;

const LEVEL_TOL: f64 = 1e-12;

/// Outcome of a sampled check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Machine-readable outcome of a tangent-cone membership test. `pass` means
/// every sampled level point lambda with |lambda| >= r_used gave
/// sum f_i(lambda) (mu_i - lambda_i) - epsilon * sum f_i(lambda) > 0;
/// theta_estimate is the smallest sampled margin and worst_sample realizes
/// it. Reproducible bit-for-bit from (spec, sigma, mu, epsilon, r, seed,
/// n_samples).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeMembershipCertificate {
    pub spec: OperatorSpec,
    pub mu: Vec<f64>,
    pub sigma: f64,
    pub epsilon: f64,
    pub theta_estimate: f64,
    pub r_used: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub worst_sample: Vec<f64>,
    pub verdict: Verdict,
}

/// A level-set sampling query: which family, which level, how many samples,
/// which stream. The level must exceed the family's boundary sup (any level
/// is reachable for the log-homogeneous family).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelSetQuery {
    pub spec: OperatorSpec,
    pub sigma: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl LevelSetQuery {
    pub fn new(spec: OperatorSpec, sigma: f64, n_samples: usize, seed: u64) -> Result<Self> {
        let floor = spec.sup_boundary_f();
        if floor.is_finite() && sigma <= floor {
            return Err(Error::Parameter(format!(
                "level {sigma} does not exceed the boundary sup {floor}"
            )));
        }
        Ok(LevelSetQuery {
            spec,
            sigma,
            n_samples,
            seed,
        })
    }

    pub fn shell(&self, radius: f64) -> Result<Vec<Spectrum>> {
        sample_level_shell(&self.spec, self.sigma, radius, self.n_samples, self.seed)
    }

    pub fn theta_r(&self, mu: &Spectrum, radius: f64) -> Result<f64> {
        theta_r(&self.spec, self.sigma, mu, radius, self.n_samples, self.seed)
    }

    pub fn omega(&self, mu: &Spectrum, min_norm: f64) -> Result<f64> {
        omega_estimate(&self.spec, self.sigma, mu, min_norm, self.n_samples, self.seed)
    }

    pub fn tangent_cone_plus(
        &self,
        mu: &Spectrum,
        epsilon: f64,
        radius: f64,
    ) -> Result<ConeMembershipCertificate> {
        tangent_cone_plus_test(
            &self.spec,
            self.sigma,
            mu,
            epsilon,
            radius,
            self.n_samples,
            self.seed,
        )
    }
}

/// Scale factor t with f(t * direction) = sigma, in closed form per family.
fn level_scale(spec: &OperatorSpec, f_dir: f64, sigma: f64) -> Result<f64> {
    match spec.homogeneity() {
        Homogeneity::Homogeneous { degree } => {
            if sigma <= 0.0 {
                return Err(Error::LevelUnreachable(format!(
                    "level {sigma} not attained along rays of a positively homogeneous family"
                )));
            }
            Ok((sigma / f_dir).powf(1.0 / degree))
        }
        Homogeneity::LogHomogeneous { constant } => Ok(((sigma - f_dir) / constant).exp()),
    }
}

/// The point t* direction on the level hypersurface {f = sigma}, with
/// |f - sigma| <= 1e-12 max(1, |sigma|). Closed form in t for homogeneous
/// families, then a short Newton polish on t (with bisection safeguard).
pub fn level_point(spec: &OperatorSpec, sigma: f64, direction: &Spectrum) -> Result<Spectrum> {
    if !spec.cone.contains(direction) {
        return Err(Error::NotAdmissible {
            violated: spec
                .cone
                .violated(direction)
                .unwrap_or_else(|| "direction outside cone".into()),
            spectrum: direction.values().to_vec(),
            node: None,
        });
    }
    let f_dir = spec.eval(direction)?;
    let tol = LEVEL_TOL * sigma.abs().max(1.0);
    let mut t = level_scale(spec, f_dir, sigma)?;
    for _ in 0..8 {
        let lam = direction.scale(t);
        let g = spec.eval(&lam)? - sigma;
        if g.abs() <= tol {
            return Ok(lam);
        }
        let grad = spec.grad(&lam)?;
        let dg: f64 = grad
            .iter()
            .zip(direction.values())
            .map(|(gi, di)| gi * di)
            .sum();
        let step = g / dg;
        let t_new = t - step;
        if !(t_new.is_finite() && t_new > 0.0) {
            // bisection fallback toward the admissible side
            t *= if g > 0.0 { 0.5 } else { 2.0 };
        } else {
            t = t_new;
        }
    }
    let lam = direction.scale(t);
    let g = spec.eval(&lam)? - sigma;
    if g.abs() <= tol {
        Ok(lam)
    } else {
        Err(Error::Numerical(format!(
            "level point residual {g:.3e} exceeds tolerance {tol:.3e}"
        )))
    }
}

/// Sample points of {f = sigma} whose norm lies in [radius, (1+band) radius]:
/// uniform directions on the sphere intersected with the cone (rejection),
/// ray level point, norm-band filter.
pub fn sample_level_shell(
    spec: &OperatorSpec,
    sigma: f64,
    radius: f64,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<Spectrum>> {
    if radius <= 0.0 {
        return Err(Error::Parameter(format!(
            "shell radius {radius} must be > 0"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(n_samples);
    let max_draws = 1_000_000usize.max(100_000 * n_samples);
    let mut draws = 0usize;
    let hi = (1.0 + SHELL_BAND) * radius;
    while out.len() < n_samples && draws < max_draws {
        draws += 1;
        let d = match Spectrum::new(unit_direction(&mut rng, spec.n)) {
            Ok(d) => d,
            Err(_) => continue,
        };
        if !spec.cone.contains(&d) {
            continue;
        }
        let f_dir = spec.eval(&d)?;
        let t = level_scale(spec, f_dir, sigma)?;
        if t < radius || t > hi {
            continue;
        }
        out.push(level_point(spec, sigma, &d)?);
    }
    if out.len() < n_samples {
        return Err(Error::SamplingFailed {
            wanted: n_samples,
            accepted: out.len(),
            draws,
            context: format!(
                "level shell {:?} at sigma={sigma}, radius in [{radius}, {hi}]",
                spec.kind
            ),
        });
    }
    Ok(out)
}

/// max over t in the unit interval of f(t mu + (1-t) lambda) - sigma, by golden-section
/// search; the function is concave in t by the concavity of f, and the
/// segment stays in the cone by convexity.
pub fn segment_level_excess(
    spec: &OperatorSpec,
    sigma: f64,
    mu: &Spectrum,
    lambda: &Spectrum,
) -> Result<f64> {
    let eval_at = |t: f64| -> Result<f64> {
        let v: Vec<f64> = mu
            .values()
            .iter()
            .zip(lambda.values())
            .map(|(m, l)| t * m + (1.0 - t) * l)
            .collect();
        spec.eval(&Spectrum::new(v)?)
    };
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = eval_at(c)?;
    let mut fd = eval_at(d)?;
    for _ in 0..GOLDEN_ITERS {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval_at(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval_at(d)?;
        }
    }
    let best = fc.max(fd).max(eval_at(0.0)?).max(eval_at(1.0)?);
    Ok(best - sigma)
}

fn require_in_closure(spec: &OperatorSpec, sigma: f64, mu: &Spectrum) -> Result<()> {
    if !spec.cone.contains(mu) {
        return Err(Error::NotAdmissible {
            violated: spec
                .cone
                .violated(mu)
                .unwrap_or_else(|| "mu outside cone".into()),
            spectrum: mu.values().to_vec(),
            node: None,
        });
    }
    let f_mu = spec.eval(mu)?;
    let tol = 1e-9 * sigma.abs().max(1.0);
    if f_mu < sigma - tol {
        return Err(Error::Parameter(format!(
            "mu lies below the level set: f(mu) = {f_mu:.6e} < sigma = {sigma:.6e}"
        )));
    }
    Ok(())
}

/// Sampled estimate of Theta_R(mu): the minimum over level points lambda
/// with |lambda| in the norm band at R of the segment maximum of f minus
/// sigma. Nonnegative up to roundoff when mu lies in the closure of
/// {f > sigma}.
pub fn theta_r(
    spec: &OperatorSpec,
    sigma: f64,
    mu: &Spectrum,
    radius: f64,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    require_in_closure(spec, sigma, mu)?;
    if radius <= mu.norm() {
        return Err(Error::Parameter(format!(
            "radius {radius} must exceed |mu| = {}",
            mu.norm()
        )));
    }
    let shell = sample_level_shell(spec, sigma, radius, n_samples, seed)?;
    let mut theta = f64::INFINITY;
    for lambda in &shell {
        theta = theta.min(segment_level_excess(spec, sigma, mu, lambda)?);
    }
    Ok(theta)
}

/// Empirical omega_mu: min over sampled level points lambda with
/// |lambda| >= min_norm of sum f_i(lambda)(mu_i - lambda_i).
pub fn omega_estimate(
    spec: &OperatorSpec,
    sigma: f64,
    mu: &Spectrum,
    min_norm: f64,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    require_in_closure(spec, sigma, mu)?;
    if min_norm <= 0.0 {
        return Err(Error::Parameter("min_norm must be > 0".into()));
    }
    let shell = sample_level_shell(spec, sigma, min_norm, n_samples, seed)?;
    let mut omega = f64::INFINITY;
    for lambda in &shell {
        let g = spec.grad(lambda)?;
        let s: f64 = g
            .iter()
            .zip(mu.values().iter().zip(lambda.values()))
            .map(|(gi, (m, l))| gi * (m - l))
            .sum();
        omega = omega.min(s);
    }
    Ok(omega)
}

/// Sampled test for mu in the strict-concavity region: evaluates
/// margin(lambda) = sum f_i(lambda)(mu_i - lambda_i) - epsilon sum f_i(lambda)
/// over level points with |lambda| >= radius and passes iff the minimum
/// margin is positive. A pass is evidence for membership at scale `radius`;
/// failure at growing radii is evidence against. Never a proof.
pub fn tangent_cone_plus_test(
    spec: &OperatorSpec,
    sigma: f64,
    mu: &Spectrum,
    epsilon: f64,
    radius: f64,
    n_samples: usize,
    seed: u64,
) -> Result<ConeMembershipCertificate> {
    if mu.dim() != spec.n {
        return Err(Error::DimensionMismatch(format!(
            "mu has length {}, operator has n={}",
            mu.dim(),
            spec.n
        )));
    }
    if epsilon <= 0.0 || radius <= 0.0 {
        return Err(Error::Parameter(
            "tangent cone test needs epsilon > 0 and radius > 0".into(),
        ));
    }
    let shell = sample_level_shell(spec, sigma, radius, n_samples, seed)?;
    let mut worst = f64::INFINITY;
    let mut worst_sample = shell[0].clone();
    for lambda in &shell {
        let g = spec.grad(lambda)?;
        let mut margin = 0.0;
        for i in 0..spec.n {
            margin += g[i] * (mu.values()[i] - lambda.values()[i] - epsilon);
        }
        if margin < worst {
            worst = margin;
            worst_sample = lambda.clone();
        }
    }
    Ok(ConeMembershipCertificate {
        spec: *spec,
        mu: mu.values().to_vec(),
        sigma,
        epsilon,
        theta_estimate: worst,
        r_used: radius,
        n_samples,
        seed,
        worst_sample: worst_sample.into_vec(),
        verdict: if worst > 0.0 {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    })
}
