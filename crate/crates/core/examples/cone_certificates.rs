//! Level-set geometry: ray level points, the segment-maximum quantity
//! Theta_R and its monotone growth in R, the empirical omega bound, and
//! tangent-cone membership certificates.
//!
//! Run with: cargo run --example cone_certificates

use hesseq::cone::{level_point, omega_estimate, tangent_cone_plus_test, theta_r};
use hesseq::jsonfmt::to_json;
use hesseq::symfun::{OperatorSpec, Spectrum};

fn main() -> hesseq::Result<()> {
    let s2 = OperatorSpec::sigma_root(2, 3)?;
    let sigma = 1.0;

    // where the ray through (1,1,1) crosses the level set {f = 1}
    let dir = Spectrum::from_slice(&[1.0, 1.0, 1.0])?;
    let on_level = level_point(&s2, sigma, &dir)?;
    println!(
        "level point along (1,1,1): {:?}, f = {:.12}",
        on_level.values(),
        s2.eval(&on_level)?
    );

    // Theta_R grows with R once positive (here mu is interior to the level
    // region, so every segment maximum clears the level)
    let mu = Spectrum::from_slice(&[2.0, 2.0, 2.0])?;
    println!("\nTheta_R for mu = (2,2,2), sigma = 1:");
    for r in [5.0, 10.0, 20.0, 40.0] {
        let theta = theta_r(&s2, sigma, &mu, r, 300, 7)?;
        println!("  R = {r:>5}: Theta = {theta:.6e}");
    }

    // the linear family has plane level sets: Theta vanishes identically
    let lin = OperatorSpec::linear(3)?;
    let on_plane = Spectrum::from_slice(&[1.0, 1.0, 1.0])?;
    let theta = theta_r(&lin, 3.0, &on_plane, 10.0, 100, 7)?;
    println!("\nsigma_1, mu on the level plane: Theta = {theta:.3e} (exactly 0)");

    // empirical omega bound for an interior mu: at least f(mu) - sigma
    let omega = omega_estimate(&s2, sigma, &mu, 10.0, 300, 7)?;
    println!(
        "\nomega estimate for mu = (2,2,2): {omega:.6e} (>= f(mu) - sigma = {:.6e})",
        s2.eval(&mu)? - sigma
    );

    // tangent-cone certificates: positive orthant passes for the 2-root,
    // any on-plane point fails for the linear family
    println!("\ntangent-cone membership certificates:");
    for (label, op, sigma, mu, eps) in [
        ("2-root, mu=(2,2,2)", s2, 1.0, vec![2.0, 2.0, 2.0], 0.1),
        ("log P_2, mu=(1,1,1)", OperatorSpec::log_pk(2, 3)?, 0.0, vec![1.0, 1.0, 1.0], 0.05),
        ("linear, on-plane mu", lin, 3.0, vec![1.0, 1.0, 1.0], 0.1),
    ] {
        let cert = tangent_cone_plus_test(
            &op,
            sigma,
            &Spectrum::new(mu)?,
            eps,
            10.0,
            256,
            42,
        )?;
        println!(
            "  {label:<22} {:?} (worst margin {:.6e})",
            cert.verdict, cert.theta_estimate
        );
        if label.starts_with("2-root") {
            print!("\nfull certificate JSON:\n{}", to_json(&cert)?);
        }
    }
    Ok(())
}
