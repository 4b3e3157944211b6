//! Tour of the operator families: evaluation, gradients, Hessians and the
//! Euler-type identities that certify them.
//!
//! Run with: cargo run --example operator_families

use hesseq::symfun::{f_eval, f_grad, f_hess, Homogeneity, OperatorSpec, Spectrum};

fn main() -> hesseq::Result<()> {
    let lam = Spectrum::from_slice(&[1.0, 2.0, 3.0])?;

    let families = vec![
        ("sigma_1 (linear)", OperatorSpec::linear(3)?),
        ("sigma_2 (plain)", OperatorSpec::sigma(2, 3)?),
        ("sigma_2^(1/2)", OperatorSpec::sigma_root(2, 3)?),
        ("sigma_3^(1/3)", OperatorSpec::sigma_root(3, 3)?),
        ("(sigma_2/sigma_1)", OperatorSpec::sigma_quotient(2, 1, 3)?),
        ("log P_2", OperatorSpec::log_pk(2, 3)?),
        ("P_2 (plain)", OperatorSpec::pk(2, 3)?),
    ];

    println!("lambda = {:?}\n", lam.values());
    println!(
        "{:<18} {:>12} {:>40}  euler identity",
        "family", "f(lambda)", "grad f"
    );
    for (name, op) in &families {
        let f = f_eval(op, &lam)?;
        let g = f_grad(op, &lam)?;
        let dot: f64 = g.iter().zip(lam.values()).map(|(a, b)| a * b).sum();
        let euler = match op.homogeneity() {
            Homogeneity::Homogeneous { degree } => {
                format!("sum f_i l_i = {dot:.6} = {degree} * f")
            }
            Homogeneity::LogHomogeneous { constant } => {
                format!("sum f_i l_i = {dot:.6} = C(n,k) = {constant}")
            }
        };
        println!(
            "{name:<18} {f:>12.6} {:>40}  {euler}",
            format!("{:.4?}", g)
        );
    }

    // concavity at a glance: largest Hessian eigenvalue per family
    println!("\nlargest eigenvalue of the lambda-space Hessian at {:?}:", lam.values());
    for (name, op) in &families {
        let h = f_hess(op, &lam)?;
        let (vals, _) = hesseq::linalg::jacobi_eigen(&h)?;
        let tag = if op.verified_concave() {
            ""
        } else {
            "  (not verified concave)"
        };
        println!("  {name:<18} {:>12.6e}{tag}", vals[0]);
    }

    // admissibility errors carry the violated inequality
    let outside = Spectrum::from_slice(&[2.0, 2.0, -1.0])?;
    let s2 = OperatorSpec::sigma_root(2, 3)?;
    match f_eval(&s2, &outside) {
        Err(e) => println!("\noutside the cone: {e}"),
        Ok(_) => unreachable!(),
    }

    // operator specs serialize to a flat JSON object
    let json = serde_json::to_string(&OperatorSpec::sigma_quotient(3, 1, 4)?)?;
    println!("\nspec JSON: {json}");
    Ok(())
}
