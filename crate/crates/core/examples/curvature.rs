//! Fefferman curvature of a left-invariant frame and of a model frame.

use contact_conformal::fefferman::{alpha_beta_from_weyl, curvature, sigma_trace};
use contact_conformal::frame::{chi2_kappa_of, Frame, LeftInvariant, ModelKind};
use contact_conformal::scalar::q;
use contact_conformal::structure::StructureConstants;
use num_complex::Complex64;

fn main() -> contact_conformal::Result<()> {
    // exact arithmetic on constant coefficients
    let li = LeftInvariant::new(StructureConstants::unimodular(q(3, 2), q(-1, 2)));
    let cb = curvature(&li)?;
    let (chi2, kappa) = chi2_kappa_of(&li)?;
    let (alpha, beta) = alpha_beta_from_weyl(&cb.weyl);
    println!("left-invariant: chi^2={chi2} kappa={kappa}");
    println!("  R={}  alpha={alpha}  beta={beta}", cb.scalar);
    println!("  |nabla_inf R|^2={}", cb.norm_squared(&cb.nabla_inf_riemann()));

    // model ii has complex coefficients
    let p = [0.3, -0.1, 0.2].map(|v| Complex64::new(v, 0.0));
    let jf = Frame::model(ModelKind::UnimodularII).at(&p, 4, 1e-9)?;
    let cb = curvature(&jf)?;
    let (_, trace) = sigma_trace(&jf)?;
    let (_, kappa) = chi2_kappa_of(&jf)?;
    println!("model ii at {:?}:", [0.3, -0.1, 0.2]);
    println!("  R={:.6}  kappa={:.6}  tr(d sigma)={:.6}", cb.scalar.value(), kappa.value(), trace.value());
    Ok(())
}
