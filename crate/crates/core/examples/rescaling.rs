//! Rescales a frame by `e^phi` and compares alpha before and after.

use contact_conformal::expr::Expr;
use contact_conformal::fefferman::{alpha_beta_from_weyl, curvature};
use contact_conformal::rescaling::rescale_frame;
use contact_conformal::frame::Frame;

fn main() -> contact_conformal::Result<()> {
    let base = Frame::solv_plus(Expr::int(1), Expr::int(1));
    let phi = Expr::parse("(+ (* 1/3 x y) (* 1/5 z))").expect("phi");
    let scaled = rescale_frame(&base, &phi);
    for p in [[0.1, 0.2, -0.3], [0.5, 0.0, 0.4]] {
        let (a0, _) = alpha_beta_from_weyl(&curvature(&base.at(&p, 6, 1e-9)?)?.weyl);
        let (a1, b1) = alpha_beta_from_weyl(&curvature(&scaled.at(&p, 6, 1e-9)?)?.weyl);
        let factor = (-4.0 * phi.eval(&p)?).exp();
        println!(
            "{p:?}: alpha={:.10} alpha_phi={:.10} e^-4phi alpha={:.10} beta_phi={:.1e}",
            a0.value(),
            a1.value(),
            factor * a0.value(),
            b1.value()
        );
    }
    Ok(())
}
