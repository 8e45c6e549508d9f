//! Conformal rescaling `g ↦ e^{2φ} g` of a contact sub-Riemannian structure.
//!
//! The rescaled frame is
//! `f0φ = e^{-2φ}(f0 + 2 f2(φ) f1 - 2 f1(φ) f2)`, `fiφ = e^{-φ} fi`.
//! [`Rescaled`] wraps any [`FrameCalculus`] and is itself one, so the whole
//! curvature pipeline runs unchanged on rescaled structures.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fefferman::{alpha_beta_closed_form, alpha_beta_from_weyl, curvature};
use crate::frame::{chi2_kappa_of, Frame, FrameCalculus};
use crate::scalar::{Ring, Scalar};
use crate::structure::StructureConstants;

/// The rescaled frame in closed form.
pub fn rescale_frame(fr: &Frame, phi: &Expr) -> Frame {
    let [f0, f1, f2] = &fr.f;
    let a = f1.apply(phi);
    let b = f2.apply(phi);
    let e1 = (-phi.clone()).exp();
    let e2 = (Expr::int(-2) * phi.clone()).exp();
    let f0p = f0
        .plus(&f1.scaled(&(Expr::int(2) * b)))
        .plus(&f2.scaled(&(Expr::int(-2) * a)))
        .scaled(&e2);
    Frame::new(f0p, f1.scaled(&e1), f2.scaled(&e1))
}

/// A frame calculus seen through the rescaling by `phi`.
#[derive(Clone, Debug)]
pub struct Rescaled<'a, C: FrameCalculus> {
    base: &'a C,
    phi: C::R,
    e1: C::R,
    e2: C::R,
    /// `f0(φ), f1(φ), f2(φ)` in the original frame.
    d: [C::R; 3],
    constants: StructureConstants<C::R>,
}

impl<'a, C: FrameCalculus> Rescaled<'a, C> {
    pub fn new(base: &'a C, phi: C::R) -> Result<Self> {
        let e1 = (-phi.clone()).try_exp()?;
        let e2 = e1.square();
        let d = [base.derive(0, &phi)?, base.derive(1, &phi)?, base.derive(2, &phi)?];
        let constants = rescale_constants(base, &phi)?;
        Ok(Rescaled {
            base,
            phi,
            e1,
            e2,
            d,
            constants,
        })
    }

    pub fn phi(&self) -> &C::R {
        &self.phi
    }
}

impl<C: FrameCalculus> FrameCalculus for Rescaled<'_, C> {
    type R = C::R;

    fn constants(&self) -> &StructureConstants<C::R> {
        &self.constants
    }

    fn derive(&self, i: usize, u: &C::R) -> Result<C::R> {
        let b = self.base;
        match i {
            0 => {
                let [_, a, bb] = &self.d;
                let v = b.derive(0, u)? + (bb.clone() * b.derive(1, u)?).scale(2, 1)
                    - (a.clone() * b.derive(2, u)?).scale(2, 1);
                Ok(self.e2.clone() * v)
            }
            _ => Ok(self.e1.clone() * b.derive(i, u)?),
        }
    }
}

/// The six transformed structure functions.
pub fn rescale_constants<C: FrameCalculus>(calc: &C, phi: &C::R) -> Result<StructureConstants<C::R>> {
    let c = calc.constants();
    let f0p = calc.derive(0, phi)?;
    let a = calc.derive(1, phi)?;
    let b = calc.derive(2, phi)?;
    let e1 = (-phi.clone()).try_exp()?;
    let e2 = e1.square();
    let ab = a.clone() * b.clone();
    Ok(StructureConstants {
        c12_1: e1.clone() * (c.c12_1.clone() - b.scale(3, 1)),
        c12_2: e1 * (c.c12_2.clone() + a.scale(3, 1)),
        c10_1: e2.clone()
            * (ab.scale(-4, 1)
                + c.c10_1.clone()
                + calc.derive(1, &b)?.scale(2, 1)
                + (c.c12_1.clone() * a.clone()).scale(2, 1)
                + f0p.clone()),
        c10_2: e2.clone()
            * (a.square().scale(4, 1) + c.c10_2.clone() - calc.derive(1, &a)?.scale(2, 1)
                + (c.c12_2.clone() * a.clone()).scale(2, 1)),
        c20_1: e2.clone()
            * (b.square().scale(-4, 1) + c.c20_1.clone() + calc.derive(2, &b)?.scale(2, 1)
                + (c.c12_1.clone() * b.clone()).scale(2, 1)),
        c20_2: e2
            * (ab.scale(4, 1) + c.c20_2.clone() + (c.c12_2.clone() * b).scale(2, 1)
                - calc.derive(2, &a)?.scale(2, 1)
                + f0p),
    })
}

/// The vanishing conditions for a rescaled unimodular structure, written
/// without the overall conformal factor.
#[derive(Clone, Debug, PartialEq)]
pub struct UnimodularConditions<R> {
    pub kappa_expr: R,
    pub chi_expr: R,
    /// `κ_φ / kappa_expr` at the base point, when defined.
    pub kappa_factor: Option<f64>,
    /// `(c10_2φ + c20_1φ)/2 / chi_expr` at the base point, when defined.
    pub chi_factor: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RescaledInvariants<R> {
    pub chi2: R,
    pub kappa: R,
    pub unimodular: Option<UnimodularConditions<R>>,
}

fn ratio<R: Ring>(num: &R, den: &R) -> Option<f64> {
    let d = den.value().to_complex();
    if d.norm() < 1e-12 {
        return None;
    }
    Some((num.value().to_complex() / d).re)
}

/// `χ_φ²` and `κ_φ` with all derivative terms, plus the unimodular
/// conditions when the input has `c12 = 0` at the base point.
pub fn rescaled_invariants<C: FrameCalculus>(calc: &C, phi: &C::R) -> Result<RescaledInvariants<C::R>> {
    let r = Rescaled::new(calc, phi.clone())?;
    let (chi2, kappa) = chi2_kappa_of(&r)?;
    let c = calc.constants();
    let unimodular = if c.c12_1.negligible(1e-12) && c.c12_2.negligible(1e-12) {
        let (chi2_0, kappa_0) = chi2_kappa_of(calc)?;
        let chi_0 = (c.c10_2.clone() + c.c20_1.clone()).scale(1, 2);
        if !(chi_0.square() - chi2_0).negligible(1e-9) {
            return Err(Error::NotCanonical("unimodular frame is not normalized".into()));
        }
        let a = calc.derive(1, phi)?;
        let b = calc.derive(2, phi)?;
        let f1a = calc.derive(1, &a)?;
        let f2b = calc.derive(2, &b)?;
        let kappa_expr = (f1a.clone() + f2b.clone() + a.square() + b.square()).scale(-4, 1) + kappa_0;
        let chi_expr = (a.square() - b.square()).scale(2, 1) - f1a + f2b + chi_0;
        let rc = r.constants();
        let half_trace = (rc.c10_2.clone() + rc.c20_1.clone()).scale(1, 2);
        Some(UnimodularConditions {
            kappa_factor: ratio(&kappa, &kappa_expr),
            chi_factor: ratio(&half_trace, &chi_expr),
            kappa_expr,
            chi_expr,
        })
    } else {
        None
    };
    Ok(RescaledInvariants {
        chi2,
        kappa,
        unimodular,
    })
}

/// Residuals of `α_φ = e^{-4φ} α` and `β_φ = e^{-4φ} β` at the base point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingResiduals {
    pub alpha: f64,
    pub beta: f64,
    /// Same check with both sides read off the Weyl tensor.
    pub weyl_alpha: f64,
    pub weyl_beta: f64,
}

pub fn alpha_beta_scaling_residuals<C: FrameCalculus>(calc: &C, phi: &C::R) -> Result<ScalingResiduals> {
    let r = Rescaled::new(calc, phi.clone())?;
    let factor = (phi.scale(-4, 1)).try_exp()?.value();
    let dist = |x: &C::R, y: &C::R| (x.value() - factor.clone() * y.value()).magnitude();
    let (a, b) = alpha_beta_closed_form(calc)?;
    let (ap, bp) = alpha_beta_closed_form(&r)?;
    let (wa, wb) = alpha_beta_from_weyl(&curvature(calc)?.weyl);
    let (wap, wbp) = alpha_beta_from_weyl(&curvature(&r)?.weyl);
    Ok(ScalingResiduals {
        alpha: dist(&ap, &a),
        beta: dist(&bp, &b),
        weyl_alpha: dist(&wap, &wa),
        weyl_beta: dist(&wbp, &wb),
    })
}

/// Fails with [`Error::ScalingViolation`] when either residual exceeds `tol`.
pub fn verify_alpha_beta_scaling<C: FrameCalculus>(calc: &C, phi: &C::R, tol: f64) -> Result<ScalingResiduals> {
    let r = alpha_beta_scaling_residuals(calc, phi)?;
    let worst_a = r.alpha.max(r.weyl_alpha);
    let worst_b = r.beta.max(r.weyl_beta);
    if worst_a > tol || worst_b > tol {
        return Err(Error::ScalingViolation {
            alpha: worst_a,
            beta: worst_b,
        });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{LeftInvariant, ModelKind};
    use crate::jet::Jet;
    use crate::scalar::{q, qi, Rational};

    fn parse(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn zero_rescaling_is_identity() {
        let fr = Frame::solv_plus(Expr::one(), Expr::ratio(1, 3));
        let p = [q(1, 2), q(1, 5), q(-1, 3)];
        let jf = fr.at(&p, 5, 0.0).unwrap();
        let phi = Jet::zero(5);
        let t = |sc: &StructureConstants<Jet<Rational>>| sc.map(|j| j.truncate(3));
        assert_eq!(t(&rescale_constants(&jf, &phi).unwrap()), t(&jf.constants));
        let rf = rescale_frame(&fr, &Expr::zero()).at(&p, 5, 0.0).unwrap();
        assert_eq!(rf.constants, jf.constants);
    }

    #[test]
    fn heisenberg_rescaled_by_x() {
        let fr = rescale_frame(&Frame::heisenberg(), &Expr::x());
        let p = [0.3, -0.4, 0.2];
        let v = fr.f[0].jet(&p, 0).unwrap().value();
        // e^{-2x}(f0 + 2 f1)
        let e = (-0.6f64).exp();
        let want = [0.0, 2.0 * e, e * (1.0 + 0.3)];
        for k in 0..3 {
            assert!((v[k].value() - want[k]).abs() < 1e-14);
        }
        let jf = fr.at(&p, 3, 1e-12).unwrap();
        assert!((jf.constant_values().c12_1 + 3.0 * (-0.3f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn solv_plus_flattening_kills_c12_2() {
        let fr = Frame::solv_plus(Expr::one(), Expr::ratio(2, 9));
        let jf = fr.at(&[qi(0), q(1, 2), q(1, 3)], 5, 0.0).unwrap();
        let phi = parse("(* -1/3 x)").jet(&[qi(0), q(1, 2), q(1, 3)], 5).unwrap();
        let sc = rescale_constants(&jf, &phi).unwrap();
        for c in sc.to_array() {
            assert!(c.all_zero(), "{c:?}");
        }
        let inv = rescaled_invariants(&jf, &phi).unwrap();
        assert!(inv.chi2.all_zero() && inv.kappa.all_zero());
    }

    #[test]
    fn constant_rescaling_of_left_invariant() {
        let sc = StructureConstants::<f64>::unimodular(2.0, 1.0);
        let li = LeftInvariant::new(sc);
        let r = verify_alpha_beta_scaling(&li, &0.7, 1e-12).unwrap();
        assert!(r.alpha < 1e-12);
    }

    #[test]
    fn frame_and_constant_pipelines_agree() {
        let fr = Frame::solv_plus(Expr::int(2), Expr::ratio(1, 5));
        let phi = parse("(+ (* 1/3 x x y) (* -1/5 z) (* 1/7 y y y))");
        let p = [q(1, 3), q(-1, 2), q(1, 4)];
        let direct = rescale_frame(&fr, &phi).at(&p, 5, 0.0);
        // φ(p) ≠ 0, so the exponential is not rational; compare in floats
        assert!(direct.is_err());
        let pf = [1.0 / 3.0, -0.5, 0.25];
        let direct = rescale_frame(&fr, &phi).at(&pf, 5, 1e-10).unwrap();
        let jf = fr.at(&pf, 6, 0.0).unwrap();
        let via = rescale_constants(&jf, &phi.jet(&pf, 6).unwrap()).unwrap();
        for (x, y) in direct.constants.to_array().iter().zip(via.to_array()) {
            assert!((x.clone() - y).max_abs() < 1e-9);
        }
    }

    #[test]
    fn model_i_flattened_by_half_y() {
        let fr = Frame::model(ModelKind::UnimodularI);
        let phi = parse("(* 1/2 y)");
        for p in [[0.0, 0.0, 0.0], [0.3, -0.7, 1.2], [-1.0, 0.5, 2.5]] {
            let jf = fr.at(&p, 5, 1e-12).unwrap();
            let inv = rescaled_invariants(&jf, &phi.jet(&p, 5).unwrap()).unwrap();
            assert!(inv.kappa.value().abs() < 1e-12);
            assert!(inv.chi2.value().abs() < 1e-12);
            let u = inv.unimodular.unwrap();
            assert!(u.kappa_expr.value().abs() < 1e-12 && u.chi_expr.value().abs() < 1e-12);
        }
    }

    #[test]
    fn unimodular_conditions_carry_conformal_factor() {
        let fr = Frame::model(ModelKind::UnimodularI);
        let phi = parse("(+ (* 1/3 x) (* 1/5 y y))");
        let p = [0.2, 0.1, 0.4];
        let jf = fr.at(&p, 5, 1e-12).unwrap();
        let ph = phi.jet(&p, 5).unwrap();
        let u = rescaled_invariants(&jf, &ph).unwrap().unimodular.unwrap();
        let e = (-2.0 * ph.value()).exp();
        assert!((u.kappa_factor.unwrap() - e).abs() < 1e-10);
        assert!((u.chi_factor.unwrap() - e).abs() < 1e-10);
    }

    #[test]
    fn exact_rescaling_with_vanishing_phi_at_base() {
        let li = LeftInvariant::new(StructureConstants::<Rational>::unimodular(qi(1), qi(0)));
        let r = Rescaled::new(&li, qi(0)).unwrap();
        assert_eq!(r.constants(), li.constants());
    }
}
