//! Local conformal flatness of left-invariant structures and explicit
//! flattening rescalings.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fefferman::{alpha_beta_from_weyl, curvature};
use crate::frame::{Frame, FrameCalculus, LeftInvariant, ModelKind};
use crate::rescaling::rescaled_invariants;
use crate::scalar::{q, rational_sqrt, Rational, Ring, Scalar};
use crate::structure::{chi2_kappa, chi_from_radicand, sign, StructureConstants};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FlatFamily {
    NonunimodularI,
    NonunimodularII,
    UnimodularI,
    UnimodularII,
    UnimodularIII,
    Heisenberg,
    NotFlat,
}

impl FlatFamily {
    pub fn name(self) -> &'static str {
        match self {
            FlatFamily::NonunimodularI => "nonunimodular_i",
            FlatFamily::NonunimodularII => "nonunimodular_ii",
            FlatFamily::UnimodularI => "unimodular_i",
            FlatFamily::UnimodularII => "unimodular_ii",
            FlatFamily::UnimodularIII => "unimodular_iii",
            FlatFamily::Heisenberg => "heisenberg",
            FlatFamily::NotFlat => "not_flat",
        }
    }
}

/// A rescaling function together with the coordinate chart it lives in.
#[derive(Clone, Debug, PartialEq)]
pub struct Flattening {
    pub phi: Expr,
    pub chart: Frame,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatnessVerdict<S> {
    pub fefferman_flat: bool,
    pub family: FlatFamily,
    pub alpha: S,
    pub beta: S,
    /// `alpha` from the family formula in terms of `(chi, kappa)`, when the
    /// structure is in one of the canonical families.
    pub alpha_closed_form: Option<S>,
    pub flattening: Option<Flattening>,
}

fn is_zero<S: Scalar>(s: &S, tol: f64) -> bool {
    s.is_zero_within(tol)
}

/// `alpha` as a function of `(chi, kappa)` for canonical shapes.
pub fn alpha_from_invariants<S: Scalar>(sc: &StructureConstants<S>, tol: f64) -> Result<Option<S>> {
    let (chi2, kappa) = chi2_kappa(sc);
    let chi = chi_from_radicand(&chi2)?;
    let z = |s: &S| is_zero(s, tol);
    if !z(&sc.c10_1) || !z(&sc.c20_2) {
        return Ok(None);
    }
    let solv_plus = |chi: S, kappa: S| -> S { (chi.clone() * (kappa + chi.scale(8, 1))).scale(-1, 6) };
    if sc.is_unimodular(tol) {
        return Ok(Some((kappa * chi).scale(-3, 2)));
    }
    if z(&sc.c12_1) && z(&sc.c20_1) {
        return Ok(Some(solv_plus(chi, kappa)));
    }
    if z(&sc.c12_2) && z(&sc.c10_2) {
        if sign(&sc.c20_1, tol).is_gt() {
            return Ok(Some((chi.clone() * (kappa - chi.scale(8, 1))).scale(-1, 6)));
        }
        // opposite orientation: swapping f1, f2 gives a solv+ frame
        let (chi2s, kappas) = chi2_kappa(&sc.swap_orientation());
        return Ok(Some(solv_plus(chi_from_radicand(&chi2s)?, kappas)));
    }
    Ok(None)
}

fn rational_of<S: Scalar>(s: &S) -> Result<Rational> {
    s.to_rational()
        .ok_or_else(|| Error::DomainViolation(format!("{s:?} is not a real number")))
}

/// `√r` as an expression, exact when `r` is a perfect square.
fn sqrt_expr(r: &Rational) -> Expr {
    match rational_sqrt(r) {
        Some(s) => Expr::rational(s),
        None => (Expr::rational(r.clone()).ln() * Expr::ratio(1, 2)).exp(),
    }
}

/// The model frame of a unimodular family with invariants scaled by `r`.
pub fn unimodular_chart(kind: ModelKind, r: &Rational) -> Frame {
    let fr = Frame::model(kind);
    if *r == q(1, 1) {
        return fr;
    }
    let s = sqrt_expr(r);
    let rr = Expr::rational(r.clone());
    Frame::new(fr.f[0].scaled(&rr), fr.f[1].scaled(&s), fr.f[2].scaled(&s))
}

/// Chart of the flat solv+ shape `[f2,f1] = f0 + c f2`, `[f1,f0] = (2/9)c² f2`.
pub fn solv_plus_flat_chart(c: &Rational) -> Frame {
    let ce = Expr::rational(c.clone());
    let k = Expr::rational(c * c * q(2, 9));
    Frame::solv_plus(ce, k)
}

/// Chart of the mirrored flat shape `[f2,f1] = f0 + c f1`,
/// `[f2,f0] = -(2/9)c² f1`, obtained by swapping `f1` and `f2` in a solv+ chart.
pub fn solv_minus_flat_chart(c: &Rational) -> Frame {
    let fr = solv_plus_flat_chart(&-c.clone());
    Frame::new(fr.f[0].scaled(&Expr::int(-1)), fr.f[2].clone(), fr.f[1].clone())
}

/// The rescaling function and chart for a flat family.
pub fn flattening_phi<S: Scalar>(family: FlatFamily, sc: &StructureConstants<S>) -> Result<Flattening> {
    let (chi2, kappa) = chi2_kappa(sc);
    let half_y = Expr::ratio(1, 2) * Expr::y();
    Ok(match family {
        FlatFamily::Heisenberg => Flattening {
            phi: Expr::zero(),
            chart: Frame::heisenberg(),
        },
        FlatFamily::NonunimodularI => {
            let c = rational_of(&sc.c12_2)?;
            Flattening {
                phi: Expr::rational(-c.clone() / q(3, 1)) * Expr::x(),
                chart: solv_plus_flat_chart(&c),
            }
        }
        FlatFamily::NonunimodularII => {
            let c = rational_of(&sc.c12_1)?;
            Flattening {
                phi: Expr::rational(c.clone() / q(3, 1)) * Expr::x(),
                chart: solv_minus_flat_chart(&c),
            }
        }
        FlatFamily::UnimodularI => Flattening {
            phi: half_y,
            chart: unimodular_chart(ModelKind::UnimodularI, &-rational_of(&kappa)?),
        },
        FlatFamily::UnimodularII => Flattening {
            phi: half_y,
            chart: unimodular_chart(ModelKind::UnimodularII, &rational_of(&kappa)?),
        },
        FlatFamily::UnimodularIII => Flattening {
            // defined where cos(2z) > 0
            phi: Expr::y() - Expr::ratio(1, 2) * (Expr::ratio(2, 1) * Expr::z()).cos().ln(),
            chart: unimodular_chart(ModelKind::UnimodularIII, &rational_of(&chi_from_radicand(&chi2)?)?),
        },
        FlatFamily::NotFlat => return Err(Error::NotFlat),
    })
}

/// Decides local conformal flatness of a left-invariant structure.
///
/// Structures with `chi = 0` are locally isometric to a unimodular model
/// (or to the Heisenberg group when also `kappa = 0`) and are flat. Otherwise
/// the frame must be canonical.
pub fn flatness_verdict<S: Scalar>(sc: &StructureConstants<S>, tol: f64) -> Result<FlatnessVerdict<S>> {
    let (chi2, kappa) = chi2_kappa(sc);
    let z = |s: &S| is_zero(s, tol);
    let family = if sc.to_array().iter().all(z) {
        FlatFamily::Heisenberg
    } else if z(&chi2) {
        match sign(&kappa, tol) {
            std::cmp::Ordering::Less => FlatFamily::UnimodularI,
            std::cmp::Ordering::Greater => FlatFamily::UnimodularII,
            std::cmp::Ordering::Equal => FlatFamily::Heisenberg,
        }
    } else {
        if !z(&sc.c10_1) || !z(&sc.c20_2) {
            return Err(Error::NotCanonical(format!("c10_1 and c20_2 must vanish: {}", sc.to_f64())));
        }
        if sc.is_unimodular(tol) {
            if z(&kappa) {
                FlatFamily::UnimodularIII
            } else {
                FlatFamily::NotFlat
            }
        } else if z(&sc.c12_1) && z(&sc.c20_1) {
            let target = sc.c12_2.square().scale(2, 9);
            if z(&(sc.c10_2.clone() - target)) {
                FlatFamily::NonunimodularI
            } else {
                FlatFamily::NotFlat
            }
        } else if z(&sc.c12_2) && z(&sc.c10_2) {
            let target = sc.c12_1.square().scale(-2, 9);
            if z(&(sc.c20_1.clone() - target)) {
                FlatFamily::NonunimodularII
            } else {
                FlatFamily::NotFlat
            }
        } else {
            return Err(Error::NotCanonical(format!("structure coefficients violate integrability: {}", sc.to_f64())));
        }
    };
    let cb = curvature(&LeftInvariant::new(sc.clone()))?;
    let (alpha, beta) = alpha_beta_from_weyl(&cb.weyl);
    let scale = 1.0 + chi2.magnitude() + kappa.magnitude().powi(2);
    let weyl_zero = if S::EXACT {
        cb.weyl.0.iter().all(|w| w.is_exact_zero())
    } else {
        cb.weyl.0.iter().all(|w| w.magnitude() <= 1e-10 * scale)
    };
    if weyl_zero != (family != FlatFamily::NotFlat) {
        let worst = cb.weyl.0.iter().map(|w| w.magnitude()).fold(0.0, f64::max);
        return Err(Error::identity("flatness family agrees with the Weyl tensor", worst));
    }
    let flattening = match family {
        FlatFamily::NotFlat => None,
        f => Some(flattening_phi(f, sc)?),
    };
    Ok(FlatnessVerdict {
        fefferman_flat: weyl_zero,
        family,
        alpha_closed_form: alpha_from_invariants(sc, tol)?,
        alpha,
        beta,
        flattening,
    })
}

/// `L_sr(φ) + (c12_2)²/3` with the sub-Laplacian
/// `f1 f1 φ + f2 f2 φ + c12_2 f1 φ - c12_1 f2 φ`.
pub fn sublaplacian_residual<C: FrameCalculus>(calc: &C, phi: &C::R) -> Result<C::R> {
    let c = calc.constants();
    let f1 = calc.derive(1, phi)?;
    let f2 = calc.derive(2, phi)?;
    Ok(calc.derive(1, &f1)? + calc.derive(2, &f2)? + c.c12_2.clone() * f1 - c.c12_1.clone() * f2
        + c.c12_2.square().scale(1, 3))
}

/// Largest `|χ_φ²|` and `|κ_φ|` of the rescaled structure over `points`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlatteningCheck {
    pub max_chi2: f64,
    pub max_kappa: f64,
    pub points: usize,
}

pub fn check_flattening(fl: &Flattening, points: &[[f64; 3]]) -> Result<FlatteningCheck> {
    let mut out = FlatteningCheck {
        max_chi2: 0.0,
        max_kappa: 0.0,
        points: points.len(),
    };
    for p in points {
        let pc = p.map(|v| Complex64::new(v, 0.0));
        let jf = fl.chart.at(&pc, 4, 1e-9)?;
        let inv = rescaled_invariants(&jf, &fl.phi.jet(&pc, 4)?)?;
        out.max_chi2 = out.max_chi2.max(inv.chi2.value().norm());
        out.max_kappa = out.max_kappa.max(inv.kappa.value().norm());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn sc(a: [i64; 6]) -> StructureConstants<Rational> {
        StructureConstants::from_ints(a)
    }

    const PTS: [[f64; 3]; 3] = [[0.0, 0.0, 0.0], [0.3, -0.2, 0.7], [-0.5, 0.4, 0.6]];

    #[test]
    fn spec_examples() {
        let h = flatness_verdict(&sc([0; 6]), 0.0).unwrap();
        assert_eq!(h.family, FlatFamily::Heisenberg);
        assert_eq!(h.flattening.unwrap().phi, Expr::zero());
        let s = flatness_verdict(&sc([0, 3, 0, 2, 0, 0]), 0.0).unwrap();
        assert_eq!(s.family, FlatFamily::NonunimodularI);
        assert!(s.fefferman_flat);
        let u = flatness_verdict(&sc([0, 0, 0, 1, 1, 0]), 0.0).unwrap();
        assert_eq!(u.family, FlatFamily::UnimodularIII);
    }

    #[test]
    fn not_flat_reports_closed_form() {
        let v = flatness_verdict(&sc([0, 0, 0, 3, 1, 0]), 0.0).unwrap();
        assert_eq!(v.family, FlatFamily::NotFlat);
        assert_eq!(v.alpha, qi(-3));
        assert_eq!(v.alpha_closed_form, Some(qi(-3)));
        assert!(flattening_phi(FlatFamily::NotFlat, &sc([0; 6])).is_err());
    }

    #[test]
    fn non_canonical_is_rejected() {
        assert!(matches!(
            flatness_verdict(&sc([0, 0, 1, 3, 1, -1]), 0.0),
            Err(Error::NotCanonical(_))
        ));
    }

    #[test]
    fn flattening_drives_invariants_to_zero() {
        for a in [[0, 1, 0, 0, 0, 0], [0, 3, 0, 2, 0, 0], [-3, 0, 0, 0, -2, 0], [0, 0, 0, -2, 2, 0], [0, 0, 0, 1, -1, 0], [0, 0, 0, 1, 1, 0], [0, 0, 0, 3, 3, 0]] {
            let s = StructureConstants::from_ints(a);
            let s = if a == [0, 1, 0, 0, 0, 0] { StructureConstants::solv_plus(qi(1), q(2, 9)) } else { s };
            let v = flatness_verdict(&s, 0.0).unwrap();
            assert_ne!(v.family, FlatFamily::NotFlat, "{a:?}");
            let fl = v.flattening.unwrap();
            let jf = fl.chart.at(&[Complex64::new(0.2, 0.0), Complex64::new(0.1, 0.0), Complex64::new(0.4, 0.0)], 3, 1e-10).unwrap();
            let vals = jf.constant_values().to_array().map(|c| c.re);
            let want = s.to_f64().to_array();
            for (x, y) in vals.iter().zip(want) {
                assert!((x - y).abs() < 1e-10, "{a:?}: chart {vals:?}");
            }
            let chk = check_flattening(&fl, &PTS).unwrap();
            assert!(chk.max_chi2 < 1e-10 && chk.max_kappa < 1e-10, "{a:?}: {chk:?}");
        }
    }

    #[test]
    fn model_iii_minus_y_solves_only_the_reduced_system() {
        let chart = unimodular_chart(ModelKind::UnimodularIII, &qi(1));
        let phi = -Expr::y();
        for p in PTS {
            let p = p.map(|v| Complex64::new(v, 0.0));
            let jf = chart.at(&p, 4, 1e-10).unwrap();
            let inv = crate::rescaling::rescaled_invariants(&jf, &phi.jet(&p, 4).unwrap()).unwrap();
            let u = inv.unimodular.unwrap();
            assert!(u.kappa_expr.value().norm() < 1e-12 && u.chi_expr.value().norm() < 1e-12);
            assert!(inv.kappa.value().norm() < 1e-12);
            let s = (2.0 * p[2].re).sin();
            let want = -9.0 * s * s * (4.0 * p[1].re).exp();
            assert!((inv.chi2.value().re - want).abs() < 1e-9, "{:?} vs {want}", inv.chi2.value());
        }
    }

    #[test]
    fn model_i_proof_identities() {
        let fl = flattening_phi(FlatFamily::UnimodularI, &sc([0, 0, 0, -1, 1, 0])).unwrap();
        let jf = fl.chart.at(&[0.0, 0.3, 0.0], 3, 1e-12).unwrap();
        let phi = fl.phi.jet(&[0.0, 0.3, 0.0], 3).unwrap();
        let f1 = jf.derive(1, &phi).unwrap();
        let f11 = jf.derive(1, &f1).unwrap();
        let f2 = jf.derive(2, &phi).unwrap();
        assert!((f11.value() + 0.5).abs() < 1e-14);
        assert!((f2.value().powi(2) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn sublaplacian_family() {
        let jf = solv_plus_flat_chart(&qi(1)).at(&[qi(0), qi(0), qi(0)], 4, 0.0).unwrap();
        let at = |s: &str| Expr::parse(s).unwrap().jet(&[qi(0), qi(0), qi(0)], 4).unwrap();
        let r = sublaplacian_residual(&jf, &at("(* -1/3 x)")).unwrap();
        assert!(r.all_zero());
        let r = sublaplacian_residual(&jf, &at("(+ (exp (neg x)) (* -1/3 x))")).unwrap();
        assert!(r.all_zero());
        let r = sublaplacian_residual(&jf, &at("0")).unwrap();
        assert_eq!(r.value(), q(1, 3));
    }

    #[test]
    fn flat_solv_plus_lies_on_alpha_zero_locus() {
        for c in 1..6 {
            let s = StructureConstants::solv_plus(qi(c), q(2 * c * c, 9));
            let (chi2, kappa) = chi2_kappa(&s);
            let chi = chi_from_radicand(&chi2).unwrap();
            assert_eq!(kappa + chi * qi(8), qi(0));
        }
    }
}
