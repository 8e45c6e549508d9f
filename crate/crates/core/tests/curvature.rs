use contact_conformal::expr::{random_polynomial, Expr};
use contact_conformal::fefferman::*;
use contact_conformal::frame::*;
use contact_conformal::rescaling::*;
use contact_conformal::scalar::{q, Rational, Ring};
use contact_conformal::structure::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn p(s: &str) -> Expr {
    Expr::parse(s).unwrap()
}

fn generic_frames() -> Vec<Frame> {
    let bases = [
        Frame::solv_plus(Expr::int(1), Expr::ratio(1, 1)),
        Frame::model(ModelKind::UnimodularI),
        Frame::heisenberg(),
        Frame::solv_plus(Expr::int(2), Expr::ratio(1, 3)),
    ];
    let thetas = [p("(* 1/3 (+ x (* y z)))"), p("(* x y)"), p("(+ z (* x x))")];
    let phis = [p("(+ (* 1/5 x) (* 1/7 y y) (* 1/3 z x))"), p("(* 1/4 (+ x (* y y y)))"), p("(* 1/3 (* x z))")];
    let mut out = vec![];
    for (i, b) in bases.iter().enumerate() {
        for (j, t) in thetas.iter().enumerate() {
            out.push(rescale_frame(&b.rotated(t), &phis[(i + j) % 3]));
        }
    }
    out
}

#[test]
fn weyl_pattern_on_non_invariant_frames() {
    for fr in generic_frames() {
        let jf = fr.at(&[0.1, -0.2, 0.3], 6, 1e-9).unwrap();
        let cb = curvature(&jf).unwrap();
        let (a, b) = alpha_beta_closed_form(&jf).unwrap();
        let scale = 1.0 + a.value().abs() + b.value().abs();
        let d = weyl_pattern_defects(&cb.weyl, &a, &b);
        let worst = d.0.iter().map(|j| j.value().abs()).fold(0.0, f64::max);
        assert!(worst < 1e-9 * scale, "defect {worst}");
        let (_, kappa) = chi2_kappa_of(&jf).unwrap();
        assert!((cb.scalar.value() - 1.5 * kappa.value()).abs() < 1e-9);
        assert!(cb.weyl_traces().iter().all(|t| t.value().abs() < 1e-9));
        assert!(cb.riemann_symmetry_defects().iter().all(|t| t.value().abs() < 1e-9));
    }
}

#[test]
fn frozen_slots() {
    assert_eq!(ALPHA_SLOT.0, [0, 1, 0, 1]);
    assert_eq!(BETA_SLOT.0, [0, 1, 0, 2]);
    let li = LeftInvariant::new(StructureConstants::<Rational>::unimodular(q(2, 1), q(1, 1)));
    let cb = curvature(&li).unwrap();
    assert_eq!(*cb.weyl.at(0, 1, 0, 1), q(-3, 1));
}

#[test]
fn left_invariant_closed_forms_match_weyl() {
    let mut rng = StdRng::seed_from_u64(7);
    for n in 0..20 {
        let fam = [Family::Unimodular, Family::SolvPlus, Family::SolvMinus][n % 3];
        let sc = sample_canonical(&mut rng, fam);
        let li = LeftInvariant::new(sc.clone());
        let cb = curvature(&li).unwrap();
        let (wa, wb) = alpha_beta_from_weyl(&cb.weyl);
        assert_eq!((wa.clone(), wb.clone()), alpha_beta_left_invariant(&sc));
        assert_eq!((wa.clone(), wb.clone()), alpha_beta_closed_form(&li).unwrap());
        assert!(weyl_pattern_defects(&cb.weyl, &wa, &wb).0.iter().all(|d| d.all_zero()));
        let (chi2, kappa) = chi2_kappa(&sc);
        assert_eq!(cb.scalar, kappa * q(3, 2));
        assert_eq!(cb.norm_squared(&cb.nabla_inf_riemann()) * q(9, 16), chi2);
    }
}

#[test]
fn alpha_beta_scale_by_e_minus_four_phi() {
    let fr = Frame::solv_plus(Expr::one(), Expr::ratio(1, 1));
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..3 {
        let phi = random_polynomial(&mut rng, 3);
        for pt in [[0.1, 0.2, -0.3], [-0.4, 0.0, 0.5], [0.7, -0.6, 0.1]] {
            let jf = fr.at(&pt, 6, 1e-10).unwrap();
            let r = verify_alpha_beta_scaling(&jf, &phi.jet(&pt, 6).unwrap(), 1e-8).unwrap();
            assert!(r.alpha < 1e-8 && r.beta < 1e-8, "{r:?}");
        }
    }
}

#[test]
fn rescaling_composes_additively() {
    let fr = Frame::model(ModelKind::UnimodularI);
    let phi = p("(+ (* 1/3 x) (* 1/5 y z))");
    let psi = p("(* 1/7 (+ x y z))");
    let pt = [0.2, -0.1, 0.3];
    let twice = rescale_frame(&rescale_frame(&fr, &phi), &psi).at(&pt, 4, 1e-10).unwrap();
    let once = rescale_frame(&fr, &(phi.clone() + psi.clone())).at(&pt, 4, 1e-10).unwrap();
    for k in 0..3 {
        for c in 0..3 {
            assert!((twice.fields[k].0[c].clone() - once.fields[k].0[c].clone()).max_abs() < 1e-10);
        }
    }
    let jf = fr.at(&pt, 6, 1e-10).unwrap();
    let (pj, sj) = (phi.jet(&pt, 6).unwrap(), psi.jet(&pt, 6).unwrap());
    let r1 = Rescaled::new(&jf, pj.clone()).unwrap();
    let r2 = Rescaled::new(&r1, sj.clone()).unwrap();
    let r3 = Rescaled::new(&jf, pj + sj).unwrap();
    for (a, b) in r2.constants().to_array().iter().zip(r3.constants().to_array()) {
        assert!((a.clone() - b).max_abs() < 1e-10);
    }
}

#[test]
fn rescaled_contact_plane_area() {
    // ν¹φ ∧ ν²φ restricted to the plane is e^{2φ} ν¹ ∧ ν²
    let fr = Frame::solv_plus(Expr::int(1), Expr::ratio(1, 2));
    let phi = p("(+ (* 1/3 x y) (* -1/4 z))");
    let pt = [0.3, 0.2, -0.1];
    let rf = rescale_frame(&fr, &phi).at(&pt, 3, 1e-10).unwrap();
    let base = fr.at(&pt, 3, 1e-10).unwrap();
    let c1 = rf.components(&base.fields[1]).unwrap();
    let c2 = rf.components(&base.fields[2]).unwrap();
    let area = c1[1].clone() * c2[2].clone() - c1[2].clone() * c2[1].clone();
    let e = (2.0 * phi.jet(&pt, 0).unwrap().value()).exp();
    assert!((area.value() - e).abs() < 1e-12);
}

#[test]
fn constant_rescaling_is_exact_scaling() {
    let sc = StructureConstants::<f64>::solv_plus(1.0, 1.0);
    let li = LeftInvariant::new(sc);
    let r = alpha_beta_scaling_residuals(&li, &0.35).unwrap();
    assert!(r.alpha < 1e-14 && r.weyl_alpha < 1e-14);
}
