//! Structure constants of a left-invariant contact frame, the metric
//! invariants `chi` and `kappa`, canonical-frame checks and classification.
//!
//! The frame `f0, f1, f2` satisfies
//!
//! ```text
//! [f2, f1] = f0 + c12_1 f1 + c12_2 f2
//! [f1, f0] =      c10_1 f1 + c10_2 f2
//! [f2, f0] =      c20_1 f1 + c20_2 f2
//! ```

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, q, rational_to_f64, Rational, Ring, Scalar};

/// Names of the six constants in storage order.
pub const CONSTANT_NAMES: [&str; 6] = ["c12_1", "c12_2", "c10_1", "c10_2", "c20_1", "c20_2"];

#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<T> {
    pub c12_1: T,
    pub c12_2: T,
    pub c10_1: T,
    pub c10_2: T,
    pub c20_1: T,
    pub c20_2: T,
}

impl<T: Clone> StructureConstants<T> {
    pub fn from_array(a: [T; 6]) -> Self {
        let [c12_1, c12_2, c10_1, c10_2, c20_1, c20_2] = a;
        StructureConstants {
            c12_1,
            c12_2,
            c10_1,
            c10_2,
            c20_1,
            c20_2,
        }
    }

    pub fn to_array(&self) -> [T; 6] {
        [
            self.c12_1.clone(),
            self.c12_2.clone(),
            self.c10_1.clone(),
            self.c10_2.clone(),
            self.c20_1.clone(),
            self.c20_2.clone(),
        ]
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> StructureConstants<U> {
        let a = self.to_array();
        StructureConstants::from_array([f(&a[0]), f(&a[1]), f(&a[2]), f(&a[3]), f(&a[4]), f(&a[5])])
    }

    pub fn try_map<U: Clone>(&self, f: impl Fn(&T) -> Result<U>) -> Result<StructureConstants<U>> {
        let a = self.to_array();
        Ok(StructureConstants::from_array([
            f(&a[0])?,
            f(&a[1])?,
            f(&a[2])?,
            f(&a[3])?,
            f(&a[4])?,
            f(&a[5])?,
        ]))
    }
}

impl<S: Scalar> StructureConstants<S> {
    pub fn zero() -> Self {
        Self::from_array(std::array::from_fn(|_| S::zero()))
    }

    /// Unimodular canonical constants with the given invariants.
    pub fn unimodular(chi: S, kappa: S) -> Self {
        let mut sc = Self::zero();
        sc.c10_2 = chi.clone() + kappa.clone();
        sc.c20_1 = chi - kappa;
        sc
    }

    /// Canonical solv+ constants `[f2,f1] = f0 + c f2`, `[f1,f0] = k f2`.
    pub fn solv_plus(c12_2: S, c10_2: S) -> Self {
        let mut sc = Self::zero();
        sc.c12_2 = c12_2;
        sc.c10_2 = c10_2;
        sc
    }

    /// Canonical solv- constants `[f2,f1] = f0 + c f1`, `[f2,f0] = k f1`.
    pub fn solv_minus(c12_1: S, c20_1: S) -> Self {
        let mut sc = Self::zero();
        sc.c12_1 = c12_1;
        sc.c20_1 = c20_1;
        sc
    }

    /// Relabels `(f1, f2) -> (f2, f1)`; the contact form changes sign, so `f0 -> -f0`.
    pub fn swap_orientation(&self) -> Self {
        StructureConstants {
            c12_1: -self.c12_2.clone(),
            c12_2: -self.c12_1.clone(),
            c10_1: -self.c20_2.clone(),
            c10_2: -self.c20_1.clone(),
            c20_1: -self.c10_2.clone(),
            c20_2: -self.c10_1.clone(),
        }
    }

    /// The frame `(-f1, -f2, f0)`.
    pub fn flip_signs(&self) -> Self {
        StructureConstants {
            c12_1: -self.c12_1.clone(),
            c12_2: -self.c12_2.clone(),
            ..self.clone()
        }
    }

    pub fn is_unimodular(&self, tol: f64) -> bool {
        self.c12_1.is_zero_within(tol) && self.c12_2.is_zero_within(tol)
    }

    pub fn to_f64(&self) -> StructureConstants<f64> {
        self.map(|s| s.real())
    }

    /// Residuals of the contact and Jacobi conditions for constant coefficients.
    pub fn compatibility_residuals(&self) -> [S; 3] {
        [
            self.c10_1.clone() + self.c20_2.clone(),
            self.c12_2.clone() * self.c10_1.clone() - self.c12_1.clone() * self.c10_2.clone(),
            self.c12_2.clone() * self.c20_1.clone() - self.c12_1.clone() * self.c20_2.clone(),
        ]
    }
}

impl StructureConstants<Rational> {
    pub fn from_ints(a: [i64; 6]) -> Self {
        Self::from_array(a.map(|n| q(n, 1)))
    }
}

impl<T: fmt::Display> fmt::Display for StructureConstants<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = [&self.c12_1, &self.c12_2, &self.c10_1, &self.c10_2, &self.c20_1, &self.c20_2];
        for (i, (name, v)) in CONSTANT_NAMES.iter().zip(a).enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{name}={v}")?;
        }
        Ok(())
    }
}

/// Sign of a scalar relative to a tolerance (exact for rationals).
pub fn sign<S: Scalar>(s: &S, tol: f64) -> Ordering {
    if s.is_zero_within(tol) {
        Ordering::Equal
    } else if s.real() > 0.0 {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContactInvariants<S> {
    pub chi: S,
    pub kappa: S,
}

/// The radicand of `chi` and `kappa` for ring-valued structure functions,
/// with the frame derivatives `f1(c12_2)` and `f2(c12_1)` supplied.
pub fn chi_squared_kappa<R: Ring>(sc: &StructureConstants<R>, f1_c12_2: R, f2_c12_1: R) -> (R, R) {
    let mid = (sc.c10_2.clone() + sc.c20_1.clone()).scale(1, 2);
    let chi2 = mid.square() - sc.c10_1.clone() * sc.c20_2.clone();
    let kappa = f2_c12_1 - f1_c12_2 - sc.c12_1.square() - sc.c12_2.square()
        + (sc.c10_2.clone() - sc.c20_1.clone()).scale(1, 2);
    (chi2, kappa)
}

/// Square root of a `chi` radicand, clamping tiny negative float noise to zero.
pub fn chi_from_radicand<S: Scalar>(radicand: &S) -> Result<S> {
    const CLAMP: f64 = 1e-12;
    if radicand.is_exact_zero() || (!S::EXACT && radicand.magnitude() <= CLAMP) {
        return Ok(S::zero());
    }
    if radicand.real() < 0.0 {
        return Err(Error::NegativeRadicand {
            value: radicand.real(),
        });
    }
    radicand.sqrt()
}

/// `chi` and `kappa` of constant structure coefficients.
pub fn chi_kappa<S: Scalar>(sc: &StructureConstants<S>) -> Result<ContactInvariants<S>> {
    let (chi2, kappa) = chi_squared_kappa(sc, S::zero(), S::zero());
    Ok(ContactInvariants {
        chi: chi_from_radicand(&chi2)?,
        kappa,
    })
}

/// `chi^2` and `kappa` without the square root (always exact).
pub fn chi2_kappa<S: Scalar>(sc: &StructureConstants<S>) -> (S, S) {
    chi_squared_kappa(sc, S::zero(), S::zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalCase {
    ChiNonzero,
    ChiZero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalReport {
    pub canonical: bool,
    pub case: CanonicalCase,
    pub violations: Vec<String>,
    /// `c10_2 + c20_1 >= 0`.
    pub orientation_normalized: bool,
    /// For solv+ shapes, whether `c12_2 > 0`.
    pub solv_plus_sign: Option<bool>,
}

pub fn validate_canonical<S: Scalar>(sc: &StructureConstants<S>, tol: f64) -> CanonicalReport {
    let (chi2, kappa) = chi2_kappa(sc);
    let mut violations = Vec::new();
    let mut need_zero = |name: &str, v: &S| {
        if !v.is_zero_within(tol) {
            violations.push(format!("{name} = {} (expected 0)", v.real()));
        }
    };
    let case = if chi2.is_zero_within(tol) {
        CanonicalCase::ChiZero
    } else {
        CanonicalCase::ChiNonzero
    };
    need_zero("c10_1", &sc.c10_1);
    need_zero("c20_2", &sc.c20_2);
    if case == CanonicalCase::ChiZero {
        need_zero("c12_1", &sc.c12_1);
        need_zero("c12_2", &sc.c12_2);
        need_zero("c10_2 - kappa", &(sc.c10_2.clone() - kappa.clone()));
        need_zero("c20_1 + kappa", &(sc.c20_1.clone() + kappa));
    }
    let orientation_normalized = sign(&(sc.c10_2.clone() + sc.c20_1.clone()), tol) != Ordering::Less;
    let solv_plus_shape = sc.c12_1.is_zero_within(tol)
        && sc.c20_1.is_zero_within(tol)
        && !sc.c12_2.is_zero_within(tol);
    CanonicalReport {
        canonical: violations.is_empty(),
        case,
        violations,
        orientation_normalized,
        solv_plus_sign: solv_plus_shape.then(|| sign(&sc.c12_2, tol) == Ordering::Greater),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LieAlgebraKind {
    H3,
    ARPlusR,
    SolvPlus,
    SolvMinus,
    Se2,
    Sh2,
    Sl2Elliptic,
    Sl2Hyperbolic,
    Su2,
}

impl LieAlgebraKind {
    pub fn name(self) -> &'static str {
        match self {
            LieAlgebraKind::H3 => "h3",
            LieAlgebraKind::ARPlusR => "a_R_plus_R",
            LieAlgebraKind::SolvPlus => "solv_plus",
            LieAlgebraKind::SolvMinus => "solv_minus",
            LieAlgebraKind::Se2 => "se2",
            LieAlgebraKind::Sh2 => "sh2",
            LieAlgebraKind::Sl2Elliptic => "sl2_elliptic",
            LieAlgebraKind::Sl2Hyperbolic => "sl2_hyperbolic",
            LieAlgebraKind::Su2 => "su2",
        }
    }

    pub fn is_unimodular(self) -> bool {
        !matches!(
            self,
            LieAlgebraKind::ARPlusR | LieAlgebraKind::SolvPlus | LieAlgebraKind::SolvMinus
        )
    }
}

impl fmt::Display for LieAlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Kind of the Lie algebra spanned by a canonical frame.
///
/// On the unimodular circle the rays `kappa = chi` and `kappa = -chi` are
/// `se2` and `sh2`; the open arcs between them are `su2` (`kappa > chi`),
/// `sl2_hyperbolic` and `sl2_elliptic` (`kappa < -chi`).
pub fn classify<S: Scalar>(sc: &StructureConstants<S>, tol: f64) -> Result<LieAlgebraKind> {
    let (chi2, kappa) = chi2_kappa(sc);
    let chi = chi_from_radicand(&chi2)?;
    let z = |s: &S| s.is_zero_within(tol);
    if sc.to_array().iter().all(z) {
        return Ok(LieAlgebraKind::H3);
    }
    if sc.is_unimodular(tol) {
        if !z(&sc.c10_1) || !z(&sc.c20_2) {
            return Err(Error::Unclassifiable(format!("unimodular but not canonical: {}", sc.to_f64())));
        }
        let upper = sign(&(kappa.clone() - chi.clone()), tol);
        let lower = sign(&(kappa + chi), tol);
        return Ok(match (upper, lower) {
            (Ordering::Greater, _) => LieAlgebraKind::Su2,
            (Ordering::Equal, Ordering::Greater) => LieAlgebraKind::Se2,
            (Ordering::Equal, _) => LieAlgebraKind::H3,
            (Ordering::Less, Ordering::Greater) => LieAlgebraKind::Sl2Hyperbolic,
            (Ordering::Less, Ordering::Equal) => LieAlgebraKind::Sh2,
            (Ordering::Less, Ordering::Less) => LieAlgebraKind::Sl2Elliptic,
        });
    }
    if z(&chi2) {
        return Ok(LieAlgebraKind::ARPlusR);
    }
    if z(&sc.c12_1) && z(&sc.c20_1) && z(&sc.c10_1) && z(&sc.c20_2) {
        return Ok(LieAlgebraKind::SolvPlus);
    }
    if z(&sc.c12_2) && z(&sc.c10_2) && z(&sc.c10_1) && z(&sc.c20_2) {
        return Ok(LieAlgebraKind::SolvMinus);
    }
    Err(Error::Unclassifiable(sc.to_f64().to_string()))
}

/// `(chi, kappa) / sqrt(chi^2 + kappa^2)`, or `None` at the origin.
pub fn normalized_position(chi: f64, kappa: f64) -> Option<(f64, f64)> {
    let r = chi.hypot(kappa);
    (r > 0.0).then(|| (chi / r, kappa / r))
}

/// Conformal invariants `(alpha, beta)` of a canonical left-invariant frame.
pub fn alpha_beta_left_invariant<S: Scalar>(sc: &StructureConstants<S>) -> (S, S) {
    let alpha = (sc.c12_2.square() * sc.c10_2.clone()).scale(1, 12)
        - sc.c10_2.square().scale(3, 8)
        + (sc.c12_1.square() * sc.c20_1.clone()).scale(1, 12)
        + sc.c20_1.square().scale(3, 8);
    (alpha, S::zero())
}

/// Parses the `key = value` structure-spec format.
///
/// Keys are the six constant names; missing keys default to zero. Values are
/// integers, `p/q` fractions or decimals, all read exactly. `#` starts a comment.
pub fn parse_spec(text: &str) -> Result<StructureConstants<Rational>> {
    let mut values: [Option<Rational>; 6] = Default::default();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        let slot = CONSTANT_NAMES
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| err(format!("unknown key `{key}`")))?;
        if values[slot].is_some() {
            return Err(err(format!("duplicate key `{key}`")));
        }
        values[slot] = Some(parse_rational(value).map_err(err)?);
    }
    Ok(StructureConstants::from_array(values.map(|v| v.unwrap_or_else(|| q(0, 1)))))
}

pub fn format_spec(sc: &StructureConstants<Rational>) -> String {
    sc.to_array()
        .iter()
        .zip(CONSTANT_NAMES)
        .map(|(v, k)| format!("{k} = {v}\n"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Unimodular,
    SolvPlus,
    SolvMinus,
}

/// A random canonical structure with small exact rational constants.
pub fn sample_canonical<G: Rng>(rng: &mut G, family: Family) -> StructureConstants<Rational> {
    let mut small = |lo: i64, hi: i64| q(rng.gen_range(lo..=hi), rng.gen_range(1..=4));
    match family {
        Family::Unimodular => {
            let chi = small(0, 8);
            let kappa = small(-8, 8);
            StructureConstants::unimodular(chi, kappa)
        }
        Family::SolvPlus => {
            let c = small(1, 8);
            let k = small(1, 8);
            StructureConstants::solv_plus(c, k)
        }
        Family::SolvMinus => {
            let c = small(1, 8);
            let k = small(1, 8);
            StructureConstants::solv_minus(c, k)
        }
    }
}

pub fn rational_invariants_f64(sc: &StructureConstants<Rational>) -> (f64, f64) {
    let (chi2, kappa) = chi2_kappa(sc);
    (rational_to_f64(&chi2).max(0.0).sqrt(), rational_to_f64(&kappa))
}
