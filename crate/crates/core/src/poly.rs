//! Sparse polynomials in `x, y, z` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

pub type Exponent = [u32; 3];

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Exponent, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Rational) -> Self {
        Poly::monomial([0, 0, 0], c)
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(Rational::from_integer(n.into()))
    }

    pub fn monomial(e: Exponent, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { terms }
    }

    pub fn var(k: usize) -> Self {
        let mut e = [0; 3];
        e[k] = 1;
        Poly::monomial(e, Rational::one())
    }

    pub fn x() -> Self {
        Poly::var(0)
    }

    pub fn y() -> Self {
        Poly::var(1)
    }

    pub fn z() -> Self {
        Poly::var(2)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64, d: i64) -> Self {
        self.scale(&Rational::new(n.into(), d.into()))
    }

    pub fn diff(&self, k: usize) -> Self {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut f = *e;
                f[k] -= 1;
                out.add_term(f, c * Rational::from_integer(e[k].into()));
            }
        }
        out
    }

    fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Weighted degree with weights `w(x) = w(y) = 1`, `w(z) = 2`; `None`
    /// for the zero polynomial.
    pub fn weighted_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + 2 * e[2]).max()
    }

    /// Whether every term has weighted degree `d`.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| e[0] + e[1] + 2 * e[2] == d)
    }

    /// Total degree in the ordinary sense.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = ["x", "y", "z"];
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = (0..3)
                .filter(|&k| e[k] > 0)
                .map(|k| if e[k] == 1 { names[k].to_string() } else { format!("{}^{}", names[k], e[k]) })
                .collect();
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `X = X^x ∂x + X^y ∂y + X^z ∂z` with polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyVectorField {
    pub c: [Poly; 3],
}

impl PolyVectorField {
    pub fn new(dx: Poly, dy: Poly, dz: Poly) -> Self {
        PolyVectorField { c: [dx, dy, dz] }
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        (0..3).fold(Poly::zero(), |acc, k| acc + &self.c[k] * &p.diff(k))
    }

    /// `[X, Y] = XY − YX` on functions.
    pub fn bracket(&self, other: &Self) -> Self {
        PolyVectorField {
            c: std::array::from_fn(|k| self.apply(&other.c[k]) - other.apply(&self.c[k])),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        PolyVectorField {
            c: self.c.clone().map(|p| p.scale(s)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Poly::is_zero)
    }

    /// Weight of a homogeneous field (`w(∂x) = w(∂y) = −1`, `w(∂z) = −2`),
    /// or `None` if the field mixes weights.
    pub fn weight(&self) -> Option<i32> {
        let mut w = None;
        for (k, p) in self.c.iter().enumerate() {
            let shift = if k == 2 { 2 } else { 1 };
            for e in p.terms.keys() {
                let here = (e[0] + e[1] + 2 * e[2]) as i32 - shift;
                match w {
                    None => w = Some(here),
                    Some(v) if v != here => return None,
                    _ => {}
                }
            }
        }
        w
    }
}

impl Add for PolyVectorField {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let [a, b, c] = self.c;
        let [d, e, f] = rhs.c;
        PolyVectorField::new(a + d, b + e, c + f)
    }
}

impl Neg for PolyVectorField {
    type Output = Self;
    fn neg(self) -> Self {
        PolyVectorField { c: self.c.map(|p| -p) }
    }
}

impl fmt::Display for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) ∂x + ({}) ∂y + ({}) ∂z", self.c[0], self.c[1], self.c[2])
    }
}
