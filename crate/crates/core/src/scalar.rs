//! Scalar backends and the ring abstraction shared by the curvature pipeline.
//!
//! Three scalar types are supported: exact rationals (`Rational`), real
//! floats (`f64`) and complex floats (`Complex64`). Transcendental functions
//! are only available on the float types; the rational backend evaluates them
//! exactly at zero and refuses everywhere else.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, an integer, or a finite decimal (`-0.125`, `1e-3`) exactly.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty number".into());
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| format!("bad numerator `{num}`"))?;
        let d: BigInt = den.trim().parse().map_err(|_| format!("bad denominator `{den}`"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = t[pos + 1..]
                .parse()
                .map_err(|_| format!("bad exponent in `{t}`"))?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("not a number: `{t}`"));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(format!("not a number: `{t}`"));
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().unwrap();
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(all);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back through string for huge numerators/denominators
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// `re + i·im`; `None` when the backend cannot represent it.
    fn from_gaussian(re: &Rational, im: &Rational) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    /// The exact rational value (binary expansion for floats); `None` for
    /// non-real or non-finite values.
    fn to_rational(&self) -> Option<Rational>;
    fn magnitude(&self) -> f64;
    fn is_exact_zero(&self) -> bool;

    fn sqrt(&self) -> Result<Self>;
    fn exp(&self) -> Result<Self>;
    fn ln(&self) -> Result<Self>;
    fn sin(&self) -> Result<Self>;
    fn cos(&self) -> Result<Self>;

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&q(n, d))
    }

    fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x)
            .map(|r| Self::from_rational(&r))
            .ok_or_else(|| Error::Inexact(format!("non-finite value {x}")))
    }

    fn is_zero_within(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_exact_zero()
        } else {
            self.magnitude() <= tol
        }
    }

    fn real(&self) -> f64 {
        self.to_complex().re
    }
}

fn inexact(op: &str) -> Error {
    Error::Inexact(format!("{op} of a nonzero rational"))
}

impl Scalar for Rational {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_gaussian(re: &Rational, im: &Rational) -> Option<Self> {
        im.is_zero().then(|| re.clone())
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
    fn is_exact_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sqrt(&self) -> Result<Self> {
        rational_sqrt(self).ok_or_else(|| Error::Inexact(format!("sqrt({self})")))
    }
    fn exp(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Ok(One::one())
        } else {
            Err(inexact("exp"))
        }
    }
    fn ln(&self) -> Result<Self> {
        if One::is_one(self) {
            Ok(Zero::zero())
        } else {
            Err(inexact("ln"))
        }
    }
    fn sin(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Ok(Zero::zero())
        } else {
            Err(inexact("sin"))
        }
    }
    fn cos(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Ok(One::one())
        } else {
            Err(inexact("cos"))
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn from_gaussian(re: &Rational, im: &Rational) -> Option<Self> {
        im.is_zero().then(|| rational_to_f64(re))
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn to_rational(&self) -> Option<Rational> {
        BigRational::from_float(*self)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_exact_zero(&self) -> bool {
        *self == 0.0
    }
    fn sqrt(&self) -> Result<Self> {
        if *self < 0.0 {
            Err(Error::NegativeRadicand { value: *self })
        } else {
            Ok(f64::sqrt(*self))
        }
    }
    fn exp(&self) -> Result<Self> {
        Ok(f64::exp(*self))
    }
    fn ln(&self) -> Result<Self> {
        if *self <= 0.0 {
            Err(Error::DomainViolation(format!("ln({self})")))
        } else {
            Ok(f64::ln(*self))
        }
    }
    fn sin(&self) -> Result<Self> {
        Ok(f64::sin(*self))
    }
    fn cos(&self) -> Result<Self> {
        Ok(f64::cos(*self))
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    const NAME: &'static str = "complex";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(rational_to_f64(r), 0.0)
    }
    fn from_gaussian(re: &Rational, im: &Rational) -> Option<Self> {
        Some(Complex64::new(rational_to_f64(re), rational_to_f64(im)))
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn to_rational(&self) -> Option<Rational> {
        if self.im == 0.0 {
            BigRational::from_float(self.re)
        } else {
            None
        }
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_exact_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn sqrt(&self) -> Result<Self> {
        Ok(Complex64::sqrt(*self))
    }
    fn exp(&self) -> Result<Self> {
        Ok(Complex64::exp(*self))
    }
    fn ln(&self) -> Result<Self> {
        if self.is_exact_zero() {
            Err(Error::DomainViolation("ln(0)".into()))
        } else {
            Ok(Complex64::ln(*self))
        }
    }
    fn sin(&self) -> Result<Self> {
        Ok(Complex64::sin(*self))
    }
    fn cos(&self) -> Result<Self> {
        Ok(Complex64::cos(*self))
    }
}

/// Commutative ring elements the geometric pipeline computes with: plain
/// scalars for left-invariant structures, jets for coordinate frames.
pub trait Ring:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Scalar: Scalar;

    /// Multiply by the rational `n/d`.
    fn scale(&self, n: i64, d: i64) -> Self;
    fn scale_by(&self, s: &Self::Scalar) -> Self;
    /// Value at the base point.
    fn value(&self) -> Self::Scalar;
    /// Largest coefficient magnitude (for jets, over all retained orders).
    fn max_abs(&self) -> f64;
    fn all_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn constant_like(&self, s: Self::Scalar) -> Self;
    fn try_exp(&self) -> Result<Self>;

    fn negligible(&self, tol: f64) -> bool {
        if <Self::Scalar as Scalar>::EXACT {
            self.all_zero()
        } else {
            self.max_abs() <= tol
        }
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl<S: Scalar> Ring for S {
    type Scalar = S;

    fn scale(&self, n: i64, d: i64) -> Self {
        self.clone() * S::from_ratio(n, d)
    }
    fn scale_by(&self, s: &S) -> Self {
        self.clone() * s.clone()
    }
    fn value(&self) -> S {
        self.clone()
    }
    fn max_abs(&self) -> f64 {
        self.magnitude()
    }
    fn all_zero(&self) -> bool {
        Scalar::is_exact_zero(self)
    }
    fn zero_like(&self) -> Self {
        S::zero()
    }
    fn constant_like(&self, s: S) -> Self {
        s
    }
    fn try_exp(&self) -> Result<Self> {
        Scalar::exp(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_decimals_and_fractions() {
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse_rational("2").unwrap(), qi(2));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("2.5E1").unwrap(), qi(25));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn rational_sqrt_only_for_perfect_squares() {
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&q(2, 1)), None);
        assert_eq!(rational_sqrt(&q(-1, 1)), None);
    }

    #[test]
    fn rational_transcendentals_are_exact_at_zero_only() {
        let zero = qi(0);
        assert_eq!(Scalar::exp(&zero).unwrap(), qi(1));
        assert_eq!(Scalar::cos(&zero).unwrap(), qi(1));
        assert!(Scalar::exp(&qi(1)).is_err());
    }
}
