//! Truncated Taylor expansions in three coordinates.
//!
//! A [`Jet`] of order `n` stores the Taylor coefficients `a[i,j,k]` of
//! `Σ a[i,j,k] dx^i dy^j dz^k` for `i + j + k ≤ n`, relative to an implicit
//! base point. Differentiation lowers the order by one; binary operations
//! keep the smaller of the two orders.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::{Ring, Scalar};

pub const MAX_ORDER: usize = 16;
pub const DEFAULT_ORDER: usize = 6;

/// Coordinate index: 0 = x, 1 = y, 2 = z.
pub type Var = usize;

fn monomial_table() -> &'static [[usize; 3]] {
    static TABLE: OnceLock<Vec<[usize; 3]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::new();
        for d in 0..=MAX_ORDER {
            for i in (0..=d).rev() {
                for j in (0..=d - i).rev() {
                    out.push([i, j, d - i - j]);
                }
            }
        }
        out
    })
}

/// Number of monomials of total degree at most `order`.
pub fn monomial_count(order: usize) -> usize {
    (order + 1) * (order + 2) * (order + 3) / 6
}

pub fn monomial_index(e: [usize; 3]) -> usize {
    let d = e[0] + e[1] + e[2];
    let offset = if d == 0 { 0 } else { monomial_count(d - 1) };
    let r = d - e[0];
    offset + r * (r + 1) / 2 + (d - e[0] - e[1])
}

pub fn monomial(idx: usize) -> [usize; 3] {
    monomial_table()[idx]
}

#[derive(Clone, Debug, PartialEq)]
pub struct Jet<S> {
    order: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> Jet<S> {
    pub fn constant(value: S, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut coeffs = vec![S::zero(); monomial_count(order)];
        coeffs[0] = value;
        Jet { order, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(S::zero(), order)
    }

    /// The coordinate function `var`, whose value at the base point is `base`.
    pub fn variable(var: Var, base: S, order: usize) -> Self {
        let mut jet = Self::constant(base, order);
        if order > 0 {
            let mut e = [0; 3];
            e[var] = 1;
            jet.coeffs[monomial_index(e)] = S::one();
        }
        jet
    }

    pub fn from_coeffs(order: usize, coeffs: Vec<S>) -> Self {
        assert_eq!(coeffs.len(), monomial_count(order));
        Jet { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, e: [usize; 3]) -> S {
        if e.iter().sum::<usize>() > self.order {
            S::zero()
        } else {
            self.coeffs[monomial_index(e)].clone()
        }
    }

    pub fn value(&self) -> S {
        self.coeffs[0].clone()
    }

    /// Partial derivative `∂/∂var` of the jet at the base point, evaluated
    /// by the factorial-weighted coefficient (`∂^α f = α! a_α`).
    pub fn partial_at_base(&self, e: [usize; 3]) -> S {
        let mut factor = S::one();
        for &k in &e {
            for m in 2..=k {
                factor = factor * S::from_ratio(m as i64, 1);
            }
        }
        self.coeff(e) * factor
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Jet {
            order,
            coeffs: self.coeffs[..monomial_count(order)].to_vec(),
        }
    }

    pub fn derivative(&self, var: Var) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::OrderExhausted {
                needed: 1,
                available: 0,
            });
        }
        let order = self.order - 1;
        let coeffs = (0..monomial_count(order))
            .map(|idx| {
                let mut e = monomial(idx);
                e[var] += 1;
                let k = e[var];
                self.coeffs[monomial_index(e)].clone() * S::from_ratio(k as i64, 1)
            })
            .collect();
        Ok(Jet { order, coeffs })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Jet<T> {
        Jet {
            order: self.order,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn binary(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..monomial_count(order))
            .map(|i| f(&self.coeffs[i], &other.coeffs[i]))
            .collect();
        Jet { order, coeffs }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut coeffs = vec![S::zero(); monomial_count(order)];
        for a in 0..monomial_count(order) {
            let ca = &self.coeffs[a];
            if ca.is_exact_zero() {
                continue;
            }
            let ea = monomial(a);
            let da = ea[0] + ea[1] + ea[2];
            for b in 0..monomial_count(order - da) {
                let cb = &other.coeffs[b];
                if cb.is_exact_zero() {
                    continue;
                }
                let eb = monomial(b);
                let idx = monomial_index([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]]);
                coeffs[idx] = coeffs[idx].clone() + ca.clone() * cb.clone();
            }
        }
        Jet { order, coeffs }
    }

    fn nilpotent_part(&self) -> Self {
        let mut v = self.clone();
        v.coeffs[0] = S::zero();
        v
    }

    /// `Σ_n weights[n] v^n` for the nilpotent part `v`; the series terminates
    /// at the jet order.
    fn series(&self, weights: impl Fn(usize) -> S) -> Self {
        let v = self.nilpotent_part();
        let mut out = Jet::constant(weights(0), self.order);
        let mut power = Jet::constant(S::one(), self.order);
        for n in 1..=self.order {
            power = power.mul_ref(&v);
            let w = weights(n);
            if !w.is_exact_zero() {
                out = out + power.scale_by(&w);
            }
        }
        out
    }

    pub fn recip(&self) -> Result<Self> {
        let c = self.value();
        if c.is_exact_zero() {
            return Err(Error::DomainViolation("reciprocal of a jet with zero value".into()));
        }
        let inv = S::one() / c;
        let neg_inv = -inv.clone();
        let mut pow = inv.clone();
        let mut w = vec![inv];
        for _ in 1..=self.order {
            pow = pow * neg_inv.clone();
            w.push(pow.clone());
        }
        Ok(self.series(|n| w[n].clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.recip()?))
    }

    pub fn exp(&self) -> Result<Self> {
        let e0 = self.value().exp()?;
        let mut w = vec![e0.clone()];
        let mut fact = S::one();
        for n in 1..=self.order {
            fact = fact * S::from_ratio(n as i64, 1);
            w.push(e0.clone() / fact.clone());
        }
        Ok(self.series(|n| w[n].clone()))
    }

    pub fn ln(&self) -> Result<Self> {
        let c = self.value();
        let l0 = c.ln()?;
        let inv = S::one() / c;
        let mut w = vec![l0];
        let mut pow = S::one();
        for n in 1..=self.order {
            pow = pow * inv.clone();
            let sign = if n % 2 == 1 { 1 } else { -1 };
            w.push(pow.clone() * S::from_ratio(sign, n as i64));
        }
        Ok(self.series(|n| w[n].clone()))
    }

    pub fn sin(&self) -> Result<Self> {
        let (s0, c0) = (self.value().sin()?, self.value().cos()?);
        let w = trig_weights(&s0, &c0, self.order, false);
        Ok(self.series(|n| w[n].clone()))
    }

    pub fn cos(&self) -> Result<Self> {
        let (s0, c0) = (self.value().sin()?, self.value().cos()?);
        let w = trig_weights(&s0, &c0, self.order, true);
        Ok(self.series(|n| w[n].clone()))
    }

    /// Real power through `exp(a·ln u)`.
    pub fn powf(&self, exponent: &S) -> Result<Self> {
        self.ln()?.scale_by(exponent).exp()
    }

    pub fn sqrt(&self) -> Result<Self> {
        self.powf(&S::from_ratio(1, 2))
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Jet::constant(S::one(), self.order);
        for _ in 0..n {
            out = out.mul_ref(self);
        }
        out
    }
}

/// Taylor weights of `sin(c + v)` (or `cos` when `cosine`) in powers of `v`.
fn trig_weights<S: Scalar>(s0: &S, c0: &S, order: usize, cosine: bool) -> Vec<S> {
    let mut w = Vec::with_capacity(order + 1);
    let mut fact = S::one();
    for n in 0..=order {
        if n > 0 {
            fact = fact * S::from_ratio(n as i64, 1);
        }
        // n-th derivative of sin at c0 cycles sin, cos, -sin, -cos
        let phase = if cosine { n + 1 } else { n };
        let d = match phase % 4 {
            0 => s0.clone(),
            1 => c0.clone(),
            2 => -s0.clone(),
            _ => -c0.clone(),
        };
        w.push(d / fact.clone());
    }
    w
}

impl<S: Scalar> Add for Jet<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.binary(&rhs, |a, b| a.clone() + b.clone())
    }
}

impl<S: Scalar> Sub for Jet<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.binary(&rhs, |a, b| a.clone() - b.clone())
    }
}

impl<S: Scalar> Mul for Jet<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<S: Scalar> Neg for Jet<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet {
            order: self.order,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<S: Scalar> Ring for Jet<S> {
    type Scalar = S;

    fn scale(&self, n: i64, d: i64) -> Self {
        self.scale_by(&S::from_ratio(n, d))
    }
    fn scale_by(&self, s: &S) -> Self {
        Jet {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }
    fn value(&self) -> S {
        self.coeffs[0].clone()
    }
    fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
    fn all_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact_zero())
    }
    fn zero_like(&self) -> Self {
        Jet::zero(self.order)
    }
    fn constant_like(&self, s: S) -> Self {
        Jet::constant(s, self.order)
    }
    fn try_exp(&self) -> Result<Self> {
        Jet::exp(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    #[test]
    fn monomial_indexing_is_a_bijection() {
        for idx in 0..monomial_count(MAX_ORDER) {
            assert_eq!(monomial_index(monomial(idx)), idx);
        }
        assert_eq!(monomial_count(6), 84);
    }

    #[test]
    fn product_of_variables() {
        let x = Jet::<Rational>::variable(0, q(1, 1), 3);
        let y = Jet::<Rational>::variable(1, q(2, 1), 3);
        let p = x.clone() * y.clone();
        // (1 + dx)(2 + dy) = 2 + 2dx + dy + dx dy
        assert_eq!(p.coeff([0, 0, 0]), q(2, 1));
        assert_eq!(p.coeff([1, 0, 0]), q(2, 1));
        assert_eq!(p.coeff([0, 1, 0]), q(1, 1));
        assert_eq!(p.coeff([1, 1, 0]), q(1, 1));
        assert_eq!(p.derivative(0).unwrap().value(), q(2, 1));
    }

    #[test]
    fn derivative_exhausts_order() {
        let c = Jet::<f64>::constant(1.0, 0);
        assert!(matches!(c.derivative(0), Err(Error::OrderExhausted { .. })));
    }

    #[test]
    fn exp_of_variable_matches_taylor_series() {
        let x = Jet::<f64>::variable(0, 0.5, 6);
        let e = x.exp().unwrap();
        let mut fact = 1.0;
        for n in 0..=6usize {
            if n > 0 {
                fact *= n as f64;
            }
            assert!((e.coeff([n, 0, 0]) - 0.5f64.exp() / fact).abs() < 1e-14);
        }
    }

    #[test]
    fn sin_cos_pythagoras() {
        let x = Jet::<f64>::variable(0, 0.3, 6) * Jet::variable(2, 1.1, 6);
        let s = x.sin().unwrap();
        let c = x.cos().unwrap();
        let one = s.square() + c.square();
        assert!((one.value() - 1.0).abs() < 1e-14);
        assert!(one.coeffs()[1..].iter().all(|c| c.abs() < 1e-13));
    }

    #[test]
    fn reciprocal_is_exact_for_rationals() {
        let x = Jet::<Rational>::variable(1, q(3, 1), 5);
        let r = x.recip().unwrap();
        let p = r * x;
        assert_eq!(p, Jet::constant(q(1, 1), 5));
    }
}
