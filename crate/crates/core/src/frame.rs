//! Coordinate vector fields, frames, brackets and structure functions.
//!
//! A [`Frame`] is given in closed form. Evaluating it at a point produces a
//! [`JetFrame`]: the Taylor jets of its coefficients together with the six
//! structure functions, which then feeds every derivative-bearing formula
//! through the [`FrameCalculus`] trait.

use std::fmt;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{Jet, DEFAULT_ORDER};
use crate::scalar::{Ring, Scalar};
use crate::structure::StructureConstants;

/// `a ∂x + b ∂y + c ∂z` with closed-form coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordVectorField {
    pub coeffs: [Expr; 3],
}

impl CoordVectorField {
    pub fn new(dx: Expr, dy: Expr, dz: Expr) -> Self {
        CoordVectorField {
            coeffs: [dx, dy, dz],
        }
    }

    pub fn coordinate(var: usize) -> Self {
        let mut coeffs = [Expr::zero(), Expr::zero(), Expr::zero()];
        coeffs[var] = Expr::one();
        CoordVectorField { coeffs }
    }

    /// The derivative `X(u)` as an expression.
    pub fn apply(&self, u: &Expr) -> Expr {
        (0..3).fold(Expr::zero(), |acc, k| acc + self.coeffs[k].clone() * u.diff(k))
    }

    pub fn scaled(&self, s: &Expr) -> Self {
        CoordVectorField {
            coeffs: self.coeffs.clone().map(|c| s.clone() * c),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        CoordVectorField {
            coeffs: std::array::from_fn(|k| self.coeffs[k].clone() + other.coeffs[k].clone()),
        }
    }

    pub fn jet<S: Scalar>(&self, base: &[S; 3], order: usize) -> Result<JetField<S>> {
        Ok(JetField([
            self.coeffs[0].jet(base, order)?,
            self.coeffs[1].jet(base, order)?,
            self.coeffs[2].jet(base, order)?,
        ]))
    }
}

impl fmt::Display for CoordVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.coeffs[0], self.coeffs[1], self.coeffs[2])
    }
}

/// A vector field whose coefficients are jets at a common base point.
#[derive(Clone, Debug, PartialEq)]
pub struct JetField<S>(pub [Jet<S>; 3]);

impl<S: Scalar> JetField<S> {
    /// `X(u)`; the result loses one order relative to `u`.
    pub fn apply(&self, u: &Jet<S>) -> Result<Jet<S>> {
        let mut out = self.0[0].mul_ref(&u.derivative(0)?);
        for k in 1..3 {
            out = out + self.0[k].mul_ref(&u.derivative(k)?);
        }
        Ok(out)
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(Jet::order).min().unwrap_or(0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        JetField(self.0.clone().map(|j| j.truncate(order)))
    }

    pub fn value(&self) -> [S; 3] {
        self.0.clone().map(|j| j.value())
    }
}

/// `[X, Y]^k = X(Y^k) - Y(X^k)`.
pub fn bracket_jets<S: Scalar>(x: &JetField<S>, y: &JetField<S>) -> Result<JetField<S>> {
    Ok(JetField([
        x.apply(&y.0[0])? - y.apply(&x.0[0])?,
        x.apply(&y.0[1])? - y.apply(&x.0[1])?,
        x.apply(&y.0[2])? - y.apply(&x.0[2])?,
    ]))
}

/// The bracket `[X, Y]` at `p`, exact to order `order`.
pub fn lie_bracket<S: Scalar>(
    x: &CoordVectorField,
    y: &CoordVectorField,
    p: &[S; 3],
    order: usize,
) -> Result<JetField<S>> {
    bracket_jets(&x.jet(p, order + 1)?, &y.jet(p, order + 1)?)
}

/// A local frame `f0, f1, f2` with `f0` the Reeb field.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    pub f: [CoordVectorField; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Heisenberg,
    UnimodularI,
    UnimodularII,
    UnimodularIII,
}

impl Frame {
    pub fn new(f0: CoordVectorField, f1: CoordVectorField, f2: CoordVectorField) -> Self {
        Frame { f: [f0, f1, f2] }
    }

    /// `f1 = ∂y + (x/2)∂z`, `f2 = ∂x - (y/2)∂z`, `f0 = ∂z`.
    pub fn heisenberg() -> Self {
        let half = Expr::ratio(1, 2);
        Frame::new(
            CoordVectorField::coordinate(2),
            CoordVectorField::new(Expr::zero(), Expr::one(), half.clone() * Expr::x()),
            CoordVectorField::new(Expr::one(), Expr::zero(), -(half * Expr::y())),
        )
    }

    /// The explicit unimodular models with `(chi, kappa)` equal to
    /// `(0, -1)`, `(0, 1)` and `(1, 0)`. Models ii and iii are complex.
    pub fn model(kind: ModelKind) -> Self {
        let (y, z) = (Expr::y(), Expr::z());
        let ey = y.exp();
        let (s, c) = (z.sin(), z.cos());
        let i = Expr::i();
        let a = CoordVectorField::new(ey.clone() * c.clone(), -s.clone(), c.clone());
        let b = CoordVectorField::new(-(ey.clone() * s.clone()), -c.clone(), -s.clone());
        let dz = CoordVectorField::coordinate(2);
        match kind {
            ModelKind::Heisenberg => Frame::heisenberg(),
            ModelKind::UnimodularI => Frame::new(dz, a, b),
            ModelKind::UnimodularII => Frame::new(
                dz,
                a.scaled(&i),
                CoordVectorField::new(ey * s.clone(), c, s).scaled(&i),
            ),
            ModelKind::UnimodularIII => Frame::new(dz.scaled(&-i.clone()), b.scaled(&i), a),
        }
    }

    /// Coordinate model of a solv+ structure with `[f2,f1] = f0 + c f2`,
    /// `[f1,f0] = k f2`, `[f2,f0] = 0`:
    /// `f0 = ∂z`, `f2 = ∂y`, `f1 = ∂x + (c y - k z)∂y + y ∂z`.
    pub fn solv_plus(c: Expr, k: Expr) -> Self {
        let (y, z) = (Expr::y(), Expr::z());
        Frame::new(
            CoordVectorField::coordinate(2),
            CoordVectorField::new(Expr::one(), c * y.clone() - k * z, y),
            CoordVectorField::coordinate(1),
        )
    }

    /// Rotates the contact plane by the angle `theta(x, y, z)`.
    pub fn rotated(&self, theta: &Expr) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        let f1 = self.f[1].scaled(&c).plus(&self.f[2].scaled(&s));
        let f2 = self.f[1].scaled(&-s).plus(&self.f[2].scaled(&c));
        Frame::new(self.f[0].clone(), f1, f2)
    }

    /// Evaluates the frame and its structure functions at `p`. Frame
    /// coefficients are kept to `order`, structure functions to `order - 1`.
    pub fn at<S: Scalar>(&self, p: &[S; 3], order: usize, tol: f64) -> Result<JetFrame<S>> {
        if order == 0 {
            return Err(Error::OrderExhausted {
                needed: 1,
                available: 0,
            });
        }
        let fields = [self.f[0].jet(p, order)?, self.f[1].jet(p, order)?, self.f[2].jet(p, order)?];
        JetFrame::from_fields(fields, tol)
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f0 = {}\nf1 = {}\nf2 = {}", self.f[0], self.f[1], self.f[2])
    }
}

fn det3<R: Ring>(m: &[[R; 3]; 3]) -> R {
    m[0][0].clone() * (m[1][1].clone() * m[2][2].clone() - m[1][2].clone() * m[2][1].clone())
        - m[0][1].clone() * (m[1][0].clone() * m[2][2].clone() - m[1][2].clone() * m[2][0].clone())
        + m[0][2].clone() * (m[1][0].clone() * m[2][1].clone() - m[1][1].clone() * m[2][0].clone())
}

/// Solves `v = Σ_i a_i f_i` for the frame coefficients `a`.
struct FrameSolver<S> {
    /// `inv[i][k]`: the `i`-th dual covector's `k`-th coordinate component.
    inv: [[Jet<S>; 3]; 3],
}

impl<S: Scalar> FrameSolver<S> {
    fn new(fields: &[JetField<S>; 3]) -> Result<Self> {
        // m[k][i] = k-th coordinate of f_i
        let m: [[Jet<S>; 3]; 3] = std::array::from_fn(|k| std::array::from_fn(|i| fields[i].0[k].clone()));
        let det = det3(&m);
        if det.value().is_zero_within(1e-14) {
            return Err(Error::NotAContactFrame("frame is degenerate at the base point".into()));
        }
        let inv_det = det.recip()?;
        let cof = |r: usize, c: usize| -> Jet<S> {
            let rows: Vec<usize> = (0..3).filter(|&x| x != r).collect();
            let cols: Vec<usize> = (0..3).filter(|&x| x != c).collect();
            let minor = m[rows[0]][cols[0]].clone() * m[rows[1]][cols[1]].clone()
                - m[rows[0]][cols[1]].clone() * m[rows[1]][cols[0]].clone();
            if (r + c) % 2 == 0 {
                minor
            } else {
                -minor
            }
        };
        // inverse of m: inv[i][k] = cof(k, i) / det
        let inv = std::array::from_fn(|i| std::array::from_fn(|k| cof(k, i).mul_ref(&inv_det)));
        Ok(FrameSolver { inv })
    }

    fn solve(&self, v: &JetField<S>) -> [Jet<S>; 3] {
        std::array::from_fn(|i| {
            (0..3).fold(Jet::zero(v.order()), |acc, k| acc + self.inv[i][k].mul_ref(&v.0[k]))
        })
    }
}

/// A frame evaluated to jets at a base point, with its structure functions.
#[derive(Clone, Debug)]
pub struct JetFrame<S: Scalar> {
    pub fields: [JetField<S>; 3],
    pub constants: StructureConstants<Jet<S>>,
}

impl<S: Scalar> JetFrame<S> {
    /// Computes the structure functions of jet-valued frame fields and checks
    /// the contact normalization of the `f0` components.
    pub fn from_fields(fields: [JetField<S>; 3], tol: f64) -> Result<Self> {
        let solver = FrameSolver::new(&fields)?;
        let [f0, f1, f2] = &fields;
        let b21 = solver.solve(&bracket_jets(f2, f1)?);
        let b10 = solver.solve(&bracket_jets(f1, f0)?);
        let b20 = solver.solve(&bracket_jets(f2, f0)?);
        let order = b21[0].order();
        let one = Jet::constant(S::one(), order);
        let checks = [
            ("[f2,f1] f0-component - 1", b21[0].clone() - one),
            ("[f1,f0] f0-component", b10[0].clone()),
            ("[f2,f0] f0-component", b20[0].clone()),
        ];
        for (name, r) in checks {
            if !r.negligible(tol) {
                return Err(Error::NotAContactFrame(format!("{name} = {:e}", r.max_abs())));
            }
        }
        let constants = StructureConstants {
            c12_1: b21[1].clone(),
            c12_2: b21[2].clone(),
            c10_1: b10[1].clone(),
            c10_2: b10[2].clone(),
            c20_1: b20[1].clone(),
            c20_2: b20[2].clone(),
        };
        Ok(JetFrame { fields, constants })
    }

    /// Components `a_i` of `v = Σ a_i f_i`.
    pub fn components(&self, v: &JetField<S>) -> Result<[Jet<S>; 3]> {
        Ok(FrameSolver::new(&self.fields)?.solve(v))
    }

    pub fn constant_values(&self) -> StructureConstants<S> {
        self.constants.map(|j| j.value())
    }
}

/// Everything the curvature pipeline needs from a frame: the structure
/// functions in some ring and the derivations `f0, f1, f2` acting on it.
pub trait FrameCalculus {
    type R: Ring;

    fn constants(&self) -> &StructureConstants<Self::R>;

    /// `f_i(u)` for `i` in `0..3`.
    fn derive(&self, i: usize, u: &Self::R) -> Result<Self::R>;

    fn lift(&self, n: i64, d: i64) -> Self::R {
        let c = &self.constants().c12_1;
        c.constant_like(<<Self::R as Ring>::Scalar as Scalar>::from_ratio(n, d))
    }

    /// `f_i(f_j(...(u)))` applied right to left: `derive_chain(&[1, 2], u) = f1(f2(u))`.
    fn derive_chain(&self, ops: &[usize], u: &Self::R) -> Result<Self::R> {
        ops.iter().rev().try_fold(u.clone(), |acc, &i| self.derive(i, &acc))
    }
}

/// Constant structure coefficients; every frame derivative vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct LeftInvariant<S> {
    pub sc: StructureConstants<S>,
}

impl<S: Scalar> LeftInvariant<S> {
    pub fn new(sc: StructureConstants<S>) -> Self {
        LeftInvariant { sc }
    }
}

impl<S: Scalar> FrameCalculus for LeftInvariant<S> {
    type R = S;

    fn constants(&self) -> &StructureConstants<S> {
        &self.sc
    }

    fn derive(&self, _i: usize, _u: &S) -> Result<S> {
        Ok(S::zero())
    }
}

impl<S: Scalar> FrameCalculus for JetFrame<S> {
    type R = Jet<S>;

    fn constants(&self) -> &StructureConstants<Jet<S>> {
        &self.constants
    }

    fn derive(&self, i: usize, u: &Jet<S>) -> Result<Jet<S>> {
        self.fields[i].apply(u)
    }
}

/// Residuals of the two integrability relations between structure functions
/// obtained by differentiating the structure equations.
pub fn jacobi_residuals<C: FrameCalculus>(calc: &C) -> Result<[C::R; 2]> {
    let c = calc.constants();
    let r1 = c.c12_2.clone() * c.c10_1.clone() - c.c12_1.clone() * c.c10_2.clone()
        + calc.derive(0, &c.c12_2)?
        - calc.derive(1, &c.c20_2)?
        + calc.derive(2, &c.c10_2)?;
    let r2 = c.c12_2.clone() * c.c20_1.clone() - c.c12_1.clone() * c.c20_2.clone()
        - calc.derive(0, &c.c12_1)?
        + calc.derive(1, &c.c20_1)?
        - calc.derive(2, &c.c10_1)?;
    Ok([r1, r2])
}

/// `(chi^2, kappa)` with derivative terms, for any frame calculus.
pub fn chi2_kappa_of<C: FrameCalculus>(calc: &C) -> Result<(C::R, C::R)> {
    let c = calc.constants();
    let f1c = calc.derive(1, &c.c12_2)?;
    let f2c = calc.derive(2, &c.c12_1)?;
    Ok(crate::structure::chi_squared_kappa(c, f1c, f2c))
}

/// Default evaluation order for frames.
pub const FRAME_ORDER: usize = DEFAULT_ORDER;
