//! Closed-form expression trees in the chart coordinates `x, y, z`.
//!
//! Frame coefficients and rescaling functions are written as [`Expr`]s and
//! evaluated to [`Jet`]s by exact composition. Expressions can be
//! differentiated symbolically and round-trip through a small prefix
//! notation, e.g. `(+ (* 1/2 y) (exp (neg x)))`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::jet::{Jet, Var};
use crate::scalar::{parse_rational, qi, Rational, Scalar};

/// Exact complex constant `re + i·im`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gaussian {
    pub re: Rational,
    pub im: Rational,
}

impl Gaussian {
    pub fn real(re: Rational) -> Self {
        Gaussian {
            re,
            im: qi(0),
        }
    }

    pub fn imag_unit() -> Self {
        Gaussian {
            re: qi(0),
            im: qi(1),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        Gaussian {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        Gaussian {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn neg(&self) -> Self {
        Gaussian {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Const(Gaussian),
    Var(Var),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Neg(Expr),
    Pow(Expr, u32),
    Exp(Expr),
    Ln(Expr),
    Sin(Expr),
    Cos(Expr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr(Arc<Node>);

const VAR_NAMES: [&str; 3] = ["x", "y", "z"];

impl Expr {
    fn node(n: Node) -> Self {
        Expr(Arc::new(n))
    }

    pub fn constant(c: Gaussian) -> Self {
        Self::node(Node::Const(c))
    }

    pub fn rational(r: Rational) -> Self {
        Self::constant(Gaussian::real(r))
    }

    pub fn int(n: i64) -> Self {
        Self::rational(qi(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(crate::scalar::q(n, d))
    }

    pub fn i() -> Self {
        Self::constant(Gaussian::imag_unit())
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn var(v: Var) -> Self {
        assert!(v < 3);
        Self::node(Node::Var(v))
    }

    pub fn x() -> Self {
        Self::var(0)
    }

    pub fn y() -> Self {
        Self::var(1)
    }

    pub fn z() -> Self {
        Self::var(2)
    }

    fn as_const(&self) -> Option<&Gaussian> {
        match &*self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(Gaussian::is_zero)
    }

    fn is_one(&self) -> bool {
        self.as_const().is_some_and(Gaussian::is_one)
    }

    pub fn exp(&self) -> Self {
        if self.is_zero() {
            return Self::one();
        }
        Self::node(Node::Exp(self.clone()))
    }

    pub fn ln(&self) -> Self {
        if self.is_one() {
            return Self::zero();
        }
        Self::node(Node::Ln(self.clone()))
    }

    pub fn sin(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::node(Node::Sin(self.clone()))
    }

    pub fn cos(&self) -> Self {
        if self.is_zero() {
            return Self::one();
        }
        Self::node(Node::Cos(self.clone()))
    }

    pub fn pow(&self, n: u32) -> Self {
        match n {
            0 => Self::one(),
            1 => self.clone(),
            _ if self.is_zero() => Self::zero(),
            _ => Self::node(Node::Pow(self.clone(), n)),
        }
    }

    /// Symbolic partial derivative.
    pub fn diff(&self, v: Var) -> Self {
        match &*self.0 {
            Node::Const(_) => Self::zero(),
            Node::Var(w) => {
                if *w == v {
                    Self::one()
                } else {
                    Self::zero()
                }
            }
            Node::Add(a, b) => a.diff(v) + b.diff(v),
            Node::Sub(a, b) => a.diff(v) - b.diff(v),
            Node::Mul(a, b) => a.diff(v) * b.clone() + a.clone() * b.diff(v),
            Node::Div(a, b) => (a.diff(v) * b.clone() - a.clone() * b.diff(v)) / b.pow(2),
            Node::Neg(a) => -a.diff(v),
            Node::Pow(a, n) => Self::int(*n as i64) * a.pow(n - 1) * a.diff(v),
            Node::Exp(a) => self.clone() * a.diff(v),
            Node::Ln(a) => a.diff(v) / a.clone(),
            Node::Sin(a) => a.cos() * a.diff(v),
            Node::Cos(a) => -(a.sin() * a.diff(v)),
        }
    }

    /// Taylor expansion of order `order` at `base`.
    pub fn jet<S: Scalar>(&self, base: &[S; 3], order: usize) -> Result<Jet<S>> {
        Ok(match &*self.0 {
            Node::Const(c) => {
                let s = S::from_gaussian(&c.re, &c.im).ok_or_else(|| {
                    Error::Inexact(format!("complex constant {self} in a {} backend", S::NAME))
                })?;
                Jet::constant(s, order)
            }
            Node::Var(v) => Jet::variable(*v, base[*v].clone(), order),
            Node::Add(a, b) => a.jet(base, order)? + b.jet(base, order)?,
            Node::Sub(a, b) => a.jet(base, order)? - b.jet(base, order)?,
            Node::Mul(a, b) => a.jet(base, order)? * b.jet(base, order)?,
            Node::Div(a, b) => a.jet(base, order)?.div(&b.jet(base, order)?)?,
            Node::Neg(a) => -a.jet(base, order)?,
            Node::Pow(a, n) => a.jet(base, order)?.powi(*n),
            Node::Exp(a) => a.jet(base, order)?.exp()?,
            Node::Ln(a) => a.jet(base, order)?.ln()?,
            Node::Sin(a) => a.jet(base, order)?.sin()?,
            Node::Cos(a) => a.jet(base, order)?.cos()?,
        })
    }

    pub fn eval<S: Scalar>(&self, point: &[S; 3]) -> Result<S> {
        Ok(self.jet(point, 0)?.value())
    }

    /// Parses the prefix notation produced by `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let e = parse_tokens(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Expr(format!("trailing input after position {pos}")));
        }
        Ok(e)
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a.add(b)),
            (Some(a), _) if a.is_zero() => rhs,
            (_, Some(b)) if b.is_zero() => self,
            _ => Expr::node(Node::Add(self, rhs)),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a.add(&b.neg())),
            (Some(a), _) if a.is_zero() => -rhs,
            (_, Some(b)) if b.is_zero() => self,
            _ => Expr::node(Node::Sub(self, rhs)),
        }
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match (self.as_const(), rhs.as_const()) {
            (Some(a), Some(b)) => Expr::constant(a.mul(b)),
            (Some(a), _) if a.is_zero() => Expr::zero(),
            (_, Some(b)) if b.is_zero() => Expr::zero(),
            (Some(a), _) if a.is_one() => rhs,
            (_, Some(b)) if b.is_one() => self,
            _ => Expr::node(Node::Mul(self, rhs)),
        }
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        if self.is_zero() {
            return Expr::zero();
        }
        if rhs.is_one() {
            return self;
        }
        if let (Some(a), Some(b)) = (self.as_const(), rhs.as_const()) {
            if b.im.is_zero() && !b.re.is_zero() {
                let inv = Gaussian::real(b.re.recip());
                return Expr::constant(a.mul(&inv));
            }
        }
        Expr::node(Node::Div(self, rhs))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match &*self.0 {
            Node::Const(c) => Expr::constant(c.neg()),
            Node::Neg(a) => a.clone(),
            _ => Expr::node(Node::Neg(self)),
        }
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bin = |f: &mut fmt::Formatter<'_>, op: &str, a: &Expr, b: &Expr| {
            write!(f, "({op} {a} {b})")
        };
        match &*self.0 {
            Node::Const(c) if c.im.is_zero() => fmt_rational(&c.re, f),
            Node::Const(c) => {
                write!(f, "(c ")?;
                fmt_rational(&c.re, f)?;
                write!(f, " ")?;
                fmt_rational(&c.im, f)?;
                write!(f, ")")
            }
            Node::Var(v) => write!(f, "{}", VAR_NAMES[*v]),
            Node::Add(a, b) => bin(f, "+", a, b),
            Node::Sub(a, b) => bin(f, "-", a, b),
            Node::Mul(a, b) => bin(f, "*", a, b),
            Node::Div(a, b) => bin(f, "/", a, b),
            Node::Neg(a) => write!(f, "(neg {a})"),
            Node::Pow(a, n) => write!(f, "(^ {a} {n})"),
            Node::Exp(a) => write!(f, "(exp {a})"),
            Node::Ln(a) => write!(f, "(ln {a})"),
            Node::Sin(a) => write!(f, "(sin {a})"),
            Node::Cos(a) => write!(f, "(cos {a})"),
        }
    }
}

fn tokenize(text: &str) -> Vec<String> {
    text.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

fn parse_tokens(tokens: &[String], pos: &mut usize) -> Result<Expr> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::Expr("unexpected end of expression".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let op = tokens
                .get(*pos)
                .ok_or_else(|| Error::Expr("missing operator".into()))?
                .clone();
            *pos += 1;
            let mut args = Vec::new();
            while tokens.get(*pos).map(String::as_str) != Some(")") {
                if *pos >= tokens.len() {
                    return Err(Error::Expr("unbalanced parentheses".into()));
                }
                if op == "^" && args.len() == 1 {
                    let n: u32 = tokens[*pos]
                        .parse()
                        .map_err(|_| Error::Expr(format!("bad exponent `{}`", tokens[*pos])))?;
                    *pos += 1;
                    args.push(Expr::int(n as i64));
                    continue;
                }
                args.push(parse_tokens(tokens, pos)?);
            }
            *pos += 1;
            build(&op, args)
        }
        ")" => Err(Error::Expr("unexpected `)`".into())),
        "x" => Ok(Expr::x()),
        "y" => Ok(Expr::y()),
        "z" => Ok(Expr::z()),
        "i" => Ok(Expr::i()),
        num => parse_rational(num).map(Expr::rational).map_err(Error::Expr),
    }
}

fn build(op: &str, args: Vec<Expr>) -> Result<Expr> {
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::Expr(format!("`{op}` takes {n} arguments, got {}", args.len())))
        }
    };
    let fold = |f: fn(Expr, Expr) -> Expr| -> Result<Expr> {
        let mut it = args.clone().into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::Expr(format!("`{op}` needs arguments")))?;
        Ok(it.fold(first, f))
    };
    match op {
        "+" => fold(|a, b| a + b),
        "*" => fold(|a, b| a * b),
        "-" if args.len() == 1 => Ok(-args[0].clone()),
        "-" => fold(|a, b| a - b),
        "/" => {
            arity(2)?;
            Ok(args[0].clone() / args[1].clone())
        }
        "neg" => {
            arity(1)?;
            Ok(-args[0].clone())
        }
        "^" => {
            arity(2)?;
            let n = args[1]
                .as_const()
                .filter(|c| c.im.is_zero() && c.re.is_integer() && !c.re.is_negative())
                .map(|c| c.re.numer().to_string().parse::<u32>().unwrap_or(0))
                .ok_or_else(|| Error::Expr("exponent must be a nonnegative integer".into()))?;
            Ok(args[0].pow(n))
        }
        "c" => {
            arity(2)?;
            match (args[0].as_const(), args[1].as_const()) {
                (Some(re), Some(im)) if re.im.is_zero() && im.im.is_zero() => {
                    Ok(Expr::constant(Gaussian {
                        re: re.re.clone(),
                        im: im.re.clone(),
                    }))
                }
                _ => Err(Error::Expr("`c` takes two rational literals".into())),
            }
        }
        "exp" | "ln" | "sin" | "cos" => {
            arity(1)?;
            let a = &args[0];
            Ok(match op {
                "exp" => a.exp(),
                "ln" => a.ln(),
                "sin" => a.sin(),
                _ => a.cos(),
            })
        }
        _ => Err(Error::Expr(format!("unknown operator `{op}`"))),
    }
}

/// A polynomial in `x, y, z` of total degree at most `degree` with small
/// random rational coefficients.
pub fn random_polynomial<G: Rng>(rng: &mut G, degree: u32) -> Expr {
    let mut out = Expr::zero();
    for dx in 0..=degree {
        for dy in 0..=degree - dx {
            for dz in 0..=degree - dx - dy {
                let c = Expr::ratio(rng.gen_range(-4..=4), rng.gen_range(2..=8));
                let m = Expr::x().pow(dx) * Expr::y().pow(dy) * Expr::z().pow(dz);
                out = out + c * m;
            }
        }
    }
    out
}
