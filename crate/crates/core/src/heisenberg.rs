//! Conformal vector fields of the Heisenberg group in the frame
//! `f1 = ∂y + (x/2)∂z`, `f2 = ∂x − (y/2)∂z`, `f0 = ∂z`, the graded table
//! of the conformal algebra and its realization in su(2,1).

use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank, solve_in_span};
use crate::poly::{Exponent, Poly, PolyVectorField};
use crate::scalar::{q, Rational};

pub fn f0(p: &Poly) -> Poly {
    p.diff(2)
}

pub fn f1(p: &Poly) -> Poly {
    p.diff(1) + (Poly::x() * p.diff(2)).scale_int(1, 2)
}

pub fn f2(p: &Poly) -> Poly {
    p.diff(0) - (Poly::y() * p.diff(2)).scale_int(1, 2)
}

/// `X = a0 f0 + a1 f1 + a2 f2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameDecomposition {
    pub a0: Poly,
    pub a1: Poly,
    pub a2: Poly,
}

impl FrameDecomposition {
    pub fn reconstruct(&self) -> PolyVectorField {
        let z = self.a0.clone() + (Poly::x() * self.a1.clone()).scale_int(1, 2)
            - (Poly::y() * self.a2.clone()).scale_int(1, 2);
        PolyVectorField::new(self.a2.clone(), self.a1.clone(), z)
    }
}

pub fn to_frame_components(x: &PolyVectorField) -> FrameDecomposition {
    let [a2, a1, xz] = x.c.clone();
    let a0 = xz - (Poly::x() * a1.clone()).scale_int(1, 2) + (Poly::y() * a2.clone()).scale_int(1, 2);
    FrameDecomposition { a0, a1, a2 }
}

/// The six defects of the conformal system together with `η` and `ω`
/// when the field is conformal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalResiduals {
    pub eta: Option<Poly>,
    pub omega: Option<Poly>,
    /// `f1(a0) − a2`, `f2(a0) + a1`, `f1(a1) + η`, `f2(a2) + η`,
    /// `f2(a1) − ω`, `f1(a2) + ω` with `η = −(f1(a1) + f2(a2))/2` and
    /// `ω = (f2(a1) − f1(a2))/2`.
    pub residuals: [Poly; 6],
}

impl ConformalResiduals {
    pub fn is_conformal(&self) -> bool {
        self.residuals.iter().all(Poly::is_zero)
    }
}

pub fn conformal_residuals(x: &PolyVectorField) -> ConformalResiduals {
    let d = to_frame_components(x);
    let (f1a1, f2a2) = (f1(&d.a1), f2(&d.a2));
    let (f2a1, f1a2) = (f2(&d.a1), f1(&d.a2));
    let eta = -(f1a1.clone() + f2a2.clone()).scale_int(1, 2);
    let omega = (f2a1.clone() - f1a2.clone()).scale_int(1, 2);
    let residuals = [
        f1(&d.a0) - d.a2.clone(),
        f2(&d.a0) + d.a1.clone(),
        f1a1 + eta.clone(),
        f2a2 + eta.clone(),
        f2a1 - omega.clone(),
        f1a2 + omega.clone(),
    ];
    let ok = residuals.iter().all(Poly::is_zero);
    ConformalResiduals {
        eta: ok.then_some(eta),
        omega: ok.then_some(omega),
        residuals,
    }
}

/// The integrability conditions on `η`: `f0 f1 η`, `f0 f2 η`, `f1 f1 η`,
/// `f2 f2 η`, `f1 f2 η + f2 f1 η`.
pub fn eta_conditions(eta: &Poly) -> [Poly; 5] {
    [
        f0(&f1(eta)),
        f0(&f2(eta)),
        f1(&f1(eta)),
        f2(&f2(eta)),
        f1(&f2(eta)) + f2(&f1(eta)),
    ]
}

pub fn eta_admissible(eta: &Poly) -> bool {
    eta_conditions(eta).iter().all(Poly::is_zero)
}

/// The eight generators `F1 … F8` of the conformal algebra.
pub fn generators() -> [PolyVectorField; 8] {
    let (x, y, z) = (Poly::x(), Poly::y(), Poly::z());
    let r = |n: i64, d: i64| q(n, d);
    let m = |c: Rational, e: Exponent| Poly::monomial(e, c);
    [
        PolyVectorField::new(Poly::zero(), Poly::zero(), Poly::int(1)),
        PolyVectorField::new(Poly::int(1), Poly::zero(), y.scale_int(1, 2)),
        PolyVectorField::new(Poly::zero(), Poly::int(1), x.scale_int(-1, 2)),
        PolyVectorField::new(-y.clone(), x.clone(), Poly::zero()),
        PolyVectorField::new(-x.clone(), -y.clone(), z.scale_int(-2, 1)),
        PolyVectorField::new(
            m(r(3, 2), [0, 2, 0]) + m(r(-1, 2), [2, 0, 0]),
            m(r(2, 1), [0, 0, 1]) + m(r(-2, 1), [1, 1, 0]),
            m(r(-1, 1), [1, 0, 1]) + m(r(-1, 4), [2, 1, 0]) + m(r(-1, 4), [0, 3, 0]),
        ),
        PolyVectorField::new(
            m(r(-2, 1), [0, 0, 1]) + m(r(-2, 1), [1, 1, 0]),
            m(r(3, 2), [2, 0, 0]) + m(r(-1, 2), [0, 2, 0]),
            m(r(-1, 1), [0, 1, 1]) + m(r(1, 4), [3, 0, 0]) + m(r(1, 4), [1, 2, 0]),
        ),
        PolyVectorField::new(
            m(r(-1, 1), [1, 0, 1]) + m(r(-1, 4), [2, 1, 0]) + m(r(-1, 4), [0, 3, 0]),
            m(r(-1, 1), [0, 1, 1]) + m(r(1, 4), [1, 2, 0]) + m(r(1, 4), [3, 0, 0]),
            m(r(-1, 1), [0, 0, 2]) + m(r(1, 16), [4, 0, 0]) + m(r(1, 8), [2, 2, 0]) + m(r(1, 16), [0, 4, 0]),
        ),
    ]
}

/// Basis labels of the abstract graded algebra.
pub const LABELS: [&str; 8] = ["f0", "f1", "f2", "L0_1", "L0_2", "L1_1", "L1_2", "L"];
pub const WEIGHTS: [i32; 8] = [-2, -1, -1, 0, 0, 1, 1, 2];

/// Structure constants `t[i][j][k]`: `[e_i, e_j] = Σ_k t[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedTable {
    pub labels: Vec<String>,
    pub weights: Vec<i32>,
    #[serde(skip)]
    pub t: Vec<Vec<Vec<Rational>>>,
}

impl GradedTable {
    fn empty(labels: &[&str], weights: &[i32]) -> Self {
        let n = labels.len();
        GradedTable {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            weights: weights.to_vec(),
            t: vec![vec![vec![Rational::zero(); n]; n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    fn set(&mut self, i: usize, j: usize, v: &[(usize, i64)]) {
        for &(k, c) in v {
            self.t[i][j][k] = Rational::from_integer(c.into());
            self.t[j][i][k] = Rational::from_integer((-c).into());
        }
    }

    /// Largest violation of antisymmetry (zero or one, exactly).
    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| self.t[i][j][k] == -self.t[j][i][k].clone())))
    }

    fn bracket_vec(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for i in (0..n).filter(|&i| !u[i].is_zero()) {
            for j in (0..n).filter(|&j| !v[j].is_zero()) {
                let c = &u[i] * &v[j];
                for k in 0..n {
                    if !self.t[i][j][k].is_zero() {
                        out[k] += &c * &self.t[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// Triples `(i, j, k)` on which the Jacobi identity fails.
    pub fn jacobi_failures(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let unit = |i: usize| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        };
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (unit(i), unit(j), unit(k));
                    let s1 = self.bracket_vec(&self.bracket_vec(&a, &b), &c);
                    let s2 = self.bracket_vec(&self.bracket_vec(&b, &c), &a);
                    let s3 = self.bracket_vec(&self.bracket_vec(&c, &a), &b);
                    if (0..n).any(|m| !(s1[m].clone() + s2[m].clone() + s3[m].clone()).is_zero()) {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// Pairs whose bracket leaves the layer `h^{w_i + w_j}`.
    pub fn grading_failures(&self) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let w = self.weights[i] + self.weights[j];
                if (0..n).any(|k| !self.t[i][j][k].is_zero() && self.weights[k] != w) {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    /// The table in the basis `e'_a = Σ_i m[a][i] e_i`.
    pub fn transport(&self, m: &[Vec<Rational>], labels: &[&str], weights: &[i32]) -> Result<GradedTable> {
        let n = self.dim();
        let mut out = GradedTable::empty(labels, weights);
        let cols: Vec<Vec<Rational>> = (0..n).map(|a| m[a].clone()).collect();
        for a in 0..n {
            for b in 0..n {
                let v = self.bracket_vec(&m[a], &m[b]);
                let x = solve_in_span(&cols, &v).ok_or_else(|| Error::NotClosed("basis change is singular".into()))?;
                out.t[a][b] = x;
            }
        }
        Ok(out)
    }
}

/// The graded table of the Tanaka prolongation, basis [`LABELS`].
pub fn tanaka_table() -> GradedTable {
    let mut t = GradedTable::empty(&LABELS, &WEIGHTS);
    const F0: usize = 0;
    const F1: usize = 1;
    const F2: usize = 2;
    const A: usize = 3; // L0_1
    const B: usize = 4; // L0_2
    const C: usize = 5; // L1_1
    const D: usize = 6; // L1_2
    const L: usize = 7;
    t.set(F2, F1, &[(F0, 1)]);
    t.set(A, F2, &[(F2, 1)]);
    t.set(A, F1, &[(F1, 1)]);
    t.set(A, F0, &[(F0, 2)]);
    t.set(B, F2, &[(F1, 1)]);
    t.set(B, F1, &[(F2, -1)]);
    t.set(C, F2, &[(A, 1)]);
    t.set(C, F1, &[(B, 3)]);
    t.set(C, F0, &[(F1, -2)]);
    t.set(D, F2, &[(B, -3)]);
    t.set(D, F1, &[(A, 1)]);
    t.set(D, F0, &[(F2, 2)]);
    t.set(L, F1, &[(C, -1)]);
    t.set(L, F0, &[(A, 2)]);
    t.set(L, F2, &[(D, 1)]);
    t.set(C, A, &[(C, 1)]);
    t.set(C, B, &[(D, -1)]);
    t.set(D, A, &[(D, 1)]);
    t.set(D, B, &[(C, 1)]);
    t.set(C, D, &[(L, 2)]);
    t.set(L, A, &[(L, 2)]);
    t
}

fn field_coordinates(fields: &[PolyVectorField]) -> (Vec<(usize, Exponent)>, Vec<Vec<Rational>>) {
    let mut keys: Vec<(usize, Exponent)> = fields
        .iter()
        .flat_map(|f| (0..3).flat_map(move |k| f.c[k].terms().map(move |(e, _)| (k, *e))))
        .collect();
    keys.sort();
    keys.dedup();
    let cols = fields
        .iter()
        .map(|f| keys.iter().map(|(k, e)| f.c[*k].coeff(e)).collect())
        .collect();
    (keys, cols)
}

fn coordinates_in(fields: &[PolyVectorField], v: &PolyVectorField) -> Option<Vec<Rational>> {
    let mut all = fields.to_vec();
    all.push(v.clone());
    let (_, mut cols) = field_coordinates(&all);
    let target = cols.pop()?;
    solve_in_span(&cols, &target)
}

/// Structure constants of the span of `fields` under `[X, Y] = XY − YX`.
pub fn structure_of(fields: &[PolyVectorField], labels: &[&str], weights: &[i32]) -> Result<GradedTable> {
    let n = fields.len();
    let (_, cols) = field_coordinates(fields);
    let mut keys_rank = cols.clone();
    if rank(&transpose(&mut keys_rank)) != n {
        return Err(Error::NotClosed("fields are linearly dependent".into()));
    }
    let mut t = GradedTable::empty(labels, weights);
    for i in 0..n {
        for j in 0..n {
            let b = fields[i].bracket(&fields[j]);
            t.t[i][j] = coordinates_in(fields, &b)
                .ok_or_else(|| Error::NotClosed(format!("[F{}, F{}] = {b}", i + 1, j + 1)))?;
        }
    }
    Ok(t)
}

fn transpose(m: &mut [Vec<Rational>]) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|r| m.iter().map(|c| c[r].clone()).collect()).collect()
}

/// Images of `F1 … F8` in the basis [`LABELS`]:
/// `F1 ↦ f0`, `F2 ↦ f2`, `F3 ↦ −f1`, `F4 ↦ L0_2`, `F5 ↦ L0_1`,
/// `F6 ↦ −L1_1`, `F7 ↦ L1_2`, `F8 ↦ −L/2`.
pub fn correspondence() -> Vec<Vec<Rational>> {
    let img = [(0, q(1, 1)), (2, q(1, 1)), (1, q(-1, 1)), (4, q(1, 1)), (3, q(1, 1)), (5, q(-1, 1)), (6, q(1, 1)), (7, q(-1, 2))];
    img.iter()
        .map(|(k, c)| {
            let mut row = vec![Rational::zero(); 8];
            row[*k] = c.clone();
            row
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Homomorphism,
    AntiHomomorphism,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketReport {
    pub dimension: usize,
    pub table: GradedTable,
    /// Generator weights read off the fields.
    pub field_weights: Vec<Option<i32>>,
    pub orientation: Orientation,
    /// Unordered pairs `(a, b)` of the abstract basis where the transported
    /// bracket disagrees with the Tanaka table.
    pub mismatches: Vec<(String, String)>,
}

/// Brackets of the generators, transported to the abstract basis and
/// compared pair by pair with [`tanaka_table`].
pub fn bracket_table(fields: &[PolyVectorField]) -> Result<BracketReport> {
    let labels: Vec<String> = (1..=fields.len()).map(|i| format!("F{i}")).collect();
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let field_weights: Vec<Option<i32>> = fields.iter().map(PolyVectorField::weight).collect();
    let weights: Vec<i32> = field_weights.iter().map(|w| w.unwrap_or(i32::MIN)).collect();
    let table = structure_of(fields, &label_refs, &weights)?;
    // table is in the F basis; F_a = Σ m[a][i] e_i, so e_i = Σ minv[i][a] F_a
    let m = correspondence();
    let minv = invert(&m)?;
    let transported = table.transport(&minv, &LABELS, &WEIGHTS)?;
    let tanaka = tanaka_table();
    let n = 8;
    let mut mismatches = Vec::new();
    let mut same = true;
    let mut opposite = true;
    for a in 0..n {
        for b in a + 1..n {
            let (x, y) = (&transported.t[a][b], &tanaka.t[a][b]);
            let eq = x == y;
            let neg = x.iter().zip(y).all(|(u, v)| *u == -v.clone());
            same &= eq;
            opposite &= neg;
            if !eq {
                mismatches.push((LABELS[a].to_string(), LABELS[b].to_string()));
            }
        }
    }
    let orientation = match (same, opposite) {
        (true, _) => Orientation::Homomorphism,
        (false, true) => Orientation::AntiHomomorphism,
        _ => Orientation::Neither,
    };
    Ok(BracketReport {
        dimension: fields.len(),
        table,
        field_weights,
        orientation,
        mismatches,
    })
}

fn invert(m: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut out = vec![vec![Rational::zero(); n]; n];
    // columns of m^T are the rows of m; solve m^T-combinations for each unit vector
    for i in 0..n {
        let mut unit = vec![Rational::zero(); n];
        unit[i] = Rational::one();
        let x = solve_in_span(m, &unit).ok_or_else(|| Error::NotClosed("singular correspondence".into()))?;
        for (a, v) in x.into_iter().enumerate() {
            out[i][a] = v;
        }
    }
    Ok(out)
}

pub type Gaussian = Complex<Rational>;
pub type Matrix3 = [[Gaussian; 3]; 3];

fn g(re: Rational, im: Rational) -> Gaussian {
    Complex::new(re, im)
}

fn e(i: usize, j: usize, c: Gaussian) -> Matrix3 {
    let mut m: Matrix3 = std::array::from_fn(|_| std::array::from_fn(|_| g(Rational::zero(), Rational::zero())));
    m[i][j] = c;
    m
}

fn madd(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].clone() + b[i][j].clone()))
}

fn mmul(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(g(Rational::zero(), Rational::zero()), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
    })
}

fn mscale(a: &Matrix3, c: &Gaussian) -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].clone() * c.clone()))
}

fn commutator(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    let (ab, ba) = (mmul(a, b), mmul(b, a));
    std::array::from_fn(|i| std::array::from_fn(|j| ab[i][j].clone() - ba[i][j].clone()))
}

fn adjoint(a: &Matrix3) -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

/// Matrices of the basis [`LABELS`] in sl(3, C).
pub fn su21_matrices() -> [Matrix3; 8] {
    let (one, i) = (g(q(1, 1), q(0, 1)), g(q(0, 1), q(1, 1)));
    let neg = |c: &Gaussian| -c.clone();
    let third = |c: Gaussian| c * g(q(1, 3), q(0, 1));
    [
        e(0, 2, i.clone() * g(q(2, 1), q(0, 1))),
        madd(&e(0, 1, neg(&i)), &e(1, 2, i.clone())),
        madd(&e(0, 1, one.clone()), &e(1, 2, one.clone())),
        madd(&e(0, 0, one.clone()), &e(2, 2, neg(&one))),
        madd(
            &madd(&e(0, 0, third(neg(&i))), &e(1, 1, third(i.clone() * g(q(2, 1), q(0, 1))))),
            &e(2, 2, third(neg(&i))),
        ),
        madd(&e(1, 0, neg(&one)), &e(2, 1, neg(&one))),
        madd(&e(1, 0, neg(&i)), &e(2, 1, i.clone())),
        e(2, 0, i),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Su21Report {
    /// Unordered pairs whose commutator differs from the table.
    pub table_mismatches: Vec<(String, String)>,
    pub traceless: bool,
    pub linearly_independent: bool,
    /// Dimension of the space of invariant Hermitian forms.
    pub hermitian_solutions: usize,
    /// The invariant form as `[re, im]` pairs, when unique up to scale.
    #[serde(skip)]
    pub form: Option<Matrix3>,
    /// Eigenvalue sign counts `(positive, negative)` of the form.
    pub signature: Option<(usize, usize)>,
}

impl Su21Report {
    pub fn passed(&self) -> bool {
        self.table_mismatches.is_empty()
            && self.traceless
            && self.linearly_independent
            && self.hermitian_solutions == 1
            && matches!(self.signature, Some((2, 1)) | Some((1, 2)))
    }
}

/// Checks the matrix realization against the table and finds the
/// invariant Hermitian form `J` with `M†J + JM = 0`.
pub fn su21_realization() -> Su21Report {
    let m = su21_matrices();
    let table = tanaka_table();
    let mut table_mismatches = Vec::new();
    for a in 0..8 {
        for b in a + 1..8 {
            let lhs = commutator(&m[a], &m[b]);
            let mut rhs = e(0, 0, g(Rational::zero(), Rational::zero()));
            for k in 0..8 {
                let c = &table.t[a][b][k];
                if !c.is_zero() {
                    rhs = madd(&rhs, &mscale(&m[k], &g(c.clone(), Rational::zero())));
                }
            }
            if lhs != rhs {
                table_mismatches.push((LABELS[a].to_string(), LABELS[b].to_string()));
            }
        }
    }
    let traceless = m.iter().all(|x| (0..3).fold(g(Rational::zero(), Rational::zero()), |acc, i| acc + x[i][i].clone()).is_zero());
    // real coordinates of the eight matrices in R^18
    let flat: Vec<Vec<Rational>> = m
        .iter()
        .map(|x| x.iter().flatten().flat_map(|c| [c.re.clone(), c.im.clone()]).collect())
        .collect();
    let linearly_independent = rank(&flat) == 8;
    // Hermitian J from 9 real parameters
    let basis = hermitian_basis();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for x in &m {
        let xa = adjoint(x);
        let images: Vec<Matrix3> = basis.iter().map(|h| madd(&mmul(&xa, h), &mmul(h, x))).collect();
        for i in 0..3 {
            for j in 0..3 {
                rows.push(images.iter().map(|im| im[i][j].re.clone()).collect());
                rows.push(images.iter().map(|im| im[i][j].im.clone()).collect());
            }
        }
    }
    let sols = nullspace(&rows, 9);
    let form = (sols.len() == 1).then(|| {
        basis.iter().zip(&sols[0]).fold(e(0, 0, g(Rational::zero(), Rational::zero())), |acc, (h, c)| {
            madd(&acc, &mscale(h, &g(c.clone(), Rational::zero())))
        })
    });
    let signature = form.as_ref().map(hermitian_signature);
    Su21Report {
        table_mismatches,
        traceless,
        linearly_independent,
        hermitian_solutions: sols.len(),
        form,
        signature,
    }
}

fn hermitian_basis() -> Vec<Matrix3> {
    let one = g(q(1, 1), q(0, 1));
    let i = g(q(0, 1), q(1, 1));
    let mut out = Vec::new();
    for k in 0..3 {
        out.push(e(k, k, one.clone()));
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        out.push(madd(&e(a, b, one.clone()), &e(b, a, one.clone())));
        out.push(madd(&e(a, b, i.clone()), &e(b, a, -i.clone())));
    }
    out
}

/// Sign counts of the (real) eigenvalues of a Hermitian matrix from its
/// characteristic polynomial (Descartes' rule is exact for real roots).
pub fn hermitian_signature(h: &Matrix3) -> (usize, usize) {
    let re = |c: &Gaussian| c.re.clone();
    let tr = re(&h[0][0]) + re(&h[1][1]) + re(&h[2][2]);
    let minor = |a: usize, b: usize| re(&(h[a][a].clone() * h[b][b].clone() - h[a][b].clone() * h[b][a].clone()));
    let m2 = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let det = re(&(h[0][0].clone() * (h[1][1].clone() * h[2][2].clone() - h[1][2].clone() * h[2][1].clone())
        - h[0][1].clone() * (h[1][0].clone() * h[2][2].clone() - h[1][2].clone() * h[2][0].clone())
        + h[0][2].clone() * (h[1][0].clone() * h[2][1].clone() - h[1][1].clone() * h[2][0].clone())));
    // λ³ − tr λ² + m2 λ − det
    let changes = |c: &[Rational]| {
        let nz: Vec<&Rational> = c.iter().filter(|v| !v.is_zero()).collect();
        nz.windows(2).filter(|w| w[0].is_positive() != w[1].is_positive()).count()
    };
    let p = [Rational::one(), -tr.clone(), m2.clone(), -det.clone()];
    let pneg = [-Rational::one(), -tr, -m2, -det];
    (changes(&p), changes(&pneg))
}

/// Monomials `x^a y^b z^c` with `a + b + 2c ≤ d`.
fn weighted_monomials(d: u32) -> Vec<Exponent> {
    let mut out = Vec::new();
    for c in 0..=d / 2 {
        for a in 0..=d - 2 * c {
            for b in 0..=d - 2 * c - a {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// All conformal fields whose `∂x`, `∂y` coefficients have weighted degree
/// `≤ d − 1` and whose `∂z` coefficient has weighted degree `≤ d`.
pub fn solve_conformal_fields(max_weighted_degree: u32) -> Vec<PolyVectorField> {
    let d = max_weighted_degree;
    let low = if d == 0 { Vec::new() } else { weighted_monomials(d - 1) };
    let high = weighted_monomials(d);
    let mut unknowns: Vec<(usize, Exponent)> = Vec::new();
    unknowns.extend(low.iter().map(|e| (0, *e)));
    unknowns.extend(low.iter().map(|e| (1, *e)));
    unknowns.extend(high.iter().map(|e| (2, *e)));
    let field_of = |k: usize, e: Exponent| {
        let mut c: [Poly; 3] = Default::default();
        c[k] = Poly::monomial(e, Rational::one());
        PolyVectorField { c }
    };
    // residuals are linear in the field, so each unknown contributes a column
    let columns: Vec<[Poly; 6]> = unknowns.iter().map(|(k, e)| conformal_residuals(&field_of(*k, *e)).residuals).collect();
    let mut keys: Vec<(usize, Exponent)> = columns
        .iter()
        .flat_map(|r| r.iter().enumerate().flat_map(|(s, p)| p.terms().map(move |(e, _)| (s, *e))))
        .collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Rational>> = keys.iter().map(|(s, e)| columns.iter().map(|r| r[*s].coeff(e)).collect()).collect();
    nullspace(&rows, unknowns.len())
        .into_iter()
        .map(|v| {
            let mut c: [Poly; 3] = Default::default();
            for ((k, e), val) in unknowns.iter().zip(v) {
                c[*k] = c[*k].clone() + Poly::monomial(*e, val);
            }
            PolyVectorField { c }
        })
        .collect()
}

/// Whether two families span the same space.
pub fn same_span(a: &[PolyVectorField], b: &[PolyVectorField]) -> bool {
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    let (_, cols) = field_coordinates(&all);
    let (ca, cb) = cols.split_at(a.len());
    rank(ca) == rank(&cols) && rank(cb) == rank(&cols)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeisenbergCertificate {
    pub dimension: usize,
    pub generators_conformal: bool,
    pub eta: Vec<String>,
    pub isometry_kernel_dimension: usize,
    pub table_match: bool,
    pub orientation: Orientation,
    pub tanaka_jacobi: bool,
    pub tanaka_graded: bool,
    pub su21_table_match: bool,
    pub su21_traceless: bool,
    pub su21_signature: Option<(usize, usize)>,
    pub oracle_dimension: usize,
    pub oracle_span_match: bool,
}

impl HeisenbergCertificate {
    pub fn passed(&self) -> bool {
        self.dimension == 8
            && self.generators_conformal
            && self.isometry_kernel_dimension == 4
            && self.table_match
            && self.tanaka_jacobi
            && self.tanaka_graded
            && self.su21_table_match
            && self.su21_traceless
            && matches!(self.su21_signature, Some((2, 1)) | Some((1, 2)))
            && self.oracle_dimension == 8
            && self.oracle_span_match
    }
}

/// Runs every check of this module.
pub fn verify(oracle_degree: u32) -> Result<HeisenbergCertificate> {
    let gens = generators();
    let res: Vec<ConformalResiduals> = gens.iter().map(conformal_residuals).collect();
    let report = bracket_table(&gens)?;
    let tanaka = tanaka_table();
    let su = su21_realization();
    let oracle = solve_conformal_fields(oracle_degree);
    let isometries: Vec<PolyVectorField> = oracle
        .iter()
        .filter(|f| conformal_residuals(f).eta.is_some_and(|e| e.is_zero()))
        .cloned()
        .collect();
    Ok(HeisenbergCertificate {
        dimension: report.dimension,
        generators_conformal: res.iter().all(ConformalResiduals::is_conformal),
        eta: res.iter().map(|r| r.eta.as_ref().map_or("⊥".to_string(), Poly::to_string)).collect(),
        isometry_kernel_dimension: isometry_kernel_dimension(oracle_degree),
        table_match: report.mismatches.is_empty(),
        orientation: report.orientation,
        tanaka_jacobi: tanaka.jacobi_failures().is_empty(),
        tanaka_graded: tanaka.grading_failures().is_empty(),
        su21_table_match: su.table_mismatches.is_empty(),
        su21_traceless: su.traceless,
        su21_signature: su.signature,
        oracle_dimension: oracle.len(),
        oracle_span_match: same_span(&oracle, &gens) && isometries.len() <= 4,
    })
}

/// Dimension of the conformal fields with `η ≡ 0` up to the given degree.
pub fn isometry_kernel_dimension(max_weighted_degree: u32) -> usize {
    let sols = solve_conformal_fields(max_weighted_degree);
    // η is linear in the field: stack η coefficients and take the kernel
    let etas: Vec<Poly> = sols.iter().map(|f| conformal_residuals(f).eta.unwrap_or_default()).collect();
    let mut keys: Vec<Exponent> = etas.iter().flat_map(|p| p.terms().map(|(e, _)| *e)).collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Rational>> = keys.iter().map(|e| etas.iter().map(|p| p.coeff(e)).collect()).collect();
    nullspace(&rows, sols.len()).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64, Exponent)]) -> Poly {
        terms.iter().fold(Poly::zero(), |acc, (n, d, e)| acc + Poly::monomial(*e, q(*n, *d)))
    }

    #[test]
    fn frame_components() {
        let dz = PolyVectorField::new(Poly::zero(), Poly::zero(), Poly::int(1));
        let d = to_frame_components(&dz);
        assert_eq!((d.a0, d.a1.is_zero(), d.a2.is_zero()), (Poly::int(1), true, true));
        let gens = generators();
        let d4 = to_frame_components(&gens[3]);
        assert_eq!(d4.a1, Poly::x());
        assert_eq!(d4.a2, -Poly::y());
        assert_eq!(d4.a0, p(&[(-1, 2, [2, 0, 0]), (-1, 2, [0, 2, 0])]));
        let d8 = to_frame_components(&gens[7]);
        assert_eq!(d8.a1, p(&[(-1, 1, [0, 1, 1]), (1, 4, [1, 2, 0]), (1, 4, [3, 0, 0])]));
        assert_eq!(d8.a2, p(&[(-1, 1, [1, 0, 1]), (-1, 4, [2, 1, 0]), (-1, 4, [0, 3, 0])]));
        assert_eq!(d8.a0, p(&[(-1, 1, [0, 0, 2]), (-1, 8, [2, 2, 0]), (-1, 16, [4, 0, 0]), (-1, 16, [0, 4, 0])]));
        for f in &gens {
            assert_eq!(to_frame_components(f).reconstruct(), *f);
        }
    }

    #[test]
    fn residual_examples() {
        let gens = generators();
        let r1 = conformal_residuals(&gens[0]);
        assert!(r1.is_conformal() && r1.eta.unwrap().is_zero() && r1.omega.unwrap().is_zero());
        let r8 = conformal_residuals(&gens[7]);
        assert_eq!(r8.eta, Some(Poly::z()));
        assert_eq!(r8.omega, Some(p(&[(3, 4, [2, 0, 0]), (3, 4, [0, 2, 0])])));
        let xdx = PolyVectorField::new(Poly::x(), Poly::zero(), Poly::zero());
        let r = conformal_residuals(&xdx);
        assert!(!r.is_conformal() && !r.residuals[1].is_zero());
    }

    #[test]
    fn eta_types() {
        let gens = generators();
        let etas: Vec<Poly> = gens.iter().map(|f| conformal_residuals(f).eta.unwrap()).collect();
        for e in &etas[..4] {
            assert!(e.is_zero());
        }
        assert_eq!(etas[4], Poly::int(1));
        assert_eq!(etas[5], Poly::x());
        assert_eq!(etas[6], Poly::y());
        assert_eq!(etas[7], Poly::z());
    }

    #[test]
    fn admissible_eta() {
        assert!(eta_admissible(&(Poly::x().scale_int(3, 1) - Poly::z() + Poly::int(2))));
        assert!(!eta_admissible(&(Poly::x() * Poly::x())));
        assert!(eta_admissible(&Poly::zero()));
    }

    #[test]
    fn tanaka_is_a_graded_lie_algebra() {
        let t = tanaka_table();
        assert!(t.is_antisymmetric());
        assert_eq!(t.jacobi_failures(), vec![]);
        assert_eq!(t.grading_failures(), vec![]);
    }

    #[test]
    fn generator_brackets() {
        let g = generators();
        let r = bracket_table(&g).unwrap();
        assert_eq!(r.table.t[1][2][0], q(-1, 1));
        assert_eq!(r.table.t[4][0][0], q(2, 1));
        assert!(r.table.t[0][1].iter().all(Zero::is_zero));
        assert_eq!(r.field_weights, vec![Some(-2), Some(-1), Some(-1), Some(0), Some(0), Some(1), Some(1), Some(2)]);
        assert_eq!(r.mismatches, vec![]);
        assert_eq!(r.orientation, Orientation::Homomorphism);
    }

    #[test]
    fn su21() {
        let r = su21_realization();
        assert_eq!(r.table_mismatches, vec![]);
        assert!(r.traceless && r.linearly_independent);
        assert_eq!(r.hermitian_solutions, 1);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn oracle_dimensions() {
        assert_eq!(solve_conformal_fields(2).len(), 5);
        let four = solve_conformal_fields(4);
        assert_eq!(four.len(), 8);
        assert!(same_span(&four, &generators()));
        assert_eq!(isometry_kernel_dimension(4), 4);
    }

    #[test]
    fn no_fields_beyond_weight_two() {
        let six = solve_conformal_fields(6);
        assert_eq!(six.len(), 8);
        assert!(same_span(&six, &generators()));
    }

    #[test]
    fn verify_certificate() {
        let c = verify(4).unwrap();
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.orientation, Orientation::Homomorphism);
    }

    #[test]
    fn dependent_fields_are_rejected() {
        let g = generators();
        let fields = vec![g[0].clone(), g[0].clone()];
        assert!(matches!(bracket_table(&fields), Err(Error::NotClosed(_))));
        let open = vec![g[1].clone(), g[2].clone()];
        assert!(matches!(bracket_table(&open), Err(Error::NotClosed(_))));
    }
}
