//! The Fefferman Lorentz metric on `M × S¹` and its curvature.
//!
//! Indices run over the frame `f0, f1, f2, f∞` (0..4). All tensors are
//! generic over the ring of the frame calculus: exact constants for
//! left-invariant structures, jets for explicit frames.

use crate::error::{Error, Result};
use crate::frame::FrameCalculus;
use crate::scalar::{Ring, Scalar};

pub const DIM: usize = 4;
pub const INF: usize = 3;

fn idx4(i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * DIM + j) * DIM + k) * DIM + l
}

/// A rank-4 tensor with frame indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4<R>(pub Vec<R>);

impl<R: Ring> Tensor4<R> {
    fn build(mut f: impl FnMut(usize, usize, usize, usize) -> Result<R>) -> Result<Self> {
        let mut v = Vec::with_capacity(DIM.pow(4));
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    for l in 0..DIM {
                        v.push(f(i, j, k, l)?);
                    }
                }
            }
        }
        Ok(Tensor4(v))
    }

    pub fn at(&self, i: usize, j: usize, k: usize, l: usize) -> &R {
        &self.0[idx4(i, j, k, l)]
    }

    pub fn slots() -> impl Iterator<Item = [usize; 4]> {
        (0..DIM.pow(4)).map(|n| [n / 64, (n / 16) % 4, (n / 4) % 4, n % 4])
    }

    pub fn map<T>(&self, f: impl Fn(&R) -> T) -> Tensor4<T> {
        Tensor4(self.0.iter().map(f).collect())
    }
}

pub type Matrix4<R> = [[R; DIM]; DIM];

fn matrix<R>(mut f: impl FnMut(usize, usize) -> R) -> Matrix4<R> {
    std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)))
}

fn sum<R: Ring>(zero: &R, terms: impl IntoIterator<Item = R>) -> R {
    terms.into_iter().fold(zero.zero_like(), |a, b| a + b)
}

/// Metric and inverse in the frame `f0, f1, f2, f∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct FeffermanMetric<R> {
    pub g: Matrix4<R>,
    pub g_inv: Matrix4<R>,
}

pub fn fefferman_metric<C: FrameCalculus>(calc: &C) -> Result<FeffermanMetric<C::R>> {
    let c = calc.constants();
    let f1c = calc.derive(1, &c.c12_2)?;
    let f2c = calc.derive(2, &c.c12_1)?;
    let (a1, a2) = (c.c12_1.clone(), c.c12_2.clone());
    let zero = a1.zero_like();
    let k = |n, d| calc.lift(n, d);
    let diff = (c.c10_2.clone() - c.c20_1.clone()).scale(1, 2);
    let g00 = diff.clone() + (a1.square() + a2.square() + f1c.clone() - f2c.clone()).scale(1, 3);
    let g01 = a1.scale(-2, 3);
    let g02 = a2.scale(-2, 3);
    let g = [
        [g00, g01.clone(), g02.clone(), k(2, 3)],
        [g01, k(1, 1), zero.clone(), zero.clone()],
        [g02, zero.clone(), k(1, 1), zero.clone()],
        [k(2, 3), zero.clone(), zero.clone(), zero.clone()],
    ];
    let g33 = ((a1.square() + a2.square()).scale(-1, 9) + diff + (f1c - f2c).scale(1, 3)).scale(-9, 4);
    let g_inv = [
        [zero.clone(), zero.clone(), zero.clone(), k(3, 2)],
        [zero.clone(), k(1, 1), zero.clone(), a1.clone()],
        [zero.clone(), zero.clone(), k(1, 1), a2.clone()],
        [k(3, 2), a1, a2, g33],
    ];
    let det = determinant(&g);
    if det.value().is_zero_within(1e-14) {
        return Err(Error::SingularMetric("Fefferman metric is degenerate".into()));
    }
    Ok(FeffermanMetric { g, g_inv })
}

fn determinant<R: Ring>(m: &Matrix4<R>) -> R {
    // Laplace expansion along the first row
    let minor3 = |rows: [usize; 3], cols: [usize; 3]| -> R {
        let e = |r: usize, c: usize| m[rows[r]][cols[c]].clone();
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    };
    let mut out = m[0][0].zero_like();
    for c in 0..DIM {
        let cols: Vec<usize> = (0..DIM).filter(|&x| x != c).collect();
        let term = m[0][c].clone() * minor3([1, 2, 3], [cols[0], cols[1], cols[2]]);
        out = if c % 2 == 0 { out + term } else { out - term };
    }
    out
}

impl<R: Ring> FeffermanMetric<R> {
    /// `g · g_inv - I`.
    pub fn identity_residual(&self) -> Matrix4<R> {
        let one = self.g[1][1].clone();
        matrix(|i, j| {
            let p = sum(&one, (0..DIM).map(|k| self.g[i][k].clone() * self.g_inv[k][j].clone()));
            if i == j {
                p - one.clone()
            } else {
                p
            }
        })
    }

    /// Number of positive and negative eigenvalues of the metric value.
    pub fn signature(&self) -> (usize, usize) {
        let m = matrix(|i, j| self.g[i][j].value().real());
        crate::linalg::symmetric_signature_f64(&m)
    }
}

/// `f` and `Tr(dσ)` of the canonical connection form; the trace equals `kappa/4`.
pub fn sigma_trace<C: FrameCalculus>(calc: &C) -> Result<(C::R, C::R)> {
    let c = calc.constants();
    let a = calc.derive(2, &c.c12_1)? - calc.derive(1, &c.c12_2)? - c.c12_1.square() - c.c12_2.square();
    let f = ((c.c10_2.clone() - c.c20_1.clone()).scale(1, 6) - a.scale(1, 9)).scale(3, 4);
    let trace = a.scale(1, 3) + f.clone();
    Ok((f, trace))
}

/// Structure constants of the frame brackets: `[e_a, e_b] = Σ_d C[d][a][b] e_d`.
pub fn bracket_constants<C: FrameCalculus>(calc: &C) -> Vec<C::R> {
    let c = calc.constants();
    let zero = c.c12_1.zero_like();
    let mut t = vec![zero; DIM * DIM * DIM];
    let mut set = |d: usize, a: usize, b: usize, v: C::R| {
        t[(d * DIM + a) * DIM + b] = v.clone();
        t[(d * DIM + b) * DIM + a] = -v;
    };
    set(0, 2, 1, calc.lift(1, 1));
    set(1, 2, 1, c.c12_1.clone());
    set(2, 2, 1, c.c12_2.clone());
    set(1, 1, 0, c.c10_1.clone());
    set(2, 1, 0, c.c10_2.clone());
    set(1, 2, 0, c.c20_1.clone());
    set(2, 2, 0, c.c20_2.clone());
    t
}

/// Levi-Civita connection: `∇_{e_a} e_b = Σ_d gamma(d, a, b) e_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection<R> {
    pub gamma: Vec<R>,
}

impl<R: Ring> Connection<R> {
    pub fn at(&self, d: usize, a: usize, b: usize) -> &R {
        &self.gamma[(d * DIM + a) * DIM + b]
    }
}

fn frame_derive<C: FrameCalculus>(calc: &C, a: usize, u: &C::R) -> Result<C::R> {
    if a == INF {
        Ok(u.zero_like())
    } else {
        calc.derive(a, u)
    }
}

pub fn levi_civita<C: FrameCalculus>(calc: &C, fm: &FeffermanMetric<C::R>) -> Result<Connection<C::R>> {
    let cb = bracket_constants(calc);
    let br = |d: usize, a: usize, b: usize| cb[(d * DIM + a) * DIM + b].clone();
    let g = &fm.g;
    let zero = g[0][0].zero_like();
    // g([e_a, e_b], e_c)
    let gb = |a: usize, b: usize, c: usize| sum(&zero, (0..DIM).map(|d| br(d, a, b) * g[d][c].clone()));
    let mut lowered = Vec::with_capacity(DIM.pow(3));
    for a in 0..DIM {
        for b in 0..DIM {
            for c in 0..DIM {
                let v = frame_derive(calc, a, &g[b][c])? + frame_derive(calc, b, &g[a][c])?
                    - frame_derive(calc, c, &g[a][b])?
                    + gb(a, b, c)
                    - gb(a, c, b)
                    - gb(b, c, a);
                lowered.push(v.scale(1, 2));
            }
        }
    }
    let mut gamma = Vec::with_capacity(DIM.pow(3));
    for d in 0..DIM {
        for a in 0..DIM {
            for b in 0..DIM {
                gamma.push(sum(
                    &zero,
                    (0..DIM).map(|c| fm.g_inv[d][c].clone() * lowered[(a * DIM + b) * DIM + c].clone()),
                ));
            }
        }
    }
    Ok(Connection { gamma })
}

/// Riemann, Ricci, scalar and Weyl tensors of the Fefferman metric.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureBundle<R> {
    pub metric: FeffermanMetric<R>,
    pub connection: Connection<R>,
    /// `R^i_{jkl} = <R(e_k, e_l) e_j, ν^i>`.
    pub riemann_up: Tensor4<R>,
    /// `R_{ijkl} = g_{im} R^m_{jkl}`.
    pub riemann: Tensor4<R>,
    pub ricci: Matrix4<R>,
    pub scalar: R,
    pub weyl: Tensor4<R>,
}

pub fn curvature<C: FrameCalculus>(calc: &C) -> Result<CurvatureBundle<C::R>> {
    let metric = fefferman_metric(calc)?;
    let connection = levi_civita(calc, &metric)?;
    let cb = bracket_constants(calc);
    let gm = |d: usize, a: usize, b: usize| connection.at(d, a, b).clone();
    let zero = metric.g[0][0].zero_like();
    let riemann_up = Tensor4::build(|i, j, k, l| {
        let mut v = frame_derive(calc, k, connection.at(i, l, j))? - frame_derive(calc, l, connection.at(i, k, j))?;
        for m in 0..DIM {
            v = v + gm(m, l, j) * gm(i, k, m) - gm(m, k, j) * gm(i, l, m)
                - cb[(m * DIM + k) * DIM + l].clone() * gm(i, m, j);
        }
        Ok(v)
    })?;
    let g = &metric.g;
    let riemann = Tensor4::build(|i, j, k, l| {
        Ok(sum(&zero, (0..DIM).map(|m| g[i][m].clone() * riemann_up.at(m, j, k, l).clone())))
    })?;
    let ricci = matrix(|i, j| sum(&zero, (0..DIM).map(|k| riemann_up.at(k, i, k, j).clone())));
    let scalar = sum(
        &zero,
        (0..DIM).flat_map(|i| (0..DIM).map(move |j| (i, j))).map(|(i, j)| metric.g_inv[i][j].clone() * ricci[i][j].clone()),
    );
    let weyl = Tensor4::build(|i, j, k, l| {
        let c = |a: usize, b: usize| g[a][b].clone();
        let ric = |a: usize, b: usize| ricci[a][b].clone();
        let w = riemann.at(i, j, k, l).clone()
            - (c(i, k) * ric(j, l) - c(i, l) * ric(j, k) - c(j, k) * ric(i, l) + c(j, l) * ric(i, k)).scale(1, 2)
            + (c(i, k) * c(j, l) - c(i, l) * c(j, k)).scale_by(&<C::R as Ring>::Scalar::from_ratio(1, 6))
                * scalar.clone();
        Ok(w)
    })?;
    Ok(CurvatureBundle {
        metric,
        connection,
        riemann_up,
        riemann,
        ricci,
        scalar,
        weyl,
    })
}

impl<R: Ring> CurvatureBundle<R> {
    /// `∇_{f∞} R_{ijkl}` including the connection terms.
    pub fn nabla_inf_riemann(&self) -> Tensor4<R> {
        let gm = |m: usize, b: usize| self.connection.at(m, INF, b).clone();
        let r = &self.riemann;
        let zero = self.scalar.zero_like();
        Tensor4::build(|i, j, k, l| {
            Ok(-sum(
                &zero,
                (0..DIM).map(|m| {
                    gm(m, i) * r.at(m, j, k, l).clone()
                        + gm(m, j) * r.at(i, m, k, l).clone()
                        + gm(m, k) * r.at(i, j, m, l).clone()
                        + gm(m, l) * r.at(i, j, k, m).clone()
                }),
            ))
        })
        .expect("infallible")
    }

    /// `g^{ia} g^{jb} g^{kc} g^{ld} T_{ijkl} T_{abcd}`.
    pub fn norm_squared(&self, t: &Tensor4<R>) -> R {
        let gi = &self.metric.g_inv;
        let zero = self.scalar.zero_like();
        let mut cur = t.clone();
        for pos in 0..4 {
            cur = Tensor4::build(|i, j, k, l| {
                let slot = [i, j, k, l];
                Ok(sum(
                    &zero,
                    (0..DIM).map(|m| {
                        let mut s = slot;
                        s[pos] = m;
                        gi[slot[pos]][m].clone() * cur.at(s[0], s[1], s[2], s[3]).clone()
                    }),
                ))
            })
            .expect("infallible");
        }
        sum(&zero, t.0.iter().zip(&cur.0).map(|(a, b)| a.clone() * b.clone()))
    }

    /// `g^{ik} W_{ijkl}` and the other index-pair traces, flattened.
    pub fn weyl_traces(&self) -> Vec<R> {
        let gi = &self.metric.g_inv;
        let zero = self.scalar.zero_like();
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut out = Vec::new();
        for (p, q) in pairs {
            let rest: Vec<usize> = (0..4).filter(|&x| x != p && x != q).collect();
            for a in 0..DIM {
                for b in 0..DIM {
                    out.push(sum(
                        &zero,
                        (0..DIM).flat_map(|m| (0..DIM).map(move |n| (m, n))).map(|(m, n)| {
                            let mut s = [0; 4];
                            s[p] = m;
                            s[q] = n;
                            s[rest[0]] = a;
                            s[rest[1]] = b;
                            gi[m][n].clone() * self.weyl.at(s[0], s[1], s[2], s[3]).clone()
                        }),
                    ));
                }
            }
        }
        out
    }

    /// Antisymmetry, pair symmetry and first Bianchi defects of `R_{ijkl}`.
    pub fn riemann_symmetry_defects(&self) -> Vec<R> {
        let r = &self.riemann;
        let mut out = Vec::new();
        for [i, j, k, l] in Tensor4::<R>::slots() {
            let v = r.at(i, j, k, l).clone();
            out.push(v.clone() + r.at(j, i, k, l).clone());
            out.push(v.clone() + r.at(i, j, l, k).clone());
            out.push(v.clone() - r.at(k, l, i, j).clone());
            out.push(v + r.at(i, k, l, j).clone() + r.at(i, l, j, k).clone());
        }
        out
    }
}

/// Weyl slots carrying the two independent invariants, with their factors:
/// `W[slot] = factor · alpha` (resp. beta). Found by matching the closed
/// forms against all 256 components and frozen here.
pub const ALPHA_SLOT: ([usize; 4], i64, i64) = ([0, 1, 0, 1], 1, 1);
pub const BETA_SLOT: ([usize; 4], i64, i64) = ([0, 1, 0, 2], 1, 1);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylEntry {
    Alpha,
    Beta,
}

/// Every slot of the Weyl tensor that can be nonzero, with the invariant it
/// carries and its sign. All remaining slots vanish identically.
pub const WEYL_PATTERN: [([usize; 4], WeylEntry, i64); 16] = {
    use WeylEntry::{Alpha as A, Beta as B};
    [
        ([0, 1, 0, 1], A, 1),
        ([0, 1, 1, 0], A, -1),
        ([0, 2, 0, 2], A, -1),
        ([0, 2, 2, 0], A, 1),
        ([1, 0, 0, 1], A, -1),
        ([1, 0, 1, 0], A, 1),
        ([2, 0, 0, 2], A, 1),
        ([2, 0, 2, 0], A, -1),
        ([0, 1, 0, 2], B, 1),
        ([0, 1, 2, 0], B, -1),
        ([0, 2, 0, 1], B, 1),
        ([0, 2, 1, 0], B, -1),
        ([1, 0, 0, 2], B, -1),
        ([1, 0, 2, 0], B, 1),
        ([2, 0, 0, 1], B, -1),
        ([2, 0, 1, 0], B, 1),
    ]
};

/// `W - pattern(alpha, beta)` over all 256 slots.
pub fn weyl_pattern_defects<R: Ring>(w: &Tensor4<R>, alpha: &R, beta: &R) -> Tensor4<R> {
    let mut expect = w.map(|x| x.zero_like());
    for (s, e, sign) in WEYL_PATTERN {
        let v = match e {
            WeylEntry::Alpha => alpha.scale(sign, 1),
            WeylEntry::Beta => beta.scale(sign, 1),
        };
        expect.0[idx4(s[0], s[1], s[2], s[3])] = v;
    }
    Tensor4(w.0.iter().zip(expect.0).map(|(a, b)| a.clone() - b).collect())
}

/// `alpha` and `beta` read from the Weyl tensor.
pub fn alpha_beta_from_weyl<R: Ring>(w: &Tensor4<R>) -> (R, R) {
    let read = |(s, n, d): ([usize; 4], i64, i64)| w.at(s[0], s[1], s[2], s[3]).scale(d, n);
    (read(ALPHA_SLOT), read(BETA_SLOT))
}

/// The explicit expressions of `alpha` and `beta` in terms of the structure
/// functions and their frame derivatives up to third order.
pub fn alpha_beta_closed_form<C: FrameCalculus>(calc: &C) -> Result<(C::R, C::R)> {
    let c = calc.constants();
    let (a1, a2) = (&c.c12_1, &c.c12_2);
    let (t1, t2) = (&c.c10_1, &c.c10_2);
    let (q1, q2) = (&c.c20_1, &c.c20_2);
    let d = |ops: &[usize], u: &C::R| calc.derive_chain(ops, u);
    let s = |n: i64, dd: i64, u: C::R| u.scale(n, dd);
    let m = |a: &C::R, b: C::R| a.clone() * b;

    let alpha = sum(
        a1,
        [
            s(-1, 12, m(&a1.square(), t2.clone())),
            s(1, 12, m(&a2.square(), t2.clone())),
            s(-3, 8, t2.square()),
            s(1, 12, m(&a1.square(), q1.clone())),
            s(-1, 12, m(&a2.square(), q1.clone())),
            s(3, 8, q1.square()),
            s(-1, 3, d(&[0, 1], a1)?),
            s(1, 3, d(&[0, 2], a2)?),
            s(1, 6, m(a2, d(&[0], a1)?)),
            s(1, 6, m(a1, d(&[0], a2)?)),
            s(-1, 2, d(&[0], t1)?),
            s(1, 2, d(&[0], q2)?),
            s(-1, 12, d(&[1, 1, 1], a2)?),
            s(1, 12, d(&[1, 1, 2], a1)?),
            s(-1, 6, m(a1, d(&[1, 1], a1)?)),
            s(-1, 12, m(a2, d(&[1, 1], a2)?)),
            s(1, 8, d(&[1, 1], q1)?),
            s(-1, 12, m(a2, d(&[1, 2], a1)?)),
            s(1, 6, m(&m(a1, a2.clone()), d(&[1], a1)?)),
            s(-2, 3, m(t1, d(&[1], a1)?)),
            s(-1, 6, d(&[1], a1)?.square()),
            s(1, 6, m(&a2.square(), d(&[1], a2)?)),
            s(-7, 12, m(t2, d(&[1], a2)?)),
            s(1, 12, m(q1, d(&[1], a2)?)),
            s(-1, 6, d(&[1], a2)?.square()),
            s(-1, 3, m(a1, d(&[1], t1)?)),
            s(1, 24, m(a2, d(&[1], q1)?)),
            s(1, 6, m(a1, d(&[1], q2)?)),
            s(1, 12, m(a1, d(&[2, 1], a2)?)),
            s(1, 12, d(&[2, 2, 1], a2)?),
            s(1, 12, m(a1, d(&[2, 2], a1)?)),
            s(1, 6, m(a2, d(&[2, 2], a2)?)),
            s(1, 8, d(&[2, 2], t2)?),
            s(-1, 8, d(&[2, 2], q1)?),
            s(-1, 12, m(t2, d(&[2], a1)?)),
            s(7, 12, m(q1, d(&[2], a1)?)),
            s(1, 6, d(&[2], a1)?.square()),
            s(1, 6, m(&m(a1, a2.clone()), d(&[2], a2)?)),
            s(2, 3, m(q2, d(&[2], a2)?)),
            s(-1, 8, d(&[1, 1], t2)?),
            s(-5, 24, m(a2, d(&[1], t2)?)),
            s(-1, 12, d(&[2, 2, 2], a1)?),
            s(1, 6, m(&a1.square(), d(&[2], a1)?)),
            s(-1, 6, m(a2, d(&[2], t1)?)),
            s(-1, 24, m(a1, d(&[2], t2)?)),
            s(5, 24, m(a1, d(&[2], q1)?)),
            s(1, 3, m(a2, d(&[2], q2)?)),
            s(1, 6, d(&[2], a2)?.square()),
        ],
    );

    let beta = sum(
        a1,
        [
            s(-1, 6, m(&m(a1, a2.clone()), t2.clone())),
            s(-1, 8, m(t1, t2.clone())),
            s(1, 6, m(&m(a1, a2.clone()), q1.clone())),
            s(-7, 8, m(t1, q1.clone())),
            s(-7, 8, m(t2, q2.clone())),
            s(-1, 8, m(q1, q2.clone())),
            s(-1, 3, d(&[0, 2], a1)?),
            s(-1, 6, m(a1, d(&[0], a1)?)),
            s(1, 6, m(a2, d(&[0], a2)?)),
            s(-1, 2, d(&[0], t2)?),
            s(-1, 3, d(&[1], a1)? * d(&[2], a1)?),
            s(-1, 12, d(&[1, 2, 1], a2)?),
            s(1, 12, d(&[1, 2, 2], a1)?),
            s(-1, 12, m(a1, d(&[1, 2], a1)?)),
            s(-1, 6, m(a2, d(&[1, 2], a2)?)),
            s(1, 8, d(&[1, 2], q1)?),
            s(-1, 6, m(&a1.square(), d(&[1], a1)?)),
            s(-2, 3, m(q1, d(&[1], a1)?)),
            s(-1, 6, m(&m(a1, a2.clone()), d(&[1], a2)?)),
            s(-1, 12, m(t1, d(&[1], a2)?)),
            s(-7, 12, m(q2, d(&[1], a2)?)),
            s(-1, 8, m(a1, d(&[1], t2)?)),
            s(-3, 8, m(a1, d(&[1], q1)?)),
            s(-1, 6, m(a2, d(&[1], q2)?)),
            s(-1, 12, d(&[2, 1, 1], a2)?),
            s(1, 12, d(&[2, 1, 2], a1)?),
            s(-1, 6, m(a1, d(&[2, 1], a1)?)),
            s(-1, 12, m(a2, d(&[2, 1], a2)?)),
            s(-1, 8, d(&[2, 1], t2)?),
            s(-1, 12, m(a2, d(&[2, 2], a1)?)),
            s(1, 6, m(&m(a1, a2.clone()), d(&[2], a1)?)),
            s(-7, 12, m(t1, d(&[2], a1)?)),
            s(-1, 12, m(q2, d(&[2], a1)?)),
            s(-1, 2, d(&[0], q1)?),
            s(1, 6, m(&a2.square(), d(&[2], a2)?)),
            s(-2, 3, m(t2, d(&[2], a2)?)),
            s(-1, 3, d(&[1], a2)? * d(&[2], a2)?),
            s(-1, 6, m(a1, d(&[2], t1)?)),
            s(-3, 8, m(a2, d(&[2], t2)?)),
            s(-1, 8, m(a2, d(&[2], q1)?)),
            s(-1, 3, d(&[0, 1], a2)?),
            s(-1, 12, m(a1, d(&[1, 1], a2)?)),
            s(-1, 8, d(&[1, 2], t2)?),
            s(1, 8, d(&[2, 1], q1)?),
        ],
    );
    Ok((alpha, beta))
}
