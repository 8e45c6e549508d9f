//! Chains: light-like geodesics of the Fefferman metric of a left-invariant
//! structure, written in the fiber coordinates `h_i = <λ, f_i>`.
//!
//! With `{h_i, h_j} = h_[f_i, f_j]` the flow is
//! `dh_k/dt = Σ_i ∂H/∂h_i {h_i, h_k}` and `h_inf` is constant.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::jet::Jet;
use crate::scalar::{Rational, Ring, Scalar};
use crate::structure::{alpha_beta_left_invariant, chi_kappa, Family, StructureConstants};

/// Fiber coordinates `(h0, h1, h2, h_inf)` and an optional chart point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainState<S> {
    pub h: [S; 4],
    pub base: Option<[f64; 3]>,
}

impl<S: Scalar> ChainState<S> {
    pub fn new(h: [S; 4]) -> Self {
        ChainState { h, base: None }
    }

    pub fn with_base(mut self, base: [f64; 3]) -> Self {
        self.base = Some(base);
        self
    }
}

/// `[f_i, f_k]` in the basis `(f0, f1, f2, f_inf)`.
pub fn bracket<S: Scalar>(sc: &StructureConstants<S>, i: usize, k: usize) -> [S; 4] {
    let z = S::zero;
    let b21 = [S::one(), sc.c12_1.clone(), sc.c12_2.clone(), z()];
    let b10 = [z(), sc.c10_1.clone(), sc.c10_2.clone(), z()];
    let b20 = [z(), sc.c20_1.clone(), sc.c20_2.clone(), z()];
    let neg = |v: [S; 4]| v.map(|x| -x);
    match (i, k) {
        (2, 1) => b21,
        (1, 2) => neg(b21),
        (1, 0) => b10,
        (0, 1) => neg(b10),
        (2, 0) => b20,
        (0, 2) => neg(b20),
        _ => [z(), z(), z(), z()],
    }
}

/// `{h_i, h_k}` evaluated on `h`.
pub fn poisson<S: Scalar, R: Ring<Scalar = S>>(sc: &StructureConstants<S>, i: usize, k: usize, h: &[R; 4]) -> R {
    let b = bracket(sc, i, k);
    let mut acc = h[0].zero_like();
    for (c, hj) in b.iter().zip(h) {
        if !c.is_exact_zero() {
            acc = acc + hj.scale_by(c);
        }
    }
    acc
}

/// The `g^{inf inf}` entry of the inverse Fefferman metric.
pub fn g_inf_inf<S: Scalar>(sc: &StructureConstants<S>) -> S {
    let c2 = sc.c12_1.clone() * sc.c12_1.clone() + sc.c12_2.clone() * sc.c12_2.clone();
    c2 * S::from_ratio(1, 4) - (sc.c10_2.clone() - sc.c20_1.clone()) * S::from_ratio(9, 8)
}

/// `H = ½ Σ g^{ij} h_i h_j`.
pub fn chain_hamiltonian<S: Scalar, R: Ring<Scalar = S>>(sc: &StructureConstants<S>, h: &[R; 4]) -> R {
    let [h0, h1, h2, hi] = h;
    let two_h = (h0.clone() * hi.clone()).scale(3, 1)
        + h1.square()
        + h2.square()
        + (h1.clone() * hi.clone()).scale_by(&(sc.c12_1.clone() * S::from_ratio(2, 1)))
        + (h2.clone() * hi.clone()).scale_by(&(sc.c12_2.clone() * S::from_ratio(2, 1)))
        + hi.square().scale_by(&g_inf_inf(sc));
    two_h.scale(1, 2)
}

/// `∂H/∂h_i`.
pub fn hamiltonian_gradient<S: Scalar, R: Ring<Scalar = S>>(sc: &StructureConstants<S>, h: &[R; 4]) -> [R; 4] {
    let [h0, h1, h2, hi] = h;
    [
        hi.scale(3, 2),
        h1.clone() + hi.scale_by(&sc.c12_1),
        h2.clone() + hi.scale_by(&sc.c12_2),
        h0.scale(3, 2) + h1.scale_by(&sc.c12_1) + h2.scale_by(&sc.c12_2) + hi.scale_by(&g_inf_inf(sc)),
    ]
}

/// `dh_k/dt = Σ_i ∂H/∂h_i {h_i, h_k}`; the last entry is identically zero.
pub fn chain_rhs<S: Scalar, R: Ring<Scalar = S>>(sc: &StructureConstants<S>, h: &[R; 4]) -> [R; 4] {
    let grad = hamiltonian_gradient(sc, h);
    std::array::from_fn(|k| {
        let mut acc = h[0].zero_like();
        if k < 3 {
            for (i, g) in grad.iter().enumerate().take(3) {
                acc = acc + g.clone() * poisson(sc, i, k, h);
            }
        }
        acc
    })
}

/// Chart velocity `Σ_i ∂H/∂h_i f_i(q)`.
pub fn base_velocity(chart: &Frame, grad: &[f64; 4], q: &[f64; 3]) -> Result<[f64; 3]> {
    let mut v = [0.0; 3];
    for (i, field) in chart.f.iter().enumerate() {
        for (k, coeff) in field.coeffs.iter().enumerate() {
            v[k] += grad[i] * coeff.eval(q)?;
        }
    }
    Ok(v)
}

/// `I = h0² − (χ−κ) h1² + (χ+κ) h2²`.
pub fn casimir_i<S: Scalar, R: Ring<Scalar = S>>(h: &[R; 4], chi: &S, kappa: &S) -> R {
    h[0].square() - h[1].square().scale_by(&(chi.clone() - kappa.clone()))
        + h[2].square().scale_by(&(chi.clone() + kappa.clone()))
}

/// The Casimir of a canonical unimodular frame, read off its constants
/// (`c20_1 = χ−κ`, `c10_2 = χ+κ`).
pub fn casimir_of<S: Scalar, R: Ring<Scalar = S>>(sc: &StructureConstants<S>, h: &[R; 4]) -> R {
    h[0].square() - h[1].square().scale_by(&sc.c20_1) + h[2].square().scale_by(&sc.c10_2)
}

/// `{P, h_k}` for a quadratic `P`, as the exact polynomial it is: the
/// quadratic form in `h` is recovered from its values on `e_i` and
/// `e_i + e_j`, so a zero return means an identity.
pub fn quadratic_bracket_coefficients(
    sc: &StructureConstants<Rational>,
    grad_p: impl Fn(&[Rational; 4]) -> [Rational; 4],
    k: usize,
) -> Vec<Rational> {
    let eval = |h: [Rational; 4]| {
        let g = grad_p(&h);
        (0..4).fold(<Rational as Zero>::zero(), |acc, i| acc + g[i].clone() * poisson(sc, i, k, &h))
    };
    let unit = |i: usize| std::array::from_fn::<Rational, 4, _>(|j| if i == j { <Rational as One>::one() } else { <Rational as Zero>::zero() });
    let mut out = Vec::new();
    for i in 0..4 {
        let d = eval(unit(i));
        out.push(d.clone());
        for j in i + 1..4 {
            let both = std::array::from_fn(|m| unit(i)[m].clone() + unit(j)[m].clone());
            out.push(eval(both) - d.clone() - eval(unit(j)));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaCase {
    DeltaZero,
    DeltaPos,
    DeltaNeg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantKind {
    I,
    J,
    K,
    L,
}

impl From<DeltaCase> for InvariantKind {
    fn from(c: DeltaCase) -> Self {
        match c {
            DeltaCase::DeltaZero => InvariantKind::J,
            DeltaCase::DeltaPos => InvariantKind::K,
            DeltaCase::DeltaNeg => InvariantKind::L,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolvNormalForm<S> {
    pub delta: S,
    pub case: DeltaCase,
    pub a: Option<f64>,
    pub b: Option<f64>,
    /// Rows are the new frame vectors in the basis `(f0, f1, f2)`.
    pub basis_change: [[f64; 3]; 3],
    /// Largest deviation of the transformed brackets from the normal form.
    pub residual: f64,
}

fn check_solv_plus<S: Scalar>(sc: &StructureConstants<S>) -> Result<()> {
    let ok = sc.c12_1.is_exact_zero()
        && sc.c10_1.is_exact_zero()
        && sc.c20_1.is_exact_zero()
        && sc.c20_2.is_exact_zero()
        && sc.c12_2.real() > 0.0
        && sc.c10_2.real() > 0.0;
    if ok {
        Ok(())
    } else {
        Err(Error::NotSolvPlus(sc.to_f64().to_string()))
    }
}

/// `δ = (c12_2)² − 4 c10_2`.
pub fn solv_delta<S: Scalar>(sc: &StructureConstants<S>) -> S {
    sc.c12_2.clone() * sc.c12_2.clone() - sc.c10_2.clone() * S::from_ratio(4, 1)
}

fn delta_case<S: Scalar>(delta: &S, tol: f64) -> DeltaCase {
    if delta.is_zero_within(tol) {
        DeltaCase::DeltaZero
    } else if delta.real() > 0.0 {
        DeltaCase::DeltaPos
    } else {
        DeltaCase::DeltaNeg
    }
}

/// Brackets `[e_i, e_k]` in the new basis: returns `table[i][k]` as
/// coordinates in the rows of `basis`.
fn transformed_brackets(sc: &StructureConstants<f64>, basis: &[[f64; 3]; 3]) -> Result<[[[f64; 3]; 3]; 3]> {
    let inv = invert3(basis)?;
    let mut table = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            let mut v = [0.0; 3];
            for j in 0..3 {
                for l in 0..3 {
                    let b = bracket(sc, j, l);
                    for m in 0..3 {
                        v[m] += basis[i][j] * basis[k][l] * b[m];
                    }
                }
            }
            // v = Σ x_m basis[m]  =>  x = v · inv
            for m in 0..3 {
                table[i][k][m] = (0..3).map(|n| v[n] * inv[n][m]).sum();
            }
        }
    }
    Ok(table)
}

fn invert3(m: &[[f64; 3]; 3]) -> Result<[[f64; 3]; 3]> {
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
    };
    let det: f64 = (0..3).map(|j| m[0][j] * c(0, j)).sum();
    if det.abs() < 1e-300 {
        return Err(Error::SingularMetric("basis change is singular".into()));
    }
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| c(j, i) / det)))
}

/// The normal-form frame of a canonical solv+ structure.
///
/// For `δ = 0` the third vector is `−f0`: with `+f0` the bracket
/// `[e2, e1] = e0 + e2` fails.
pub fn solv_normal_form<S: Scalar>(sc: &StructureConstants<S>, tol: f64) -> Result<SolvNormalForm<S>> {
    check_solv_plus(sc)?;
    let delta = solv_delta(sc);
    let case = delta_case(&delta, tol);
    let c = sc.c12_2.real();
    let d = delta.real();
    let (basis, a, b, target): ([[f64; 3]; 3], _, _, [[f64; 3]; 2]) = match case {
        DeltaCase::DeltaZero => (
            [[1.0, 0.0, c / 2.0], [0.0, 2.0 / c, 0.0], [-1.0, 0.0, 0.0]],
            None,
            None,
            [[1.0, 0.0, 1.0], [1.0, 0.0, 0.0]],
        ),
        DeltaCase::DeltaPos => {
            let r = d.sqrt();
            let a = (c - r) / (c + r);
            (
                [[1.0, 0.0, (c - r) / 2.0], [0.0, 2.0 / (c + r), 0.0], [1.0, 0.0, (c + r) / 2.0]],
                Some(a),
                None,
                [[0.0, 0.0, 1.0], [a, 0.0, 0.0]],
            )
        }
        DeltaCase::DeltaNeg => {
            let m = (-d).sqrt();
            let b = c / m;
            (
                [[2.0, 0.0, c], [0.0, 2.0 / m, 0.0], [0.0, 0.0, m]],
                None,
                Some(b),
                [[1.0, 0.0, b], [b, 0.0, -1.0]],
            )
        }
    };
    let table = transformed_brackets(&sc.to_f64(), &basis)?;
    // target rows: [e2, e1] and [e0, e1]; [e2, e0] = 0
    let mut residual = 0.0f64;
    for m in 0..3 {
        residual = residual
            .max((table[2][1][m] - target[0][m]).abs())
            .max((table[0][1][m] - target[1][m]).abs())
            .max(table[2][0][m].abs());
    }
    Ok(SolvNormalForm {
        delta,
        case,
        a,
        b,
        basis_change: basis,
        residual,
    })
}

/// Parameters of `J`, `K` or `L` as functions of `χ` and `κ`:
/// `s = √(χ−κ)` and the root of `|δ|`, `δ = −κ − 7χ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolvInvariant {
    pub case: DeltaCase,
    pub s: f64,
    pub root: f64,
}

impl SolvInvariant {
    pub fn new(chi: f64, kappa: f64, case: DeltaCase) -> Result<Self> {
        if chi - kappa < 0.0 {
            return Err(Error::DomainViolation(format!("chi - kappa = {} < 0", chi - kappa)));
        }
        let delta = -kappa - 7.0 * chi;
        let root = match case {
            DeltaCase::DeltaZero => 0.0,
            DeltaCase::DeltaPos if delta > 0.0 => delta.sqrt(),
            DeltaCase::DeltaNeg if delta < 0.0 => (-delta).sqrt(),
            _ => return Err(Error::DomainViolation(format!("delta = {delta} does not match {case:?}"))),
        };
        Ok(SolvInvariant {
            case,
            s: (chi - kappa).sqrt(),
            root,
        })
    }

    pub fn kind(&self) -> InvariantKind {
        self.case.into()
    }

    /// The invariant on jets of `h0` and `h2`.
    pub fn eval_jet(&self, h0: &Jet<Complex64>, h2: &Jet<Complex64>) -> Result<Jet<Complex64>> {
        let c = |v: f64| Complex64::new(v, 0.0);
        let s = self.s;
        let w = h0.scale(2, 1) + h2.scale_by(&c(s));
        match self.case {
            DeltaCase::DeltaZero => {
                if w.value().norm() < 1e-300 {
                    return Err(Error::DomainViolation("2 h0 + s h2 = 0".into()));
                }
                let e = h0.scale(2, 1).div(&w)?.exp()?;
                Ok(w.scale(1, 2) * e)
            }
            DeltaCase::DeltaPos => {
                let r = self.root;
                let first = h0.clone() + h2.scale_by(&c((s - r) / 2.0));
                let base = h0.clone() + h2.scale_by(&c((s + r) / 2.0));
                if base.value().re <= 0.0 {
                    return Err(Error::DomainViolation(format!("power base {} <= 0", base.value().re)));
                }
                Ok(first * base.powf(&c(-(s - r) / (s + r)))?)
            }
            DeltaCase::DeltaNeg => {
                let m = self.root;
                let z = w + h2.scale_by(&Complex64::new(0.0, m));
                let v = z.value();
                if v.norm() < 1e-300 || (v.im == 0.0 && v.re < 0.0) {
                    return Err(Error::DomainViolation(format!("argument branch cut at {v}")));
                }
                // ρ² e^{−2cθ} = exp(2 Re ln z − 2c Im ln z)
                let ln = z.ln()?;
                let re = ln.map(|u| Complex64::new(u.re, 0.0));
                let im = ln.map(|u| Complex64::new(u.im, 0.0));
                (re.scale(2, 1) - im.scale_by(&c(2.0 * s / m))).exp()
            }
        }
    }

    pub fn eval(&self, h: &[f64; 4]) -> Result<f64> {
        let j = |v: f64| Jet::constant(Complex64::new(v, 0.0), 0);
        Ok(self.eval_jet(&j(h[0]), &j(h[2]))?.value().re)
    }

    /// `ρ² e^{−2cθ}` with a given continuation of the argument.
    pub fn continued(&self, h: &[f64; 4], theta: f64) -> f64 {
        let w = 2.0 * h[0] + self.s * h[2];
        let v = self.root * h[2];
        (w * w + v * v) * (-2.0 * self.s / self.root * theta).exp()
    }

    /// `θ = arg(2h0 + s h2 + i m h2)` for the `L` case.
    pub fn angle(&self, h: &[f64; 4]) -> Option<f64> {
        (self.case == DeltaCase::DeltaNeg).then(|| (self.root * h[2]).atan2(2.0 * h[0] + self.s * h[2]))
    }
}

/// `J`, `K` or `L` at a state.
pub fn invariant_jkl(h: &[f64; 4], chi: f64, kappa: f64, case: DeltaCase) -> Result<f64> {
    SolvInvariant::new(chi, kappa, case)?.eval(h)
}

/// The conserved quantity attached to a canonical structure, if any.
#[derive(Clone, Debug, PartialEq)]
pub enum ChainInvariant {
    Casimir(StructureConstants<f64>),
    Solv(SolvInvariant),
}

impl ChainInvariant {
    pub fn for_structure<S: Scalar>(sc: &StructureConstants<S>, tol: f64) -> Result<Option<Self>> {
        if sc.is_unimodular(tol) {
            if sc.c10_1.is_zero_within(tol) && sc.c20_2.is_zero_within(tol) {
                return Ok(Some(ChainInvariant::Casimir(sc.to_f64())));
            }
            return Ok(None);
        }
        if check_solv_plus(sc).is_err() {
            return Ok(None);
        }
        let inv = chi_kappa(&sc.to_f64())?;
        let case = delta_case(&solv_delta(sc), tol);
        Ok(Some(ChainInvariant::Solv(SolvInvariant::new(inv.chi, inv.kappa, case)?)))
    }

    pub fn kind(&self) -> InvariantKind {
        match self {
            ChainInvariant::Casimir(_) => InvariantKind::I,
            ChainInvariant::Solv(s) => s.kind(),
        }
    }

    pub fn eval(&self, h: &[f64; 4]) -> Result<f64> {
        match self {
            ChainInvariant::Casimir(sc) => Ok(casimir_of(sc, h)),
            ChainInvariant::Solv(s) => s.eval(h),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainSample {
    pub t: f64,
    pub state: ChainState<f64>,
    pub hamiltonian: f64,
    pub invariant: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftReport {
    pub steps: usize,
    pub max_delta_h: f64,
    pub max_delta_hinf: f64,
    pub invariant: Option<InvariantKind>,
    pub max_delta_invariant: Option<f64>,
    /// Times the `L` argument crossed the principal branch cut.
    pub branch_crossings: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainTrajectory {
    pub samples: Vec<ChainSample>,
    pub drift: DriftReport,
}

fn rk4_step(sc: &StructureConstants<f64>, chart: Option<&Frame>, y: &[f64; 7], dt: f64) -> Result<[f64; 7]> {
    let f = |y: &[f64; 7]| -> Result<[f64; 7]> {
        let h = [y[0], y[1], y[2], y[3]];
        let dh = chain_rhs(sc, &h);
        let mut out = [dh[0], dh[1], dh[2], dh[3], 0.0, 0.0, 0.0];
        if let Some(chart) = chart {
            let v = base_velocity(chart, &hamiltonian_gradient(sc, &h), &[y[4], y[5], y[6]])?;
            out[4..].copy_from_slice(&v);
        }
        Ok(out)
    };
    let add = |a: &[f64; 7], b: &[f64; 7], s: f64| -> [f64; 7] { std::array::from_fn(|i| a[i] + s * b[i]) };
    let k1 = f(y)?;
    let k2 = f(&add(y, &k1, dt / 2.0))?;
    let k3 = f(&add(y, &k2, dt / 2.0))?;
    let k4 = f(&add(y, &k3, dt))?;
    Ok(std::array::from_fn(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])))
}

/// Classical fourth-order Runge–Kutta over `[0, t_end]` with step `dt`
/// (the last step is shortened to land on `t_end`). The chart point moves
/// only when both `s0.base` and `chart` are given.
pub fn integrate_chain<S: Scalar>(
    sc: &StructureConstants<S>,
    s0: &ChainState<f64>,
    t_end: f64,
    dt: f64,
    chart: Option<&Frame>,
) -> Result<ChainTrajectory> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::StepRejected(format!("dt = {dt}")));
    }
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::StepRejected(format!("T = {t_end}")));
    }
    let invariant = ChainInvariant::for_structure(sc, 1e-12)?;
    let sc = sc.to_f64();
    let chart = chart.filter(|_| s0.base.is_some());
    let base = s0.base.unwrap_or([0.0; 3]);
    let mut y = [s0.h[0], s0.h[1], s0.h[2], s0.h[3], base[0], base[1], base[2]];
    let sample_with = |t: f64, y: &[f64; 7], inv: Option<&ChainInvariant>| -> Result<ChainSample> {
        let h = [y[0], y[1], y[2], y[3]];
        Ok(ChainSample {
            t,
            state: ChainState {
                h,
                base: s0.base.map(|_| [y[4], y[5], y[6]]),
            },
            hamiltonian: chain_hamiltonian(&sc, &h),
            invariant: inv.map(|inv| inv.eval(&h)).transpose()?,
        })
    };
    let sample = |t: f64, y: &[f64; 7]| sample_with(t, y, invariant.as_ref());
    let n = (t_end / dt).ceil() as usize;
    let first = sample(0.0, &y)?;
    let (h_start, hinf_start, inv_start) = (first.hamiltonian, y[3], first.invariant);
    let solv = match &invariant {
        Some(ChainInvariant::Solv(s)) if s.case == DeltaCase::DeltaNeg => Some(*s),
        _ => None,
    };
    // L is continued along the path: θ is unwrapped instead of jumping at the cut
    let mut theta = solv.and_then(|s| s.angle(&first.state.h));
    let mut samples = Vec::with_capacity(n + 1);
    samples.push(first);
    let mut drift = DriftReport {
        steps: n,
        max_delta_h: 0.0,
        max_delta_hinf: 0.0,
        invariant: invariant.as_ref().map(ChainInvariant::kind),
        max_delta_invariant: inv_start.map(|_| 0.0),
        branch_crossings: 0,
    };
    let mut t = 0.0;
    for step in 1..=n {
        let h_step = if step == n { t_end - t } else { dt };
        y = rk4_step(&sc, chart, &y, h_step)?;
        t = if step == n { t_end } else { step as f64 * dt };
        let mut s = match (solv, theta) {
            (Some(inv), Some(prev)) => {
                let h = [y[0], y[1], y[2], y[3]];
                let principal = inv.angle(&h).unwrap_or(prev);
                let d = (principal - prev + PI).rem_euclid(2.0 * PI) - PI;
                let now = prev + d;
                if (principal - (prev + PI).rem_euclid(2.0 * PI) + PI).abs() > PI {
                    drift.branch_crossings += 1;
                }
                theta = Some(now);
                let mut s = sample_with(t, &y, None)?;
                s.invariant = Some(inv.continued(&h, now));
                s
            }
            _ => sample(t, &y)?,
        };
        s.t = t;
        drift.max_delta_h = drift.max_delta_h.max((s.hamiltonian - h_start).abs());
        drift.max_delta_hinf = drift.max_delta_hinf.max((y[3] - hinf_start).abs());
        if let (Some(v0), Some(v), Some(m)) = (inv_start, s.invariant, drift.max_delta_invariant.as_mut()) {
            *m = m.max((v - v0).abs());
        }
        samples.push(s);
    }
    Ok(ChainTrajectory { samples, drift })
}

/// Writes `t,h0,h1,h2,hinf,H,invariant` rows.
pub fn write_csv<W: Write>(traj: &ChainTrajectory, mut out: W) -> std::io::Result<()> {
    writeln!(out, "t,h0,h1,h2,hinf,H,invariant")?;
    for s in &traj.samples {
        let [h0, h1, h2, hi] = s.state.h;
        let inv = s.invariant.map(|v| v.to_string()).unwrap_or_default();
        writeln!(out, "{},{h0},{h1},{h2},{hi},{},{inv}", s.t, s.hamiltonian)?;
    }
    Ok(())
}

/// `h0` on `{H = 0, h_inf = 1}` as a function of `(h1, h2)`.
pub fn light_like_h0<S: Scalar, R: Ring<Scalar = S>>(sc: &StructureConstants<S>, h1: &R, h2: &R) -> R {
    let rest = h1.square()
        + h2.square()
        + h1.scale_by(&(sc.c12_1.clone() * S::from_ratio(2, 1)))
        + h2.scale_by(&(sc.c12_2.clone() * S::from_ratio(2, 1)))
        + h1.constant_like(g_inf_inf(sc));
    -rest.scale(1, 3)
}

/// Gradient in `(h1, h2)` at `(1, 1)` of the restricted Casimir, by
/// differentiating jets of the restriction.
pub fn restricted_casimir_gradient<S: Scalar>(chi: &S, kappa: &S) -> Result<[S; 2]> {
    let sc = StructureConstants::unimodular(chi.clone(), kappa.clone());
    let h1 = Jet::variable(0, S::one(), 1);
    let h2 = Jet::variable(1, S::one(), 1);
    let h0 = light_like_h0(&sc, &h1, &h2);
    let one = Jet::constant(S::one(), 1);
    let i = casimir_i(&[h0, h1, h2, one], chi, kappa);
    Ok([i.partial_at_base([1, 0, 0]), i.partial_at_base([0, 1, 0])])
}

/// Gradient in `(h1, h2)` at `(1, 1)` of `J`, `K` or `L` restricted to the
/// light-like chains with `h_inf = 1`.
pub fn restricted_solv_gradient(chi: f64, kappa: f64) -> Result<[f64; 2]> {
    let case = delta_case(&(-kappa - 7.0 * chi), 1e-12);
    let inv = SolvInvariant::new(chi, kappa, case)?;
    let sc = StructureConstants::solv_plus(Complex64::new(inv.s, 0.0), Complex64::new(2.0 * chi, 0.0));
    let one = Complex64::new(1.0, 0.0);
    let h1 = Jet::variable(0, one, 1);
    let h2 = Jet::variable(1, one, 1);
    let h0 = light_like_h0(&sc, &h1, &h2);
    let v = inv.eval_jet(&h0, &h2)?;
    Ok([v.partial_at_base([1, 0, 0]).re, v.partial_at_base([0, 1, 0]).re])
}

/// Direction field of the chain foliation at `(h1, h2) = (1, 1)`.
pub fn foliation_gradient(chi: f64, kappa: f64, family: Family) -> Result<[f64; 2]> {
    match family {
        Family::Unimodular => Ok([8.0 / 9.0 - 2.0 * (chi - kappa / 2.0), 8.0 / 9.0 + 2.0 * (chi + kappa / 2.0)]),
        Family::SolvPlus => restricted_solv_gradient(chi, kappa),
        Family::SolvMinus => Err(Error::NotSolvPlus("solv- gradients are taken after swapping orientation".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConformalClass {
    ConformallyFlat,
    Rigid { chi: f64, kappa: f64 },
}

/// Flat structures share the conformal algebra su(2,1); otherwise the
/// conformal class is fixed by `(χ, κ)`.
pub fn conformal_class_decision<S: Scalar>(sc: &StructureConstants<S>, tol: f64) -> Result<ConformalClass> {
    let (alpha, _) = alpha_beta_left_invariant(sc);
    if alpha.is_zero_within(tol) {
        return Ok(ConformalClass::ConformallyFlat);
    }
    let inv = chi_kappa(&sc.to_f64())?;
    Ok(ConformalClass::Rigid {
        chi: inv.chi,
        kappa: inv.kappa,
    })
}
