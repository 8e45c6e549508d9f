//! Command-line front end: argument parsing, report assembly and the
//! `verify-all` driver.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Number, Value};

use crate::chains::{
    chain_hamiltonian, conformal_class_decision, integrate_chain, light_like_h0,
    quadratic_bracket_coefficients, write_csv, ChainInvariant, ChainState, ConformalClass,
};
use crate::error::{Error, Result};
use crate::expr::random_polynomial;
use crate::fefferman::{
    alpha_beta_closed_form, alpha_beta_from_weyl, curvature, sigma_trace, weyl_pattern_defects,
};
use crate::flatness::{alpha_from_invariants, check_flattening, flatness_verdict};
use crate::frame::{chi2_kappa_of, jacobi_residuals, Frame, FrameCalculus, LeftInvariant, ModelKind, FRAME_ORDER};
use crate::heisenberg;
use crate::rescaling::alpha_beta_scaling_residuals;
use crate::scalar::{parse_rational, rational_sqrt, Rational, Ring, Scalar};
use crate::structure::{
    chi2_kappa, classify as classify_kind, normalized_position, parse_spec, sample_canonical,
    validate_canonical, Family, StructureConstants,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Rational,
    Float,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Rational => "rational",
            Backend::Float => "float",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Options {
    pub backend: Backend,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            backend: Backend::Rational,
            tolerance: 1e-9,
            seed: 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "contact-conformal", version, about = "Conformal invariants of 3D contact sub-Riemannian structures")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "rational", global = true)]
    pub backend: Backend,
    /// Zero tolerance for the float backend.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tolerance: f64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
    #[arg(long, default_value_t = 1, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lie algebra type, invariants and conformal class of a structure.
    Classify(StructureArg),
    /// Fefferman curvature and the identities it satisfies.
    Curvature(CurvatureArgs),
    /// Flatness verdict and flattening rescaling.
    Flatness(StructureArg),
    /// Integrates a chain and reports drift of the conserved quantities.
    Chains(ChainArgs),
    /// Conformal algebra of the Heisenberg group.
    Heisenberg {
        #[command(subcommand)]
        action: HeisenbergAction,
    },
    /// Runs every identity suite on seeded random and fixed structures.
    VerifyAll(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct StructureArg {
    /// Structure spec file (`key = value` lines), `-` for stdin.
    #[arg(long)]
    pub structure: PathBuf,
}

#[derive(Debug, Args)]
pub struct CurvatureArgs {
    #[arg(long, required_unless_present = "model", conflicts_with = "model")]
    pub structure: Option<PathBuf>,
    /// One of the explicit unimodular models.
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Evaluation point `x,y,z` for `--model`.
    #[arg(long, default_value = "0,0,0")]
    pub point: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    I,
    Ii,
    Iii,
}

impl Model {
    pub fn kind(self) -> ModelKind {
        match self {
            Model::I => ModelKind::UnimodularI,
            Model::Ii => ModelKind::UnimodularII,
            Model::Iii => ModelKind::UnimodularIII,
        }
    }
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    #[arg(long)]
    pub structure: PathBuf,
    /// Initial `h0,h1,h2,hinf`; defaults to the light-like start over `(1, 1)`.
    #[arg(long, allow_hyphen_values = true)]
    pub state: Option<String>,
    #[arg(long = "T", default_value_t = 10.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// CSV output for the sampled trajectory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Keep every n-th step in the CSV.
    #[arg(long, default_value_t = 1)]
    pub every: usize,
    /// Allowed drift of the Hamiltonian.
    #[arg(long, default_value_t = 1e-6)]
    pub drift_tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum HeisenbergAction {
    /// Full certificate for the eight-dimensional conformal algebra.
    Verify {
        /// Weighted degree of the brute-force ansatz.
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Number of random canonical structures.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Extra structure files checked alongside the fixtures.
    #[arg(long)]
    pub structure: Vec<PathBuf>,
}

/// 17 significant digits; non-finite values become strings.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    let s = format!("{x:.16e}");
    Value::Number(s.parse::<Number>().expect("formatted float is valid JSON"))
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn scalar<S: Scalar>(s: &S) -> Value {
    if S::EXACT {
        if let Some(r) = s.to_rational() {
            return rational(&r);
        }
    }
    let c = s.to_complex();
    if c.im == 0.0 {
        num(c.re)
    } else {
        json!([num(c.re), num(c.im)])
    }
}

/// Rewrites every float in `v` with [`num`].
pub fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap_or(f64::NAN)),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: Value,
    pub tolerance: Value,
    pub pass: bool,
}

impl Check {
    pub fn flag(name: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            residual: Value::Bool(pass),
            tolerance: Value::Null,
            pass,
        }
    }

    /// `residual = 0`, exactly under rationals and within `tol` otherwise.
    pub fn zero<S: Scalar>(name: impl Into<String>, residual: &S, tol: f64) -> Self {
        Check {
            name: name.into(),
            residual: scalar(residual),
            tolerance: if S::EXACT { rational(&Rational::from_integer(0.into())) } else { num(tol) },
            pass: residual.is_zero_within(tol),
        }
    }

    pub fn bound(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            residual: num(residual),
            tolerance: num(tol),
            pass: residual.abs() <= tol,
        }
    }

    pub fn failed(name: impl Into<String>, err: &Error) -> Self {
        Check {
            name: name.into(),
            residual: Value::String(err.to_string()),
            tolerance: Value::Null,
            pass: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub backend: Backend,
    pub input: Value,
    pub output: Value,
    pub checks: Vec<Check>,
    pub ok: bool,
}

impl Report {
    pub fn new(command: &str, opts: &Options, input: Value, output: Value, checks: Vec<Check>) -> Self {
        let ok = checks.iter().all(|c| c.pass);
        Report {
            command: command.to_string(),
            backend: opts.backend,
            input,
            output,
            checks,
            ok,
        }
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn exit_code(&self) -> i32 {
        if self.ok {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let v = normalize(serde_json::to_value(self).expect("report serializes"));
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }
}

fn constants_json<S: Scalar>(sc: &StructureConstants<S>) -> Value {
    let mut m = Map::new();
    for (k, v) in crate::structure::CONSTANT_NAMES.iter().zip(sc.to_array()) {
        m.insert(k.to_string(), scalar(&v));
    }
    Value::Object(m)
}

pub fn read_structure(path: &PathBuf) -> Result<StructureConstants<Rational>> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(path)
    }
    .map_err(|e| Error::Parse {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_spec(&text)
}

/// Classification report for `sc`.
pub fn classify(sc: &StructureConstants<Rational>, opts: &Options) -> Report {
    let (output, checks) = match opts.backend {
        Backend::Rational => match classify_with(sc, opts.tolerance) {
            Err(Error::Inexact(_)) => classify_with(&sc.to_f64(), opts.tolerance),
            r => r,
        },
        Backend::Float => classify_with(&sc.to_f64(), opts.tolerance),
    }
    .unwrap_or_else(|e| (Value::Null, vec![Check::failed("classify", &e)]));
    Report::new("classify", opts, json!({ "structure": constants_json(sc) }), output, checks)
}

/// `χ` exactly when `χ²` is a perfect square, as a float otherwise.
fn chi_value<S: Scalar>(chi2: &S) -> Value {
    if S::EXACT {
        if let Some(r) = chi2.to_rational().as_ref().and_then(rational_sqrt) {
            return rational(&r);
        }
    }
    num(chi2.real().max(0.0).sqrt())
}

pub fn classify_with<S: Scalar>(sc: &StructureConstants<S>, tol: f64) -> Result<(Value, Vec<Check>)> {
    let mut checks = compatibility_checks(sc, tol);
    let (chi2, kappa) = chi2_kappa(sc);
    let chi = chi2.real().max(0.0).sqrt();
    let kind = classify_kind(sc, tol)?;
    let canonical = validate_canonical(sc, tol);
    let cb = curvature(&LeftInvariant::new(sc.clone()))?;
    let scale = 1.0 + chi2.magnitude() + kappa.magnitude().powi(2);
    let weyl_flat = cb.weyl.0.iter().all(|w| w.is_zero_within(tol * scale));
    let (alpha, beta) = alpha_beta_from_weyl(&cb.weyl);
    let class = conformal_class_decision(sc, tol)?;
    let class_flat = class == ConformalClass::ConformallyFlat;
    if canonical.canonical {
        checks.push(Check::flag("class_decision_matches_weyl", weyl_flat == class_flat));
    }
    let class_json = match &class {
        ConformalClass::ConformallyFlat => json!("conformally_flat"),
        ConformalClass::Rigid { chi, kappa } => json!({ "rigid": [num(*chi), num(*kappa)] }),
    };
    let output = json!({
        "kind": kind.name(),
        "chi2": scalar(&chi2),
        "chi": chi_value(&chi2),
        "kappa": scalar(&kappa),
        "normalized_position": normalized_position(chi, kappa.real()).map(|(a, b)| json!([num(a), num(b)])),
        "canonical": canonical,
        "flat": weyl_flat,
        "alpha": scalar(&alpha),
        "beta": scalar(&beta),
        "conf_algebra": if weyl_flat { json!("su(2,1)") } else { Value::Null },
        "conformal_class": class_json,
    });
    Ok((output, checks))
}

fn compatibility_checks<S: Scalar>(sc: &StructureConstants<S>, tol: f64) -> Vec<Check> {
    let names = ["contact_trace", "jacobi_f1", "jacobi_f2"];
    sc.compatibility_residuals()
        .iter()
        .zip(names)
        .map(|(r, n)| Check::zero(format!("compatibility.{n}"), r, tol))
        .collect()
}

/// Curvature report of a left-invariant structure.
pub fn curvature_report(sc: &StructureConstants<Rational>, opts: &Options) -> Report {
    let res = match opts.backend {
        Backend::Rational => curvature_left_invariant(sc, opts.tolerance),
        Backend::Float => curvature_left_invariant(&sc.to_f64(), opts.tolerance),
    };
    let (output, checks) = res.unwrap_or_else(|e| (Value::Null, vec![Check::failed("curvature", &e)]));
    Report::new("curvature", opts, json!({ "structure": constants_json(sc) }), output, checks)
}

pub fn curvature_left_invariant<S: Scalar>(sc: &StructureConstants<S>, tol: f64) -> Result<(Value, Vec<Check>)> {
    let li = LeftInvariant::new(sc.clone());
    let (mut output, mut checks) = curvature_identities(&li, tol)?;
    let cb = curvature(&li)?;
    let (chi2, _) = chi2_kappa(sc);
    let n = cb.norm_squared(&cb.nabla_inf_riemann());
    let recovered = n.clone() * S::from_ratio(9, 16);
    checks.push(Check::zero("chi2_recovery", &(recovered.clone() - chi2), tol.max(1e-8)));
    if let Some(closed) = alpha_from_invariants(sc, tol)? {
        let (a, _) = alpha_beta_from_weyl(&cb.weyl);
        checks.push(Check::zero("alpha_family_formula", &(a - closed.clone()), tol));
        output["alpha_family_formula"] = scalar(&closed);
    }
    output["nabla_inf_riemann_norm2"] = scalar(&n);
    output["chi2_recovered"] = scalar(&recovered);
    Ok((output, checks))
}

/// Identities that hold for any contact frame at a point: the scalar
/// curvature, the σ-trace, the Weyl pattern and the closed forms.
pub fn curvature_identities<C: FrameCalculus>(calc: &C, tol: f64) -> Result<(Value, Vec<Check>)> {
    let cb = curvature(calc)?;
    let (chi2, kappa) = chi2_kappa_of(calc)?;
    let (f, trace) = sigma_trace(calc)?;
    let (wa, wb) = alpha_beta_from_weyl(&cb.weyl);
    let (ca, cbeta) = alpha_beta_closed_form(calc)?;
    let v = |r: &C::R| r.value();
    let scale = 1.0 + v(&kappa).magnitude() + v(&chi2).magnitude();
    let t = tol * scale;
    let mut checks = vec![
        Check::zero("scalar_curvature", &(v(&cb.scalar) - v(&kappa.scale(3, 2))), t),
        Check::zero("sigma_trace", &(v(&trace) - v(&kappa.scale(1, 4))), t),
        Check::zero("alpha_closed_form", &(v(&wa) - v(&ca)), t),
        Check::zero("beta_closed_form", &(v(&wb) - v(&cbeta)), t),
    ];
    let worst = |xs: &[C::R]| {
        xs.iter()
            .map(v)
            .max_by(|a, b| a.magnitude().total_cmp(&b.magnitude()))
            .unwrap_or_else(|| v(&kappa).zero_like())
    };
    checks.push(Check::zero("weyl_pattern", &worst(&weyl_pattern_defects(&cb.weyl, &wa, &wb).0), t));
    checks.push(Check::zero("weyl_traceless", &worst(&cb.weyl_traces()), t));
    checks.push(Check::zero("riemann_symmetries", &worst(&cb.riemann_symmetry_defects()), t));
    let output = json!({
        "chi2": scalar(&v(&chi2)),
        "kappa": scalar(&v(&kappa)),
        "scalar_curvature": scalar(&v(&cb.scalar)),
        "sigma_f": scalar(&v(&f)),
        "sigma_trace": scalar(&v(&trace)),
        "alpha": scalar(&v(&wa)),
        "beta": scalar(&v(&wb)),
        "alpha_closed_form": scalar(&v(&ca)),
        "beta_closed_form": scalar(&v(&cbeta)),
        "metric_signature": cb.metric.signature(),
    });
    Ok((output, checks))
}

fn parse_triple(text: &str) -> Result<[Rational; 3]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse {
            line: 0,
            message: format!("expected `x,y,z`, got `{text}`"),
        });
    }
    let mut out: [Rational; 3] = Default::default();
    for (o, p) in out.iter_mut().zip(parts) {
        *o = parse_rational(p).map_err(|message| Error::Parse { line: 0, message })?;
    }
    Ok(out)
}

/// Curvature of an explicit model at a point. The rational backend is
/// exact only where the model's transcendental coefficients are.
pub fn curvature_model(model: Model, point: &[Rational; 3], opts: &Options) -> Report {
    let frame = Frame::model(model.kind());
    let res = match opts.backend {
        Backend::Rational => frame
            .at(point, FRAME_ORDER, opts.tolerance)
            .and_then(|jf| curvature_identities(&jf, opts.tolerance)),
        Backend::Float => {
            let p = point.clone().map(|r| Complex64::new(crate::scalar::rational_to_f64(&r), 0.0));
            frame.at(&p, FRAME_ORDER, opts.tolerance).and_then(|jf| curvature_identities(&jf, opts.tolerance))
        }
    };
    let (output, checks) = res.unwrap_or_else(|e| (Value::Null, vec![Check::failed("curvature", &e)]));
    let input = json!({ "model": format!("{model:?}").to_lowercase(), "point": point.iter().map(rational).collect::<Vec<_>>() });
    Report::new("curvature", opts, input, output, checks)
}

/// Chart points inside every flattening's domain.
pub const FLATNESS_POINTS: [[f64; 3]; 10] = [
    [0.0, 0.0, 0.0],
    [0.3, -0.2, 0.7],
    [-0.5, 0.4, 0.6],
    [0.1, 0.1, 0.1],
    [1.0, -0.5, -0.3],
    [-1.2, 0.8, 0.2],
    [0.7, 0.3, -0.6],
    [2.0, -1.0, 0.4],
    [-0.4, -0.7, -0.1],
    [0.25, 0.5, 0.35],
];

pub fn flatness_report(sc: &StructureConstants<Rational>, opts: &Options) -> Report {
    let res = match opts.backend {
        Backend::Rational => flatness_with(sc, opts.tolerance),
        Backend::Float => flatness_with(&sc.to_f64(), opts.tolerance),
    };
    let (output, checks) = res.unwrap_or_else(|e| (Value::Null, vec![Check::failed("flatness", &e)]));
    Report::new("flatness", opts, json!({ "structure": constants_json(sc) }), output, checks)
}

pub fn flatness_with<S: Scalar>(sc: &StructureConstants<S>, tol: f64) -> Result<(Value, Vec<Check>)> {
    let v = flatness_verdict(sc, tol)?;
    let mut checks = compatibility_checks(sc, tol);
    if let Some(closed) = &v.alpha_closed_form {
        checks.push(Check::zero("alpha_family_formula", &(v.alpha.clone() - closed.clone()), tol));
    }
    let mut flattening = Value::Null;
    if let Some(fl) = &v.flattening {
        let c = check_flattening(fl, &FLATNESS_POINTS)?;
        let ftol = tol.max(1e-8);
        checks.push(Check::bound("flattened_chi2", c.max_chi2, ftol));
        checks.push(Check::bound("flattened_kappa", c.max_kappa, ftol));
        flattening = json!({
            "phi": fl.phi.to_string(),
            "chart": fl.chart.to_string(),
            "max_chi2": num(c.max_chi2),
            "max_kappa": num(c.max_kappa),
            "points": c.points,
        });
    }
    let output = json!({
        "fefferman_flat": v.fefferman_flat,
        "family": v.family.name(),
        "alpha": scalar(&v.alpha),
        "beta": scalar(&v.beta),
        "alpha_family_formula": v.alpha_closed_form.as_ref().map(scalar),
        "flattening": flattening,
    });
    Ok((output, checks))
}

fn parse_state(text: &str) -> Result<[f64; 4]> {
    let vals: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse {
            line: 0,
            message: format!("state `{text}`: {e}"),
        })?;
    <[f64; 4]>::try_from(vals).map_err(|_| Error::Parse {
        line: 0,
        message: format!("state needs four values, got `{text}`"),
    })
}

/// Light-like start over `(h1, h2)` with `h_inf = 1`.
pub fn light_like_start(sc: &StructureConstants<f64>, h1: f64, h2: f64) -> [f64; 4] {
    [light_like_h0(sc, &h1, &h2), h1, h2, 1.0]
}

pub struct ChainRun {
    pub report: Report,
    pub trajectory: Option<crate::chains::ChainTrajectory>,
}

pub fn chains_report(sc: &StructureConstants<Rational>, state: [f64; 4], t_end: f64, dt: f64, drift_tol: f64, opts: &Options) -> ChainRun {
    let input = json!({
        "structure": constants_json(sc),
        "state": state.map(num),
        "T": num(t_end),
        "dt": num(dt),
    });
    let h_start = chain_hamiltonian(&sc.to_f64(), &state);
    match integrate_chain(sc, &ChainState::new(state), t_end, dt, None) {
        Ok(traj) => {
            let d = &traj.drift;
            let mut checks = vec![
                Check::bound("delta_hinf", d.max_delta_hinf, 0.0),
                Check::bound("delta_hamiltonian", d.max_delta_h, drift_tol),
            ];
            if let Some(di) = d.max_delta_invariant {
                checks.push(Check::bound("delta_invariant", di, drift_tol.max(1e-6)));
            }
            let last = traj.samples.last().map(|s| s.state.h.map(num));
            let output = json!({
                "initial_hamiltonian": num(h_start),
                "final_state": last,
                "drift": serde_json::to_value(d).expect("drift serializes"),
            });
            ChainRun {
                report: Report::new("chains", opts, input, output, checks),
                trajectory: Some(traj),
            }
        }
        Err(e) => ChainRun {
            report: Report::new("chains", opts, input, Value::Null, vec![Check::failed("integrate", &e)]),
            trajectory: None,
        },
    }
}

pub fn heisenberg_report(degree: u32, opts: &Options) -> Report {
    let input = json!({ "degree": degree });
    match heisenberg::verify(degree) {
        Ok(c) => {
            let checks = vec![
                Check::flag("dimension_8", c.dimension == 8),
                Check::flag("generators_conformal", c.generators_conformal),
                Check::flag("isometry_kernel_4", c.isometry_kernel_dimension == 4),
                Check::flag("transported_table_matches", c.table_match),
                Check::flag("tanaka_jacobi", c.tanaka_jacobi),
                Check::flag("tanaka_graded", c.tanaka_graded),
                Check::flag("su21_table", c.su21_table_match),
                Check::flag("su21_traceless", c.su21_traceless),
                Check::flag("su21_signature", matches!(c.su21_signature, Some((2, 1)) | Some((1, 2)))),
                Check::flag("oracle_dimension_8", c.oracle_dimension == 8),
                Check::flag("oracle_span", c.oracle_span_match),
            ];
            let output = serde_json::to_value(&c).expect("certificate serializes");
            Report::new("heisenberg verify", opts, input, output, checks)
        }
        Err(e) => Report::new("heisenberg verify", opts, input, Value::Null, vec![Check::failed("heisenberg", &e)]),
    }
}

/// One input of `verify-all`.
#[derive(Clone, Debug, PartialEq)]
pub enum Fixture {
    Structure { label: String, sc: StructureConstants<Rational> },
    Model { model: Model, point: [Rational; 3] },
    Heisenberg,
}

fn fixed_fixtures() -> Vec<Fixture> {
    let s = |label: &str, a: [i64; 6]| Fixture::Structure {
        label: label.to_string(),
        sc: StructureConstants::from_ints(a),
    };
    let mut out = vec![
        s("heisenberg", [0; 6]),
        s("unimodular_chi1_kappa0", [0, 0, 0, 1, 1, 0]),
        s("unimodular_chi2_kappa1", [0, 0, 0, 3, 1, 0]),
        s("unimodular_chi1_kappa_minus2", [0, 0, 0, -1, 3, 0]),
        s("solv_plus_1_1", [0, 1, 0, 1, 0, 0]),
        s("solv_plus_flat_3_2", [0, 3, 0, 2, 0, 0]),
        s("solv_minus_1_1", [1, 0, 0, 0, 1, 0]),
    ];
    let pts = [["0", "0", "0"], ["1/2", "0", "0"], ["-3", "0", "0"]];
    for model in [Model::I, Model::Ii, Model::Iii] {
        for p in pts {
            out.push(Fixture::Model {
                model,
                point: p.map(|t| parse_rational(t).expect("fixture point")),
            });
        }
    }
    out.push(Fixture::Heisenberg);
    out
}

/// Fixtures, then `count` random canonical structures cycling through the
/// three families, then any extra structures.
pub fn verify_inputs(seed: u64, count: usize, extra: Vec<(String, StructureConstants<Rational>)>) -> Vec<Fixture> {
    let families = [Family::Unimodular, Family::SolvPlus, Family::SolvMinus];
    let mut out = fixed_fixtures();
    for i in 0..count {
        let mut rng = StdRng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64));
        let fam = families[i % 3];
        out.push(Fixture::Structure {
            label: format!("random_{i}_{fam:?}").to_lowercase(),
            sc: sample_canonical(&mut rng, fam),
        });
    }
    out.extend(extra.into_iter().map(|(label, sc)| Fixture::Structure { label, sc }));
    out
}

fn prefixed(prefix: &str, checks: Vec<Check>) -> Vec<Check> {
    checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("{prefix}.{}", c.name);
            c
        })
        .collect()
}

fn or_failed(name: &str, r: Result<(Value, Vec<Check>)>) -> Vec<Check> {
    match r {
        Ok((_, c)) => prefixed(name, c),
        Err(e) => vec![Check::failed(name, &e)],
    }
}

fn without_compatibility(checks: Vec<Check>) -> Vec<Check> {
    checks.into_iter().filter(|c| !c.name.contains(".compatibility.")).collect()
}

/// Every structure-level suite on one input.
pub fn structure_suite(sc: &StructureConstants<Rational>, opts: &Options, seed: u64) -> Vec<Check> {
    let tol = opts.tolerance;
    let mut checks = compatibility_checks(sc, 0.0);
    if !checks.iter().all(|c| c.pass) {
        return checks;
    }
    checks.extend(without_compatibility(or_failed("classify", classify_with(sc, 0.0))));
    checks.extend(or_failed("curvature", curvature_left_invariant(sc, 0.0)));
    checks.extend(or_failed("curvature_float", curvature_left_invariant(&sc.to_f64(), tol)));
    checks.extend(without_compatibility(or_failed("flatness", flatness_with(sc, 0.0))));
    let li = LeftInvariant::new(sc.to_f64());
    match jacobi_residuals(&li) {
        Ok(j) => checks.extend(j.iter().enumerate().map(|(i, r)| Check::zero(format!("frame_jacobi_{i}"), r, tol))),
        Err(e) => checks.push(Check::failed("frame_jacobi", &e)),
    }
    // constant rescaling: α and β scale by e^{-4φ}
    match alpha_beta_scaling_residuals(&li, &0.37) {
        Ok(r) => {
            checks.push(Check::bound("constant_rescaling_alpha", r.alpha.max(r.weyl_alpha), 1e-10));
            checks.push(Check::bound("constant_rescaling_beta", r.beta.max(r.weyl_beta), 1e-10));
        }
        Err(e) => checks.push(Check::failed("constant_rescaling", &e)),
    }
    if sc.c12_1 == Rational::from_integer(0.into()) && sc.c20_1 == Rational::from_integer(0.into()) && sc.c12_2 != Rational::from_integer(0.into()) {
        checks.extend(solv_plus_chart_checks(sc, seed));
    }
    checks.extend(chain_checks(sc));
    checks
}

/// Non-constant rescalings on the coordinate model of a solv+ structure.
fn solv_plus_chart_checks(sc: &StructureConstants<Rational>, seed: u64) -> Vec<Check> {
    let frame = Frame::solv_plus(
        crate::expr::Expr::rational(sc.c12_2.clone()),
        crate::expr::Expr::rational(sc.c10_2.clone()),
    );
    let mut rng = StdRng::seed_from_u64(seed);
    let phi = random_polynomial(&mut rng, 3);
    let mut out = Vec::new();
    for (i, p) in [[0.1, -0.2, 0.3], [0.4, 0.2, -0.1]].iter().enumerate() {
        let r = frame.at(p, 6, 1e-9).and_then(|jf| {
            let ph = phi.jet(p, 6)?;
            alpha_beta_scaling_residuals(&jf, &ph)
        });
        match r {
            Ok(r) => {
                let a = r.alpha.max(r.weyl_alpha).max(r.beta).max(r.weyl_beta);
                out.push(Check::bound(format!("rescaling_covariance_{i}"), a, 1e-8));
            }
            Err(e) => out.push(Check::failed(format!("rescaling_covariance_{i}"), &e)),
        }
    }
    out
}

fn chain_checks(sc: &StructureConstants<Rational>) -> Vec<Check> {
    let mut out = Vec::new();
    let scf = sc.to_f64();
    let is_uni = sc.is_unimodular(0.0);
    if is_uni {
        let zero = Rational::from_integer(0.into());
        let ok = (0..4).all(|k| quadratic_bracket_coefficients(sc, |h| casimir_gradient(sc, h), k).iter().all(|c| *c == zero));
        out.push(Check::flag("chains.casimir_commutes", ok));
    }
    let start = match suite_start(sc) {
        Ok(s) => s,
        Err(e) => {
            out.push(Check::failed("chains.start", &e));
            return out;
        }
    };
    let cmax = scf.to_array().iter().fold(1.0f64, |m, c| m.max(c.abs()));
    match integrate_chain(sc, &ChainState::new(start), 1.0, 1e-3 / cmax, None) {
        Ok(t) => {
            let size = t.samples.iter().map(|s| s.state.h.iter().map(|v| v * v).sum::<f64>()).fold(1.0, f64::max);
            out.push(Check::bound("chains.delta_hinf", t.drift.max_delta_hinf, 0.0));
            out.push(Check::bound("chains.relative_delta_hamiltonian", t.drift.max_delta_h / size, 1e-10));
            if let Some(d) = t.drift.max_delta_invariant {
                let scale = t.samples.iter().filter_map(|s| s.invariant).fold(1.0, |m: f64, v| m.max(v.abs()));
                out.push(Check::bound("chains.relative_delta_invariant", d / scale, 1e-8));
            }
        }
        Err(e) => out.push(Check::failed("chains.integrate", &e)),
    }
    out
}

/// A light-like start inside the domain of the structure's chain
/// invariant, with `h_inf = 1` when possible and `h_inf = -1` otherwise.
pub fn suite_start(sc: &StructureConstants<Rational>) -> Result<[f64; 4]> {
    let scf = sc.to_f64();
    let inv = ChainInvariant::for_structure(sc, 0.0)?;
    let candidates = [(1.0, 1.0), (0.0, 1.0), (1.0, -1.0), (0.0, -1.0), (0.0, -2.0), (0.0, 2.0), (0.0, -4.0), (0.0, 4.0), (0.0, -8.0), (0.0, 8.0)];
    let mut last = None;
    let signed = candidates.iter().map(|&c| (1.0, c)).chain(candidates.iter().map(|&c| (-1.0, c)));
    for (sign, (h1, h2)) in signed {
        let h = light_like_start(&scf, sign * h1, sign * h2).map(|v| sign * v);
        match inv.as_ref().map(|i| i.eval(&h)) {
            None | Some(Ok(_)) => return Ok(h),
            Some(Err(e)) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::DomainViolation("no admissible start".into())))
}

fn casimir_gradient(sc: &StructureConstants<Rational>, h: &[Rational; 4]) -> [Rational; 4] {
    let two = Rational::from_integer(2.into());
    let zero = Rational::from_integer(0.into());
    [
        h[0].clone() * two.clone(),
        -(h[1].clone() * sc.c20_1.clone() * two.clone()),
        h[2].clone() * sc.c10_2.clone() * two,
        zero,
    ]
}

fn fixture_checks(f: &Fixture, opts: &Options) -> (String, Value, Vec<Check>) {
    match f {
        Fixture::Structure { label, sc } => (label.clone(), constants_json(sc), structure_suite(sc, opts, opts.seed)),
        Fixture::Model { model, point } => {
            let label = format!("model_{model:?}").to_lowercase();
            let rational_ok = *model == Model::I;
            let mut checks = Vec::new();
            if rational_ok {
                let o = Options { backend: Backend::Rational, ..*opts };
                checks.extend(prefixed("rational", curvature_model(*model, point, &o).checks));
            }
            let o = Options { backend: Backend::Float, ..*opts };
            checks.extend(prefixed("float", curvature_model(*model, point, &o).checks));
            (label, json!(point.iter().map(rational).collect::<Vec<_>>()), checks)
        }
        Fixture::Heisenberg => ("heisenberg_algebra".into(), Value::Null, heisenberg_report(4, opts).checks),
    }
}

/// Runs all suites in parallel; results are merged by input index.
pub fn verify_all(count: usize, extra: Vec<(String, StructureConstants<Rational>)>, opts: &Options) -> Report {
    let inputs = verify_inputs(opts.seed, count, extra);
    let results: Vec<(String, Value, Vec<Check>)> = inputs.par_iter().map(|f| fixture_checks(f, opts)).collect();
    let mut checks = Vec::new();
    let mut entries = Vec::new();
    for (i, (label, input, cs)) in results.into_iter().enumerate() {
        let failed: Vec<String> = cs.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect();
        entries.push(json!({
            "index": i,
            "label": label,
            "input": input,
            "checks": cs.len(),
            "failed": failed,
            "pass": failed.is_empty(),
        }));
        checks.extend(prefixed(&format!("{i}:{label}"), cs));
    }
    let passed = entries.iter().filter(|e| e["pass"] == Value::Bool(true)).count();
    let output = json!({
        "inputs": entries.len(),
        "passed": passed,
        "total_checks": checks.len(),
        "results": entries,
    });
    let input = json!({ "seed": opts.seed, "count": count });
    Report::new("verify-all", opts, input, output, checks)
}

fn emit(report: &Report, json_out: &Option<PathBuf>) -> i32 {
    let text = report.to_json();
    match json_out {
        Some(p) => {
            if let Err(e) = fs::write(p, &text) {
                eprintln!("error: {}: {e}", p.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    for c in report.failures() {
        eprintln!("FAIL {} (residual {}, tolerance {})", c.name, c.residual, c.tolerance);
    }
    report.exit_code()
}

fn run(cli: Cli) -> Result<i32> {
    let opts = Options {
        backend: cli.backend,
        tolerance: cli.tolerance,
        seed: cli.seed,
    };
    let report = match &cli.command {
        Command::Classify(a) => classify(&read_structure(&a.structure)?, &opts),
        Command::Curvature(a) => match (&a.structure, a.model) {
            (Some(p), _) => curvature_report(&read_structure(p)?, &opts),
            (None, Some(m)) => curvature_model(m, &parse_triple(&a.point)?, &opts),
            (None, None) => unreachable!("clap requires one of --structure, --model"),
        },
        Command::Flatness(a) => flatness_report(&read_structure(&a.structure)?, &opts),
        Command::Chains(a) => {
            let sc = read_structure(&a.structure)?;
            let state = match &a.state {
                Some(s) => parse_state(s)?,
                None => light_like_start(&sc.to_f64(), 1.0, 1.0),
            };
            let run = chains_report(&sc, state, a.t_end, a.dt, a.drift_tol, &opts);
            if let (Some(path), Some(traj)) = (&a.out, &run.trajectory) {
                let every = a.every.max(1);
                let mut thinned = traj.clone();
                thinned.samples = traj
                    .samples
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| i % every == 0 || *i + 1 == traj.samples.len())
                    .map(|(_, s)| s.clone())
                    .collect();
                let file = fs::File::create(path).map_err(|e| Error::Parse {
                    line: 0,
                    message: format!("{}: {e}", path.display()),
                })?;
                write_csv(&thinned, std::io::BufWriter::new(file)).map_err(|e| Error::Parse {
                    line: 0,
                    message: format!("{}: {e}", path.display()),
                })?;
            }
            run.report
        }
        Command::Heisenberg {
            action: HeisenbergAction::Verify { degree },
        } => heisenberg_report(*degree, &opts),
        Command::VerifyAll(a) => {
            let mut extra = Vec::new();
            for p in &a.structure {
                extra.push((p.display().to_string(), read_structure(p)?));
            }
            verify_all(a.count, extra, &opts)
        }
    };
    Ok(emit(&report, &cli.json_out))
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn sc(a: [i64; 6]) -> StructureConstants<Rational> {
        StructureConstants::from_ints(a)
    }

    #[test]
    fn floats_have_17_digits() {
        assert_eq!(num(1.5).to_string(), "1.5000000000000000e+0");
        assert_eq!(num(-0.1).to_string(), "-1.0000000000000001e-1");
        assert_eq!(rational(&q(-7, 24)), json!("-7/24"));
    }

    #[test]
    fn classify_examples() {
        let o = Options::default();
        let h = classify(&sc([0; 6]), &o);
        assert!(h.ok);
        assert_eq!(h.output["kind"], "h3");
        assert_eq!(h.output["flat"], true);
        assert_eq!(h.output["conf_algebra"], "su(2,1)");
        let u = classify(&sc([0, 0, 0, 3, 1, 0]), &o);
        assert_eq!(u.output["flat"], false);
        assert_eq!(u.output["chi"], "2");
        assert_eq!(u.output["kappa"], "1");
        let r = &u.output["conformal_class"]["rigid"];
        assert_eq!((r[0].as_f64(), r[1].as_f64()), (Some(2.0), Some(1.0)));
        let s = classify(&sc([0, 3, 0, 2, 0, 0]), &o);
        assert_eq!(s.output["flat"], true);
        assert_eq!(s.output["conformal_class"], "conformally_flat");
    }

    #[test]
    fn chi_is_exact_under_rationals() {
        let r = classify(&sc([0, 1, 0, 2, 0, 0]), &Options::default());
        assert!(r.ok, "{:?}", r.failures());
        assert_eq!((&r.output["chi2"], &r.output["chi"]), (&json!("1"), &json!("1")));
        let f = classify(&sc([0, 1, 0, 2, 0, 0]), &Options { backend: Backend::Float, ..Options::default() });
        assert_eq!(f.output["chi"].as_f64(), Some(1.0));
    }

    #[test]
    fn byte_identical_reports() {
        let o = Options::default();
        let a = curvature_report(&sc([0, 1, 0, 1, 0, 0]), &o).to_json();
        let b = curvature_report(&sc([0, 1, 0, 1, 0, 0]), &o).to_json();
        assert_eq!(a, b);
        let f = Options { backend: Backend::Float, ..o };
        assert_eq!(flatness_report(&sc([0, 3, 0, 2, 0, 0]), &f).to_json(), flatness_report(&sc([0, 3, 0, 2, 0, 0]), &f).to_json());
    }

    #[test]
    fn corrupted_structure_fails() {
        let r = verify_all(0, vec![("bad".into(), sc([0, 0, 1, 0, 0, 0]))], &Options::default());
        assert!(!r.ok);
        assert!(r.failures().iter().any(|c| c.name.contains("compatibility")));
        assert_ne!(r.exit_code(), 0);
    }

    #[test]
    fn parses_arguments() {
        let cli = Cli::try_parse_from([
            "contact-conformal",
            "--backend",
            "float",
            "chains",
            "--structure",
            "u.spec",
            "--state",
            "-0.666666,1,1,1",
            "--T",
            "10",
            "--dt",
            "0.001",
        ])
        .unwrap();
        assert_eq!(cli.backend, Backend::Float);
        match cli.command {
            Command::Chains(a) => {
                assert_eq!(parse_state(a.state.as_deref().unwrap()).unwrap(), [-0.666666, 1.0, 1.0, 1.0]);
                assert_eq!(a.t_end, 10.0);
            }
            other => panic!("{other:?}"),
        }
        assert!(Cli::try_parse_from(["contact-conformal", "heisenberg", "verify"]).is_ok());
        assert!(Cli::try_parse_from(["contact-conformal", "verify-all", "--count", "0", "--seed", "3"]).is_ok());
    }
}
