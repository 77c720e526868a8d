//! Floating-point experiments on dense truncations: exponentiated
//! flows, unitarity-mod-HS curves, Mobius group defects,
//! monoassociativity, commutator-flow scaling, the diagonal semigroup
//! probe, and orbit coefficients.
//!
//! Reported quantities use windowed norms (edge rows are truncation
//! artifacts) and are recomputed on a doubling N schedule; a run is
//! flagged not-converged when the last two windowed values differ by
//! more than 5% relative and 1e-8 absolute. Summation orders are fixed,
//! so results are reproducible run-to-run on one platform.

pub mod matexp;
pub mod mobius;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::exact::{rat_to_f64, Rat};
use crate::shift::{ShiftError, VermaContext};
use crate::sweep;
use crate::verma::{deviation_scalar, rep_generator, Family};

pub use matexp::{band_norm_sq, expm, frobenius_norm, one_norm, window_norm};
pub use mobius::{GaussFactors, MobiusWord};

type CMat = DMatrix<Complex64>;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum LabError {
    #[error("non-finite entries in the input matrix")]
    NonFiniteInput,
    #[error("Pade denominator is singular (overflow-scaled input?)")]
    SingularPadeSolve,
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: f64 },
    #[error("word is outside the Gauss-decomposable neighborhood")]
    GaussNotDecomposable,
    #[error("generator violates the reality condition (not skew-adjoint)")]
    NotSkew,
    #[error("bad experiment configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

/// A finite combination sum a_k T1(e_k) with a time, truncation size
/// and numeric weight.
#[derive(Clone, Debug)]
pub struct FlowSpec {
    pub coeffs: Vec<(i64, Complex64)>,
    pub t: Complex64,
    pub size: usize,
    pub weight: Rat,
    /// Reality condition: requires i * generator self-adjoint, i.e. the
    /// generator matrix skew-Hermitian (checked numerically).
    pub assert_skew: bool,
}

impl FlowSpec {
    pub fn edge_width(&self) -> usize {
        self.coeffs.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// The truncated generator sum a_k (T1 e_k)_N.
    pub fn generator(&self, size: usize) -> Result<CMat, LabError> {
        let ctx = VermaContext::numeric(self.weight.clone())?;
        let mut m = CMat::zeros(size, size);
        for (k, a) in &self.coeffs {
            let op = rep_generator(Family::E, *k, &ctx)?;
            let tr = op.truncate(size, &self.weight)?;
            m += tr.entries * *a;
        }
        if self.assert_skew {
            let defect = one_norm(&(&m + m.adjoint()));
            if defect > 1e-10 * (1.0 + one_norm(&m)) {
                return Err(LabError::NotSkew);
            }
        }
        Ok(m)
    }
}

/// exp(t . generator) at the spec's size (flow).
pub fn flow(spec: &FlowSpec) -> Result<CMat, LabError> {
    let g = spec.generator(spec.size)?;
    expm(&(g * spec.t))
}

/// Windowed quantity recomputed along an N schedule.
#[derive(Clone, Debug)]
pub struct DeviationCurve {
    pub window: usize,
    pub points: Vec<(usize, f64)>,
    pub converged: bool,
}

impl DeviationCurve {
    fn from_points(window: usize, points: Vec<(usize, f64)>) -> Self {
        let converged = match points.len() {
            0 | 1 => false,
            n => {
                let (_, a) = points[n - 2];
                let (_, b) = points[n - 1];
                let rel_ok = (a - b).abs() <= 0.05 * a.abs().max(b.abs());
                let abs_ok = (a - b).abs() <= 1e-8;
                rel_ok || abs_ok
            }
        };
        Self { window, points, converged }
    }

    pub fn last(&self) -> Option<f64> {
        self.points.last().map(|&(_, v)| v)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,value\n");
        for (n, v) in &self.points {
            out.push_str(&format!("{},{}\n", n, crate::report::format_float(*v)));
        }
        out
    }
}

/// HS norm of (U* U - I) on the leading window x window block over the
/// schedule (unitarity_deviation).
pub fn unitarity_deviation(
    spec: &FlowSpec,
    window: usize,
    schedule: &[usize],
) -> Result<DeviationCurve, LabError> {
    let runs = sweep::map(schedule.to_vec(), |n| -> Result<(usize, f64), LabError> {
        let g = spec.generator(n)?;
        let u = expm(&(g * spec.t))?;
        let d = u.adjoint() * &u - CMat::identity(n, n);
        Ok((n, window_norm(&d, window)))
    });
    let points = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(DeviationCurve::from_points(window, points))
}

/// The truncated Mobius word: exp(a T(e_-1)) exp(b T(e_0)) exp(c T(e_1)).
pub fn mobius_representation(
    word: &MobiusWord,
    size: usize,
    h: &Rat,
) -> Result<CMat, LabError> {
    let f = word.gauss()?;
    let ctx = VermaContext::numeric(h.clone())?;
    let gen = |k: i64| -> Result<CMat, LabError> {
        Ok(rep_generator(Family::E, k, &ctx)?.truncate(size, h)?.entries)
    };
    let lower = expm(&(gen(-1)? * Complex64::new(f.a, 0.0)))?;
    let diag = expm(&(gen(0)? * Complex64::new(f.b, 0.0)))?;
    let raise = expm(&(gen(1)? * Complex64::new(f.c, 0.0)))?;
    Ok(lower * diag * raise)
}

#[derive(Clone, Debug)]
pub struct MobiusDefect {
    pub curve: DeviationCurve,
    /// Best-fit unit scalar at the largest N.
    pub phase: Complex64,
}

/// Windowed norm of T(w1)T(w2) - phase * T(w1 w2) over the schedule
/// (group_defect_mobius). The phase is the projective best fit on the
/// window block.
pub fn group_defect_mobius(
    w1: &MobiusWord,
    w2: &MobiusWord,
    h: &Rat,
    window: usize,
    schedule: &[usize],
) -> Result<MobiusDefect, LabError> {
    let product = w1.compose(w2);
    let runs = sweep::map(schedule.to_vec(), |n| -> Result<(usize, f64, Complex64), LabError> {
        let t1 = mobius_representation(w1, n, h)?;
        let t2 = mobius_representation(w2, n, h)?;
        let t12 = mobius_representation(&product, n, h)?;
        let lhs = &t1 * &t2;
        // projective phase: projection of lhs onto t12 over the window
        let w = window.min(n);
        let mut inner = Complex64::new(0.0, 0.0);
        for r in 0..w {
            for c in 0..w {
                inner += t12[(r, c)].conj() * lhs[(r, c)];
            }
        }
        let phase = if inner.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { inner / inner.norm() };
        let defect = &lhs - &t12 * phase;
        Ok((n, window_norm(&defect, window), phase))
    });
    let results = runs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let phase = results.last().map(|&(_, _, p)| p).unwrap_or(Complex64::new(1.0, 0.0));
    let points = results.into_iter().map(|(n, v, _)| (n, v)).collect();
    Ok(MobiusDefect { curve: DeviationCurve::from_points(window, points), phase })
}

/// || exp((t+s)X) - exp(tX) exp(sX) || on the full truncation
/// (monoassociativity_check).
pub fn monoassociativity_check(
    spec: &FlowSpec,
    t: Complex64,
    s: Complex64,
) -> Result<f64, LabError> {
    let g = spec.generator(spec.size)?;
    let whole = expm(&(&g * (t + s)))?;
    let split = expm(&(&g * t))? * expm(&(&g * s))?;
    Ok(frobenius_norm(&(whole - split)))
}

#[derive(Clone, Debug)]
pub struct CommutatorScaling {
    pub samples: Vec<(f64, f64)>,
    /// Least-squares exponent p in d(t) ~ t^p.
    pub fitted_exponent: f64,
    /// Scalar correction folded into the bracket truncation.
    pub scalar_correction: Complex64,
}

/// Group-commutator flow against the exponential of the bracket
/// (commutator_flow_scaling): d(t) = || exp(tX) exp(tY) exp(-tX)
/// exp(-tY) - exp(t^2 Z) || windowed, Z the truncated T1 image of the
/// [X, Y] combination plus the scalar parts of the cross-chart
/// deviations.
pub fn commutator_flow_scaling(
    x: &FlowSpec,
    y: &FlowSpec,
    t_schedule: &[f64],
    window: usize,
) -> Result<CommutatorScaling, LabError> {
    let size = x.size.max(y.size);
    let h = &x.weight;
    let gx = x.generator(size)?;
    let gy = y.generator(size)?;
    // bracket combination sum a_k b_l (k - l) e_{k+l}
    let mut bracket: std::collections::BTreeMap<i64, Complex64> = Default::default();
    let mut scalar = Complex64::new(0.0, 0.0);
    for (k, a) in &x.coeffs {
        for (l, b) in &y.coeffs {
            let c = *a * *b;
            let entry = bracket.entry(k + l).or_insert(Complex64::new(0.0, 0.0));
            *entry += c * Complex64::new((k - l) as f64, 0.0);
            scalar += c * Complex64::new(rat_to_f64(&deviation_scalar(*k, *l, h)?), 0.0);
        }
    }
    let ctx = VermaContext::numeric(h.clone())?;
    let mut z = CMat::identity(size, size) * scalar;
    for (idx, c) in &bracket {
        if c.norm() == 0.0 {
            continue;
        }
        let tr = rep_generator(Family::E, *idx, &ctx)?.truncate(size, h)?;
        z += tr.entries * *c;
    }
    let mut samples = Vec::new();
    for &t in t_schedule {
        let tc = Complex64::new(t, 0.0);
        let ex = expm(&(&gx * tc))?;
        let ey = expm(&(&gy * tc))?;
        let exi = expm(&(&gx * -tc))?;
        let eyi = expm(&(&gy * -tc))?;
        let group = ex * ey * exi * eyi;
        let algebra = expm(&(&z * (tc * tc)))?;
        samples.push((t, window_norm(&(group - algebra), window)));
    }
    // log-log least squares on the nonzero samples
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(_, d)| *d > 1e-300)
        .map(|&(t, d)| (t.ln(), d.ln()))
        .collect();
    let fitted_exponent = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    } else {
        f64::NAN
    };
    Ok(CommutatorScaling { samples, fitted_exponent, scalar_correction: scalar })
}

#[derive(Clone, Debug)]
pub struct SemigroupProbe {
    /// max |A(q1)A(q2) - A(q1 q2)| entrywise.
    pub law_error: f64,
    /// max deviation of consecutive singular-value ratios from |q1|.
    pub singular_ratio_error: f64,
    /// Cauchy-Riemann residual of tau -> exp(tau T(e_k)) A(q1).
    pub cr_residual: f64,
}

/// The diagonal holomorphic semigroup A(q) = q^{T1(e_0)} and its
/// smoothing properties (semigroup_probe).
pub fn semigroup_probe(
    q1: Complex64,
    q2: Complex64,
    k: i64,
    tau: Complex64,
    size: usize,
    h: &Rat,
) -> Result<SemigroupProbe, LabError> {
    if q1.norm() >= 1.0 || q2.norm() >= 1.0 {
        return Err(LabError::BadConfig("semigroup probe needs |q| < 1".into()));
    }
    let hf = rat_to_f64(h);
    let a_of = |q: Complex64| -> CMat {
        let mut m = CMat::zeros(size, size);
        let lq = q.ln();
        for n in 0..size {
            m[(n, n)] = (lq * Complex64::new(n as f64 + hf, 0.0)).exp();
        }
        m
    };
    let a1 = a_of(q1);
    let a2 = a_of(q2);
    let a12 = a_of(q1 * q2);
    let law_error = (&a1 * &a2 - &a12)
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max);

    let svd = nalgebra::SVD::new(a1.clone(), false, false);
    let mut svs: Vec<f64> = svd.singular_values.iter().copied().collect();
    svs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let target = q1.norm();
    let mut singular_ratio_error = 0.0f64;
    for w in svs.windows(2) {
        if w[0] > 1e-280 {
            singular_ratio_error = singular_ratio_error.max((w[1] / w[0] - target).abs());
        }
    }

    let ctx = VermaContext::numeric(h.clone())?;
    let gk = rep_generator(Family::E, k, &ctx)?.truncate(size, h)?.entries;
    let field = |tau: Complex64| -> Result<CMat, LabError> { Ok(expm(&(&gk * tau))? * &a1) };
    let eps = 1e-4;
    let d_re = (field(tau + Complex64::new(eps, 0.0))? - field(tau - Complex64::new(eps, 0.0))?)
        * Complex64::new(1.0 / (2.0 * eps), 0.0);
    let d_im = (field(tau + Complex64::new(0.0, eps))? - field(tau - Complex64::new(0.0, eps))?)
        * (Complex64::new(0.0, 2.0 * eps)).finv();
    let cr_residual =
        (&d_re - &d_im).iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    Ok(SemigroupProbe { law_error, singular_ratio_error, cr_residual })
}

/// Input for the orbit of the highest vector.
#[derive(Clone, Debug)]
pub enum OrbitInput {
    Word(MobiusWord),
    Flow(FlowSpec),
}

/// T(g) u_0, normalized so the first nonzero coordinate is 1
/// (orbit_coefficients).
pub fn orbit_coefficients(
    input: &OrbitInput,
    size: usize,
    h: &Rat,
) -> Result<Vec<Complex64>, LabError> {
    let u = match input {
        OrbitInput::Word(w) => mobius_representation(w, size, h)?,
        OrbitInput::Flow(spec) => {
            let g = spec.generator(size)?;
            expm(&(g * spec.t))?
        }
    };
    let mut col: Vec<Complex64> = (0..size).map(|r| u[(r, 0)]).collect();
    let scale = col
        .iter()
        .find(|z| z.norm() > 1e-13)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    for z in &mut col {
        *z /= scale;
    }
    Ok(col)
}

/// JSON experiment configuration (generator combos as [k, re, im]).
#[derive(Clone, Debug, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub generator: Vec<[f64; 3]>,
    #[serde(default)]
    pub generator_y: Vec<[f64; 3]>,
    #[serde(default)]
    pub t: Option<[f64; 2]>,
    #[serde(default)]
    pub s: Option<[f64; 2]>,
    #[serde(default)]
    pub n_schedule: Vec<usize>,
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default)]
    pub h: Option<String>,
    #[serde(default)]
    pub q1: Option<[f64; 2]>,
    #[serde(default)]
    pub q2: Option<[f64; 2]>,
    #[serde(default)]
    pub k: Option<i64>,
    #[serde(default)]
    pub tau: Option<[f64; 2]>,
    #[serde(default)]
    pub t_schedule: Vec<f64>,
    #[serde(default)]
    pub w1: Option<[[f64; 2]; 2]>,
    #[serde(default)]
    pub w2: Option<[[f64; 2]; 2]>,
    #[serde(default)]
    pub skew: Option<bool>,
}

impl ExperimentConfig {
    pub fn parse_weight(&self) -> Result<Rat, LabError> {
        let text = self.h.as_deref().unwrap_or("1");
        crate::exact::parse_rat(text)
            .ok_or_else(|| LabError::BadConfig(format!("bad weight `{text}`")))
    }

    pub fn flow_spec(&self, combo: &[[f64; 3]], size: usize) -> Result<FlowSpec, LabError> {
        if combo.is_empty() {
            return Err(LabError::BadConfig("empty generator combination".into()));
        }
        let coeffs = combo
            .iter()
            .map(|[k, re, im]| {
                if k.fract() != 0.0 {
                    return Err(LabError::BadConfig(format!("non-integer mode index {k}")));
                }
                Ok((*k as i64, Complex64::new(*re, *im)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let t = self.t.map(|[re, im]| Complex64::new(re, im)).unwrap_or(Complex64::new(0.0, 0.0));
        Ok(FlowSpec {
            coeffs,
            t,
            size,
            weight: self.parse_weight()?,
            assert_skew: self.skew.unwrap_or(false),
        })
    }
}

/// Dispatches a parsed experiment configuration into a report. Pass
/// flags encode each experiment's numeric contract.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<crate::report::Report, LabError> {
    use crate::report::{Check, Report, Val};
    let mut report = Report::new(&format!("lab:{}", cfg.experiment));
    report.floating = true;
    report.param("h", cfg.h.as_deref().unwrap_or("1"));
    let window = cfg.window.unwrap_or(16);
    let schedule: Vec<usize> =
        if cfg.n_schedule.is_empty() { vec![64, 128, 256] } else { cfg.n_schedule.clone() };
    let curve_val = |c: &DeviationCurve| {
        Val::map(vec![
            (
                "curve",
                Val::List(
                    c.points
                        .iter()
                        .map(|&(n, v)| {
                            Val::map(vec![("N", Val::Int(n as i64)), ("value", Val::Float(v))])
                        })
                        .collect(),
                ),
            ),
            ("converged", Val::Bool(c.converged)),
        ])
    };
    match cfg.experiment.as_str() {
        "unitarity" => {
            let spec = cfg.flow_spec(&cfg.generator, *schedule.last().unwrap())?;
            let spec = FlowSpec { assert_skew: true, ..spec };
            let curve = unitarity_deviation(&spec, window, &schedule)?;
            let pass = curve.last().is_some_and(|v| v <= 1e-8);
            report.push(Check {
                id: "unitarity-deviation".into(),
                inputs: Val::map(vec![("window", Val::Int(window as i64))]),
                payload: curve_val(&curve),
                pass,
            });
        }
        "mobius" => {
            let w1 = MobiusWord::new(cfg.w1.ok_or_else(|| LabError::BadConfig("w1 required".into()))?)?;
            let w2 = MobiusWord::new(cfg.w2.ok_or_else(|| LabError::BadConfig("w2 required".into()))?)?;
            let h = cfg.parse_weight()?;
            let defect = group_defect_mobius(&w1, &w2, &h, window, &schedule)?;
            let pass = defect.curve.last().is_some_and(|v| v <= 1e-6)
                && (defect.phase.norm() - 1.0).abs() <= 1e-8;
            report.push(Check {
                id: "group-defect".into(),
                inputs: Val::map(vec![("window", Val::Int(window as i64))]),
                payload: Val::map(vec![
                    ("curve", curve_val(&defect.curve)),
                    ("phase_re", Val::Float(defect.phase.re)),
                    ("phase_im", Val::Float(defect.phase.im)),
                    ("phase_abs", Val::Float(defect.phase.norm())),
                ]),
                pass,
            });
        }
        "monoassoc" => {
            let size = *schedule.first().unwrap();
            let spec = cfg.flow_spec(&cfg.generator, size)?;
            let t = cfg.t.map(|[re, im]| Complex64::new(re, im)).unwrap_or_default();
            let s = cfg.s.map(|[re, im]| Complex64::new(re, im)).unwrap_or_default();
            let residual = monoassociativity_check(&spec, t, s)?;
            report.push(Check {
                id: "monoassociativity".into(),
                inputs: Val::map(vec![("N", Val::Int(size as i64))]),
                payload: Val::map(vec![("residual", Val::Float(residual))]),
                pass: residual <= 1e-10,
            });
        }
        "commflow" => {
            let size = *schedule.last().unwrap();
            let x = cfg.flow_spec(&cfg.generator, size)?;
            let y = cfg.flow_spec(&cfg.generator_y, size)?;
            let ts: Vec<f64> = if cfg.t_schedule.is_empty() {
                vec![0.2, 0.1, 0.05, 0.025]
            } else {
                cfg.t_schedule.clone()
            };
            let r = commutator_flow_scaling(&x, &y, &ts, window)?;
            report.push(Check {
                id: "commutator-flow".into(),
                inputs: Val::map(vec![("window", Val::Int(window as i64))]),
                payload: Val::map(vec![
                    (
                        "samples",
                        Val::List(
                            r.samples
                                .iter()
                                .map(|&(t, d)| {
                                    Val::map(vec![
                                        ("t", Val::Float(t)),
                                        ("d", Val::Float(d)),
                                    ])
                                })
                                .collect(),
                        ),
                    ),
                    ("fitted_exponent", Val::Float(r.fitted_exponent)),
                    ("scalar_correction_re", Val::Float(r.scalar_correction.re)),
                ]),
                pass: r.fitted_exponent >= 2.7 || r.samples.iter().all(|&(_, d)| d <= 1e-10),
            });
        }
        "semigroup" => {
            let size = *schedule.first().unwrap();
            let q1 = cfg.q1.map(|[re, im]| Complex64::new(re, im)).unwrap_or(Complex64::new(0.5, 0.0));
            let q2 = cfg.q2.map(|[re, im]| Complex64::new(re, im)).unwrap_or(Complex64::new(0.5, 0.0));
            let k = cfg.k.unwrap_or(1);
            let tau = cfg.tau.map(|[re, im]| Complex64::new(re, im)).unwrap_or(Complex64::new(0.1, 0.05));
            let h = cfg.parse_weight()?;
            let probe = semigroup_probe(q1, q2, k, tau, size, &h)?;
            report.push(Check {
                id: "semigroup".into(),
                inputs: Val::map(vec![("N", Val::Int(size as i64))]),
                payload: Val::map(vec![
                    ("law_error", Val::Float(probe.law_error)),
                    ("singular_ratio_error", Val::Float(probe.singular_ratio_error)),
                    ("cr_residual", Val::Float(probe.cr_residual)),
                ]),
                pass: probe.law_error <= 1e-12
                    && probe.singular_ratio_error <= 1e-10
                    && probe.cr_residual <= 1e-6,
            });
        }
        "orbit" => {
            let size = *schedule.first().unwrap();
            let h = cfg.parse_weight()?;
            let input = if let Some(w) = cfg.w1 {
                OrbitInput::Word(MobiusWord::new(w)?)
            } else {
                OrbitInput::Flow(cfg.flow_spec(&cfg.generator, size)?)
            };
            let col = orbit_coefficients(&input, size, &h)?;
            let first_nonzero = col.iter().find(|z| z.norm() > 1e-13);
            let normalized = first_nonzero
                .is_some_and(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            report.push(Check {
                id: "orbit-coefficients".into(),
                inputs: Val::map(vec![("N", Val::Int(size as i64))]),
                payload: Val::List(
                    col.iter()
                        .map(|z| {
                            Val::map(vec![("re", Val::Float(z.re)), ("im", Val::Float(z.im))])
                        })
                        .collect(),
                ),
                pass: normalized,
            });
        }
        other => return Err(LabError::BadConfig(format!("unknown experiment `{other}`"))),
    }
    Ok(report)
}
