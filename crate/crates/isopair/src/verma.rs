//! The spin-1/spin-2 tensor-operator assignments on the Verma module and
//! every representation-identity check built from them.
//!
//! With xi = z d/dz (acting on z^n as multiplication by n):
//!
//!   T1(e_k)  = (xi + (k+1)h) d^k               (k >= 0, offset -k)
//!   T1(e_-k) = z^k (xi+(k+1)h) / prod_{j<k}(xi+2h+j)   (k >= 1, offset +k)
//!   T2(f_k)  = d^k                              (k >= 0, offset -k)
//!   T2(f_-k) = z^k / prod_{j<k}(xi+2h+j)        (k >= 1, offset +k)
//!
//! The spin-2 family realizes the e-side, the spin-1 family the f-side.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::certify::{certify, scalar_part, ClassCertificate};
use crate::exact::{rat, Rat, RatFunc};
use crate::shift::{ShiftError, ShiftOperator, VermaContext};
use crate::sweep;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    E,
    F,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::E => "e",
            Family::F => "f",
        }
    }
}

/// Which Def. 4A identity to check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    T1,
    T2,
}

/// The composite charts of the Witt pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChartId {
    One,
    Two,
}

impl ChartId {
    pub fn contains(&self, family: Family, index: i64) -> bool {
        match (self, family) {
            (ChartId::One, Family::E) => index >= -1,
            (ChartId::One, Family::F) => index >= 0,
            (ChartId::Two, Family::E) => index <= 1,
            (ChartId::Two, Family::F) => index <= 0,
        }
    }
}

/// A chart containing all the listed generators, if any (chart_of).
pub fn chart_of(elements: &[(Family, i64)]) -> Option<ChartId> {
    for chart in [ChartId::One, ChartId::Two] {
        if elements.iter().all(|&(fam, idx)| chart.contains(fam, idx)) {
            return Some(chart);
        }
    }
    None
}

fn linear(h_mult: i64, c: i64) -> RatFunc {
    let mut f = RatFunc::var_n();
    if h_mult != 0 {
        f = f.add(&RatFunc::var_h().scale(&rat(h_mult)));
    }
    if c != 0 {
        f = f.add(&RatFunc::constant(rat(c)));
    }
    f
}

/// Falling factorial n(n-1)...(n-k+1).
fn falling(k: i64) -> RatFunc {
    let mut acc = RatFunc::one();
    for i in 0..k {
        acc = acc.mul(&linear(0, -i));
    }
    acc
}

/// prod_{j=0..k-1} (n + 2h + j).
fn pochhammer_2h(k: i64) -> RatFunc {
    let mut acc = RatFunc::one();
    for j in 0..k {
        acc = acc.mul(&linear(2, j));
    }
    acc
}

/// The raw (numerator, denominator) of the generator coefficient —
/// before canonical cancellation. Exposed so the chart-overlap checks
/// can exhibit the reduction, e.g. e_{-1}: (n+2h)/(n+2h) -> 1.
pub fn rep_generator_raw(kind: Family, k: i64) -> (RatFunc, RatFunc) {
    match (kind, k >= 0) {
        (Family::E, true) => (linear(k + 1, -k).mul(&falling(k)), RatFunc::one()),
        (Family::E, false) => {
            let m = -k;
            (linear(m + 1, 0), pochhammer_2h(m))
        }
        (Family::F, true) => (falling(k), RatFunc::one()),
        (Family::F, false) => (RatFunc::one(), pochhammer_2h(-k)),
    }
}

/// The operator assigned to a generator (rep_generator).
pub fn rep_generator(kind: Family, k: i64, ctx: &VermaContext) -> Result<ShiftOperator, ShiftError> {
    let (num, den) = rep_generator_raw(kind, k);
    let coeff = num.div(&den).expect("generator denominators are nonzero");
    ShiftOperator::from_terms(ctx.clone(), vec![(-k, coeff, BTreeMap::new())])
}

/// Defect of the Def. 4A identity: representation products minus the
/// assigned bracket image,
///   T1 side: (T1(X) T2(A) T1(Y) - T1(Y) T2(A) T1(X)) - (x-y) T1(e_{x+y+a})
///   T2 side: (T2(A) T1(X) T2(B) - T2(B) T1(X) T2(A)) - (a-b) T2(f_{a+b+x})
/// The zero operator means the identity holds.
pub fn rep_identity_defect(
    side: Side,
    x: i64,
    y: i64,
    a: i64,
    ctx: &VermaContext,
) -> Result<ShiftOperator, ShiftError> {
    let (outer, inner) = match side {
        Side::T1 => (Family::E, Family::F),
        Side::T2 => (Family::F, Family::E),
    };
    let tx = rep_generator(outer, x, ctx)?;
    let ty = rep_generator(outer, y, ctx)?;
    let ta = rep_generator(inner, a, ctx)?;
    let lhs = tx.compose(&ta)?.compose(&ty)?.sub(&ty.compose(&ta)?.compose(&tx)?)?;
    let bracket = rep_generator(outer, x + y + a, ctx)?.scale_rat(&rat(x - y));
    lhs.sub(&bracket)
}

/// Witt-relation deviation [T1(e_i), T1(e_j)] - (i-j) T1(e_{i+j}).
pub fn witt_deviation(i: i64, j: i64, ctx: &VermaContext) -> Result<ShiftOperator, ShiftError> {
    let a = rep_generator(Family::E, i, ctx)?;
    let b = rep_generator(Family::E, j, ctx)?;
    let comm = a.commutator(&b)?;
    comm.sub(&rep_generator(Family::E, i + j, ctx)?.scale_rat(&rat(i - j)))
}

/// One triple of the composed-representation sweep.
#[derive(Clone, Debug)]
pub struct TripleCheck {
    pub side: Side,
    pub x: i64,
    pub y: i64,
    pub a: i64,
    pub chart: Option<ChartId>,
    pub defect_is_zero: bool,
    /// Certificate of the defect for cross-chart triples.
    pub certificate: Option<ClassCertificate>,
}

#[derive(Clone, Debug)]
pub struct RepReport {
    pub checks: Vec<TripleCheck>,
}

impl RepReport {
    pub fn in_chart_all_zero(&self) -> bool {
        self.checks.iter().filter(|c| c.chart.is_some()).all(|c| c.defect_is_zero)
    }

    pub fn cross_chart_all_within_scalar_plus_hs(&self) -> bool {
        self.checks.iter().filter(|c| c.chart.is_none()).all(|c| {
            c.defect_is_zero
                || c.certificate.as_ref().is_some_and(|cert| cert.verdict.is_hilbert_schmidt())
        })
    }
}

/// Sweeps every triple with indices bounded by K on both identity sides:
/// same-chart triples must have zero defect; cross-chart defects are
/// certified (modulo scalars) instead (verify_composed_representation).
pub fn verify_composed_representation(
    k_bound: i64,
    ctx: &VermaContext,
) -> Result<RepReport, ShiftError> {
    let mut tuples = Vec::new();
    for side in [Side::T1, Side::T2] {
        for x in -k_bound..=k_bound {
            for y in -k_bound..=k_bound {
                for a in -k_bound..=k_bound {
                    tuples.push((side, x, y, a));
                }
            }
        }
    }
    let results = sweep::map(tuples, |(side, x, y, a)| {
        let (outer, inner) = match side {
            Side::T1 => (Family::E, Family::F),
            Side::T2 => (Family::F, Family::E),
        };
        let chart = chart_of(&[(outer, x), (outer, y), (inner, a)]);
        let defect = rep_identity_defect(side, x, y, a, ctx)?;
        let defect_is_zero = defect.is_zero();
        let certificate = if chart.is_none() && !defect_is_zero {
            Some(certify(&defect, true)?)
        } else {
            None
        };
        Ok(TripleCheck { side, x, y, a, chart, defect_is_zero, certificate })
    });
    let checks = results.into_iter().collect::<Result<Vec<_>, ShiftError>>()?;
    Ok(RepReport { checks })
}

/// Every formula route for a generator in the chart overlap
/// span(e_-1, e_0, e_1; f_0); all routes must yield identical operators.
#[derive(Clone, Debug)]
pub struct OverlapCheck {
    pub family: Family,
    pub index: i64,
    pub consistent: bool,
    pub raw_forms: Vec<String>,
    pub canonical: String,
}

/// Def. 4B compatibility on the chart intersection. Both extended
/// formula rows exist exactly for e_0, f_0 (k = 0 limits of either row)
/// and the raising route for e_{-1} reduces to multiplication by z
/// (chart_overlap_consistency).
pub fn chart_overlap_consistency(ctx: &VermaContext) -> Result<Vec<OverlapCheck>, ShiftError> {
    let mut out = Vec::new();
    // e0: lowering row at k=0 is (xi+h) d^0; raising row degenerates to
    // z^0 (xi+h)/(empty product): both diagonal n+h.
    {
        let lower = rep_generator(Family::E, 0, ctx)?;
        let raise = ShiftOperator::from_terms(
            ctx.clone(),
            vec![(0, linear(1, 0), BTreeMap::new())],
        )?;
        out.push(OverlapCheck {
            family: Family::E,
            index: 0,
            consistent: lower == raise,
            raw_forms: vec!["n+h".into(), "n+h".into()],
            canonical: lower.render(),
        });
    }
    // f0: d^0 = identity from the lowering row, z^0/(empty product) from
    // the raising row.
    {
        let lower = rep_generator(Family::F, 0, ctx)?;
        let raise = ShiftOperator::identity(ctx.clone());
        out.push(OverlapCheck {
            family: Family::F,
            index: 0,
            consistent: lower == raise,
            raw_forms: vec!["1".into(), "1".into()],
            canonical: lower.render(),
        });
    }
    // e-1: raising row z (xi+2h)/(xi+2h) must reduce to plain z.
    {
        let (num, den) = rep_generator_raw(Family::E, -1);
        let reduced = rep_generator(Family::E, -1, ctx)?;
        let plain_z =
            ShiftOperator::from_terms(ctx.clone(), vec![(1, RatFunc::one(), BTreeMap::new())])?;
        out.push(OverlapCheck {
            family: Family::E,
            index: -1,
            consistent: reduced == plain_z,
            raw_forms: vec![format!("({})/({})", num.render(), den.render()), "1".into()],
            canonical: reduced.render(),
        });
    }
    // e1: single formula (xi+2h) d; both charts contain it, one route.
    {
        let op = rep_generator(Family::E, 1, ctx)?;
        out.push(OverlapCheck {
            family: Family::E,
            index: 1,
            consistent: true,
            raw_forms: vec!["(n-1+2*h)*n".into()],
            canonical: op.render(),
        });
    }
    Ok(out)
}

/// P = T2(f_1), Q = T2(f_-1) and their products (lb_probe).
#[derive(Clone, Debug)]
pub struct LbProbe {
    pub pq: ShiftOperator,
    pub qp: ShiftOperator,
    pub commutator: ShiftOperator,
    pub certificate: ClassCertificate,
}

pub fn lb_probe(ctx: &VermaContext) -> Result<LbProbe, ShiftError> {
    let p = rep_generator(Family::F, 1, ctx)?;
    let q = rep_generator(Family::F, -1, ctx)?;
    let pq = p.compose(&q)?;
    let qp = q.compose(&p)?;
    let commutator = pq.sub(&qp)?;
    let certificate = certify(&commutator, false)?;
    Ok(LbProbe { pq, qp, commutator, certificate })
}

/// Closure function of [T1(e_k), T1(e_-k)] re-expressed in the spectral
/// variable of T1(e_0) (nonlinear_sl2_probe).
#[derive(Clone, Debug)]
pub struct Sl2Probe {
    pub k: i64,
    /// [T1(e_0), T1(e_k)] = -k T1(e_k) and the mirrored relation.
    pub eigen_relation_holds: bool,
    /// Phi_k with [T1(e_k), T1(e_-k)] = Phi_k(T1(e_0)), in lambda = n + h.
    pub closure: RatFunc,
}

pub fn nonlinear_sl2_probe(k: i64, ctx: &VermaContext) -> Result<Sl2Probe, ShiftError> {
    assert!(k >= 1, "probe expects k >= 1");
    let e0 = rep_generator(Family::E, 0, ctx)?;
    let ek = rep_generator(Family::E, k, ctx)?;
    let emk = rep_generator(Family::E, -k, ctx)?;
    let eigen_relation_holds = e0.commutator(&ek)?.sub(&ek.scale_rat(&rat(-k)))?.is_zero()
        && e0.commutator(&emk)?.sub(&emk.scale_rat(&rat(k)))?.is_zero();
    let comm = ek.commutator(&emk)?;
    // matching offsets +-k make the commutator diagonal; anything else
    // would be a bug upstream
    if comm.offsets().iter().any(|&s| s != 0) {
        return Err(ShiftError::NotDiagonal);
    }
    let diag = comm
        .term_at(0)
        .map(|t| t.stable_coeff().clone())
        .unwrap_or_else(RatFunc::zero);
    // lambda = n + h is the spectrum of T1(e_0): substitute n = lambda - h
    let closure = match ctx.numeric_weight() {
        None => diag.subst_n_lambda_minus_h(),
        Some(h) => diag.shift_n_rat(&-h.clone()),
    };
    Ok(Sl2Probe { k, eigen_relation_holds, closure })
}

/// Cross-consistency helper: the scalar part of a deviation at numeric h
/// (used by the lab's commutator-flow correction).
pub fn deviation_scalar(i: i64, j: i64, h: &Rat) -> Result<Rat, ShiftError> {
    let ctx = VermaContext::numeric(h.clone())?;
    let dev = witt_deviation(i, j, &ctx)?;
    match scalar_part(&dev) {
        None => Ok(Rat::zero()),
        Some(s) => Ok(s.eval_h_only(h)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_ratfunc, ratio};

    fn sym() -> VermaContext {
        VermaContext::symbolic()
    }

    #[test]
    fn generator_shapes() {
        // e2: offset -2, coefficient (n-2+3h) n (n-1)
        let e2 = rep_generator(Family::E, 2, &sym()).unwrap();
        assert_eq!(
            e2.term_at(-2).unwrap().stable_coeff(),
            &parse_ratfunc("(n-2+3*h)*n*(n-1)").unwrap()
        );
        // f-2: offset +2, coefficient 1/((n+2h)(n+2h+1))
        let fm2 = rep_generator(Family::F, -2, &sym()).unwrap();
        assert_eq!(
            fm2.term_at(2).unwrap().stable_coeff(),
            &parse_ratfunc("1/((n+2*h)*(n+2*h+1))").unwrap()
        );
        // e0: diagonal n+h
        let e0 = rep_generator(Family::E, 0, &sym()).unwrap();
        assert_eq!(e0.term_at(0).unwrap().stable_coeff(), &parse_ratfunc("n+h").unwrap());
        // e-1 reduces to multiplication by z
        let em1 = rep_generator(Family::E, -1, &sym()).unwrap();
        assert_eq!(em1.term_at(1).unwrap().stable_coeff(), &RatFunc::one());
    }

    #[test]
    fn op_value_spec_example() {
        // T1(e2) at offset -2, n=5: (3+3h)*20
        let e2 = rep_generator(Family::E, 2, &sym()).unwrap();
        assert_eq!(e2.value(-2, 5), parse_ratfunc("20*(3+3*h)").unwrap());
    }

    #[test]
    fn chart_assignment() {
        assert_eq!(
            chart_of(&[(Family::E, 2), (Family::E, 0), (Family::F, 1)]),
            Some(ChartId::One)
        );
        assert_eq!(chart_of(&[(Family::E, -2), (Family::F, -1)]), Some(ChartId::Two));
        assert_eq!(chart_of(&[(Family::E, 2), (Family::E, -2)]), None);
    }

    #[test]
    fn commutator_witt_relation_in_chart() {
        // [T1(e_1), T1(e_-1)] = 2 (n+h) = 2 T1(e_0)
        let dev = witt_deviation(1, -1, &sym()).unwrap();
        assert!(dev.is_zero());
        let dev = witt_deviation(2, -1, &sym()).unwrap();
        assert!(dev.is_zero());
    }

    #[test]
    fn deviation_2_m2_exceptional_weights() {
        // The stable coefficient vanishes identically at h=1; what
        // survives is the rank-one boundary correction at n=0 forced by
        // the 0-absorbing semantics (e2 kills z^0 and z^1 first). The
        // class certificate accordingly reads zero.
        let ctx1 = VermaContext::numeric(rat(1)).unwrap();
        let dev1 = witt_deviation(2, -2, &ctx1).unwrap();
        let t = dev1.term_at(0).unwrap();
        assert!(t.stable_coeff().is_zero());
        assert_eq!(t.boundary().len(), 1);
        assert_eq!(t.boundary().get(&0), Some(&RatFunc::constant(rat(-1))));
        assert_eq!(
            crate::certify::certify(&dev1, false).unwrap().verdict,
            crate::certify::Verdict::Zero
        );
        // the same operator by specializing the symbolic deviation
        let dev_sym = witt_deviation(2, -2, &sym()).unwrap();
        assert_eq!(dev_sym.specialize(&rat(1)).unwrap(), dev1);
        // ... and it is nonzero at h=2 with value -46/35 at n=2
        let ctx2 = VermaContext::numeric(rat(2)).unwrap();
        let dev = witt_deviation(2, -2, &ctx2).unwrap();
        assert!(!dev.is_zero());
        let v = dev.value(0, 2).as_constant().unwrap();
        assert_eq!(v, ratio(-46, 35));
    }

    #[test]
    fn rep_defect_equals_witt_deviation_through_f0() {
        let ctx = sym();
        for (i, j) in [(1, -1), (2, -2), (2, 1), (3, -2)] {
            let lhs = witt_deviation(i, j, &ctx).unwrap();
            let rhs = rep_identity_defect(Side::T1, i, j, 0, &ctx).unwrap();
            assert_eq!(lhs, rhs, "(i,j)=({i},{j})");
        }
        // the value the certificates hinge on
        let d = rep_identity_defect(Side::T1, 2, -2, 0, &VermaContext::numeric(rat(2)).unwrap())
            .unwrap();
        assert_eq!(d.value(0, 2).as_constant().unwrap(), ratio(-46, 35));
    }

    #[test]
    fn t2_identity_spot_checks() {
        // same-chart (chart 2): (f0, f-1; e1) -> zero defect
        let d = rep_identity_defect(Side::T2, 0, -1, 1, &sym()).unwrap();
        assert!(d.is_zero());
        // same-chart (chart 1): (f2, f1; e0)
        let d = rep_identity_defect(Side::T2, 2, 1, 0, &sym()).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn overlap_consistency() {
        let checks = chart_overlap_consistency(&sym()).unwrap();
        assert!(checks.iter().all(|c| c.consistent));
        let em1 = checks.iter().find(|c| c.family == Family::E && c.index == -1).unwrap();
        assert_eq!(em1.raw_forms[0], "(n+2*h)/(n+2*h)");
        assert_eq!(em1.canonical, "offset 1: 1");
    }

    #[test]
    fn lb_probe_values() {
        let probe = lb_probe(&sym()).unwrap();
        assert_eq!(
            probe.pq.term_at(0).unwrap().stable_coeff(),
            &parse_ratfunc("(n+1)/(n+2*h)").unwrap()
        );
        assert_eq!(
            probe.qp.term_at(0).unwrap().stable_coeff(),
            &parse_ratfunc("n/(n-1+2*h)").unwrap()
        );
        assert_eq!(
            probe.commutator.term_at(0).unwrap().stable_coeff(),
            &parse_ratfunc("(2*h-1)/((n+2*h)*(n-1+2*h))").unwrap()
        );
        assert_eq!(probe.certificate.verdict, crate::certify::Verdict::TraceClass);
        assert_eq!(probe.certificate.exceptional_roots, vec![ratio(1, 2)]);
        // h = 1/2 kills the stable coefficient exactly; operationally the
        // commutator is the rank-one projection onto constants (P = d/dz
        // annihilates them), so only a boundary entry remains and the
        // certificate reads zero.
        let ctx = VermaContext::numeric(ratio(1, 2)).unwrap();
        let comm = lb_probe(&ctx).unwrap().commutator;
        let t = comm.term_at(0).unwrap();
        assert!(t.stable_coeff().is_zero());
        assert_eq!(t.boundary().get(&0), Some(&RatFunc::one()));
        assert_eq!(
            crate::certify::certify(&comm, false).unwrap().verdict,
            crate::certify::Verdict::Zero
        );
    }

    #[test]
    fn sl2_closure_functions() {
        // k=1: genuine sl2, Phi_1 = 2 lambda
        let probe = nonlinear_sl2_probe(1, &sym()).unwrap();
        assert!(probe.eigen_relation_holds);
        assert_eq!(probe.closure, parse_ratfunc("2*n").unwrap());
        // k=2 at h=1: Phi_2 = 4 lambda
        let ctx = VermaContext::numeric(rat(1)).unwrap();
        let probe = nonlinear_sl2_probe(2, &ctx).unwrap();
        assert!(probe.eigen_relation_holds);
        assert_eq!(probe.closure, parse_ratfunc("4*n").unwrap());
        // k=2 symbolic: rational with (lambda+h)-type denominator factors
        let probe = nonlinear_sl2_probe(2, &sym()).unwrap();
        let den = probe.closure.denominator();
        assert!(den.total_degree().unwrap_or(0) >= 1);
    }
}
