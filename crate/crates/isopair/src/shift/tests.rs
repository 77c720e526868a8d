use std::collections::BTreeMap;

use super::*;
use crate::exact::{parse_ratfunc, ratio, RatFunc};

fn sym() -> VermaContext {
    VermaContext::symbolic()
}

fn op(ctx: VermaContext, terms: Vec<(i64, &str)>) -> ShiftOperator {
    let terms = terms
        .into_iter()
        .map(|(s, c)| (s, parse_ratfunc(c).unwrap(), BTreeMap::new()))
        .collect();
    ShiftOperator::from_terms(ctx, terms).unwrap()
}

/// Spin-1 lowering/raising used across the tests: f1 = d/dz, f-1 analog.
fn f1(ctx: VermaContext) -> ShiftOperator {
    op(ctx, vec![(-1, "n")])
}
fn f_minus_1(ctx: VermaContext) -> ShiftOperator {
    op(ctx, vec![(1, "1/(n+2*h)")])
}

#[test]
fn make_and_value_basics() {
    // term (s=-1, c=n): value at n=0 is 0 through the stable form alone
    let a = f1(sym());
    assert!(a.term_at(-1).unwrap().boundary().is_empty());
    assert!(a.value(-1, 0).is_zero());
    assert_eq!(a.value(-1, 5), RatFunc::constant(rat(5)));
    // no term at offset +7
    assert!(a.value(7, 3).is_zero());

    // term (s=+1, c=1/(n+2h)) at h=1/2: value at n=0 is 1
    let ctx = VermaContext::numeric(ratio(1, 2)).unwrap();
    let b = f_minus_1(ctx);
    assert_eq!(b.value(1, 0), RatFunc::one());
}

#[test]
fn make_rejects_unshielded_pole() {
    // constructed pole at n=3
    let err = ShiftOperator::from_terms(
        sym(),
        vec![(1, parse_ratfunc("1/(n-3)").unwrap(), BTreeMap::new())],
    )
    .unwrap_err();
    assert_eq!(err, ShiftError::PoleAtDegree { n: 3 });

    // shielded by a boundary entry it is fine
    let mut boundary = BTreeMap::new();
    boundary.insert(3, RatFunc::zero());
    let ok = ShiftOperator::from_terms(
        sym(),
        vec![(1, parse_ratfunc("1/(n-3)").unwrap(), boundary)],
    );
    assert!(ok.is_ok());
}

#[test]
fn annihilation_zeros_are_augmented() {
    // s=-2, c=1 (constant does not vanish at n=0,1): zeros are forced
    let a = op(sym(), vec![(-2, "1")]);
    let t = a.term_at(-2).unwrap();
    assert_eq!(t.boundary().len(), 2);
    assert!(a.value(-2, 0).is_zero());
    assert!(a.value(-2, 1).is_zero());
    assert_eq!(a.value(-2, 2), RatFunc::one());
    assert_eq!(t.threshold(), 2);

    // a nonzero boundary entry below the annihilation line is rejected
    let mut boundary = BTreeMap::new();
    boundary.insert(0, RatFunc::one());
    let err =
        ShiftOperator::from_terms(sym(), vec![(-2, RatFunc::one(), boundary)]).unwrap_err();
    assert_eq!(err, ShiftError::AnnihilationViolation { n: 0 });
}

#[test]
fn add_and_scale() {
    let a = f1(sym());
    // A + (-1)A = 0
    assert!(a.add(&a.neg()).unwrap().is_zero());
    // diagonal (n+h) + identity = (n+h)+1
    let e0 = op(sym(), vec![(0, "n+h")]);
    let id = ShiftOperator::identity(sym());
    let sum = e0.add(&id).unwrap();
    assert_eq!(sum.term_at(0).unwrap().stable_coeff(), &parse_ratfunc("n+h+1").unwrap());
    // op_scale by 2h
    let scaled = id.scale(&parse_ratfunc("2*h").unwrap()).unwrap();
    assert_eq!(scaled.term_at(0).unwrap().stable_coeff(), &parse_ratfunc("2*h").unwrap());
    // scaling by something n-dependent is refused
    assert_eq!(id.scale(&parse_ratfunc("n").unwrap()).unwrap_err(), ShiftError::ScaleDependsOnN);
}

#[test]
fn compose_lobachevskii_berezin_pair() {
    let p = f1(sym());
    let q = f_minus_1(sym());
    // PQ = (n+1)/(n+2h), no boundary
    let pq = p.compose(&q).unwrap();
    assert_eq!(pq.term_at(0).unwrap().stable_coeff(), &parse_ratfunc("(n+1)/(n+2*h)").unwrap());
    assert!(pq.term_at(0).unwrap().boundary().is_empty());
    // QP = n/(n-1+2h), no boundary at symbolic h (value at 0 is the zero function)
    let qp = q.compose(&p).unwrap();
    assert_eq!(qp.term_at(0).unwrap().stable_coeff(), &parse_ratfunc("n/(n-1+2*h)").unwrap());
    assert!(qp.term_at(0).unwrap().boundary().is_empty());
    // [P,Q] = (2h-1)/((n+2h)(n-1+2h))
    let comm = p.commutator(&q).unwrap();
    assert_eq!(
        comm.term_at(0).unwrap().stable_coeff(),
        &parse_ratfunc("(2*h-1)/((n+2*h)*(n-1+2*h))").unwrap()
    );
    // [A, A] = 0
    assert!(p.commutator(&p).unwrap().is_zero());
}

#[test]
fn compose_boundary_at_special_weight() {
    // QP at h=1/2: stable form collapses to 1 with a 0-override at n=0
    let h = ratio(1, 2);
    let ctx = VermaContext::numeric(h.clone()).unwrap();
    let qp = f_minus_1(ctx.clone()).compose(&f1(ctx)).unwrap();
    let t = qp.term_at(0).unwrap();
    assert_eq!(t.stable_coeff(), &RatFunc::one());
    assert_eq!(t.boundary().get(&0), Some(&RatFunc::zero()));
    assert_eq!(t.boundary().len(), 1);

    // the same operator obtained by specializing the symbolic product
    let qp_sym = f_minus_1(sym()).compose(&f1(sym())).unwrap();
    assert_eq!(qp_sym.specialize(&h).unwrap(), qp);
}

#[test]
fn specialize_recovers_operational_values() {
    // e(-2) . e(2) at h=1: stable n^2-1 with boundary {0 -> 0}
    let e2 = op(sym(), vec![(-2, "(n-2+3*h)*n*(n-1)")]);
    let em2 = op(sym(), vec![(2, "(n+3*h)/((n+2*h)*(n+2*h+1))")]);
    let prod = em2.compose(&e2).unwrap();
    // symbolic: single diagonal, no boundary
    assert!(prod.term_at(0).unwrap().boundary().is_empty());
    let spec = prod.specialize(&rat(1)).unwrap();
    let t = spec.term_at(0).unwrap();
    assert_eq!(t.stable_coeff(), &parse_ratfunc("n^2-1").unwrap());
    assert_eq!(t.boundary().get(&0), Some(&RatFunc::zero()));
    assert_eq!(t.boundary().len(), 1);
    // operational values of the specialized operator
    assert!(spec.value(0, 0).is_zero());
    assert!(spec.value(0, 1).is_zero());
    assert_eq!(spec.value(0, 2), RatFunc::constant(rat(3)));
}

#[test]
fn composition_is_associative_with_boundaries() {
    let ctx = sym();
    let ops = vec![
        op(ctx.clone(), vec![(-1, "n"), (0, "n+h")]),
        op(ctx.clone(), vec![(1, "1/(n+2*h)")]),
        op(ctx.clone(), vec![(-2, "n*(n-1)"), (2, "(n+3*h)/((n+2*h)*(n+2*h+1))")]),
    ];
    for a in &ops {
        for b in &ops {
            for c in &ops {
                let left = a.compose(b).unwrap().compose(c).unwrap();
                let right = a.compose(&b.compose(c).unwrap()).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn adjoint_swaps_raising_and_lowering() {
    // adj(f1) = f-1 and back
    let p = f1(sym());
    let q = f_minus_1(sym());
    assert_eq!(p.adjoint().unwrap(), q);
    assert_eq!(q.adjoint().unwrap(), p);
    // diagonal n+h is self-adjoint
    let e0 = op(sym(), vec![(0, "n+h")]);
    assert_eq!(e0.adjoint().unwrap(), e0);
    // involution and anti-multiplicativity on a composite
    let a = op(sym(), vec![(-2, "(n-2+3*h)*n*(n-1)")]);
    assert_eq!(a.adjoint().unwrap().adjoint().unwrap(), a);
    let ab = a.compose(&p).unwrap();
    assert_eq!(
        ab.adjoint().unwrap(),
        p.adjoint().unwrap().compose(&a.adjoint().unwrap()).unwrap()
    );
    // non-unitarizable context is refused
    let bad = VermaContext::numeric(ratio(-1, 4)).unwrap();
    assert!(!bad.is_unitarizable());
    assert_eq!(f1(bad).adjoint().unwrap_err(), ShiftError::NonUnitarizable);
}

#[test]
fn truncate_orthonormal_entries() {
    // f-1 at N=3, h=1: entries sqrt(1/2), sqrt(2/3)
    let q = f_minus_1(sym());
    let tr = q.truncate(3, &rat(1)).unwrap();
    let e10 = tr.entries[(1, 0)].re;
    let e21 = tr.entries[(2, 1)].re;
    assert!((e10 - (0.5f64).sqrt()).abs() < 1e-15);
    assert!((e21 - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
    assert_eq!(tr.entries[(0, 0)].re, 0.0);

    // diagonal n+h at N=2, h=1: diag(1, 2)
    let e0 = op(sym(), vec![(0, "n+h")]);
    let tr = e0.truncate(2, &rat(1)).unwrap();
    assert_eq!(tr.entries[(0, 0)].re, 1.0);
    assert_eq!(tr.entries[(1, 1)].re, 2.0);

    // zero operator
    let z = ShiftOperator::zero(sym());
    let tr = z.truncate(4, &rat(1)).unwrap();
    assert!(tr.entries.iter().all(|c| c.re == 0.0 && c.im == 0.0));
}

#[test]
fn monomial_truncation_composes_like_matrices() {
    use super::truncate::matmul_exact;
    let h = ratio(7, 2);
    let a = op(sym(), vec![(-2, "(n-2+3*h)*n*(n-1)")]);
    let b = op(sym(), vec![(2, "(n+3*h)/((n+2*h)*(n+2*h+1))")]);
    let n = 12;
    let k = 4; // combined offset reach
    let ma = a.truncate_monomial_exact(n, &h).unwrap();
    let mb = b.truncate_monomial_exact(n, &h).unwrap();
    let mprod = matmul_exact(&ma, &mb);
    let prod = a.compose(&b).unwrap().truncate_monomial_exact(n, &h).unwrap();
    for i in 0..n - k {
        for j in 0..n - k {
            assert_eq!(mprod[i][j], prod[i][j], "entry ({i},{j})");
        }
    }
}

#[test]
fn apply_vector_action() {
    // f1 = d/dz on z^2 -> 2z
    let p = f1(sym());
    let v = vec![RatFunc::zero(), RatFunc::zero(), RatFunc::one()];
    let img = p.apply_vector(&v);
    assert_eq!(img, vec![RatFunc::zero(), RatFunc::constant(rat(2))]);
    // z-multiplication on 1 -> z
    let z = op(sym(), vec![(1, "1")]);
    assert_eq!(z.apply_vector(&[RatFunc::one()]), vec![RatFunc::zero(), RatFunc::one()]);
    // zero vector stays zero
    assert!(p.apply_vector(&[]).is_empty());
}

#[test]
fn render_shapes() {
    let q = f_minus_1(sym());
    assert_eq!(q.render(), "offset 1: 1/(n+2*h)");
    let h = ratio(1, 2);
    let ctx = VermaContext::numeric(h).unwrap();
    let qp = f_minus_1(ctx.clone()).compose(&f1(ctx)).unwrap();
    assert_eq!(qp.render(), "offset 0: 1 [n=0: 0]");
    assert_eq!(ShiftOperator::zero(sym()).render(), "0");
}

#[test]
fn inadmissible_weights_are_rejected() {
    assert!(VermaContext::numeric(rat(0)).is_err());
    assert!(VermaContext::numeric(ratio(-3, 2)).is_err());
    assert!(VermaContext::numeric(ratio(-1, 4)).is_ok());
    assert!(VermaContext::numeric(ratio(1, 3)).is_ok());
}
