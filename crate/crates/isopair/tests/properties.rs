//! Property tests for the exact kernel and the shift algebra.

use std::collections::BTreeMap;

use proptest::prelude::*;

use isopair::exact::{parse_ratfunc, rat, BiPoly, Rat, RatFunc, VAR_H, VAR_N};
use isopair::iso::{AffineIndex, CompositeChart, IndexWindow, IsoBracket, PairPresentation};
use isopair::pairspec::{emit_pair_spec, parse_pair_spec};
use isopair::shift::{ShiftOperator, VermaContext};
use isopair::verma::{rep_generator, Family};

fn small_poly() -> impl Strategy<Value = BiPoly> {
    proptest::collection::vec(((0u32..3, 0u32..3), -5i64..=5), 0..5).prop_map(|terms| {
        let mut p = BiPoly::zero();
        for ((en, eh), c) in terms {
            p.add_term([en, eh], rat(c));
        }
        p
    })
}

fn nonzero_poly() -> impl Strategy<Value = BiPoly> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (small_poly(), nonzero_poly()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn nonzero_ratfunc() -> impl Strategy<Value = RatFunc> {
    ratfunc().prop_filter("nonzero", |f| !f.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// rf_normalize(p r, q r) = rf_normalize(p, q)
    #[test]
    fn canonical_form_divides_out_common_factors(
        p in small_poly(), q in nonzero_poly(), r in nonzero_poly()
    ) {
        let with_common = RatFunc::new(p.mul(&r), q.mul(&r)).unwrap();
        let without = RatFunc::new(p, q).unwrap();
        prop_assert_eq!(with_common, without);
    }

    #[test]
    fn field_laws(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn division_inverts_multiplication(a in ratfunc(), b in nonzero_ratfunc()) {
        prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a);
    }

    #[test]
    fn shift_composes_additively(f in ratfunc(), a in -4i64..=4, b in -4i64..=4) {
        prop_assert_eq!(f.shift_n(a).shift_n(b), f.shift_n(a + b));
        prop_assert_eq!(f.shift_n(0), f);
    }

    #[test]
    fn degree_is_additive(f in nonzero_ratfunc(), g in nonzero_ratfunc()) {
        let (df, _) = f.degree_n().unwrap();
        let (dg, _) = g.degree_n().unwrap();
        let (dfg, _) = f.mul(&g).degree_n().unwrap();
        prop_assert_eq!(dfg, df + dg);
    }

    /// rf_eval agrees with evaluating numerator and denominator apart.
    #[test]
    fn eval_matches_componentwise(f in ratfunc(), n in -6i64..=6, h in 1i64..=5) {
        let (nv, hv) = (rat(n), rat(h));
        let den = f.denominator().eval(&[nv.clone(), hv.clone()]);
        match f.eval(&nv, &hv) {
            Ok(v) => {
                let num = f.numerator().eval(&[nv, hv]);
                prop_assert!(!den.is_zero());
                prop_assert_eq!(v * den, num);
            }
            Err(_) => prop_assert!(den.is_zero()),
        }
    }

    /// Canonical text form parses back bit-exactly.
    #[test]
    fn render_parse_round_trip(f in ratfunc()) {
        let text = f.render();
        let back = parse_ratfunc(&text).unwrap();
        prop_assert_eq!(back, f);
    }
}

/// Random operators assembled from the representation generators keep
/// compositions pole-free for generic h.
fn generator_op() -> impl Strategy<Value = ShiftOperator> {
    proptest::collection::vec((-3i64..=3, prop_oneof![Just(Family::E), Just(Family::F)], -3i64..=3), 1..3)
        .prop_map(|parts| {
            let ctx = VermaContext::symbolic();
            let mut acc = ShiftOperator::zero(ctx.clone());
            for (scale, fam, k) in parts {
                let g = rep_generator(fam, k, &ctx).unwrap();
                acc = acc.add(&g.scale_rat(&rat(scale))).unwrap();
            }
            acc
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operator_composition_associates(a in generator_op(), b in generator_op(), c in generator_op()) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn adjoint_is_an_involution(a in generator_op()) {
        prop_assert_eq!(a.adjoint().unwrap().adjoint().unwrap(), a);
    }

    #[test]
    fn adjoint_is_antimultiplicative(a in generator_op(), b in generator_op()) {
        let lhs = a.compose(&b).unwrap().adjoint().unwrap();
        let rhs = b.adjoint().unwrap().compose(&a.adjoint().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Annihilation consistency survives the algebra: nothing maps below
    /// degree zero.
    #[test]
    fn annihilation_survives_products(a in generator_op(), b in generator_op()) {
        let prod = a.compose(&b).unwrap();
        for term in prod.terms() {
            let s = term.offset();
            if s < 0 {
                for n in 0..(-s) as u32 {
                    prop_assert!(prod.value(s, n).is_zero());
                }
            }
        }
    }
}

/// Randomized well-formed pair declarations round-trip through the
/// canonical emitter.
fn random_presentation() -> impl Strategy<Value = PairPresentation> {
    let coeff = proptest::collection::vec(((0u32..2, 0u32..2, 0u32..2), -3i64..=3), 0..4);
    (coeff, -2i64..=2, -2i64..=2, proptest::option::of((-3i64..=0, 0i64..=3)))
        .prop_map(|(qterms, ck, c0, chart)| {
            // antisymmetrize a random polynomial q: c = q(i,j,k) - q(j,i,k)
            let mut q = isopair::exact::TriPoly::zero();
            for ((ei, ej, ek), c) in qterms {
                q.add_term([ei, ej, ek], rat(c));
            }
            let coeff = q.sub(&q.swap_vars(0, 1));
            let target = AffineIndex { ci: 1, cj: 1, ck, c0 };
            let brackets = [
                IsoBracket::new(0, coeff.clone(), target).unwrap(),
                IsoBracket::new(1, coeff, target).unwrap(),
            ];
            let charts = chart
                .map(|(lo, hi)| {
                    vec![CompositeChart {
                        name: "main".into(),
                        windows: [
                            IndexWindow { lower: Some(lo), upper: None },
                            IndexWindow { lower: None, upper: Some(hi) },
                        ],
                    }]
                })
                .unwrap_or_default();
            PairPresentation {
                name: "random".into(),
                family_names: ["a".into(), "b".into()],
                brackets,
                charts,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_spec_round_trip(p in random_presentation()) {
        let emitted = emit_pair_spec(&p);
        let parsed = parse_pair_spec(&emitted).unwrap();
        prop_assert_eq!(&parsed, &p);
        // emission is a byte fixed point
        prop_assert_eq!(emit_pair_spec(&parsed), emitted);
    }
}

/// Specialization commutes with composition (spot property with a
/// deterministic weight sample).
proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn specialize_commutes_with_compose(a in generator_op(), b in generator_op()) {
        for h in [rat(1), Rat::new(1.into(), 3.into()), Rat::new(7.into(), 2.into())] {
            let prod_then = a.compose(&b).unwrap().specialize(&h).unwrap();
            let then_prod = a
                .specialize(&h)
                .unwrap()
                .compose(&b.specialize(&h).unwrap())
                .unwrap();
            prop_assert_eq!(prod_then, then_prod);
        }
    }
}

#[test]
fn boundary_tables_merge_pointwise() {
    // explicit boundary arithmetic: (QP at h=1/2) + its negation
    let h = Rat::new(1.into(), 2.into());
    let ctx = VermaContext::numeric(h).unwrap();
    let p = ShiftOperator::from_terms(
        ctx.clone(),
        vec![(-1, parse_ratfunc("n").unwrap(), BTreeMap::new())],
    )
    .unwrap();
    let q = ShiftOperator::from_terms(
        ctx.clone(),
        vec![(1, parse_ratfunc("1/(n+2*h)").unwrap(), BTreeMap::new())],
    )
    .unwrap();
    let qp = q.compose(&p).unwrap();
    assert!(!qp.is_zero());
    assert!(qp.add(&qp.neg()).unwrap().is_zero());
}
