//! Operator-class certificates from asymptotic degree analysis.
//!
//! In the orthonormal Shapovalov basis a term (s, c) has matrix elements
//! c(n) sqrt(w(n+s)/w(n)) ~ leading(h) n^delta with delta = deg_n(c) + s;
//! rational coefficients have pure power asymptotics (no logarithms), so
//! the band exponent decides the class exactly:
//! delta >= 1 unbounded, delta = 0 bounded not compact, delta = -1
//! compact = Hilbert-Schmidt (those coincide for banded rational
//! operators), delta <= -2 trace class. Boundary tables are finite-rank
//! corrections and never affect the verdict. In non-unitarizable numeric
//! contexts there is no inner product; the certificate falls back to raw
//! monomial-basis coefficient decay (delta = deg_n(c)) and says so.

use serde::Serialize;

use crate::exact::gcd::to_recursive;
use crate::exact::{rational_roots, Rat, RatFunc};
use crate::shift::{ShiftError, ShiftOperator, ShiftTerm};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub enum Verdict {
    Zero,
    TraceClass,
    HilbertSchmidt,
    BoundedNotCompact,
    Unbounded,
}

impl Verdict {
    fn from_delta(delta: i64) -> Self {
        match delta {
            d if d >= 1 => Verdict::Unbounded,
            0 => Verdict::BoundedNotCompact,
            -1 => Verdict::HilbertSchmidt,
            _ => Verdict::TraceClass,
        }
    }

    pub fn is_hilbert_schmidt(&self) -> bool {
        *self <= Verdict::HilbertSchmidt
    }

    /// Compact coincides with HS for banded rational operators.
    pub fn is_compact(&self) -> bool {
        self.is_hilbert_schmidt()
    }

    pub fn is_bounded(&self) -> bool {
        *self <= Verdict::BoundedNotCompact
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Zero => "zero",
            Verdict::TraceClass => "trace-class",
            Verdict::HilbertSchmidt => "hilbert-schmidt",
            Verdict::BoundedNotCompact => "bounded-not-compact",
            Verdict::Unbounded => "unbounded",
        }
    }
}

/// Exact class certificate for a shift operator.
#[derive(Clone, Debug)]
pub struct ClassCertificate {
    pub verdict: Verdict,
    /// n -> infinity limit of the diagonal stable coefficient, recorded
    /// (and subtracted first) in the modulo-scalars reading.
    pub scalar_part: Option<RatFunc>,
    /// Band exponent per term offset.
    pub deltas: Vec<(i64, i64)>,
    /// Product of the numerators of the leading coefficients: weights
    /// where some term drops degree (symbolic contexts only).
    pub exceptional_poly: Option<RatFunc>,
    pub exceptional_roots: Vec<Rat>,
    /// True when the context has no inner product (non-unitarizable
    /// numeric weight) and the verdict is raw coefficient decay.
    pub monomial_basis: bool,
}

impl ClassCertificate {
    pub fn to_json(&self) -> String {
        let scalar = match &self.scalar_part {
            None => "null".to_string(),
            Some(f) => format!("\"{}\"", f.render()),
        };
        let poly = match &self.exceptional_poly {
            None => "null".to_string(),
            Some(f) => format!("\"{}\"", f.render()),
        };
        let deltas: Vec<String> = self
            .deltas
            .iter()
            .map(|(s, d)| format!("{{\"offset\":{},\"delta\":{}}}", s, d))
            .collect();
        let roots: Vec<String> = self
            .exceptional_roots
            .iter()
            .map(|r| format!("\"{}\"", crate::exact::render_rat(r)))
            .collect();
        format!(
            "{{\"verdict\":\"{}\",\"delta_per_term\":[{}],\"scalar_part\":{},\"exceptional_h_poly\":{},\"exceptional_h_roots\":[{}],\"monomial_basis\":{}}}",
            self.verdict.name(),
            deltas.join(","),
            scalar,
            poly,
            roots.join(","),
            self.monomial_basis
        )
    }
}

/// Band exponent and class of a single term (classify_term).
pub fn classify_term(term: &ShiftTerm, monomial_basis: bool) -> (i64, Verdict) {
    if term.stable_coeff().is_zero() {
        // pure boundary term: finite rank
        return (i64::MIN, Verdict::TraceClass);
    }
    let (deg, _) = term.stable_coeff().degree_n().expect("nonzero stable coefficient");
    let delta = if monomial_basis { deg } else { deg + term.offset() };
    (delta, Verdict::from_delta(delta))
}

/// n -> infinity limit of the diagonal stable coefficient: 0 when the
/// degree is negative, the leading-coefficient ratio at degree 0, and
/// none when the degree is positive or there is no diagonal term.
pub fn scalar_part(op: &ShiftOperator) -> Option<RatFunc> {
    let diag = op.term_at(0)?;
    if diag.stable_coeff().is_zero() {
        return Some(RatFunc::zero());
    }
    let (deg, lead) = diag.stable_coeff().degree_n().expect("nonzero");
    match deg {
        d if d < 0 => Some(RatFunc::zero()),
        0 => Some(lead),
        _ => None,
    }
}

/// Full certificate (certify).
pub fn certify(op: &ShiftOperator, modulo_scalars: bool) -> Result<ClassCertificate, ShiftError> {
    let monomial_basis = !op.context().is_unitarizable();
    let scalar = if modulo_scalars { scalar_part(op) } else { None };
    let reduced = match &scalar {
        Some(s) if !s.is_zero() => {
            let id = ShiftOperator::identity(op.context().clone());
            op.sub(&id.scale(s)?)?
        }
        _ => op.clone(),
    };

    let mut deltas = Vec::new();
    let mut verdict = Verdict::Zero;
    let mut exceptional = RatFunc::one();
    let mut has_exceptional = false;
    for term in reduced.terms() {
        if term.stable_coeff().is_zero() {
            continue; // finite-rank boundary remnant
        }
        let (delta, class) = classify_term(term, monomial_basis);
        deltas.push((term.offset(), delta));
        verdict = verdict.max(class);
        if op.context().is_symbolic() && term.stable_coeff().numerator().total_degree().is_some() {
            let (_, lead) = term.stable_coeff().degree_n().expect("nonzero");
            if lead.numerator().total_degree().unwrap_or(0) >= 1 {
                exceptional = exceptional.mul(&RatFunc::from_poly(lead.numerator().clone()));
                has_exceptional = true;
            }
        }
    }

    let (exceptional_poly, exceptional_roots) = if has_exceptional {
        let rec = to_recursive(exceptional.numerator());
        // polynomial in h alone: recursive view has a single n-coefficient
        let poly_h = rec.into_iter().next().unwrap_or_else(crate::exact::UPoly::zero);
        let mut roots = if poly_h.degree().is_some_and(|d| d >= 1) {
            rational_roots(&poly_h).unwrap_or_default()
        } else {
            vec![]
        };
        roots.dedup();
        (Some(exceptional), roots)
    } else {
        (None, vec![])
    };

    Ok(ClassCertificate {
        verdict,
        scalar_part: scalar,
        deltas,
        exceptional_poly,
        exceptional_roots,
        monomial_basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{parse_ratfunc, ratio};
    use crate::shift::VermaContext;
    use std::collections::BTreeMap;

    fn sym_op(terms: Vec<(i64, &str)>) -> ShiftOperator {
        let terms = terms
            .into_iter()
            .map(|(s, c)| (s, parse_ratfunc(c).unwrap(), BTreeMap::new()))
            .collect();
        ShiftOperator::from_terms(VermaContext::symbolic(), terms).unwrap()
    }

    #[test]
    fn degree_rule_examples() {
        // e1 term (s=-1, c=n(n-1+2h)): delta = +1, unbounded
        let a = sym_op(vec![(-1, "n*(n-1+2*h)")]);
        let (d, v) = classify_term(a.term_at(-1).unwrap(), false);
        assert_eq!((d, v), (1, Verdict::Unbounded));

        // f-1 term: delta = 0, bounded not compact
        let b = sym_op(vec![(1, "1/(n+2*h)")]);
        let (d, v) = classify_term(b.term_at(1).unwrap(), false);
        assert_eq!((d, v), (0, Verdict::BoundedNotCompact));

        // [P,Q] diagonal: delta = -2, trace class, exceptional h = 1/2
        let c = sym_op(vec![(0, "(2*h-1)/((n+2*h)*(n-1+2*h))")]);
        let (d, v) = classify_term(c.term_at(0).unwrap(), false);
        assert_eq!((d, v), (-2, Verdict::TraceClass));
        let cert = certify(&c, false).unwrap();
        assert_eq!(cert.verdict, Verdict::TraceClass);
        assert_eq!(cert.exceptional_roots, vec![ratio(1, 2)]);
    }

    #[test]
    fn certify_zero_and_identity() {
        let z = ShiftOperator::zero(VermaContext::symbolic());
        assert_eq!(certify(&z, false).unwrap().verdict, Verdict::Zero);

        let id = ShiftOperator::identity(VermaContext::symbolic());
        let plain = certify(&id, false).unwrap();
        assert_eq!(plain.verdict, Verdict::BoundedNotCompact);
        let modded = certify(&id, true).unwrap();
        assert_eq!(modded.verdict, Verdict::Zero);
        assert_eq!(modded.scalar_part, Some(RatFunc::one()));
    }

    #[test]
    fn scalar_part_examples() {
        // (2n+2h+1)/(2n) -> 1  (pole at n=0 shielded to make a valid operator)
        let mut shield = BTreeMap::new();
        shield.insert(0u32, RatFunc::zero());
        let a = ShiftOperator::from_terms(
            VermaContext::symbolic(),
            vec![(0, parse_ratfunc("(2*n+2*h+1)/(2*n)").unwrap(), shield)],
        )
        .unwrap();
        assert_eq!(scalar_part(&a), Some(RatFunc::one()));
        // 1/(n+2h) -> 0
        let b = sym_op(vec![(0, "1/(n+2*h)")]);
        assert_eq!(scalar_part(&b), Some(RatFunc::zero()));
        // pure off-diagonal -> none
        let c = sym_op(vec![(-1, "n")]);
        assert_eq!(scalar_part(&c), None);
        // unbounded diagonal -> none
        let d = sym_op(vec![(0, "n+h")]);
        assert_eq!(scalar_part(&d), None);
    }

    #[test]
    fn adjoint_invariance_of_verdict() {
        let ops = vec![
            sym_op(vec![(-1, "n*(n-1+2*h)")]),
            sym_op(vec![(1, "1/(n+2*h)")]),
            sym_op(vec![(0, "(2*h-1)/((n+2*h)*(n-1+2*h))")]),
        ];
        for a in ops {
            let ca = certify(&a, false).unwrap();
            let cb = certify(&a.adjoint().unwrap(), false).unwrap();
            assert_eq!(ca.verdict, cb.verdict);
            let mut da: Vec<i64> = ca.deltas.iter().map(|(_, d)| *d).collect();
            let mut db: Vec<i64> = cb.deltas.iter().map(|(_, d)| *d).collect();
            da.sort();
            db.sort();
            assert_eq!(da, db);
        }
    }

    #[test]
    fn non_unitarizable_monomial_fallback() {
        let ctx = VermaContext::numeric(ratio(-1, 4)).unwrap();
        let op = ShiftOperator::from_terms(
            ctx,
            vec![(1, parse_ratfunc("1/(n+2*h)").unwrap(), BTreeMap::new())],
        )
        .unwrap();
        let cert = certify(&op, false).unwrap();
        assert!(cert.monomial_basis);
        // raw coefficient 1/(n - 1/2): degree -1 -> compact class
        assert_eq!(cert.verdict, Verdict::HilbertSchmidt);
        assert!(cert.verdict.is_compact());
    }

    #[test]
    fn sum_rule_with_cancellation() {
        let a = sym_op(vec![(0, "n+h"), (1, "1/(n+2*h)")]);
        let b = sym_op(vec![(0, "-n-h")]);
        let cert_a = certify(&a, false).unwrap();
        assert_eq!(cert_a.verdict, Verdict::Unbounded);
        let sum = a.add(&b).unwrap();
        // unbounded diagonals cancel exactly; what is left is bounded
        let cert = certify(&sum, false).unwrap();
        assert_eq!(cert.verdict, Verdict::BoundedNotCompact);
    }
}
