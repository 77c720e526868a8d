//! Exact gcd of bivariate polynomials.
//!
//! A `BiPoly` in (n, h) is viewed recursively as a polynomial in n with
//! coefficients in Q[h]; the gcd is content times primitive-part gcd,
//! the latter computed with a pseudo-remainder sequence reduced to
//! primitive parts at every step. Exactness of every division is
//! asserted, since canonical forms downstream rely on it.

use num_traits::{One, Zero};

use super::mpoly::{BiPoly, VAR_H, VAR_N};
use super::rational::Rat;
use super::upoly::UPoly;

/// Recursive view: coefficient of n^i is a univariate polynomial in h.
pub fn to_recursive(p: &BiPoly) -> Vec<UPoly> {
    let deg_n = match p.degree_in(VAR_N) {
        None => return vec![],
        Some(d) => d as usize,
    };
    let deg_h = p.degree_in(VAR_H).unwrap_or(0) as usize;
    let mut rows = vec![vec![Rat::zero(); deg_h + 1]; deg_n + 1];
    for (e, c) in p.terms() {
        rows[e[VAR_N] as usize][e[VAR_H] as usize] = c.clone();
    }
    let mut out: Vec<UPoly> = rows.into_iter().map(UPoly::new).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

pub fn from_recursive(coeffs: &[UPoly]) -> BiPoly {
    let mut p = BiPoly::zero();
    for (i, c) in coeffs.iter().enumerate() {
        for (j, r) in c.coeffs().iter().enumerate() {
            p.add_term([i as u32, j as u32], r.clone());
        }
    }
    p
}

fn rec_is_zero(p: &[UPoly]) -> bool {
    p.is_empty()
}

fn rec_trim(mut p: Vec<UPoly>) -> Vec<UPoly> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rec_scale_coeff(p: &[UPoly], c: &UPoly) -> Vec<UPoly> {
    p.iter().map(|k| k.mul(c)).collect()
}

fn rec_exact_div_coeff(p: &[UPoly], c: &UPoly) -> Vec<UPoly> {
    p.iter().map(|k| k.exact_div(c)).collect()
}

fn rec_sub(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let len = a.len().max(b.len());
    let zero = UPoly::zero();
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        let x = a.get(i).unwrap_or(&zero);
        let y = b.get(i).unwrap_or(&zero);
        out.push(x.sub(y));
    }
    rec_trim(out)
}

/// Content in Q[h]: monic gcd of the n-coefficients.
fn content(p: &[UPoly]) -> UPoly {
    let mut g = UPoly::zero();
    for c in p {
        g = g.gcd(c);
        if g.degree() == Some(0) {
            break;
        }
    }
    if g.is_zero() {
        UPoly::one()
    } else {
        g
    }
}

fn primitive_part(p: &[UPoly]) -> Vec<UPoly> {
    if rec_is_zero(p) {
        return vec![];
    }
    let c = content(p);
    if c.degree() == Some(0) && c.leading().is_some_and(|l| l.is_one()) {
        return p.to_vec();
    }
    rec_exact_div_coeff(p, &c)
}

/// Pseudo-remainder of a by b (in n): lc(b)^(da-db+1) * a mod b.
fn prem(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let db = b.len() - 1;
    let lead_b = b.last().unwrap().clone();
    let mut r = a.to_vec();
    while !rec_is_zero(&r) && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lead_r = r.last().unwrap().clone();
        // r = lc(b)*r - lc(r)*x^(dr-db)*b
        let mut shifted = vec![UPoly::zero(); dr - db];
        shifted.extend(b.iter().map(|c| c.mul(&lead_r)));
        r = rec_sub(&rec_scale_coeff(&r, &lead_b), &shifted);
    }
    r
}

/// Gcd of two bivariate polynomials, normalized so the result's
/// lexicographically leading rational coefficient is 1.
pub fn bipoly_gcd(p: &BiPoly, q: &BiPoly) -> BiPoly {
    if p.is_zero() {
        return normalize_lead(q.clone());
    }
    if q.is_zero() {
        return normalize_lead(p.clone());
    }
    let rp = to_recursive(p);
    let rq = to_recursive(q);
    let (cp, pp) = (content(&rp), primitive_part(&rp));
    let (cq, qq) = (content(&rq), primitive_part(&rq));
    let cg = cp.gcd(&cq);

    let (mut a, mut b) = if pp.len() >= qq.len() { (pp, qq) } else { (qq, pp) };
    while !rec_is_zero(&b) {
        let r = prem(&a, &b);
        a = b;
        b = primitive_part(&r);
    }
    let g = rec_scale_coeff(&primitive_part(&a), &cg);
    normalize_lead(from_recursive(&g))
}

/// Exact division p / d of bivariate polynomials; panics if not exact.
pub fn bipoly_exact_div(p: &BiPoly, d: &BiPoly) -> BiPoly {
    if p.is_zero() {
        return BiPoly::zero();
    }
    let rp = to_recursive(p);
    let rd = to_recursive(d);
    assert!(!rec_is_zero(&rd), "division by zero polynomial");
    if rd.len() == 1 {
        return from_recursive(&rec_exact_div_coeff(&rp, &rd[0]));
    }
    // Pseudo-divide, then strip the introduced lc(d)^k factor.
    let da = rp.len() - 1;
    let db = rd.len() - 1;
    assert!(da >= db, "exact_div: divisor degree exceeds dividend");
    let lead_d = rd.last().unwrap().clone();
    let mut r = rp;
    let mut quo = vec![UPoly::zero(); da - db + 1];
    let mut steps = 0u32;
    while !rec_is_zero(&r) && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lead_r = r.last().unwrap().clone();
        // scale existing quotient and remainder by lc(d), place new term
        quo = quo.iter().map(|c| c.mul(&lead_d)).collect();
        quo[dr - db] = quo[dr - db].add(&lead_r);
        let mut shifted = vec![UPoly::zero(); dr - db];
        shifted.extend(rd.iter().map(|c| c.mul(&lead_r)));
        r = rec_sub(&rec_scale_coeff(&r, &lead_d), &shifted);
        steps += 1;
    }
    assert!(rec_is_zero(&r), "exact_div with nonzero remainder");
    // after k reduction steps the accumulator equals lc(d)^k * true quotient
    let mut denom = UPoly::one();
    for _ in 0..steps {
        denom = denom.mul(&lead_d);
    }
    from_recursive(&rec_exact_div_coeff(&quo, &denom))
}

/// Scales so the lexicographically leading coefficient (n over h) is 1.
pub fn normalize_lead(p: BiPoly) -> BiPoly {
    match p.leading() {
        None => p,
        Some((_, c)) => {
            let inv = Rat::one() / c.clone();
            p.scale(&inv)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn n() -> BiPoly {
        BiPoly::var(VAR_N)
    }
    fn h() -> BiPoly {
        BiPoly::var(VAR_H)
    }

    #[test]
    fn gcd_of_products() {
        // gcd((n+2h)(n+1), (n+2h)(n-1)) = n + 2h
        let common = n().add(&h().scale(&rat(2)));
        let a = common.mul(&n().add(&BiPoly::one()));
        let b = common.mul(&n().sub(&BiPoly::one()));
        let g = bipoly_gcd(&a, &b);
        assert_eq!(g, common);
    }

    #[test]
    fn gcd_coprime_is_constant() {
        let a = n().add(&h());
        let b = n().sub(&h());
        let g = bipoly_gcd(&a, &b);
        assert!(g.is_one());
    }

    #[test]
    fn exact_division_recovers_factor() {
        let a = n().add(&h().scale(&rat(2)));
        let b = n().mul(&n()).sub(&h());
        let prod = a.mul(&b);
        assert_eq!(bipoly_exact_div(&prod, &a), b);
        assert_eq!(bipoly_exact_div(&prod, &b), a);
    }

    #[test]
    fn content_extraction() {
        // h * (n^2 - 1) vs h * (n-1): gcd = h*(n-1)
        let hn = h();
        let a = hn.mul(&n().mul(&n()).sub(&BiPoly::one()));
        let b = hn.mul(&n().sub(&BiPoly::one()));
        let g = bipoly_gcd(&a, &b);
        assert_eq!(g, hn.mul(&n().sub(&BiPoly::one())));
    }
}
