//! Weighted shift operators on the Verma monomial basis {z^n : n >= 0}.
//!
//! A term (s, c) maps z^n to c(n) z^{n+s}. The normative semantics of
//! every operator is the boundary table together with the stable
//! rational coefficient: the effective value at n is the boundary entry
//! when present, the stable coefficient otherwise, and 0 whenever
//! n + s < 0. Composition is 0-absorbing — if the first-applied factor
//! sends z^n to 0, so does the product, even where the canonical stable
//! form of the product would say otherwise (0/0 cancellations). Every
//! algebra operation recomputes a minimal boundary table by scanning a
//! provably sufficient low-degree range, so structural equality of
//! operators is semantic equality.

pub mod truncate;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exact::rational::is_nonpositive_integer;
use crate::exact::{rat, Rat, RatFunc, UPoly};
use crate::exact::gcd::to_recursive;
use crate::shapovalov::weight_ratio;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ShiftError {
    #[error("operators built over different Verma contexts")]
    ContextMismatch,
    #[error("inadmissible weight h = {0}: 2h is a nonpositive integer")]
    InadmissibleWeight(Rat),
    #[error("coefficient has an unshielded pole at degree n = {n}")]
    PoleAtDegree { n: u32 },
    #[error("effective value at degree n = {n} has a pole at weight h = {h}")]
    WeightPole { n: u32, h: Rat },
    #[error("nonzero value at degree n = {n} would map below degree 0")]
    AnnihilationViolation { n: u32 },
    #[error("adjoint requires a unitarizable context (h > 0)")]
    NonUnitarizable,
    #[error("expected a diagonal operator")]
    NotDiagonal,
    #[error("scaling function depends on n")]
    ScaleDependsOnN,
    #[error("duplicate term offset {0}")]
    DuplicateOffset(i64),
    #[error("boundary value at n = {n} depends on n")]
    BoundaryDependsOnN { n: u32 },
    #[error(transparent)]
    Exact(#[from] crate::exact::ExactError),
}

/// The highest weight: symbolic (generic, unitarizable assumed) or a
/// fixed rational value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Weight {
    Symbolic,
    Numeric(Rat),
}

/// Verma-module context: the weight plus the admissibility and
/// unitarizability predicates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VermaContext {
    weight: Weight,
}

impl VermaContext {
    pub fn symbolic() -> Self {
        Self { weight: Weight::Symbolic }
    }

    /// Admissible numeric weight: 2h must not be a nonpositive integer.
    pub fn numeric(h: Rat) -> Result<Self, ShiftError> {
        if is_nonpositive_integer(&(&h + &h)) {
            return Err(ShiftError::InadmissibleWeight(h));
        }
        Ok(Self { weight: Weight::Numeric(h) })
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn numeric_weight(&self) -> Option<&Rat> {
        match &self.weight {
            Weight::Numeric(h) => Some(h),
            Weight::Symbolic => None,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self.weight, Weight::Symbolic)
    }

    /// Unitarizable: h > 0. A symbolic context is treated as generic
    /// h > 0.
    pub fn is_unitarizable(&self) -> bool {
        match &self.weight {
            Weight::Symbolic => true,
            Weight::Numeric(h) => h.is_positive(),
        }
    }
}

/// One weighted shift term: image degree n + offset.
#[derive(Clone, PartialEq, Debug)]
pub struct ShiftTerm {
    offset: i64,
    stable: RatFunc,
    boundary: BTreeMap<u32, RatFunc>,
}

impl ShiftTerm {
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn stable_coeff(&self) -> &RatFunc {
        &self.stable
    }

    pub fn boundary(&self) -> &BTreeMap<u32, RatFunc> {
        &self.boundary
    }

    /// Smallest n0 from which the stable coefficient is authoritative.
    pub fn threshold(&self) -> u32 {
        let from_boundary = self.boundary.keys().next_back().map_or(0, |k| k + 1);
        let from_offset = if self.offset < 0 { (-self.offset) as u32 } else { 0 };
        from_boundary.max(from_offset)
    }

    /// Effective value at degree n: a rational function of h alone
    /// (a constant in numeric contexts). Total once validation passed.
    pub fn value(&self, n: u32) -> RatFunc {
        if let Some(v) = self.boundary.get(&n) {
            return v.clone();
        }
        if (n as i64) + self.offset < 0 {
            return RatFunc::zero();
        }
        self.stable.subst_n(&rat(n as i64)).expect("validated term has shielded poles")
    }

    fn is_zero(&self) -> bool {
        self.stable.is_zero() && self.boundary.is_empty()
    }

    /// Validates and canonicalizes a raw term. Returns None for the zero
    /// term. Augments annihilation zeros, checks poles are shielded,
    /// and minimizes the boundary table.
    fn validated(
        offset: i64,
        stable: RatFunc,
        mut boundary: BTreeMap<u32, RatFunc>,
    ) -> Result<Option<ShiftTerm>, ShiftError> {
        for (&n, v) in &boundary {
            if !v.is_free_of_n() {
                return Err(ShiftError::BoundaryDependsOnN { n });
            }
        }
        // Annihilation range: effective value must vanish for n + s < 0.
        if offset < 0 {
            for n in 0..(-offset) as u32 {
                match boundary.get(&n) {
                    Some(v) if !v.is_zero() => {
                        return Err(ShiftError::AnnihilationViolation { n });
                    }
                    Some(_) => {}
                    None => {
                        let natural = stable.subst_n(&rat(n as i64)).ok();
                        if natural.map_or(true, |v| !v.is_zero()) {
                            boundary.insert(n, RatFunc::zero());
                        }
                    }
                }
            }
        }
        // Unshielded genuine poles are inadmissible.
        for n in genuine_nonneg_poles(&stable) {
            if !boundary.contains_key(&n) {
                return Err(ShiftError::PoleAtDegree { n });
            }
        }
        // Minimality: drop entries that agree with the stable value.
        boundary.retain(|&n, v| match stable.subst_n(&rat(n as i64)) {
            Ok(sv) => {
                if (n as i64) + offset < 0 {
                    // keep only if the natural value fails to vanish
                    !sv.is_zero()
                } else {
                    *v != sv
                }
            }
            Err(_) => true,
        });
        let term = ShiftTerm { offset, stable, boundary };
        Ok(if term.is_zero() { None } else { Some(term) })
    }

    /// Canonical text: `offset s: coeff [n=..: v, ..]`.
    pub fn render(&self) -> String {
        let mut out = format!("offset {}: {}", self.offset, self.stable.render());
        if !self.boundary.is_empty() {
            let entries: Vec<String> =
                self.boundary.iter().map(|(n, v)| format!("n={}: {}", n, v.render())).collect();
            out.push_str(&format!(" [{}]", entries.join(", ")));
        }
        out
    }
}

/// A finite sum of weighted shift terms with distinct offsets.
#[derive(Clone, PartialEq, Debug)]
pub struct ShiftOperator {
    ctx: VermaContext,
    terms: BTreeMap<i64, ShiftTerm>,
}

impl ShiftOperator {
    pub fn zero(ctx: VermaContext) -> Self {
        Self { ctx, terms: BTreeMap::new() }
    }

    pub fn identity(ctx: VermaContext) -> Self {
        Self::from_terms(ctx, vec![(0, RatFunc::one(), BTreeMap::new())])
            .expect("identity is valid")
    }

    /// Builds an operator from raw term data (op_make).
    pub fn from_terms(
        ctx: VermaContext,
        terms: Vec<(i64, RatFunc, BTreeMap<u32, RatFunc>)>,
    ) -> Result<Self, ShiftError> {
        let mut map = BTreeMap::new();
        for (offset, stable, boundary) in terms {
            let stable = Self::bind_weight(&ctx, stable)?;
            let boundary = boundary
                .into_iter()
                .map(|(n, v)| Ok((n, Self::bind_weight(&ctx, v)?)))
                .collect::<Result<BTreeMap<_, _>, ShiftError>>()?;
            if let Some(term) = ShiftTerm::validated(offset, stable, boundary)? {
                if map.insert(offset, term).is_some() {
                    return Err(ShiftError::DuplicateOffset(offset));
                }
            }
        }
        Ok(Self { ctx, terms: map })
    }

    /// In numeric contexts coefficients are stored with h substituted.
    fn bind_weight(ctx: &VermaContext, f: RatFunc) -> Result<RatFunc, ShiftError> {
        match ctx.numeric_weight() {
            None => Ok(f),
            Some(h) => Ok(f.subst_h(h)?),
        }
    }

    pub fn context(&self) -> &VermaContext {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = &ShiftTerm> {
        self.terms.values()
    }

    pub fn term_at(&self, offset: i64) -> Option<&ShiftTerm> {
        self.terms.get(&offset)
    }

    pub fn offsets(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs_offset(&self) -> u32 {
        self.terms.keys().map(|s| s.unsigned_abs() as u32).max().unwrap_or(0)
    }

    /// Effective value of the offset-s term at degree n (op_value);
    /// zero when no such term exists. Never fails.
    pub fn value(&self, offset: i64, n: u32) -> RatFunc {
        self.terms.get(&offset).map_or_else(RatFunc::zero, |t| t.value(n))
    }

    fn check_ctx(&self, other: &Self) -> Result<(), ShiftError> {
        if self.ctx != other.ctx {
            return Err(ShiftError::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, ShiftError> {
        self.check_ctx(other)?;
        let mut out = BTreeMap::new();
        let offsets: std::collections::BTreeSet<i64> =
            self.terms.keys().chain(other.terms.keys()).copied().collect();
        for s in offsets {
            let merged = match (self.terms.get(&s), other.terms.get(&s)) {
                (Some(a), None) => Some(a.clone()),
                (None, Some(b)) => Some(b.clone()),
                (Some(a), Some(b)) => {
                    let stable = a.stable.add(&b.stable);
                    let upper = a.threshold().max(b.threshold()).max(den_root_bound(&stable));
                    let mut boundary = BTreeMap::new();
                    for n in 0..upper {
                        let v = a.value(n).add(&b.value(n));
                        record_if_overriding(&mut boundary, &stable, s, n, v);
                    }
                    ShiftTerm::validated(s, stable, boundary)?
                }
                (None, None) => unreachable!(),
            };
            if let Some(t) = merged {
                out.insert(s, t);
            }
        }
        Ok(Self { ctx: self.ctx.clone(), terms: out })
    }

    /// Scales by a rational function of h alone (op_scale).
    pub fn scale(&self, factor: &RatFunc) -> Result<Self, ShiftError> {
        if !factor.is_free_of_n() {
            return Err(ShiftError::ScaleDependsOnN);
        }
        let factor = Self::bind_weight(&self.ctx, factor.clone())?;
        if factor.is_zero() {
            return Ok(Self::zero(self.ctx.clone()));
        }
        let mut out = BTreeMap::new();
        for (s, t) in &self.terms {
            let stable = t.stable.mul(&factor);
            let boundary =
                t.boundary.iter().map(|(n, v)| (*n, v.mul(&factor))).collect();
            if let Some(term) = ShiftTerm::validated(*s, stable, boundary)? {
                out.insert(*s, term);
            }
        }
        Ok(Self { ctx: self.ctx.clone(), terms: out })
    }

    pub fn scale_rat(&self, c: &Rat) -> Self {
        self.scale(&RatFunc::constant(c.clone())).expect("constant scaling is valid")
    }

    pub fn neg(&self) -> Self {
        self.scale_rat(&rat(-1))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ShiftError> {
        self.add(&other.neg())
    }

    /// Operator product self . other (other applied first).
    pub fn compose(&self, other: &Self) -> Result<Self, ShiftError> {
        self.check_ctx(other)?;
        let mut acc = Self::zero(self.ctx.clone());
        for a in self.terms.values() {
            for b in other.terms.values() {
                if let Some(term) = compose_terms(a, b)? {
                    let single =
                        Self { ctx: self.ctx.clone(), terms: [(term.offset, term)].into() };
                    acc = acc.add(&single)?;
                }
            }
        }
        Ok(acc)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self, ShiftError> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// Adjoint with respect to the Shapovalov form. Coefficients here are
    /// real rational, hence self-conjugate; the term (s, c) maps to
    /// (-s, c(m-s) w(m)/w(m-s)).
    pub fn adjoint(&self) -> Result<Self, ShiftError> {
        if !self.ctx.is_unitarizable() {
            return Err(ShiftError::NonUnitarizable);
        }
        let mut out = Self::zero(self.ctx.clone());
        for t in self.terms.values() {
            let s = t.offset;
            let ratio = Self::bind_weight(&self.ctx, weight_ratio(s))?;
            let stable = t.stable.mul(&ratio).shift_n(-s);
            let upper = (t.threshold() as i64 + s)
                .max(s)
                .max(0)
                .max(den_root_bound(&stable) as i64) as u32;
            let mut boundary = BTreeMap::new();
            for m in 0..upper {
                let v = if (m as i64) - s < 0 {
                    RatFunc::zero()
                } else {
                    let n0 = (m as i64 - s) as u32;
                    let rv = ratio
                        .subst_n(&rat(n0 as i64))
                        .expect("weight ratio is finite at admissible degrees");
                    t.value(n0).mul(&rv)
                };
                record_if_overriding(&mut boundary, &stable, -s, m, v);
            }
            if let Some(term) = ShiftTerm::validated(-s, stable, boundary)? {
                let single = Self { ctx: self.ctx.clone(), terms: [(term.offset, term)].into() };
                out = out.add(&single)?;
            }
        }
        Ok(out)
    }

    /// Re-founds the operator at a fixed numeric weight, recomputing
    /// boundary tables (0/0 curves crossing this h become boundary
    /// entries; genuine weight poles are errors).
    pub fn specialize(&self, h: &Rat) -> Result<Self, ShiftError> {
        let ctx = VermaContext::numeric(h.clone())?;
        if let Some(existing) = self.ctx.numeric_weight() {
            if existing == h {
                return Ok(self.clone());
            }
            return Err(ShiftError::ContextMismatch);
        }
        let mut terms = BTreeMap::new();
        for t in self.terms.values() {
            let stable = t.stable.subst_h(h).map_err(|_| ShiftError::InadmissibleWeight(h.clone()))?;
            // scan: old low range plus every n where the symbolic
            // denominator vanishes at this weight
            let den_roots = {
                let upoly = bipoly_at_h(t.stable.denominator(), h);
                nonneg_integer_roots_upoly(&upoly)
            };
            let upper = t
                .threshold()
                .max(den_roots.iter().map(|r| r + 1).max().unwrap_or(0))
                .max(den_root_bound(&stable));
            let mut boundary = BTreeMap::new();
            for n in 0..upper {
                let vh = t.value(n);
                let v = match vh.eval_h_only(h) {
                    Ok(val) => RatFunc::constant(val),
                    Err(_) => return Err(ShiftError::WeightPole { n, h: h.clone() }),
                };
                record_if_overriding(&mut boundary, &stable, t.offset, n, v);
            }
            if let Some(term) = ShiftTerm::validated(t.offset, stable, boundary)? {
                terms.insert(t.offset, term);
            }
        }
        Ok(Self { ctx, terms })
    }

    /// Exact polynomial action: image of sum_n v[n] z^n. Coefficients are
    /// rational functions of h (constants in numeric contexts).
    pub fn apply_vector(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        let mut out: Vec<RatFunc> = Vec::new();
        for (n, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for t in self.terms.values() {
                let target = n as i64 + t.offset;
                if target < 0 {
                    continue;
                }
                let val = t.value(n as u32).mul(coeff);
                if val.is_zero() {
                    continue;
                }
                let target = target as usize;
                if out.len() <= target {
                    out.resize(target + 1, RatFunc::zero());
                }
                out[target] = out[target].add(&val);
            }
        }
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    }

    /// Canonical text rendering, terms by ascending offset.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms.values().map(ShiftTerm::render).collect::<Vec<_>>().join("; ")
    }
}

/// Product of two terms (a applied after b) under 0-absorbing semantics.
fn compose_terms(a: &ShiftTerm, b: &ShiftTerm) -> Result<Option<ShiftTerm>, ShiftError> {
    let s = a.offset + b.offset;
    let stable = a.stable.shift_n(b.offset).mul(&b.stable);
    let shifted_a_den = RatFunc::new(a.stable.denominator().clone(), crate::exact::BiPoly::one())
        .expect("denominator is nonzero")
        .shift_n(b.offset);
    let upper = b
        .threshold()
        .max((a.threshold() as i64 - b.offset).max(0) as u32)
        .max((-b.offset).max(0) as u32)
        .max((-s).max(0) as u32)
        .max(den_root_bound(&stable))
        .max(den_root_bound_poly(shifted_a_den.numerator()));
    let mut boundary = BTreeMap::new();
    for n in 0..upper {
        let vb = b.value(n);
        let v = if vb.is_zero() {
            RatFunc::zero()
        } else {
            // vb != 0 implies n + b.offset >= 0 by annihilation consistency
            let mid = (n as i64 + b.offset) as u32;
            a.value(mid).mul(&vb)
        };
        record_if_overriding(&mut boundary, &stable, s, n, v);
    }
    ShiftTerm::validated(s, stable, boundary)
}

/// Records `v` as a boundary entry at n when the stable form disagrees
/// (or is undefined) there. Entries the validator would drop again are
/// filtered eagerly.
fn record_if_overriding(
    boundary: &mut BTreeMap<u32, RatFunc>,
    stable: &RatFunc,
    offset: i64,
    n: u32,
    v: RatFunc,
) {
    match stable.subst_n(&rat(n as i64)) {
        Ok(sv) => {
            if sv != v {
                boundary.insert(n, v);
            } else if (n as i64) + offset < 0 && !sv.is_zero() {
                boundary.insert(n, v);
            }
        }
        Err(_) => {
            boundary.insert(n, v);
        }
    }
}

/// 1 + the largest genuine nonnegative integer root of the denominator
/// (sound upper bound for boundary scans; 0 when none).
fn den_root_bound(f: &RatFunc) -> u32 {
    den_root_bound_poly(f.denominator())
}

fn den_root_bound_poly(p: &crate::exact::BiPoly) -> u32 {
    genuine_integer_roots(p).into_iter().map(|r| r + 1).max().unwrap_or(0)
}

/// Nonnegative integers n0 with p(n0, h) identically zero in h, i.e.
/// (n - n0) divides p. Such an n0 is a root of every h-degree slice of
/// p, so the first nonzero slice (whose coefficients stay small) yields
/// the candidates and an exact substitution confirms each.
fn genuine_integer_roots(p: &crate::exact::BiPoly) -> Vec<u32> {
    if p.is_zero() || p.degree_in(crate::exact::VAR_N).unwrap_or(0) == 0 {
        return vec![];
    }
    let rec = to_recursive(p);
    let max_h_deg = rec.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    for d in 0..=max_h_deg {
        let slice = UPoly::new(rec.iter().map(|c| c.coeff(d)).collect());
        if slice.is_zero() {
            continue;
        }
        if slice.degree() == Some(0) {
            return vec![];
        }
        return nonneg_integer_roots_upoly(&slice)
            .into_iter()
            .filter(|&n0| {
                // confirm: every h-degree slice vanishes at n0
                let x = rat(n0 as i64);
                (0..=max_h_deg).all(|dd| {
                    UPoly::new(rec.iter().map(|c| c.coeff(dd)).collect()).eval(&x).is_zero()
                })
            })
            .collect();
    }
    vec![]
}

/// Genuine poles: n0 >= 0 with den(n0, h) identically zero in h.
fn genuine_nonneg_poles(f: &RatFunc) -> Vec<u32> {
    genuine_integer_roots(f.denominator())
}

fn bipoly_at_h(p: &crate::exact::BiPoly, h: &Rat) -> UPoly {
    let rec = to_recursive(p);
    UPoly::new(rec.iter().map(|c| c.eval(h)).collect())
}

/// Distinct nonnegative integer roots of a rational-coefficient
/// univariate polynomial: after clearing denominators an integer root
/// divides the trailing coefficient.
fn nonneg_integer_roots_upoly(u: &UPoly) -> Vec<u32> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::One;
    if u.is_zero() || u.degree() == Some(0) {
        return vec![];
    }
    let mut lcm = BigInt::one();
    for c in u.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = u.coeffs().iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    let mut out = Vec::new();
    if low > 0 {
        out.push(0u32);
    }
    let trailing = ints[low].clone();
    let mut d = BigInt::one();
    let mut divs: Vec<BigInt> = Vec::new();
    let abs_trailing = num_traits::Signed::abs(&trailing);
    while &d * &d <= abs_trailing {
        if (&abs_trailing % &d).is_zero() {
            divs.push(d.clone());
            divs.push(&abs_trailing / &d);
        }
        d += 1;
    }
    for cand in divs {
        if let Some(r) = num_traits::ToPrimitive::to_u32(&cand) {
            if u.eval(&rat(r as i64)).is_zero() && !out.contains(&r) {
                out.push(r);
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests;
