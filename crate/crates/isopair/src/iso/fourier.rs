//! The circle model: finite Laurent series in w = e^{it} over Q(i),
//! tagged as functions or vector fields, with the geometric
//! isocommutators computed by exact Lie derivatives.
//!
//! Basis fields: e_k = i e^{ikt} d/dt (vector field, coefficient i w^k)
//! and f_k = e^{ikt} (function). With this normalization both
//! isobrackets come out as (i-j) times the (i+j+k)-th basis element.

use std::collections::BTreeMap;

use crate::exact::GaussRat;

use super::IsoError;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldKind {
    Function,
    VectorField,
}

/// Finite Laurent polynomial in w with Gaussian-rational coefficients.
/// Vector fields store the coefficient of d/dt.
#[derive(Clone, PartialEq, Debug)]
pub struct FourierField {
    pub kind: FieldKind,
    coeffs: BTreeMap<i64, GaussRat>,
}

impl FourierField {
    pub fn zero(kind: FieldKind) -> Self {
        Self { kind, coeffs: BTreeMap::new() }
    }

    /// e_k = i e^{ikt} d/dt.
    pub fn basis_e(k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, GaussRat::i());
        Self { kind: FieldKind::VectorField, coeffs }
    }

    /// f_k = e^{ikt}.
    pub fn basis_f(k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, GaussRat::one());
        Self { kind: FieldKind::Function, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> GaussRat {
        self.coeffs.get(&k).cloned().unwrap_or_else(GaussRat::zero)
    }

    fn add_term(&mut self, k: i64, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(GaussRat::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, IsoError> {
        if self.kind != other.kind {
            return Err(IsoError::KindMismatch);
        }
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.add_term(k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, IsoError> {
        self.add(&other.scale(&GaussRat::from_int(-1)))
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        if c.is_zero() {
            return Self::zero(self.kind);
        }
        Self {
            kind: self.kind,
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v.mul(c))).collect(),
        }
    }

    /// Pointwise product of the coefficient series (kind chosen by caller).
    fn mul_series(&self, other: &Self, kind: FieldKind) -> Self {
        let mut out = Self::zero(kind);
        for (&ka, ca) in &self.coeffs {
            for (&kb, cb) in &other.coeffs {
                out.add_term(ka + kb, ca.mul(cb));
            }
        }
        out
    }

    /// d/dt on the coefficient series: w^k picks up the factor ik.
    fn d_dt(&self) -> Self {
        Self {
            kind: self.kind,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&k, _)| k != 0)
                .map(|(&k, c)| (k, c.mul(&GaussRat::i().scale_int(k))))
                .collect(),
        }
    }

    /// Decomposes into basis elements: e_k for vector fields (dividing
    /// out the i), f_k for functions.
    pub fn into_basis(&self) -> Vec<(i64, GaussRat)> {
        match self.kind {
            FieldKind::Function => self.coeffs.iter().map(|(&k, c)| (k, c.clone())).collect(),
            FieldKind::VectorField => {
                let i = GaussRat::i();
                self.coeffs.iter().map(|(&k, c)| (k, c.div(&i))).collect()
            }
        }
    }
}

/// Lie derivative of a function along a vector field: L_v(f) = g df/dt
/// for v = g d/dt.
fn lie_derivative(v: &FourierField, f: &FourierField) -> FourierField {
    debug_assert_eq!(v.kind, FieldKind::VectorField);
    debug_assert_eq!(f.kind, FieldKind::Function);
    v.mul_series(&f.d_dt(), FieldKind::Function)
}

/// [v1, v2] = (g1 g2' - g2 g1') d/dt.
fn field_bracket(v1: &FourierField, v2: &FourierField) -> FourierField {
    v1.mul_series(&v2.d_dt(), FieldKind::VectorField)
        .sub(&v2.mul_series(&v1.d_dt(), FieldKind::VectorField))
        .expect("same kind")
}

/// Geometric isocommutators on the circle (geometric_isobracket):
///   [v1, v2]_f = L_{v1}(f) v2 - L_{v2}(f) v1 + f [v1, v2]
///   [f1, f2]_v = L_v(f2) f1 - L_v(f1) f2
pub fn geometric_isobracket(
    a1: &FourierField,
    a2: &FourierField,
    iso: &FourierField,
) -> Result<FourierField, IsoError> {
    if a1.kind != a2.kind {
        return Err(IsoError::KindMismatch);
    }
    match (a1.kind, iso.kind) {
        (FieldKind::VectorField, FieldKind::Function) => {
            let t1 = a2.scale_series(&lie_derivative(a1, iso));
            let t2 = a1.scale_series(&lie_derivative(a2, iso));
            let t3 = field_bracket(a1, a2).scale_series(iso);
            t1.sub(&t2)?.add(&t3)
        }
        (FieldKind::Function, FieldKind::VectorField) => {
            let t1 = a1.mul_series(&lie_derivative(iso, a2), FieldKind::Function);
            let t2 = a2.mul_series(&lie_derivative(iso, a1), FieldKind::Function);
            t1.sub(&t2)
        }
        _ => Err(IsoError::KindMismatch),
    }
}

impl FourierField {
    /// Multiplies this field's coefficient series by a function's series,
    /// keeping this field's kind.
    fn scale_series(&self, f: &FourierField) -> Self {
        self.mul_series(f, self.kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn vector_field_bracket_is_witt() {
        // [e_a, e_b] = (a-b) e_{a+b}
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                let lhs = field_bracket(&FourierField::basis_e(a), &FourierField::basis_e(b));
                let want = FourierField::basis_e(a + b).scale(&GaussRat::from_int(a - b));
                assert_eq!(lhs, want, "[e_{a}, e_{b}]");
            }
        }
    }

    #[test]
    fn geometric_brackets_match_structure_constants() {
        for a in -3..=3i64 {
            for b in -3..=3i64 {
                for c in -3..=3i64 {
                    let ee = geometric_isobracket(
                        &FourierField::basis_e(a),
                        &FourierField::basis_e(b),
                        &FourierField::basis_f(c),
                    )
                    .unwrap();
                    let want =
                        FourierField::basis_e(a + b + c).scale(&GaussRat::from_int(a - b));
                    assert_eq!(ee, want, "[e_{a}, e_{b}]_f{c}");

                    let ff = geometric_isobracket(
                        &FourierField::basis_f(a),
                        &FourierField::basis_f(b),
                        &FourierField::basis_e(c),
                    )
                    .unwrap();
                    let want =
                        FourierField::basis_f(a + b + c).scale(&GaussRat::from_int(a - b));
                    assert_eq!(ff, want, "[f_{a}, f_{b}]_e{c}");
                }
            }
        }
    }

    #[test]
    fn self_bracket_vanishes() {
        let v = FourierField::basis_e(2)
            .add(&FourierField::basis_e(-1).scale(&GaussRat::new(rat(1), rat(2))))
            .unwrap();
        let f = FourierField::basis_f(1);
        assert!(geometric_isobracket(&v, &v, &f).unwrap().is_zero());
    }

    #[test]
    fn kind_mismatch_is_refused() {
        let e = FourierField::basis_e(1);
        let f = FourierField::basis_f(1);
        assert!(geometric_isobracket(&e, &f, &f).is_err());
        assert!(geometric_isobracket(&e, &e, &e).is_err());
    }

    #[test]
    fn basis_decomposition() {
        let v = FourierField::basis_e(3).scale(&GaussRat::from_int(5));
        let basis = v.into_basis();
        assert_eq!(basis, vec![(3, GaussRat::from_int(5))]);
    }
}
