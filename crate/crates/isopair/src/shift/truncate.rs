//! Dense truncations of shift operators.
//!
//! Floating truncations live in the orthonormal Shapovalov basis
//! u_n = z^n/||z^n|| (entries v(n) sqrt(w(n+s)/w(n)), each computed from
//! exact rationals with a single rounding chain). Exact truncations in
//! the monomial basis are kept fully rational and serve as the
//! dense-matrix oracle for the symbolic algebra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::exact::{rat, rat_to_f64, Rat};
use crate::shapovalov::weight_ratio;

use super::{ShiftError, ShiftOperator};

/// N x N matrix of an operator in the orthonormal basis at numeric h.
#[derive(Clone, Debug)]
pub struct DenseTruncation {
    pub size: usize,
    pub weight: Rat,
    pub entries: DMatrix<Complex64>,
    /// Max |offset| of the truncated operator; rows/columns within this
    /// width of the edge feel the cutoff.
    pub edge: usize,
}

impl DenseTruncation {
    /// CSV rows `row,col,real,imag` (zero entries omitted).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,real,imag\n");
        for r in 0..self.size {
            for c in 0..self.size {
                let v = self.entries[(r, c)];
                if v.re != 0.0 || v.im != 0.0 {
                    out.push_str(&format!("{},{},{:.16e},{:.16e}\n", r, c, v.re, v.im));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut rows = Vec::new();
        for r in 0..self.size {
            for c in 0..self.size {
                let v = self.entries[(r, c)];
                if v.re != 0.0 || v.im != 0.0 {
                    rows.push(format!(
                        "{{\"row\":{},\"col\":{},\"re\":{:.16e},\"im\":{:.16e}}}",
                        r, c, v.re, v.im
                    ));
                }
            }
        }
        format!(
            "{{\"size\":{},\"weight\":\"{}\",\"edge\":{},\"entries\":[{}]}}",
            self.size,
            crate::exact::render_rat(&self.weight),
            self.edge,
            rows.join(",")
        )
    }
}

impl ShiftOperator {
    /// Orthonormal-basis truncation (op_truncate). The operator must be
    /// at (or is first specialized to) the given numeric weight, which
    /// must be unitarizable.
    pub fn truncate(&self, size: usize, h: &Rat) -> Result<DenseTruncation, ShiftError> {
        let op = if self.context().is_symbolic() {
            self.specialize(h)?
        } else if self.context().numeric_weight() == Some(h) {
            self.clone()
        } else {
            return Err(ShiftError::ContextMismatch);
        };
        if !op.context().is_unitarizable() {
            return Err(ShiftError::NonUnitarizable);
        }
        let mut m = DMatrix::<Complex64>::zeros(size, size);
        for t in op.terms() {
            let s = t.offset();
            let ratio = weight_ratio(s);
            for n in 0..size {
                let row = n as i64 + s;
                if row < 0 || row >= size as i64 {
                    continue;
                }
                let v = t
                    .value(n as u32)
                    .as_constant()
                    .expect("numeric-context values are constants");
                if v.is_zero() {
                    continue;
                }
                let r = ratio.eval(&rat(n as i64), h).expect("ratio finite at admissible h");
                // exact v^2 * r, then one conversion and one sqrt
                let mag = rat_to_f64(&(&v * &v * r)).sqrt();
                let signed = if v.is_negative() { -mag } else { mag };
                m[(row as usize, n)] = Complex64::new(signed, 0.0);
            }
        }
        Ok(DenseTruncation {
            size,
            weight: h.clone(),
            entries: m,
            edge: op.max_abs_offset() as usize,
        })
    }

    /// Exact N x N rational matrix in the monomial basis; the
    /// dense-matrix oracle. Requires a numeric context (or specializes).
    pub fn truncate_monomial_exact(
        &self,
        size: usize,
        h: &Rat,
    ) -> Result<Vec<Vec<Rat>>, ShiftError> {
        let op = if self.context().is_symbolic() {
            self.specialize(h)?
        } else if self.context().numeric_weight() == Some(h) {
            self.clone()
        } else {
            return Err(ShiftError::ContextMismatch);
        };
        let mut m = vec![vec![Rat::zero(); size]; size];
        for t in op.terms() {
            let s = t.offset();
            for n in 0..size {
                let row = n as i64 + s;
                if row < 0 || row >= size as i64 {
                    continue;
                }
                let v = t
                    .value(n as u32)
                    .as_constant()
                    .expect("numeric-context values are constants");
                m[row as usize][n] = v;
            }
        }
        Ok(m)
    }
}

/// Exact product of monomial-basis matrices (oracle helper).
pub fn matmul_exact(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}
