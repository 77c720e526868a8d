//! Words in the Mobius subgroup as 2x2 real unimodular matrices, with
//! the Gauss factorization into the one-parameter flows of e_-1, e_0,
//! e_1.
//!
//! The 2x2 realization fixed by matching [E_i, E_j] = (i-j) E_{i+j}:
//! E_1 = [[0,1],[0,0]], E_0 = [[-1/2,0],[0,1/2]], E_-1 = [[0,0],[-1,0]];
//! then exp(a E_-1) exp(b E_0) exp(c E_1) =
//!   [[e^{-b/2}, c e^{-b/2}], [-a e^{-b/2}, e^{b/2} - a c e^{-b/2}]],
//! decomposable exactly when the (0,0) entry is positive.

use super::LabError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusWord {
    pub mat: [[f64; 2]; 2],
}

/// Gauss coordinates (a, b, c) of a decomposable word.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussFactors {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl MobiusWord {
    pub fn new(mat: [[f64; 2]; 2]) -> Result<Self, LabError> {
        let det = mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0];
        if (det - 1.0).abs() > 1e-9 {
            return Err(LabError::NotUnimodular { det });
        }
        Ok(Self { mat })
    }

    pub fn identity() -> Self {
        Self { mat: [[1.0, 0.0], [0.0, 1.0]] }
    }

    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.mat;
        let b = &other.mat;
        let mut out = [[0.0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Self { mat: out }
    }

    pub fn inverse(&self) -> Self {
        let m = &self.mat;
        Self { mat: [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]] }
    }

    /// Gauss factorization; defined on the neighborhood with positive
    /// upper-left entry. The reconstruction is validated to 1e-12.
    pub fn gauss(&self) -> Result<GaussFactors, LabError> {
        let m = &self.mat;
        if m[0][0] <= 0.0 {
            return Err(LabError::GaussNotDecomposable);
        }
        let b = -2.0 * m[0][0].ln();
        let c = m[0][1] / m[0][0];
        let a = -m[1][0] / m[0][0];
        let f = GaussFactors { a, b, c };
        let rec = reconstruct(&f);
        let err = (0..2)
            .flat_map(|r| (0..2).map(move |c| (r, c)))
            .map(|(r, c)| (rec.mat[r][c] - m[r][c]).abs())
            .fold(0.0f64, f64::max);
        if err > 1e-12 * (1.0 + one_inf_norm(m)) {
            return Err(LabError::GaussNotDecomposable);
        }
        Ok(f)
    }

    /// Rotation by the diagonal flow: exp(b E_0).
    pub fn dilation(b: f64) -> Self {
        Self { mat: [[(-b / 2.0).exp(), 0.0], [0.0, (b / 2.0).exp()]] }
    }

    pub fn raise(c: f64) -> Self {
        Self { mat: [[1.0, c], [0.0, 1.0]] }
    }

    pub fn lower(a: f64) -> Self {
        Self { mat: [[1.0, 0.0], [-a, 1.0]] }
    }
}

fn one_inf_norm(m: &[[f64; 2]; 2]) -> f64 {
    m.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max)
}

pub fn reconstruct(f: &GaussFactors) -> MobiusWord {
    MobiusWord::lower(f.a)
        .compose(&MobiusWord::dilation(f.b))
        .compose(&MobiusWord::raise(f.c))
}

/// The 2x2 triple realizing the bracket relations (kept as data so the
/// tests can confirm the bracket matching that fixed it).
pub const E1: [[f64; 2]; 2] = [[0.0, 1.0], [0.0, 0.0]];
pub const E0: [[f64; 2]; 2] = [[-0.5, 0.0], [0.0, 0.5]];
pub const EM1: [[f64; 2]; 2] = [[0.0, 0.0], [-1.0, 0.0]];
