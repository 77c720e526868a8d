//! Exact algebra of the Witt isotopic pair and its composed
//! representations in Verma modules by weighted shift operators, with
//! Hilbert-Schmidt class certification and a floating-point truncation
//! laboratory for the exponentiated claims.
//!
//! Layers, bottom up:
//!
//! * [`exact`] — arbitrary-precision rationals and canonical bivariate
//!   rational functions in the degree variable n and the highest weight h.
//! * [`shift`] — weighted shift operators on the monomial basis
//!   {z^n : n >= 0}, with boundary-corrected composition, Shapovalov
//!   adjoints and dense truncations.
//! * [`iso`] — isotopic pairs as index-parameterized structure constants,
//!   axiom verifiers, the circle (Fourier) model, composite charts.
//! * [`rmatrix`] — the shift maps R_x, their defining-identity,
//!   multiplicativity and modified Yang-Baxter defects.
//! * [`verma`] — the spin-1/spin-2 tensor-operator assignments and all
//!   representation-identity checks and probes.
//! * [`certify`] — operator-class certificates (trace class / HS /
//!   bounded / unbounded) from asymptotic degree analysis.
//! * [`lab`] — floating-point experiments on dense truncations.
//! * [`pairspec`] / [`report`] — the structure-constant input language
//!   and deterministic report emission.

pub mod certify;
pub mod exact;
pub mod iso;
pub mod lab;
pub mod opexpr;
pub mod pairspec;
pub mod report;
pub mod rmatrix;
pub mod shapovalov;
pub mod shift;
pub mod sweep;
pub mod verma;

pub use exact::{Rat, RatFunc};

/// Tool version stamped into reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The bundled Witt pair declaration (golden file).
pub const WITT_IPAIR: &str = include_str!("../data/witt.ipair");
