//! Exact kernel: arbitrary-precision rationals, sparse multivariate
//! polynomials, canonical bivariate rational functions in (n, h),
//! rational roots, and the expression language.
//!
//! Everything here is pure value arithmetic: no floating point, no
//! global state, freely shareable across threads.

pub mod expr;
pub mod gauss;
pub mod gcd;
pub mod mpoly;
pub mod rational;
pub mod ratfunc;
pub mod roots;
pub mod upoly;

pub use expr::{parse_expr, parse_ratfunc, Expr};
pub use gauss::GaussRat;
pub use mpoly::{BiPoly, MPoly, TriPoly, VAR_H, VAR_N};
pub use rational::{parse_rat, rat, rat_to_f64, ratio, render_rat, Rat};
pub use ratfunc::RatFunc;
pub use roots::rational_roots;
pub use upoly::UPoly;

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by the zero function")]
    DivisionByZeroFunction,
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("pole at n = {n}, h = {h}")]
    Pole { n: Rat, h: Rat },
    #[error("denominator vanishes identically at {var} = {value}")]
    DenominatorVanishesAt { var: &'static str, value: Rat },
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by a non-constant expression in a polynomial context")]
    NonConstantDivisor,
}
