//! Recursive-descent parser for polynomial / rational expressions.
//!
//! Grammar (whitespace-insensitive):
//!   expr    := term (('+'|'-') term)*
//!   term    := unary (('*'|'/') unary)*
//!   unary   := '-' unary | power
//!   power   := primary ('^' UINT)?
//!   primary := UINT | IDENT | '(' expr ')'
//!
//! The same AST serves the canonical rational-function language in
//! (n, h) and the structure-constant coefficient language in index
//! variables.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::mpoly::MPoly;
use super::rational::{rat, Rat};
use super::ratfunc::RatFunc;
use super::ExactError;

#[derive(Clone, Debug)]
pub enum Expr {
    Num(Rat),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

pub fn parse_expr(text: &str) -> Result<Expr, ExactError> {
    let mut p = Parser { text: text.as_bytes(), pos: 0, line: 1, col: 1 };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> ExactError {
        ExactError::Syntax { line: self.line, col: self.col, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.bump();
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ExactError> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            if self.eat(b'+') {
                let rhs = self.term()?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExactError> {
        let mut lhs = self.unary()?;
        loop {
            self.skip_ws();
            if self.eat(b'*') {
                let rhs = self.unary()?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'/') {
                let rhs = self.unary()?;
                lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExactError> {
        self.skip_ws();
        if self.eat(b'-') {
            let inner = self.unary()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExactError> {
        let base = self.primary()?;
        self.skip_ws();
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
            if start == self.pos {
                return Err(self.error("expected exponent digits after '^'"));
            }
            let digits = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
            let exp: u32 =
                digits.parse().map_err(|_| self.error("exponent out of range"))?;
            return Ok(Expr::Pow(Box::new(base), exp));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExactError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let e = self.expr()?;
                self.skip_ws();
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
                let digits = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
                let n: num_bigint::BigInt =
                    digits.parse().map_err(|_| self.error("bad integer literal"))?;
                Ok(Expr::Num(Rat::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
                {
                    self.bump();
                }
                Ok(Expr::Var(
                    std::str::from_utf8(&self.text[start..self.pos]).unwrap().to_string(),
                ))
            }
            _ => Err(self.error("expected a number, variable, or '('")),
        }
    }
}

impl Expr {
    /// Evaluates into a rational function, binding variable names to
    /// n / h via the given pair.
    pub fn to_ratfunc(&self, n_name: &str, h_name: &str) -> Result<RatFunc, ExactError> {
        match self {
            Expr::Num(c) => Ok(RatFunc::constant(c.clone())),
            Expr::Var(v) if v == n_name => Ok(RatFunc::var_n()),
            Expr::Var(v) if v == h_name => Ok(RatFunc::var_h()),
            Expr::Var(v) => Err(ExactError::UnknownVariable(v.clone())),
            Expr::Neg(a) => Ok(a.to_ratfunc(n_name, h_name)?.neg()),
            Expr::Add(a, b) => Ok(a.to_ratfunc(n_name, h_name)?.add(&b.to_ratfunc(n_name, h_name)?)),
            Expr::Sub(a, b) => Ok(a.to_ratfunc(n_name, h_name)?.sub(&b.to_ratfunc(n_name, h_name)?)),
            Expr::Mul(a, b) => Ok(a.to_ratfunc(n_name, h_name)?.mul(&b.to_ratfunc(n_name, h_name)?)),
            Expr::Div(a, b) => a.to_ratfunc(n_name, h_name)?.div(&b.to_ratfunc(n_name, h_name)?),
            Expr::Pow(a, k) => {
                let base = a.to_ratfunc(n_name, h_name)?;
                let mut acc = RatFunc::one();
                for _ in 0..*k {
                    acc = acc.mul(&base);
                }
                Ok(acc)
            }
        }
    }

    /// Evaluates into a polynomial over the named variables. Division is
    /// admitted only by nonzero constants.
    pub fn to_mpoly<const D: usize>(&self, vars: &[&str; D]) -> Result<MPoly<D>, ExactError> {
        match self {
            Expr::Num(c) => Ok(MPoly::constant(c.clone())),
            Expr::Var(v) => {
                let idx = vars.iter().position(|name| name == v);
                match idx {
                    Some(i) => Ok(MPoly::var(i)),
                    None => Err(ExactError::UnknownVariable(v.clone())),
                }
            }
            Expr::Neg(a) => Ok(a.to_mpoly(vars)?.neg()),
            Expr::Add(a, b) => Ok(a.to_mpoly(vars)?.add(&b.to_mpoly(vars)?)),
            Expr::Sub(a, b) => Ok(a.to_mpoly(vars)?.sub(&b.to_mpoly(vars)?)),
            Expr::Mul(a, b) => Ok(a.to_mpoly(vars)?.mul(&b.to_mpoly(vars)?)),
            Expr::Div(a, b) => {
                let den = b.to_mpoly(vars)?;
                let c = den
                    .terms()
                    .next()
                    .filter(|_| den.num_terms() == 1 && den.total_degree() == Some(0))
                    .map(|(_, c)| c.clone())
                    .ok_or(ExactError::NonConstantDivisor)?;
                if c.is_zero() {
                    return Err(ExactError::DivisionByZeroFunction);
                }
                Ok(a.to_mpoly(vars)?.scale(&(rat(1) / c)))
            }
            Expr::Pow(a, k) => Ok(a.to_mpoly(vars)?.pow(*k)),
        }
    }

    /// Evaluates at an integer assignment of the named variables.
    pub fn eval_integers(&self, env: &BTreeMap<String, i64>) -> Result<Rat, ExactError> {
        match self {
            Expr::Num(c) => Ok(c.clone()),
            Expr::Var(v) => env
                .get(v)
                .map(|&x| rat(x))
                .ok_or_else(|| ExactError::UnknownVariable(v.clone())),
            Expr::Neg(a) => Ok(-a.eval_integers(env)?),
            Expr::Add(a, b) => Ok(a.eval_integers(env)? + b.eval_integers(env)?),
            Expr::Sub(a, b) => Ok(a.eval_integers(env)? - b.eval_integers(env)?),
            Expr::Mul(a, b) => Ok(a.eval_integers(env)? * b.eval_integers(env)?),
            Expr::Div(a, b) => {
                let d = b.eval_integers(env)?;
                if d.is_zero() {
                    return Err(ExactError::DivisionByZeroFunction);
                }
                Ok(a.eval_integers(env)? / d)
            }
            Expr::Pow(a, k) => {
                let base = a.eval_integers(env)?;
                let mut acc = rat(1);
                for _ in 0..*k {
                    acc *= &base;
                }
                Ok(acc)
            }
        }
    }
}

/// Parses the canonical (n, h) rational-function language.
pub fn parse_ratfunc(text: &str) -> Result<RatFunc, ExactError> {
    parse_expr(text)?.to_ratfunc("n", "h")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::ratio;

    #[test]
    fn parse_render_round_trip() {
        for src in [
            "(2*h-1)/(n^2+4*n*h-n+4*h^2-2*h)",
            "n+h",
            "0",
            "-n^3+1/2",
            "(n+1)/(n+2*h)",
        ] {
            let f = parse_ratfunc(src).unwrap();
            let rendered = f.render();
            let g = parse_ratfunc(&rendered).unwrap();
            assert_eq!(f, g, "round trip through {rendered}");
        }
    }

    #[test]
    fn canonical_fixed_point() {
        // render(parse(x)) is already canonical: rendering again is identity
        let f = parse_ratfunc("(n^2-1)/(n-1)").unwrap();
        assert_eq!(f.render(), "n+1");
        let once = f.render();
        let twice = parse_ratfunc(&once).unwrap().render();
        assert_eq!(once, twice);
    }

    #[test]
    fn rational_constant_division() {
        let f = parse_ratfunc("3/4").unwrap();
        assert_eq!(f.as_constant().unwrap(), ratio(3, 4));
    }

    #[test]
    fn syntax_error_location() {
        let err = parse_expr("(i - j").unwrap_err();
        match err {
            ExactError::Syntax { col, .. } => assert!(col >= 6),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn mpoly_rejects_variable_division() {
        let e = parse_expr("(i-j)/k").unwrap();
        assert!(matches!(e.to_mpoly(&["i", "j", "k"]), Err(ExactError::NonConstantDivisor)));
        let ok = parse_expr("(i-j)/2").unwrap().to_mpoly(&["i", "j", "k"]).unwrap();
        assert_eq!(ok.eval(&[rat(3), rat(1), rat(0)]), rat(1));
    }
}
