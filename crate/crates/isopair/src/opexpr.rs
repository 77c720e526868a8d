//! Small expression language for naming shift operators on the command
//! line: generators `e(k)` / `f(k)`, `id`, scalars (rationals and `h`),
//! `*` for composition/scaling, `+`/`-`, `comm(A,B)`, `adj(A)` and
//! `dev(i,j)`.

use crate::exact::{rat, ratio, RatFunc};
use crate::shift::{ShiftError, ShiftOperator, VermaContext};
use crate::verma::{rep_generator, witt_deviation, Family};

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum OpExprError {
    #[error("syntax error at byte {0}: {1}")]
    Syntax(usize, String),
    #[error("cannot add a scalar to an operator")]
    MixedAddition,
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(RatFunc),
    Op(ShiftOperator),
}

pub fn parse_operator(text: &str, ctx: &VermaContext) -> Result<ShiftOperator, OpExprError> {
    let mut p = P { text: text.as_bytes(), pos: 0, ctx };
    p.ws();
    let v = p.expr()?;
    p.ws();
    if p.pos != p.text.len() {
        return Err(OpExprError::Syntax(p.pos, "trailing input".into()));
    }
    match v {
        Value::Op(op) => Ok(op),
        Value::Scalar(s) => {
            Ok(ShiftOperator::identity(ctx.clone()).scale(&s)?)
        }
    }
}

struct P<'a> {
    text: &'a [u8],
    pos: usize,
    ctx: &'a VermaContext,
}

impl<'a> P<'a> {
    fn ws(&mut self) {
        while self.text.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.text.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, OpExprError> {
        Err(OpExprError::Syntax(self.pos, msg.into()))
    }

    fn expr(&mut self) -> Result<Value, OpExprError> {
        let mut acc = self.term()?;
        loop {
            self.ws();
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = add(acc, rhs, self.ctx)?;
            } else if self.eat(b'-') {
                let rhs = neg(self.term()?, self.ctx)?;
                acc = add(acc, rhs, self.ctx)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value, OpExprError> {
        let mut acc = self.factor()?;
        loop {
            self.ws();
            if self.eat(b'*') {
                let rhs = self.factor()?;
                acc = mul(acc, rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Value, OpExprError> {
        self.ws();
        if self.eat(b'-') {
            return neg(self.factor()?, self.ctx);
        }
        if self.eat(b'(') {
            let v = self.expr()?;
            if !self.eat(b')') {
                return self.err("expected `)`");
            }
            return Ok(v);
        }
        let c = match self.text.get(self.pos) {
            Some(&c) => c,
            None => return self.err("unexpected end of input"),
        };
        if c.is_ascii_digit() {
            let n = self.int_digits()?;
            if self.eat(b'/') {
                let d = self.int_digits()?;
                if d == 0 {
                    return self.err("zero denominator");
                }
                return Ok(Value::Scalar(RatFunc::constant(ratio(n, d))));
            }
            return Ok(Value::Scalar(RatFunc::constant(rat(n))));
        }
        let ident = self.ident()?;
        match ident.as_str() {
            "h" => Ok(Value::Scalar(RatFunc::var_h())),
            "id" => Ok(Value::Op(ShiftOperator::identity(self.ctx.clone()))),
            "e" | "f" => {
                let k = self.paren_int()?;
                let fam = if ident == "e" { Family::E } else { Family::F };
                Ok(Value::Op(rep_generator(fam, k, self.ctx)?))
            }
            "dev" => {
                if !self.eat(b'(') {
                    return self.err("expected `(`");
                }
                let i = self.signed_int()?;
                if !self.eat(b',') {
                    return self.err("expected `,`");
                }
                let j = self.signed_int()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(Value::Op(witt_deviation(i, j, self.ctx)?))
            }
            "comm" => {
                if !self.eat(b'(') {
                    return self.err("expected `(`");
                }
                let a = self.expr()?;
                if !self.eat(b',') {
                    return self.err("expected `,`");
                }
                let b = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                match (a, b) {
                    (Value::Op(a), Value::Op(b)) => Ok(Value::Op(a.commutator(&b)?)),
                    _ => self.err("comm expects two operators"),
                }
            }
            "adj" => {
                if !self.eat(b'(') {
                    return self.err("expected `(`");
                }
                let a = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                match a {
                    Value::Op(a) => Ok(Value::Op(a.adjoint()?)),
                    _ => self.err("adj expects an operator"),
                }
            }
            other => self.err(&format!("unknown name `{other}`")),
        }
    }

    fn ident(&mut self) -> Result<String, OpExprError> {
        self.ws();
        let start = self.pos;
        while self
            .text
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a name");
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos]).unwrap().to_string())
    }

    fn int_digits(&mut self) -> Result<i64, OpExprError> {
        self.ws();
        let start = self.pos;
        while self.text.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| OpExprError::Syntax(start, "integer out of range".into()))
    }

    fn signed_int(&mut self) -> Result<i64, OpExprError> {
        self.ws();
        if self.eat(b'-') {
            Ok(-self.int_digits()?)
        } else {
            self.int_digits()
        }
    }

    fn paren_int(&mut self) -> Result<i64, OpExprError> {
        if !self.eat(b'(') {
            return self.err("expected `(`");
        }
        let v = self.signed_int()?;
        if !self.eat(b')') {
            return self.err("expected `)`");
        }
        Ok(v)
    }
}

fn add(a: Value, b: Value, _ctx: &VermaContext) -> Result<Value, OpExprError> {
    match (a, b) {
        (Value::Op(a), Value::Op(b)) => Ok(Value::Op(a.add(&b)?)),
        (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(a.add(&b))),
        _ => Err(OpExprError::MixedAddition),
    }
}

fn neg(v: Value, _ctx: &VermaContext) -> Result<Value, OpExprError> {
    Ok(match v {
        Value::Op(op) => Value::Op(op.neg()),
        Value::Scalar(s) => Value::Scalar(s.neg()),
    })
}

fn mul(a: Value, b: Value) -> Result<Value, OpExprError> {
    Ok(match (a, b) {
        (Value::Op(a), Value::Op(b)) => Value::Op(a.compose(&b)?),
        (Value::Scalar(s), Value::Op(op)) | (Value::Op(op), Value::Scalar(s)) => {
            Value::Op(op.scale(&s)?)
        }
        (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a.mul(&b)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_ratfunc;

    fn sym() -> VermaContext {
        VermaContext::symbolic()
    }

    #[test]
    fn parses_generators_and_products() {
        let op = parse_operator("f(-1)", &sym()).unwrap();
        assert_eq!(op.term_at(1).unwrap().stable_coeff(), &parse_ratfunc("1/(n+2*h)").unwrap());
        let op = parse_operator("f(1)*f(-1)", &sym()).unwrap();
        assert_eq!(
            op.term_at(0).unwrap().stable_coeff(),
            &parse_ratfunc("(n+1)/(n+2*h)").unwrap()
        );
        let op = parse_operator("comm(f(1), f(-1))", &sym()).unwrap();
        assert_eq!(
            op.term_at(0).unwrap().stable_coeff(),
            &parse_ratfunc("(2*h-1)/((n+2*h)*(n-1+2*h))").unwrap()
        );
    }

    #[test]
    fn scalars_and_combinations() {
        // 2h * id - e(0) = 2h - (n+h) = h - n
        let op = parse_operator("2*h*id - e(0)", &sym()).unwrap();
        assert_eq!(op.term_at(0).unwrap().stable_coeff(), &parse_ratfunc("h-n").unwrap());
        // dev names the Witt deviations
        let op = parse_operator("dev(1,-1)", &sym()).unwrap();
        assert!(op.is_zero());
        // adjoint
        let op = parse_operator("adj(e(2))", &sym()).unwrap();
        let want = rep_generator(Family::E, -2, &sym()).unwrap();
        assert_eq!(op, want);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_operator("e(", &sym()).is_err());
        assert!(parse_operator("q(1)", &sym()).is_err());
        assert!(parse_operator("1 + e(1)", &sym()).is_err());
        assert!(parse_operator("e(1) extra", &sym()).is_err());
    }
}
