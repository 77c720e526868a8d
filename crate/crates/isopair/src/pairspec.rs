//! The structure-constant input language.
//!
//! Grammar:
//!   spec   := "pair" IDENT "{" family+ iso+ chart* "}"
//!   family := "family" IDENT "indexed" "by" "Z" ";"
//!   iso    := "iso" "[" gen "," gen "|" gen "]" "=" coeff "*" target ";"
//!   gen    := IDENT "(" IDXVAR ")" ;  target := IDENT "(" affine ")"
//!   coeff  := polynomial in the three index variables, rational literals
//!   affine := linear combination of index variables plus integer constant
//!   chart  := "chart" IDENT "{" (IDENT ":" IDXVAR CMP INT ";")+ "}"
//!   CMP    := ">=" | "<="
//!
//! Parsing into a `PairPresentation` enforces antisymmetry; emission is
//! canonical, so parse -> emit -> parse is a fixed point and the
//! bundled Witt file is byte-stable under the round trip.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::mpoly::TriPoly;
use crate::exact::parse_expr;
use crate::iso::{
    AffineIndex, CompositeChart, IndexWindow, IsoBracket, IsoError, PairPresentation,
};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum PairSpecError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: u32, col: u32, msg: String },
    #[error("at least two families required")]
    TooFewFamilies,
    #[error("exactly two families are supported, found {0}")]
    TooManyFamilies(usize),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("bracket for family `{0}` declared more than once")]
    DuplicateBracket(String),
    #[error("missing iso declaration for family `{0}`")]
    MissingBracket(String),
    #[error("iso slots must share a family distinct from the isotope")]
    BadSlotFamilies,
    #[error("target family must match the slot family")]
    BadTargetFamily,
    #[error("index variables in one iso must be distinct")]
    RepeatedIndexVariable,
    #[error("malformed index expression: {0}")]
    MalformedIndexExpression(String),
    #[error("coefficient is not a polynomial in the index variables: {0}")]
    BadCoefficient(String),
    #[error(transparent)]
    Structure(#[from] IsoError),
}

struct Lexer<'a> {
    text: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Punct(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Self { text: text.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.text.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn next_token(&mut self) -> Result<Spanned, PairSpecError> {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.bump();
        }
        // line comments with '#'
        if self.peek() == Some(b'#') {
            while self.peek().is_some_and(|c| c != b'\n') {
                self.bump();
            }
            return self.next_token();
        }
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek() else {
            return Ok(Spanned { tok: Tok::Eof, line, col });
        };
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                self.bump();
            }
            let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap().to_string();
            return Ok(Spanned { tok: Tok::Ident(s), line, col });
        }
        if c.is_ascii_digit() {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
            let s = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
            let v: i64 = s.parse().map_err(|_| PairSpecError::Syntax {
                line,
                col,
                msg: "integer literal out of range".into(),
            })?;
            return Ok(Spanned { tok: Tok::Int(v), line, col });
        }
        // two-character comparators first
        for (pat, tok) in [(">=", ">="), ("<=", "<=")] {
            if self.text[self.pos..].starts_with(pat.as_bytes()) {
                self.bump();
                self.bump();
                return Ok(Spanned { tok: Tok::Punct(tok), line, col });
            }
        }
        let punct = match c {
            b'{' => "{",
            b'}' => "}",
            b'[' => "[",
            b']' => "]",
            b'(' => "(",
            b')' => ")",
            b',' => ",",
            b'|' => "|",
            b'=' => "=",
            b';' => ";",
            b':' => ":",
            b'*' => "*",
            b'+' => "+",
            b'-' => "-",
            b'/' => "/",
            b'^' => "^",
            _ => {
                return Err(PairSpecError::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character `{}`", c as char),
                })
            }
        };
        self.bump();
        Ok(Spanned { tok: Tok::Punct(punct), line, col })
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos.min(self.toks.len() - 1)].clone();
        if self.pos < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PairSpecError> {
        let t = self.peek();
        Err(PairSpecError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expect_punct(&mut self, p: &'static str) -> Result<(), PairSpecError> {
        if self.peek().tok == Tok::Punct(p) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{p}`"))
        }
    }

    fn expect_ident(&mut self) -> Result<String, PairSpecError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("expected an identifier"),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), PairSpecError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => self.err(format!("expected `{kw}`")),
        }
    }

    fn expect_int(&mut self) -> Result<i64, PairSpecError> {
        // optional unary minus
        if self.peek().tok == Tok::Punct("-") {
            self.bump();
            match self.peek().tok.clone() {
                Tok::Int(v) => {
                    self.bump();
                    Ok(-v)
                }
                _ => self.err("expected an integer"),
            }
        } else {
            match self.peek().tok.clone() {
                Tok::Int(v) => {
                    self.bump();
                    Ok(v)
                }
                _ => self.err("expected an integer"),
            }
        }
    }

    /// Raw token text until a depth-0 `;`, split at the last depth-0 `*`.
    fn rhs_split(&mut self) -> Result<(String, String), PairSpecError> {
        let mut open_stack: Vec<(u32, u32)> = Vec::new();
        let mut parts: Vec<String> = Vec::new();
        let mut last_star_at: Option<usize> = None;
        loop {
            let depth = open_stack.len();
            match self.peek().tok.clone() {
                Tok::Eof => {
                    if let Some(&(line, col)) = open_stack.last() {
                        return Err(PairSpecError::Syntax {
                            line,
                            col,
                            msg: "unclosed `(`".into(),
                        });
                    }
                    return self.err("unterminated iso declaration");
                }
                Tok::Punct(";") if depth == 0 => {
                    self.bump();
                    break;
                }
                Tok::Punct("(") => {
                    let t = self.peek();
                    open_stack.push((t.line, t.col));
                    parts.push("(".into());
                    self.bump();
                }
                Tok::Punct(")") => {
                    if open_stack.pop().is_none() {
                        return self.err("unbalanced `)`");
                    }
                    parts.push(")".into());
                    self.bump();
                }
                Tok::Punct("*") if depth == 0 => {
                    last_star_at = Some(parts.len());
                    parts.push("*".into());
                    self.bump();
                }
                Tok::Punct(p) => {
                    parts.push(p.to_string());
                    self.bump();
                }
                Tok::Ident(s) => {
                    parts.push(s);
                    self.bump();
                }
                Tok::Int(v) => {
                    parts.push(v.to_string());
                    self.bump();
                }
            }
        }
        let Some(star) = last_star_at else {
            return self.err("expected `coeff * target` after `=`");
        };
        Ok((parts[..star].join(" "), parts[star + 1..].join(" ")))
    }
}

struct IsoDecl {
    slot_family: String,
    iso_family: String,
    vars: [String; 3],
    coeff_text: String,
    target_text: String,
    line: u32,
    col: u32,
}

struct ChartDecl {
    name: String,
    constraints: Vec<(String, &'static str, i64)>,
}

/// Parses a pair declaration (parse_pair_spec).
pub fn parse_pair_spec(text: &str) -> Result<PairPresentation, PairSpecError> {
    let mut lexer = Lexer::new(text);
    let mut toks = Vec::new();
    loop {
        let t = lexer.next_token()?;
        let eof = t.tok == Tok::Eof;
        toks.push(t);
        if eof {
            break;
        }
    }
    let mut p = Parser { toks, pos: 0 };

    p.expect_keyword("pair")?;
    let name = p.expect_ident()?;
    p.expect_punct("{")?;

    let mut families: Vec<String> = Vec::new();
    while matches!(&p.peek().tok, Tok::Ident(s) if s == "family") {
        p.bump();
        let fam = p.expect_ident()?;
        p.expect_keyword("indexed")?;
        p.expect_keyword("by")?;
        p.expect_keyword("Z")?;
        p.expect_punct(";")?;
        families.push(fam);
    }
    if families.len() < 2 {
        return Err(PairSpecError::TooFewFamilies);
    }
    if families.len() > 2 {
        return Err(PairSpecError::TooManyFamilies(families.len()));
    }

    let mut iso_decls: Vec<IsoDecl> = Vec::new();
    while matches!(&p.peek().tok, Tok::Ident(s) if s == "iso") {
        let at = p.peek().clone();
        p.bump();
        p.expect_punct("[")?;
        let f1 = p.expect_ident()?;
        p.expect_punct("(")?;
        let v1 = p.expect_ident()?;
        p.expect_punct(")")?;
        p.expect_punct(",")?;
        let f2 = p.expect_ident()?;
        p.expect_punct("(")?;
        let v2 = p.expect_ident()?;
        p.expect_punct(")")?;
        p.expect_punct("|")?;
        let f3 = p.expect_ident()?;
        p.expect_punct("(")?;
        let v3 = p.expect_ident()?;
        p.expect_punct(")")?;
        p.expect_punct("]")?;
        p.expect_punct("=")?;
        let (coeff_text, target_text) = p.rhs_split()?;
        if f1 != f2 {
            return Err(PairSpecError::BadSlotFamilies);
        }
        iso_decls.push(IsoDecl {
            slot_family: f1,
            iso_family: f3,
            vars: [v1, v2, v3],
            coeff_text,
            target_text,
            line: at.line,
            col: at.col,
        });
    }

    let mut chart_decls: Vec<ChartDecl> = Vec::new();
    while matches!(&p.peek().tok, Tok::Ident(s) if s == "chart") {
        p.bump();
        let cname = p.expect_ident()?;
        p.expect_punct("{")?;
        let mut constraints = Vec::new();
        while !matches!(p.peek().tok, Tok::Punct("}")) {
            let fam = p.expect_ident()?;
            p.expect_punct(":")?;
            let _idxvar = p.expect_ident()?;
            let cmp = match p.peek().tok {
                Tok::Punct(">=") => ">=",
                Tok::Punct("<=") => "<=",
                _ => return p.err("expected `>=` or `<=`"),
            };
            p.bump();
            let bound = p.expect_int()?;
            p.expect_punct(";")?;
            constraints.push((fam, cmp, bound));
        }
        p.expect_punct("}")?;
        if constraints.is_empty() {
            return Err(PairSpecError::Syntax {
                line: 0,
                col: 0,
                msg: format!("chart `{cname}` has no constraints"),
            });
        }
        chart_decls.push(ChartDecl { name: cname, constraints });
    }

    p.expect_punct("}")?;
    if p.peek().tok != Tok::Eof {
        return p.err("trailing input after the pair declaration");
    }

    // Resolve iso declarations into brackets.
    let family_index = |name: &str| -> Result<usize, PairSpecError> {
        families
            .iter()
            .position(|f| f == name)
            .ok_or_else(|| PairSpecError::UnknownFamily(name.to_string()))
    };
    let mut brackets: [Option<IsoBracket>; 2] = [None, None];
    for decl in &iso_decls {
        let slot = family_index(&decl.slot_family)?;
        let iso = family_index(&decl.iso_family)?;
        if iso != 1 - slot {
            return Err(PairSpecError::BadSlotFamilies);
        }
        if decl.vars[0] == decl.vars[1]
            || decl.vars[0] == decl.vars[2]
            || decl.vars[1] == decl.vars[2]
        {
            return Err(PairSpecError::RepeatedIndexVariable);
        }
        let var_names: [&str; 3] =
            [decl.vars[0].as_str(), decl.vars[1].as_str(), decl.vars[2].as_str()];
        let coeff = parse_expr(&decl.coeff_text)
            .and_then(|e| e.to_mpoly(&var_names))
            .map_err(|e| PairSpecError::Syntax {
                line: decl.line,
                col: decl.col,
                msg: format!("bad coefficient: {e}"),
            })?;
        let (target_family, target) = parse_target(&decl.target_text, &var_names)?;
        if family_index(&target_family)? != slot {
            return Err(PairSpecError::BadTargetFamily);
        }
        if brackets[slot].is_some() {
            return Err(PairSpecError::DuplicateBracket(decl.slot_family.clone()));
        }
        brackets[slot] = Some(IsoBracket::new(slot, coeff, target)?);
    }
    let [b0, b1] = brackets;
    let b0 = b0.ok_or_else(|| PairSpecError::MissingBracket(families[0].clone()))?;
    let b1 = b1.ok_or_else(|| PairSpecError::MissingBracket(families[1].clone()))?;

    let mut charts = Vec::new();
    for decl in chart_decls {
        let mut windows = [IndexWindow::default(), IndexWindow::default()];
        for (fam, cmp, bound) in &decl.constraints {
            let fi = family_index(fam)?;
            let w = match cmp {
                &">=" => IndexWindow { lower: Some(*bound), upper: None },
                _ => IndexWindow { lower: None, upper: Some(*bound) },
            };
            windows[fi] = windows[fi].intersect(&w);
        }
        charts.push(CompositeChart { name: decl.name, windows });
    }

    Ok(PairPresentation {
        name,
        family_names: [families[0].clone(), families[1].clone()],
        brackets: [b0, b1],
        charts,
    })
}

/// `IDENT ( affine )` with integer-affine validation.
fn parse_target(
    text: &str,
    vars: &[&str; 3],
) -> Result<(String, AffineIndex), PairSpecError> {
    let text = text.trim();
    let open = text
        .find('(')
        .ok_or_else(|| PairSpecError::MalformedIndexExpression(text.to_string()))?;
    if !text.ends_with(')') {
        return Err(PairSpecError::MalformedIndexExpression(text.to_string()));
    }
    let fam = text[..open].trim().to_string();
    let inner = &text[open + 1..text.len() - 1];
    let poly = parse_expr(inner)
        .and_then(|e| e.to_mpoly(vars))
        .map_err(|e| PairSpecError::MalformedIndexExpression(format!("{inner}: {e}")))?;
    if poly.total_degree().unwrap_or(0) > 1 {
        return Err(PairSpecError::MalformedIndexExpression(format!(
            "`{inner}` is not affine"
        )));
    }
    let pick = |exp: [u32; 3]| -> Result<i64, PairSpecError> {
        let c = poly.coeff(&exp);
        if c.is_zero() {
            return Ok(0);
        }
        if !c.denom().is_one() {
            return Err(PairSpecError::MalformedIndexExpression(format!(
                "`{inner}` has non-integer coefficients"
            )));
        }
        num_traits::ToPrimitive::to_i64(c.numer()).ok_or_else(|| {
            PairSpecError::MalformedIndexExpression(format!("`{inner}` coefficient overflow"))
        })
    };
    let target = AffineIndex {
        ci: pick([1, 0, 0])?,
        cj: pick([0, 1, 0])?,
        ck: pick([0, 0, 1])?,
        c0: pick([0, 0, 0])?,
    };
    Ok((fam, target))
}

/// Canonical re-emission; `parse(emit(parse(x))) == parse(x)` and the
/// output is a byte fixed point of parse-then-emit.
pub fn emit_pair_spec(p: &PairPresentation) -> String {
    let mut out = String::new();
    out.push_str(&format!("pair {} {{\n", p.name));
    for fam in &p.family_names {
        out.push_str(&format!("  family {} indexed by Z;\n", fam));
    }
    for slot in 0..2usize {
        let b = p.bracket_for(slot);
        let fam = &p.family_names[slot];
        let iso = &p.family_names[1 - slot];
        out.push_str(&format!(
            "  iso [{fam}(i), {fam}(j) | {iso}(k)] = ({}) * {}({});\n",
            render_tripoly(&b.coeff),
            fam,
            b.target.render(["i", "j", "k"]),
        ));
    }
    for chart in &p.charts {
        out.push_str(&format!("  chart {} {{", chart.name));
        for (fi, w) in chart.windows.iter().enumerate() {
            if let Some(l) = w.lower {
                out.push_str(&format!(" {}: i >= {};", p.family_names[fi], l));
            }
            if let Some(u) = w.upper {
                out.push_str(&format!(" {}: i <= {};", p.family_names[fi], u));
            }
        }
        out.push_str(" }\n");
    }
    out.push_str("}\n");
    out
}

/// Canonical polynomial text over (i, j, k), terms in descending
/// lexicographic order.
pub fn render_tripoly(p: &TriPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let names = ["i", "j", "k"];
    let mut out = String::new();
    let terms: Vec<_> = p.terms().collect();
    for (e, c) in terms.into_iter().rev() {
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || e.iter().all(|&x| x == 0) {
            factors.push(crate::exact::render_rat(&mag));
        }
        for (v, name) in names.iter().enumerate() {
            match e[v] {
                0 => {}
                1 => factors.push(name.to_string()),
                k => factors.push(format!("{}^{}", name, k)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Convenience: the bundled Witt declaration, parsed.
pub fn witt_from_golden() -> PairPresentation {
    parse_pair_spec(crate::WITT_IPAIR).expect("bundled witt.ipair parses")
}
