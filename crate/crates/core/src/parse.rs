//! Small expression language shared by every data file.
//!
//! Expressions are sums of products of rationals and symbols with `+ - * / ^`
//! and parentheses. Symbols are resolved by the caller into polynomials, so
//! the same parser reads bracket tables (`-alpha*e2`), polynomial systems
//! (`2*x1*x6 + (1+alpha)*x3*x4`) and multivectors (`e14 - 2*e23`).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{Poly, Q};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Q),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Sym(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Sym(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::parse(
                0,
                format!("unexpected character {c:?} in {s:?}"),
            ));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = if self.eat('-') {
            Expr::Neg(Box::new(self.product()?))
        } else {
            self.eat('+');
            self.product()?
        };
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::parse(0, "exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(Error::parse(0, "exponent must be a non-negative integer")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(Q::from_integer(n)))
            }
            Some(Tok::Sym(s)) => {
                self.pos += 1;
                Ok(Expr::Sym(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(Error::parse(0, "missing ')'"));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.power()?)))
            }
            t => Err(Error::parse(0, format!("unexpected token {t:?}"))),
        }
    }
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr> {
        let mut p = Parser {
            toks: lex(s)?,
            pos: 0,
        };
        if p.toks.is_empty() {
            return Err(Error::parse(0, "empty expression"));
        }
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(Error::parse(0, format!("trailing input in {s:?}")));
        }
        Ok(e)
    }

    /// Evaluates with `resolve` supplying a polynomial for every symbol.
    /// Division is allowed only by nonzero constants.
    pub fn eval(&self, resolve: &dyn Fn(&str) -> Option<Poly>) -> Result<Poly> {
        Ok(match self {
            Expr::Num(q) => Poly::constant(q.clone()),
            Expr::Sym(s) => {
                resolve(s).ok_or_else(|| Error::parse(0, format!("unknown symbol {s:?}")))?
            }
            Expr::Neg(a) => -a.eval(resolve)?,
            Expr::Add(a, b) => a.eval(resolve)? + b.eval(resolve)?,
            Expr::Sub(a, b) => a.eval(resolve)? - b.eval(resolve)?,
            Expr::Mul(a, b) => a.eval(resolve)? * b.eval(resolve)?,
            Expr::Div(a, b) => {
                let d = b.eval(resolve)?;
                if !d.is_constant() || d.is_zero() {
                    return Err(Error::parse(0, "division by a non-constant or zero"));
                }
                a.eval(resolve)?.scale(&(Q::one() / d.constant_term()))
            }
            Expr::Pow(a, e) => a.eval(resolve)?.pow(*e),
        })
    }

    /// All symbol names, in first-occurrence order.
    pub fn symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => {
                if !out.contains(s) {
                    out.push(s.clone())
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }
}

/// Parses `x1..xN` with the given parameters bound to constants.
pub fn parse_poly(s: &str, params: &dyn Fn(&str) -> Option<Q>) -> Result<Poly> {
    Expr::parse(s)?.eval(&|sym| {
        if let Some(i) = coord_index(sym, 'x') {
            return Some(Poly::var(i));
        }
        params(sym).map(Poly::constant)
    })
}

/// `x3` → `Some(2)` for prefix `'x'`; also accepts `e` for basis symbols.
pub fn coord_index(sym: &str, prefix: char) -> Option<usize> {
    let rest = sym.strip_prefix(prefix)?;
    let n: usize = rest.parse().ok()?;
    (n >= 1 && !rest.starts_with('0')).then(|| n - 1)
}

/// Splits on `sep` at parenthesis depth zero.
pub fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Strips a trailing `#` comment and surrounding whitespace.
pub fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

pub(crate) fn at_line<T>(r: Result<T>, line: usize) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{q, qi};

    #[test]
    fn parses_polynomials_with_params() {
        let alpha = q(1, 2);
        let p = parse_poly("(1+alpha)*x3*x4 - 2*x1*x6 + x5^2/2", &|s| {
            (s == "alpha").then(|| alpha.clone())
        })
        .unwrap();
        assert_eq!(p.to_string(), "-2*x1*x6 + 3/2*x3*x4 + 1/2*x5^2");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Expr::parse("x1 +").is_err());
        assert!(Expr::parse("(x1").is_err());
        assert!(parse_poly("x1/x2", &|_| None).is_err());
        assert!(parse_poly("y", &|_| None).is_err());
        assert_eq!(
            parse_poly("-x1^2", &|_| None).unwrap(),
            -Poly::var(0).pow(2)
        );
        assert_eq!(
            parse_poly("- 3", &|_| None).unwrap(),
            Poly::constant(qi(-3))
        );
    }

    #[test]
    fn top_level_split() {
        assert_eq!(split_top("a, f(b, c), d", ','), vec!["a", " f(b, c)", " d"]);
    }
}

/// Relation in a guard atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ne,
    Gt,
    Lt,
}

/// Parameter condition: a disjunction (`or`) of conjunctions (`and`) of
/// atoms `expr = 0`, `expr != 0`, `expr > 0`, `expr < 0` (any right-hand
/// side is moved to the left). The empty guard always holds.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Guard {
    text: String,
    clauses: Vec<Vec<(Expr, Rel)>>,
}

impl Guard {
    pub fn always() -> Self {
        Guard::default()
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "always" {
            return Ok(Guard::always());
        }
        let mut clauses = Vec::new();
        for disj in s.split(" or ") {
            let mut atoms = Vec::new();
            for atom in disj.split(" and ") {
                atoms.push(parse_atom(atom)?);
            }
            clauses.push(atoms);
        }
        Ok(Guard {
            text: s.to_string(),
            clauses,
        })
    }

    pub fn text(&self) -> &str {
        if self.text.is_empty() {
            "always"
        } else {
            &self.text
        }
    }

    pub fn is_always(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn holds(&self, params: &std::collections::BTreeMap<String, Q>) -> Result<bool> {
        if self.clauses.is_empty() {
            return Ok(true);
        }
        for c in &self.clauses {
            let mut ok = true;
            for (e, rel) in c {
                let v = e.eval(&|s| params.get(s).map(|q| Poly::constant(q.clone())))?;
                if !v.is_constant() {
                    return Err(Error::parse(
                        0,
                        format!("guard {:?} is not constant", self.text),
                    ));
                }
                let v = v.constant_term();
                let z = Q::zero();
                ok &= match rel {
                    Rel::Eq => v == z,
                    Rel::Ne => v != z,
                    Rel::Gt => v > z,
                    Rel::Lt => v < z,
                };
            }
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Parses `lhs op rhs` into `(lhs - rhs, op)`.
pub fn parse_atom(s: &str) -> Result<(Expr, Rel)> {
    for (op, rel) in [
        ("!=", Rel::Ne),
        ("=", Rel::Eq),
        (">", Rel::Gt),
        ("<", Rel::Lt),
    ] {
        if let Some((l, r)) = s.split_once(op) {
            let l = Expr::parse(l)?;
            let r = Expr::parse(r)?;
            return Ok((Expr::Sub(Box::new(l), Box::new(r)), rel));
        }
    }
    Err(Error::parse(0, format!("expected a relation in {s:?}")))
}

#[cfg(test)]
mod guard_tests {
    use super::*;
    use crate::exactmath::{q, qi};
    use std::collections::BTreeMap;

    #[test]
    fn guards() {
        let p = BTreeMap::from([
            ("alpha".to_string(), q(-1, 2)),
            ("beta".to_string(), q(-1, 2)),
        ]);
        assert!(Guard::parse("alpha+beta = -1").unwrap().holds(&p).unwrap());
        assert!(!Guard::parse("alpha != beta").unwrap().holds(&p).unwrap());
        assert!(Guard::parse("beta = 1 or alpha = beta and alpha < 0")
            .unwrap()
            .holds(&p)
            .unwrap());
        assert!(Guard::always().holds(&BTreeMap::new()).unwrap());
        assert!(Guard::parse("gamma = 0").unwrap().holds(&p).is_err());
        let _ = qi(0);
    }
}
