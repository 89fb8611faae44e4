//! Expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? INT)?
//! atom   := INT | 'L' | 'mu(' INT ')' | W<ident> | <var> | '(' expr ')'
//!         | 'A(' INT ',' INT ')/(1-A(' INT ',' INT '))'
//! ```
//!
//! Which atoms and operators are accepted depends on the target: ring
//! elements take `L`, `mu`, `W` symbols; polynomials over `Q` take lowercase
//! variables and division by nonzero constants; series additionally take
//! the factor token `A(nu,m)/(1-A(nu,m))`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::qpoly::QPoly;
use super::ring::RingElem;
use super::series::{FactorKey, RationalSeries};

/// A parse failure at a 1-based character column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.column, self.message)
    }
}

fn err<T>(column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        column,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Punct(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().expect("digits")), col));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^(),".contains(c) {
            out.push((Tok::Punct(c), col));
            i += 1;
        } else {
            return err(col, format!("unexpected character `{c}`"));
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

#[derive(Debug, Clone)]
enum Node {
    Int(BigInt),
    L,
    Mu(u64),
    Named(String),
    Var(String),
    Factor(FactorKey),
    Neg(Box<Spanned>),
    Bin(char, Box<Spanned>, Box<Spanned>),
    Pow(Box<Spanned>, i64),
}

/// Node plus the column it starts at.
#[derive(Debug, Clone)]
struct Spanned {
    node: Node,
    col: usize,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            err(self.col(), format!("expected `{c}`, found {}", self.peek()))
        }
    }

    fn expect_ident(&mut self, name: &str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Ident(name.to_string()) {
            self.bump();
            Ok(())
        } else {
            err(self.col(), format!("expected `{name}`, found {}", self.peek()))
        }
    }

    fn signed_int(&mut self) -> Result<i64, ParseError> {
        let col = self.col();
        let neg = *self.peek() == Tok::Punct('-');
        if neg {
            self.bump();
        }
        match self.bump() {
            (Tok::Int(n), _) => {
                let n = if neg { -n } else { n };
                n.to_i64().ok_or(()).or_else(|_| err(col, "integer out of range"))
            }
            (t, c) => err(c, format!("expected integer, found {t}")),
        }
    }

    fn expr(&mut self) -> Result<Spanned, ParseError> {
        let mut lhs = self.term()?;
        while let Tok::Punct(op @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            lhs = Spanned {
                col: lhs.col,
                node: Node::Bin(op, Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Spanned, ParseError> {
        let mut lhs = self.unary()?;
        while let Tok::Punct(op @ ('*' | '/')) = *self.peek() {
            self.bump();
            let rhs = self.unary()?;
            lhs = Spanned {
                col: lhs.col,
                node: Node::Bin(op, Box::new(lhs), Box::new(rhs)),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Spanned, ParseError> {
        if *self.peek() == Tok::Punct('-') {
            let col = self.col();
            self.bump();
            let inner = self.unary()?;
            return Ok(Spanned {
                col,
                node: Node::Neg(Box::new(inner)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Spanned, ParseError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Punct('^') {
            self.bump();
            let e = self.signed_int()?;
            return Ok(Spanned {
                col: base.col,
                node: Node::Pow(Box::new(base), e),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Spanned, ParseError> {
        let (tok, col) = self.bump();
        let node = match tok {
            Tok::Int(n) => Node::Int(n),
            Tok::Punct('(') => {
                let inner = self.expr()?;
                self.expect(')')?;
                return Ok(Spanned { col, ..inner });
            }
            Tok::Ident(name) if name == "L" => Node::L,
            Tok::Ident(name) if name == "mu" => {
                self.expect('(')?;
                let kcol = self.col();
                let k = self.signed_int()?;
                if k < 1 {
                    return err(kcol, "mu(k) requires k >= 1");
                }
                self.expect(')')?;
                Node::Mu(k as u64)
            }
            Tok::Ident(name) if name == "A" && *self.peek() == Tok::Punct('(') => {
                let key = self.factor_head()?;
                self.expect('/')?;
                self.expect('(')?;
                match self.bump() {
                    (Tok::Int(n), _) if n == BigInt::from(1) => {}
                    (t, c) => return err(c, format!("expected `1`, found {t}")),
                }
                self.expect('-')?;
                let tail_col = self.col();
                self.expect_ident("A")?;
                let again = self.factor_head()?;
                if again != key {
                    return err(tail_col, "factor numerator and denominator disagree");
                }
                self.expect(')')?;
                Node::Factor(key)
            }
            Tok::Ident(name) if name.starts_with('W') => {
                if name.len() == 1 {
                    return err(col, "symbol name missing after `W`");
                }
                Node::Named(name)
            }
            Tok::Ident(name) => Node::Var(name),
            t => return err(col, format!("unexpected {t}")),
        };
        Ok(Spanned { node, col })
    }

    fn factor_head(&mut self) -> Result<FactorKey, ParseError> {
        self.expect('(')?;
        let nu = self.signed_int()?;
        self.expect(',')?;
        let m = self.signed_int()?;
        self.expect(')')?;
        Ok(FactorKey::new(nu, m))
    }
}

// Spans are kept at every level so evaluation errors point to the
// offending sub-expression.
type Tree = Spanned;

trait Target: Sized {
    fn int(n: BigInt) -> Self;
    fn atom(node: &Node) -> Result<Self, String>;
    fn add(a: Self, b: Self) -> Self;
    fn sub(a: Self, b: Self) -> Self;
    fn mul(a: Self, b: Self) -> Self;
    fn neg(a: Self) -> Self;
    fn div(a: Self, b: Self) -> Result<Self, String>;
    fn pow(a: Self, n: i64) -> Result<Self, String>;
}

fn eval<T: Target>(t: &Tree) -> Result<T, ParseError> {
    let wrap = |r: Result<T, String>| r.or_else(|m| err(t.col, m));
    match &t.node {
        Node::Int(n) => Ok(T::int(n.clone())),
        Node::Neg(a) => Ok(T::neg(eval(a)?)),
        Node::Bin(op, a, b) => {
            let (x, y) = (eval(a)?, eval(b)?);
            match op {
                '+' => Ok(T::add(x, y)),
                '-' => Ok(T::sub(x, y)),
                '*' => Ok(T::mul(x, y)),
                _ => wrap(T::div(x, y)),
            }
        }
        Node::Pow(a, n) => wrap(T::pow(eval(a)?, *n)),
        other => wrap(T::atom(other)),
    }
}

fn parse_tree(src: &str) -> Result<Tree, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    if *p.peek() == Tok::End {
        return err(p.col(), "empty expression");
    }
    let t = p.expr()?;
    if *p.peek() != Tok::End {
        return err(p.col(), format!("unexpected {}", p.peek()));
    }
    Ok(t)
}

impl Target for RingElem {
    fn int(n: BigInt) -> Self {
        RingElem::constant(n)
    }
    fn atom(node: &Node) -> Result<Self, String> {
        match node {
            Node::L => Ok(RingElem::l()),
            Node::Mu(k) => Ok(RingElem::mu(*k)),
            Node::Named(s) => Ok(RingElem::named(s)),
            Node::Var(v) => Err(format!("unknown identifier `{v}`")),
            Node::Factor(_) => Err("series factor not allowed here".into()),
            _ => unreachable!("compound nodes handled by eval"),
        }
    }
    fn add(a: Self, b: Self) -> Self {
        &a + &b
    }
    fn sub(a: Self, b: Self) -> Self {
        &a - &b
    }
    fn mul(a: Self, b: Self) -> Self {
        &a * &b
    }
    fn neg(a: Self) -> Self {
        -a
    }
    fn div(_: Self, _: Self) -> Result<Self, String> {
        Err("division is not supported in ring expressions".into())
    }
    fn pow(a: Self, n: i64) -> Result<Self, String> {
        a.pow(n).map_err(|e| e.to_string())
    }
}

impl Target for QPoly {
    fn int(n: BigInt) -> Self {
        QPoly::constant(BigRational::from_integer(n))
    }
    fn atom(node: &Node) -> Result<Self, String> {
        match node {
            Node::Var(v) if v.chars().all(|c| c.is_ascii_lowercase()) => Ok(QPoly::var(v)),
            Node::Var(v) => Err(format!("unknown identifier `{v}`")),
            Node::L => Err("`L` is not allowed here".into()),
            Node::Mu(_) | Node::Named(_) => Err("symbols are not allowed here".into()),
            Node::Factor(_) => Err("series factor not allowed here".into()),
            _ => unreachable!("compound nodes handled by eval"),
        }
    }
    fn add(a: Self, b: Self) -> Self {
        &a + &b
    }
    fn sub(a: Self, b: Self) -> Self {
        &a - &b
    }
    fn mul(a: Self, b: Self) -> Self {
        &a * &b
    }
    fn neg(a: Self) -> Self {
        -&a
    }
    fn div(a: Self, b: Self) -> Result<Self, String> {
        match b.as_constant() {
            Some(c) if !c.is_zero() => Ok(a.scale(&c.recip())),
            Some(_) => Err("division by zero".into()),
            None => Err("division only by constants".into()),
        }
    }
    fn pow(a: Self, n: i64) -> Result<Self, String> {
        if n >= 0 {
            return Ok(a.pow(n as u32));
        }
        let inv = a.inverse_unit().ok_or("non-invertible element")?;
        Ok(inv.pow(n.unsigned_abs() as u32))
    }
}

impl Target for RationalSeries {
    fn int(n: BigInt) -> Self {
        RationalSeries::constant(RingElem::constant(n))
    }
    fn atom(node: &Node) -> Result<Self, String> {
        match node {
            Node::Factor(k) => Ok(RationalSeries::term(RingElem::one(), [*k])),
            other => RingElem::atom(other).map(RationalSeries::constant),
        }
    }
    fn add(a: Self, b: Self) -> Self {
        &a + &b
    }
    fn sub(a: Self, b: Self) -> Self {
        &a - &b
    }
    fn mul(a: Self, b: Self) -> Self {
        &a * &b
    }
    fn neg(a: Self) -> Self {
        -&a
    }
    fn div(_: Self, _: Self) -> Result<Self, String> {
        Err("division is not supported in series expressions".into())
    }
    fn pow(a: Self, n: i64) -> Result<Self, String> {
        if a.is_zero() || a.terms().all(|(f, _)| f.is_empty()) {
            let c = a.terms().next().map(|(_, c)| c.clone()).unwrap_or_default();
            return c
                .pow(n)
                .map(RationalSeries::constant)
                .map_err(|e| e.to_string());
        }
        if n.is_negative() {
            return Err("non-invertible element".into());
        }
        let mut out = RationalSeries::constant(RingElem::one());
        for _ in 0..n {
            out = &out * &a;
        }
        Ok(out)
    }
}

/// Parses an element of `Z[L^±1, mu(k), W...]`.
pub fn parse_ring(src: &str) -> Result<RingElem, ParseError> {
    eval(&parse_tree(src)?)
}

/// Parses a Laurent polynomial over `Q` in lowercase variables.
pub fn parse_qpoly(src: &str) -> Result<QPoly, ParseError> {
    eval(&parse_tree(src)?)
}

/// Parses a rational series written with `A(nu,m)/(1-A(nu,m))` factors.
pub fn parse_series(src: &str) -> Result<RationalSeries, ParseError> {
    eval(&parse_tree(src)?)
}
