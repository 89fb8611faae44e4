//! Laurent polynomials over `Q` in named variables (`u`, `v`, `s`, ...).
//!
//! These are the targets of specialization: Hodge–Deligne images live in
//! `Q[u^±1, v^±1]`, topological data in `Q[s]`.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::symbol::Symbol;

/// Product of variable powers; sorted by name, exponents nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QMonomial(Vec<(String, i64)>);

impl QMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(name: &str, e: i64) -> Self {
        if e == 0 {
            Self::one()
        } else {
            QMonomial(vec![(name.to_string(), e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, i64)>) -> Self {
        let mut map: BTreeMap<String, i64> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_default() += e;
        }
        QMonomial(map.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    pub fn exponent(&self, var: &str) -> i64 {
        self.0
            .iter()
            .find(|(v, _)| v == var)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (&str, i64)> {
        self.0.iter().map(|(v, e)| (v.as_str(), *e))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &QMonomial) -> QMonomial {
        QMonomial::from_pairs(self.0.iter().chain(other.0.iter()).cloned())
    }

    fn inverse(&self) -> QMonomial {
        QMonomial(self.0.iter().map(|(v, e)| (v.clone(), -e)).collect())
    }

    fn pow(&self, n: i64) -> QMonomial {
        if n == 0 {
            return QMonomial::one();
        }
        QMonomial(self.0.iter().map(|(v, e)| (v.clone(), e * n)).collect())
    }

    /// Polynomial divisibility: all exponents of `other` at most ours.
    fn divides(&self, other: &QMonomial) -> bool {
        self.0.iter().all(|(v, e)| other.exponent(v) >= *e)
    }
}

/// Lexicographic with variables in ascending name order.
impl Ord for QMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            let a = self.0.get(i);
            let b = other.0.get(j);
            match (a, b) {
                (None, None) => return Ordering::Equal,
                (Some((_, ea)), None) => return ea.cmp(&0),
                (None, Some((_, eb))) => return 0.cmp(eb),
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(eb),
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for QMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                f.write_str(v)?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QPoly {
    terms: BTreeMap<QMonomial, BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_term(QMonomial::one(), c)
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(name: &str) -> Self {
        Self::from_term(QMonomial::var(name, 1), BigRational::one())
    }

    pub fn from_term(m: QMonomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        QPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Single-term polynomials are the units of the Laurent ring.
    pub fn inverse_unit(&self) -> Option<QPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        Some(QPoly::from_term(m.inverse(), c.recip()))
    }

    fn add_term(&mut self, m: QMonomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    fn mul_term(&self, m: &QMonomial, c: &BigRational) -> QPoly {
        QPoly {
            terms: self.terms.iter().map(|(n, x)| (n.mul(m), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &QMonomial) -> QPoly {
        self.mul_term(m, &BigRational::one())
    }

    pub fn pow(&self, n: u32) -> QPoly {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            return QPoly::from_term(m.pow(n as i64), num_traits::pow(c.clone(), n as usize));
        }
        let mut result = QPoly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Smallest exponent of every variable that occurs.
    pub fn min_exponents(&self) -> QMonomial {
        let vars = self.variables();
        QMonomial::from_pairs(vars.into_iter().map(|v| {
            let e = self.terms.keys().map(|m| m.exponent(&v)).min().unwrap_or(0);
            (v, e)
        }))
    }

    /// Largest term in the lexicographic order.
    pub fn leading(&self) -> Option<(&QMonomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient in the Laurent ring, or `None`.
    pub fn exact_div(&self, divisor: &QPoly) -> Option<QPoly> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(QPoly::zero());
        }
        let sa = self.min_exponents();
        let sd = divisor.min_exponents();
        let d = divisor.mul_monomial(&sd.inverse());
        let (lm_d, lc_d) = {
            let (m, c) = d.leading()?;
            (m.clone(), c.clone())
        };
        let mut rem = self.mul_monomial(&sa.inverse());
        let mut q = QPoly::zero();
        while let Some((lm_r, lc_r)) = rem.leading() {
            if !lm_d.divides(lm_r) {
                return None;
            }
            let m = lm_r.mul(&lm_d.inverse());
            let c = lc_r / &lc_d;
            rem = &rem - &d.mul_term(&m, &c);
            q.add_term(m, c);
        }
        Some(q.mul_monomial(&sa.mul(&sd.inverse())))
    }

    /// Splits off a rational scalar so that the remaining polynomial has
    /// coprime integer coefficients and a positive leading coefficient.
    pub fn primitive_part(&self) -> (BigRational, QPoly) {
        if self.is_zero() {
            return (BigRational::zero(), QPoly::zero());
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&n);
        }
        let mut scalar = BigRational::new(num_gcd, den_lcm);
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            scalar = -scalar;
        }
        let prim = self.scale(&scalar.recip());
        (scalar, prim)
    }

    pub fn eval(&self, point: &BTreeMap<String, BigRational>) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.vars() {
                let x = point.get(v)?;
                if e < 0 && x.is_zero() {
                    return None;
                }
                let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
                t *= if e < 0 { p.recip() } else { p };
            }
            acc += t;
        }
        Some(acc)
    }

    /// Degree in `var` (maximal exponent), `None` for the zero polynomial.
    pub fn degree_in(&self, var: &str) -> Option<i64> {
        self.terms.keys().map(|m| m.exponent(var)).max()
    }
}

impl From<BigRational> for QPoly {
    fn from(c: BigRational) -> Self {
        QPoly::constant(c)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn add(self, rhs: &'a QPoly) -> QPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &'a QPoly) -> QPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &'a QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<QPoly> for QPoly {
            type Output = QPoly;
            fn $f(self, rhs: QPoly) -> QPoly { (&self).$f(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

/// Images of `L` and of the symbols for [`RingElem::substitute`](super::RingElem::substitute).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionTable {
    l: QPoly,
    symbols: BTreeMap<Symbol, QPoly>,
}

impl SubstitutionTable {
    pub fn new(l: QPoly) -> Self {
        SubstitutionTable {
            l,
            symbols: BTreeMap::new(),
        }
    }

    /// `L ↦ uv`.
    pub fn hodge() -> Self {
        Self::new(QPoly::var("u") * QPoly::var("v"))
    }

    /// `L ↦ 1`.
    pub fn euler() -> Self {
        Self::new(QPoly::one())
    }

    pub fn with(mut self, s: Symbol, image: QPoly) -> Self {
        self.symbols.insert(s, image);
        self
    }

    pub fn insert(&mut self, s: Symbol, image: QPoly) {
        self.symbols.insert(s, image);
    }

    pub fn l_image(&self) -> &QPoly {
        &self.l
    }

    pub fn symbol_image(&self, s: &Symbol) -> Option<&QPoly> {
        self.symbols.get(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv() -> QPoly {
        QPoly::var("u") * QPoly::var("v")
    }

    #[test]
    fn display_descending() {
        let p = &uv().pow(2) - &QPoly::one();
        assert_eq!(p.to_string(), "u^2*v^2 - 1");
        let q = QPoly::var("s").scale(&BigRational::new(3.into(), 2.into())) + QPoly::integer(-5);
        assert_eq!(q.to_string(), "3/2*s - 5");
    }

    #[test]
    fn division_in_laurent_ring() {
        let a = &uv() - &QPoly::one();
        let b = &uv() + &QPoly::one();
        let p = &a * &b;
        assert_eq!(p.exact_div(&a), Some(b.clone()));
        assert_eq!(p.exact_div(&QPoly::var("u")).unwrap(), p.mul_monomial(&QMonomial::var("u", -1)));
        assert_eq!(a.exact_div(&b), None);
    }

    #[test]
    fn primitive_part_normalizes_sign_and_content() {
        let p = QPoly::var("s").scale(&BigRational::from_integer((-6).into())) + QPoly::integer(-4);
        let (c, prim) = p.primitive_part();
        assert_eq!(c, BigRational::from_integer((-2).into()));
        assert_eq!(prim.to_string(), "3*s + 2");
    }

    #[test]
    fn evaluation() {
        let p = &uv().pow(2) - &QPoly::one();
        let pt: BTreeMap<_, _> = [
            ("u".to_string(), BigRational::from_integer(2.into())),
            ("v".to_string(), BigRational::from_integer(3.into())),
        ]
        .into();
        assert_eq!(p.eval(&pt), Some(BigRational::from_integer(35.into())));
    }
}
