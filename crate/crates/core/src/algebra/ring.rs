//! The coefficient ring `Z[L, L^-1, symbols]`.
//!
//! A [`RingElem`] is a finite sum of integer multiples of monomials
//! `L^a * s1^e1 * ... * sk^ek`. The exponent of `L` may be negative; symbol
//! exponents are positive. Coefficients are arbitrary precision and zero
//! coefficients are never stored, so structural equality is ring equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::qpoly::{QPoly, SubstitutionTable};
use super::symbol::Symbol;
use super::AlgebraError;

/// `L^l` times a product of symbol powers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    /// Sorted by symbol, exponents strictly positive.
    symbols: Vec<(Symbol, u32)>,
    l: i64,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn l_pow(l: i64) -> Self {
        Monomial { symbols: Vec::new(), l }
    }

    pub fn symbol(s: Symbol) -> Self {
        Monomial { symbols: vec![(s, 1)], l: 0 }
    }

    pub fn l_exponent(&self) -> i64 {
        self.l
    }

    pub fn symbols(&self) -> &[(Symbol, u32)] {
        &self.symbols
    }

    pub fn is_constant(&self) -> bool {
        self.symbols.is_empty() && self.l == 0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut symbols = Vec::with_capacity(self.symbols.len() + other.symbols.len());
        let (mut i, mut j) = (0, 0);
        while i < self.symbols.len() && j < other.symbols.len() {
            let (a, ea) = &self.symbols[i];
            let (b, eb) = &other.symbols[j];
            match a.cmp(b) {
                Ordering::Less => {
                    symbols.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    symbols.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    symbols.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        symbols.extend_from_slice(&self.symbols[i..]);
        symbols.extend_from_slice(&other.symbols[j..]);
        Monomial {
            symbols,
            l: self.l + other.l,
        }
    }

    /// Quotient in the polynomial sense: every exponent, including that of
    /// `L`, must be at least the divisor's.
    fn div_polynomial(&self, other: &Monomial) -> Option<Monomial> {
        if self.l < other.l {
            return None;
        }
        let mut symbols = Vec::with_capacity(self.symbols.len());
        let mut j = 0;
        for (s, e) in &self.symbols {
            let mut e = *e;
            if j < other.symbols.len() && &other.symbols[j].0 == s {
                let d = other.symbols[j].1;
                if d > e {
                    return None;
                }
                e -= d;
                j += 1;
            } else if j < other.symbols.len() && other.symbols[j].0 < *s {
                return None;
            }
            if e > 0 {
                symbols.push((s.clone(), e));
            }
        }
        if j < other.symbols.len() {
            return None;
        }
        Some(Monomial {
            symbols,
            l: self.l - other.l,
        })
    }

    /// Pure lexicographic monomial order, symbols in ascending order first
    /// and `L` last. Used to pick leading terms for division.
    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.symbols.get(i), other.symbols.get(j)) {
                (None, None) => return self.l.cmp(&other.l),
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
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

/// Canonical display order: by symbol part, then descending power of `L`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.symbols
            .cmp(&other.symbols)
            .then_with(|| other.l.cmp(&self.l))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, e) in &self.symbols {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        if self.l != 0 {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if self.l == 1 {
                f.write_str("L")?;
            } else {
                write!(f, "L^{}", self.l)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// An element of the free commutative ring `Z[L, L^-1, mu(k), W...]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RingElem {
    terms: BTreeMap<Monomial, BigInt>,
}

impl RingElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_term(Monomial::one(), c.into())
    }

    /// The Lefschetz class `L`.
    pub fn l() -> Self {
        Self::l_pow(1)
    }

    pub fn l_pow(k: i64) -> Self {
        Self::from_term(Monomial::l_pow(k), BigInt::one())
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::from_term(Monomial::symbol(s), BigInt::one())
    }

    pub fn mu(k: u64) -> Self {
        Self::symbol(Symbol::mu(k))
    }

    /// Named symbol from its full spelling; panics on a malformed name.
    pub fn named(full: &str) -> Self {
        Self::symbol(Symbol::named(full).unwrap_or_else(|| panic!("bad symbol name {full:?}")))
    }

    pub fn from_term(m: Monomial, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        RingElem { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_constant() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.symbols.iter().map(|(s, _)| s.clone()))
            .collect()
    }

    pub fn contains_mu(&self) -> bool {
        self.terms
            .keys()
            .any(|m| m.symbols.iter().any(|(s, _)| s.is_mu()))
    }

    /// The constant integer value, when the element has no `L` or symbols.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_constant().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// `±L^k`, the units of the ring.
    pub fn as_unit(&self) -> Option<(bool, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        if !m.symbols.is_empty() || c.abs() != BigInt::one() {
            return None;
        }
        Some((c.is_negative(), m.l))
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> RingElem {
        if c.is_zero() {
            return RingElem::zero();
        }
        RingElem {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by `L^k`.
    pub fn shift_l(&self, k: i64) -> RingElem {
        RingElem {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m.l += k;
                    (m, c.clone())
                })
                .collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &BigInt) -> RingElem {
        RingElem {
            terms: self.terms.iter().map(|(n, x)| (n.mul(m), x * c)).collect(),
        }
    }

    /// Exact power. Negative exponents are allowed only for units `±L^k`.
    pub fn pow(&self, n: i64) -> Result<RingElem, AlgebraError> {
        if n < 0 {
            let (neg, k) = self.as_unit().ok_or(AlgebraError::NonInvertible)?;
            let sign = if neg && n % 2 != 0 { -1 } else { 1 };
            return Ok(RingElem::from_term(Monomial::l_pow(k * n), BigInt::from(sign)));
        }
        let mut result = RingElem::one();
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    pub fn min_l_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.l).min()
    }

    fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    /// Exact quotient `self / divisor`, or `None` when the divisor does not
    /// divide (or is zero).
    ///
    /// Both sides are first multiplied by powers of `L` so that every
    /// exponent is non-negative; since `L` is a unit this does not change
    /// divisibility, and ordinary lexicographic division then terminates.
    pub fn exact_div(&self, divisor: &RingElem) -> Option<RingElem> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(RingElem::zero());
        }
        let sa = self.min_l_exponent()?;
        let sd = divisor.min_l_exponent()?;
        let d = divisor.shift_l(-sd);
        let (lm_d, lc_d) = {
            let (m, c) = d.leading()?;
            (m.clone(), c.clone())
        };
        let mut rem = self.shift_l(-sa);
        let mut quotient = RingElem::zero();
        while let Some((lm_r, lc_r)) = rem.leading() {
            let m = lm_r.div_polynomial(&lm_d)?;
            let (c, r) = lc_r.div_rem(&lc_d);
            if !r.is_zero() {
                return None;
            }
            rem -= d.mul_term(&m, &c);
            quotient.add_term(m, c);
        }
        Some(quotient.shift_l(sa - sd))
    }

    /// Evaluates into Laurent polynomials over `Q` using `table` for `L` and
    /// every symbol that occurs.
    pub fn substitute(&self, table: &SubstitutionTable) -> Result<QPoly, AlgebraError> {
        let l_image = table.l_image();
        let l_inverse = if self.min_l_exponent().is_some_and(|k| k < 0) {
            Some(l_image.inverse_unit().ok_or(AlgebraError::NonInvertibleImage)?)
        } else {
            None
        };
        let mut out = QPoly::zero();
        for (m, c) in &self.terms {
            let mut t = QPoly::constant(c.clone().into());
            if m.l > 0 {
                t = &t * &l_image.pow(m.l as u32);
            } else if m.l < 0 {
                let inv = l_inverse.as_ref().expect("inverse computed above");
                t = &t * &inv.pow((-m.l) as u32);
            }
            for (s, e) in &m.symbols {
                let image = table
                    .symbol_image(s)
                    .ok_or_else(|| AlgebraError::MissingSymbol(s.to_string()))?;
                t = &t * &image.pow(*e);
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Floating-point evaluation, used for numeric sanity checks only.
    pub fn eval_f64(&self, l: f64, symbol: impl Fn(&Symbol) -> Option<f64>) -> Option<f64> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t: f64 = c.to_string().parse().ok()?;
            t *= l.powi(m.l as i32);
            for (s, e) in &m.symbols {
                t *= symbol(s)?.powi(*e as i32);
            }
            acc += t;
        }
        Some(acc)
    }
}

impl From<i64> for RingElem {
    fn from(c: i64) -> Self {
        RingElem::constant(c)
    }
}

impl From<Symbol> for RingElem {
    fn from(s: Symbol) -> Self {
        RingElem::symbol(s)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
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
            if m.is_constant() {
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

impl<'a> Add<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn add(self, rhs: &'a RingElem) -> RingElem {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&RingElem> for RingElem {
    fn add_assign(&mut self, rhs: &RingElem) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&RingElem> for RingElem {
    fn sub_assign(&mut self, rhs: &RingElem) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl SubAssign<RingElem> for RingElem {
    fn sub_assign(&mut self, rhs: RingElem) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl<'a> Sub<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &'a RingElem) -> RingElem {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a RingElem> for &'a RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &'a RingElem) -> RingElem {
        let mut out = RingElem::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl $tr<RingElem> for RingElem {
            type Output = RingElem;
            fn $f(self, rhs: RingElem) -> RingElem { (&self).$f(&rhs) }
        }
        impl<'a> $tr<&'a RingElem> for RingElem {
            type Output = RingElem;
            fn $f(self, rhs: &'a RingElem) -> RingElem { (&self).$f(rhs) }
        }
        impl<'a> $tr<RingElem> for &'a RingElem {
            type Output = RingElem;
            fn $f(self, rhs: RingElem) -> RingElem { self.$f(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl std::iter::Sum for RingElem {
    fn sum<I: Iterator<Item = RingElem>>(iter: I) -> Self {
        let mut acc = RingElem::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}
