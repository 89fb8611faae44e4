//! Rational series in `T`: finite sums of `c * prod A/(1-A)` with
//! `A = L^-nu * T^m`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::ring::RingElem;
use super::AlgebraError;

/// The pair `(nu, m)` determining `A = L^-nu * T^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactorKey {
    pub nu: i64,
    pub m: i64,
}

impl FactorKey {
    pub const fn new(nu: i64, m: i64) -> Self {
        FactorKey { nu, m }
    }

    /// `A` as a polynomial in `T`.
    pub fn a(&self) -> TPoly {
        TPoly::monomial(RingElem::l_pow(-self.nu), self.m)
    }

    /// `1 - A`.
    pub fn one_minus_a(&self) -> TPoly {
        &TPoly::one() - &self.a()
    }
}

impl fmt::Display for FactorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A({nu},{m})/(1-A({nu},{m}))", nu = self.nu, m = self.m)
    }
}

/// Laurent polynomial in `T` with [`RingElem`] coefficients, i.e. an
/// element of `Z[L^±1, T^±1, symbols]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TPoly {
    coeffs: BTreeMap<i64, RingElem>,
}

/// Outcome of [`TPoly::exact_divide`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Division {
    Quotient(TPoly),
    NotDivisible,
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(RingElem::one())
    }

    pub fn constant(c: RingElem) -> Self {
        Self::monomial(c, 0)
    }

    /// `T` itself.
    pub fn t() -> Self {
        Self::monomial(RingElem::one(), 1)
    }

    pub fn monomial(c: RingElem, t_exp: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(t_exp, c);
        }
        TPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &RingElem)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, t_exp: i64) -> RingElem {
        self.coeffs.get(&t_exp).cloned().unwrap_or_default()
    }

    fn add_coeff(&mut self, t_exp: i64, c: &RingElem) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(t_exp) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &RingElem) -> TPoly {
        let mut out = TPoly::zero();
        for (k, x) in &self.coeffs {
            out.add_coeff(*k, &(x * c));
        }
        out
    }

    fn shift_t(&self, k: i64) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> TPoly {
        let mut out = TPoly::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Exact division in `Z[L^±1, T^±1, symbols]`.
    ///
    /// Long division in `T`; each step needs the leading coefficient of the
    /// remainder to be an exact multiple of the divisor's leading
    /// coefficient in the coefficient ring.
    pub fn exact_divide(&self, divisor: &TPoly) -> Division {
        let (Some(&low_d), Some(&high_d)) = (divisor.coeffs.keys().next(), divisor.coeffs.keys().next_back()) else {
            return Division::NotDivisible;
        };
        let Some(&low_a) = self.coeffs.keys().next() else {
            return Division::Quotient(TPoly::zero());
        };
        let d = divisor.shift_t(-low_d);
        let deg_d = high_d - low_d;
        let lead_d = &d.coeffs[&deg_d];
        let mut rem = self.shift_t(-low_a);
        let mut q = TPoly::zero();
        while let Some((&deg_r, lead_r)) = rem.coeffs.iter().next_back() {
            if deg_r < deg_d {
                return Division::NotDivisible;
            }
            let Some(c) = lead_r.exact_div(lead_d) else {
                return Division::NotDivisible;
            };
            let step = TPoly::monomial(c.clone(), deg_r - deg_d);
            rem = &rem - &(&d * &step);
            q.add_coeff(deg_r - deg_d, &c);
        }
        Division::Quotient(q.shift_t(low_a - low_d))
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let c_str = if c.len() > 1 {
                format!("({c})")
            } else {
                c.to_string()
            };
            match k {
                0 => f.write_str(&c_str)?,
                1 => write!(f, "{c_str}*T")?,
                _ => write!(f, "{c_str}*T^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn add(self, rhs: &'a TPoly) -> TPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_coeff(*k, c);
        }
        out
    }
}

impl<'a> Sub<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &'a TPoly) -> TPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_coeff(*k, &-c);
        }
        out
    }
}

impl<'a> Mul<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &'a TPoly) -> TPoly {
        let mut out = TPoly::zero();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &rhs.coeffs {
                out.add_coeff(ka + kb, &(ca * cb));
            }
        }
        out
    }
}

/// A rational series brought over its common denominator:
/// `numerator / prod (1 - A_key)^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub numerator: TPoly,
    pub denominator: BTreeMap<FactorKey, u32>,
}

impl Normalized {
    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

impl fmt::Display for Normalized {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.numerator)?;
        if self.numerator.is_zero() || self.denominator.is_empty() {
            return Ok(());
        }
        f.write_str(" / (")?;
        for (i, (k, e)) in self.denominator.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "(1-A({},{}))", k.nu, k.m)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        f.write_str(")")
    }
}

/// Finite sum of terms `coeff * prod_{keys} A/(1-A)`.
///
/// Terms with identical factor multisets are merged on construction, and
/// zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalSeries {
    /// Keys: sorted factor multisets.
    terms: BTreeMap<Vec<FactorKey>, RingElem>,
}

impl RationalSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: RingElem) -> Self {
        Self::term(c, [])
    }

    pub fn term(coeff: RingElem, factors: impl IntoIterator<Item = FactorKey>) -> Self {
        let mut out = Self::zero();
        out.add_term(coeff, factors.into_iter().collect());
        out
    }

    pub fn add_term(&mut self, coeff: RingElem, mut factors: Vec<FactorKey>) {
        if coeff.is_zero() {
            return;
        }
        factors.sort();
        match self.terms.entry(factors) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&[FactorKey], &RingElem)> {
        self.terms.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn coefficient(&self, factors: &[FactorKey]) -> Option<&RingElem> {
        let mut sorted = factors.to_vec();
        sorted.sort();
        self.terms.get(&sorted)
    }

    pub fn scale(&self, c: &RingElem) -> RationalSeries {
        let mut out = RationalSeries::zero();
        for (k, x) in &self.terms {
            out.add_term(x * c, k.clone());
        }
        out
    }

    /// The `T -> infinity` limit: each product of `n` factors tends to
    /// `(-1)^n`.
    pub fn limit(&self) -> Result<RingElem, AlgebraError> {
        let mut acc = RingElem::zero();
        for (factors, c) in &self.terms {
            if let Some(bad) = factors.iter().find(|k| k.m <= 0) {
                return Err(AlgebraError::NonPositiveMultiplicity(*bad));
            }
            if factors.len() % 2 == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        Ok(acc)
    }

    /// Brings the series over `prod (1 - A_key)^e`, where `e` is the largest
    /// multiplicity of `key` in any single term.
    pub fn normalize(&self) -> Normalized {
        let mut denominator: BTreeMap<FactorKey, u32> = BTreeMap::new();
        for factors in self.terms.keys() {
            for (k, mult) in multiplicities(factors) {
                let e = denominator.entry(k).or_insert(0);
                *e = (*e).max(mult);
            }
        }
        let mut one_minus_powers: BTreeMap<(FactorKey, u32), TPoly> = BTreeMap::new();
        let mut numerator = TPoly::zero();
        for (factors, c) in &self.terms {
            let mults = multiplicities(factors);
            let mut t = TPoly::constant(c.clone());
            for (k, e) in &denominator {
                let used = mults.get(k).copied().unwrap_or(0);
                if used > 0 {
                    t = &t * &k.a().pow(used);
                }
                let missing = e - used;
                if missing > 0 {
                    let p = one_minus_powers
                        .entry((*k, missing))
                        .or_insert_with(|| k.one_minus_a().pow(missing));
                    t = &t * p;
                }
            }
            numerator = &numerator + &t;
        }
        Normalized {
            numerator,
            denominator,
        }
    }

    /// Equality as rational functions: the difference has zero numerator
    /// over the common denominator.
    pub fn equals(&self, other: &RationalSeries) -> bool {
        let diff = self - other;
        diff.is_zero() || diff.normalize().is_zero()
    }
}

fn multiplicities(factors: &[FactorKey]) -> BTreeMap<FactorKey, u32> {
    let mut out = BTreeMap::new();
    for k in factors {
        *out.entry(*k).or_insert(0) += 1;
    }
    out
}

impl fmt::Display for RationalSeries {
    /// Canonical text: `coeff * A(nu,m)/(1-A(nu,m)) * ...`, joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (factors, c)) in self.terms.iter().enumerate() {
            let mut coeff = if c.len() > 1 {
                format!("({c})")
            } else {
                c.to_string()
            };
            if i > 0 {
                if let Some(rest) = coeff.strip_prefix('-') {
                    f.write_str(" - ")?;
                    coeff = rest.to_string();
                } else {
                    f.write_str(" + ")?;
                }
            }
            let mut parts = Vec::with_capacity(factors.len() + 1);
            match (factors.is_empty(), coeff.as_str()) {
                (false, "1") => {}
                (false, "-1") => parts.push("-".to_string()),
                _ => parts.push(coeff),
            }
            for k in factors {
                parts.push(k.to_string());
            }
            let mut out = String::new();
            for p in parts {
                if out.is_empty() || out == "-" {
                    out.push_str(&p);
                } else {
                    out.push_str(" * ");
                    out.push_str(&p);
                }
            }
            f.write_str(&out)?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a RationalSeries> for &'a RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: &'a RationalSeries) -> RationalSeries {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(c.clone(), k.clone());
        }
        out
    }
}

impl<'a> Sub<&'a RationalSeries> for &'a RationalSeries {
    type Output = RationalSeries;
    fn sub(self, rhs: &'a RationalSeries) -> RationalSeries {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(-c, k.clone());
        }
        out
    }
}

impl<'a> Mul<&'a RationalSeries> for &'a RationalSeries {
    type Output = RationalSeries;
    fn mul(self, rhs: &'a RationalSeries) -> RationalSeries {
        let mut out = RationalSeries::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let mut k = ka.clone();
                k.extend_from_slice(kb);
                out.add_term(ca * cb, k);
            }
        }
        out
    }
}

impl Neg for &RationalSeries {
    type Output = RationalSeries;
    fn neg(self) -> RationalSeries {
        self.scale(&-RingElem::one())
    }
}

impl std::iter::Sum for RationalSeries {
    fn sum<I: Iterator<Item = RationalSeries>>(iter: I) -> Self {
        let mut acc = RationalSeries::zero();
        for x in iter {
            acc = &acc + &x;
        }
        acc
    }
}

impl One for RationalSeries {
    fn one() -> Self {
        RationalSeries::constant(RingElem::one())
    }
}

impl Mul for RationalSeries {
    type Output = RationalSeries;
    fn mul(self, rhs: RationalSeries) -> RationalSeries {
        &self * &rhs
    }
}

impl Add for RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: RationalSeries) -> RationalSeries {
        &self + &rhs
    }
}

impl Zero for RationalSeries {
    fn zero() -> Self {
        RationalSeries::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(nu: i64, m: i64) -> FactorKey {
        FactorKey::new(nu, m)
    }

    fn l_minus_1() -> RingElem {
        RingElem::l() - RingElem::one()
    }

    #[test]
    fn add_merges_and_cancels() {
        let c = RingElem::named("W1");
        let a = RationalSeries::term(c.clone(), [k(0, 1)]);
        assert!((&a - &a).is_zero());
        let b = RationalSeries::term(RingElem::mu(2), [k(0, 1)]);
        let s = &a + &b;
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(&[k(0, 1)]), Some(&(&c + &RingElem::mu(2))));
        let t = &a + &RationalSeries::term(c, [k(0, 2)]);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn factor_order_is_irrelevant() {
        let a = RationalSeries::term(RingElem::one(), [k(1, 2), k(0, 1)]);
        let b = RationalSeries::term(RingElem::one(), [k(0, 1), k(1, 2)]);
        assert_eq!(a, b);
    }

    #[test]
    fn equality_of_rational_functions() {
        let one = RationalSeries::constant(RingElem::one());
        assert!(one.equals(&one.clone()));
        let a = RationalSeries::term(RingElem::one(), [k(0, 1)]);
        let b = RationalSeries::term(RingElem::one(), [k(0, 2)]);
        assert!(!a.equals(&b));
        // 1/(1-A) = 1 + A/(1-A)
        let f = RationalSeries::term(RingElem::one(), [k(3, 2)]);
        let g = &one + &f;
        let h = &g * &g;
        let expanded = &(&one + &f.scale(&RingElem::constant(2))) + &(&f * &f);
        assert!(h.equals(&expanded));
    }

    /// A1*A2 = A* with m* = m1 + m2, nu* = nu1 + nu2 (transversal double
    /// point blown up).
    #[test]
    fn double_point_identity() {
        let (k1, k2, ks) = (k(0, 1), k(0, 1), k(0, 2));
        let c = RingElem::mu(1) * l_minus_1();
        let before = RationalSeries::term(c.clone(), [k1, k2]);
        let one = RationalSeries::constant(RingElem::one());
        let inner = &(&RationalSeries::term(RingElem::one(), [k1]) + &RationalSeries::term(RingElem::one(), [k2])) + &one;
        let after = &RationalSeries::term(c, [ks]) * &inner;
        assert!(before.equals(&after));
    }

    #[test]
    fn limits() {
        let c = RingElem::named("Wc");
        let two = RationalSeries::term(c.clone(), [k(3, 2), k(-1, 5)]);
        assert_eq!(two.limit().unwrap(), c);
        assert_eq!(RationalSeries::constant(c.clone()).limit().unwrap(), c);
        assert_eq!(RationalSeries::term(c.clone(), [k(0, 1)]).limit().unwrap(), -&c);
        let bad = RationalSeries::term(c, [k(0, 0)]);
        assert!(matches!(bad.limit(), Err(AlgebraError::NonPositiveMultiplicity(_))));
    }

    #[test]
    fn exact_divide_examples() {
        let t = TPoly::t();
        let one = TPoly::one();
        let one_minus_t = &one - &t;
        let one_minus_t2 = &one - &t.pow(2);
        assert_eq!(one_minus_t2.exact_divide(&one_minus_t), Division::Quotient(&one + &t));
        let one_minus_lt = k(1, 1).one_minus_a();
        assert_eq!(one_minus_lt.exact_divide(&one_minus_t), Division::NotDivisible);
        let p = one_minus_t.scale(&l_minus_1());
        assert_eq!(p.exact_divide(&one_minus_t), Division::Quotient(TPoly::constant(l_minus_1())));
        assert_eq!(one.exact_divide(&TPoly::zero()), Division::NotDivisible);
    }

    #[test]
    fn display() {
        assert_eq!(RationalSeries::zero().to_string(), "0");
        let s = RationalSeries::term(RingElem::named("W1"), [k(0, 1)]);
        assert_eq!(s.to_string(), "W1 * A(0,1)/(1-A(0,1))");
        let t = &s - &RationalSeries::term(l_minus_1(), [k(1, 2), k(0, 1)]);
        assert_eq!(
            t.to_string(),
            "W1 * A(0,1)/(1-A(0,1)) + (-L + 1) * A(0,1)/(1-A(0,1)) * A(1,2)/(1-A(1,2))"
        );
    }
}
