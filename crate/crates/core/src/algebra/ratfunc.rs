//! Rational functions over `Q` with a factored denominator.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::qpoly::{QMonomial, QPoly};
use super::AlgebraError;

/// `numerator / prod f^e`.
///
/// The numerator is an honest polynomial (no negative exponents). Every
/// denominator factor is primitive with positive leading coefficient, and
/// the factors are expected to be pairwise coprime irreducibles (linear
/// forms, single variables, cyclotomic polynomials), which makes trial
/// division a complete reduction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalFunctionQ {
    numerator: QPoly,
    denominator: BTreeMap<QPoly, u32>,
}

fn single_var(f: &QPoly) -> Option<String> {
    let (m, c) = (f.len() == 1).then(|| f.terms().next()).flatten()?;
    let vars: Vec<_> = m.vars().collect();
    (c.is_one() && vars.len() == 1 && vars[0].1 == 1).then(|| vars[0].0.to_string())
}

impl RationalFunctionQ {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_poly(&QPoly::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(&QPoly::constant(c))
    }

    /// Embeds a Laurent polynomial; negative exponents move into the
    /// denominator as variable factors.
    pub fn from_poly(p: &QPoly) -> Self {
        let mut denominator = BTreeMap::new();
        let mut shift = Vec::new();
        for (v, e) in p.min_exponents().vars() {
            if e < 0 {
                denominator.insert(QPoly::var(v), (-e) as u32);
                shift.push((v.to_string(), -e));
            }
        }
        let numerator = p.mul_monomial(&QMonomial::from_pairs(shift));
        let mut out = RationalFunctionQ {
            numerator,
            denominator,
        };
        out.reduce();
        out
    }

    pub fn numerator(&self) -> &QPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> impl Iterator<Item = (&QPoly, u32)> {
        self.denominator.iter().map(|(f, e)| (f, *e))
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Divides by `f^e`. `f` must be a nonzero monomial or an irreducible
    /// polynomial coprime to the variables.
    pub fn over_factor(&self, f: &QPoly, e: u32) -> Result<Self, AlgebraError> {
        if f.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if e == 0 {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        if let Some(unit) = f.inverse_unit() {
            let inv = RationalFunctionQ::from_poly(&unit.pow(e));
            return Ok(&out * &inv);
        }
        let (scalar, prim) = f.primitive_part();
        out.numerator = out
            .numerator
            .scale(&num_traits::pow(scalar, e as usize).recip());
        *out.denominator.entry(prim).or_insert(0) += e;
        out.reduce();
        Ok(out)
    }

    fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.denominator.clear();
            return;
        }
        for (f, e) in self.denominator.iter_mut() {
            if let Some(v) = single_var(f) {
                let k = self.numerator.min_exponents().exponent(&v).max(0) as u32;
                let cancel = k.min(*e);
                if cancel > 0 {
                    self.numerator = self
                        .numerator
                        .mul_monomial(&QMonomial::var(&v, -(cancel as i64)));
                    *e -= cancel;
                }
                continue;
            }
            while *e > 0 {
                match self.numerator.exact_div(f) {
                    Some(q) => {
                        self.numerator = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.denominator.retain(|_, e| *e > 0);
    }

    fn common(a: &Self, b: &Self) -> (BTreeMap<QPoly, u32>, QPoly, QPoly) {
        let mut den = a.denominator.clone();
        for (f, e) in &b.denominator {
            let x = den.entry(f.clone()).or_insert(0);
            *x = (*x).max(*e);
        }
        let lift = |r: &Self| {
            let mut n = r.numerator.clone();
            for (f, e) in &den {
                let have = r.denominator.get(f).copied().unwrap_or(0);
                if *e > have {
                    n = &n * &f.pow(e - have);
                }
            }
            n
        };
        let (na, nb) = (lift(a), lift(b));
        (den, na, nb)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        out.numerator = out.numerator.scale(c);
        out.reduce();
        out
    }

    /// Exact value at a rational point, or `None` at a pole or when a
    /// variable is unassigned.
    pub fn eval(&self, point: &BTreeMap<String, BigRational>) -> Option<BigRational> {
        let mut den = BigRational::one();
        for (f, e) in &self.denominator {
            den *= num_traits::pow(f.eval(point)?, *e as usize);
        }
        if den.is_zero() {
            return None;
        }
        Some(self.numerator.eval(point)? / den)
    }

    /// Roots of the denominator factors that are linear in `var`, with
    /// multiplicities, sorted ascending.
    pub fn poles(&self, var: &str) -> Vec<(BigRational, u32)> {
        let mut out = Vec::new();
        for (f, e) in &self.denominator {
            if f.degree_in(var) != Some(1) || f.variables().len() != 1 {
                continue;
            }
            let mut a = BigRational::zero();
            let mut b = BigRational::zero();
            for (m, c) in f.terms() {
                if m.is_one() {
                    a = c.clone();
                } else {
                    b = c.clone();
                }
            }
            out.push((-a / b, *e));
        }
        out.sort();
        out
    }
}

/// The `k`-th cyclotomic polynomial evaluated at `x`.
pub fn cyclotomic(k: u64, x: &QPoly) -> QPoly {
    assert!(k >= 1, "cyclotomic index must be positive");
    let coeffs = cyclotomic_coeffs(k);
    let mut acc = QPoly::zero();
    for c in coeffs.iter().rev() {
        acc = &(&acc * x) + &QPoly::constant(BigRational::from_integer(c.clone()));
    }
    acc
}

/// Integer coefficients of the `k`-th cyclotomic polynomial, constant term
/// first.
fn cyclotomic_coeffs(k: u64) -> Vec<BigInt> {
    // x^k - 1 divided by every Phi_d with d | k, d < k
    let mut p = vec![BigInt::zero(); k as usize + 1];
    p[0] = BigInt::from(-1);
    p[k as usize] = BigInt::one();
    for d in (1..k).filter(|d| k % d == 0) {
        p = divide_monic(&p, &cyclotomic_coeffs(d));
    }
    p
}

fn divide_monic(p: &[BigInt], d: &[BigInt]) -> Vec<BigInt> {
    let mut rem = p.to_vec();
    let dd = d.len() - 1;
    let mut q = vec![BigInt::zero(); p.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd].clone();
        for (j, dj) in d.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

fn write_poly(f: &mut fmt::Formatter<'_>, p: &QPoly) -> fmt::Result {
    if p.len() > 1 {
        write!(f, "({p})")
    } else {
        write!(f, "{p}")
    }
}

impl fmt::Display for RationalFunctionQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() {
            return write!(f, "{}", self.numerator);
        }
        write_poly(f, &self.numerator)?;
        f.write_str(" / ")?;
        let wrap = self.denominator.len() > 1;
        if wrap {
            f.write_str("(")?;
        }
        for (i, (p, e)) in self.denominator.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write_poly(f, p)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a RationalFunctionQ> for &'a RationalFunctionQ {
    type Output = RationalFunctionQ;
    fn add(self, rhs: &'a RationalFunctionQ) -> RationalFunctionQ {
        let (denominator, a, b) = RationalFunctionQ::common(self, rhs);
        let mut out = RationalFunctionQ {
            numerator: &a + &b,
            denominator,
        };
        out.reduce();
        out
    }
}

impl<'a> Sub<&'a RationalFunctionQ> for &'a RationalFunctionQ {
    type Output = RationalFunctionQ;
    fn sub(self, rhs: &'a RationalFunctionQ) -> RationalFunctionQ {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunctionQ> for &'a RationalFunctionQ {
    type Output = RationalFunctionQ;
    fn mul(self, rhs: &'a RationalFunctionQ) -> RationalFunctionQ {
        let mut denominator = self.denominator.clone();
        for (f, e) in &rhs.denominator {
            *denominator.entry(f.clone()).or_insert(0) += e;
        }
        let mut out = RationalFunctionQ {
            numerator: &self.numerator * &rhs.numerator,
            denominator,
        };
        out.reduce();
        out
    }
}

impl Neg for &RationalFunctionQ {
    type Output = RationalFunctionQ;
    fn neg(self) -> RationalFunctionQ {
        RationalFunctionQ {
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }
}

impl std::iter::Sum for RationalFunctionQ {
    fn sum<I: Iterator<Item = RationalFunctionQ>>(iter: I) -> Self {
        let mut acc = RationalFunctionQ::zero();
        for x in iter {
            acc = &acc + &x;
        }
        acc
    }
}
