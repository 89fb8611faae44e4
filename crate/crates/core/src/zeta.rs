//! The zeta function of a configuration and its specializations.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::algebra::{
    cyclotomic, AlgebraError, Division, FactorKey, QMonomial, QPoly, RationalFunctionQ, RationalSeries, RingElem,
    SubstitutionTable, Symbol, TPoly,
};
use crate::model::{fmt_set, DivisorConfiguration, ModelError, Stratum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("stratum {0} has no geom class")]
    MissingGeom(String),
    #[error("higher-order pole at T = uv")]
    HigherOrderPole,
    #[error("twist order must be ≥ 1 (got {0})")]
    InvalidOrder(i64),
}

fn l_minus_1() -> RingElem {
    &RingElem::l() - &RingElem::one()
}

fn selected_strata(config: &DivisorConfiguration) -> Result<impl Iterator<Item = &Stratum>, ZetaError> {
    config.check()?;
    Ok(config.strata.iter().filter(|s| config.is_selected(&s.comps)))
}

fn geom_of(s: &Stratum) -> Result<&RingElem, ZetaError> {
    s.geom.as_ref().ok_or_else(|| ZetaError::MissingGeom(fmt_set(&s.comps)))
}

/// Sum over selected strata of `cover * (L-1)^(|I|-1) * prod_{i in I} A_i/(1-A_i)`.
pub fn compute_zeta(config: &DivisorConfiguration) -> Result<RationalSeries, ZetaError> {
    let mut out = RationalSeries::zero();
    for s in selected_strata(config)? {
        let torus = l_minus_1().pow(s.comps.len() as i64 - 1)?;
        out.add_term(&s.cover * &torus, config.factors(&s.comps)?);
    }
    Ok(out)
}

/// Sum over selected strata of `(-1)^(|I|-1) * cover * (L-1)^(|I|-1)`.
pub fn compute_micc(config: &DivisorConfiguration) -> Result<RingElem, ZetaError> {
    let mut out = RingElem::zero();
    for s in selected_strata(config)? {
        let k = s.comps.len() as i64 - 1;
        let t = &s.cover * &l_minus_1().pow(k)?;
        if k % 2 == 0 {
            out += &t;
        } else {
            out -= &t;
        }
    }
    Ok(out)
}

/// Whether the cover class equals minus the limit of the zeta function.
pub fn check_limit_relation(config: &DivisorConfiguration) -> Result<bool, ZetaError> {
    let micc = compute_micc(config)?;
    let lim = compute_zeta(config)?.limit()?;
    Ok(micc == -lim)
}

/// Sum over selected strata of `geom * (L-1)^|I| * prod A_i/(1-A_i)`.
pub fn compute_naive(config: &DivisorConfiguration) -> Result<RationalSeries, ZetaError> {
    let mut out = RationalSeries::zero();
    for s in selected_strata(config)? {
        let torus = l_minus_1().pow(s.comps.len() as i64)?;
        out.add_term(geom_of(s)? * &torus, config.factors(&s.comps)?);
    }
    Ok(out)
}

/// Images of named symbols in a specialization.
pub type SymbolTable<T> = BTreeMap<Symbol, T>;

/// A rational series whose coefficients are Laurent polynomials in `u, v`;
/// each factor stands for `(uv)^-nu T^m / (1 - (uv)^-nu T^m)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HodgeSeries {
    terms: BTreeMap<Vec<FactorKey>, QPoly>,
}

impl HodgeSeries {
    pub fn terms(&self) -> impl Iterator<Item = (&[FactorKey], &QPoly)> {
        self.terms.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn coefficient(&self, factors: &[FactorKey]) -> Option<&QPoly> {
        let mut sorted = factors.to_vec();
        sorted.sort();
        self.terms.get(&sorted)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for HodgeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (factors, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.len() > 1 {
                write!(f, "({c})")?;
            } else {
                write!(f, "{c}")?;
            }
            for k in factors {
                let a = format!("(u*v)^{}*T^{}", -k.nu, k.m);
                write!(f, " * {a}/(1-{a})")?;
            }
        }
        Ok(())
    }
}

fn hodge_table(table: &SymbolTable<QPoly>) -> SubstitutionTable {
    let mut t = SubstitutionTable::hodge();
    for (s, p) in table {
        t.insert(s.clone(), p.clone());
    }
    t
}

/// The naive series with `L -> uv` applied to its coefficients.
pub fn hodge_zeta(config: &DivisorConfiguration, table: &SymbolTable<QPoly>) -> Result<HodgeSeries, ZetaError> {
    let sub = hodge_table(table);
    let mut terms = BTreeMap::new();
    for (factors, c) in compute_naive(config)?.terms() {
        terms.insert(factors.to_vec(), c.substitute(&sub)?);
    }
    Ok(HodgeSeries { terms })
}

fn s_linear(k: &FactorKey) -> QPoly {
    &QPoly::integer(k.nu) + &QPoly::var("s").scale(&BigRational::from_integer(k.m.into()))
}

fn topological_term(chi: &QPoly, factors: &[FactorKey]) -> Result<RationalFunctionQ, ZetaError> {
    let mut r = RationalFunctionQ::from_poly(chi);
    for k in factors {
        r = r.over_factor(&s_linear(k), 1)?;
    }
    Ok(r)
}

/// `sum chi(E°_I) prod 1/(nu_i + m_i s)`, with `chi` the geom class at `L = 1`.
pub fn topological_zeta(
    config: &DivisorConfiguration,
    int_table: &SymbolTable<i64>,
) -> Result<RationalFunctionQ, ZetaError> {
    let mut sub = SubstitutionTable::euler();
    for (s, n) in int_table {
        sub.insert(s.clone(), QPoly::integer(*n));
    }
    let mut out = RationalFunctionQ::zero();
    for s in selected_strata(config)? {
        let chi = geom_of(s)?.substitute(&sub)?;
        out = &out + &topological_term(&chi, &config.factors(&s.comps)?)?;
    }
    Ok(out)
}

/// Like [`topological_zeta`] but weighting each stratum by the character
/// of order `e` on its cover: `mu(k)` counts 1 when `e | k`, else 0.
pub fn twisted_topological_zeta(
    config: &DivisorConfiguration,
    e: i64,
    chi_table: &SymbolTable<i64>,
) -> Result<RationalFunctionQ, ZetaError> {
    if e < 1 {
        return Err(ZetaError::InvalidOrder(e));
    }
    let mut sub = SubstitutionTable::euler();
    for (s, n) in chi_table {
        sub.insert(s.clone(), QPoly::integer(*n));
    }
    let strata: Vec<_> = selected_strata(config)?.collect();
    for s in &strata {
        for sym in s.cover.symbols() {
            if let Symbol::Mu(k) = sym {
                sub.insert(sym.clone(), QPoly::integer(i64::from(k % e as u64 == 0)));
            }
        }
    }
    let mut out = RationalFunctionQ::zero();
    for s in strata {
        let chi = s.cover.substitute(&sub)?;
        out = &out + &topological_term(&chi, &config.factors(&s.comps)?)?;
    }
    Ok(out)
}

fn uv() -> QPoly {
    &QPoly::var("u") * &QPoly::var("v")
}

/// `1 / (w^a - w^b)` for `a != b`, with `w = uv`, built from cyclotomic
/// factors so that cancellation stays exact.
fn inv_power_difference(a: i64, b: i64) -> Result<RationalFunctionQ, ZetaError> {
    debug_assert!(a != b);
    let w = uv();
    let lo = a.min(b);
    let d = (a - b).unsigned_abs();
    let sign = if a > b { 1 } else { -1 };
    let mut r = RationalFunctionQ::constant(BigRational::from_integer(sign.into()));
    r = r.over_factor(&QPoly::from_term(QMonomial::from_pairs([("u".into(), lo), ("v".into(), lo)]), BigRational::one()), 1)?;
    for k in (1..=d).filter(|k| d % k == 0) {
        r = r.over_factor(&cyclotomic(k, &w), 1)?;
    }
    Ok(r)
}

fn w_pow(e: i64) -> QPoly {
    QPoly::from_term(QMonomial::from_pairs([("u".into(), e), ("v".into(), e)]), BigRational::one())
}

/// Residue of the Hodge zeta function at `T = uv`, normalized by
/// `-1/(uv(uv-1))`.
pub fn stringy_residue(
    config: &DivisorConfiguration,
    table: &SymbolTable<QPoly>,
) -> Result<RationalFunctionQ, ZetaError> {
    let sub = hodge_table(table);
    let w = uv();
    let w_minus_1 = &w - &QPoly::one();
    let mut total = RationalFunctionQ::zero();
    for s in selected_strata(config)? {
        let h = geom_of(s)?.substitute(&sub)?;
        let factors = config.factors(&s.comps)?;
        let vanishing: Vec<usize> = (0..factors.len()).filter(|&i| factors[i].nu == factors[i].m).collect();
        let i0 = match vanishing.as_slice() {
            [] => continue,
            [i0] => *i0,
            _ => return Err(ZetaError::HigherOrderPole),
        };
        let mut term = RationalFunctionQ::from_poly(&h);
        for (i, k) in factors.iter().enumerate() {
            if i == i0 {
                let num = (&w_minus_1 * &w).scale(&-BigRational::from_integer(k.m.into()).recip());
                term = &term * &RationalFunctionQ::from_poly(&num);
            } else {
                let num = RationalFunctionQ::from_poly(&(&w_minus_1 * &w_pow(k.m)));
                term = &(&term * &num) * &inv_power_difference(k.nu, k.m)?;
            }
        }
        total = &total + &term;
    }
    let norm = RationalFunctionQ::constant(-BigRational::one())
        .over_factor(&w, 1)?
        .over_factor(&w_minus_1, 1)?;
    Ok(&total * &norm)
}

/// A surviving denominator factor `(1 - L^-a T^b)^multiplicity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PoleCandidate {
    pub a: i64,
    pub b: i64,
    pub multiplicity: u32,
}

impl PoleCandidate {
    /// The pole `s = -a/b` of the topological specialization.
    pub fn s_value(&self) -> BigRational {
        BigRational::new(BigInt::from(-self.a), BigInt::from(self.b))
    }
}

impl fmt::Display for PoleCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(1-L^{}*T^{})", -self.a, self.b)?;
        if self.multiplicity > 1 {
            write!(f, "^{}", self.multiplicity)?;
        }
        Ok(())
    }
}

/// Denominator factors of `z` that survive exact cancellation against its
/// numerator in the free ring.
///
/// Factors with `m < 0` are rewritten as `(-nu, -m)`, which differs by a
/// unit; factors with `m = 0` are constant in `T` and are not reported.
pub fn pole_candidates(z: &RationalSeries) -> Vec<PoleCandidate> {
    let normalized = z.normalize();
    if normalized.is_zero() {
        return Vec::new();
    }
    let mut den: BTreeMap<FactorKey, u32> = BTreeMap::new();
    for (k, e) in &normalized.denominator {
        let key = match k.m {
            0 => continue,
            m if m < 0 => FactorKey::new(-k.nu, -m),
            _ => *k,
        };
        *den.entry(key).or_insert(0) += e;
    }
    let mut numerator: TPoly = normalized.numerator;
    let mut out = Vec::new();
    for (k, mut e) in den {
        let f = k.one_minus_a();
        while e > 0 {
            match numerator.exact_divide(&f) {
                Division::Quotient(q) => {
                    numerator = q;
                    e -= 1;
                }
                Division::NotDivisible => break,
            }
        }
        if e > 0 {
            out.push(PoleCandidate {
                a: k.nu,
                b: k.m,
                multiplicity: e,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Component;

    fn k(nu: i64, m: i64) -> FactorKey {
        FactorKey::new(nu, m)
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn single(m: i64, nu: i64, cover: RingElem, geom: RingElem) -> DivisorConfiguration {
        DivisorConfiguration::new(1, vec![Component::new("E1", m, nu)], vec![Stratum::new(["E1"], cover, Some(geom))])
    }

    fn two_curves(cover12: RingElem) -> DivisorConfiguration {
        DivisorConfiguration::new(
            2,
            vec![Component::new("E1", 2, 1), Component::new("E2", 3, 1)],
            vec![
                Stratum::new(["E1"], RingElem::named("Wc1"), Some(RingElem::named("Wg1"))),
                Stratum::new(["E2"], RingElem::named("Wc2"), Some(RingElem::named("Wg2"))),
                Stratum::new(["E1", "E2"], cover12, Some(RingElem::one())),
            ],
        )
    }

    #[test]
    fn zeta_single_factor() {
        let c = single(1, 0, RingElem::named("W1"), RingElem::one());
        let z = compute_zeta(&c).unwrap();
        assert_eq!(z.to_string(), "W1 * A(0,1)/(1-A(0,1))");
    }

    #[test]
    fn zeta_point_stratum_and_selection() {
        let c = two_curves(RingElem::mu(1));
        let z = compute_zeta(&c).unwrap();
        assert_eq!(z.coefficient(&[k(1, 2), k(1, 3)]), Some(&(RingElem::mu(1) * l_minus_1())));
        let only2 = c.clone().with_selection(["E2"]);
        let z2 = compute_zeta(&only2).unwrap();
        assert_eq!(z2.len(), 2);
        assert!(z2.coefficient(&[k(1, 2)]).is_none());
    }

    #[test]
    fn micc_and_limit() {
        let c = two_curves(RingElem::mu(1));
        let s = compute_micc(&c).unwrap();
        let expected = &(&RingElem::named("Wc1") + &RingElem::named("Wc2")) - &(RingElem::mu(1) * l_minus_1());
        assert_eq!(s, expected);
        assert!(check_limit_relation(&c).unwrap());
        let none = c.with_selection(Vec::<String>::new());
        assert_eq!(compute_micc(&none).unwrap(), RingElem::zero());
    }

    #[test]
    fn naive_point_stratum() {
        let c = two_curves(RingElem::mu(1));
        let n = compute_naive(&c).unwrap();
        assert_eq!(n.coefficient(&[k(1, 2), k(1, 3)]), Some(&l_minus_1().pow(2).unwrap()));
    }

    #[test]
    fn hodge_is_substituted_naive() {
        let c = single(1, 1, RingElem::one(), RingElem::l());
        let h = hodge_zeta(&c, &SymbolTable::new()).unwrap();
        let coeff = h.coefficient(&[k(1, 1)]).unwrap();
        assert_eq!(coeff, &(&uv() * &(&uv() - &QPoly::one())));
        assert_eq!(h.to_string(), "(u^2*v^2 - u*v) * (u*v)^-1*T^1/(1-(u*v)^-1*T^1)");
    }

    #[test]
    fn topological_examples() {
        let c = single(3, 2, RingElem::one(), RingElem::constant(2));
        assert_eq!(topological_zeta(&c, &SymbolTable::new()).unwrap().to_string(), "2 / (3*s + 2)");
        let c = DivisorConfiguration::new(
            2,
            vec![Component::new("E1", 1, 0), Component::new("E2", 1, 0)],
            vec![Stratum::new(["E1", "E2"], RingElem::one(), Some(RingElem::one()))],
        );
        assert_eq!(topological_zeta(&c, &SymbolTable::new()).unwrap().to_string(), "1 / s^2");
        let c = single(1, 0, RingElem::one(), RingElem::named("Wx"));
        assert!(matches!(topological_zeta(&c, &SymbolTable::new()), Err(ZetaError::Algebra(AlgebraError::MissingSymbol(_)))));
    }

    #[test]
    fn twisted_examples() {
        let c = single(4, 1, RingElem::mu(4), RingElem::one());
        let t = SymbolTable::new();
        assert_eq!(twisted_topological_zeta(&c, 2, &t).unwrap().to_string(), "1 / (4*s + 1)");
        assert!(twisted_topological_zeta(&c, 3, &t).unwrap().is_zero());
        assert_eq!(twisted_topological_zeta(&c, 1, &t).unwrap().to_string(), "1 / (4*s + 1)");
        assert_eq!(twisted_topological_zeta(&c, 0, &t), Err(ZetaError::InvalidOrder(0)));
    }

    #[test]
    fn stringy_examples() {
        let h1 = RingElem::named("Wh");
        let table: SymbolTable<QPoly> = [(Symbol::named("Wh").unwrap(), &QPoly::var("u") + &QPoly::integer(3))].into();
        let c = single(1, 1, RingElem::one(), h1.clone());
        assert_eq!(stringy_residue(&c, &table).unwrap(), RationalFunctionQ::from_poly(&(&QPoly::var("u") + &QPoly::integer(3))));
        let c = single(1, 2, RingElem::one(), h1);
        assert!(stringy_residue(&c, &table).unwrap().is_zero());
        let c = DivisorConfiguration::new(
            2,
            vec![Component::new("E1", 1, 1), Component::new("E2", 2, 2)],
            vec![Stratum::new(["E1", "E2"], RingElem::one(), Some(RingElem::one()))],
        );
        assert_eq!(stringy_residue(&c, &SymbolTable::new()), Err(ZetaError::HigherOrderPole));
    }

    #[test]
    fn pole_candidates_examples() {
        let z = RationalSeries::term(RingElem::named("W1"), [k(0, 1)]);
        let p = pole_candidates(&z);
        assert_eq!(p, vec![PoleCandidate { a: 0, b: 1, multiplicity: 1 }]);
        assert_eq!(p[0].s_value(), q(0));
        // T/(1-T) - T^2/(1-T^2) = T/(1-T^2): the (1-T) factor cancels
        let z = &RationalSeries::term(RingElem::one(), [k(0, 1)]) - &RationalSeries::term(RingElem::one(), [k(0, 2)]);
        assert_eq!(pole_candidates(&z), vec![PoleCandidate { a: 0, b: 2, multiplicity: 1 }]);
        assert!(pole_candidates(&RationalSeries::zero()).is_empty());
        let neg = RationalSeries::term(RingElem::one(), [k(2, -3)]);
        assert_eq!(pole_candidates(&neg), vec![PoleCandidate { a: -2, b: 3, multiplicity: 1 }]);
    }
}
