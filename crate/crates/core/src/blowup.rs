//! Blow-ups as rewrite rules on configurations, and invariance checks.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::algebra::{Normalized, RingElem};
use crate::model::{fmt_set, Component, DivisorConfiguration, Stratum};
use crate::zeta::{compute_micc, compute_naive, compute_zeta, ZetaError};

/// Classes of the center meeting the open stratum `I ∪ extra`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CenterStratum {
    pub extra: BTreeSet<String>,
    pub cover: RingElem,
    pub geom: Option<RingElem>,
}

impl CenterStratum {
    pub fn new<S: Into<String>>(extra: impl IntoIterator<Item = S>, cover: RingElem, geom: Option<RingElem>) -> Self {
        CenterStratum {
            extra: extra.into_iter().map(Into::into).collect(),
            cover,
            geom,
        }
    }

    fn is_zero(&self) -> bool {
        self.cover.is_zero() && self.geom.as_ref().map_or(true, RingElem::is_zero)
    }
}

/// A smooth center `Z` contained in `E_I` for the maximal `I = center_in`,
/// of codimension `codim` inside `E_I`, meeting the `transversal`
/// components transversally.
///
/// With `codim = 0` the center is `E_I` itself and its classes are read
/// from the configuration; otherwise `center_strata` lists them per subset
/// of `transversal`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlowupSpec {
    pub center_in: BTreeSet<String>,
    pub codim: i64,
    pub transversal: BTreeSet<String>,
    pub center_strata: Vec<CenterStratum>,
    pub new_id: String,
}

impl BlowupSpec {
    pub fn new<S: Into<String>>(center_in: impl IntoIterator<Item = S>, codim: i64, new_id: impl Into<String>) -> Self {
        BlowupSpec {
            center_in: center_in.into_iter().map(Into::into).collect(),
            codim,
            transversal: BTreeSet::new(),
            center_strata: Vec::new(),
            new_id: new_id.into(),
        }
    }

    pub fn with_transversal<S: Into<String>>(mut self, ids: impl IntoIterator<Item = S>) -> Self {
        self.transversal = ids.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_center(mut self, c: CenterStratum) -> Self {
        self.center_strata.push(c);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("invalid blow-up: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("blow-up #{index}: {source}")]
pub struct ScriptError {
    pub index: usize,
    pub source: BlowupError,
}

fn union(a: &BTreeSet<String>, b: &BTreeSet<String>) -> BTreeSet<String> {
    a.union(b).cloned().collect()
}

/// Center classes per `K ⊆ transversal`, resolved against the
/// configuration.
fn effective_centers(config: &DivisorConfiguration, spec: &BlowupSpec) -> Vec<CenterStratum> {
    if spec.codim == 0 {
        config
            .strata
            .iter()
            .filter(|s| s.comps.is_superset(&spec.center_in))
            .map(|s| CenterStratum {
                extra: s.comps.difference(&spec.center_in).cloned().collect(),
                cover: s.cover.clone(),
                geom: s.geom.clone(),
            })
            .collect()
    } else {
        spec.center_strata.clone()
    }
}

/// All rule violations of `spec` against `config` (including those of the
/// configuration itself). Empty means valid.
pub fn validate_blowup(config: &DivisorConfiguration, spec: &BlowupSpec) -> Vec<String> {
    let mut out = config.validate();
    let ids = config.ids();
    let k = spec.center_in.len() as i64;
    let c = spec.codim;
    if spec.center_in.is_empty() {
        out.push("center_in must be nonempty".into());
    }
    for id in spec.center_in.iter().chain(&spec.transversal) {
        if !ids.contains(id) {
            out.push(format!("dangling component id `{id}` in blow-up"));
        }
    }
    if let Some(id) = spec.center_in.intersection(&spec.transversal).next() {
        out.push(format!("component `{id}` is both in center_in and transversal"));
    }
    if c < 0 {
        out.push(format!("codim must be ≥ 0 (got {c})"));
    }
    if k + c < 2 {
        out.push(format!("ambient codimension < 2 (|center_in| + codim = {})", k + c));
    }
    if k + c > config.ambient_dim {
        out.push(format!(
            "center codimension {} exceeds ambient_dim {}",
            k + c,
            config.ambient_dim
        ));
    }
    if spec.new_id.is_empty() {
        out.push("new_id must be nonempty".into());
    } else if ids.contains(&spec.new_id) {
        out.push(format!("new_id `{}` collides with an existing component id", spec.new_id));
    }
    let mut seen = BTreeSet::new();
    for cs in &spec.center_strata {
        let name = fmt_set(&cs.extra);
        if !cs.extra.is_subset(&spec.transversal) {
            out.push(format!("center stratum extra {name} is not a subset of transversal"));
        }
        if !seen.insert(&cs.extra) {
            out.push(format!("duplicate center stratum extra {name}"));
        }
        if cs.geom.as_ref().is_some_and(RingElem::contains_mu) {
            out.push(format!("geom class of center stratum {name} contains mu symbols"));
        }
    }
    if c == 0 {
        if config.stratum(&spec.center_in).is_none() {
            out.push(format!("center stratum {} is missing", fmt_set(&spec.center_in)));
        }
        for s in config.strata.iter().filter(|s| s.comps.is_superset(&spec.center_in)) {
            if !s.comps.difference(&spec.center_in).all(|j| spec.transversal.contains(j)) {
                out.push(format!(
                    "stratum {} meets the center but its extra components are not transversal",
                    fmt_set(&s.comps)
                ));
            }
        }
        for cs in &spec.center_strata {
            let matches = config
                .stratum(&union(&spec.center_in, &cs.extra))
                .is_some_and(|s| s.cover == cs.cover && s.geom == cs.geom);
            if !matches {
                out.push(format!(
                    "center stratum extra {} disagrees with the configuration (codim 0 centers use the stratum classes)",
                    fmt_set(&cs.extra)
                ));
            }
        }
    } else {
        for s in config.strata.iter().filter(|s| s.comps.is_superset(&spec.center_in)) {
            let extra: BTreeSet<String> = s.comps.difference(&spec.center_in).cloned().collect();
            if extra.is_subset(&spec.transversal) && !spec.center_strata.iter().any(|cs| cs.extra == extra) {
                out.push(format!("center_strata entry missing for extra {}", fmt_set(&extra)));
            }
        }
        for cs in spec.center_strata.iter().filter(|cs| !cs.is_zero()) {
            let target = union(&spec.center_in, &cs.extra);
            if config.stratum(&target).is_none() {
                out.push(format!("nonzero center class over absent stratum {}", fmt_set(&target)));
            }
            if k + c + cs.extra.len() as i64 > config.ambient_dim {
                out.push(format!(
                    "center meets stratum {} in negative dimension",
                    fmt_set(&target)
                ));
            }
        }
    }
    out
}

fn opt_mul(a: &Option<RingElem>, b: &RingElem) -> Option<RingElem> {
    a.as_ref().map(|x| x * b)
}

/// The configuration after blowing up the center described by `spec`.
pub fn apply_blowup(config: &DivisorConfiguration, spec: &BlowupSpec) -> Result<DivisorConfiguration, BlowupError> {
    let violations = validate_blowup(config, spec);
    if !violations.is_empty() {
        return Err(BlowupError::Invalid(violations));
    }
    let k = spec.center_in.len();
    let c = spec.codim;
    let containing: Vec<&Component> = spec
        .center_in
        .iter()
        .map(|id| config.component(id).expect("validated"))
        .collect();
    let new_comp = Component::new(
        spec.new_id.clone(),
        containing.iter().map(|x| x.m).sum(),
        containing.iter().map(|x| x.nu).sum::<i64>() + c,
    );
    let centers = effective_centers(config, spec);
    let mut out = config.clone();
    out.components.push(new_comp);
    out.selection.insert(spec.new_id.clone());
    let l = RingElem::l();
    let l_minus_1 = &l - &RingElem::one();
    let l_c = RingElem::l_pow(c);
    let proper_subsets: Vec<BTreeSet<String>> = subsets(&spec.center_in).into_iter().filter(|g| g.len() < k).collect();
    let star: BTreeSet<String> = [spec.new_id.clone()].into();
    for z in &centers {
        let ik = union(&spec.center_in, &z.extra);
        if c == 0 {
            out.strata.retain(|s| s.comps != ik);
        } else if let Some(pos) = out.strata.iter().position(|s| s.comps == ik) {
            let s = &mut out.strata[pos];
            s.cover -= &z.cover;
            s.geom = match (&s.geom, &z.geom) {
                (Some(a), Some(b)) => Some(a - b),
                _ => None,
            };
            if s.cover.is_zero() && s.geom.as_ref().map_or(true, RingElem::is_zero) {
                out.strata.remove(pos);
            }
        }
        if z.is_zero() {
            continue;
        }
        for g in &proper_subsets {
            let mult = &l_c * &l_minus_1.pow((k - g.len() - 1) as i64).expect("nonnegative power");
            out.strata.push(Stratum {
                comps: union(&union(g, &z.extra), &star),
                cover: &z.cover * &mult,
                geom: opt_mul(&z.geom, &mult),
            });
        }
        if c >= 1 {
            let mult: RingElem = (0..c).map(RingElem::l_pow).sum();
            out.strata.push(Stratum {
                comps: union(&ik, &star),
                cover: &z.cover * &mult,
                geom: opt_mul(&z.geom, &mult),
            });
        }
    }
    Ok(out)
}

/// All subsets of `set`, in order of increasing size then lexicographic.
pub fn subsets(set: &BTreeSet<String>) -> Vec<BTreeSet<String>> {
    let items: Vec<&String> = set.iter().collect();
    let mut out: Vec<BTreeSet<String>> = (0u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, s)| (*s).clone())
                .collect()
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Outcome of comparing a configuration with its blow-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub zeta_equal: bool,
    /// `Z_before - Z_after` over its common denominator.
    pub witness: Normalized,
    /// `None` when some stratum lacks a geom class.
    pub naive_equal: Option<bool>,
    pub micc_equal: bool,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.zeta_equal && self.naive_equal != Some(false) && self.micc_equal
    }
}

/// Compares the zeta functions (and naive and cover variants) of two
/// configurations.
pub fn compare(before: &DivisorConfiguration, after: &DivisorConfiguration) -> Result<InvarianceReport, BlowupError> {
    let z1 = compute_zeta(before)?;
    let z2 = compute_zeta(after)?;
    let witness = (&z1 - &z2).normalize();
    let naive_equal = match (compute_naive(before), compute_naive(after)) {
        (Ok(a), Ok(b)) => Some(a.equals(&b)),
        (Err(ZetaError::MissingGeom(_)), _) | (_, Err(ZetaError::MissingGeom(_))) => None,
        (Err(e), _) | (_, Err(e)) => return Err(e.into()),
    };
    let micc_equal = compute_micc(before)? == compute_micc(after)?;
    Ok(InvarianceReport {
        zeta_equal: witness.is_zero(),
        witness,
        naive_equal,
        micc_equal,
    })
}

pub fn verify_invariance(config: &DivisorConfiguration, spec: &BlowupSpec) -> Result<InvarianceReport, BlowupError> {
    let after = apply_blowup(config, spec)?;
    compare(config, &after)
}

/// Left fold of [`apply_blowup`].
pub fn apply_script(config: &DivisorConfiguration, specs: &[BlowupSpec]) -> Result<DivisorConfiguration, ScriptError> {
    specs.iter().enumerate().try_fold(config.clone(), |acc, (index, spec)| {
        apply_blowup(&acc, spec).map_err(|source| ScriptError { index, source })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_ring;

    fn r(s: &str) -> RingElem {
        parse_ring(s).unwrap()
    }

    fn set(ids: &[&str]) -> BTreeSet<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    fn surface_double_point(m: (i64, i64), nu: (i64, i64)) -> DivisorConfiguration {
        DivisorConfiguration::new(
            2,
            vec![Component::new("E1", m.0, nu.0), Component::new("E2", m.1, nu.1)],
            vec![
                Stratum::new(["E1"], r("W1"), Some(r("Wg1"))),
                Stratum::new(["E2"], r("W2"), Some(r("Wg2"))),
                Stratum::new(["E1", "E2"], r("mu(1)"), Some(r("1"))),
            ],
        )
    }

    #[test]
    fn double_point_blowup_strata() {
        let c = surface_double_point((2, 3), (1, 1));
        let after = apply_blowup(&c, &BlowupSpec::new(["E1", "E2"], 0, "X")).unwrap();
        let x = after.component("X").unwrap();
        assert_eq!((x.m, x.nu), (5, 2));
        assert!(after.stratum(&set(&["E1", "E2"])).is_none());
        assert_eq!(after.stratum(&set(&["X"])).unwrap().cover, r("mu(1)*(L-1)"));
        assert_eq!(after.stratum(&set(&["E1", "X"])).unwrap().cover, r("mu(1)"));
        assert_eq!(after.stratum(&set(&["E2", "X"])).unwrap().cover, r("mu(1)"));
        assert!(after.selection.contains("X"));
        let rep = verify_invariance(&c, &BlowupSpec::new(["E1", "E2"], 0, "X")).unwrap();
        assert!(rep.holds());
        assert!(rep.witness.is_zero());
    }

    #[test]
    fn point_on_curve() {
        let c = DivisorConfiguration::new(
            2,
            vec![Component::new("E1", 2, 0)],
            vec![Stratum::new(["E1"], r("W1"), Some(r("Wg")))],
        );
        let spec = BlowupSpec::new(["E1"], 1, "X").with_center(CenterStratum::new(Vec::<String>::new(), r("mu(2)"), Some(r("1"))));
        let after = apply_blowup(&c, &spec).unwrap();
        assert_eq!(after.stratum(&set(&["X"])).unwrap().cover, r("mu(2)*L"));
        assert_eq!(after.stratum(&set(&["E1", "X"])).unwrap().cover, r("mu(2)"));
        assert_eq!(after.stratum(&set(&["E1"])).unwrap().cover, r("W1 - mu(2)"));
        let x = after.component("X").unwrap();
        assert_eq!((x.m, x.nu), (2, 1));
        assert!(verify_invariance(&c, &spec).unwrap().holds());
    }

    #[test]
    fn corrupted_discrepancy_breaks_invariance() {
        let c = surface_double_point((2, 3), (1, 1));
        let spec = BlowupSpec::new(["E1", "E2"], 0, "X");
        let mut after = apply_blowup(&c, &spec).unwrap();
        after.components.last_mut().unwrap().nu += 1;
        let rep = compare(&c, &after).unwrap();
        assert!(!rep.zeta_equal);
        assert!(!rep.witness.is_zero());
        assert_eq!(rep.naive_equal, Some(false));
    }

    #[test]
    fn validation() {
        let c = surface_double_point((1, 1), (0, 0));
        let v = validate_blowup(&c, &BlowupSpec::new(["E1"], 0, "X"));
        assert!(v.iter().any(|s| s.starts_with("ambient codimension < 2")));
        let v = validate_blowup(&c, &BlowupSpec::new(["E1", "E2"], 0, "E1"));
        assert!(v.iter().any(|s| s.contains("collides")));
        assert!(validate_blowup(&c, &BlowupSpec::new(["E1", "E2"], 0, "X")).is_empty());
        let v = validate_blowup(&c, &BlowupSpec::new(["E1"], 1, "X"));
        assert!(v.iter().any(|s| s.starts_with("center_strata entry missing")));
    }

    #[test]
    fn scripts() {
        let c = surface_double_point((1, 1), (0, 0));
        assert_eq!(apply_script(&c, &[]).unwrap(), c);
        let specs = [
            BlowupSpec::new(["E1", "E2"], 0, "X"),
            BlowupSpec::new(["E1", "X"], 0, "Y"),
        ];
        let out = apply_script(&c, &specs).unwrap();
        assert_eq!(out.components.len(), 4);
        assert!(compare(&c, &out).unwrap().holds());
        let bad = [BlowupSpec::new(["E1", "E2"], 0, "X"), BlowupSpec::new(["E1", "E2"], 0, "Y")];
        assert_eq!(apply_script(&c, &bad).unwrap_err().index, 1);
    }

    #[test]
    fn subset_order() {
        let s = subsets(&set(&["a", "b"]));
        assert_eq!(s, vec![set(&[]), set(&["a"]), set(&["b"]), set(&["a", "b"])]);
    }
}
