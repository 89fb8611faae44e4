//! Combinatorial resolution data: components, strata and the selection set.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use thiserror::Error;

use crate::algebra::{FactorKey, RingElem};

/// An irreducible component with holonomy multiplicity `m` and log
/// discrepancy `nu`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Component {
    pub id: String,
    pub m: i64,
    pub nu: i64,
}

impl Component {
    pub fn new(id: impl Into<String>, m: i64, nu: i64) -> Self {
        Component {
            id: id.into(),
            m,
            nu,
        }
    }

    pub fn factor(&self) -> FactorKey {
        FactorKey::new(self.nu, self.m)
    }
}

/// An open stratum: points lying on exactly the components in `comps`.
///
/// `cover` is the class of its unramified cover with the monodromy action,
/// `geom` the plain class of the stratum (no `mu` symbols).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Stratum {
    pub comps: BTreeSet<String>,
    pub cover: RingElem,
    pub geom: Option<RingElem>,
}

impl Stratum {
    pub fn new<S: Into<String>>(comps: impl IntoIterator<Item = S>, cover: RingElem, geom: Option<RingElem>) -> Self {
        Stratum {
            comps: comps.into_iter().map(Into::into).collect(),
            cover,
            geom,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorConfiguration {
    pub ambient_dim: i64,
    pub components: Vec<Component>,
    /// In document order; absent strata are empty.
    pub strata: Vec<Stratum>,
    pub selection: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid configuration: {}", .0.join("; "))]
    Invalid(Vec<String>),
    #[error("empty component set")]
    EmptySet,
    #[error("unknown component id `{0}`")]
    UnknownId(String),
}

/// Renders a set of ids as `{a,b}`.
pub fn fmt_set(ids: &BTreeSet<String>) -> String {
    let v: Vec<&str> = ids.iter().map(String::as_str).collect();
    format!("{{{}}}", v.join(","))
}

impl DivisorConfiguration {
    /// A configuration whose selection is every component.
    pub fn new(ambient_dim: i64, components: Vec<Component>, strata: Vec<Stratum>) -> Self {
        let selection = components.iter().map(|c| c.id.clone()).collect();
        DivisorConfiguration {
            ambient_dim,
            components,
            strata,
            selection,
        }
    }

    pub fn with_selection<S: Into<String>>(mut self, selection: impl IntoIterator<Item = S>) -> Self {
        self.selection = selection.into_iter().map(Into::into).collect();
        self
    }

    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn ids(&self) -> BTreeSet<String> {
        self.components.iter().map(|c| c.id.clone()).collect()
    }

    pub fn stratum(&self, comps: &BTreeSet<String>) -> Option<&Stratum> {
        self.strata.iter().find(|s| &s.comps == comps)
    }

    pub fn is_selected(&self, comps: &BTreeSet<String>) -> bool {
        comps.iter().any(|c| self.selection.contains(c))
    }

    /// Factor keys of the components in `comps`, sorted.
    pub fn factors(&self, comps: &BTreeSet<String>) -> Result<Vec<FactorKey>, ModelError> {
        let mut out = comps
            .iter()
            .map(|id| {
                self.component(id)
                    .map(Component::factor)
                    .ok_or_else(|| ModelError::UnknownId(id.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        out.sort();
        Ok(out)
    }

    /// All rule violations, in a stable order. Empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.ambient_dim < 1 {
            out.push(format!("ambient_dim must be ≥ 1 (got {})", self.ambient_dim));
        }
        let mut seen = BTreeSet::new();
        for c in &self.components {
            if !seen.insert(c.id.as_str()) {
                out.push(format!("duplicate component id `{}`", c.id));
            }
            if c.m < 1 {
                out.push(format!("finite-type: m must be ≥ 1 (component `{}` has m = {})", c.id, c.m));
            }
        }
        let mut seen_strata = BTreeSet::new();
        for s in &self.strata {
            let name = fmt_set(&s.comps);
            if s.comps.is_empty() {
                out.push("empty stratum component set".to_string());
            }
            for id in &s.comps {
                if !seen.contains(id.as_str()) {
                    out.push(format!("dangling component id `{id}` in stratum {name}"));
                }
            }
            if s.comps.len() as i64 > self.ambient_dim {
                out.push(format!(
                    "stratum {name} has {} components, more than ambient_dim {}",
                    s.comps.len(),
                    self.ambient_dim
                ));
            }
            if !seen_strata.insert(&s.comps) {
                out.push(format!("duplicate stratum {name}"));
            }
            if s.geom.as_ref().is_some_and(RingElem::contains_mu) {
                out.push(format!("geom class of stratum {name} contains mu symbols"));
            }
        }
        for id in &self.selection {
            if !seen.contains(id.as_str()) {
                out.push(format!("dangling component id `{id}` in selection"));
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), ModelError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(v))
        }
    }

    /// Multiplicities by id, for quick lookups.
    pub fn multiplicities(&self) -> BTreeMap<&str, i64> {
        self.components.iter().map(|c| (c.id.as_str(), c.m)).collect()
    }
}

/// `gcd(m_i : i in comps)`, the index of the image of the holonomy on a
/// small torus around the stratum.
pub fn stratum_gcd(config: &DivisorConfiguration, comps: &BTreeSet<String>) -> Result<i64, ModelError> {
    if comps.is_empty() {
        return Err(ModelError::EmptySet);
    }
    let ms = config.multiplicities();
    comps.iter().try_fold(0i64, |g, id| {
        let m = ms.get(id.as_str()).ok_or_else(|| ModelError::UnknownId(id.clone()))?;
        Ok(g.gcd(m))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[&str]) -> BTreeSet<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    fn two_curves() -> DivisorConfiguration {
        DivisorConfiguration::new(
            2,
            vec![Component::new("E1", 2, 1), Component::new("E2", 3, 1)],
            vec![
                Stratum::new(["E1"], RingElem::named("W1"), Some(RingElem::named("Wg1"))),
                Stratum::new(["E2"], RingElem::named("W2"), None),
                Stratum::new(["E1", "E2"], RingElem::mu(1), Some(RingElem::one())),
            ],
        )
    }

    #[test]
    fn valid_config_has_no_violations() {
        assert!(two_curves().validate().is_empty());
    }

    #[test]
    fn violations() {
        let mut c = two_curves();
        c.components[0].m = 0;
        c.strata.push(Stratum::new(["E9"], RingElem::one(), None));
        c.strata.push(Stratum::new(["E1"], RingElem::one(), Some(RingElem::mu(2))));
        let v = c.validate();
        assert!(v.iter().any(|s| s.starts_with("finite-type: m must be ≥ 1")));
        assert!(v.iter().any(|s| s.starts_with("dangling component id")));
        assert!(v.iter().any(|s| s.starts_with("duplicate stratum")));
        assert!(v.iter().any(|s| s.contains("contains mu symbols")));
        assert_eq!(c.validate(), v);
    }

    #[test]
    fn oversized_and_duplicate_ids() {
        let mut c = two_curves();
        c.ambient_dim = 1;
        c.components.push(Component::new("E1", 1, 0));
        let v = c.validate();
        assert!(v.iter().any(|s| s.contains("more than ambient_dim")));
        assert!(v.iter().any(|s| s.starts_with("duplicate component id")));
    }

    #[test]
    fn gcds() {
        let c = DivisorConfiguration::new(
            3,
            vec![Component::new("a", 6, 0), Component::new("b", 4, 0), Component::new("c", 10, 0)],
            vec![],
        );
        assert_eq!(stratum_gcd(&c, &set(&["a", "b", "c"])), Ok(2));
        assert_eq!(stratum_gcd(&c, &set(&["c"])), Ok(10));
        assert_eq!(stratum_gcd(&c, &set(&[])), Err(ModelError::EmptySet));
        assert!(stratum_gcd(&c, &set(&["z"])).is_err());
    }
}
