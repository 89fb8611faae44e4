//! The JSON configuration document.
//!
//! ```json
//! {
//!   "ambient_dim": 2,
//!   "components": [{"id": "E1", "m": 1, "nu": 0}],
//!   "strata": [{"components": ["E1"], "cover": "W1", "geom": "L"}],
//!   "selection": ["E1"],
//!   "blowups": [],
//!   "hodge_table": {"W1": "u*v + 1"},
//!   "chi_table": {"W1": 2}
//! }
//! ```
//!
//! `selection` defaults to every component; `geom`, `blowups` and the
//! tables are optional. Unknown keys are rejected.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{parse_qpoly, parse_ring, ParseError, QPoly, RingElem, Symbol};
use crate::blowup::{BlowupSpec, CenterStratum};
use crate::model::{Component, DivisorConfiguration, Stratum};

/// A parsed document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub config: DivisorConfiguration,
    pub blowups: Vec<BlowupSpec>,
    pub hodge_table: BTreeMap<Symbol, QPoly>,
    pub chi_table: BTreeMap<Symbol, i64>,
}

impl Document {
    pub fn new(config: DivisorConfiguration) -> Self {
        Document {
            config,
            blowups: Vec::new(),
            hodge_table: BTreeMap::new(),
            chi_table: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    /// JSON syntax or shape error.
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {error}")]
    Expr { path: String, error: ParseError },
    #[error("{}", .0.join("; "))]
    Invalid(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum Value {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    ambient_dim: i64,
    components: Vec<RawComponent>,
    strata: Vec<RawStratum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    selection: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    blowups: Vec<RawBlowup>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    hodge_table: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    chi_table: BTreeMap<String, i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComponent {
    id: String,
    m: i64,
    nu: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStratum {
    components: Vec<String>,
    cover: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geom: Option<Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBlowup {
    center_in: Vec<String>,
    codim: i64,
    #[serde(default)]
    transversal: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    center_strata: Vec<RawCenter>,
    new_id: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCenter {
    #[serde(default)]
    extra: Vec<String>,
    cover: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geom: Option<Value>,
}

fn ring(v: &Value, path: String) -> Result<RingElem, DocumentError> {
    match v {
        Value::Int(n) => Ok(RingElem::constant(*n)),
        Value::Text(s) => parse_ring(s).map_err(|error| DocumentError::Expr { path, error }),
    }
}

fn qpoly(v: &Value, path: String) -> Result<QPoly, DocumentError> {
    match v {
        Value::Int(n) => Ok(QPoly::integer(*n)),
        Value::Text(s) => parse_qpoly(s).map_err(|error| DocumentError::Expr { path, error }),
    }
}

fn id_set(ids: &[String], path: String) -> Result<BTreeSet<String>, DocumentError> {
    let set: BTreeSet<String> = ids.iter().cloned().collect();
    if set.len() != ids.len() {
        return Err(DocumentError::Schema {
            path,
            message: "duplicate component id in list".into(),
        });
    }
    Ok(set)
}

fn symbol(name: &str, path: &str) -> Result<Symbol, DocumentError> {
    Symbol::named(name).ok_or_else(|| DocumentError::Schema {
        path: format!("{path}.{name}"),
        message: "table keys must be symbols of the form W<identifier>".into(),
    })
}

/// Parses without running configuration validation.
pub fn parse_unchecked(text: &str) -> Result<Document, DocumentError> {
    let raw: RawDoc = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
        line: e.line(),
        column: e.column(),
        message: strip_location(&e.to_string()),
    })?;
    let components = raw
        .components
        .iter()
        .map(|c| Component::new(c.id.clone(), c.m, c.nu))
        .collect::<Vec<_>>();
    let mut strata = Vec::with_capacity(raw.strata.len());
    for (i, s) in raw.strata.iter().enumerate() {
        let p = format!("strata[{i}]");
        strata.push(Stratum {
            comps: id_set(&s.components, format!("{p}.components"))?,
            cover: ring(&s.cover, format!("{p}.cover"))?,
            geom: s.geom.as_ref().map(|g| ring(g, format!("{p}.geom"))).transpose()?,
        });
    }
    let mut config = DivisorConfiguration::new(raw.ambient_dim, components, strata);
    if let Some(sel) = &raw.selection {
        config.selection = id_set(sel, "selection".into())?;
    }
    let mut blowups = Vec::with_capacity(raw.blowups.len());
    for (i, b) in raw.blowups.iter().enumerate() {
        let p = format!("blowups[{i}]");
        let mut center_strata = Vec::with_capacity(b.center_strata.len());
        for (j, c) in b.center_strata.iter().enumerate() {
            let q = format!("{p}.center_strata[{j}]");
            center_strata.push(CenterStratum {
                extra: id_set(&c.extra, format!("{q}.extra"))?,
                cover: ring(&c.cover, format!("{q}.cover"))?,
                geom: c.geom.as_ref().map(|g| ring(g, format!("{q}.geom"))).transpose()?,
            });
        }
        blowups.push(BlowupSpec {
            center_in: id_set(&b.center_in, format!("{p}.center_in"))?,
            codim: b.codim,
            transversal: id_set(&b.transversal, format!("{p}.transversal"))?,
            center_strata,
            new_id: b.new_id.clone(),
        });
    }
    let mut hodge_table = BTreeMap::new();
    for (k, v) in &raw.hodge_table {
        hodge_table.insert(symbol(k, "hodge_table")?, qpoly(v, format!("hodge_table.{k}"))?);
    }
    let mut chi_table = BTreeMap::new();
    for (k, v) in &raw.chi_table {
        chi_table.insert(symbol(k, "chi_table")?, *v);
    }
    Ok(Document {
        config,
        blowups,
        hodge_table,
        chi_table,
    })
}

fn strip_location(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Parses a document and validates its configuration.
pub fn parse_config(text: &str) -> Result<Document, DocumentError> {
    let doc = parse_unchecked(text)?;
    let v = doc.config.validate();
    if v.is_empty() {
        Ok(doc)
    } else {
        Err(DocumentError::Invalid(v))
    }
}

fn text(r: &RingElem) -> Value {
    Value::Text(r.to_string())
}

fn ids(s: &BTreeSet<String>) -> Vec<String> {
    s.iter().cloned().collect()
}

/// Canonical pretty-printed JSON; [`parse_config`] reads it back to an
/// equal document.
pub fn format_config(doc: &Document) -> String {
    let c = &doc.config;
    let raw = RawDoc {
        ambient_dim: c.ambient_dim,
        components: c
            .components
            .iter()
            .map(|x| RawComponent {
                id: x.id.clone(),
                m: x.m,
                nu: x.nu,
            })
            .collect(),
        strata: c
            .strata
            .iter()
            .map(|s| RawStratum {
                components: ids(&s.comps),
                cover: text(&s.cover),
                geom: s.geom.as_ref().map(text),
            })
            .collect(),
        selection: Some(ids(&c.selection)),
        blowups: doc
            .blowups
            .iter()
            .map(|b| RawBlowup {
                center_in: ids(&b.center_in),
                codim: b.codim,
                transversal: ids(&b.transversal),
                center_strata: b
                    .center_strata
                    .iter()
                    .map(|z| RawCenter {
                        extra: ids(&z.extra),
                        cover: text(&z.cover),
                        geom: z.geom.as_ref().map(text),
                    })
                    .collect(),
                new_id: b.new_id.clone(),
            })
            .collect(),
        hodge_table: doc
            .hodge_table
            .iter()
            .map(|(k, v)| (k.to_string(), Value::Text(v.to_string())))
            .collect(),
        chi_table: doc.chi_table.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("serializable");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"ambient_dim": 1, "components": [{"id": "E1", "m": 1, "nu": 0}],
        "strata": [{"components": ["E1"], "cover": "W1"}]}"#;

    #[test]
    fn minimal_document() {
        let doc = parse_config(MINIMAL).unwrap();
        assert_eq!(doc.config.selection, ["E1".to_string()].into());
        assert_eq!(doc.config.strata[0].cover, RingElem::named("W1"));
        assert!(doc.config.strata[0].geom.is_none());
    }

    #[test]
    fn round_trip() {
        let src = r#"{"ambient_dim": 2,
          "components": [{"id": "E1", "m": 2, "nu": 1}, {"id": "E2", "m": 3, "nu": -1}],
          "strata": [{"components": ["E2", "E1"], "cover": "mu(1)*(L-1)^2", "geom": 1}],
          "selection": ["E2"],
          "blowups": [{"center_in": ["E1"], "codim": 1, "transversal": ["E2"],
                       "center_strata": [{"extra": ["E2"], "cover": "mu(1)", "geom": "1"}], "new_id": "X"}],
          "hodge_table": {"Wa": "u*v/2 - u^-1"}, "chi_table": {"Wa": -3}}"#;
        let doc = parse_config(src).unwrap();
        let text = format_config(&doc);
        let again = parse_config(&text).unwrap();
        assert_eq!(again, doc);
        assert_eq!(format_config(&again), text);
    }

    #[test]
    fn errors_carry_locations() {
        let bad_m = MINIMAL.replace("\"m\": 1", "\"m\": 0");
        match parse_config(&bad_m) {
            Err(DocumentError::Invalid(v)) => assert!(v[0].starts_with("finite-type: m must be ≥ 1")),
            other => panic!("{other:?}"),
        }
        let bad_expr = MINIMAL.replace("\"W1\"", "\"mu(2\"");
        match parse_config(&bad_expr) {
            Err(DocumentError::Expr { path, error }) => {
                assert_eq!(path, "strata[0].cover");
                assert_eq!(error.column, 5);
            }
            other => panic!("{other:?}"),
        }
        let unknown = MINIMAL.replace("\"ambient_dim\"", "\"colour\": 1, \"ambient_dim\"");
        assert!(matches!(parse_config(&unknown), Err(DocumentError::Syntax { line: 1, .. })));
        assert!(matches!(parse_config("{"), Err(DocumentError::Syntax { .. })));
    }
}
