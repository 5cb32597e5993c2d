//! On-disk schemas for vanishing instances and filtration scans. The JSON
//! forms mirror the internal types field by field, with rationals written as
//! strings; every record carries a `schema_version`.

use crate::filtration::{PointSym, ZeroCycleExpr};
use crate::hilb::{AlphaExpr, InstanceSpec};
use crate::rational::parse_q;
use crate::Error;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub n: u32,
    pub k: u32,
    pub l: u32,
    pub alpha: AlphaNode,
    #[serde(default)]
    pub omega: Vec<u32>,
    #[serde(default)]
    pub theta: Vec<u32>,
    /// Main factor (as a string key, JSON object keys are strings) to
    /// auxiliary factor.
    #[serde(default)]
    pub assignment: BTreeMap<String, u32>,
    pub indices: Vec<u32>,
}

fn default_schema_version() -> u32 {
    1
}

/// Expression tree for alpha. Externally tagged, so leaves read as
/// `{"cx": {"aux": 1}}`, `{"div": {"aux": 1, "basis": 0}}`,
/// `{"diag": {"aux": [1, 2]}}`, `{"ch": {"aux": 1, "degree": 2}}`,
/// `{"const": "3/2"}`, and nodes as `{"sum": [...]}` / `{"product": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AlphaNode {
    #[serde(rename = "const")]
    Const(String),
    #[serde(rename = "sum")]
    Sum(Vec<AlphaNode>),
    #[serde(rename = "product")]
    Product(Vec<AlphaNode>),
    #[serde(rename = "cx")]
    Cx { aux: u32 },
    #[serde(rename = "div")]
    Div { aux: u32, basis: u32 },
    #[serde(rename = "diag")]
    Diag { aux: Vec<u32> },
    #[serde(rename = "ch")]
    Ch {
        aux: u32,
        degree: u32,
        #[serde(default = "default_true")]
        normalized: bool,
    },
}

fn default_true() -> bool {
    true
}

impl AlphaNode {
    pub fn to_expr(&self) -> Result<AlphaExpr, Error> {
        Ok(match self {
            AlphaNode::Const(s) => AlphaExpr::Const(parse_q(s)?),
            AlphaNode::Sum(items) => AlphaExpr::Sum(
                items
                    .iter()
                    .map(|i| i.to_expr())
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            AlphaNode::Product(items) => AlphaExpr::Product(
                items
                    .iter()
                    .map(|i| i.to_expr())
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            AlphaNode::Cx { aux } => AlphaExpr::Cx { aux: *aux },
            AlphaNode::Div { aux, basis } => AlphaExpr::Div {
                aux: *aux,
                basis: *basis,
            },
            AlphaNode::Diag { aux } => {
                if aux.len() != 2 {
                    return Err(Error::input(
                        "diag needs exactly two auxiliary factor indices",
                    ));
                }
                AlphaExpr::Diag {
                    aux: (aux[0], aux[1]),
                }
            }
            AlphaNode::Ch {
                aux,
                degree,
                normalized,
            } => AlphaExpr::Ch {
                aux: *aux,
                degree: *degree,
                normalized: *normalized,
            },
        })
    }

    pub fn from_expr(e: &AlphaExpr) -> AlphaNode {
        match e {
            AlphaExpr::Const(c) => AlphaNode::Const(c.to_string()),
            AlphaExpr::Sum(items) => AlphaNode::Sum(items.iter().map(Self::from_expr).collect()),
            AlphaExpr::Product(items) => {
                AlphaNode::Product(items.iter().map(Self::from_expr).collect())
            }
            AlphaExpr::Cx { aux } => AlphaNode::Cx { aux: *aux },
            AlphaExpr::Div { aux, basis } => AlphaNode::Div {
                aux: *aux,
                basis: *basis,
            },
            AlphaExpr::Diag { aux } => AlphaNode::Diag {
                aux: vec![aux.0, aux.1],
            },
            AlphaExpr::Ch {
                aux,
                degree,
                normalized,
            } => AlphaNode::Ch {
                aux: *aux,
                degree: *degree,
                normalized: *normalized,
            },
        }
    }
}

impl InstanceFile {
    pub fn from_json_str(s: &str) -> Result<InstanceFile, Error> {
        serde_json::from_str(s).map_err(|e| {
            Error::input(format!(
                "malformed instance JSON at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }

    pub fn to_spec(&self) -> Result<InstanceSpec, Error> {
        if self.schema_version != 1 {
            return Err(Error::input(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        let omega: BTreeSet<u32> = self.omega.iter().copied().collect();
        if omega.len() != self.omega.len() {
            return Err(Error::input("omega has repeated entries"));
        }
        let theta: BTreeSet<u32> = self.theta.iter().copied().collect();
        if theta.len() != self.theta.len() {
            return Err(Error::input("theta has repeated entries"));
        }
        let mut assignment = BTreeMap::new();
        for (key, &aux) in &self.assignment {
            let t: u32 = key
                .parse()
                .map_err(|_| Error::input(format!("assignment key `{key}` is not an integer")))?;
            assignment.insert(t, aux);
        }
        let spec = InstanceSpec {
            n: self.n,
            k: self.k,
            l: self.l,
            alpha: self.alpha.to_expr()?,
            omega,
            theta,
            assignment,
            indices: self.indices.clone(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_spec(spec: &InstanceSpec) -> InstanceFile {
        InstanceFile {
            schema_version: 1,
            n: spec.n,
            k: spec.k,
            l: spec.l,
            alpha: AlphaNode::from_expr(&spec.alpha),
            omega: spec.omega.iter().copied().collect(),
            theta: spec.theta.iter().copied().collect(),
            assignment: spec
                .assignment
                .iter()
                .map(|(t, s)| (t.to_string(), *s))
                .collect(),
            indices: spec.indices.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// Filtration scan files
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationFile {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub cycles: Vec<CycleEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleEntry {
    pub name: String,
    /// Formal point id -> rational coefficient string.
    #[serde(default)]
    pub points: BTreeMap<String, String>,
    /// Coefficient of `c_X`.
    #[serde(default)]
    pub cx: Option<String>,
    /// Point ids declared to lie on a rational curve (so their class is
    /// `c_X`).
    #[serde(default)]
    pub on_rational_curve: Vec<u32>,
    #[serde(default = "default_max_index")]
    pub max_index: usize,
}

fn default_max_index() -> usize {
    6
}

impl FiltrationFile {
    pub fn from_json_str(s: &str) -> Result<FiltrationFile, Error> {
        serde_json::from_str(s).map_err(|e| {
            Error::input(format!(
                "malformed filtration JSON at line {}, column {}: {e}",
                e.line(),
                e.column()
            ))
        })
    }
}

impl CycleEntry {
    pub fn to_cycle(&self) -> Result<ZeroCycleExpr, Error> {
        let mut terms = Vec::new();
        for (id, coeff) in &self.points {
            let id: u32 = id
                .parse()
                .map_err(|_| Error::input(format!("point id `{id}` is not an integer")))?;
            terms.push((PointSym::Formal(id), parse_q(coeff)?));
        }
        if let Some(cx) = &self.cx {
            terms.push((PointSym::Cx, parse_q(cx)?));
        }
        let rc: BTreeSet<u32> = self.on_rational_curve.iter().copied().collect();
        Ok(ZeroCycleExpr::new(terms, &rc))
    }
}
