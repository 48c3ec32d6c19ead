//! JSON workbench configuration. Integers may be given as decimal strings
//! (arbitrary size) or JSON numbers; rationals as "a/b".

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::curve::{Curve, EllipticCurve};
use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::htp::{parse_element, Caps, HtpSetup};

pub const BUILTIN: &str = include_str!("../../../configs/workbench.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldBlock {
    pub label: String,
    /// Ascending coefficients of the monic minimal polynomial.
    pub min_poly: Vec<Value>,
    pub class_number: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveBlock {
    pub label: String,
    pub field: String,
    /// a1, a2, a3, a4, a6 as coordinate vectors (or plain integers).
    pub a: Vec<Value>,
    pub generator: [Value; 2],
    #[serde(default)]
    pub rank_assertion: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HtpBlock {
    pub field: String,
    /// Rank-one curve over the field.
    pub curve: String,
    /// Curve over Q feeding the division-ample set.
    pub source_curve: String,
    #[serde(default)]
    pub rank_assertion: Option<String>,
    /// Asserted index [E(K):E(Q)].
    #[serde(default = "one")]
    pub index: u64,
}

fn one() -> u64 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorusBlock {
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "L")]
    pub l: String,
    #[serde(rename = "KL")]
    pub kl: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CapsBlock {
    #[serde(default = "default_max_index")]
    pub max_index: u64,
    #[serde(default = "default_scan_cap")]
    pub scan_cap: u64,
    #[serde(default = "default_search_q")]
    pub search_q: i64,
    #[serde(default = "default_precision")]
    pub precision_bits: u32,
    #[serde(default = "default_torsion_cap")]
    pub torsion_cap: u64,
}

fn default_max_index() -> u64 {
    20_000
}
fn default_scan_cap() -> u64 {
    20
}
fn default_search_q() -> i64 {
    3
}
fn default_precision() -> u32 {
    4096
}
fn default_torsion_cap() -> u64 {
    50
}

impl Default for CapsBlock {
    fn default() -> Self {
        CapsBlock {
            max_index: default_max_index(),
            scan_cap: default_scan_cap(),
            search_q: default_search_q(),
            precision_bits: default_precision(),
            torsion_cap: default_torsion_cap(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WorkbenchConfig {
    pub fields: Vec<FieldBlock>,
    #[serde(default)]
    pub curves: Vec<CurveBlock>,
    #[serde(default)]
    pub htp: Vec<HtpBlock>,
    #[serde(default)]
    pub torus: Vec<TorusBlock>,
    #[serde(default)]
    pub caps: CapsBlock,
    #[serde(default)]
    pub format: Option<String>,
}

pub fn parse_bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| Error::ConfigParse(format!("bad integer {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().unwrap()),
        _ => Err(Error::ConfigParse(format!("expected an integer, got {v}"))),
    }
}

/// A field element from a coordinate list or a bare integer/rational.
pub fn parse_field_value(k: &NumberField, v: &Value) -> Result<FieldElement> {
    match v {
        Value::Array(_) => parse_element(k, v),
        other => parse_element(k, &Value::Array(vec![other.clone()])),
    }
}

impl WorkbenchConfig {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ConfigParse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("bundled configuration parses")
    }
}

/// A configuration with its fields and curves constructed.
#[derive(Clone, Debug)]
pub struct Workbench {
    pub config: WorkbenchConfig,
    pub fields: BTreeMap<String, NumberField>,
    pub curves: BTreeMap<String, Curve>,
}

impl Workbench {
    pub fn new(config: WorkbenchConfig) -> Result<Self> {
        let mut fields = BTreeMap::new();
        for fb in &config.fields {
            let poly = fb.min_poly.iter().map(parse_bigint).collect::<Result<Vec<_>>>()?;
            let k = NumberField::with_label(&fb.label, poly, fb.class_number)?;
            fields.insert(fb.label.clone(), k);
        }
        let mut curves = BTreeMap::new();
        for cb in &config.curves {
            let k = fields
                .get(&cb.field)
                .ok_or_else(|| Error::ConfigParse(format!("curve {} references unknown field {}", cb.label, cb.field)))?;
            if cb.a.len() != 5 {
                return Err(Error::ConfigParse(format!("curve {} needs five coefficients", cb.label)));
            }
            let a: Vec<FieldElement> = cb.a.iter().map(|v| parse_field_value(k, v)).collect::<Result<_>>()?;
            let a: [FieldElement; 5] = a.try_into().unwrap();
            let g = (parse_field_value(k, &cb.generator[0])?, parse_field_value(k, &cb.generator[1])?);
            curves.insert(cb.label.clone(), EllipticCurve::new(&cb.label, k, a, g, &cb.rank_assertion)?);
        }
        for tb in &config.torus {
            for l in [&tb.k, &tb.l, &tb.kl] {
                if !fields.contains_key(l) {
                    return Err(Error::ConfigParse(format!("torus block references unknown field {l}")));
                }
            }
        }
        Ok(Workbench { config, fields, curves })
    }

    pub fn builtin() -> Self {
        Self::new(WorkbenchConfig::builtin()).expect("bundled configuration is valid")
    }

    pub fn field(&self, label: &str) -> Result<&NumberField> {
        self.fields.get(label).ok_or_else(|| Error::ConfigParse(format!("unknown field {label}")))
    }

    pub fn curve(&self, label: &str) -> Result<&Curve> {
        self.curves.get(label).ok_or_else(|| Error::ConfigParse(format!("unknown curve {label}")))
    }

    pub fn caps(&self) -> Caps {
        let c = &self.config.caps;
        Caps { max_index: c.max_index, precision_bits: c.precision_bits, fallback_q: c.search_q }
    }

    /// The integrality setup configured for a field.
    pub fn htp_setup(&self, field: &str) -> Result<HtpSetup> {
        let hb = self
            .config
            .htp
            .iter()
            .find(|h| h.field == field)
            .ok_or_else(|| Error::ConfigParse(format!("no htp block for field {field}")))?;
        let curve = self.curve(&hb.curve)?;
        if curve.field().label() != field {
            return Err(Error::ConfigParse(format!("curve {} is not over {field}", hb.curve)));
        }
        let src = self.curve(&hb.source_curve)?;
        HtpSetup::build(curve, src, hb.rank_assertion.as_deref(), hb.index, self.config.caps.scan_cap, self.caps())
    }
}
