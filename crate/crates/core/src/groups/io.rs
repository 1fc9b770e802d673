//! JSON files for groups and multiplicities.

use std::path::Path;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{CMatrix, Family, Multiplicity, ReflectionGroup};
use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::parse::parse_scalar;
use crate::scalar::{rat_to_string, Rat};

/// `{"family": ..., "params": {...}, "conductor": N, "generators": [matrix, ...]}`.
///
/// Matrix entries are either canonical cyclotomic JSON objects, integers, or
/// strings in the polynomial text syntax (`"1/2"`, `"-z3^2"`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: String,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Vec<Vec<Value>>>,
}

fn param(params: &Map<String, Value>, key: &str) -> Result<u32> {
    params
        .get(key)
        .and_then(Value::as_u64)
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| Error::Parse(format!("missing integer parameter {key:?}")))
}

/// Conductors mentioned by `zN` tokens in a string entry.
fn text_conductor(s: &str) -> u32 {
    let b = s.as_bytes();
    let mut n = 1u32;
    let mut i = 0;
    while i < b.len() {
        if b[i] == b'z' {
            let start = i + 1;
            let mut j = start;
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            if let Ok(m) = s[start..j].parse::<u32>() {
                n = n.lcm(&m);
            }
            i = j;
        } else {
            i += 1;
        }
    }
    n
}

fn entry_conductor(v: &Value) -> u32 {
    match v {
        Value::Object(o) => o.get("N").and_then(Value::as_u64).map(|n| n as u32).unwrap_or(1),
        Value::String(s) => text_conductor(s),
        _ => 1,
    }
}

fn parse_entry(v: &Value, conductor: u32) -> Result<CycNum> {
    match v {
        Value::Object(_) => CycNum::from_json(v)?.embed(conductor),
        Value::String(s) => parse_scalar(s, conductor),
        Value::Number(n) => n
            .as_i64()
            .map(CycNum::from_int)
            .ok_or_else(|| Error::Parse(format!("matrix entry {n} is not an integer"))),
        other => Err(Error::Parse(format!("unsupported matrix entry {other}"))),
    }
}

impl GroupSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("group file: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn from_family(family: &Family) -> Self {
        let (name, params) = match *family {
            Family::Cyclic { n } => ("cyclic", serde_json::json!({ "n": n })),
            Family::Dihedral { m } => ("dihedral", serde_json::json!({ "m": m })),
            Family::Symmetric { n } => ("symmetric", serde_json::json!({ "n": n })),
            Family::G { m, p, n } => ("G", serde_json::json!({ "m": m, "p": p, "n": n })),
            Family::Explicit => ("explicit", serde_json::json!({})),
        };
        GroupSpec {
            family: name.into(),
            params: params.as_object().cloned().unwrap_or_default(),
            conductor: None,
            generators: Vec::new(),
        }
    }

    /// Explicit spec carrying the generator matrices of a built group.
    pub fn from_group(g: &ReflectionGroup) -> Self {
        let generators = g
            .generators
            .iter()
            .map(|&s| g.elements[s].to_rows().iter().map(|r| r.iter().map(|x| x.to_json_in(g.conductor)).collect()).collect())
            .collect();
        GroupSpec {
            family: "explicit".into(),
            params: Map::new(),
            conductor: Some(g.conductor),
            generators,
        }
    }

    pub fn family(&self) -> Result<Family> {
        let p = &self.params;
        Ok(match self.family.as_str() {
            "cyclic" => Family::Cyclic { n: param(p, "n")? },
            "dihedral" => Family::Dihedral { m: param(p, "m")? },
            "symmetric" => Family::Symmetric { n: param(p, "n")? },
            "G" => Family::G { m: param(p, "m")?, p: param(p, "p")?, n: param(p, "n")? },
            "explicit" => Family::Explicit,
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        })
    }

    /// Generator matrices in a common field.
    pub fn matrices(&self) -> Result<Vec<CMatrix>> {
        let conductor = match self.conductor {
            Some(n) if n > 0 => n,
            Some(_) => return Err(Error::Parse("conductor must be positive".into())),
            None => self
                .generators
                .iter()
                .flatten()
                .flatten()
                .fold(2u32, |acc, v| acc.lcm(&entry_conductor(v))),
        };
        self.generators
            .iter()
            .map(|rows| {
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(|v| parse_entry(v, conductor)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
                    return Err(Error::Parse("generator matrices must be square and nonempty".into()));
                }
                Ok(Matrix::from_rows(rows))
            })
            .collect()
    }

    pub fn build(&self, cap: usize) -> Result<ReflectionGroup> {
        let family = self.family()?;
        if family == Family::Explicit || !self.generators.is_empty() {
            ReflectionGroup::generate(family, self.matrices()?, cap)
        } else {
            family.build(cap)
        }
    }
}

/// `{"orbits": [[k_{C,0}, k_{C,1}, ...], ...]}`; entries are numbers or
/// rational strings like `"1/2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityFile {
    pub orbits: Vec<Vec<Value>>,
}

impl MultiplicityFile {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("multiplicity file: {e}")))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn from_multiplicity(k: &Multiplicity) -> Self {
        MultiplicityFile {
            orbits: k.orbits().iter().map(|v| v.iter().map(|x| Value::String(rat_to_string(x))).collect()).collect(),
        }
    }

    /// Validates against the group; `k_{C,0} != 0` is an error.
    pub fn to_multiplicity(&self, g: &ReflectionGroup) -> Result<Multiplicity> {
        let values = self
            .orbits
            .iter()
            .map(|orbit| {
                orbit
                    .iter()
                    .map(|v| match v {
                        Value::Number(n) => n
                            .as_i64()
                            .map(|i| Rat::from_integer(i.into()))
                            .ok_or_else(|| Error::InvalidMultiplicity(format!("{n} is not an integer; use a string"))),
                        Value::String(s) => s
                            .trim()
                            .parse::<Rat>()
                            .map_err(|_| Error::InvalidMultiplicity(format!("not a rational number: {s:?}"))),
                        other => Err(Error::InvalidMultiplicity(format!("unsupported entry {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Multiplicity::new(g, values)
    }
}
