//! Candidate tables: claimed samples `p(i / 2^N)` for `i = 0..=2^N`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::curve::{samples, Point, MAX_MATERIALIZED_ORDER};
use crate::error::{domain, Error, Result};
use crate::exact::{check_depth, Dyadic};

/// Bits kept when a decimal coordinate is not a dyadic.
pub const DEFAULT_DECIMAL_PRECISION: u32 = 64;

/// Default tolerance for decimal tables, on squared distances.
pub const DECIMAL_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Dyadic,
    Decimal,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Dyadic => "dyadic",
            Encoding::Decimal => "decimal",
        })
    }
}

impl FromStr for Encoding {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dyadic" => Ok(Encoding::Dyadic),
            "decimal" => Ok(Encoding::Decimal),
            other => Err(Error::Parse(format!("unknown encoding {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateTable {
    pub depth: u32,
    pub encoding: Encoding,
    /// Rounding precision in bits used for decimal input.
    pub precision: Option<u32>,
    /// Set when some decimal coordinate had to be rounded.
    pub rounded: bool,
    pub points: Vec<Point>,
}

impl CandidateTable {
    pub fn new(depth: u32, points: Vec<Point>) -> Result<Self> {
        let table = CandidateTable {
            depth,
            encoding: Encoding::Dyadic,
            precision: None,
            rounded: false,
            points,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn validate(&self) -> Result<()> {
        check_table_depth(self.depth)?;
        let want = (1usize << self.depth) + 1;
        if self.points.len() != want {
            return Err(Error::Table {
                location: "length".into(),
                message: format!(
                    "depth {} needs {want} points, found {}",
                    self.depth,
                    self.points.len()
                ),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Default tolerance: exact for dyadic tables, `1e-12` for decimal ones.
    pub fn default_tolerance(&self) -> Dyadic {
        match self.encoding {
            Encoding::Dyadic => Dyadic::zero(),
            Encoding::Decimal => {
                Dyadic::from_f64(DECIMAL_TOLERANCE).expect("finite tolerance")
            }
        }
    }

    /// The table with every point passed through `f`.
    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> CandidateTable {
        CandidateTable {
            points: self.points.iter().map(f).collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                let coord = |d: &Dyadic| match self.encoding {
                    Encoding::Dyadic => d.to_string(),
                    Encoding::Decimal => d.to_exact_decimal(),
                };
                Value::from(vec![coord(&p.x), coord(&p.y)])
            })
            .collect();
        let mut obj = serde_json::Map::new();
        obj.insert("depth".into(), self.depth.into());
        obj.insert("encoding".into(), self.encoding.to_string().into());
        if let Some(bits) = self.precision {
            obj.insert("precision".into(), bits.into());
        }
        obj.insert("points".into(), points.into());
        Value::Object(obj)
    }
}

fn check_table_depth(depth: u32) -> Result<()> {
    if depth == 0 {
        return Err(Error::Table {
            location: "depth".into(),
            message: "depth must be at least 1 so that t = 1/2 is sampled".into(),
        });
    }
    if depth > MAX_MATERIALIZED_ORDER {
        return Err(domain(format!(
            "table depth {depth} exceeds {MAX_MATERIALIZED_ORDER}"
        )));
    }
    check_depth(depth)
}

impl Serialize for CandidateTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CandidateTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        parse_table(&v).map_err(serde::de::Error::custom)
    }
}

fn table_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Table {
        location: location.into(),
        message: message.into(),
    }
}

fn parse_coord(
    v: &Value,
    encoding: Encoding,
    bits: u32,
    location: &str,
) -> Result<(Dyadic, bool)> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(table_err(location, format!("expected a string or number, found {other}"))),
    };
    let parsed = match encoding {
        Encoding::Dyadic => text.parse::<Dyadic>().map(|d| (d, true)),
        Encoding::Decimal => Dyadic::from_decimal(&text, bits),
    };
    parsed.map_err(|e| table_err(location, e.to_string()))
}

/// Validates a table given as JSON.
pub fn parse_table(v: &Value) -> Result<CandidateTable> {
    let obj = v
        .as_object()
        .ok_or_else(|| table_err("$", "expected a JSON object"))?;
    let depth = obj
        .get("depth")
        .and_then(Value::as_u64)
        .ok_or_else(|| table_err("depth", "expected a nonnegative integer"))?;
    let depth = u32::try_from(depth).map_err(|_| table_err("depth", "too large"))?;
    check_table_depth(depth)?;
    let encoding = match obj.get("encoding") {
        None => Encoding::Dyadic,
        Some(Value::String(s)) => s.parse().map_err(|e: Error| table_err("encoding", e.to_string()))?,
        Some(other) => return Err(table_err("encoding", format!("expected a string, found {other}"))),
    };
    let precision = match obj.get("precision") {
        None | Some(Value::Null) => None,
        Some(p) => {
            let bits = p
                .as_u64()
                .and_then(|b| u32::try_from(b).ok())
                .filter(|b| (1..=1024).contains(b))
                .ok_or_else(|| table_err("precision", "expected an integer in 1..=1024"))?;
            Some(bits)
        }
    };
    let bits = precision.unwrap_or(DEFAULT_DECIMAL_PRECISION);
    let raw = obj
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| table_err("points", "expected an array"))?;
    let want = (1usize << depth) + 1;
    if raw.len() != want {
        return Err(table_err(
            "length",
            format!("depth {depth} needs {want} points, found {}", raw.len()),
        ));
    }
    let mut rounded = false;
    let mut points = Vec::with_capacity(want);
    for (i, item) in raw.iter().enumerate() {
        let location = format!("points[{i}]");
        let pair = item
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| table_err(&location, "expected a pair [x, y]"))?;
        let (x, ex) = parse_coord(&pair[0], encoding, bits, &location)?;
        let (y, ey) = parse_coord(&pair[1], encoding, bits, &location)?;
        rounded |= !(ex && ey);
        points.push(Point::new(x, y));
    }
    Ok(CandidateTable {
        depth,
        encoding,
        precision: match encoding {
            Encoding::Decimal => Some(bits),
            Encoding::Dyadic => None,
        },
        rounded,
        points,
    })
}

pub fn load_table(path: impl AsRef<Path>) -> Result<CandidateTable> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    parse_table(&v)
}

/// Samples of the reference curve at depth `depth`, ready to certify.
pub fn export_table(depth: u32, encoding: Encoding) -> Result<CandidateTable> {
    check_table_depth(depth)?;
    Ok(CandidateTable {
        depth,
        encoding,
        precision: None,
        rounded: false,
        points: samples(depth)?,
    })
}
