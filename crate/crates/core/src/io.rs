//! JSON formats for complexes, B-data, rook matrices and move scripts.
//!
//! All scalars are written as strings. Complex files name their generators
//! and list boundary coefficients by name:
//!
//! ```json
//! {"field": "Z",
//!  "generators": [{"name": "a", "degree": 0}, {"name": "b", "degree": 1}],
//!  "boundary": [{"of": "b", "coeff": "2", "on": "a"}]}
//! ```

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::enhanced_complex::{BData, FilteredComplex, Generator, Pair};
use crate::enhanced_linear::RookMatrix;
use crate::error::{Error, Result};
use crate::integral::{IntMatrix, ZComplex};
use crate::matrix::Matrix;
use crate::paths::Move;
use crate::scalars::FieldSpec;

/// Coefficient ring named in a complex file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    Integers,
    Field(FieldSpec),
}

impl Ring {
    pub fn parse(text: &str) -> Result<Ring> {
        if text.trim() == "Z" {
            Ok(Ring::Integers)
        } else {
            text.parse().map(Ring::Field)
        }
    }
}

impl std::fmt::Display for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Field(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GeneratorJson {
    name: String,
    degree: usize,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    of: String,
    coeff: String,
    on: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    field: String,
    generators: Vec<GeneratorJson>,
    #[serde(default)]
    boundary: Vec<EntryJson>,
}

/// A parsed complex file whose coefficients are kept as text until a
/// coefficient ring is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexFile {
    pub ring: Ring,
    pub generators: Vec<Generator>,
    /// `(of, on, coefficient)` with 0-based positions.
    pub entries: Vec<(usize, usize, String)>,
}

impl ComplexFile {
    pub fn parse(text: &str) -> Result<ComplexFile> {
        let raw: ComplexJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let ring = Ring::parse(&raw.field)?;
        let mut index = HashMap::new();
        let mut generators = Vec::with_capacity(raw.generators.len());
        for (i, g) in raw.generators.into_iter().enumerate() {
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::Parse(format!("generator {:?} is listed twice", g.name)));
            }
            generators.push(Generator::new(g.name, g.degree));
        }
        let lookup = |entry: usize, name: &str| {
            index.get(name).copied().ok_or_else(|| {
                Error::Parse(format!("boundary entry {}: unknown generator {name:?}", entry + 1))
            })
        };
        let mut entries: Vec<(usize, usize, String)> = Vec::with_capacity(raw.boundary.len());
        for (e, entry) in raw.boundary.iter().enumerate() {
            let of = lookup(e, &entry.of)?;
            let on = lookup(e, &entry.on)?;
            if entries.iter().any(|x| x.0 == of && x.1 == on) {
                return Err(Error::Parse(format!(
                    "boundary entry {}: coefficient of {:?} in the boundary of {:?} given twice",
                    e + 1,
                    entry.on,
                    entry.of
                )));
            }
            entries.push((of, on, entry.coeff.clone()));
        }
        Ok(ComplexFile { ring, generators, entries })
    }

    fn describe(&self, of: usize, on: usize) -> String {
        format!("coefficient of {:?} in the boundary of {:?}", self.generators[on].name, self.generators[of].name)
    }

    /// The complex over `field`, or over the file's own field (ℚ for integer files).
    pub fn to_field_complex(&self, field: Option<FieldSpec>) -> Result<FilteredComplex> {
        let field = field.unwrap_or(match self.ring {
            Ring::Integers => FieldSpec::Rationals,
            Ring::Field(k) => k,
        });
        let n = self.generators.len();
        let mut boundary = Matrix::zeros(field, n, n);
        for (of, on, text) in &self.entries {
            let value = field
                .parse_scalar(text)
                .map_err(|e| Error::Parse(format!("{}: {e}", self.describe(*of, *on))))?;
            boundary.set(*on, *of, value);
        }
        let c = FilteredComplex::new_unchecked(field, self.generators.clone(), boundary);
        c.validate().map_err(|v| Error::InvalidComplex(self.name_violation(&v.to_string())))?;
        Ok(c)
    }

    /// The complex over ℤ; every coefficient must be an integer.
    pub fn to_zcomplex(&self) -> Result<ZComplex> {
        let n = self.generators.len();
        let mut boundary = IntMatrix::zeros(n, n);
        for (of, on, text) in &self.entries {
            let value: BigInt = text
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{}: {text:?} is not an integer", self.describe(*of, *on))))?;
            boundary.set(*on, *of, value);
        }
        ZComplex::new(self.generators.clone(), boundary).map_err(|e| match e {
            Error::InvalidComplex(msg) => Error::InvalidComplex(self.name_violation(&msg)),
            other => other,
        })
    }

    /// Rewrites "generator 5" in a violation message as the generator's name.
    fn name_violation(&self, msg: &str) -> String {
        let mut out = String::new();
        let mut rest = msg;
        while let Some(i) = rest.find("generator ") {
            let (head, tail) = rest.split_at(i + "generator ".len());
            out.push_str(head);
            let digits: String = tail.chars().take_while(char::is_ascii_digit).collect();
            match digits.parse::<usize>().ok().and_then(|k| self.generators.get(k.wrapping_sub(1))) {
                Some(g) => out.push_str(&format!("{:?} (position {digits})", g.name)),
                None => out.push_str(&digits),
            }
            rest = &tail[digits.len()..];
        }
        out.push_str(rest);
        out
    }
}

fn complex_value(ring: Ring, generators: &[Generator], entries: Vec<(usize, usize, String)>) -> Value {
    let gens: Vec<Value> = generators.iter().map(|g| json!({"name": g.name, "degree": g.degree})).collect();
    let boundary: Vec<Value> = entries
        .into_iter()
        .map(|(of, on, coeff)| json!({"of": generators[of].name, "coeff": coeff, "on": generators[on].name}))
        .collect();
    json!({"field": ring.to_string(), "generators": gens, "boundary": boundary})
}

pub fn complex_to_json(c: &FilteredComplex) -> Value {
    let n = c.len();
    let d = c.boundary();
    let entries = (0..n)
        .flat_map(|of| (0..n).map(move |on| (of, on)))
        .filter(|&(of, on)| !d.get(on, of).is_zero())
        .map(|(of, on)| (of, on, d.get(on, of).to_string()))
        .collect();
    complex_value(Ring::Field(c.field()), c.generators(), entries)
}

pub fn zcomplex_to_json(c: &ZComplex) -> Value {
    let n = c.len();
    let entries = (0..n)
        .flat_map(|of| (0..n).map(move |on| (of, on)))
        .filter(|&(of, on)| !c.coeff(of, on).is_zero())
        .map(|(of, on)| (of, on, c.coeff(of, on).to_string()))
        .collect();
    complex_value(Ring::Integers, c.generators(), entries)
}

pub fn bdata_to_json(d: &BData) -> Value {
    let pairs: Vec<Value> = d
        .pairs()
        .iter()
        .map(|p| json!({"upper": p.upper, "lower": p.lower, "bruhat": p.bruhat.to_string(), "degree": d.degree(p.lower)}))
        .collect();
    let homological: Vec<Value> =
        d.homological().into_iter().map(|s| json!({"index": s, "degree": d.degree(s)})).collect();
    json!({"pairs": pairs, "homological": homological})
}

#[derive(Deserialize)]
struct PairJson {
    upper: usize,
    lower: usize,
    bruhat: String,
    degree: usize,
}

#[derive(Deserialize)]
struct PointJson {
    index: usize,
    degree: usize,
}

#[derive(Deserialize)]
struct BDataJson {
    pairs: Vec<PairJson>,
    homological: Vec<PointJson>,
}

/// Reads B-data JSON back; degrees are recovered from the listed points.
pub fn bdata_from_json(value: &Value, field: FieldSpec) -> Result<BData> {
    let raw: BDataJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let n = 2 * raw.pairs.len() + raw.homological.len();
    let mut degrees = vec![None; n];
    let mut place = |s: usize, k: usize| -> Result<()> {
        match degrees.get_mut(s.wrapping_sub(1)) {
            Some(slot @ None) => {
                *slot = Some(k);
                Ok(())
            }
            _ => Err(Error::Parse(format!("point {s} is out of range or listed twice"))),
        }
    };
    let mut pairs = Vec::new();
    for p in &raw.pairs {
        place(p.lower, p.degree)?;
        place(p.upper, p.degree + 1)?;
        pairs.push(Pair { upper: p.upper, lower: p.lower, bruhat: field.parse_scalar(&p.bruhat)? });
    }
    for h in &raw.homological {
        place(h.index, h.degree)?;
    }
    let degrees = degrees.into_iter().map(|d| d.expect("every point placed")).collect();
    BData::new(field, degrees, pairs)
}

pub fn rook_to_json(r: &RookMatrix) -> Value {
    let hits: Vec<Value> = r.hits().iter().map(|(i, j, v)| json!([i + 1, j + 1, v.to_string()])).collect();
    json!({"rows": r.rows(), "cols": r.cols(), "hits": hits})
}

#[derive(Deserialize)]
struct RookJson {
    rows: usize,
    cols: usize,
    hits: Vec<(usize, usize, String)>,
}

pub fn rook_from_json(value: &Value, field: FieldSpec) -> Result<RookMatrix> {
    let raw: RookJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let hits = raw
        .hits
        .into_iter()
        .map(|(i, j, v)| {
            if i == 0 || j == 0 {
                return Err(Error::Parse("rook indices are 1-based".into()));
            }
            Ok((i - 1, j - 1, field.parse_scalar(&v)?))
        })
        .collect::<Result<Vec<_>>>()?;
    RookMatrix::new(field, raw.rows, raw.cols, hits)
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect())).collect())
}

/// Reads a JSON array of rows of scalar strings. `cols` fixes the width of
/// an empty row list.
pub fn matrix_from_json(value: &Value, field: FieldSpec, cols: usize) -> Result<Matrix> {
    let rows: Vec<Vec<String>> = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(field, 0, cols));
    }
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|x| field.parse_scalar(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(field, parsed)
}

pub fn script_from_json(text: &str) -> Result<Vec<Move>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn script_to_json(script: &[Move]) -> Value {
    serde_json::to_value(script).expect("moves serialize")
}
