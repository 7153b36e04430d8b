//! Wire formats: ring and set specs on the command line, JSON encodings
//! of vectors, matrices, and module objects. Integers travel as decimal
//! strings because ghost components outgrow 64 bits quickly.

use std::fs;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use witt_core::phimod::WittMatrix;
use witt_core::witt::verschiebung;
use witt_core::{Error, PhiObject, Result, RingDescriptor, RingValue, TruncationSet, WittVector};

pub fn parse_ring(spec: &str) -> Result<RingDescriptor> {
    match spec {
        "z" => Ok(RingDescriptor::integers()),
        "q" => Ok(RingDescriptor::rationals()),
        _ => {
            if let Some(m) = spec.strip_prefix("zmod:") {
                let m = m.parse::<u64>().map_err(|_| bad_ring(spec))?;
                RingDescriptor::integers_mod(m)
            } else if let Some(p) = spec.strip_prefix("local:") {
                let p = p.parse::<u64>().map_err(|_| bad_ring(spec))?;
                RingDescriptor::local_at(p)
            } else {
                Err(bad_ring(spec))
            }
        }
    }
}

fn bad_ring(spec: &str) -> Error {
    Error::InvalidRing {
        reason: format!("unknown ring spec '{spec}' (use z, q, zmod:M, or local:P)"),
    }
}

pub fn ring_to_json(ring: &RingDescriptor) -> Result<Value> {
    Ok(match ring {
        RingDescriptor::Integers => json!({"kind": "z"}),
        RingDescriptor::Rationals => json!({"kind": "q"}),
        RingDescriptor::IntegersModM(m) => json!({"kind": "zmod", "m": m}),
        RingDescriptor::LocalIntegersAtP(p) => json!({"kind": "local", "p": p}),
        other => {
            return Err(Error::InvalidRing {
                reason: format!("{} has no wire format", other.name()),
            })
        }
    })
}

pub fn ring_from_json(v: &Value) -> Result<RingDescriptor> {
    if let Some(s) = v.as_str() {
        return parse_ring(s);
    }
    let kind = v
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("ring needs a 'kind' field"))?;
    match kind {
        "z" => Ok(RingDescriptor::integers()),
        "q" => Ok(RingDescriptor::rationals()),
        "zmod" => {
            let m = v.get("m").and_then(Value::as_u64).ok_or_else(|| malformed("zmod needs 'm'"))?;
            RingDescriptor::integers_mod(m)
        }
        "local" => {
            let p =
                v.get("p").and_then(Value::as_u64).ok_or_else(|| malformed("local needs 'p'"))?;
            RingDescriptor::local_at(p)
        }
        other => Err(bad_ring(other)),
    }
}

pub fn parse_set(spec: &str) -> Result<TruncationSet> {
    let mut members = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        members.push(
            part.parse::<u64>()
                .map_err(|_| malformed(&format!("'{part}' is not a positive integer")))?,
        );
    }
    TruncationSet::new(members)
}

pub fn set_to_json(s: &TruncationSet) -> Value {
    Value::Array(s.iter().map(|n| json!(n)).collect())
}

pub fn set_from_json(v: &Value) -> Result<TruncationSet> {
    let arr = v.as_array().ok_or_else(|| malformed("truncation set must be a JSON array"))?;
    let mut members = Vec::with_capacity(arr.len());
    for e in arr {
        members.push(e.as_u64().ok_or_else(|| malformed("set members must be positive integers"))?);
    }
    TruncationSet::new(members)
}

fn malformed(detail: &str) -> Error {
    Error::ShapeMismatch { reason: detail.to_string() }
}

pub fn parse_value(ring: &RingDescriptor, text: &str) -> Result<RingValue> {
    let text = text.trim();
    let value = match ring {
        RingDescriptor::Integers => RingValue::Int(
            BigInt::from_str(text).map_err(|_| malformed(&format!("'{text}' is not an integer")))?,
        ),
        RingDescriptor::Rationals | RingDescriptor::LocalIntegersAtP(_) => RingValue::Rat(
            BigRational::from_str(text)
                .map_err(|_| malformed(&format!("'{text}' is not a rational")))?,
        ),
        RingDescriptor::IntegersModM(_) => {
            let k = BigInt::from_str(text)
                .map_err(|_| malformed(&format!("'{text}' is not an integer")))?;
            ring.from_bigint(k)
        }
        other => {
            return Err(Error::InvalidRing {
                reason: format!("{} values cannot be parsed", other.name()),
            })
        }
    };
    ring.canonical(&value)
}

pub fn coords_to_json(w: &WittVector) -> Value {
    let mut map = Map::new();
    for (n, c) in w.set().iter().zip(w.coords()) {
        map.insert(n.to_string(), Value::String(w.ring().fmt_value(c)));
    }
    Value::Object(map)
}

pub fn coords_from_json(s: &TruncationSet, ring: &RingDescriptor, v: &Value) -> Result<WittVector> {
    let map = v.as_object().ok_or_else(|| malformed("coordinates must be a JSON object"))?;
    let mut coords = Vec::with_capacity(s.len());
    for n in s.iter() {
        let entry = map
            .get(&n.to_string())
            .ok_or_else(|| malformed(&format!("missing coordinate at index {n}")))?;
        let text = entry.as_str().ok_or_else(|| malformed("coordinates must be strings"))?;
        coords.push(parse_value(ring, text)?);
    }
    if map.len() != s.len() {
        return Err(malformed("coordinate object has extra keys"));
    }
    WittVector::new(s.clone(), ring.clone(), coords)
}

pub fn vector_to_json(w: &WittVector) -> Result<Value> {
    let mut map = Map::new();
    map.insert("S".to_string(), set_to_json(w.set()));
    map.insert("ring".to_string(), ring_to_json(w.ring())?);
    map.insert("coords".to_string(), coords_to_json(w));
    Ok(Value::Object(map))
}

pub fn vector_from_json(v: &Value) -> Result<WittVector> {
    let s = set_from_json(v.get("S").ok_or_else(|| malformed("vector needs 'S'"))?)?;
    let ring = ring_from_json(v.get("ring").ok_or_else(|| malformed("vector needs 'ring'"))?)?;
    coords_from_json(&s, &ring, v.get("coords").ok_or_else(|| malformed("vector needs 'coords'"))?)
}

/// Reads a JSON value from an argument: `@path` loads a file, anything
/// else must parse as JSON text.
pub fn read_json_arg(arg: &str) -> Result<Value> {
    let text = if let Some(path) = arg.strip_prefix('@') {
        fs::read_to_string(path).map_err(|e| malformed(&format!("cannot read {path}: {e}")))?
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).map_err(|e| malformed(&format!("invalid JSON: {e}")))
}

/// Parses a vector argument over a known set and ring. Accepts `Vk` for
/// the Verschiebung image of 1, a comma list of coordinates in set order,
/// inline JSON, or `@file`.
pub fn parse_vector_arg(arg: &str, s: &TruncationSet, ring: &RingDescriptor) -> Result<WittVector> {
    let arg = arg.trim();
    if let Some(k) = arg.strip_prefix('V').and_then(|rest| rest.parse::<u64>().ok()) {
        if !s.contains(k) {
            return Err(Error::IndexOutsideS { index: k });
        }
        let one = WittVector::one(s.quotient(k), ring.clone());
        return verschiebung(k, &one, s);
    }
    if arg.starts_with('{') || arg.starts_with('@') {
        let v = read_json_arg(arg)?;
        let w = vector_from_json(&v)?;
        if w.set() != s {
            return Err(malformed(&format!("vector lives over {}, expected {s}", w.set())));
        }
        if w.ring() != ring {
            return Err(Error::DescriptorMismatch {
                expected: ring.name(),
                found: w.ring().name(),
            });
        }
        return Ok(w);
    }
    let parts: Vec<&str> = arg.split(',').collect();
    if parts.len() != s.len() {
        return Err(malformed(&format!("{} coordinates given, {} expected", parts.len(), s.len())));
    }
    let coords = parts
        .iter()
        .map(|part| parse_value(ring, part))
        .collect::<Result<Vec<_>>>()?;
    WittVector::new(s.clone(), ring.clone(), coords)
}

pub fn matrix_to_json(m: &WittMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| coords_to_json(m.entry(i, j))).collect()))
        .collect();
    Value::Array(rows)
}

pub fn matrix_from_json(
    s: &TruncationSet,
    ring: &RingDescriptor,
    v: &Value,
) -> Result<WittMatrix> {
    let rows = v.as_array().ok_or_else(|| malformed("matrix must be an array of rows"))?;
    if rows.is_empty() {
        return Err(malformed("matrix needs at least one row"));
    }
    let mut entries = Vec::new();
    let mut cols = None;
    for row in rows {
        let row = row.as_array().ok_or_else(|| malformed("matrix rows must be arrays"))?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => return Err(malformed("matrix rows have unequal lengths")),
            _ => {}
        }
        for entry in row {
            entries.push(coords_from_json(s, ring, entry)?);
        }
    }
    let cols = cols.unwrap_or(0);
    if cols == 0 {
        return Err(malformed("matrix needs at least one column"));
    }
    WittMatrix::new(s.clone(), ring.clone(), entries.len() / cols, cols, entries)
}

pub fn object_to_json(object: &PhiObject) -> Result<Value> {
    let mut map = Map::new();
    map.insert("ambient".to_string(), set_to_json(object.ambient()));
    map.insert("ring".to_string(), ring_to_json(object.ring())?);
    map.insert("rank".to_string(), json!(object.rank()));
    map.insert("a".to_string(), json!(object.exponent()));
    map.insert("twist".to_string(), json!(object.twist()));
    let mut phi = Map::new();
    let mut beta = Map::new();
    for n in object.ambient().iter().filter(|&n| n >= 2) {
        phi.insert(n.to_string(), matrix_to_json(&object.phi_matrix(object.ambient(), n)?));
        beta.insert(n.to_string(), matrix_to_json(&object.beta_matrix(object.ambient(), n)?));
    }
    map.insert("phi".to_string(), Value::Object(phi));
    map.insert("beta".to_string(), Value::Object(beta));
    Ok(Value::Object(map))
}

pub fn object_from_json(v: &Value) -> Result<PhiObject> {
    let ambient = set_from_json(v.get("ambient").ok_or_else(|| malformed("object needs 'ambient'"))?)?;
    let ring = ring_from_json(v.get("ring").ok_or_else(|| malformed("object needs 'ring'"))?)?;
    let rank = v
        .get("rank")
        .and_then(Value::as_u64)
        .ok_or_else(|| malformed("object needs integer 'rank'"))? as usize;
    let exponent = v
        .get("a")
        .and_then(Value::as_u64)
        .ok_or_else(|| malformed("object needs integer 'a'"))? as u32;
    let twist = v
        .get("twist")
        .and_then(Value::as_i64)
        .ok_or_else(|| malformed("object needs integer 'twist'"))?;
    let mut phi = std::collections::BTreeMap::new();
    let mut beta = std::collections::BTreeMap::new();
    for (field, out) in [("phi", &mut phi), ("beta", &mut beta)] {
        let table = v
            .get(field)
            .and_then(Value::as_object)
            .ok_or_else(|| malformed(&format!("object needs '{field}' maps")))?;
        for (key, mat) in table {
            let n = key
                .parse::<u64>()
                .map_err(|_| malformed(&format!("'{key}' is not a map index")))?;
            out.insert(n, matrix_from_json(&ambient.quotient(n), &ring, mat)?);
        }
    }
    PhiObject::from_raw(ambient, ring, rank, exponent, twist, phi, beta)
}

pub fn error_to_json(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "message": e.to_string()}})
}
