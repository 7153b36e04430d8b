//! Subcommand handlers. Each one parses its flags, makes one pass through
//! the core library, and returns the JSON document to print.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use witt_core::epsilon::{decompose, epsilon_family, reassemble};
use witt_core::finite::materialize;
use witt_core::phimod::{
    conservativity_harness, p_typical_reduction_check, tangent_map, tangent_module,
};
use witt_core::witt::{exact_sequence_check, from_ghost, ghost, verschiebung, GhostVector};
use witt_core::zbasis::{to_vbasis, vbasis_pairs};
use witt_core::{Error, PhiMorphism, PhiObject, Result, RingDescriptor, WittContext};

use crate::io;

pub fn ghost_cmd(ring: &str, s: &str, coords: &str) -> Result<Value> {
    let ring = io::parse_ring(ring)?;
    let s = io::parse_set(s)?;
    let w = io::parse_vector_arg(coords, &s, &ring)?;
    let g = ghost(&w)?;
    let components: Vec<Value> =
        g.components().iter().map(|c| Value::String(ring.fmt_value(c))).collect();
    Ok(json!({ "ghost": components }))
}

pub fn unghost_cmd(ring: &str, s: &str, components: &str) -> Result<Value> {
    let ring = io::parse_ring(ring)?;
    let s = io::parse_set(s)?;
    let parts: Vec<&str> = components.split(',').collect();
    if parts.len() != s.len() {
        return Err(Error::ShapeMismatch {
            reason: format!("{} components given, {} expected", parts.len(), s.len()),
        });
    }
    let values = parts
        .iter()
        .map(|p| io::parse_value(&ring, p))
        .collect::<Result<Vec<_>>>()?;
    let g = GhostVector::new(s, ring, values)?;
    io::vector_to_json(&from_ghost(&g)?)
}

pub fn binop_cmd(
    ctx: &WittContext,
    op: &str,
    ring: &str,
    s: &str,
    a: &str,
    b: &str,
) -> Result<Value> {
    let ring = io::parse_ring(ring)?;
    let s = io::parse_set(s)?;
    let x = io::parse_vector_arg(a, &s, &ring)?;
    let y = io::parse_vector_arg(b, &s, &ring)?;
    let out = match op {
        "add" => ctx.add(&x, &y)?,
        "mul" => ctx.mul(&x, &y)?,
        _ => unreachable!("dispatch covers add and mul only"),
    };
    io::vector_to_json(&out)
}

pub fn frob_cmd(ctx: &WittContext, ring: &str, s: &str, n: u64, x: &str) -> Result<Value> {
    let ring = io::parse_ring(ring)?;
    let s = io::parse_set(s)?;
    let w = io::parse_vector_arg(x, &s, &ring)?;
    io::vector_to_json(&ctx.frobenius(n, &w)?)
}

pub fn ver_cmd(ring: &str, s: &str, n: u64, x: &str) -> Result<Value> {
    let ring = io::parse_ring(ring)?;
    let s = io::parse_set(s)?;
    let w = io::parse_vector_arg(x, &s.quotient(n), &ring)?;
    io::vector_to_json(&verschiebung(n, &w, &s)?)
}

pub fn restrict_cmd(ring: &str, s: &str, t: &str, x: &str) -> Result<Value> {
    let ring = io::parse_ring(ring)?;
    let s = io::parse_set(s)?;
    let t = io::parse_set(t)?;
    let w = io::parse_vector_arg(x, &s, &ring)?;
    io::vector_to_json(&w.restrict(&t)?)
}

pub fn exactseq_cmd(
    ctx: &WittContext,
    ring: &str,
    s: &str,
    n: u64,
    cap: u128,
    samples: usize,
    seed: u64,
) -> Result<Value> {
    let ring = io::parse_ring(ring)?;
    let s = io::parse_set(s)?;
    let report = exact_sequence_check(ctx, &ring, &s, n, cap, samples, seed)?;
    Ok(json!({
        "S": io::set_to_json(&report.s),
        "T": io::set_to_json(&report.t),
        "n": report.n,
        "elements": report.total,
        "injective": report.injective,
        "surjective": report.surjective,
        "image_equals_kernel": report.image_equals_kernel,
        "additive_samples": report.additive_samples,
        "additivity_ok": report.additivity_ok,
        "pass": report.pass(),
        "counterexample": report.counterexample,
    }))
}

pub fn zbasis_cmd(s: &str, coords: &str) -> Result<Value> {
    let ring = RingDescriptor::integers();
    let s = io::parse_set(s)?;
    let w = io::parse_vector_arg(coords, &s, &ring)?;
    let expansion = to_vbasis(&w)?;
    let mut vbasis = Map::new();
    for (n, c) in vbasis_pairs(&expansion) {
        vbasis.insert(n.to_string(), Value::String(c));
    }
    Ok(json!({
        "coords": io::coords_to_json(&w),
        "vbasis": Value::Object(vbasis),
    }))
}

pub fn eps_cmd(ctx: &WittContext, p: u64, s: &str) -> Result<Value> {
    let ring = RingDescriptor::local_at(p)?;
    let s = io::parse_set(s)?;
    let family = epsilon_family(ctx, &ring, &s, p)?;
    family.verify(ctx)?;
    let mut members = Map::new();
    for (n, e) in family.iter() {
        members.insert(n.to_string(), io::coords_to_json(e));
    }
    Ok(json!({
        "p": p,
        "S": io::set_to_json(&s),
        "ring": io::ring_to_json(&ring)?,
        "family": Value::Object(members),
        "verified": true,
    }))
}

fn zp_algebra(ring: Option<&str>, p: u64) -> Result<RingDescriptor> {
    match ring {
        Some(spec) => io::parse_ring(spec),
        None => RingDescriptor::local_at(p),
    }
}

pub fn decompose_cmd(
    ctx: &WittContext,
    p: u64,
    ring: Option<&str>,
    s: &str,
    x: &str,
) -> Result<Value> {
    let ring = zp_algebra(ring, p)?;
    let s = io::parse_set(s)?;
    let w = io::parse_vector_arg(x, &s, &ring)?;
    let parts = decompose(ctx, &w, p)?;
    let mut components = Map::new();
    for (n, part) in &parts {
        components.insert(n.to_string(), io::vector_to_json(part)?);
    }
    Ok(json!({ "p": p, "components": Value::Object(components) }))
}

pub fn reassemble_cmd(p: u64, ring: Option<&str>, s: &str, components: &str) -> Result<Value> {
    let ring = zp_algebra(ring, p)?;
    let s = io::parse_set(s)?;
    let doc = io::read_json_arg(components)?;
    let table = doc
        .get("components")
        .and_then(Value::as_object)
        .or_else(|| doc.as_object())
        .ok_or(Error::ShapeMismatch { reason: "components must be a JSON object".to_string() })?;
    let mut parts = BTreeMap::new();
    for (key, entry) in table {
        let n = key.parse::<u64>().map_err(|_| Error::ShapeMismatch {
            reason: format!("'{key}' is not a component index"),
        })?;
        parts.insert(n, io::vector_from_json(entry)?);
    }
    io::vector_to_json(&reassemble(&ring, &s, p, &parts)?)
}

pub fn finite_cmd(
    ctx: &WittContext,
    ring: &str,
    s: &str,
    maximal_ideals: bool,
    cap: u128,
    seed: u64,
) -> Result<Value> {
    let ring = io::parse_ring(ring)?;
    let s = io::parse_set(s)?;
    let table = materialize(ctx, &ring, &s, cap)?;
    let axioms = table.check_axioms(seed);
    let mut out = Map::new();
    out.insert("ring".to_string(), io::ring_to_json(&ring)?);
    out.insert("S".to_string(), io::set_to_json(&s));
    out.insert("elements".to_string(), json!(table.len()));
    out.insert(
        "axioms".to_string(),
        json!({
            "commutative": axioms.commutative,
            "unital": axioms.unital,
            "associative": axioms.associative,
            "distributive": axioms.distributive,
            "triples_checked": axioms.triples_checked,
            "exhaustive": axioms.exhaustive,
            "pass": axioms.pass(),
        }),
    );
    if maximal_ideals {
        let ideals = table.maximal_ideals();
        let rendered: Vec<Value> = ideals
            .iter()
            .map(|ideal| {
                let members: Vec<Value> = ideal
                    .members
                    .iter()
                    .map(|&i| io::coords_to_json(table.element(i)))
                    .collect();
                json!({
                    "size": ideal.members.len(),
                    "quotient_size": ideal.quotient_size,
                    "members": members,
                })
            })
            .collect();
        out.insert("maximal_ideal_count".to_string(), json!(ideals.len()));
        out.insert("maximal_ideals".to_string(), Value::Array(rendered));
    }
    Ok(Value::Object(out))
}

pub fn phimod_make(
    ctx: &WittContext,
    kind: &str,
    twist: i64,
    s: &str,
    ring: &str,
) -> Result<Value> {
    let ring = io::parse_ring(ring)?;
    let ambient = io::parse_set(s)?;
    let object = match kind {
        "unit" => PhiObject::unit(&ambient, &ring)?,
        "tate" => PhiObject::tate(ctx, twist, &ambient, &ring)?,
        other => {
            return Err(Error::ShapeMismatch {
                reason: format!("unknown object kind '{other}' (use unit or tate)"),
            })
        }
    };
    io::object_to_json(&object)
}

pub fn phimod_binary(ctx: &WittContext, op: &str, left: &str, right: &str) -> Result<Value> {
    let a = io::object_from_json(&io::read_json_arg(left)?)?;
    let b = io::object_from_json(&io::read_json_arg(right)?)?;
    let out = match op {
        "tensor" => a.tensor(ctx, &b)?,
        "hom" => a.internal_hom(ctx, &b)?,
        "sum" => a.direct_sum(ctx, &b)?,
        _ => unreachable!("dispatch covers tensor, hom, and sum only"),
    };
    io::object_to_json(&out)
}

pub fn phimod_dual(ctx: &WittContext, object: &str) -> Result<Value> {
    let a = io::object_from_json(&io::read_json_arg(object)?)?;
    io::object_to_json(&a.dual(ctx)?)
}

pub fn phimod_validate(ctx: &WittContext, object: &str) -> Result<Value> {
    let a = io::object_from_json(&io::read_json_arg(object)?)?;
    let report = a.validate(ctx)?;
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| {
            json!({
                "axiom": v.axiom,
                "level": v.level,
                "n": v.n,
                "witness": v.witness,
            })
        })
        .collect();
    Ok(json!({
        "checks_run": report.checks_run,
        "violations": violations,
        "pass": report.pass(),
    }))
}

fn endomorphism(ctx: &WittContext, object: &str, matrix: &str) -> Result<PhiMorphism> {
    let a = io::object_from_json(&io::read_json_arg(object)?)?;
    let mat = io::matrix_from_json(a.ambient(), a.ring(), &io::read_json_arg(matrix)?)?;
    PhiMorphism::new(ctx, a.clone(), a, mat)
}

pub fn phimod_tangent(ctx: &WittContext, object: &str, matrix: Option<&str>) -> Result<Value> {
    match matrix {
        None => {
            let a = io::object_from_json(&io::read_json_arg(object)?)?;
            let module = tangent_module(&a)?;
            Ok(json!({
                "ring": io::ring_to_json(&module.ring)?,
                "rank": module.rank,
            }))
        }
        Some(matrix) => {
            let f = endomorphism(ctx, object, matrix)?;
            let map = tangent_map(&f)?;
            let entries: Vec<Value> = (0..map.rows())
                .map(|i| {
                    Value::Array(
                        (0..map.cols())
                            .map(|j| Value::String(map.ring().fmt_value(map.entry(i, j))))
                            .collect(),
                    )
                })
                .collect();
            Ok(json!({
                "rows": map.rows(),
                "cols": map.cols(),
                "entries": entries,
            }))
        }
    }
}

pub fn phimod_harness(ctx: &WittContext, object: &str, matrix: &str) -> Result<Value> {
    let f = endomorphism(ctx, object, matrix)?;
    let report = conservativity_harness(&f)?;
    Ok(json!({
        "tangent_is_zero": report.tangent_is_zero,
        "tangent_is_invertible": report.tangent_is_invertible,
        "faithful_checked": report.faithful_checked,
        "conservative_checked": report.conservative_checked,
        "applicable": report.applicable(),
        "pass": report.pass(),
        "counterexample": report.counterexample,
    }))
}

pub fn phimod_reduction(ctx: &WittContext, object: &str, p: u64) -> Result<Value> {
    let a = io::object_from_json(&io::read_json_arg(object)?)?;
    let report = p_typical_reduction_check(ctx, &a, p)?;
    Ok(json!({
        "p": report.p,
        "checks_run": report.checks_run,
        "failures": report.failures,
        "pass": report.pass(),
    }))
}
