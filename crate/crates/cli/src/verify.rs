//! Named verification suites behind `witt verify`. Each suite replays a
//! family of identities at a configurable size and reports a case count,
//! a failure count, and the first witness string when something broke.

use std::collections::BTreeMap;

use num_integer::Integer;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use witt_core::epsilon::{decompose, epsilon_family, reassemble};
use witt_core::finite::{materialize, verify_maximal_ideal_lemma};
use witt_core::phimod::{
    conservativity_harness, p_typical_reduction_check, tangent_map, WittMatrix,
};
use witt_core::witt::{exact_sequence_check, from_ghost, ghost, verschiebung};
use witt_core::zbasis::{from_vbasis, to_vbasis, vbasis_product};
use witt_core::{
    ArithMode, Error, PhiMorphism, PhiObject, Result, RingDescriptor, TruncationSet, WittContext,
    WittVector,
};

pub const SUITES: [&str; 10] = [
    "ghost",
    "roundtrip",
    "table",
    "fv",
    "vbasis",
    "eps",
    "exactseq",
    "maxideal",
    "phimod",
    "tangent",
];

pub fn default_max(name: &str) -> u64 {
    match name {
        "ghost" | "roundtrip" | "exactseq" => 8,
        "table" => 12,
        "fv" | "vbasis" => 24,
        "eps" => 10,
        "maxideal" => 4096,
        "phimod" => 6,
        "tangent" => 30,
        _ => 0,
    }
}

struct Tally {
    cases: usize,
    failures: usize,
    witness: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { cases: 0, failures: 0, witness: None }
    }

    fn check<F: FnOnce() -> String>(&mut self, ok: bool, witness: F) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    fn check_eq(&mut self, got: &WittVector, want: &WittVector, label: &str) {
        self.check(got == want, || format!("{label}: got {got}, wanted {want}"));
    }
}

fn upto(n: u64) -> Result<TruncationSet> {
    TruncationSet::new(1..=n)
}

fn random_vec(
    rng: &mut ChaCha8Rng,
    s: &TruncationSet,
    ring: &RingDescriptor,
    bound: i64,
) -> Result<WittVector> {
    let coords = s.iter().map(|_| ring.sample(rng, bound)).collect();
    WittVector::new(s.clone(), ring.clone(), coords)
}

pub fn verify_cmd(
    ctx: &WittContext,
    suite: Option<&str>,
    max: Option<u64>,
    seed: u64,
) -> Result<(Value, bool)> {
    let names: Vec<&str> = match suite {
        Some(name) => {
            let known = SUITES.iter().find(|s| **s == name).ok_or_else(|| {
                Error::ShapeMismatch {
                    reason: format!("unknown suite '{}' (available: {})", name, SUITES.join(", ")),
                }
            })?;
            vec![*known]
        }
        None => SUITES.to_vec(),
    };
    let mut rendered = Vec::new();
    let mut all_pass = true;
    for name in names {
        let size = max.unwrap_or_else(|| default_max(name));
        let tally = run_suite(ctx, name, size, seed)?;
        let pass = tally.failures == 0;
        all_pass &= pass;
        rendered.push(json!({
            "suite": name,
            "max": size,
            "cases": tally.cases,
            "failures": tally.failures,
            "pass": pass,
            "witness": tally.witness,
        }));
    }
    Ok((json!({ "suites": rendered, "pass": all_pass }), all_pass))
}

fn run_suite(ctx: &WittContext, name: &str, max: u64, seed: u64) -> Result<Tally> {
    match name {
        "ghost" => ghost_suite(ctx, max, seed),
        "roundtrip" => roundtrip_suite(max, seed),
        "table" => table_suite(max, seed),
        "fv" => fv_suite(ctx, max, seed),
        "vbasis" => vbasis_suite(ctx, max, seed),
        "eps" => eps_suite(ctx, max, seed),
        "exactseq" => exactseq_suite(ctx, max, seed),
        "maxideal" => maxideal_suite(ctx, max),
        "phimod" => phimod_suite(ctx, max),
        "tangent" => tangent_suite(ctx, max, seed),
        _ => unreachable!("verify_cmd filters suite names"),
    }
}

fn ghost_suite(ctx: &WittContext, max: u64, seed: u64) -> Result<Tally> {
    let mut tally = Tally::new();
    let s = upto(max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let rings = [
        RingDescriptor::integers(),
        RingDescriptor::rationals(),
        RingDescriptor::local_at(2)?,
    ];
    for ring in &rings {
        for _ in 0..34 {
            let x = random_vec(&mut rng, &s, ring, 9)?;
            let y = random_vec(&mut rng, &s, ring, 9)?;
            let gx = ghost(&x)?;
            let gy = ghost(&y)?;
            let gsum = ghost(&ctx.add(&x, &y)?)?;
            let gprod = ghost(&ctx.mul(&x, &y)?)?;
            let mut add_ok = true;
            let mut mul_ok = true;
            for i in 0..s.len() {
                let a = ring.add(&gx.components()[i], &gy.components()[i])?;
                let m = ring.mul(&gx.components()[i], &gy.components()[i])?;
                add_ok &= ring.eq_values(&a, &gsum.components()[i])?;
                mul_ok &= ring.eq_values(&m, &gprod.components()[i])?;
            }
            tally.check(add_ok, || {
                format!("ghost additivity broke over {} for x={x}, y={y}", ring.name())
            });
            tally.check(mul_ok, || {
                format!("ghost multiplicativity broke over {} for x={x}, y={y}", ring.name())
            });
        }
    }
    Ok(tally)
}

fn roundtrip_suite(max: u64, seed: u64) -> Result<Tally> {
    let mut tally = Tally::new();
    let s = upto(max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    for ring in [RingDescriptor::integers(), RingDescriptor::local_at(2)?] {
        for _ in 0..100 {
            let x = random_vec(&mut rng, &s, &ring, 99)?;
            let back = from_ghost(&ghost(&x)?)?;
            tally.check_eq(&back, &x, "ghost round trip");
        }
    }
    let z = RingDescriptor::integers();
    for p in [2u64, 3, 5, 7, 11] {
        let pair = TruncationSet::new([1, p])?;
        for _ in 0..4 {
            let mut k = rng.gen_range(1i64..=50);
            while k.unsigned_abs() % p == 0 {
                k = rng.gen_range(1i64..=50);
            }
            let g = witt_core::GhostVector::new(
                pair.clone(),
                z.clone(),
                vec![z.zero(), z.from_i64(k)],
            )?;
            let rejected = matches!(from_ghost(&g), Err(Error::NotGhostIntegral { .. }));
            tally.check(rejected, || {
                format!("ghost (0, {k}) on {{1,{p}}} should not lift integrally")
            });
        }
    }
    Ok(tally)
}

fn table_suite(max: u64, seed: u64) -> Result<Tally> {
    let mut tally = Tally::new();
    let s = upto(max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let z = RingDescriptor::integers();
    let cross = WittContext::with_cap(max).with_mode(ArithMode::CrossValidate);
    for _ in 0..25 {
        let x = random_vec(&mut rng, &s, &z, 9)?;
        let y = random_vec(&mut rng, &s, &z, 9)?;
        for (label, result) in [("add", cross.add(&x, &y)), ("mul", cross.mul(&x, &y))] {
            tally.check(result.is_ok(), || {
                format!("table and ghost paths disagree on {label} for x={x}, y={y}")
            });
        }
    }
    let zmod = RingDescriptor::integers_mod(4)?;
    let table_only = WittContext::with_cap(max).with_mode(ArithMode::TableOnly);
    for _ in 0..15 {
        let x = random_vec(&mut rng, &s, &zmod, 9)?;
        let y = random_vec(&mut rng, &s, &zmod, 9)?;
        let w = random_vec(&mut rng, &s, &zmod, 9)?;
        let assoc_l = table_only.add(&table_only.add(&x, &y)?, &w)?;
        let assoc_r = table_only.add(&x, &table_only.add(&y, &w)?)?;
        tally.check_eq(&assoc_l, &assoc_r, "table-path addition associativity");
        let dist_l = table_only.mul(&x, &table_only.add(&y, &w)?)?;
        let dist_r = table_only.add(&table_only.mul(&x, &y)?, &table_only.mul(&x, &w)?)?;
        tally.check_eq(&dist_l, &dist_r, "table-path distributivity");
        tally.check_eq(&table_only.mul(&x, &y)?, &table_only.mul(&y, &x)?, "table-path commutativity");
    }
    Ok(tally)
}

fn fv_suite(ctx: &WittContext, max: u64, seed: u64) -> Result<Tally> {
    let mut tally = Tally::new();
    let s = upto(max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(4));
    let z = RingDescriptor::integers();
    let indices: Vec<u64> = [2u64, 3, 4, 5, 6, 8, 12].iter().copied().filter(|&n| n <= max).collect();
    for &n in &indices {
        let sub = s.quotient(n);
        for _ in 0..3 {
            let x = random_vec(&mut rng, &sub, &z, 9)?;
            let y = random_vec(&mut rng, &s, &z, 9)?;
            let fv = ctx.frobenius(n, &verschiebung(n, &x, &s)?)?;
            tally.check_eq(&fv, &ctx.mul_int(&x, n as i64)?, "frobenius after verschiebung");
            let projector = ctx.mul(&verschiebung(n, &x, &s)?, &y)?;
            let pushed = verschiebung(n, &ctx.mul(&x, &ctx.frobenius(n, &y)?)?, &s)?;
            tally.check_eq(&projector, &pushed, "projection formula");
            let a = random_vec(&mut rng, &s, &z, 9)?;
            let b = random_vec(&mut rng, &s, &z, 9)?;
            let hom_add = ctx.frobenius(n, &ctx.add(&a, &b)?)?;
            tally.check_eq(&hom_add, &ctx.add(&ctx.frobenius(n, &a)?, &ctx.frobenius(n, &b)?)?, "frobenius additivity");
            let hom_mul = ctx.frobenius(n, &ctx.mul(&a, &b)?)?;
            tally.check_eq(&hom_mul, &ctx.mul(&ctx.frobenius(n, &a)?, &ctx.frobenius(n, &b)?)?, "frobenius multiplicativity");
        }
    }
    for (n, m) in [(2u64, 2u64), (2, 3), (3, 2), (2, 4), (3, 3), (4, 2)] {
        if n * m > max {
            continue;
        }
        for _ in 0..3 {
            let x = random_vec(&mut rng, &s, &z, 9)?;
            let nested = ctx.frobenius(n, &ctx.frobenius(m, &x)?)?;
            tally.check_eq(&nested, &ctx.frobenius(n * m, &x)?, "frobenius composition");
        }
    }
    for (n, m) in [(2u64, 3u64), (3, 2), (2, 5), (3, 5)] {
        if n > max || m > max {
            continue;
        }
        let sub = s.quotient(m);
        for _ in 0..3 {
            let x = random_vec(&mut rng, &sub, &z, 9)?;
            let left = ctx.frobenius(n, &verschiebung(m, &x, &s)?)?;
            let right = verschiebung(m, &ctx.frobenius(n, &x)?, &s.quotient(n))?;
            tally.check_eq(&left, &right, "coprime frobenius and verschiebung commute");
        }
    }
    Ok(tally)
}

fn vbasis_suite(ctx: &WittContext, max: u64, seed: u64) -> Result<Tally> {
    let mut tally = Tally::new();
    let s = upto(max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(5));
    let z = RingDescriptor::integers();
    for _ in 0..100 {
        let x = random_vec(&mut rng, &s, &z, 99)?;
        let back = from_vbasis(&to_vbasis(&x)?)?;
        tally.check_eq(&back, &x, "V-basis round trip");
    }
    let members = s.as_slice().to_vec();
    for _ in 0..50 {
        let m = members[rng.gen_range(0..members.len())];
        let n = members[rng.gen_range(0..members.len())];
        let one_m = WittVector::one(s.quotient(m), z.clone());
        let one_n = WittVector::one(s.quotient(n), z.clone());
        let product = ctx.mul(&verschiebung(m, &one_m, &s)?, &verschiebung(n, &one_n, &s)?)?;
        let c = m.gcd(&n);
        let expected = if s.contains(m / c * n) {
            let (c, l) = vbasis_product(&s, m, n)?;
            let one_l = WittVector::one(s.quotient(l), z.clone());
            ctx.mul_int(&verschiebung(l, &one_l, &s)?, c as i64)?
        } else {
            WittVector::zero(s.clone(), z.clone())
        };
        tally.check_eq(&product, &expected, "V-basis structure constant");
    }
    Ok(tally)
}

fn eps_suite(ctx: &WittContext, max: u64, seed: u64) -> Result<Tally> {
    let mut tally = Tally::new();
    let s = upto(max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(6));
    for p in [2u64, 3] {
        let ring = RingDescriptor::local_at(p)?;
        let family = epsilon_family(ctx, &ring, &s, p)?;
        let verified = family.verify(ctx);
        tally.check(verified.is_ok(), || {
            format!(
                "idempotent family laws broke at p={p}: {}",
                verified.as_ref().err().map(|e| e.to_string()).unwrap_or_default()
            )
        });
        let coprime = s.iter().filter(|&n| n % p != 0).count();
        let found = family.indices().count();
        tally.check(found == coprime, || {
            format!("expected {coprime} idempotents at p={p}, found {found}")
        });
        for _ in 0..15 {
            let x = random_vec(&mut rng, &s, &ring, 9)?;
            let parts = decompose(ctx, &x, p)?;
            let back = reassemble(&ring, &s, p, &parts)?;
            tally.check_eq(&back, &x, "decompose and reassemble round trip");
        }
    }
    Ok(tally)
}

fn exactseq_suite(ctx: &WittContext, max: u64, seed: u64) -> Result<Tally> {
    let mut tally = Tally::new();
    let cap: u128 = 1024;
    let sets: Vec<TruncationSet> = [
        vec![1u64, 2],
        vec![1, 2, 3],
        vec![1, 2, 3, 4],
        vec![1, 2, 4],
        vec![1, 2, 3, 6],
    ]
    .into_iter()
    .filter(|members| members.iter().all(|&n| n <= max))
    .map(TruncationSet::new)
    .collect::<Result<_>>()?;
    for modulus in [2u64, 3, 4] {
        let ring = RingDescriptor::integers_mod(modulus)?;
        let card = ring.cardinality().unwrap_or(u128::MAX);
        for s in &sets {
            if card.checked_pow(s.len() as u32).map_or(true, |total| total > cap) {
                continue;
            }
            for n in s.iter().filter(|&n| n > 1) {
                let report = exact_sequence_check(ctx, &ring, s, n, cap, 8, seed)?;
                tally.check(report.pass(), || {
                    format!(
                        "exactness broke for Z/{modulus}, S={s}, n={n}: {}",
                        report.counterexample.clone().unwrap_or_default()
                    )
                });
            }
        }
    }
    Ok(tally)
}

fn maxideal_suite(ctx: &WittContext, max: u64) -> Result<Tally> {
    let mut tally = Tally::new();
    let cap = max as u128;
    for (p, members, j) in [
        (2u64, vec![1u64, 2], 1u32),
        (2, vec![1, 2, 4], 1),
        (3, vec![1, 3], 1),
        (3, vec![1, 3], 2),
    ] {
        let s = TruncationSet::new(members)?;
        let report = verify_maximal_ideal_lemma(ctx, p, &s, j, cap)?;
        tally.check(report.pass(), || {
            format!(
                "maximal ideal shape broke for p={p}, S={s}, j={j}: {}",
                report.witness.clone().unwrap_or_default()
            )
        });
    }
    let ring = RingDescriptor::integers_mod(3)?;
    let s = TruncationSet::new([1u64, 2])?;
    let table = materialize(ctx, &ring, &s, cap)?;
    let count = table.maximal_ideals().len();
    tally.check(count == 2, || {
        format!("W_{{1,2}}(Z/3) should have 2 maximal ideals, found {count}")
    });
    Ok(tally)
}

fn phimod_suite(ctx: &WittContext, max: u64) -> Result<Tally> {
    let mut tally = Tally::new();
    let ambient = upto(max)?;
    let z = RingDescriptor::integers();
    let unit = PhiObject::unit(&ambient, &z)?;
    let tate1 = PhiObject::tate(ctx, -1, &ambient, &z)?;
    let tate2 = PhiObject::tate(ctx, -2, &ambient, &z)?;
    let pool = [
        ("unit", unit.clone()),
        ("tate(-1)", tate1.clone()),
        ("tate(-2)", tate2.clone()),
        ("unit + tate(-1)", unit.clone().direct_sum(ctx, &tate1)?),
        ("tate(-1) x tate(-2)", tate1.clone().tensor(ctx, &tate2)?),
        ("hom(tate(-1), unit)", tate1.clone().internal_hom(ctx, &unit)?),
        ("dual(tate(-2))", tate2.clone().dual(ctx)?),
    ];
    for (label, object) in &pool {
        let report = object.validate(ctx)?;
        tally.check(report.pass(), || {
            let first = report
                .violations
                .first()
                .map(|v| v.to_string())
                .unwrap_or_default();
            format!("{label} failed validation: {first}")
        });
    }
    let mut phi = BTreeMap::new();
    let mut beta = BTreeMap::new();
    for n in ambient.iter().filter(|&n| n >= 2) {
        let mut p = tate1.phi_matrix(&ambient, n)?;
        if n == 2 {
            p = p.mul_int(ctx, 2)?;
        }
        phi.insert(n, p);
        beta.insert(n, tate1.beta_matrix(&ambient, n)?);
    }
    let corrupted = PhiObject::from_raw(
        ambient.clone(),
        z.clone(),
        tate1.rank(),
        tate1.exponent(),
        tate1.twist(),
        phi,
        beta,
    )?;
    let report = corrupted.validate(ctx)?;
    tally.check(!report.pass(), || {
        String::from("a doubled phi_2 slipped past validation")
    });
    Ok(tally)
}

fn tangent_suite(ctx: &WittContext, max: u64, seed: u64) -> Result<Tally> {
    let mut tally = Tally::new();
    let ambient = upto(6)?;
    let z = RingDescriptor::integers();
    let unit = PhiObject::unit(&ambient, &z)?;
    let tate1 = PhiObject::tate(ctx, -1, &ambient, &z)?;
    let object = unit.clone().direct_sum(ctx, &tate1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(9));
    for round in 0..max {
        let (d1, d2) = match round {
            0 => (0i64, 0i64),
            1 => (1, 1),
            _ => {
                let mut draw = || match rng.gen_range(0..10) {
                    0 | 1 => 0i64,
                    2 | 3 | 4 => {
                        if rng.gen_bool(0.5) {
                            1
                        } else {
                            -1
                        }
                    }
                    _ => rng.gen_range(-3i64..=3),
                };
                (draw(), draw())
            }
        };
        let zero = WittVector::zero(ambient.clone(), z.clone());
        let mat = WittMatrix::new(
            ambient.clone(),
            z.clone(),
            2,
            2,
            vec![
                ctx.integer(&ambient, &z, d1)?,
                zero.clone(),
                zero,
                ctx.integer(&ambient, &z, d2)?,
            ],
        )?;
        let f = PhiMorphism::new(ctx, object.clone(), object.clone(), mat)?;
        let tangent = tangent_map(&f)?;
        tally.check(tangent.is_zero() == (d1 == 0 && d2 == 0), || {
            format!("tangent zero test disagreed for diag({d1}, {d2})")
        });
        let report = conservativity_harness(&f)?;
        tally.check(report.pass(), || {
            format!(
                "harness broke for diag({d1}, {d2}): {}",
                report.counterexample.clone().unwrap_or_default()
            )
        });
    }
    let two_adic = PhiObject::tate(ctx, -1, &ambient, &RingDescriptor::local_at(2)?)?;
    let report = p_typical_reduction_check(ctx, &two_adic, 2)?;
    tally.check(report.pass(), || {
        format!("2-typical reduction broke: {}", report.failures.join("; "))
    });
    let rational_unit = PhiObject::unit(&ambient, &RingDescriptor::rationals())?;
    let report = p_typical_reduction_check(ctx, &rational_unit, 3)?;
    tally.check(report.pass(), || {
        format!("3-typical reduction broke: {}", report.failures.join("; "))
    });
    Ok(tally)
}
