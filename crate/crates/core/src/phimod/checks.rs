//! Law checking for module systems: full axiom validation, morphism
//! tests with the two equivalent Hom conditions, the tangent functor at
//! level {1}, and the p-typical reduction of a module system.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::epsilon;
use crate::error::{Error, Result};
use crate::phimod::matrix::{Inverse, WittMatrix};
use crate::phimod::{n_power, PhiMorphism, PhiObject};
use crate::rings::{RingDescriptor, RingValue};
use crate::truncation::{divisor_closed_subsets, TruncationSet};
use crate::witt::{verschiebung, WittContext, WittVector};

const RANDOM_LAMBDAS: usize = 20;
const SEMILINEARITY_SAMPLES: usize = 5;
const SAMPLE_BOUND: i64 = 9;

/// One failed axiom instance: which law, at which level, with what data.
#[derive(Clone, Debug)]
pub struct Violation {
    pub axiom: String,
    pub level: String,
    pub n: u64,
    pub witness: String,
}

impl core::fmt::Display for Violation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} fails over {} at n = {}: {}", self.axiom, self.level, self.n, self.witness)
    }
}

/// Outcome of a full axiom sweep over every level of an object.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks_run: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, ok: bool, axiom: &str, level: &TruncationSet, n: u64, witness: impl Fn() -> String) {
        self.checks_run += 1;
        if !ok {
            self.violations.push(Violation {
                axiom: axiom.to_string(),
                level: level.to_string(),
                n,
                witness: witness(),
            });
        }
    }
}

impl core::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.pass() {
            write!(f, "{} checks passed", self.checks_run)
        } else {
            write!(f, "{} of {} checks failed; first: {}", self.violations.len(), self.checks_run, self.violations[0])
        }
    }
}

fn seed_for(s: &TruncationSet, n: u64) -> u64 {
    let h = s
        .iter()
        .fold(0xcbf29ce484222325u64, |h, e| (h ^ e).wrapping_mul(0x100000001b3));
    (h ^ n).wrapping_mul(0x100000001b3)
}

fn random_witt(rng: &mut ChaCha8Rng, s: &TruncationSet, ring: &RingDescriptor) -> WittVector {
    let coords = (0..s.len()).map(|_| ring.sample(rng, SAMPLE_BOUND)).collect();
    WittVector::new(s.clone(), ring.clone(), coords).expect("sampled coordinates are well formed")
}

fn mat_vec(ctx: &WittContext, m: &WittMatrix, v: &[WittVector]) -> Result<Vec<WittVector>> {
    if v.len() != m.cols() {
        return Err(Error::ShapeMismatch {
            reason: format!("vector of length {} against {} columns", v.len(), m.cols()),
        });
    }
    let mut out = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut acc = WittVector::zero(m.set().clone(), m.ring().clone());
        for k in 0..m.cols() {
            acc = ctx.add(&acc, &ctx.mul(m.entry(i, k), &v[k])?)?;
        }
        out.push(acc);
    }
    Ok(out)
}

fn scale_vec(ctx: &WittContext, lambda: &WittVector, v: &[WittVector]) -> Result<Vec<WittVector>> {
    v.iter().map(|e| ctx.mul(lambda, e)).collect()
}

fn frobenius_vec(ctx: &WittContext, n: u64, v: &[WittVector]) -> Result<Vec<WittVector>> {
    v.iter().map(|e| ctx.frobenius(n, e)).collect()
}

fn vec_eq(a: &[WittVector], b: &[WittVector]) -> bool {
    a == b
}

impl PhiObject {
    /// Checks every axiom at every divisor-closed level inside the
    /// ambient set: both composite laws as exact matrix identities, the
    /// sampled `lambda`-law through the Verschiebung-twisted evaluation,
    /// semilinearity on random inputs, and the composition laws for
    /// `phi` and `beta`. Restriction compatibility holds by construction
    /// because lower levels are coordinate restrictions of the ambient
    /// data.
    pub fn validate(&self, ctx: &WittContext) -> Result<ValidationReport> {
        let mut report = ValidationReport::default();
        for s in divisor_closed_subsets(self.ambient())? {
            if s.is_empty() {
                continue;
            }
            for n in s.iter().filter(|&n| n >= 2) {
                self.validate_level(ctx, &mut report, &s, n)?;
            }
        }
        Ok(report)
    }

    fn validate_level(
        &self,
        ctx: &WittContext,
        report: &mut ValidationReport,
        s: &TruncationSet,
        n: u64,
    ) -> Result<()> {
        let quotient = s.quotient(n);
        let ring = self.ring().clone();
        let rank = self.rank();
        let phi = self.phi_matrix(s, n)?;
        let g = self.beta_matrix(s, n)?;
        let npow = n_power(n, self.exponent() - 1)?;
        let scalar = WittMatrix::integer_scalar(ctx, &quotient, &ring, rank, npow)?;

        let composite = phi.matmul(ctx, &g)?;
        report.record(composite == scalar, "phi_n.beta_n = n^a", s, n, || {
            format!("phi*G = {composite}, expected {npow}*identity")
        });

        let reverse = g.matmul(ctx, &phi)?;
        report.record(
            reverse == scalar,
            "beta_n(lambda.phi_n(x)) = n^(a-1).V_n(lambda).x",
            s,
            n,
            || format!("G*phi = {reverse}, expected {npow}*identity"),
        );

        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(s, n));
        let mut lambdas = vec![
            WittVector::zero(quotient.clone(), ring.clone()),
            WittVector::one(quotient.clone(), ring.clone()),
        ];
        for k in quotient.iter().filter(|&k| k >= 2) {
            let inner = WittVector::one(quotient.quotient(k), ring.clone());
            lambdas.push(verschiebung(k, &inner, &quotient)?);
        }
        for _ in 0..RANDOM_LAMBDAS {
            lambdas.push(random_witt(&mut rng, &quotient, &ring));
        }
        for lambda in &lambdas {
            for j in 0..rank {
                let column: Vec<WittVector> =
                    (0..rank).map(|i| phi.entry(i, j).clone()).collect();
                let scaled = scale_vec(ctx, lambda, &column)?;
                let image = mat_vec(ctx, &g, &scaled)?;
                let expected_j = ctx.mul_int(&verschiebung(n, lambda, s)?, npow)?;
                let mut ok = true;
                for (i, value) in image.iter().enumerate() {
                    let lifted = verschiebung(n, value, s)?;
                    let expected = if i == j {
                        expected_j.clone()
                    } else {
                        WittVector::zero(s.clone(), ring.clone())
                    };
                    if lifted != expected {
                        ok = false;
                        break;
                    }
                }
                report.record(
                    ok,
                    "beta_n(lambda.phi_n(x)) = n^(a-1).V_n(lambda).x",
                    s,
                    n,
                    || format!("lambda = {lambda}, basis column {j}"),
                );
            }
        }

        for _ in 0..SEMILINEARITY_SAMPLES {
            let lambda = random_witt(&mut rng, s, &ring);
            let x: Vec<WittVector> = (0..rank).map(|_| random_witt(&mut rng, s, &ring)).collect();
            let lhs = mat_vec(ctx, &phi, &frobenius_vec(ctx, n, &scale_vec(ctx, &lambda, &x)?)?)?;
            let f_lambda = ctx.frobenius(n, &lambda)?;
            let rhs = scale_vec(ctx, &f_lambda, &mat_vec(ctx, &phi, &frobenius_vec(ctx, n, &x)?)?)?;
            report.record(vec_eq(&lhs, &rhs), "phi_n(lambda.x) = F_n(lambda).phi_n(x)", s, n, || {
                format!("lambda = {lambda}")
            });
        }

        for m in s.iter().filter(|&m| m >= 2) {
            let Some(nm) = n.checked_mul(m) else { continue };
            if !s.contains(nm) {
                continue;
            }
            let lhs = self
                .phi_matrix(&s.quotient(m), n)?
                .matmul(ctx, &self.phi_matrix(s, m)?.frobenius(ctx, n)?)?;
            let rhs = self.phi_matrix(s, nm)?;
            report.record(lhs == rhs, "phi_n.phi_m = phi_nm", s, n, || {
                format!("m = {m}: got {lhs}, expected {rhs}")
            });

            let lhs = self
                .beta_matrix(s, m)?
                .frobenius(ctx, n)?
                .matmul(ctx, &self.beta_matrix(&s.quotient(m), n)?)?;
            let rhs = self.beta_matrix(s, nm)?;
            report.record(lhs == rhs, "beta_n.beta_m = beta_nm", s, n, || {
                format!("m = {m}: got {lhs}, expected {rhs}")
            });

            if m != n && n.gcd(&m) == 1 {
                let lhs = self
                    .phi_matrix(s, n)?
                    .frobenius(ctx, m)?
                    .matmul(ctx, &self.beta_matrix(s, m)?.frobenius(ctx, n)?)?;
                let rhs = self
                    .beta_matrix(&s.quotient(n), m)?
                    .matmul(ctx, &self.phi_matrix(&s.quotient(m), n)?)?;
                report.record(lhs == rhs, "phi_n.beta_m = beta_m.phi_n", s, n, || {
                    format!("m = {m}: got {lhs}, expected {rhs}")
                });
            }
        }
        Ok(())
    }
}

/// Decides whether `f` (an ambient-level candidate matrix) is a morphism
/// from `source` to `target`.
///
/// Two conditions are evaluated independently at every level: the
/// `phi`-commuting square, and the composite condition
/// `n * Phi_N * F_n(f_S) * G_M = n^(a_M) * f_(S/n)`. They are provably
/// equivalent over a torsion-free base, so any divergence is reported as
/// an internal error. For a matrix that passes, compatibility with the
/// `beta` maps is asserted as well.
pub fn hom_set_check(
    ctx: &WittContext,
    source: &PhiObject,
    target: &PhiObject,
    f: &WittMatrix,
) -> Result<bool> {
    source.require_same_setting(target)?;
    if source.twist() != target.twist() {
        return Err(Error::TwistMismatch { left: source.twist(), right: target.twist() });
    }
    if f.rows() != target.rank() || f.cols() != source.rank() {
        return Err(Error::ShapeMismatch {
            reason: format!(
                "candidate is {}x{}, expected {}x{}",
                f.rows(),
                f.cols(),
                target.rank(),
                source.rank()
            ),
        });
    }
    if f.set() != source.ambient() {
        return Err(Error::ShapeMismatch {
            reason: format!("candidate lives over {}, expected {}", f.set(), source.ambient()),
        });
    }
    if f.ring() != source.ring() {
        return Err(Error::DescriptorMismatch {
            expected: source.ring().name(),
            found: f.ring().name(),
        });
    }

    let mut is_morphism = true;
    let levels = divisor_closed_subsets(source.ambient())?;
    for s in &levels {
        for n in s.iter().filter(|&n| n >= 2) {
            let quotient = s.quotient(n);
            let f_s = f.restrict(s)?;
            let f_q = f.restrict(&quotient)?;
            let commute_lhs = target.phi_matrix(s, n)?.matmul(ctx, &f_s.frobenius(ctx, n)?)?;
            let commute_rhs = f_q.matmul(ctx, &source.phi_matrix(s, n)?)?;
            let square = commute_lhs == commute_rhs;

            let composite_lhs =
                commute_lhs.matmul(ctx, &source.beta_matrix(s, n)?)?.mul_int(ctx, n as i64)?;
            let composite_rhs = f_q.mul_int(ctx, n_power(n, source.exponent())?)?;
            let composite = composite_lhs == composite_rhs;

            if square != composite {
                return Err(Error::Internal {
                    detail: format!(
                        "hom conditions diverge over {s} at n = {n}: square {square}, composite {composite}"
                    ),
                });
            }
            is_morphism &= square;
        }
    }

    if is_morphism {
        let common = source.exponent().max(target.exponent());
        for s in &levels {
            for n in s.iter().filter(|&n| n >= 2) {
                let quotient = s.quotient(n);
                let g_source = source
                    .beta_matrix(s, n)?
                    .mul_int(ctx, n_power(n, common - source.exponent())?)?;
                let g_target = target
                    .beta_matrix(s, n)?
                    .mul_int(ctx, n_power(n, common - target.exponent())?)?;
                let lhs = f.restrict(s)?.frobenius(ctx, n)?.matmul(ctx, &g_source)?;
                let rhs = g_target.matmul(ctx, &f.restrict(&quotient)?)?;
                if lhs != rhs {
                    return Err(Error::Internal {
                        detail: format!(
                            "phi-commuting matrix fails beta compatibility over {s} at n = {n}"
                        ),
                    });
                }
            }
        }
    }
    Ok(is_morphism)
}

/// The value of a module system at level {1}, under `W_{{1}}(R) = R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentModule {
    pub ring: RingDescriptor,
    pub rank: usize,
}

impl core::fmt::Display for TangentModule {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "free module of rank {} over {}", self.rank, self.ring.name())
    }
}

/// The value of a morphism at level {1}: a plain matrix over `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentMap {
    ring: RingDescriptor,
    rows: usize,
    cols: usize,
    entries: Vec<RingValue>,
}

impl TangentMap {
    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &RingValue {
        &self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        let zero = self.ring.zero();
        self.entries.iter().all(|e| self.ring.eq_values(e, &zero).unwrap_or(false))
    }
}

impl core::fmt::Display for TangentMap {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.ring.fmt_value(self.entry(i, j)))?;
            }
        }
        write!(f, "]")
    }
}

fn level_one(ambient: &TruncationSet) -> Result<TruncationSet> {
    if !ambient.contains(1) {
        return Err(Error::NotSubset);
    }
    TruncationSet::new([1])
}

/// Evaluates an object at `S = {1}`.
pub fn tangent_module(object: &PhiObject) -> Result<TangentModule> {
    level_one(object.ambient())?;
    Ok(TangentModule { ring: object.ring().clone(), rank: object.rank() })
}

/// Evaluates a morphism at `S = {1}` and reads the matrix over `R`.
pub fn tangent_map(f: &PhiMorphism) -> Result<TangentMap> {
    let restricted = tangent_witt_matrix(f)?;
    let entries = (0..restricted.rows())
        .flat_map(|i| (0..restricted.cols()).map(move |j| (i, j)))
        .map(|(i, j)| restricted.entry(i, j).coord(1).expect("level {1} has index 1").clone())
        .collect();
    Ok(TangentMap {
        ring: f.source().ring().clone(),
        rows: restricted.rows(),
        cols: restricted.cols(),
        entries,
    })
}

fn tangent_witt_matrix(f: &PhiMorphism) -> Result<WittMatrix> {
    let one = level_one(f.source().ambient())?;
    f.matrix_at(&one)
}

/// The two tangent-functor assertions, run on one morphism.
#[derive(Clone, Debug)]
pub struct HarnessReport {
    pub tangent_is_zero: bool,
    pub tangent_is_invertible: bool,
    pub faithful_checked: Option<bool>,
    pub conservative_checked: Option<bool>,
    pub counterexample: Option<String>,
}

impl HarnessReport {
    /// Whether either precondition held, so a branch actually ran.
    pub fn applicable(&self) -> bool {
        self.faithful_checked.is_some() || self.conservative_checked.is_some()
    }

    pub fn pass(&self) -> bool {
        self.faithful_checked.unwrap_or(true) && self.conservative_checked.unwrap_or(true)
    }
}

impl core::fmt::Display for HarnessReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match (self.faithful_checked, self.conservative_checked) {
            (None, None) => write!(f, "not applicable: tangent is neither zero nor invertible"),
            (Some(ok), _) => write!(f, "faithfulness branch: {}", if ok { "pass" } else { "fail" }),
            (_, Some(ok)) => {
                write!(f, "conservativity branch: {}", if ok { "pass" } else { "fail" })
            }
        }
    }
}

/// Tests the two tangent assertions on `f`: a zero tangent map forces
/// the whole morphism to vanish, and a tangent map invertible over `R`
/// forces the morphism to be invertible over every Witt ring. The
/// ambient level decides both, since all lower levels are coordinate
/// restrictions.
pub fn conservativity_harness(f: &PhiMorphism) -> Result<HarnessReport> {
    let tangent = tangent_witt_matrix(f)?;
    let tangent_is_zero = tangent.is_zero();
    let tangent_is_invertible = tangent.invert()?.invertible();
    let mut report = HarnessReport {
        tangent_is_zero,
        tangent_is_invertible,
        faithful_checked: None,
        conservative_checked: None,
        counterexample: None,
    };
    if tangent_is_zero {
        let vanishes = f.matrix().is_zero();
        report.faithful_checked = Some(vanishes);
        if !vanishes {
            report.counterexample = Some(format!("tangent is zero but the matrix is {}", f.matrix()));
        }
    }
    if tangent_is_invertible {
        match f.matrix().invert()? {
            Inverse::Invertible(_) => report.conservative_checked = Some(true),
            Inverse::Singular { index } => {
                report.conservative_checked = Some(false);
                report.counterexample =
                    Some(format!("ghost component {index} of {} is singular", f.matrix()));
            }
            Inverse::NotIntegral { detail } => {
                report.conservative_checked = Some(false);
                report.counterexample = Some(detail);
            }
        }
    }
    Ok(report)
}

/// Outcome of the p-typical reduction of one object.
#[derive(Clone, Debug)]
pub struct ReductionReport {
    pub p: u64,
    pub checks_run: usize,
    pub failures: Vec<String>,
}

impl ReductionReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

impl core::fmt::Display for ReductionReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.pass() {
            write!(f, "{} reduction checks passed at p = {}", self.checks_run, self.p)
        } else {
            write!(f, "{} of {} reduction checks failed at p = {}; first: {}", self.failures.len(), self.checks_run, self.p, self.failures[0])
        }
    }
}

fn scale_by_witt(ctx: &WittContext, w: &WittVector, v: &[WittVector]) -> Result<Vec<WittVector>> {
    v.iter().map(|e| ctx.mul(w, e)).collect()
}

/// Verifies, on sampled module elements, that multiplication by the
/// idempotent `epsilon_1` reduces level `S` to the p-power level `S_p`
/// bijectively, and that `phi_n` maps the `epsilon_n` component of `M_S`
/// bijectively onto the `epsilon_1` component of `M_{S/n}` with
/// `epsilon_n * beta_n / n^a` as a two-sided inverse.
pub fn p_typical_reduction_check(
    ctx: &WittContext,
    object: &PhiObject,
    p: u64,
) -> Result<ReductionReport> {
    match object.ring() {
        RingDescriptor::LocalIntegersAtP(q) if *q == p => {}
        RingDescriptor::Rationals => {}
        other => {
            return Err(Error::WrongRing {
                reason: format!(
                    "p-typical reduction at p = {p} needs Z localized at {p} or the rationals, got {}",
                    other.name()
                ),
            })
        }
    }
    if !crate::truncation::is_prime(p) {
        return Err(Error::NotPrime { value: p });
    }
    let ring = object.ring().clone();
    let rank = object.rank();
    let mut report = ReductionReport { p, checks_run: 0, failures: Vec::new() };

    for s in divisor_closed_subsets(object.ambient())? {
        if s.is_empty() {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed_for(&s, p));
        let sp = s.p_part(p);
        let eps_one = epsilon::epsilon(ctx, &ring, 1, &s, p)?;
        let coprime: Vec<u64> = s.iter().filter(|&n| n.gcd(&p) == 1).collect();

        let project = |x: &[WittVector]| -> Result<Vec<WittVector>> {
            x.iter().map(|c| ctx.mul(&eps_one, c)?.restrict(&sp)).collect()
        };
        let section = |y: &[WittVector]| -> Result<Vec<WittVector>> {
            y.iter()
                .map(|c| {
                    let mut components = BTreeMap::new();
                    for &n in &coprime {
                        let target = s.quotient(n).p_part(p);
                        let value = if n == 1 {
                            c.clone()
                        } else {
                            WittVector::zero(target.clone(), ring.clone())
                        };
                        components.insert(n, value);
                    }
                    epsilon::reassemble(&ring, &s, p, &components)
                })
                .collect()
        };

        for round in 0..3 {
            let x: Vec<WittVector> = (0..rank).map(|_| random_witt(&mut rng, &s, &ring)).collect();
            let reduced = project(&x)?;
            let lifted = section(&reduced)?;
            let expected = scale_by_witt(ctx, &eps_one, &x)?;
            report.checks_run += 1;
            if lifted != expected {
                report.failures.push(format!(
                    "section.project differs from epsilon_1 over {s} (round {round})"
                ));
            }
            let y: Vec<WittVector> = (0..rank).map(|_| random_witt(&mut rng, &sp, &ring)).collect();
            let round_trip = project(&section(&y)?)?;
            report.checks_run += 1;
            if round_trip != y {
                report.failures.push(format!(
                    "project.section is not the identity over {sp} (round {round})"
                ));
            }
        }

        for &n in coprime.iter().filter(|&&n| n >= 2) {
            let quotient = s.quotient(n);
            let eps_n = epsilon::epsilon(ctx, &ring, n, &s, p)?;
            let eps_one_quotient = epsilon::epsilon(ctx, &ring, 1, &quotient, p)?;
            let phi = object.phi_matrix(&s, n)?;
            let g = object.beta_matrix(&s, n)?;
            let napow = n_power(n, object.exponent())?;

            let forward = |x: &[WittVector]| -> Result<Vec<WittVector>> {
                mat_vec(ctx, &phi, &frobenius_vec(ctx, n, x)?)
            };
            let backward = |z: &[WittVector]| -> Result<Vec<WittVector>> {
                let image = mat_vec(ctx, &g, z)?;
                image
                    .iter()
                    .map(|c| {
                        let lifted = verschiebung(n, c, &s)?;
                        ctx.div_int(&ctx.mul(&eps_n, &lifted)?, napow)
                    })
                    .collect()
            };

            for round in 0..3 {
                let x: Vec<WittVector> =
                    (0..rank).map(|_| random_witt(&mut rng, &s, &ring)).collect();
                let component = scale_by_witt(ctx, &eps_n, &x)?;
                let image = forward(&component)?;
                report.checks_run += 1;
                match backward(&image) {
                    Ok(recovered) if recovered == component => {}
                    Ok(_) => report.failures.push(format!(
                        "beta-inverse fails to undo phi_{n} over {s} (round {round})"
                    )),
                    Err(Error::NotDivisible { divisor }) => report.failures.push(format!(
                        "beta-inverse of phi_{n} over {s} is not divisible by {divisor} (round {round})"
                    )),
                    Err(other) => return Err(other),
                }

                let w: Vec<WittVector> =
                    (0..rank).map(|_| random_witt(&mut rng, &quotient, &ring)).collect();
                let target = scale_by_witt(ctx, &eps_one_quotient, &w)?;
                report.checks_run += 1;
                match backward(&target) {
                    Ok(lifted) => {
                        if forward(&lifted)? != target {
                            report.failures.push(format!(
                                "phi_{n} fails to undo the beta-inverse over {s} (round {round})"
                            ));
                        }
                    }
                    Err(Error::NotDivisible { divisor }) => report.failures.push(format!(
                        "beta-inverse over {s} at n = {n} is not divisible by {divisor} (round {round})"
                    )),
                    Err(other) => return Err(other),
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phimod::PhiObject;

    fn z() -> RingDescriptor {
        RingDescriptor::integers()
    }

    fn q() -> TruncationSet {
        TruncationSet::new([1, 2, 3, 4, 6]).unwrap()
    }

    fn corrupt_phi(ctx: &WittContext, object: &PhiObject, n: u64, factor: i64) -> PhiObject {
        let mut phi = BTreeMap::new();
        let mut beta = BTreeMap::new();
        for k in object.ambient().iter().filter(|&k| k >= 2) {
            let mat = object.phi_matrix(object.ambient(), k).unwrap();
            phi.insert(k, if k == n { mat.mul_int(ctx, factor).unwrap() } else { mat });
            beta.insert(k, object.beta_matrix(object.ambient(), k).unwrap());
        }
        PhiObject::from_raw(
            object.ambient().clone(),
            object.ring().clone(),
            object.rank(),
            object.exponent(),
            object.twist(),
            phi,
            beta,
        )
        .unwrap()
    }

    #[test]
    fn unit_and_tate_validate() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let report = unit.validate(&ctx).unwrap();
        assert!(report.pass(), "{report}");
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        assert!(t1.validate(&ctx).unwrap().pass());
    }

    #[test]
    fn sums_tensors_homs_validate() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        let sum = unit.direct_sum(&ctx, &t1).unwrap();
        let tensor = sum.tensor(&ctx, &t1).unwrap();
        let hom = sum.internal_hom(&ctx, &t1).unwrap();
        for object in [&sum, &tensor, &hom, &t1.dual(&ctx).unwrap()] {
            let report = object.validate(&ctx).unwrap();
            assert!(report.pass(), "{object}: {report}");
        }
    }

    #[test]
    fn corrupted_phi_fails_validation() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let bad = corrupt_phi(&ctx, &unit, 2, 2);
        let report = bad.validate(&ctx).unwrap();
        assert!(!report.pass());
        let axioms: Vec<&str> = report.violations.iter().map(|v| v.axiom.as_str()).collect();
        assert!(
            axioms.iter().any(|a| a.contains("phi_n.phi_m") || a.contains("beta")),
            "unexpected axioms: {axioms:?}"
        );
    }

    #[test]
    fn scalar_is_a_morphism_and_teichmuller_is_not() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let scalar =
            WittMatrix::integer_scalar(&ctx, &q(), &z(), 1, 7).unwrap();
        assert!(hom_set_check(&ctx, &unit, &unit, &scalar).unwrap());
        let zero = WittMatrix::zero(q(), z(), 1, 1);
        assert!(hom_set_check(&ctx, &unit, &unit, &zero).unwrap());

        let teich = crate::witt::teichmuller(z().from_i64(3), q(), z()).unwrap();
        let candidate = WittMatrix::new(q(), z(), 1, 1, vec![teich]).unwrap();
        assert!(!hom_set_check(&ctx, &unit, &unit, &candidate).unwrap());

        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        assert!(hom_set_check(&ctx, &unit, &t1, &zero).unwrap());
    }

    #[test]
    fn tangent_of_scalar_reads_the_integer() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let five = PhiMorphism::scalar(&ctx, &unit, 5).unwrap();
        let map = tangent_map(&five).unwrap();
        assert_eq!(map.entry(0, 0), &z().from_i64(5));
        assert_eq!(tangent_module(&unit).unwrap().rank, 1);
    }

    #[test]
    fn tangent_multiplies_under_tensor() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let t1 = PhiObject::tate(&ctx, -1, &q(), &z()).unwrap();
        let sum = unit.direct_sum(&ctx, &t1).unwrap();
        let product = sum.tensor(&ctx, &sum).unwrap();
        assert_eq!(
            tangent_module(&product).unwrap().rank,
            tangent_module(&sum).unwrap().rank * tangent_module(&sum).unwrap().rank
        );
    }

    #[test]
    fn harness_branches() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        let identity = PhiMorphism::scalar(&ctx, &unit, 1).unwrap();
        let report = conservativity_harness(&identity).unwrap();
        assert!(report.applicable());
        assert_eq!(report.conservative_checked, Some(true));

        let zero = PhiMorphism::scalar(&ctx, &unit, 0).unwrap();
        let report = conservativity_harness(&zero).unwrap();
        assert_eq!(report.faithful_checked, Some(true));

        let double = PhiMorphism::scalar(&ctx, &unit, 2).unwrap();
        let report = conservativity_harness(&double).unwrap();
        assert!(!report.applicable());
        assert!(report.pass());
    }

    #[test]
    fn reduction_passes_for_tate_over_z2() {
        let ctx = WittContext::new();
        let ring = RingDescriptor::local_at(2).unwrap();
        let ambient = TruncationSet::new([1, 2, 3, 6]).unwrap();
        let t1 = PhiObject::tate(&ctx, -1, &ambient, &ring).unwrap();
        let report = p_typical_reduction_check(&ctx, &t1, 2).unwrap();
        assert!(report.pass(), "{report}");
    }

    #[test]
    fn reduction_rejects_the_integers() {
        let ctx = WittContext::new();
        let unit = PhiObject::unit(&q(), &z()).unwrap();
        assert!(matches!(
            p_typical_reduction_check(&ctx, &unit, 2),
            Err(Error::WrongRing { .. })
        ));
    }

    #[test]
    fn corrupted_beta_fails_reduction() {
        let ctx = WittContext::new();
        let ring = RingDescriptor::local_at(2).unwrap();
        let ambient = TruncationSet::new([1, 2, 3, 6]).unwrap();
        let t1 = PhiObject::tate(&ctx, -1, &ambient, &ring).unwrap();
        let mut phi = BTreeMap::new();
        let mut beta = BTreeMap::new();
        for k in ambient.iter().filter(|&k| k >= 2) {
            phi.insert(k, t1.phi_matrix(&ambient, k).unwrap());
            beta.insert(k, t1.beta_matrix(&ambient, k).unwrap().mul_int(&ctx, 3).unwrap());
        }
        let bad = PhiObject::from_raw(ambient, ring, 1, 2, 0, phi, beta).unwrap();
        let report = p_typical_reduction_check(&ctx, &bad, 2).unwrap();
        assert!(!report.pass());
    }
}
