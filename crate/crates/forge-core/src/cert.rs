//! Self-describing JSON certificates for search results, matrix witnesses,
//! subgroup classifications, and whole verification sweeps.
//!
//! Every certificate names the checks that were performed when it was
//! built, and `recheck_certificate` re-runs exactly those named checks
//! from the certificate's own data, so a stored certificate can be
//! re-examined offline at any time. Integers that may exceed 2^53 - 1 are
//! serialized as decimal strings so that every JSON consumer sees exact
//! values; smaller integers stay plain JSON numbers.

use std::fmt;
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::fp::PrimePower;
use crate::field::tower::{rref, Tower};
use crate::field::FiniteField;
use crate::gsp::classify::{canonical_span, is_invariant, is_nonsingular_subspace};
use crate::gsp::{
    admissible_prime, classify_subgroup, criterion_check, group_closure, sp_order,
    symplectic_companion, Classification, Criterion, Matrix, SympSpace,
};
use crate::poly::{
    count_report_cell, find_symplectic_irreducible, is_irreducible, is_symplectic, poly_trace,
    symplectic_lift, CountKind, CountReport, CountValue, MonicPoly,
};

/// Version of the certificate JSON layout produced by this crate.
pub const SCHEMA_VERSION: u64 = 1;

/// Default ceiling on exhaustive enumeration sweeps (3^10 candidates).
pub const DEFAULT_ENUMERATION_CAP: u64 = 59_049;

/// Default ceiling on group-closure sizes.
pub const DEFAULT_CLOSURE_CAP: u64 = 1_000_000;

/// The (n, l) cells whose full symplectic closure is recomputed during a
/// verification sweep whenever it fits under the closure cap.
const FULL_CLOSURE_CELLS: [(usize, u64); 3] = [(1, 5), (1, 7), (2, 3)];

const CERT_SEARCH: &str = "search";
const CERT_WITNESS: &str = "witness";
const CERT_CLASSIFY: &str = "classify";
const KIND_VERIFY_ALL: &str = "verify-all";

const CHECK_CANONICAL_MODULUS: &str = "canonical-modulus";
const CHECK_POLY_SYMPLECTIC: &str = "polynomial-symplectic";
const CHECK_POLY_IRREDUCIBLE: &str = "polynomial-irreducible";
const CHECK_POLY_NONZERO_TRACE: &str = "polynomial-nonzero-trace";
const CHECK_LIFT_CONSISTENCY: &str = "lift-consistency";
const CHECK_MATRIX_MULTIPLIER_ONE: &str = "matrix-multiplier-one";
const CHECK_MATRIX_CHAR_POLY: &str = "matrix-char-poly";
const CHECK_TRANSVECTION_VALID: &str = "transvection-valid";
const CHECK_GENERATORS_MULTIPLIERS: &str = "generators-multipliers";
const CHECK_CLOSURE_COUNT: &str = "closure-count";
const CHECK_CRITERION: &str = "criterion";
const CHECK_CLASSIFICATION: &str = "classification";
const CHECK_CLASSIFICATION_WITNESS: &str = "classification-witness";

const SEARCH_CHECKS: [&str; 5] = [
    CHECK_CANONICAL_MODULUS,
    CHECK_POLY_SYMPLECTIC,
    CHECK_POLY_IRREDUCIBLE,
    CHECK_POLY_NONZERO_TRACE,
    CHECK_LIFT_CONSISTENCY,
];

const CLASSIFY_CHECKS: [&str; 5] = [
    CHECK_GENERATORS_MULTIPLIERS,
    CHECK_CLOSURE_COUNT,
    CHECK_CRITERION,
    CHECK_CLASSIFICATION,
    CHECK_CLASSIFICATION_WITNESS,
];

/// Resource ceilings for every recomputation: `enumeration` bounds
/// exhaustive sweeps over field elements or polynomials, `closure` bounds
/// group-closure sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub enumeration: u64,
    pub closure: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: DEFAULT_ENUMERATION_CAP,
            closure: DEFAULT_CLOSURE_CAP,
        }
    }
}

impl Caps {
    /// Resolve the effective caps: an explicit value (flag takes precedence
    /// over environment) overrides both ceilings; otherwise the defaults
    /// apply.
    pub fn resolve(flag: Option<u64>, env: Option<u64>) -> Caps {
        match flag.or(env) {
            Some(v) => Caps {
                enumeration: v,
                closure: v,
            },
            None => Caps::default(),
        }
    }
}

/// Largest integer magnitude serialized as a plain JSON number.
const MAX_SAFE_JSON: u64 = (1 << 53) - 1;

/// An exact integer in JSON: a number when it fits losslessly in a double,
/// a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonInt {
    Num(i64),
    Str(String),
}

impl JsonInt {
    pub fn to_bigint(&self) -> Result<BigInt> {
        match self {
            JsonInt::Num(v) => Ok(BigInt::from(*v)),
            JsonInt::Str(s) => s
                .parse()
                .map_err(|_| Error::Parse(format!("'{s}' is not a decimal integer"))),
        }
    }

    fn from_u128(v: u128) -> JsonInt {
        if v <= MAX_SAFE_JSON as u128 {
            JsonInt::Num(v as i64)
        } else {
            JsonInt::Str(v.to_string())
        }
    }
}

impl From<u64> for JsonInt {
    fn from(v: u64) -> JsonInt {
        JsonInt::from_u128(v as u128)
    }
}

impl From<&BigInt> for JsonInt {
    fn from(v: &BigInt) -> JsonInt {
        match i64::try_from(v) {
            Ok(small) if small.unsigned_abs() <= MAX_SAFE_JSON => JsonInt::Num(small),
            _ => JsonInt::Str(v.to_string()),
        }
    }
}

impl fmt::Display for JsonInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JsonInt::Num(v) => write!(f, "{v}"),
            JsonInt::Str(s) => write!(f, "{s}"),
        }
    }
}

/// A closed-form value: plain integer or exact ratio.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CountValueJson {
    Int(JsonInt),
    Ratio {
        numerator: JsonInt,
        denominator: JsonInt,
    },
}

fn count_value_json(v: &CountValue) -> CountValueJson {
    match v {
        CountValue::Int(b) => CountValueJson::Int(JsonInt::from(b)),
        CountValue::Ratio(r) => CountValueJson::Ratio {
            numerator: JsonInt::from(r.numer()),
            denominator: JsonInt::from(r.denom()),
        },
    }
}

fn count_value_from_json(v: &CountValueJson) -> Result<CountValue> {
    match v {
        CountValueJson::Int(i) => Ok(CountValue::Int(i.to_bigint()?)),
        CountValueJson::Ratio {
            numerator,
            denominator,
        } => {
            let denom = denominator.to_bigint()?;
            if denom.is_zero() {
                return Err(Error::Parse("ratio with zero denominator".into()));
            }
            Ok(CountValue::Ratio(BigRational::new(
                numerator.to_bigint()?,
                denom,
            )))
        }
    }
}

/// The base field: characteristic, extension degree, and the modulus lower
/// coefficients a_0..a_{r-1} (the leading 1 is implicit).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub r: u32,
    pub modulus: Vec<u64>,
}

/// A square matrix as row-major entries, with its similitude multiplier.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixData {
    pub entries: Vec<u64>,
    pub multiplier: u64,
}

/// What a group-closure computation established. `verified: false` means
/// the closure was skipped because it would exceed the cap; the counts are
/// then absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureStats {
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total: Option<JsonInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier_one: Option<JsonInt>,
    pub expected_sp_order: JsonInt,
}

/// The two generation-criterion properties observed in a closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionJson {
    pub has_transvection: bool,
    pub has_irreducible_nonzero_trace: bool,
}

impl From<Criterion> for CriterionJson {
    fn from(c: Criterion) -> Self {
        CriterionJson {
            has_transvection: c.has_transvection,
            has_irreducible_nonzero_trace: c.has_irreducible_nonzero_trace,
        }
    }
}

/// Outcome of the subgroup trichotomy, with its witness data: an invariant
/// nonsingular subspace, a permuted block decomposition, or the order of
/// the full symplectic group that was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum ClassificationJson {
    Reducible { subspace: Vec<Vec<u64>> },
    Imprimitive { blocks: Vec<Vec<Vec<u64>>> },
    ContainsSp { order: JsonInt },
}

fn classification_json(c: &Classification, multiplier_one: u64) -> ClassificationJson {
    match c {
        Classification::Reducible { subspace } => ClassificationJson::Reducible {
            subspace: subspace.clone(),
        },
        Classification::Imprimitive { blocks } => ClassificationJson::Imprimitive {
            blocks: blocks.clone(),
        },
        Classification::ContainsSp => ClassificationJson::ContainsSp {
            order: JsonInt::from(multiplier_one),
        },
    }
}

/// One closed-form count compared against exhaustive enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReportJson {
    pub kind: String,
    pub p: u64,
    pub r: u32,
    pub n: u32,
    pub formula: CountValueJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<JsonInt>,
    pub agree: bool,
    pub capped: bool,
}

impl From<&CountReport> for CountReportJson {
    fn from(rep: &CountReport) -> Self {
        CountReportJson {
            kind: rep.kind.as_str().to_string(),
            p: rep.p,
            r: rep.r,
            n: rep.n,
            formula: count_value_json(&rep.formula),
            enumeration: rep.enumeration.as_ref().map(JsonInt::from),
            agree: rep.agree,
            capped: rep.capped,
        }
    }
}

fn count_kind_from_str(s: &str) -> Result<CountKind> {
    match s {
        "irreducible" => Ok(CountKind::Irreducible),
        "nonzero_trace" => Ok(CountKind::NonzeroTrace),
        "reducible_alpha" => Ok(CountKind::ReducibleAlpha),
        "bound_m" => Ok(CountKind::BoundM),
        other => Err(Error::Parse(format!("unknown count kind '{other}'"))),
    }
}

/// A certificate: the constructed object(s) plus the list of checks that
/// were run when it was built. `recheck_certificate` re-runs the named
/// checks from this data alone.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u64,
    /// "search", "witness", or "classify".
    pub kind: String,
    pub field: FieldSpec,
    /// Order of the base field.
    pub q: JsonInt,
    /// Half of the certified polynomial degree / matrix dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    /// Monic palindromic irreducible of degree 2n: lower coefficients
    /// a_0..a_{2n-1}, each as base-p coefficient lists (constant first).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<Vec<Vec<u64>>>,
    /// Coefficient of x^(2n-1), guaranteed nonzero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial_trace: Option<Vec<u64>>,
    /// Minimal polynomial of alpha over the base field (degree n).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_polynomial: Option<Vec<Vec<u64>>>,
    /// Element of the degree-n extension whose lift produced the
    /// polynomial, as base-p coefficients in the extension field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<u64>>,
    /// Relative trace of alpha down to the base field, nonzero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_trace: Option<Vec<u64>>,
    /// Symplectic matrix realizing the polynomial as its characteristic
    /// polynomial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_matrix: Option<MatrixData>,
    /// A symplectic transvection accompanying the witness matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transvection: Option<MatrixData>,
    /// Generators of the classified subgroup.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<MatrixData>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure: Option<ClosureStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub criterion: Option<CriterionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationJson>,
    /// Names of the checks performed at build time.
    pub checks: Vec<String>,
    /// Unix seconds at build time; absent in deterministic mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

/// One fixed full-group closure cell of a verification sweep: the closure of a companion
/// matrix and a transvection should be the full symplectic group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureCheckJson {
    pub n: u32,
    pub l: u64,
    pub expected_sp_order: JsonInt,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier_one: Option<JsonInt>,
    pub pass: bool,
    pub capped: bool,
}

/// Outcome of a full verification sweep: every closed-form count compared
/// against enumeration, plus the fixed full-group closure cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyAllReport {
    pub schema_version: u64,
    pub kind: String,
    pub q_max: u64,
    pub n_max: u32,
    pub count_reports: Vec<CountReportJson>,
    pub closure_checks: Vec<ClosureCheckJson>,
    pub all_pass: bool,
    pub any_capped: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

/// Serialize with a stable field order (struct order), suitable for
/// byte-for-byte comparison of deterministic runs.
pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serialization of certificate types cannot fail")
}

pub fn from_json<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::CheckFailed(msg()))
    }
}

fn now_timestamp(deterministic: bool) -> Option<u64> {
    if deterministic {
        None
    } else {
        Some(
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    }
}

fn poly_json(f: &MonicPoly) -> Vec<Vec<u64>> {
    f.lower_coeffs().iter().map(|c| c.coeffs().to_vec()).collect()
}

fn poly_from_json(field: &FiniteField, coeffs: &[Vec<u64>]) -> Result<MonicPoly> {
    if coeffs.is_empty() {
        return Err(Error::CheckFailed(
            "a stored polynomial must have at least one lower coefficient".into(),
        ));
    }
    let lower = coeffs
        .iter()
        .map(|c| field.element_from_coeffs(c))
        .collect::<Result<Vec<_>>>()?;
    Ok(MonicPoly::from_lower_coeffs(field, lower))
}

fn base_certificate(kind: &str, field: &FiniteField) -> Certificate {
    Certificate {
        schema_version: SCHEMA_VERSION,
        kind: kind.to_string(),
        field: FieldSpec {
            p: field.p(),
            r: field.r(),
            modulus: field.modulus().to_vec(),
        },
        q: JsonInt::from_u128(field.order()),
        n: None,
        degree: None,
        polynomial: None,
        polynomial_trace: None,
        min_polynomial: None,
        alpha: None,
        alpha_trace: None,
        witness_matrix: None,
        transvection: None,
        generators: None,
        closure: None,
        criterion: None,
        classification: None,
        checks: Vec::new(),
        timestamp: None,
    }
}

fn check_search_hypotheses(q: &PrimePower, degree: u32) -> Result<u32> {
    if q.value() < 5 {
        return Err(Error::BadHypothesis(format!(
            "the palindromic search is only guaranteed for field orders q >= 5, got q = {}",
            q.value()
        )));
    }
    if degree == 0 || !degree.is_multiple_of(2) {
        return Err(Error::BadHypothesis(format!(
            "the target degree must be even and positive, got {degree}"
        )));
    }
    let n = degree / 2;
    if (n as u64).is_multiple_of(q.p()) {
        return Err(Error::BadHypothesis(format!(
            "the characteristic {} must not divide the half-degree {n}",
            q.p()
        )));
    }
    Ok(n)
}

/// Find an irreducible palindromic polynomial of the given even degree
/// with nonzero trace over F_q and certify it. Requires q >= 5 and the
/// characteristic not dividing degree/2.
pub fn search_certificate(
    q: &PrimePower,
    degree: u32,
    caps: &Caps,
    deterministic: bool,
) -> Result<Certificate> {
    let n = check_search_hypotheses(q, degree)?;
    let field = FiniteField::new(q.p(), q.r())?;
    let hit = find_symplectic_irreducible(q, degree, caps.enumeration)?;
    let mut cert = base_certificate(CERT_SEARCH, &field);
    cert.n = Some(n);
    cert.degree = Some(degree);
    cert.polynomial = Some(poly_json(&hit.poly));
    cert.polynomial_trace = Some(poly_trace(&hit.poly).coeffs().to_vec());
    cert.min_polynomial = Some(poly_json(&hit.min_poly));
    cert.alpha = Some(hit.alpha.coeffs().to_vec());
    cert.alpha_trace = Some(hit.alpha_trace.coeffs().to_vec());
    cert.checks = SEARCH_CHECKS.iter().map(|s| s.to_string()).collect();
    cert.timestamp = now_timestamp(deterministic);
    Ok(cert)
}

/// Run the search over the prime field F_l, realize the found polynomial
/// as a matrix in Sp_2n(F_l), pair it with a transvection, and (when the
/// group order fits under the closure cap) verify that the pair generates
/// the full symplectic group. Requires l >= 5 prime and l not dividing n.
pub fn witness_certificate(
    l: u64,
    n: u32,
    caps: &Caps,
    deterministic: bool,
) -> Result<Certificate> {
    if n == 0 {
        return Err(Error::BadHypothesis(
            "the half-dimension n must be positive".into(),
        ));
    }
    if !admissible_prime(n as u64, l) {
        return Err(Error::BadHypothesis(format!(
            "witness construction needs a prime l >= 5 with l not dividing n; got l = {l}, n = {n}"
        )));
    }
    let q = PrimePower::from_parts(l, 1)?;
    check_search_hypotheses(&q, 2 * n)?;
    let field = FiniteField::new(l, 1)?;
    let hit = find_symplectic_irreducible(&q, 2 * n, caps.enumeration)?;
    let space = SympSpace::new(l, n as usize)?;
    let witness = symplectic_companion(&hit.poly)?;
    let mut e1 = vec![0u64; space.dim()];
    e1[0] = 1;
    let transvection = space.make_transvection(&e1, 1)?;
    let expected = sp_order(n as usize, l);

    let mut cert = base_certificate(CERT_WITNESS, &field);
    cert.n = Some(n);
    cert.degree = Some(2 * n);
    cert.polynomial = Some(poly_json(&hit.poly));
    cert.polynomial_trace = Some(poly_trace(&hit.poly).coeffs().to_vec());
    cert.min_polynomial = Some(poly_json(&hit.min_poly));
    cert.alpha = Some(hit.alpha.coeffs().to_vec());
    cert.alpha_trace = Some(hit.alpha_trace.coeffs().to_vec());
    cert.witness_matrix = Some(MatrixData {
        entries: witness.entries().to_vec(),
        multiplier: space.multiplier(&witness)?,
    });
    cert.transvection = Some(MatrixData {
        entries: transvection.entries().to_vec(),
        multiplier: space.multiplier(&transvection)?,
    });

    let mut checks: Vec<&str> = SEARCH_CHECKS.to_vec();
    checks.extend([
        CHECK_MATRIX_MULTIPLIER_ONE,
        CHECK_MATRIX_CHAR_POLY,
        CHECK_TRANSVECTION_VALID,
    ]);

    if BigInt::from(caps.closure) >= expected {
        let report = classify_subgroup(&space, &[witness, transvection], caps.closure)?;
        ensure(
            report.criterion.has_transvection && report.criterion.has_irreducible_nonzero_trace,
            || "the witness pair must exhibit both generation-criterion properties".into(),
        )?;
        ensure(
            matches!(report.classification, Classification::ContainsSp),
            || "the witness closure must contain the full symplectic group".into(),
        )?;
        ensure(BigInt::from(report.multiplier_one) == expected, || {
            format!(
                "multiplier-one count {} does not equal the symplectic group order {expected}",
                report.multiplier_one
            )
        })?;
        cert.closure = Some(ClosureStats {
            verified: true,
            total: Some(JsonInt::from(report.order)),
            multiplier_one: Some(JsonInt::from(report.multiplier_one)),
            expected_sp_order: JsonInt::from(&expected),
        });
        cert.criterion = Some(report.criterion.into());
        cert.classification = Some(classification_json(
            &report.classification,
            report.multiplier_one,
        ));
        checks.extend([CHECK_CLOSURE_COUNT, CHECK_CRITERION, CHECK_CLASSIFICATION]);
    } else {
        cert.closure = Some(ClosureStats {
            verified: false,
            total: None,
            multiplier_one: None,
            expected_sp_order: JsonInt::from(&expected),
        });
    }
    cert.checks = checks.into_iter().map(|s| s.to_string()).collect();
    cert.timestamp = now_timestamp(deterministic);
    Ok(cert)
}

/// Classify the subgroup generated by the given matrices and certify the
/// outcome together with an independently re-checkable witness.
pub fn classify_certificate(
    l: u64,
    n: usize,
    gens: &[Matrix],
    caps: &Caps,
    deterministic: bool,
) -> Result<Certificate> {
    let space = SympSpace::new(l, n)?;
    let report = classify_subgroup(&space, gens, caps.closure)?;
    let classification = classification_json(&report.classification, report.multiplier_one);
    validate_classification_witness(&space, gens, &classification)?;

    let field = FiniteField::new(l, 1)?;
    let mut gens_json = Vec::with_capacity(gens.len());
    for g in gens {
        gens_json.push(MatrixData {
            entries: g.entries().to_vec(),
            multiplier: space.multiplier(g)?,
        });
    }
    let mut cert = base_certificate(CERT_CLASSIFY, &field);
    cert.n = Some(n as u32);
    cert.generators = Some(gens_json);
    cert.closure = Some(ClosureStats {
        verified: true,
        total: Some(JsonInt::from(report.order)),
        multiplier_one: Some(JsonInt::from(report.multiplier_one)),
        expected_sp_order: JsonInt::from(&report.expected_sp_order),
    });
    cert.criterion = Some(report.criterion.into());
    cert.classification = Some(classification);
    cert.checks = CLASSIFY_CHECKS.iter().map(|s| s.to_string()).collect();
    cert.timestamp = now_timestamp(deterministic);
    Ok(cert)
}

/// Run every closed-form count against exhaustive enumeration for all
/// prime powers q <= q_max and degrees n <= n_max, then recompute the
/// fixed full-group closure cells that fit under the closure cap.
pub fn verify_all_report(
    q_max: u64,
    n_max: u32,
    caps: &Caps,
    deterministic: bool,
) -> Result<VerifyAllReport> {
    let mut reports = crate::poly::verify_counts(q_max, n_max, caps.enumeration)?;
    reports.extend(crate::poly::verify_bounds(q_max, n_max, caps.enumeration)?);
    let count_reports: Vec<CountReportJson> = reports.iter().map(CountReportJson::from).collect();
    let mut closure_checks = Vec::new();
    for (n, l) in FULL_CLOSURE_CELLS {
        closure_checks.push(full_closure_check(n, l, caps)?);
    }
    let all_pass =
        count_reports.iter().all(|r| r.agree) && closure_checks.iter().all(|c| c.pass);
    let any_capped =
        count_reports.iter().any(|r| r.capped) || closure_checks.iter().any(|c| c.capped);
    Ok(VerifyAllReport {
        schema_version: SCHEMA_VERSION,
        kind: KIND_VERIFY_ALL.to_string(),
        q_max,
        n_max,
        count_reports,
        closure_checks,
        all_pass,
        any_capped,
        timestamp: now_timestamp(deterministic),
    })
}

fn full_closure_check(n: usize, l: u64, caps: &Caps) -> Result<ClosureCheckJson> {
    let expected = sp_order(n, l);
    if BigInt::from(caps.closure) < expected {
        return Ok(ClosureCheckJson {
            n: n as u32,
            l,
            expected_sp_order: JsonInt::from(&expected),
            multiplier_one: None,
            pass: true,
            capped: true,
        });
    }
    let q = PrimePower::from_parts(l, 1)?;
    let hit = find_symplectic_irreducible(&q, 2 * n as u32, caps.enumeration)?;
    let space = SympSpace::new(l, n)?;
    let witness = symplectic_companion(&hit.poly)?;
    let mut e1 = vec![0u64; space.dim()];
    e1[0] = 1;
    let transvection = space.make_transvection(&e1, 1)?;
    let report = classify_subgroup(&space, &[witness, transvection], caps.closure)?;
    let pass = report.criterion.has_transvection
        && report.criterion.has_irreducible_nonzero_trace
        && matches!(report.classification, Classification::ContainsSp)
        && BigInt::from(report.multiplier_one) == expected;
    Ok(ClosureCheckJson {
        n: n as u32,
        l,
        expected_sp_order: JsonInt::from(&expected),
        multiplier_one: Some(JsonInt::from(report.multiplier_one)),
        pass,
        capped: false,
    })
}

/// Result of one re-run check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    /// The recomputation would exceed the active caps.
    Capped,
    Fail(String),
}

/// All re-run checks of a certificate or report, in order.
#[derive(Clone, Debug)]
pub struct RecheckReport {
    pub outcomes: Vec<(String, CheckOutcome)>,
}

impl RecheckReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|(_, o)| *o == CheckOutcome::Pass)
    }

    pub fn any_failed(&self) -> bool {
        self.outcomes
            .iter()
            .any(|(_, o)| matches!(o, CheckOutcome::Fail(_)))
    }

    pub fn any_capped(&self) -> bool {
        self.outcomes.iter().any(|(_, o)| *o == CheckOutcome::Capped)
    }
}

impl fmt::Display for RecheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, outcome) in &self.outcomes {
            match outcome {
                CheckOutcome::Pass => writeln!(f, "{name}: pass")?,
                CheckOutcome::Capped => writeln!(f, "{name}: capped")?,
                CheckOutcome::Fail(reason) => writeln!(f, "{name}: FAIL ({reason})")?,
            }
        }
        Ok(())
    }
}

/// Re-run every check named in the certificate against the certificate's
/// own data.
pub fn recheck_certificate(cert: &Certificate, caps: &Caps) -> RecheckReport {
    let mut outcomes = Vec::new();
    if cert.schema_version != SCHEMA_VERSION {
        outcomes.push((
            "schema-version".to_string(),
            CheckOutcome::Fail(format!(
                "unsupported schema version {} (expected {})",
                cert.schema_version, SCHEMA_VERSION
            )),
        ));
        return RecheckReport { outcomes };
    }
    if cert.checks.is_empty() {
        outcomes.push((
            "checks".to_string(),
            CheckOutcome::Fail("certificate names no checks".into()),
        ));
    }
    for name in &cert.checks {
        let outcome = match run_check(cert, name, caps) {
            Ok(()) => CheckOutcome::Pass,
            Err(Error::CapExceeded { .. }) => CheckOutcome::Capped,
            Err(e) => CheckOutcome::Fail(e.to_string()),
        };
        outcomes.push((name.clone(), outcome));
    }
    RecheckReport { outcomes }
}

fn run_check(cert: &Certificate, name: &str, caps: &Caps) -> Result<()> {
    match name {
        CHECK_CANONICAL_MODULUS => check_canonical_modulus(cert),
        CHECK_POLY_SYMPLECTIC => {
            let f = cert_poly(cert)?;
            ensure(is_symplectic(&f), || {
                "the stored polynomial is not palindromic with constant term 1".into()
            })
        }
        CHECK_POLY_IRREDUCIBLE => {
            let f = cert_poly(cert)?;
            ensure(is_irreducible(&f), || {
                "the stored polynomial is reducible".into()
            })
        }
        CHECK_POLY_NONZERO_TRACE => check_poly_nonzero_trace(cert),
        CHECK_LIFT_CONSISTENCY => check_lift_consistency(cert),
        CHECK_MATRIX_MULTIPLIER_ONE => check_matrix_multiplier_one(cert),
        CHECK_MATRIX_CHAR_POLY => check_matrix_char_poly(cert),
        CHECK_TRANSVECTION_VALID => check_transvection_valid(cert),
        CHECK_GENERATORS_MULTIPLIERS => check_generators_multipliers(cert),
        CHECK_CLOSURE_COUNT => check_closure_count(cert, caps),
        CHECK_CRITERION => check_criterion(cert, caps),
        CHECK_CLASSIFICATION => check_classification(cert, caps),
        CHECK_CLASSIFICATION_WITNESS => check_classification_witness(cert),
        other => Err(Error::CheckFailed(format!("unknown check name '{other}'"))),
    }
}

fn require<'a, T>(v: &'a Option<T>, what: &str) -> Result<&'a T> {
    v.as_ref()
        .ok_or_else(|| Error::CheckFailed(format!("certificate lacks {what}")))
}

fn cert_base_field(cert: &Certificate) -> Result<FiniteField> {
    FiniteField::with_modulus(cert.field.p, cert.field.r, cert.field.modulus.clone())
}

fn cert_poly(cert: &Certificate) -> Result<MonicPoly> {
    let field = cert_base_field(cert)?;
    poly_from_json(&field, require(&cert.polynomial, "a polynomial")?)
}

fn check_canonical_modulus(cert: &Certificate) -> Result<()> {
    let canonical = FiniteField::new(cert.field.p, cert.field.r)?;
    ensure(canonical.modulus() == cert.field.modulus.as_slice(), || {
        format!(
            "stored modulus {:?} is not the canonical modulus {:?} for GF({}^{})",
            cert.field.modulus,
            canonical.modulus(),
            cert.field.p,
            cert.field.r
        )
    })?;
    ensure(cert.q.to_bigint()? == BigInt::from(canonical.order()), || {
        "stored field order does not match p^r".into()
    })
}

fn check_poly_nonzero_trace(cert: &Certificate) -> Result<()> {
    let f = cert_poly(cert)?;
    let tr = poly_trace(&f);
    ensure(!tr.is_zero(), || "the polynomial trace is zero".into())?;
    let stored = require(&cert.polynomial_trace, "the polynomial trace")?;
    ensure(tr.coeffs() == stored.as_slice(), || {
        "stored polynomial trace does not match the top lower coefficient".into()
    })
}

fn check_lift_consistency(cert: &Certificate) -> Result<()> {
    let field = cert_base_field(cert)?;
    let f = cert_poly(cert)?;
    let d = f.degree();
    ensure(d > 0 && d % 2 == 0, || {
        "the certified polynomial must have positive even degree".into()
    })?;
    let n = (d / 2) as u32;
    ensure(cert.degree == Some(d as u32) && cert.n == Some(n), || {
        "stored degree fields do not match the polynomial".into()
    })?;
    let min_poly = poly_from_json(&field, require(&cert.min_polynomial, "a minimal polynomial")?)?;
    ensure(min_poly.degree() == n as usize, || {
        "the minimal polynomial must have degree n".into()
    })?;
    let (lifted, lift_irreducible) = symplectic_lift(&min_poly)?;
    ensure(lift_irreducible, || {
        "the lift of the stored minimal polynomial is reducible".into()
    })?;
    ensure(lifted == f, || {
        "the stored polynomial is not the lift of the stored minimal polynomial".into()
    })?;
    let big = FiniteField::new(cert.field.p, cert.field.r * n)?;
    let q_small = u64::try_from(field.order())
        .map_err(|_| Error::CheckFailed("base field order exceeds u64".into()))?;
    let tower = Tower::new(big.clone(), q_small)?;
    let alpha = big.element_from_coeffs(require(&cert.alpha, "the element alpha")?)?;
    ensure(tower.minimal_polynomial(&alpha)? == min_poly, || {
        "alpha does not have the stored minimal polynomial".into()
    })?;
    let tr = tower.relative_trace(&alpha)?;
    ensure(!tr.is_zero(), || "the trace of alpha is zero".into())?;
    let stored_tr = require(&cert.alpha_trace, "the trace of alpha")?;
    ensure(tr.coeffs() == stored_tr.as_slice(), || {
        "stored alpha trace does not match the recomputed relative trace".into()
    })
}

fn cert_space(cert: &Certificate) -> Result<SympSpace> {
    ensure(cert.field.r == 1, || {
        "matrix certificates are defined over prime fields only".into()
    })?;
    let n = *require(&cert.n, "the half-dimension n")? as usize;
    SympSpace::new(cert.field.p, n)
}

fn matrix_from_data(space: &SympSpace, data: &MatrixData, what: &str) -> Result<Matrix> {
    let d = space.dim();
    ensure(data.entries.len() == d * d, || {
        format!("{what} must have exactly {} entries", d * d)
    })?;
    ensure(data.entries.iter().all(|&x| x < space.l()), || {
        format!("{what} has entries outside the field range")
    })?;
    let rows: Vec<Vec<u64>> = data.entries.chunks(d).map(|c| c.to_vec()).collect();
    Matrix::from_rows(space.l(), &rows)
}

fn check_matrix_multiplier_one(cert: &Certificate) -> Result<()> {
    let space = cert_space(cert)?;
    let data = require(&cert.witness_matrix, "a witness matrix")?;
    let m = matrix_from_data(&space, data, "the witness matrix")?;
    ensure(data.multiplier == 1, || {
        "the witness matrix must be stored with multiplier 1".into()
    })?;
    ensure(space.multiplier(&m)? == 1, || {
        "the witness matrix does not preserve the form with multiplier 1".into()
    })
}

fn check_matrix_char_poly(cert: &Certificate) -> Result<()> {
    let space = cert_space(cert)?;
    let data = require(&cert.witness_matrix, "a witness matrix")?;
    let m = matrix_from_data(&space, data, "the witness matrix")?;
    let f = cert_poly(cert)?;
    let mut expected: Vec<u64> = f
        .lower_coeffs()
        .iter()
        .map(|c| c.coeffs().first().copied().unwrap_or(0))
        .collect();
    expected.push(1);
    ensure(m.char_poly() == expected, || {
        "the witness matrix characteristic polynomial does not match the stored polynomial".into()
    })
}

fn check_transvection_valid(cert: &Certificate) -> Result<()> {
    let space = cert_space(cert)?;
    let data = require(&cert.transvection, "a transvection")?;
    let t = matrix_from_data(&space, data, "the transvection")?;
    ensure(data.multiplier == 1, || {
        "a transvection must be stored with multiplier 1".into()
    })?;
    ensure(space.is_transvection(&t), || {
        "the stored matrix is not a symplectic transvection".into()
    })
}

fn check_generators_multipliers(cert: &Certificate) -> Result<()> {
    let space = cert_space(cert)?;
    let gens = require(&cert.generators, "generators")?;
    ensure(!gens.is_empty(), || "the generator list is empty".into())?;
    for (i, data) in gens.iter().enumerate() {
        let g = matrix_from_data(&space, data, &format!("generator {i}"))?;
        ensure(space.multiplier(&g)? == data.multiplier, || {
            format!("generator {i} does not have the stored multiplier")
        })?;
    }
    Ok(())
}

/// The matrices whose closure the certificate describes: explicit
/// generators when present, otherwise the witness pair.
fn closure_generators(cert: &Certificate, space: &SympSpace) -> Result<Vec<Matrix>> {
    if let Some(gens) = &cert.generators {
        gens.iter()
            .enumerate()
            .map(|(i, d)| matrix_from_data(space, d, &format!("generator {i}")))
            .collect()
    } else {
        let m = matrix_from_data(
            space,
            require(&cert.witness_matrix, "a witness matrix")?,
            "the witness matrix",
        )?;
        let t = matrix_from_data(
            space,
            require(&cert.transvection, "a transvection")?,
            "the transvection",
        )?;
        Ok(vec![m, t])
    }
}

fn check_closure_count(cert: &Certificate, caps: &Caps) -> Result<()> {
    let space = cert_space(cert)?;
    let stats = require(&cert.closure, "closure statistics")?;
    ensure(stats.verified, || {
        "the closure is marked unverified; there is nothing to recheck".into()
    })?;
    let expected = sp_order(space.n(), space.l());
    ensure(stats.expected_sp_order.to_bigint()? == expected, || {
        "stored expected symplectic group order is wrong".into()
    })?;
    let gens = closure_generators(cert, &space)?;
    let closure = group_closure(&space, &gens, caps.closure)?;
    let total = require(&stats.total, "the closure total")?;
    ensure(total.to_bigint()? == BigInt::from(closure.order()), || {
        format!(
            "stored closure order {total} does not match the recomputed order {}",
            closure.order()
        )
    })?;
    let mult_one = require(&stats.multiplier_one, "the multiplier-one count")?;
    let recomputed = closure.multiplier_one_count();
    ensure(mult_one.to_bigint()? == BigInt::from(recomputed), || {
        format!(
            "stored multiplier-one count {mult_one} does not match the recomputed count {recomputed}"
        )
    })
}

fn check_criterion(cert: &Certificate, caps: &Caps) -> Result<()> {
    let space = cert_space(cert)?;
    let stored = require(&cert.criterion, "criterion flags")?;
    let gens = closure_generators(cert, &space)?;
    let closure = group_closure(&space, &gens, caps.closure)?;
    let crit = criterion_check(&space, &closure.elements);
    ensure(
        crit.has_transvection == stored.has_transvection
            && crit.has_irreducible_nonzero_trace == stored.has_irreducible_nonzero_trace,
        || "stored criterion flags do not match the recomputed closure scan".into(),
    )
}

fn check_classification(cert: &Certificate, caps: &Caps) -> Result<()> {
    let space = cert_space(cert)?;
    let stored = require(&cert.classification, "a classification")?;
    let gens = closure_generators(cert, &space)?;
    let report = classify_subgroup(&space, &gens, caps.closure)?;
    let recomputed = classification_json(&report.classification, report.multiplier_one);
    ensure(&recomputed == stored, || {
        "stored classification does not match the recomputed one".into()
    })?;
    if cert.kind == CERT_WITNESS {
        ensure(
            matches!(report.classification, Classification::ContainsSp),
            || "a witness certificate must classify as containing the symplectic group".into(),
        )?;
    }
    Ok(())
}

fn check_classification_witness(cert: &Certificate) -> Result<()> {
    let space = cert_space(cert)?;
    let stored = require(&cert.classification, "a classification")?;
    let gens = closure_generators(cert, &space)?;
    validate_classification_witness(&space, &gens, stored)
}

/// Validate the witness data inside a classification directly, without
/// re-running the classification search: the subspace must be invariant
/// and nonsingular, the blocks must decompose the space and be permuted
/// transitively, and a claimed full symplectic group must have the right
/// order.
fn validate_classification_witness(
    space: &SympSpace,
    gens: &[Matrix],
    classification: &ClassificationJson,
) -> Result<()> {
    let l = space.l();
    let d = space.dim();
    let valid_basis = |basis: &[Vec<u64>]| -> bool {
        basis
            .iter()
            .all(|v| v.len() == d && v.iter().all(|&x| x < l))
    };
    match classification {
        ClassificationJson::Reducible { subspace } => {
            ensure(
                !subspace.is_empty() && subspace.len() % 2 == 0 && subspace.len() < d,
                || "a reducible witness must be a nonzero proper even-dimensional subspace".into(),
            )?;
            ensure(valid_basis(subspace), || {
                "the subspace basis has malformed vectors".into()
            })?;
            ensure(canonical_span(l, subspace) == *subspace, || {
                "the subspace basis is not in reduced echelon form".into()
            })?;
            ensure(is_nonsingular_subspace(space, subspace), || {
                "the form is degenerate on the witness subspace".into()
            })?;
            ensure(is_invariant(l, subspace, gens), || {
                "the witness subspace is not invariant under the generators".into()
            })
        }
        ClassificationJson::Imprimitive { blocks } => {
            ensure(blocks.len() >= 2, || {
                "an imprimitive witness needs at least two blocks".into()
            })?;
            let k = blocks[0].len();
            ensure(
                k >= 2 && k % 2 == 0 && blocks.iter().all(|b| b.len() == k),
                || "all blocks must share one even positive dimension".into(),
            )?;
            ensure(blocks.len() * k == d, || {
                "the blocks do not add up to the full dimension".into()
            })?;
            for b in blocks {
                ensure(valid_basis(b), || "a block has malformed vectors".into())?;
                ensure(canonical_span(l, b) == *b, || {
                    "a block basis is not in reduced echelon form".into()
                })?;
                ensure(is_nonsingular_subspace(space, b), || {
                    "the form is degenerate on one of the blocks".into()
                })?;
            }
            let mut stacked: Vec<Vec<u64>> = blocks.iter().flatten().cloned().collect();
            ensure(rref(&mut stacked, l).len() == d, || {
                "the blocks are not linearly independent".into()
            })?;
            // Every generator must permute the set of blocks ...
            for g in gens {
                for b in blocks {
                    let image: Vec<Vec<u64>> = b.iter().map(|v| g.apply(v)).collect();
                    let image = canonical_span(l, &image);
                    ensure(blocks.contains(&image), || {
                        "a generator maps a block outside the block set".into()
                    })?;
                }
            }
            // ... and transitively so.
            let mut reached = vec![false; blocks.len()];
            reached[0] = true;
            let mut stack = vec![0usize];
            while let Some(i) = stack.pop() {
                for g in gens {
                    let image: Vec<Vec<u64>> =
                        blocks[i].iter().map(|v| g.apply(v)).collect();
                    let image = canonical_span(l, &image);
                    if let Some(j) = blocks.iter().position(|b| *b == image) {
                        if !reached[j] {
                            reached[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
            ensure(reached.iter().all(|&x| x), || {
                "the generators do not permute the blocks transitively".into()
            })
        }
        ClassificationJson::ContainsSp { order } => {
            ensure(order.to_bigint()? == sp_order(space.n(), l), || {
                "the stored order does not equal the symplectic group order".into()
            })
        }
    }
}

/// Re-run one count report cell: recompute the closed form (and the
/// enumeration when the report carried one) and compare everything.
pub fn recheck_count_report(rep: &CountReportJson, caps: &Caps) -> CheckOutcome {
    let run = || -> Result<()> {
        let kind = count_kind_from_str(&rep.kind)?;
        let q = PrimePower::from_parts(rep.p, rep.r)?;
        let fresh = count_report_cell(&q, rep.n, kind, rep.enumeration.is_some(), caps.enumeration)?;
        let stored_formula = count_value_from_json(&rep.formula)?;
        ensure(stored_formula == fresh.formula, || {
            "stored closed-form value does not match the recomputed one".into()
        })?;
        if let Some(stored) = &rep.enumeration {
            let recomputed = fresh
                .enumeration
                .as_ref()
                .expect("requested enumeration is present");
            ensure(stored.to_bigint()? == *recomputed, || {
                "stored enumeration count does not match the recomputed one".into()
            })?;
        }
        ensure(fresh.agree == rep.agree, || {
            "stored agreement flag does not match the recomputed comparison".into()
        })
    };
    match run() {
        Ok(()) => CheckOutcome::Pass,
        Err(Error::CapExceeded { .. }) => CheckOutcome::Capped,
        Err(e) => CheckOutcome::Fail(e.to_string()),
    }
}

/// Re-run every cell of a verification sweep report.
pub fn recheck_verify_all(rep: &VerifyAllReport, caps: &Caps) -> RecheckReport {
    let mut outcomes = Vec::new();
    if rep.schema_version != SCHEMA_VERSION {
        outcomes.push((
            "schema-version".to_string(),
            CheckOutcome::Fail(format!(
                "unsupported schema version {} (expected {})",
                rep.schema_version, SCHEMA_VERSION
            )),
        ));
        return RecheckReport { outcomes };
    }
    for r in &rep.count_reports {
        let q = (r.p as u128).pow(r.r);
        let name = format!("{} q={} n={}", r.kind, q, r.n);
        outcomes.push((name, recheck_count_report(r, caps)));
    }
    for c in &rep.closure_checks {
        let name = format!("closure n={} l={}", c.n, c.l);
        let outcome = (|| -> Result<()> {
            ensure(c.expected_sp_order.to_bigint()? == sp_order(c.n as usize, c.l), || {
                "stored expected symplectic group order is wrong".into()
            })?;
            let fresh = full_closure_check(c.n as usize, c.l, caps)?;
            if fresh.capped {
                return Err(Error::CapExceeded { cap: caps.closure });
            }
            ensure(fresh.pass, || "the closure cell fails when recomputed".into())?;
            ensure(c.pass, || {
                "the cell passes when recomputed but the report stored a failure".into()
            })?;
            if let (Some(stored), Some(recomputed)) = (&c.multiplier_one, &fresh.multiplier_one) {
                ensure(stored.to_bigint()? == recomputed.to_bigint()?, || {
                    "stored multiplier-one count does not match the recomputed one".into()
                })?;
            }
            Ok(())
        })();
        outcomes.push((
            name,
            match outcome {
                Ok(()) => CheckOutcome::Pass,
                Err(Error::CapExceeded { .. }) => CheckOutcome::Capped,
                Err(e) => CheckOutcome::Fail(e.to_string()),
            },
        ));
    }
    let flags_consistent = rep.all_pass
        == (rep.count_reports.iter().all(|r| r.agree)
            && rep.closure_checks.iter().all(|c| c.pass))
        && rep.any_capped
            == (rep.count_reports.iter().any(|r| r.capped)
                || rep.closure_checks.iter().any(|c| c.capped));
    outcomes.push((
        "summary-flags".to_string(),
        if flags_consistent {
            CheckOutcome::Pass
        } else {
            CheckOutcome::Fail("the stored summary flags contradict the stored cells".into())
        },
    ));
    RecheckReport { outcomes }
}
