//! Exact counts of irreducible polynomials and related quantities, with a
//! report type pairing each closed-form value against an exhaustive
//! enumeration of the same quantity.
//!
//! All closed forms are evaluated in exact big-integer / big-rational
//! arithmetic; divisions assert exactness.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{fp::PrimePower, FiniteField};
use crate::poly::irreducible::{enumerate_irreducible, TraceFilter};
use crate::poly::lift::{valid_alpha_count, ReducibleAlphaTable};

/// Mobius function; 0 when n has a squared prime factor.
pub fn mobius(n: u64) -> i64 {
    assert!(n >= 1);
    let mut m = n;
    let mut k = 0u32;
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return 0;
            }
            k += 1;
        }
        d += 1;
    }
    if m > 1 {
        k += 1;
    }
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Sum over divisors d of n of mobius(d) * q^(n/d).
fn necklace_sum(q: u128, n: u32) -> BigInt {
    let qb = BigInt::from(q);
    let mut acc = BigInt::zero();
    for d in divisors(n as u64) {
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let term = qb.pow((n as u64 / d) as u32);
        if mu > 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn exact_div(a: BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_rem(&a, b);
    assert!(r.is_zero(), "division {a} / {b} is not exact");
    q
}

/// Number of monic irreducible polynomials of degree n over F_q:
/// (1/n) * sum over d | n of mobius(d) q^(n/d).
pub fn count_irreducible(q: &PrimePower, n: u32) -> BigInt {
    assert!(n >= 1);
    exact_div(necklace_sum(q.value(), n), &BigInt::from(n))
}

/// Number of monic irreducible polynomials of degree n over F_q whose
/// x^(n-1) coefficient is nonzero:
/// (q-1)/(q n) * sum over d | n of mobius(d) q^(n/d).
///
/// Valid only when the field characteristic does not divide n (otherwise
/// the trace-zero polynomials are not a 1/q fraction and the closed form
/// is wrong); refuses with `BadHypothesis` in that case.
pub fn count_irreducible_nonzero_trace(q: &PrimePower, n: u32) -> Result<BigInt> {
    assert!(n >= 1);
    if (n as u64).is_multiple_of(q.p()) {
        return Err(Error::BadHypothesis(format!(
            "nonzero-trace count requires the characteristic {} not to divide n = {n}",
            q.p()
        )));
    }
    let s = necklace_sum(q.value(), n);
    let num = (BigInt::from(q.value()) - 1) * s;
    Ok(exact_div(num, &(BigInt::from(q.value()) * n)))
}

/// Number of alpha in F_{q^n} for which x^2 - alpha x + 1 is reducible:
/// q^n / 2 in characteristic 2, else (q^n + 1) / 2.
pub fn count_reducible_alpha(q: &PrimePower, n: u32) -> BigInt {
    assert!(n >= 1);
    let big = BigInt::from(q.value()).pow(n);
    if q.p() == 2 {
        exact_div(big, &BigInt::from(2))
    } else {
        exact_div(big + 1, &BigInt::from(2))
    }
}

/// Lower bound for the number of alpha in F_{q^n} of degree exactly n over
/// F_q with nonzero relative trace and x^2 - alpha x + 1 irreducible:
///
///   (q-1)/q * sum over d | n of mobius(d) q^(n/d)  -  (q^n + 1)/2
///
/// as an exact rational (it is a half-integer when q is even). Requires the
/// characteristic not to divide n.
pub fn lower_bound_m(q: &PrimePower, n: u32) -> Result<BigRational> {
    assert!(n >= 1);
    if (n as u64).is_multiple_of(q.p()) {
        return Err(Error::BadHypothesis(format!(
            "lower bound requires the characteristic {} not to divide n = {n}",
            q.p()
        )));
    }
    let qb = BigInt::from(q.value());
    let s = necklace_sum(q.value(), n);
    let main = BigRational::new((&qb - 1) * s, qb.clone());
    let half = BigRational::new(qb.pow(n) + 1, BigInt::from(2));
    Ok(main - half)
}

/// Which quantity a `CountReport` is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountKind {
    /// Monic irreducibles of degree n over F_q.
    Irreducible,
    /// Monic irreducibles of degree n over F_q with nonzero x^(n-1)
    /// coefficient.
    NonzeroTrace,
    /// alpha in F_{q^n} with x^2 - alpha x + 1 reducible.
    ReducibleAlpha,
    /// Lower bound for the valid-alpha count (degree n, nonzero trace,
    /// irreducible quadratic); the enumeration is the exact valid-alpha
    /// count and agreement means bound > 0 and count >= bound.
    BoundM,
}

impl CountKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CountKind::Irreducible => "irreducible",
            CountKind::NonzeroTrace => "nonzero_trace",
            CountKind::ReducibleAlpha => "reducible_alpha",
            CountKind::BoundM => "bound_m",
        }
    }
}

/// An exact value: integer for the counts, rational for the lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CountValue {
    Int(BigInt),
    Ratio(BigRational),
}

impl fmt::Display for CountValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountValue::Int(v) => write!(f, "{v}"),
            CountValue::Ratio(v) => write!(f, "{v}"),
        }
    }
}

/// One closed-form value checked against one exhaustive enumeration.
///
/// `enumeration` is None when the sweep would exceed the cap; such reports
/// carry `capped = true` and an `agree` flag covering only what remained
/// checkable (vacuously true for pure counts, bound positivity for
/// `BoundM`).
#[derive(Clone, Debug)]
pub struct CountReport {
    pub kind: CountKind,
    pub p: u64,
    pub r: u32,
    pub n: u32,
    pub formula: CountValue,
    pub enumeration: Option<BigInt>,
    pub agree: bool,
    pub capped: bool,
}

impl CountReport {
    pub fn q(&self) -> u128 {
        (self.p as u128).pow(self.r)
    }
}

impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} q={} n={}: formula={}",
            self.kind.as_str(),
            self.q(),
            self.n,
            self.formula
        )?;
        match (&self.enumeration, self.capped) {
            (Some(e), _) => write!(f, " enumeration={e}")?,
            (None, true) => write!(f, " enumeration=capped")?,
            (None, false) => {}
        }
        write!(f, " {}", if self.agree { "agree" } else { "MISMATCH" })
    }
}

fn prime_powers_up_to(q_max: u64) -> Vec<PrimePower> {
    (2..=q_max).filter_map(|q| PrimePower::new(q).ok()).collect()
}

/// Check every closed-form count against exhaustive enumeration on all
/// prime powers q <= q_max and degrees n <= n_max. Sweeps larger than cap
/// candidates are skipped and reported as capped.
pub fn verify_counts(q_max: u64, n_max: u32, cap: u64) -> Result<Vec<CountReport>> {
    let mut out = Vec::new();
    for q in prime_powers_up_to(q_max) {
        let field = FiniteField::new(q.p(), q.r())?;
        for n in 1..=n_max {
            let within = q.value().checked_pow(n).is_some_and(|t| t <= cap as u128);

            let formula = count_irreducible(&q, n);
            let enumeration = if within {
                let list = enumerate_irreducible(&field, n, TraceFilter::All, cap)?;
                Some(BigInt::from(list.len()))
            } else {
                None
            };
            let agree = enumeration.as_ref().is_none_or(|e| *e == formula);
            out.push(CountReport {
                kind: CountKind::Irreducible,
                p: q.p(),
                r: q.r(),
                n,
                formula: CountValue::Int(formula),
                enumeration,
                agree,
                capped: !within,
            });

            if !(n as u64).is_multiple_of(q.p()) {
                let formula = count_irreducible_nonzero_trace(&q, n)?;
                let enumeration = if within {
                    let list = enumerate_irreducible(&field, n, TraceFilter::NonzeroTrace, cap)?;
                    Some(BigInt::from(list.len()))
                } else {
                    None
                };
                let agree = enumeration.as_ref().is_none_or(|e| *e == formula);
                out.push(CountReport {
                    kind: CountKind::NonzeroTrace,
                    p: q.p(),
                    r: q.r(),
                    n,
                    formula: CountValue::Int(formula),
                    enumeration,
                    agree,
                    capped: !within,
                });
            }

            let formula = count_reducible_alpha(&q, n);
            let enumeration = if within {
                let big = FiniteField::new(q.p(), q.r() * n)?;
                let table = ReducibleAlphaTable::build(&big, cap)?;
                Some(BigInt::from(table.count_reducible()))
            } else {
                None
            };
            let agree = enumeration.as_ref().is_none_or(|e| *e == formula);
            out.push(CountReport {
                kind: CountKind::ReducibleAlpha,
                p: q.p(),
                r: q.r(),
                n,
                formula: CountValue::Int(formula),
                enumeration,
                agree,
                capped: !within,
            });
        }
    }
    Ok(out)
}

/// Check the valid-alpha lower bound against the exact scan count on all
/// prime powers 4 <= q <= q_max and degrees n <= n_max with the
/// characteristic not dividing n. Agreement means the bound is positive
/// and (when the scan ran) the exact count is at least the bound.
pub fn verify_bounds(q_max: u64, n_max: u32, cap: u64) -> Result<Vec<CountReport>> {
    let mut out = Vec::new();
    for q in prime_powers_up_to(q_max) {
        if q.value() < 4 {
            continue;
        }
        for n in 1..=n_max {
            if (n as u64).is_multiple_of(q.p()) {
                continue;
            }
            let bound = lower_bound_m(&q, n)?;
            let positive = bound.is_positive();
            let within = q.value().checked_pow(n).is_some_and(|t| t <= cap as u128);
            let (enumeration, agree) = if within {
                let count = valid_alpha_count(&q, n, cap)?;
                let count_ok = BigRational::from(BigInt::from(count)) >= bound;
                (Some(BigInt::from(count)), positive && count_ok)
            } else {
                (None, positive)
            };
            out.push(CountReport {
                kind: CountKind::BoundM,
                p: q.p(),
                r: q.r(),
                n,
                formula: CountValue::Ratio(bound),
                enumeration,
                agree,
                capped: !within,
            });
        }
    }
    Ok(out)
}

/// Evaluate one closed-form count for a single (q, n) cell. With `verify`
/// the matching exhaustive enumeration runs as well (erroring with
/// `CapExceeded` when the sweep would touch more than `cap` candidates)
/// and the report records whether formula and enumeration agree.
pub fn count_report_cell(
    q: &PrimePower,
    n: u32,
    kind: CountKind,
    verify: bool,
    cap: u64,
) -> Result<CountReport> {
    if n == 0 {
        return Err(Error::BadHypothesis("the degree parameter n must be positive".into()));
    }
    let (formula, enumeration, agree) = match kind {
        CountKind::Irreducible => {
            let formula = count_irreducible(q, n);
            let enumeration = if verify {
                let field = FiniteField::new(q.p(), q.r())?;
                let list = enumerate_irreducible(&field, n, TraceFilter::All, cap)?;
                Some(BigInt::from(list.len()))
            } else {
                None
            };
            let agree = enumeration.as_ref().is_none_or(|e| *e == formula);
            (CountValue::Int(formula), enumeration, agree)
        }
        CountKind::NonzeroTrace => {
            let formula = count_irreducible_nonzero_trace(q, n)?;
            let enumeration = if verify {
                let field = FiniteField::new(q.p(), q.r())?;
                let list = enumerate_irreducible(&field, n, TraceFilter::NonzeroTrace, cap)?;
                Some(BigInt::from(list.len()))
            } else {
                None
            };
            let agree = enumeration.as_ref().is_none_or(|e| *e == formula);
            (CountValue::Int(formula), enumeration, agree)
        }
        CountKind::ReducibleAlpha => {
            let formula = count_reducible_alpha(q, n);
            let enumeration = if verify {
                let big = FiniteField::new(q.p(), q.r() * n)?;
                let table = ReducibleAlphaTable::build(&big, cap)?;
                Some(BigInt::from(table.count_reducible()))
            } else {
                None
            };
            let agree = enumeration.as_ref().is_none_or(|e| *e == formula);
            (CountValue::Int(formula), enumeration, agree)
        }
        CountKind::BoundM => {
            let bound = lower_bound_m(q, n)?;
            let positive = bound.is_positive();
            let (enumeration, agree) = if verify {
                let count = valid_alpha_count(q, n, cap)?;
                let count_ok = BigRational::from(BigInt::from(count)) >= bound;
                (Some(BigInt::from(count)), positive && count_ok)
            } else {
                (None, positive)
            };
            (CountValue::Ratio(bound), enumeration, agree)
        }
    };
    Ok(CountReport {
        kind,
        p: q.p(),
        r: q.r(),
        n,
        formula,
        enumeration,
        agree,
        capped: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    #[test]
    fn mobius_values() {
        let expect = [
            (1u64, 1i64),
            (2, -1),
            (3, -1),
            (4, 0),
            (5, -1),
            (6, 1),
            (8, 0),
            (12, 0),
            (30, -1),
            (105, -1),
            (210, 1),
        ];
        for (n, m) in expect {
            assert_eq!(mobius(n), m, "mobius({n})");
        }
    }

    #[test]
    fn irreducible_count_formula() {
        assert_eq!(count_irreducible(&pp(2), 3), BigInt::from(2));
        assert_eq!(count_irreducible(&pp(3), 2), BigInt::from(3));
        assert_eq!(count_irreducible(&pp(2), 1), BigInt::from(2));
        assert_eq!(count_irreducible(&pp(4), 2), BigInt::from(6));
        // (1/4)(9^4 - 9^2) = 1620
        assert_eq!(count_irreducible(&pp(9), 4), BigInt::from(1620));
    }

    #[test]
    fn nonzero_trace_count_formula() {
        assert_eq!(
            count_irreducible_nonzero_trace(&pp(5), 1).unwrap(),
            BigInt::from(4)
        );
        assert_eq!(
            count_irreducible_nonzero_trace(&pp(3), 2).unwrap(),
            BigInt::from(2)
        );
        // Characteristic divides n: refused.
        assert!(matches!(
            count_irreducible_nonzero_trace(&pp(3), 3),
            Err(Error::BadHypothesis(_))
        ));
        assert!(matches!(
            count_irreducible_nonzero_trace(&pp(4), 2),
            Err(Error::BadHypothesis(_))
        ));
    }

    #[test]
    fn reducible_alpha_count_formula() {
        assert_eq!(count_reducible_alpha(&pp(3), 1), BigInt::from(2));
        assert_eq!(count_reducible_alpha(&pp(5), 1), BigInt::from(3));
        assert_eq!(count_reducible_alpha(&pp(2), 1), BigInt::from(1));
        assert_eq!(count_reducible_alpha(&pp(4), 1), BigInt::from(2));
        assert_eq!(count_reducible_alpha(&pp(3), 2), BigInt::from(5));
    }

    #[test]
    fn lower_bound_values() {
        let int = |v: i64| BigRational::from(BigInt::from(v));
        assert_eq!(lower_bound_m(&pp(5), 1).unwrap(), int(1));
        assert_eq!(lower_bound_m(&pp(7), 1).unwrap(), int(2));
        assert_eq!(lower_bound_m(&pp(5), 2).unwrap(), int(3));
        // Even q gives a half-integer: (7/8)(8^3 - 8) - (8^3 + 1)/2 = 369/2.
        assert_eq!(
            lower_bound_m(&pp(8), 3).unwrap(),
            BigRational::new(BigInt::from(369), BigInt::from(2))
        );
        assert!(matches!(
            lower_bound_m(&pp(5), 5),
            Err(Error::BadHypothesis(_))
        ));
    }

    #[test]
    fn count_reports_agree_on_small_cells() {
        let reports = verify_counts(5, 3, 1 << 12).unwrap();
        assert!(!reports.is_empty());
        for rep in &reports {
            assert!(rep.agree, "{rep}");
            assert!(!rep.capped, "{rep}");
            assert!(rep.enumeration.is_some());
        }
        // Every (q, n) cell produced an irreducible and a reducible-alpha
        // report; the nonzero-trace report only when p does not divide n.
        let cells = reports
            .iter()
            .filter(|r| r.kind == CountKind::Irreducible)
            .count();
        assert_eq!(cells, 4 * 3); // q in {2,3,4,5}, n in {1,2,3}
        let nz = reports
            .iter()
            .filter(|r| r.kind == CountKind::NonzeroTrace)
            .count();
        // q=2: n=1,3; q=4: n=1,3; q=3: n=1,2; q=5: n=1,2,3.
        assert_eq!(nz, 2 + 2 + 2 + 3);
    }

    #[test]
    fn count_reports_mark_capped_cells() {
        let reports = verify_counts(3, 4, 30).unwrap();
        let capped: Vec<_> = reports.iter().filter(|r| r.capped).collect();
        let full: Vec<_> = reports.iter().filter(|r| !r.capped).collect();
        assert!(!capped.is_empty());
        assert!(!full.is_empty());
        for rep in capped {
            assert!(rep.enumeration.is_none());
            assert!(rep.agree); // vacuous for pure counts
        }
    }

    #[test]
    fn bound_reports_agree_on_small_cells() {
        let reports = verify_bounds(9, 3, 1 << 12).unwrap();
        assert!(!reports.is_empty());
        for rep in &reports {
            assert!(!rep.capped, "{rep}");
            assert!(rep.agree, "{rep}");
            let bound = match &rep.formula {
                CountValue::Ratio(v) => v.clone(),
                CountValue::Int(_) => panic!("bound reports carry rationals"),
            };
            assert!(bound.is_positive(), "{rep}");
            let count = rep.enumeration.clone().unwrap();
            assert!(BigRational::from(count) >= bound, "{rep}");
        }
        // q < 4 and cells with p | n are excluded.
        assert!(reports.iter().all(|r| r.q() >= 4));
        assert!(reports.iter().all(|r| !(r.n as u64).is_multiple_of(r.p)));
    }
}
