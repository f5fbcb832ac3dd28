//! Irreducibility over an arbitrary finite field, plus exhaustive
//! enumeration of irreducible monic polynomials in canonical order.
//!
//! The test is the standard gcd scheme: f of degree d over F_q is
//! irreducible iff x^(q^d) = x mod f and gcd(x^(q^(d/t)) - x, f) = 1 for
//! every prime t dividing d. Frobenius powers are taken one q-power step at
//! a time so exponents never exceed q.

use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::poly::{MonicPoly, Poly};

/// Which monic irreducible polynomials to keep when enumerating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceFilter {
    /// Every irreducible polynomial of the requested degree.
    All,
    /// Only those whose x^(d-1) coefficient is nonzero.
    NonzeroTrace,
}

/// Rabin irreducibility test for a monic polynomial of degree >= 1.
pub fn is_irreducible(f: &MonicPoly) -> bool {
    let field = f.field();
    let q = field.order();
    let d = f.degree() as u64;
    let fp = f.to_poly();
    if d == 1 {
        return true;
    }
    // Linear factors are the common case for random inputs; the gcd scheme
    // below also catches them, so no special casing beyond degree 1.
    let x = Poly::x(field);

    // h_k = x^(q^k) mod f, advanced one Frobenius step at a time.
    let mut h = x.rem(&fp);
    let mut prime_divs: Vec<u64> = crate::field::fp::prime_factors(d);
    prime_divs.sort_unstable();
    prime_divs.dedup();
    let mut checkpoints: Vec<u64> = prime_divs.iter().map(|t| d / t).collect();
    checkpoints.sort_unstable();
    checkpoints.dedup();

    let mut step = 0u64;
    for &cp in &checkpoints {
        while step < cp {
            h = h.powmod(q, &fp);
            step += 1;
        }
        let diff = h.sub(&x);
        let g = diff.gcd(&fp);
        if g.degree() != Some(0) {
            return false;
        }
    }
    while step < d {
        h = h.powmod(q, &fp);
        step += 1;
    }
    h.sub(&x).is_zero()
}

/// All monic irreducible polynomials of degree d over the field, in
/// increasing integer-encoding order, subject to the trace filter.
///
/// Visits all q^d candidates; refuses with `CapExceeded` when q^d > cap.
pub fn enumerate_irreducible(
    field: &FiniteField,
    d: u32,
    filter: TraceFilter,
    cap: u64,
) -> Result<Vec<MonicPoly>> {
    assert!(d >= 1, "degree must be at least 1");
    let q = field.order();
    let total = q
        .checked_pow(d)
        .filter(|&t| t <= cap as u128)
        .ok_or(Error::CapExceeded { cap })?;
    let mut out = Vec::new();
    for key in 0..total {
        let m = MonicPoly::from_encoding(field, d, key);
        if filter == TraceFilter::NonzeroTrace && m.lower_coeffs()[d as usize - 1].is_zero() {
            continue;
        }
        if is_irreducible(&m) {
            out.push(m);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial factorization: try every monic divisor of degree <= d/2.
    fn is_irreducible_by_trial(f: &MonicPoly) -> bool {
        let field = f.field();
        let q = field.order();
        let d = f.degree();
        let fp = f.to_poly();
        for e in 1..=(d / 2) {
            let count = q.pow(e as u32);
            for key in 0..count {
                let g = MonicPoly::from_encoding(field, e as u32, key);
                if fp.rem(&g.to_poly()).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn agrees_with_trial_division_over_extension_fields() {
        // The prime-field gcd scheme is already cross-checked in the field
        // layer; here the same agreement over non-prime coefficient fields,
        // exhaustively for small sizes.
        for &(p, r, d) in &[(2u64, 2u32, 1u32), (2, 2, 2), (2, 2, 3), (3, 2, 1), (3, 2, 2), (2, 3, 2)] {
            let field = FiniteField::new(p, r).unwrap();
            let total = field.order().pow(d);
            let mut seen = 0u64;
            for key in 0..total {
                let f = MonicPoly::from_encoding(&field, d, key);
                let fast = is_irreducible(&f);
                let slow = is_irreducible_by_trial(&f);
                assert_eq!(fast, slow, "p={p} r={r} d={d} f={f}");
                if fast {
                    seen += 1;
                }
            }
            assert!(seen > 0);
        }
    }

    #[test]
    fn known_small_cases() {
        let f2 = FiniteField::prime(2).unwrap();
        // x^2 + x + 1 irreducible; x^2 + 1 = (x+1)^2 reducible.
        assert!(is_irreducible(&MonicPoly::from_lower_indices(&f2, &[1, 1])));
        assert!(!is_irreducible(&MonicPoly::from_lower_indices(&f2, &[1, 0])));
        let f5 = FiniteField::prime(5).unwrap();
        // x^2 + 4x + 1: discriminant 16 - 4 = 12 = 2, a nonsquare mod 5.
        assert!(is_irreducible(&MonicPoly::from_lower_indices(&f5, &[1, 4])));
        // x^2 + 3x + 1: discriminant 9 - 4 = 5 = 0 mod 5 -> (x + 4)^2.
        assert!(!is_irreducible(&MonicPoly::from_lower_indices(&f5, &[1, 3])));
    }

    #[test]
    fn enumeration_order_and_frozen_counts() {
        let f2 = FiniteField::prime(2).unwrap();
        // Degree 3 over F_2: exactly x^3 + x + 1 then x^3 + x^2 + 1,
        // in that order.
        let got = enumerate_irreducible(&f2, 3, TraceFilter::All, 1 << 16).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].encoding(), 3); // lower coeffs (1,1,0)
        assert_eq!(got[1].encoding(), 5); // lower coeffs (1,0,1)

        // Degree 2 over F_3: three irreducibles.
        let f3 = FiniteField::prime(3).unwrap();
        let got = enumerate_irreducible(&f3, 2, TraceFilter::All, 1 << 16).unwrap();
        assert_eq!(got.len(), 3);
        // Nonzero trace removes x^2 + 1, leaving 2.
        let nz = enumerate_irreducible(&f3, 2, TraceFilter::NonzeroTrace, 1 << 16).unwrap();
        assert_eq!(nz.len(), 2);
        for f in &nz {
            assert!(!f.lower_coeffs()[1].is_zero());
        }

        // Degree 1 over F_5 with nonzero trace: x+1..x+4 (x itself excluded).
        let f5 = FiniteField::prime(5).unwrap();
        let nz = enumerate_irreducible(&f5, 1, TraceFilter::NonzeroTrace, 1 << 16).unwrap();
        assert_eq!(nz.len(), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let f3 = FiniteField::prime(3).unwrap();
        let err = enumerate_irreducible(&f3, 4, TraceFilter::All, 80).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { cap: 80 }));
        assert!(enumerate_irreducible(&f3, 4, TraceFilter::All, 81).is_ok());
    }
}
