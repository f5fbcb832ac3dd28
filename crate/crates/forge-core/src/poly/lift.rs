//! Palindromic lifts x^n f(x + 1/x) of irreducible polynomials, and the
//! search for an irreducible palindromic polynomial of given even degree
//! with nonzero trace.
//!
//! The engine behind the search: alpha in F_{q^n} works exactly when it has
//! degree n over F_q, nonzero relative trace, and x^2 - alpha x + 1 is
//! irreducible over F_{q^n}. Quadratic irreducibility is decided two ways -
//! a pointwise criterion (discriminant / Artin-Schreier trace) and a bulk
//! bitmap of beta + 1/beta images - which cross-validate each other in the
//! tests.

use crate::error::{Error, Result};
use crate::field::fp::{prime_factors, PrimePower};
use crate::field::{batch_invert, FieldElement, FiniteField, Tower};
use crate::poly::irreducible::is_irreducible;
use crate::poly::{is_symplectic, poly_trace, MonicPoly, Poly};

/// x^n f(x + 1/x) for monic irreducible f of degree n: a monic degree-2n
/// polynomial with palindromic coefficients, constant term 1, and the same
/// trace coefficient as f. Returns the lift and whether it is irreducible.
///
/// Refuses reducible input with `NotIrreducible`.
pub fn symplectic_lift(f: &MonicPoly) -> Result<(MonicPoly, bool)> {
    if !is_irreducible(f) {
        return Err(Error::NotIrreducible);
    }
    let field = f.field();
    let n = f.degree();
    // x^n f(x + 1/x) = sum_k c_k (x^2 + 1)^k x^(n-k), with c_n = 1.
    let x2p1 = Poly::from_coeffs(field, vec![field.one(), field.zero(), field.one()]);
    let mut g = Poly::zero(field);
    let mut pow = Poly::one(field); // (x^2 + 1)^k
    for k in 0..=n {
        let c = f.coeff(k);
        if !c.is_zero() {
            // shift by x^(n-k)
            let mut shifted = vec![field.zero(); n - k];
            shifted.extend_from_slice(pow.coeffs());
            let term = Poly::from_coeffs(field, shifted).scalar_mul(&c);
            g = g.add(&term);
        }
        if k < n {
            pow = pow.mul(&x2p1);
        }
    }
    let g = MonicPoly::try_from_poly(&g).expect("lift is monic of degree 2n");
    debug_assert_eq!(g.degree(), 2 * n);
    debug_assert!(is_symplectic(&g));
    debug_assert_eq!(poly_trace(&g), poly_trace(f));
    let irr = is_irreducible(&g);
    Ok((g, irr))
}

/// Whether x^2 - alpha x + 1 is irreducible over alpha's field, decided
/// pointwise: in odd characteristic by the discriminant alpha^2 - 4 being a
/// nonsquare, in characteristic 2 by the absolute trace of 1/alpha^2 being 1
/// (alpha = 0 gives (x+1)^2).
pub fn quadratic_is_irreducible(alpha: &FieldElement) -> bool {
    let field = alpha.field();
    if field.p() == 2 {
        if alpha.is_zero() {
            return false;
        }
        let inv = alpha.inv().expect("nonzero");
        let c = inv.try_mul(&inv).expect("same field");
        // Absolute trace to F_2: c + c^2 + c^4 + ... (r terms).
        let mut acc = c.clone();
        let mut s = c;
        for _ in 1..field.r() {
            s = s.try_mul(&s).expect("same field");
            acc = acc.try_add(&s).expect("same field");
        }
        debug_assert!(acc.is_zero() || acc.is_one());
        acc.is_one()
    } else {
        let disc = alpha
            .try_mul(alpha)
            .expect("same field")
            .try_sub(&field.from_int(4))
            .expect("same field");
        if disc.is_zero() {
            return false;
        }
        let half = (field.order() - 1) / 2;
        !disc.pow(half).is_one()
    }
}

/// Bitmap over a field recording, for every alpha, whether
/// x^2 - alpha x + 1 is reducible. Built in bulk as the image of
/// beta -> beta + 1/beta over the nonzero elements (chunked batch
/// inversion), independently of the pointwise criterion.
pub struct ReducibleAlphaTable {
    order: u128,
    bits: Vec<u64>,
}

impl ReducibleAlphaTable {
    /// Sweep the whole field; refuses with `CapExceeded` when the field has
    /// more than cap elements.
    pub fn build(field: &FiniteField, cap: u64) -> Result<Self> {
        let order = field.order();
        if order > cap as u128 {
            return Err(Error::CapExceeded { cap });
        }
        let mut bits = vec![0u64; (order as usize).div_ceil(64)];

        fn flush(buf: &mut Vec<FieldElement>, bits: &mut [u64]) -> Result<()> {
            let invs = batch_invert(buf)?;
            for (b, binv) in buf.iter().zip(invs.iter()) {
                let img = b.try_add(binv)?;
                let k = img.index() as usize;
                bits[k / 64] |= 1 << (k % 64);
            }
            buf.clear();
            Ok(())
        }

        const CHUNK: usize = 4096;
        let mut buf: Vec<FieldElement> = Vec::with_capacity(CHUNK);
        for k in 1..order {
            buf.push(field.element_from_index(k));
            if buf.len() == CHUNK {
                flush(&mut buf, &mut bits)?;
            }
        }
        if !buf.is_empty() {
            flush(&mut buf, &mut bits)?;
        }
        Ok(ReducibleAlphaTable { order, bits })
    }

    pub fn is_reducible_index(&self, k: u128) -> bool {
        assert!(k < self.order, "index out of range");
        let k = k as usize;
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn is_reducible(&self, alpha: &FieldElement) -> bool {
        self.is_reducible_index(alpha.index())
    }

    /// Number of alpha with reducible quadratic.
    pub fn count_reducible(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// Exact number of alpha in F_{q^n} that have degree n over F_q, nonzero
/// relative trace, and irreducible x^2 - alpha x + 1: one pass over the
/// field using prime-field linear maps for the trace and degree tests and
/// the bulk bitmap for the quadratic. Refuses with `CapExceeded` when
/// q^n > cap.
pub fn valid_alpha_count(q: &PrimePower, n: u32, cap: u64) -> Result<u64> {
    assert!(n >= 1);
    let total = q
        .value()
        .checked_pow(n)
        .filter(|&t| t <= cap as u128)
        .ok_or(Error::CapExceeded { cap })?;
    let big = FiniteField::new(q.p(), q.r() * n)?;
    debug_assert_eq!(big.order(), total);
    let q_small = u64::try_from(q.value()).expect("prime powers fit in u64");
    let tower = Tower::new(big.clone(), q_small)?;
    let table = ReducibleAlphaTable::build(&big, cap)?;
    let trace = tower.trace_matrix();
    // alpha has degree exactly n iff no maximal proper-divisor Frobenius
    // power fixes it.
    let frobs: Vec<Vec<Vec<u64>>> = prime_factors(n as u64)
        .iter()
        .map(|&t| tower.frobenius_matrix(n / t as u32))
        .collect();

    let mut count = 0u64;
    'alpha: for k in 0..total {
        let a = big.element_from_index(k);
        if tower.apply_matrix(&trace, &a).iter().all(|&v| v == 0) {
            continue;
        }
        for m in &frobs {
            if tower.apply_matrix(m, &a).as_slice() == a.coeffs() {
                continue 'alpha;
            }
        }
        if table.is_reducible_index(k) {
            continue;
        }
        count += 1;
    }
    Ok(count)
}

/// Result of the palindromic-irreducible search: the degree-2n polynomial,
/// the degree-n minimal polynomial it lifts, the field element the search
/// found, and that element's relative trace (a nonzero element of F_q).
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub poly: MonicPoly,
    pub min_poly: MonicPoly,
    pub alpha: FieldElement,
    pub alpha_trace: FieldElement,
}

/// First (in canonical element order over F_{q^n}, n = degree/2) monic
/// irreducible palindromic polynomial of the given even degree over F_q
/// with nonzero trace, produced as the lift of the minimal polynomial of a
/// degree-n element alpha with nonzero trace and irreducible
/// x^2 - alpha x + 1.
///
/// Errors: `BadHypothesis` for odd or zero degree (or if no such element
/// exists), `CapExceeded` when the q^n-element scan would exceed cap.
pub fn find_symplectic_irreducible(
    q: &PrimePower,
    degree: u32,
    cap: u64,
) -> Result<SearchResult> {
    if degree == 0 || !degree.is_multiple_of(2) {
        return Err(Error::BadHypothesis(format!(
            "palindromic irreducible polynomials have even degree >= 2, got {degree}"
        )));
    }
    let n = degree / 2;
    let total = q
        .value()
        .checked_pow(n)
        .filter(|&t| t <= cap as u128)
        .ok_or(Error::CapExceeded { cap })?;
    let big = FiniteField::new(q.p(), q.r() * n)?;
    let q_small = u64::try_from(q.value()).expect("prime powers fit in u64");
    let tower = Tower::new(big.clone(), q_small)?;
    let trace = tower.trace_matrix();
    let frobs: Vec<Vec<Vec<u64>>> = prime_factors(n as u64)
        .iter()
        .map(|&t| tower.frobenius_matrix(n / t as u32))
        .collect();

    'alpha: for k in 0..total {
        let a = big.element_from_index(k);
        if tower.apply_matrix(&trace, &a).iter().all(|&v| v == 0) {
            continue;
        }
        for m in &frobs {
            if tower.apply_matrix(m, &a).as_slice() == a.coeffs() {
                continue 'alpha;
            }
        }
        if !quadratic_is_irreducible(&a) {
            continue;
        }
        let min_poly = tower.minimal_polynomial(&a)?;
        assert_eq!(min_poly.degree(), n as usize, "degree filter");
        let (poly, irr) = symplectic_lift(&min_poly)?;
        assert!(
            irr,
            "lift of a degree-n minimal polynomial with irreducible quadratic must be irreducible"
        );
        let alpha_trace = tower.relative_trace(&a)?;
        debug_assert!(!alpha_trace.is_zero());
        return Ok(SearchResult {
            poly,
            min_poly,
            alpha: a,
            alpha_trace,
        });
    }
    Err(Error::BadHypothesis(format!(
        "no degree-{n} element of the {total}-element field has nonzero trace \
         and an irreducible quadratic"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::irreducible::{enumerate_irreducible, TraceFilter};

    fn pp(q: u64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    fn monic(field: &FiniteField, lower: &[u64]) -> MonicPoly {
        MonicPoly::from_lower_indices(field, &lower.iter().map(|&v| v as u128).collect::<Vec<_>>())
    }

    #[test]
    fn frozen_lift_examples() {
        let f5 = FiniteField::prime(5).unwrap();
        // x - 1 lifts to x^2 + 4x + 1, irreducible.
        let (g, irr) = symplectic_lift(&monic(&f5, &[4])).unwrap();
        assert_eq!(g, monic(&f5, &[1, 4]));
        assert!(irr);
        // x - 2 lifts to x^2 + 3x + 1 = (x - 1)^2, reducible.
        let (g, irr) = symplectic_lift(&monic(&f5, &[3])).unwrap();
        assert_eq!(g, monic(&f5, &[1, 3]));
        assert!(!irr);
        // x^2 + x + 2 over F_3 lifts to x^4 + x^3 + x^2 + x + 1, irreducible.
        let f3 = FiniteField::prime(3).unwrap();
        let (g, irr) = symplectic_lift(&monic(&f3, &[2, 1])).unwrap();
        assert_eq!(g, monic(&f3, &[1, 1, 1, 1]));
        assert!(irr);
        // Reducible input is refused.
        assert!(matches!(
            symplectic_lift(&monic(&f5, &[4, 0])), // x^2 + 4 = (x+1)(x+4)
            Err(Error::NotIrreducible)
        ));
    }

    /// Evaluate a polynomial with subfield coefficients at a big-field point.
    fn eval_up(tower: &Tower, f: &MonicPoly, x: &FieldElement) -> FieldElement {
        let mut acc = tower.big().one();
        for c in f.lower_coeffs().iter().rev() {
            let c_up = tower.embed(c).unwrap();
            acc = acc.try_mul(x).unwrap().try_add(&c_up).unwrap();
        }
        acc
    }

    #[test]
    fn lift_shape_and_flag_against_root_criterion() {
        // Over several (q, n): every monic irreducible f of degree n lifts
        // to a palindromic monic polynomial of degree 2n with f's trace, and
        // the irreducibility flag matches the quadratic criterion at a root
        // of f in F_{q^n}.
        for &(p, r, n) in &[(2u64, 1u32, 2u32), (3, 1, 2), (5, 1, 1), (5, 1, 2), (2, 2, 1), (3, 1, 3)] {
            let field = FiniteField::new(p, r).unwrap();
            let q = pp(field.order() as u64);
            let big = FiniteField::new(p, r * n).unwrap();
            let tower = Tower::new(big.clone(), q.value() as u64).unwrap();
            for f in enumerate_irreducible(&field, n, TraceFilter::All, 1 << 16).unwrap() {
                let (g, irr) = symplectic_lift(&f).unwrap();
                assert_eq!(g.degree(), 2 * n as usize);
                assert!(is_symplectic(&g));
                assert_eq!(poly_trace(&g), poly_trace(&f));
                // Find a root of f in the big field and compare flags.
                let root = big
                    .elements()
                    .find(|x| eval_up(&tower, &f, x).is_zero())
                    .expect("degree-n irreducible splits in F_{q^n}");
                assert_eq!(
                    irr,
                    quadratic_is_irreducible(&root),
                    "q={} n={n} f={f}",
                    field.order()
                );
            }
        }
    }

    #[test]
    fn pointwise_bulk_and_root_scan_agree() {
        // Three independent routes to "x^2 - alpha x + 1 is reducible":
        // the pointwise criterion, the beta + 1/beta bitmap, and a direct
        // root scan. All must agree on every element of every small field.
        for &(p, r) in &[(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let field = FiniteField::new(p, r).unwrap();
            let table = ReducibleAlphaTable::build(&field, 1 << 16).unwrap();
            let mut reducible = 0u64;
            for a in field.elements() {
                let has_root = field
                    .elements()
                    .any(|b| {
                        let v = b
                            .try_mul(&b)
                            .unwrap()
                            .try_sub(&a.try_mul(&b).unwrap())
                            .unwrap()
                            .try_add(&field.one())
                            .unwrap();
                        v.is_zero()
                    });
                assert_eq!(
                    quadratic_is_irreducible(&a),
                    !has_root,
                    "pointwise vs roots at q={} a={a}",
                    field.order()
                );
                assert_eq!(
                    table.is_reducible(&a),
                    has_root,
                    "bitmap vs roots at q={} a={a}",
                    field.order()
                );
                if has_root {
                    reducible += 1;
                }
            }
            assert_eq!(table.count_reducible(), reducible);
        }
    }

    #[test]
    fn valid_alpha_count_matches_pointwise_oracle() {
        // The linear-map sweep against a direct pointwise scan using the
        // tower API (minimal polynomial degree + relative trace +
        // pointwise quadratic).
        for &(q, n) in &[(5u64, 1u32), (7, 1), (5, 2), (4, 3), (9, 2), (7, 2), (8, 1)] {
            let qq = pp(q);
            let fast = valid_alpha_count(&qq, n, 1 << 16).unwrap();
            let big = FiniteField::new(qq.p(), qq.r() * n).unwrap();
            let tower = Tower::new(big.clone(), q).unwrap();
            let mut slow = 0u64;
            for a in big.elements() {
                if tower.relative_trace(&a).unwrap().is_zero() {
                    continue;
                }
                if tower.minimal_polynomial(&a).unwrap().degree() != n as usize {
                    continue;
                }
                if quadratic_is_irreducible(&a) {
                    slow += 1;
                }
            }
            assert_eq!(fast, slow, "q={q} n={n}");
        }
        // Frozen spot values: q=7, n=1 has exactly the two elements 3, 4.
        assert_eq!(valid_alpha_count(&pp(7), 1, 1 << 16).unwrap(), 2);
        assert_eq!(valid_alpha_count(&pp(5), 1, 1 << 16).unwrap(), 2);
    }

    #[test]
    fn search_frozen_first_hit() {
        // q = 5, degree 2: the first valid element is alpha = 1, giving
        // x^2 + 4x + 1.
        let got = find_symplectic_irreducible(&pp(5), 2, 1 << 16).unwrap();
        let f5 = FiniteField::prime(5).unwrap();
        assert_eq!(got.poly, monic(&f5, &[1, 4]));
        assert_eq!(got.alpha.index(), 1);
        assert_eq!(got.alpha_trace, f5.from_int(1));
        assert_eq!(got.min_poly, monic(&f5, &[4]));
    }

    #[test]
    fn search_postconditions_across_cells() {
        for &(q, degree) in &[(5u64, 2u32), (5, 4), (7, 2), (7, 4), (9, 4), (4, 2), (8, 2), (5, 6), (3, 4)] {
            let qq = pp(q);
            let got = find_symplectic_irreducible(&qq, degree, 1 << 20).unwrap();
            assert_eq!(got.poly.degree(), degree as usize);
            assert!(is_symplectic(&got.poly));
            assert!(is_irreducible(&got.poly), "q={q} degree={degree}");
            assert!(!poly_trace(&got.poly).is_zero());
            assert_eq!(poly_trace(&got.poly), poly_trace(&got.min_poly));
            assert!(!got.alpha_trace.is_zero());
            // The found element is a root of its minimal polynomial.
            let big = got.alpha.field().clone();
            let tower = Tower::new(big, q).unwrap();
            assert!(eval_up(&tower, &got.min_poly, &got.alpha).is_zero());
        }
    }

    #[test]
    fn search_rejects_bad_degree_and_cap() {
        assert!(matches!(
            find_symplectic_irreducible(&pp(5), 3, 1 << 16),
            Err(Error::BadHypothesis(_))
        ));
        assert!(matches!(
            find_symplectic_irreducible(&pp(5), 0, 1 << 16),
            Err(Error::BadHypothesis(_))
        ));
        assert!(matches!(
            find_symplectic_irreducible(&pp(5), 8, 100),
            Err(Error::CapExceeded { cap: 100 })
        ));
    }
}
