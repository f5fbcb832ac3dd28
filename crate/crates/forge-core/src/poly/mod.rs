//! Dense univariate polynomials over a finite field, and the monic wrapper
//! used throughout the searches and counting routines.
//!
//! Coefficient vectors run constant term first. `Poly` is the general
//! workhorse (trimmed, zero = empty vector); `MonicPoly` fixes degree >= 1
//! and an implicit leading 1, which is also how polynomials serialize.

pub mod counting;
pub mod irreducible;
pub mod lift;

use std::fmt;

use crate::field::{FieldElement, FiniteField};

pub use counting::{
    count_irreducible, count_irreducible_nonzero_trace, count_report_cell, count_reducible_alpha,
    lower_bound_m, mobius, verify_bounds, verify_counts, CountKind, CountReport, CountValue,
};
pub use irreducible::{enumerate_irreducible, is_irreducible, TraceFilter};
pub use lift::{
    find_symplectic_irreducible, quadratic_is_irreducible, symplectic_lift, valid_alpha_count,
    ReducibleAlphaTable, SearchResult,
};

/// General dense polynomial; no trailing zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FiniteField,
    c: Vec<FieldElement>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.c.iter().map(|x| x.index()).collect::<Vec<_>>())
    }
}

impl Poly {
    pub fn zero(field: &FiniteField) -> Self {
        Poly {
            field: field.clone(),
            c: Vec::new(),
        }
    }

    pub fn one(field: &FiniteField) -> Self {
        Poly {
            field: field.clone(),
            c: vec![field.one()],
        }
    }

    /// The monomial x.
    pub fn x(field: &FiniteField) -> Self {
        Poly {
            field: field.clone(),
            c: vec![field.zero(), field.one()],
        }
    }

    pub fn from_coeffs(field: &FiniteField, coeffs: Vec<FieldElement>) -> Self {
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        let mut p = Poly {
            field: field.clone(),
            c: coeffs,
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|c| c.is_zero()) {
            self.c.pop();
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    /// Coefficient of x^i (zero beyond the degree), by value.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.c.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.c
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.c.last()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "field mismatch");
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(
                self.coeff(i)
                    .try_add(&other.coeff(i))
                    .expect("same field"),
            );
        }
        Poly::from_coeffs(&self.field, out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "field mismatch");
        let n = self.c.len().max(other.c.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(
                self.coeff(i)
                    .try_sub(&other.coeff(i))
                    .expect("same field"),
            );
        }
        Poly::from_coeffs(&self.field, out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "field mismatch");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                let t = a.try_mul(b).expect("same field");
                out[i + j] = out[i + j].try_add(&t).expect("same field");
            }
        }
        Poly::from_coeffs(&self.field, out)
    }

    pub fn scalar_mul(&self, s: &FieldElement) -> Poly {
        let out = self
            .c
            .iter()
            .map(|a| a.try_mul(s).expect("same field"))
            .collect();
        Poly::from_coeffs(&self.field, out)
    }

    pub fn negate(&self) -> Poly {
        Poly::from_coeffs(&self.field, self.c.iter().map(|a| a.negate()).collect())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        assert_eq!(self.field, d.field, "field mismatch");
        let dd = d.c.len() - 1;
        let lead_inv = d.c[dd].inv().expect("nonzero lead");
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(&self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        while r.len() > dd {
            let dr = r.len() - 1;
            let coef = r[dr].try_mul(&lead_inv).expect("same field");
            let shift = dr - dd;
            if !coef.is_zero() {
                q[shift] = coef.clone();
                for (j, b) in d.c.iter().enumerate() {
                    let t = coef.try_mul(b).expect("same field");
                    r[shift + j] = r[shift + j].try_sub(&t).expect("same field");
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (
            Poly::from_coeffs(&self.field, q),
            Poly::from_coeffs(&self.field, r),
        )
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.leading() {
            if !lead.is_one() {
                let s = lead.inv().expect("nonzero lead");
                a = a.scalar_mul(&s);
            }
        }
        a
    }

    /// self^e modulo m (m of degree >= 1).
    pub fn powmod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut base = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.c.iter().rev() {
            acc = acc.try_mul(x).expect("same field").try_add(c).expect("same field");
        }
        acc
    }
}

/// Monic polynomial of degree >= 1; stores only the lower coefficients
/// a_0..a_{d-1}, the leading 1 being implicit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonicPoly {
    field: FiniteField,
    lower: Vec<FieldElement>,
}

impl MonicPoly {
    /// Build from the lower coefficients a_0..a_{d-1}; the degree is their
    /// count and must be at least 1.
    pub fn from_lower_coeffs(field: &FiniteField, lower: Vec<FieldElement>) -> Self {
        assert!(!lower.is_empty(), "monic polynomials have degree >= 1");
        debug_assert!(lower.iter().all(|c| c.field() == field));
        MonicPoly {
            field: field.clone(),
            lower,
        }
    }

    /// Lower coefficients from element indices (base-field encoding).
    pub fn from_lower_indices(field: &FiniteField, idx: &[u128]) -> Self {
        let lower = idx.iter().map(|&k| field.element_from_index(k)).collect();
        Self::from_lower_coeffs(field, lower)
    }

    /// Reinterpret a general polynomial; None unless it is monic of
    /// degree >= 1.
    pub fn try_from_poly(p: &Poly) -> Option<Self> {
        match p.degree() {
            Some(d) if d >= 1 && p.leading().is_some_and(|c| c.is_one()) => {
                Some(MonicPoly {
                    field: p.field.clone(),
                    lower: p.c[..d].to_vec(),
                })
            }
            _ => None,
        }
    }

    /// The monic polynomial of degree d whose lower coefficients have the
    /// given integer encoding (base q, constant term least significant).
    pub fn from_encoding(field: &FiniteField, d: u32, mut key: u128) -> Self {
        let q = field.order();
        let mut lower = Vec::with_capacity(d as usize);
        for _ in 0..d {
            lower.push(field.element_from_index(key % q));
            key /= q;
        }
        Self::from_lower_coeffs(field, lower)
    }

    /// Integer encoding of the lower coefficients (base q, constant term
    /// least significant). Total order on monic polynomials of one degree.
    pub fn encoding(&self) -> u128 {
        let q = self.field.order();
        let mut acc = 0u128;
        for c in self.lower.iter().rev() {
            acc = acc * q + c.index();
        }
        acc
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.lower.len()
    }

    /// a_0..a_{d-1}.
    pub fn lower_coeffs(&self) -> &[FieldElement] {
        &self.lower
    }

    /// Coefficient of x^i, including the implicit leading 1.
    pub fn coeff(&self, i: usize) -> FieldElement {
        if i == self.lower.len() {
            self.field.one()
        } else {
            self.lower
                .get(i)
                .cloned()
                .unwrap_or_else(|| self.field.zero())
        }
    }

    pub fn to_poly(&self) -> Poly {
        let mut c = self.lower.clone();
        c.push(self.field.one());
        Poly::from_coeffs(&self.field, c)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.one();
        for c in self.lower.iter().rev() {
            acc = acc.try_mul(x).expect("same field").try_add(c).expect("same field");
        }
        acc
    }
}

impl fmt::Debug for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MonicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        write!(f, "x^{d}")?;
        for i in (0..d).rev() {
            let c = &self.lower[i];
            if c.is_zero() {
                continue;
            }
            if self.field.r() == 1 {
                let v = c.coeffs()[0];
                match i {
                    0 => write!(f, " + {v}")?,
                    1 if v == 1 => write!(f, " + x")?,
                    1 => write!(f, " + {v}x")?,
                    _ if v == 1 => write!(f, " + x^{i}")?,
                    _ => write!(f, " + {v}x^{i}")?,
                }
            } else {
                match i {
                    0 => write!(f, " + {c}")?,
                    1 => write!(f, " + {c}*x")?,
                    _ => write!(f, " + {c}*x^{i}")?,
                }
            }
        }
        Ok(())
    }
}

/// Trace of a monic polynomial: the coefficient of x^(d-1) as written
/// (for x + a_0 this is a_0).
pub fn poly_trace(f: &MonicPoly) -> FieldElement {
    f.lower[f.degree() - 1].clone()
}

/// A monic polynomial g of even degree 2n is "symplectic" when its constant
/// term is 1 and its coefficients are palindromic (a_i = a_{2n-i}); this is
/// equivalent to the functional identity x^{2n} g(1/x) = g(x).
pub fn is_symplectic(f: &MonicPoly) -> bool {
    let d = f.degree();
    if !d.is_multiple_of(2) {
        return false;
    }
    if !f.coeff(0).is_one() {
        return false;
    }
    (1..=d / 2).all(|i| f.coeff(i) == f.coeff(d - i))
}
