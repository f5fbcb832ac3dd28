//! Finite fields F_{p^r} in a dense polynomial-residue representation.
//!
//! A field of order p^r is F_p[x] modulo a monic irreducible of degree r.
//! Unless a caller supplies its own modulus, the canonical one is used: the
//! first monic irreducible of degree r in integer-encoding order (constant
//! term = least significant base-p digit). Two handles with equal (p, r,
//! modulus) behave interchangeably.
//!
//! Elements store a fixed-length coefficient vector (length r, entries in
//! [0, p)). The canonical index of an element is its base-p integer encoding,
//! which also fixes the canonical enumeration order of the field.

pub mod fp;
pub mod tower;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
pub use fp::PrimePower;
pub use tower::Tower;

#[derive(Debug)]
struct FieldData {
    p: u64,
    r: u32,
    /// Modulus coefficients a_0..a_{r-1}; the leading 1 is implicit.
    modulus: Vec<u64>,
    /// Same modulus with the leading 1 attached, for raw poly arithmetic.
    modulus_full: Vec<u64>,
    order: u128,
}

/// Cheap-to-clone handle to a finite field.
#[derive(Clone)]
pub struct FiniteField(Arc<FieldData>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.r == other.0.r
                && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FiniteField {}

impl std::hash::Hash for FiniteField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.r.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.r)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.r == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.r)
        }
    }
}

impl FiniteField {
    /// Field of order p^r with the canonical modulus.
    pub fn new(p: u64, r: u32) -> Result<Self> {
        let pp = PrimePower::from_parts(p, r)?;
        let modulus = fp::canonical_modulus(p, r);
        Self::build(pp, modulus)
    }

    /// Field with an explicitly given modulus (a_0..a_{r-1}, leading 1
    /// implicit). The modulus must be irreducible of degree r over F_p.
    pub fn with_modulus(p: u64, r: u32, modulus: Vec<u64>) -> Result<Self> {
        let pp = PrimePower::from_parts(p, r)?;
        if modulus.len() != r as usize || modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadTower(format!(
                "modulus must have {} coefficients below {}",
                r, p
            )));
        }
        if r > 1 {
            let mut full = modulus.clone();
            full.push(1);
            if !fp::is_irreducible(&full, p) {
                return Err(Error::NotIrreducible);
            }
        }
        Self::build(pp, modulus)
    }

    /// Convenience constructor for prime fields.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    fn build(pp: PrimePower, modulus: Vec<u64>) -> Result<Self> {
        let mut modulus_full = modulus.clone();
        modulus_full.push(1);
        Ok(FiniteField(Arc::new(FieldData {
            p: pp.p(),
            r: pp.r(),
            modulus,
            modulus_full,
            order: pp.value(),
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn r(&self) -> u32 {
        self.0.r
    }

    pub fn order(&self) -> u128 {
        self.0.order
    }

    pub fn prime_power(&self) -> PrimePower {
        PrimePower::from_parts(self.0.p, self.0.r).expect("validated at construction")
    }

    /// Modulus coefficients a_0..a_{r-1} (leading 1 omitted).
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            c: vec![0; self.0.r as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// The element n·1 of the prime subfield.
    pub fn from_int(&self, n: u64) -> FieldElement {
        let mut c = vec![0; self.0.r as usize];
        c[0] = n % self.0.p;
        FieldElement {
            field: self.clone(),
            c,
        }
    }

    /// Element from an explicit coefficient vector (constant term first,
    /// at most r entries, each below p). Shorter vectors are zero-padded.
    pub fn element_from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.0.r as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::BadTower(format!(
                "coefficient vector does not fit GF({}^{})",
                self.0.p, self.0.r
            )));
        }
        let mut c = coeffs.to_vec();
        c.resize(self.0.r as usize, 0);
        Ok(FieldElement {
            field: self.clone(),
            c,
        })
    }

    /// The element with canonical index k (base-p digits, constant term =
    /// least significant digit). Panics if k >= order.
    pub fn element_from_index(&self, k: u128) -> FieldElement {
        assert!(k < self.0.order, "index out of range");
        let p = self.0.p as u128;
        let mut c = vec![0u64; self.0.r as usize];
        let mut k = k;
        for ci in c.iter_mut() {
            *ci = (k % p) as u64;
            k /= p;
        }
        FieldElement {
            field: self.clone(),
            c,
        }
    }

    pub fn index_of(&self, x: &FieldElement) -> u128 {
        assert_eq!(self, x.field(), "index_of on a foreign element");
        let p = self.0.p as u128;
        let mut acc = 0u128;
        for &c in x.c.iter().rev() {
            acc = acc * p + c as u128;
        }
        acc
    }

    /// All field elements in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.order).map(move |k| self.element_from_index(k))
    }

    /// The residue class of x, a root of the modulus (zero when r = 1, where
    /// the conventional modulus is x - 0).
    pub fn adjoined_root(&self) -> FieldElement {
        if self.0.r == 1 {
            return self.zero();
        }
        let mut c = vec![0; self.0.r as usize];
        c[1] = 1;
        FieldElement {
            field: self.clone(),
            c,
        }
    }
}

/// An element of a specific finite field; carries its field handle.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: FiniteField,
    /// Length r, entries in [0, p); index i holds the coefficient of x^i.
    c: Vec<u64>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in {:?}", self.c, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.r() == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.c)
        }
    }
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    /// Coefficients, constant term first, fixed length r.
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    pub fn index(&self) -> u128 {
        self.field.index_of(self)
    }

    fn check_same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        let p = self.field.p();
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| fp::addm(a, b, p))
            .collect();
        Ok(FieldElement {
            field: self.field.clone(),
            c,
        })
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        let p = self.field.p();
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(&a, &b)| fp::subm(a, b, p))
            .collect();
        Ok(FieldElement {
            field: self.field.clone(),
            c,
        })
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same_field(other)?;
        let p = self.field.p();
        let prod = fp::mul(&self.c, &other.c, p);
        let red = fp::rem(&prod, &self.field.0.modulus_full, p);
        Ok(self.field.element_from_reduced(red))
    }

    pub fn negate(&self) -> FieldElement {
        let p = self.field.p();
        let c = self.c.iter().map(|&a| fp::subm(0, a, p)).collect();
        FieldElement {
            field: self.field.clone(),
            c,
        }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.field.p();
        if self.field.r() == 1 {
            let v = fp::invm(self.c[0], p)?;
            return Ok(self.field.from_int(v));
        }
        let inv = fp::invmod(&self.c, &self.field.0.modulus_full, p)?;
        Ok(self.field.element_from_reduced(inv))
    }

    /// Nonnegative integer power by square-and-multiply.
    pub fn pow(&self, mut e: u128) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base).expect("same field");
            }
            base = base.try_mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    /// x -> x^{q0}, where q0 = p^s must be a subfield order (s divides r).
    pub fn frobenius(&self, q0: u64) -> Result<FieldElement> {
        let pp = PrimePower::new(q0).map_err(|_| {
            Error::BadTower(format!("{q0} is not a prime power"))
        })?;
        if pp.p() != self.field.p() || !self.field.r().is_multiple_of(pp.r()) {
            return Err(Error::BadTower(format!(
                "{} is not a subfield order of {}",
                q0,
                self.field
            )));
        }
        Ok(self.pow(pp.value()))
    }

    /// Trace to the canonical subfield of order q: sum of x^{q^i} for
    /// i = 0..n-1 where q^n is the order of x's field. The result is
    /// returned as an element of the canonical field of order q.
    pub fn relative_trace(&self, q: u64) -> Result<FieldElement> {
        let tower = Tower::new(self.field.clone(), q)?;
        tower.relative_trace(self)
    }
}

impl FiniteField {
    /// Wrap a trimmed raw residue (length <= r) as an element.
    pub(crate) fn element_from_reduced(&self, mut raw: Vec<u64>) -> FieldElement {
        raw.resize(self.0.r as usize, 0);
        FieldElement {
            field: self.clone(),
            c: raw,
        }
    }

}

macro_rules! arith_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field mismatch")
            }
        }
        impl std::ops::$trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(&rhs).expect("field mismatch")
            }
        }
    };
}

arith_op!(Add, add, try_add);
arith_op!(Sub, sub, try_sub);
arith_op!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.negate()
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.negate()
    }
}

/// Simultaneous inversion of a slice of nonzero elements (3 multiplications
/// per element instead of one inversion each). Errors if any input is zero
/// or from a different field.
pub fn batch_invert(xs: &[FieldElement]) -> Result<Vec<FieldElement>> {
    if xs.is_empty() {
        return Ok(Vec::new());
    }
    let field = xs[0].field().clone();
    let mut prefix = Vec::with_capacity(xs.len());
    let mut acc = field.one();
    for x in xs {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        prefix.push(acc.clone());
        acc = acc.try_mul(x)?;
    }
    let mut inv_acc = acc.inv()?;
    let mut out = vec![field.zero(); xs.len()];
    for i in (0..xs.len()).rev() {
        out[i] = inv_acc.try_mul(&prefix[i])?;
        inv_acc = inv_acc.try_mul(&xs[i])?;
    }
    Ok(out)
}
