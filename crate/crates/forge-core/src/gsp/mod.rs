//! The symplectic similitude group over a prime field: matrices M with
//! M^T J M = m J for the standard alternating form J and a nonzero
//! multiplier m, plus transvections, exhaustive group closures, group
//! orders, and the classification of transvection-containing subgroups.
//!
//! Everything here is deliberately exhaustive: closures materialize every
//! group element, so formulas (orders, multiplier bookkeeping) are checked
//! against literal enumeration in the tests.

pub mod classify;
pub mod companion;
pub mod matrix;

use std::collections::HashSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::fp;

pub use classify::{classify_subgroup, Classification, ClassifyReport};
pub use companion::symplectic_companion;
pub use matrix::Matrix;

/// The standard symplectic space F_l^{2n} (l prime) with the form
/// B(u, v) = u^T J v, J = [[0, I_n], [-I_n, 0]].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SympSpace {
    l: u64,
    n: usize,
}

impl SympSpace {
    pub fn new(l: u64, n: usize) -> Result<Self> {
        if !fp::is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        if n == 0 {
            return Err(Error::BadHypothesis(
                "symplectic spaces have dimension 2n >= 2".into(),
            ));
        }
        Ok(SympSpace { l, n })
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    /// Half-dimension n.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// J = [[0, I_n], [-I_n, 0]].
    pub fn j_matrix(&self) -> Matrix {
        let d = self.dim();
        let mut j = Matrix::zero(self.l, d);
        for i in 0..self.n {
            j.set(i, self.n + i, 1);
            j.set(self.n + i, i, self.l - 1);
        }
        j
    }

    /// B(u, v) = u^T J v.
    pub fn form(&self, u: &[u64], v: &[u64]) -> u64 {
        assert_eq!(u.len(), self.dim());
        assert_eq!(v.len(), self.dim());
        let l = self.l;
        let mut acc = 0u64;
        for i in 0..self.n {
            let pos = fp::mulm(u[i], v[self.n + i], l);
            let neg = fp::mulm(u[self.n + i], v[i], l);
            acc = fp::addm(acc, fp::subm(pos, neg, l), l);
        }
        acc
    }

    /// The multiplier m with M^T J M = m J; `NotGSp` when the matrix does
    /// not scale the form (in particular when it is singular, where m = 0).
    pub fn multiplier(&self, m: &Matrix) -> Result<u64> {
        if m.dim() != self.dim() || m.modulus() != self.l {
            return Err(Error::NotGSp);
        }
        let j = self.j_matrix();
        let prod = m.transpose().mul(&j).mul(m);
        let mult = prod.get(0, self.n);
        if mult == 0 || prod != j.scalar_mul(mult) {
            return Err(Error::NotGSp);
        }
        Ok(mult)
    }

    /// Multiplier 1: the matrix preserves the form exactly.
    pub fn is_symplectic_matrix(&self, m: &Matrix) -> bool {
        self.multiplier(m) == Ok(1)
    }

    /// The transvection T(x) = x + lambda B(x, v) v, as the matrix
    /// I + lambda v (Jv)^T. Requires v != 0 and lambda != 0.
    pub fn make_transvection(&self, v: &[u64], lambda: u64) -> Result<Matrix> {
        assert_eq!(v.len(), self.dim());
        let l = self.l;
        let v: Vec<u64> = v.iter().map(|&x| x % l).collect();
        let lambda = lambda % l;
        if v.iter().all(|&x| x == 0) {
            return Err(Error::ZeroVector);
        }
        if lambda == 0 {
            return Err(Error::ZeroScalar);
        }
        let d = self.dim();
        // (Jv)_i = v_{n+i} for i < n, (Jv)_{n+i} = -v_i.
        let mut jv = vec![0u64; d];
        for i in 0..self.n {
            jv[i] = v[self.n + i];
            jv[self.n + i] = fp::subm(0, v[i], l);
        }
        let mut t = Matrix::identity(l, d);
        for i in 0..d {
            if v[i] == 0 {
                continue;
            }
            let row_factor = fp::mulm(lambda, v[i], l);
            for j in 0..d {
                let add = fp::mulm(row_factor, jv[j], l);
                t.set(i, j, fp::addm(t.get(i, j), add, l));
            }
        }
        Ok(t)
    }

    /// A symplectic transvection: multiplier 1, not the identity,
    /// rank(T - I) = 1, and (T - I)^2 = 0.
    pub fn is_transvection(&self, m: &Matrix) -> bool {
        if m.dim() != self.dim() || m.modulus() != self.l {
            return false;
        }
        if self.multiplier(m) != Ok(1) || m.is_identity() {
            return false;
        }
        let diff = m.sub(&Matrix::identity(self.l, self.dim()));
        diff.rank() == 1 && diff.mul(&diff) == Matrix::zero(self.l, self.dim())
    }
}

/// |Sp_{2n}(F_l)| = l^{n^2} * prod_{i=1}^{n} (l^{2i} - 1).
pub fn sp_order(n: usize, l: u64) -> BigInt {
    let lb = BigInt::from(l);
    let mut acc = lb.pow((n * n) as u32);
    for i in 1..=n {
        acc *= lb.pow(2 * i as u32) - 1;
    }
    acc
}

/// |GSp_{2n}(F_l)| = (l - 1) * |Sp_{2n}(F_l)|.
pub fn gsp_order(n: usize, l: u64) -> BigInt {
    sp_order(n, l) * (BigInt::from(l) - 1)
}

/// The primes for which the subgroup classification machinery is meant to
/// run: l prime, l >= 5, and l not dividing n.
pub fn admissible_prime(n: u64, l: u64) -> bool {
    fp::is_prime(l) && l >= 5 && !n.is_multiple_of(l)
}

/// What a set of group elements exhibits: a transvection, and an element
/// whose characteristic polynomial is irreducible while its matrix trace
/// is nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Criterion {
    pub has_transvection: bool,
    pub has_irreducible_nonzero_trace: bool,
}

/// Scan elements for the two criterion witnesses.
pub fn criterion_check(space: &SympSpace, elements: &[Matrix]) -> Criterion {
    let mut has_transvection = false;
    let mut has_irr = false;
    for m in elements {
        if !has_transvection && space.is_transvection(m) {
            has_transvection = true;
        }
        if !has_irr && m.trace() != 0 && fp::is_irreducible(&m.char_poly(), space.l()) {
            has_irr = true;
        }
        if has_transvection && has_irr {
            break;
        }
    }
    Criterion {
        has_transvection,
        has_irreducible_nonzero_trace: has_irr,
    }
}

/// A fully materialized subgroup of GSp: every element in discovery order
/// with its multiplier.
pub struct Closure {
    pub elements: Vec<Matrix>,
    pub multipliers: Vec<u64>,
}

impl Closure {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn multiplier_one_count(&self) -> u64 {
        self.multipliers.iter().filter(|&&m| m == 1).count() as u64
    }
}

/// Breadth-first closure of the generated group, starting from the
/// identity and right-multiplying by the generators in order. Generators
/// must lie in GSp (`NotGSp` otherwise); refuses with `CapExceeded` when
/// the group has more than cap elements. Multipliers are tracked by
/// bookkeeping (m(AB) = m(A) m(B)), not recomputed per element.
pub fn group_closure(space: &SympSpace, gens: &[Matrix], cap: u64) -> Result<Closure> {
    let gen_mults = gens
        .iter()
        .map(|g| space.multiplier(g))
        .collect::<Result<Vec<u64>>>()?;
    let identity = Matrix::identity(space.l(), space.dim());
    let mut seen: HashSet<Matrix> = HashSet::new();
    seen.insert(identity.clone());
    let mut elements = vec![identity];
    let mut multipliers = vec![1u64];
    let mut i = 0usize;
    while i < elements.len() {
        for (g, &gm) in gens.iter().zip(&gen_mults) {
            let next = elements[i].mul(g);
            if seen.contains(&next) {
                continue;
            }
            if elements.len() as u64 >= cap {
                return Err(Error::CapExceeded { cap });
            }
            seen.insert(next.clone());
            multipliers.push(fp::mulm(multipliers[i], gm, space.l()));
            elements.push(next);
        }
        i += 1;
    }
    Ok(Closure {
        elements,
        multipliers,
    })
}
