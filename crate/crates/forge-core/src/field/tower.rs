//! Extension towers F_{q^n} / F_q realized inside a single quotient ring.
//!
//! The big field F_{p^m} already contains every subfield F_{p^s} with s | m;
//! a `Tower` pins one of them down concretely. The subfield copy is located
//! deterministically: the fixed set of the s-fold Frobenius is computed as
//! the kernel of a small F_p-linear map, and the first kernel element (in
//! canonical coefficient order) that is a root of the canonical degree-s
//! modulus becomes the image of the subfield's generator. Projection back to
//! the canonical F_{p^s} is a linear solve. This keeps relative traces and
//! minimal polynomials in canonical coordinates without nested quotients.

use crate::error::{Error, Result};
use crate::field::{fp, FieldElement, FiniteField, PrimePower};
use crate::poly::{MonicPoly, Poly};

/// F_p-linear-algebra helpers on row-major Vec<Vec<u64>> matrices.
fn mat_vec(m: &[Vec<u64>], v: &[u64], p: u64) -> Vec<u64> {
    m.iter()
        .map(|row| {
            let mut acc: u128 = 0;
            for (a, b) in row.iter().zip(v) {
                acc += (*a as u128) * (*b as u128);
            }
            (acc % p as u128) as u64
        })
        .collect()
}

/// Reduced row echelon form in place; returns pivot column indices.
pub(crate) fn rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(pr) = (row..rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = fp::invm(m[row][col], p).expect("nonzero pivot");
        for c in col..cols {
            m[row][c] = fp::mulm(m[row][c], inv, p);
        }
        for i in 0..rows {
            if i != row && m[i][col] != 0 {
                let f = m[i][col];
                for c in col..cols {
                    let t = fp::mulm(f, m[row][c], p);
                    m[i][c] = fp::subm(m[i][c], t, p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Deterministic nullspace basis of the row-major matrix m over F_p.
pub(crate) fn nullspace(mut m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    if m.is_empty() {
        return Vec::new();
    }
    let cols = m[0].len();
    let pivots = rref(&mut m, p);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            // pivot row: x_pc + sum_{c free} m[row][c] x_c = 0
            v[pc] = fp::subm(0, m[row][free], p);
        }
        basis.push(v);
    }
    basis
}

/// A concrete subfield F_q inside a big field F_{q^n}.
pub struct Tower {
    big: FiniteField,
    small: FiniteField,
    /// Relative degree n = [big : small].
    n: u32,
    /// Image in `big` of the canonical generator of `small`.
    theta: FieldElement,
    /// Column j = big-field coordinates of theta^j, j < s.
    basis_cols: Vec<Vec<u64>>,
}

impl Tower {
    /// Views the subfield of order q inside `big`. Errors with BadTower when
    /// q is not p^s for the same characteristic with s dividing r(big).
    pub fn new(big: FiniteField, q: u64) -> Result<Self> {
        let pp = PrimePower::new(q).map_err(|_| {
            Error::BadTower(format!("{q} is not a prime power"))
        })?;
        let p = big.p();
        let m = big.r();
        if pp.p() != p || !m.is_multiple_of(pp.r()) {
            return Err(Error::BadTower(format!(
                "{} is not a subfield order of {}",
                q, big
            )));
        }
        let s = pp.r();
        let n = m / s;
        let small = FiniteField::new(p, s)?;
        let theta = if s == 1 {
            big.one()
        } else {
            find_embedding(&big, &small)?
        };
        let mut basis_cols = Vec::with_capacity(s as usize);
        let mut pow = big.one();
        for _ in 0..s {
            basis_cols.push(pow.coeffs().to_vec());
            pow = pow.try_mul(&theta).expect("same field");
        }
        Ok(Tower {
            big,
            small,
            n,
            theta,
            basis_cols,
        })
    }

    pub fn big(&self) -> &FiniteField {
        &self.big
    }

    /// The canonical field of order q this tower projects into.
    pub fn small(&self) -> &FiniteField {
        &self.small
    }

    /// Relative degree [big : small].
    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Image of the subfield generator inside the big field.
    pub fn embedded_generator(&self) -> &FieldElement {
        &self.theta
    }

    /// Carry an element of the canonical small field into the big field.
    pub fn embed(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field() != &self.small {
            return Err(Error::FieldMismatch);
        }
        let p = self.big.p();
        let m = self.big.r() as usize;
        let mut acc = vec![0u64; m];
        for (j, &b) in x.coeffs().iter().enumerate() {
            if b == 0 {
                continue;
            }
            for i in 0..m {
                let t = fp::mulm(b, self.basis_cols[j][i], p);
                acc[i] = fp::addm(acc[i], t, p);
            }
        }
        self.big.element_from_coeffs(&acc)
    }

    /// Express a big-field element in canonical small-field coordinates.
    /// Errors with BadTower if it does not lie in the subfield copy.
    pub fn project(&self, y: &FieldElement) -> Result<FieldElement> {
        if y.field() != &self.big {
            return Err(Error::FieldMismatch);
        }
        let p = self.big.p();
        let m = self.big.r() as usize;
        let s = self.small.r() as usize;
        // Solve [basis_cols | y] by Gaussian elimination.
        let mut aug: Vec<Vec<u64>> = (0..m)
            .map(|i| {
                let mut row = Vec::with_capacity(s + 1);
                for col in self.basis_cols.iter() {
                    row.push(col[i]);
                }
                row.push(y.coeffs()[i]);
                row
            })
            .collect();
        let pivots = rref(&mut aug, p);
        if pivots.contains(&s) {
            return Err(Error::BadTower(
                "element does not lie in the subfield".into(),
            ));
        }
        let mut out = vec![0u64; s];
        for (row, &pc) in pivots.iter().enumerate() {
            out[pc] = aug[row][s];
        }
        self.small.element_from_coeffs(&out)
    }

    /// x^{q^k} computed by k-fold q-power maps (no big exponents).
    pub fn frobenius_power(&self, x: &FieldElement, k: u32) -> FieldElement {
        let q = self.small.order();
        let mut out = x.clone();
        for _ in 0..k {
            out = out.pow(q);
        }
        out
    }

    /// Trace down to the canonical subfield: sum of x^{q^i}, i < n.
    pub fn relative_trace(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field() != &self.big {
            return Err(Error::FieldMismatch);
        }
        let mut sum = x.clone();
        let mut conj = x.clone();
        let q = self.small.order();
        for _ in 1..self.n {
            conj = conj.pow(q);
            sum = sum.try_add(&conj)?;
        }
        self.project(&sum)
    }

    /// The Frobenius orbit of x under y -> y^q, starting at x.
    pub fn conjugates(&self, x: &FieldElement) -> Vec<FieldElement> {
        let q = self.small.order();
        let mut out = vec![x.clone()];
        let mut cur = x.pow(q);
        while &cur != x {
            out.push(cur.clone());
            cur = cur.pow(q);
        }
        out
    }

    /// Minimal polynomial of x over the canonical subfield: the product of
    /// (X - c) over the distinct conjugates c of x. Monic of degree
    /// dividing n, with coefficients projected into the canonical field.
    pub fn minimal_polynomial(&self, x: &FieldElement) -> Result<MonicPoly> {
        if x.field() != &self.big {
            return Err(Error::FieldMismatch);
        }
        let conj = self.conjugates(x);
        debug_assert_eq!(self.n as usize % conj.len(), 0);
        let mut prod = Poly::one(&self.big);
        for c in &conj {
            let factor = Poly::from_coeffs(&self.big, vec![c.negate(), self.big.one()]);
            prod = prod.mul(&factor);
        }
        let mut small_coeffs = Vec::with_capacity(conj.len());
        for i in 0..conj.len() {
            small_coeffs.push(self.project(&prod.coeff(i))?);
        }
        debug_assert!(prod.coeff(conj.len()).is_one());
        Ok(MonicPoly::from_lower_coeffs(&self.small, small_coeffs))
    }

    /// Matrix (rows over F_p) of the F_p-linear map x -> x^{q^k} on the big
    /// field, for bulk sweeps.
    pub fn frobenius_matrix(&self, k: u32) -> Vec<Vec<u64>> {
        let m = self.big.r() as usize;
        let g = self.frobenius_power(&self.big.adjoined_root(), k);
        // columns: (x^j)^{q^k} = g^j
        let mut cols = Vec::with_capacity(m);
        let mut pow = self.big.one();
        for _ in 0..m {
            cols.push(pow.coeffs().to_vec());
            pow = pow.try_mul(&g).expect("same field");
        }
        (0..m)
            .map(|i| (0..m).map(|j| cols[j][i]).collect())
            .collect()
    }

    /// Matrix of the relative-trace map as an F_p-linear endomorphism of the
    /// big field (the image lies in the subfield copy).
    pub fn trace_matrix(&self) -> Vec<Vec<u64>> {
        let p = self.big.p();
        let m = self.big.r() as usize;
        let mut acc = vec![vec![0u64; m]; m];
        for k in 0..self.n {
            let fm = self.frobenius_matrix(k);
            for i in 0..m {
                for j in 0..m {
                    acc[i][j] = fp::addm(acc[i][j], fm[i][j], p);
                }
            }
        }
        acc
    }

    /// Apply a precomputed matrix (from `frobenius_matrix`/`trace_matrix`)
    /// to an element's coefficient vector.
    pub fn apply_matrix(&self, m: &[Vec<u64>], x: &FieldElement) -> Vec<u64> {
        mat_vec(m, x.coeffs(), self.big.p())
    }
}

/// Root of `small`'s modulus inside `big`, found by scanning the fixed field
/// of the s-fold Frobenius (kernel of x -> x^{p^s} - x) in canonical order.
fn find_embedding(big: &FiniteField, small: &FiniteField) -> Result<FieldElement> {
    let p = big.p();
    let m = big.r() as usize;
    let s = small.r();
    // Matrix of x -> x^{p^s} - x.
    let ps = (p as u128).pow(s);
    let g = big.adjoined_root().pow(ps);
    let mut cols = Vec::with_capacity(m);
    let mut pow = big.one();
    for j in 0..m {
        let mut col = pow.coeffs().to_vec();
        col[j] = fp::subm(col[j], 1, p); // subtract identity
        cols.push(col);
        pow = pow.try_mul(&g).expect("same field");
    }
    let mat: Vec<Vec<u64>> = (0..m)
        .map(|i| (0..m).map(|j| cols[j][i]).collect())
        .collect();
    let kernel = nullspace(mat, p);
    debug_assert_eq!(kernel.len(), s as usize, "fixed field has p^s elements");
    // Enumerate kernel combinations in integer counting order and return the
    // first root of small's modulus.
    let mut full_modulus = small.modulus().to_vec();
    full_modulus.push(1);
    let count = (p as u128).pow(kernel.len() as u32);
    for idx in 0..count {
        let mut digits = idx;
        let mut coord = vec![0u64; m];
        for basis_vec in &kernel {
            let d = (digits % p as u128) as u64;
            digits /= p as u128;
            if d != 0 {
                for (ci, &bi) in coord.iter_mut().zip(basis_vec) {
                    *ci = fp::addm(*ci, fp::mulm(d, bi, p), p);
                }
            }
        }
        let cand = big.element_from_coeffs(&coord)?;
        // Evaluate the modulus at cand (coefficients are prime-field constants).
        let mut val = big.zero();
        for &c in full_modulus.iter().rev() {
            val = val.try_mul(&cand)?.try_add(&big.from_int(c))?;
        }
        if val.is_zero() {
            return Ok(cand);
        }
    }
    Err(Error::BadTower(
        "no embedding root found (modulus does not split?)".into(),
    ))
}
