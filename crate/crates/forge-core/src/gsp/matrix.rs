//! Dense square matrices over a prime field F_l, sized for exhaustive
//! group computations in low dimension: entries are reduced u64 residues
//! in a row-major vector, and equality/hashing work entrywise so matrices
//! can key closure sets directly.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::fp;

/// Square matrix over F_l (l prime), row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    l: u64,
    dim: usize,
    e: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix mod {} [", self.l)?;
        for i in 0..self.dim {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zero(l: u64, dim: usize) -> Self {
        Matrix {
            l,
            dim,
            e: vec![0; dim * dim],
        }
    }

    pub fn identity(l: u64, dim: usize) -> Self {
        let mut m = Self::zero(l, dim);
        for i in 0..dim {
            m.e[i * dim + i] = 1 % l;
        }
        m
    }

    /// Build from rows; every row must have the same length as the row
    /// count, and entries are reduced mod l.
    pub fn from_rows(l: u64, rows: &[Vec<u64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::BadHypothesis(format!(
                "matrix rows must form a {dim}x{dim} square"
            )));
        }
        let e = rows.iter().flatten().map(|&v| v % l).collect();
        Ok(Matrix { l, dim, e })
    }

    pub fn modulus(&self) -> u64 {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.e[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.e[i * self.dim + j] = v % self.l;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.e[i * self.dim..(i + 1) * self.dim]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[u64] {
        &self.e
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.l, self.dim)
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.l, other.l, "modulus mismatch");
        assert_eq!(self.dim, other.dim, "dimension mismatch");
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let d = self.dim;
        let l = self.l as u128;
        let mut out = vec![0u64; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.e[i * d + k] as u128;
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    let cell = &mut out[i * d + j];
                    *cell = ((*cell as u128 + a * other.e[k * d + j] as u128) % l) as u64;
                }
            }
        }
        Matrix {
            l: self.l,
            dim: d,
            e: out,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let e = self
            .e
            .iter()
            .zip(&other.e)
            .map(|(&a, &b)| fp::addm(a, b, self.l))
            .collect();
        Matrix {
            l: self.l,
            dim: self.dim,
            e,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let e = self
            .e
            .iter()
            .zip(&other.e)
            .map(|(&a, &b)| fp::subm(a, b, self.l))
            .collect();
        Matrix {
            l: self.l,
            dim: self.dim,
            e,
        }
    }

    pub fn scalar_mul(&self, s: u64) -> Self {
        let e = self.e.iter().map(|&a| fp::mulm(a, s, self.l)).collect();
        Matrix {
            l: self.l,
            dim: self.dim,
            e,
        }
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut e = vec![0u64; d * d];
        for i in 0..d {
            for j in 0..d {
                e[j * d + i] = self.e[i * d + j];
            }
        }
        Matrix {
            l: self.l,
            dim: d,
            e,
        }
    }

    /// Matrix-vector product M v.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let l = self.l as u128;
        (0..self.dim)
            .map(|i| {
                let mut acc = 0u128;
                for (a, b) in self.row(i).iter().zip(v) {
                    acc += *a as u128 * *b as u128;
                }
                (acc % l) as u64
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u64>> = (0..self.dim).map(|i| self.row(i).to_vec()).collect();
        crate::field::tower::rref(&mut rows, self.l).len()
    }

    pub fn det(&self) -> u64 {
        let d = self.dim;
        let l = self.l;
        let mut m: Vec<Vec<u64>> = (0..d).map(|i| self.row(i).to_vec()).collect();
        let mut det = 1u64;
        for col in 0..d {
            let Some(pr) = (col..d).find(|&i| m[i][col] != 0) else {
                return 0;
            };
            if pr != col {
                m.swap(col, pr);
                det = fp::subm(0, det, l);
            }
            let pivot = m[col][col];
            det = fp::mulm(det, pivot, l);
            let inv = fp::invm(pivot, l).expect("nonzero pivot");
            for i in col + 1..d {
                if m[i][col] == 0 {
                    continue;
                }
                let f = fp::mulm(m[i][col], inv, l);
                for j in col..d {
                    let t = fp::mulm(f, m[col][j], l);
                    m[i][j] = fp::subm(m[i][j], t, l);
                }
            }
        }
        det
    }

    /// Inverse via Gauss-Jordan; None when singular.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.dim;
        let l = self.l;
        let mut m: Vec<Vec<u64>> = (0..d)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..d).map(|j| u64::from(i == j)));
                row
            })
            .collect();
        let pivots = crate::field::tower::rref(&mut m, l);
        if pivots.len() < d || pivots[d - 1] >= d {
            return None;
        }
        let e = m.iter().flat_map(|row| row[d..].to_vec()).collect();
        Some(Matrix { l, dim: d, e })
    }

    pub fn trace(&self) -> u64 {
        let mut acc = 0u64;
        for i in 0..self.dim {
            acc = fp::addm(acc, self.e[i * self.dim + i], self.l);
        }
        acc
    }

    /// Characteristic polynomial det(xI - M) as coefficients c_0..c_dim
    /// (c_dim = 1): similarity reduction to upper Hessenberg form, then the
    /// leading-minor recurrence.
    pub fn char_poly(&self) -> Vec<u64> {
        let d = self.dim;
        let l = self.l;
        if d == 0 {
            return vec![1];
        }
        // Hessenberg reduction by similarity (paired row/column operations).
        let mut h: Vec<Vec<u64>> = (0..d).map(|i| self.row(i).to_vec()).collect();
        for col in 0..d.saturating_sub(2) {
            // Want zeros below h[col+1][col].
            let Some(pr) = (col + 1..d).find(|&i| h[i][col] != 0) else {
                continue;
            };
            if pr != col + 1 {
                h.swap(pr, col + 1);
                for row in h.iter_mut() {
                    row.swap(pr, col + 1);
                }
            }
            let inv = fp::invm(h[col + 1][col], l).expect("nonzero pivot");
            for i in col + 2..d {
                if h[i][col] == 0 {
                    continue;
                }
                let f = fp::mulm(h[i][col], inv, l);
                // row_i -= f * row_{col+1}
                for j in 0..d {
                    let t = fp::mulm(f, h[col + 1][j], l);
                    h[i][j] = fp::subm(h[i][j], t, l);
                }
                // col_{col+1} += f * col_i  (inverse transform)
                for rowv in h.iter_mut() {
                    let t = fp::mulm(f, rowv[i], l);
                    rowv[col + 1] = fp::addm(rowv[col + 1], t, l);
                }
            }
        }
        // p_0 = 1; p_k = (x - h[k-1][k-1]) p_{k-1}
        //              - sum_{m<k} h[m-1][k-1] (prod subdiag) p_{m-1}.
        let mut polys: Vec<Vec<u64>> = Vec::with_capacity(d + 1);
        polys.push(vec![1]);
        for k in 1..=d {
            let mut pk = vec![0u64; k + 1];
            // (x - h_kk) * p_{k-1}
            let hkk = h[k - 1][k - 1];
            for (i, &c) in polys[k - 1].iter().enumerate() {
                pk[i + 1] = fp::addm(pk[i + 1], c, l);
                pk[i] = fp::subm(pk[i], fp::mulm(hkk, c, l), l);
            }
            // correction terms with products of subdiagonal entries
            let mut prod = 1u64;
            for m in (1..k).rev() {
                // prod = h[m][m-1] * h[m+1][m] * ... * h[k-1][k-2]
                prod = fp::mulm(prod, h[m][m - 1], l);
                if prod == 0 {
                    break;
                }
                let coef = fp::mulm(h[m - 1][k - 1], prod, l);
                if coef == 0 {
                    continue;
                }
                for (i, &c) in polys[m - 1].iter().enumerate() {
                    pk[i] = fp::subm(pk[i], fp::mulm(coef, c, l), l);
                }
            }
            polys.push(pk);
        }
        polys.pop().expect("nonempty")
    }
}
