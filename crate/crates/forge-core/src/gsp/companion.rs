//! Realizing an irreducible palindromic polynomial as a symplectic matrix:
//! take its companion matrix C, solve C^T A C = A for an alternating
//! nondegenerate form A (the solution space is nontrivial exactly because
//! the polynomial is palindromic), and change basis so A becomes the
//! standard form J. The result is conjugate to C, hence has the same
//! characteristic polynomial, and lies in Sp.

use crate::error::{Error, Result};
use crate::field::fp;
use crate::field::tower::nullspace;
use crate::gsp::{Matrix, SympSpace};
use crate::poly::{is_irreducible, is_symplectic, MonicPoly};

/// Index pairs (i, j) with i < j in lex order; coordinates for alternating
/// matrices with basis E_ij - E_ji.
fn pair_index(d: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(d * (d - 1) / 2);
    for i in 0..d {
        for j in i + 1..d {
            out.push((i, j));
        }
    }
    out
}

/// The alternating matrix with upper-triangle coordinates x (lex pair
/// order): A_ij = x_(i,j), A_ji = -x_(i,j), zero diagonal.
fn alternating_from_coords(l: u64, d: usize, x: &[u64]) -> Matrix {
    let pairs = pair_index(d);
    assert_eq!(x.len(), pairs.len());
    let mut a = Matrix::zero(l, d);
    for (&(i, j), &v) in pairs.iter().zip(x) {
        a.set(i, j, v);
        a.set(j, i, fp::subm(0, v, l));
    }
    a
}

/// u^T A v for an explicit form matrix A.
fn form_value(a: &Matrix, u: &[u64], v: &[u64]) -> u64 {
    let l = a.modulus();
    let av = a.apply(v);
    let mut acc = 0u64;
    for (x, y) in u.iter().zip(&av) {
        acc = fp::addm(acc, fp::mulm(*x, *y, l), l);
    }
    acc
}

/// A symplectic basis for a nondegenerate alternating form A: columns
/// u_1..u_n, w_1..w_n with A(u_i, w_j) = delta_ij and all other pairings
/// zero, found by symplectic Gram-Schmidt over the standard basis.
fn symplectic_basis(a: &Matrix) -> Result<Matrix> {
    let l = a.modulus();
    let d = a.dim();
    let n = d / 2;
    let mut pool: Vec<Vec<u64>> = (0..d)
        .map(|i| (0..d).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut us: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut ws: Vec<Vec<u64>> = Vec::with_capacity(n);
    while us.len() < n {
        // First nonzero vector left in the pool.
        let u = loop {
            if pool.is_empty() {
                return Err(Error::NoInvariantForm);
            }
            let cand = pool.remove(0);
            if cand.iter().any(|&x| x != 0) {
                break cand;
            }
        };
        // A partner pairing nontrivially with u; exists by nondegeneracy.
        let Some(pos) = pool.iter().position(|w| form_value(a, &u, w) != 0) else {
            return Err(Error::NoInvariantForm);
        };
        let mut w = pool.remove(pos);
        let scale = fp::invm(form_value(a, &u, &w), l).expect("nonzero pairing");
        for x in w.iter_mut() {
            *x = fp::mulm(*x, scale, l);
        }
        // Make the remaining pool A-orthogonal to both u and w:
        // v <- v - A(v, w) u + A(v, u) w.
        for v in pool.iter_mut() {
            let cu = form_value(a, v, &w);
            let cw = form_value(a, v, &u);
            for k in 0..d {
                let mut x = v[k];
                x = fp::subm(x, fp::mulm(cu, u[k], l), l);
                x = fp::addm(x, fp::mulm(cw, w[k], l), l);
                v[k] = x;
            }
        }
        us.push(u);
        ws.push(w);
    }
    // Basis-change matrix with columns u_1..u_n, w_1..w_n.
    let mut s = Matrix::zero(l, d);
    for (col, vec) in us.iter().chain(ws.iter()).enumerate() {
        for (row, &val) in vec.iter().enumerate() {
            s.set(row, col, val);
        }
    }
    Ok(s)
}

/// A matrix in Sp_2n(F_l) (standard form) with characteristic polynomial f,
/// for f monic irreducible palindromic of even degree 2n over a prime
/// field: the companion matrix rewritten in a symplectic basis of its
/// invariant alternating form.
///
/// Errors: `BadHypothesis` for non-prime coefficient fields, odd degree,
/// or non-palindromic input; `NotIrreducible` for reducible input;
/// `NoInvariantForm` if no invariant nondegenerate alternating form exists
/// (which cannot happen for valid input).
pub fn symplectic_companion(f: &MonicPoly) -> Result<Matrix> {
    let field = f.field();
    if field.r() != 1 {
        return Err(Error::BadHypothesis(
            "matrix realizations are over prime fields only".into(),
        ));
    }
    let l = field.p();
    let d = f.degree();
    if !d.is_multiple_of(2) || d == 0 {
        return Err(Error::BadHypothesis(format!(
            "palindromic polynomials have even degree, got {d}"
        )));
    }
    if !is_symplectic(f) {
        return Err(Error::BadHypothesis(
            "polynomial is not palindromic with constant term 1".into(),
        ));
    }
    if !is_irreducible(f) {
        return Err(Error::NotIrreducible);
    }
    let n = d / 2;
    let space = SympSpace::new(l, n)?;

    // Companion matrix: C e_i = e_{i+1}, C e_{d-1} = -sum a_i e_i.
    let mut c = Matrix::zero(l, d);
    for i in 1..d {
        c.set(i, i - 1, 1);
    }
    for (i, coef) in f.lower_coeffs().iter().enumerate() {
        c.set(i, d - 1, fp::subm(0, coef.coeffs()[0], l));
    }

    // Solve C^T A C = A over alternating matrices: one linear equation per
    // upper-triangle position (u, v), one unknown per basis form
    // E_ij - E_ji. [C^T E_ij C]_{uv} = C[i][u] C[j][v].
    let pairs = pair_index(d);
    let mut system: Vec<Vec<u64>> = Vec::with_capacity(pairs.len());
    for &(u, v) in &pairs {
        let mut row = Vec::with_capacity(pairs.len());
        for &(i, j) in &pairs {
            let plus = fp::mulm(c.get(i, u), c.get(j, v), l);
            let minus = fp::mulm(c.get(j, u), c.get(i, v), l);
            let mut coef = fp::subm(plus, minus, l);
            if (i, j) == (u, v) {
                coef = fp::subm(coef, 1, l);
            }
            row.push(coef);
        }
        system.push(row);
    }
    let kernel = nullspace(system, l);
    if kernel.is_empty() {
        return Err(Error::NoInvariantForm);
    }

    // Scan kernel combinations in counting order for a nondegenerate form.
    // (For irreducible palindromic input every nonzero combination works,
    // so this finds the first immediately; the loop is the safety net.)
    let k = kernel.len();
    let total = (l as u128).checked_pow(k as u32).expect("small kernel");
    let mut a = None;
    for key in 1..total {
        let mut coords = vec![0u64; pairs.len()];
        let mut rem = key;
        for basis_vec in &kernel {
            let coef = (rem % l as u128) as u64;
            rem /= l as u128;
            if coef == 0 {
                continue;
            }
            for (slot, &b) in coords.iter_mut().zip(basis_vec) {
                *slot = fp::addm(*slot, fp::mulm(coef, b, l), l);
            }
        }
        let cand = alternating_from_coords(l, d, &coords);
        if cand.det() != 0 {
            a = Some(cand);
            break;
        }
    }
    let a = a.ok_or(Error::NoInvariantForm)?;
    debug_assert_eq!(c.transpose().mul(&a).mul(&c), a, "form is C-invariant");

    let s = symplectic_basis(&a)?;
    debug_assert_eq!(
        s.transpose().mul(&a).mul(&s),
        space.j_matrix(),
        "basis change carries A to J"
    );
    let m = s
        .inverse()
        .ok_or(Error::NoInvariantForm)?
        .mul(&c)
        .mul(&s);
    assert_eq!(space.multiplier(&m), Ok(1), "result preserves the form");
    let expect: Vec<u64> = f
        .lower_coeffs()
        .iter()
        .map(|x| x.coeffs()[0])
        .chain([1])
        .collect();
    assert_eq!(m.char_poly(), expect, "conjugation preserves char poly");
    Ok(m)
}
