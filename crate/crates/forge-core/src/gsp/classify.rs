//! Classification of transvection-containing subgroups of GSp_{2n}(F_l):
//! either the group stabilizes a proper nonsingular subspace (reducible
//! case), or it permutes the blocks of a direct-sum decomposition into
//! nonsingular subspaces (imprimitive case), or its multiplier-one part is
//! all of Sp (full case). All searches are exhaustive over canonical
//! echelon-form subspace enumerations, so the returned witness is the
//! first one in a deterministic order.
//!
//! The three cases are checked in that order. A group that fits none of
//! them (possible for degenerate inputs: the trichotomy is only guaranteed
//! for transvection-containing subgroups) reports `ClassificationFailed`
//! rather than a wrong label.

use std::collections::HashSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::fp;
use crate::field::tower::rref;
use crate::gsp::{
    criterion_check, group_closure, sp_order, Criterion, Matrix, SympSpace,
};

/// How a transvection-containing subgroup sits inside GSp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Stabilizes a proper nonzero subspace on which the form is
    /// nondegenerate; the witness basis is in reduced echelon form.
    Reducible { subspace: Vec<Vec<u64>> },
    /// Permutes the blocks of a direct-sum decomposition into equal-
    /// dimensional nonsingular subspaces (at least two blocks).
    Imprimitive { blocks: Vec<Vec<Vec<u64>>> },
    /// The multiplier-one part is the full symplectic group.
    ContainsSp,
}

/// Classification plus everything the closure computation established.
#[derive(Clone, Debug)]
pub struct ClassifyReport {
    pub classification: Classification,
    /// Total number of group elements.
    pub order: u64,
    /// Number of elements with multiplier 1.
    pub multiplier_one: u64,
    /// |Sp_{2n}(F_l)| for comparison.
    pub expected_sp_order: BigInt,
    pub criterion: Criterion,
}

/// Iterate all k-dimensional subspaces of F_l^d as reduced-echelon bases,
/// in canonical order: pivot-column patterns lexicographically, then free
/// entries in counting order (first free position least significant).
pub fn subspaces(l: u64, d: usize, k: usize) -> impl Iterator<Item = Vec<Vec<u64>>> {
    assert!(k >= 1 && k <= d);
    // All k-combinations of 0..d in lex order.
    fn next_combination(comb: &mut [usize], d: usize) -> bool {
        let k = comb.len();
        for i in (0..k).rev() {
            if comb[i] != i + d - k {
                comb[i] += 1;
                for j in i + 1..k {
                    comb[j] = comb[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }
    let mut patterns: Vec<Vec<usize>> = Vec::new();
    let mut comb: Vec<usize> = (0..k).collect();
    loop {
        patterns.push(comb.clone());
        if !next_combination(&mut comb, d) {
            break;
        }
    }

    patterns.into_iter().flat_map(move |pivots| {
        // Free positions: (row, col) with col > pivots[row], col not a pivot.
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (row, &p) in pivots.iter().enumerate() {
            for col in p + 1..d {
                if !pivots.contains(&col) {
                    free.push((row, col));
                }
            }
        }
        let total = (l as u128).pow(free.len() as u32);
        (0..total).map(move |key| {
            let mut basis: Vec<Vec<u64>> = pivots
                .iter()
                .map(|&p| {
                    let mut row = vec![0u64; d];
                    row[p] = 1;
                    row
                })
                .collect();
            let mut rem = key;
            for &(row, col) in &free {
                basis[row][col] = (rem % l as u128) as u64;
                rem /= l as u128;
            }
            basis
        })
    })
}

/// Canonical key of the span of some vectors: reduced echelon basis rows.
pub(crate) fn canonical_span(l: u64, vectors: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = vectors.to_vec();
    let pivots = rref(&mut m, l);
    m.truncate(pivots.len());
    m
}

/// Whether v lies in the span of a reduced-echelon basis.
fn in_span(l: u64, basis: &[Vec<u64>], pivots: &[usize], v: &[u64]) -> bool {
    let mut v = v.to_vec();
    for (row, &p) in pivots.iter().enumerate() {
        if v[p] != 0 {
            let f = v[p];
            for (x, b) in v.iter_mut().zip(&basis[row]) {
                *x = fp::subm(*x, fp::mulm(f, *b, l), l);
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

fn pivot_cols(basis: &[Vec<u64>]) -> Vec<usize> {
    basis
        .iter()
        .map(|row| row.iter().position(|&x| x == 1).expect("echelon row"))
        .collect()
}

/// Whether the form restricted to the subspace is nondegenerate.
pub fn is_nonsingular_subspace(space: &SympSpace, basis: &[Vec<u64>]) -> bool {
    let k = basis.len();
    let mut gram = Matrix::zero(space.l(), k);
    for i in 0..k {
        for j in 0..k {
            gram.set(i, j, space.form(&basis[i], &basis[j]));
        }
    }
    gram.det() != 0
}

/// Whether every generator maps the subspace into itself.
pub(crate) fn is_invariant(l: u64, basis: &[Vec<u64>], gens: &[Matrix]) -> bool {
    let pivots = pivot_cols(basis);
    gens.iter().all(|g| {
        basis
            .iter()
            .all(|b| in_span(l, basis, &pivots, &g.apply(b)))
    })
}

/// Orbit of a subspace under the generators, as canonical bases in
/// discovery order; stops early (returning None) once the orbit exceeds
/// max_size.
fn subspace_orbit(
    l: u64,
    start: &[Vec<u64>],
    gens: &[Matrix],
    max_size: usize,
) -> Option<Vec<Vec<Vec<u64>>>> {
    let start = canonical_span(l, start);
    let mut seen: HashSet<Vec<Vec<u64>>> = HashSet::new();
    seen.insert(start.clone());
    let mut orbit = vec![start];
    let mut i = 0;
    while i < orbit.len() {
        for g in gens {
            let image: Vec<Vec<u64>> = orbit[i].iter().map(|b| g.apply(b)).collect();
            let image = canonical_span(l, &image);
            if seen.insert(image.clone()) {
                if orbit.len() >= max_size {
                    return None;
                }
                orbit.push(image);
            }
        }
        i += 1;
    }
    Some(orbit)
}

/// Classify the subgroup of GSp_{2n}(F_l) generated by `gens`.
///
/// Materializes the closure (respecting `cap`), requires a transvection
/// (`NoTransvection` otherwise), then tests in order: a proper invariant
/// nonsingular subspace (necessarily even-dimensional), a permuted
/// direct-sum decomposition into equal-dimensional nonsingular blocks, and
/// finally whether the multiplier-one part has full Sp order. Reports
/// `ClassificationFailed` when none of the three cases holds.
pub fn classify_subgroup(
    space: &SympSpace,
    gens: &[Matrix],
    cap: u64,
) -> Result<ClassifyReport> {
    let closure = group_closure(space, gens, cap)?;
    let criterion = criterion_check(space, &closure.elements);
    if !criterion.has_transvection {
        return Err(Error::NoTransvection);
    }
    let l = space.l();
    let d = space.dim();
    let n = space.n();
    let report = |classification: Classification, closure: &super::Closure| ClassifyReport {
        classification,
        order: closure.order(),
        multiplier_one: closure.multiplier_one_count(),
        expected_sp_order: sp_order(n, l),
        criterion,
    };

    // Case 1: a proper invariant subspace on which the form is
    // nondegenerate. Nonsingular subspaces are even-dimensional, so only
    // even dimensions are scanned.
    for k in (2..d).step_by(2) {
        for basis in subspaces(l, d, k) {
            if is_nonsingular_subspace(space, &basis) && is_invariant(l, &basis, gens) {
                return Ok(report(Classification::Reducible { subspace: basis }, &closure));
            }
        }
    }

    // Case 2: a permuted decomposition into h >= 2 nonsingular blocks of
    // equal dimension 2m (so m divides n). Seed orbits from canonical
    // block enumeration; after case 1 failed, any orbit is size >= 2.
    for m in 1..=n / 2 {
        if !n.is_multiple_of(m) {
            continue;
        }
        let h = n / m;
        let block_dim = 2 * m;
        let mut tried: HashSet<Vec<Vec<u64>>> = HashSet::new();
        for basis in subspaces(l, d, block_dim) {
            if !is_nonsingular_subspace(space, &basis) {
                continue;
            }
            if !tried.insert(basis.clone()) {
                continue;
            }
            let Some(orbit) = subspace_orbit(l, &basis, gens, h) else {
                continue;
            };
            for b in &orbit {
                tried.insert(b.clone());
            }
            if orbit.len() != h {
                continue;
            }
            // Direct sum: stacked bases have full rank, and every block
            // must be nonsingular (automatic for similitude images).
            let stacked: Vec<Vec<u64>> = orbit.iter().flatten().cloned().collect();
            let mut copy = stacked.clone();
            if rref(&mut copy, l).len() != d {
                continue;
            }
            debug_assert!(orbit
                .iter()
                .all(|b| is_nonsingular_subspace(space, b)));
            return Ok(report(Classification::Imprimitive { blocks: orbit }, &closure));
        }
    }

    // Case 3: multiplier-one part is all of Sp.
    if BigInt::from(closure.multiplier_one_count()) == sp_order(n, l) {
        return Ok(report(Classification::ContainsSp, &closure));
    }

    Err(Error::ClassificationFailed)
}
