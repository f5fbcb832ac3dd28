//! Raw arithmetic over the prime field F_p and over F_p[x].
//!
//! Polynomials are dense coefficient vectors, constant term first, with no
//! trailing zeros (the zero polynomial is the empty vector). These helpers
//! back both the canonical-modulus search and the quotient-ring arithmetic
//! of extension fields; they deliberately know nothing about the wrapper
//! types in the rest of the crate.

use crate::error::{Error, Result};

#[inline]
pub fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powm(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulm(acc, base, p);
        }
        base = mulm(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse in F_p for prime p.
pub fn invm(a: u64, p: u64) -> Result<u64> {
    if a.is_multiple_of(p) {
        return Err(Error::DivisionByZero);
    }
    Ok(powm(a, p - 2, p))
}

/// Deterministic Miller–Rabin, exact for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest integer m with m^r <= q.
fn integer_root(q: u64, r: u32) -> u64 {
    if r == 1 {
        return q;
    }
    let mut m = (q as f64).powf(1.0 / r as f64).round() as u64;
    // Float seed, exact fix-up.
    while m > 1 && checked_pow(m, r).is_none_or(|v| v > q as u128) {
        m -= 1;
    }
    while checked_pow(m + 1, r).is_some_and(|v| v <= q as u128) {
        m += 1;
    }
    m
}

fn checked_pow(base: u64, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc)
}

/// A validated prime power q = p^r with q <= 2^63.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u64,
    r: u32,
}

impl PrimePower {
    pub fn from_parts(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::NotPrimePower(1));
        }
        let q = checked_pow(p, r).ok_or(Error::Overflow { p, r })?;
        if q > 1u128 << 63 {
            return Err(Error::Overflow { p, r });
        }
        Ok(PrimePower { p, r })
    }

    /// Factor q as p^r; errors when q is not a prime power in range.
    pub fn new(q: u64) -> Result<Self> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        for r in (1..=63u32).rev() {
            let root = integer_root(q, r);
            if root >= 2 && checked_pow(root, r) == Some(q as u128) && is_prime(root) {
                return PrimePower::from_parts(root, r);
            }
        }
        Err(Error::NotPrimePower(q))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn value(&self) -> u128 {
        checked_pow(self.p, self.r).expect("validated at construction")
    }
}

// ---------------------------------------------------------------------------
// F_p[x] on raw coefficient vectors.
// ---------------------------------------------------------------------------

pub fn trim(c: &mut Vec<u64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

/// Degree convention: zero polynomial has degree None.
pub fn deg(c: &[u64]) -> Option<usize> {
    if c.is_empty() {
        None
    } else {
        Some(c.len() - 1)
    }
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = addm(x, y, p);
    }
    trim(&mut out);
    out
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = subm(x, y, p);
    }
    trim(&mut out);
    out
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

pub fn scalar_mul(a: &[u64], s: u64, p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&x| mulm(x, s, p)).collect();
    trim(&mut out);
    out
}

/// Remainder of a modulo b (b nonzero). Works for arbitrary leading
/// coefficients by scaling with the inverse of b's lead.
pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = invm(b[db], p).expect("nonzero lead");
    while r.len() > db {
        let dr = r.len() - 1;
        let coef = mulm(r[dr], lead_inv, p);
        if coef != 0 {
            let shift = dr - db;
            for (j, &bj) in b.iter().enumerate() {
                let t = mulm(coef, bj, p);
                r[shift + j] = subm(r[shift + j], t, p);
            }
        }
        r.pop();
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Monic gcd of a and b.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        if lead != 1 {
            let s = invm(lead, p).expect("nonzero lead");
            x = scalar_mul(&x, s, p);
        }
    }
    x
}

/// base^exp mod m, with m of degree >= 1.
pub fn powmod(base: &[u64], mut exp: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        exp >>= 1;
    }
    acc
}

/// Extended-Euclid inverse of a modulo m.
pub fn invmod(a: &[u64], m: &[u64], p: u64) -> Result<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = rem(a, m, p);
    if r1.is_empty() {
        return Err(Error::DivisionByZero);
    }
    let mut t0: Vec<u64> = Vec::new();
    let mut t1 = vec![1u64];
    while !r1.is_empty() {
        // r0 = q*r1 + r2
        let (q, r2) = divrem(&r0, &r1, p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    debug_assert_eq!(deg(&r0), Some(0), "gcd with an irreducible modulus");
    let s = invm(r0[0], p)?;
    Ok(scalar_mul(&t0, s, p))
}

pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "division by the zero polynomial");
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    let lead_inv = invm(b[db], p).expect("nonzero lead");
    while r.len() > db {
        let dr = r.len() - 1;
        let coef = mulm(r[dr], lead_inv, p);
        let shift = dr - db;
        q[shift] = coef;
        if coef != 0 {
            for (j, &bj) in b.iter().enumerate() {
                let t = mulm(coef, bj, p);
                r[shift + j] = subm(r[shift + j], t, p);
            }
        }
        r.pop();
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    trim(&mut q);
    (q, r)
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in a.iter().rev() {
        acc = addm(mulm(acc, x, p), c, p);
    }
    acc
}

/// Distinct prime factors of n by trial division (n is a small degree here).
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

///// Irreducibility over F_p via the derandomized gcd scheme: f of degree d is
/// irreducible iff x^(p^d) == x mod f and gcd(x^(p^(d/t)) - x, f) = 1 for
/// every prime t | d.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = match deg(f) {
        None | Some(0) => return false,
        Some(d) => d,
    };
    if d == 1 {
        return true;
    }
    // x^(p^k) mod f for k = 1..d via repeated Frobenius steps.
    let x = vec![0u64, 1];
    let mut frob = Vec::with_capacity(d);
    let mut h = powmod(&x, p as u128, f, p);
    frob.push(h.clone()); // x^(p^1)
    for _ in 1..d {
        h = powmod(&h, p as u128, f, p);
        frob.push(h.clone());
    }
    // x^(p^d) == x
    if frob[d - 1] != x {
        return false;
    }
    for t in prime_factors(d as u64) {
        let k = d / t as usize;
        let diff = sub(&frob[k - 1], &x, p);
        let g = gcd(&diff, f, p);
        if deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// First monic irreducible of degree r over F_p in integer-encoding order
/// (constant term is the least-significant base-p digit). Returned without
/// its leading 1, as a length-r coefficient vector.
pub fn canonical_modulus(p: u64, r: u32) -> Vec<u64> {
    let r = r as usize;
    if r == 1 {
        // Quotient by (x - 0): the prime field itself; by convention unused.
        return vec![0];
    }
    let mut digits = vec![0u64; r];
    loop {
        let mut f = digits.clone();
        f.push(1); // monic lead
        if is_irreducible(&f, p) {
            return digits;
        }
        // increment base-p counter
        let mut i = 0;
        loop {
            assert!(i < r, "no irreducible of degree {r} over F_{p}?");
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}
