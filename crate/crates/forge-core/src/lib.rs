//! Finite fields, palindromic ("symplectic") polynomials, and symplectic
//! matrix groups over prime fields, built for exhaustive verification:
//! every closed-form count or classification this crate computes is paired
//! with an independent brute-force route that tests check it against.
//!
//! Layers, bottom up:
//!
//! - [`field`]: arithmetic in F_{p^r} with canonical moduli, subfield
//!   towers, traces, and minimal polynomials;
//! - [`poly`]: dense polynomials, irreducibility, exact counts of
//!   irreducibles, palindromic lifts x^n f(x + 1/x), and the search for
//!   irreducible palindromic polynomials of nonzero trace;
//! - [`gsp`]: matrices preserving a symplectic form up to scalar,
//!   transvections, group closures, and the classification of
//!   transvection-containing subgroups;
//! - [`cert`]: serializable certificates recording the objects found
//!   together with enough data to recheck them from scratch.

// The modular linear-algebra kernels read and write several arrays at one
// shared index (pivoting, row operations, bilinear forms); plain index
// loops are the clearer idiom there.
#![allow(clippy::needless_range_loop)]

pub mod cert;
pub mod error;
pub mod field;
pub mod gsp;
pub mod poly;

pub use error::{Error, Result};
pub use field::{batch_invert, FieldElement, FiniteField, PrimePower, Tower};
pub use poly::{MonicPoly, Poly};
