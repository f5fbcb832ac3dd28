use thiserror::Error;

/// Crate-wide error type. Every fallible operation in the library reports
/// through one of these variants; the CLI maps them onto its exit-code
/// contract.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The characteristic handed to a field constructor is not prime.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// A value that must be a prime power (q = p^r) is not one.
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    /// p^r exceeds the supported field-order range (2^63).
    #[error("field order {p}^{r} exceeds the supported range")]
    Overflow { p: u64, r: u32 },

    /// Attempt to invert or divide by the zero element.
    #[error("division by zero")]
    DivisionByZero,

    /// Two elements from different fields were combined.
    #[error("elements belong to different fields")]
    FieldMismatch,

    /// A subfield/extension relation does not hold (orders, characteristics
    /// or degrees are incompatible).
    #[error("invalid tower: {0}")]
    BadTower(String),

    /// A counting formula or search was invoked outside its hypotheses
    /// (e.g. the characteristic divides the extension degree).
    #[error("hypothesis violated: {0}")]
    BadHypothesis(String),

    /// An enumeration or closure would exceed the configured state cap.
    #[error("cap exceeded: needed more than {cap} states")]
    CapExceeded { cap: u64 },

    /// The polynomial handed to a construction requiring irreducibility
    /// is reducible.
    #[error("polynomial is reducible")]
    NotIrreducible,

    /// The matrix does not scale the symplectic form by a nonzero factor.
    #[error("matrix is not a symplectic similitude")]
    NotGSp,

    /// A transvection direction vector must be nonzero.
    #[error("direction vector is zero")]
    ZeroVector,

    /// A transvection coefficient must be nonzero.
    #[error("transvection coefficient is zero")]
    ZeroScalar,

    /// The supplied vectors do not form an independent family.
    #[error("vectors are not linearly independent")]
    NotIndependent,

    /// The generated group contains no transvection, so the classification
    /// does not apply.
    #[error("generated group contains no transvection")]
    NoTransvection,

    /// Internal assertion: no invariant nondegenerate alternating form was
    /// found for an input that guarantees one.
    #[error("no invariant nondegenerate alternating form found")]
    NoInvariantForm,

    /// None of the three classification cases validated for this input.
    /// The classification's reducible case only admits nonsingular witness
    /// subspaces, which is not exhaustive for every transvection-containing
    /// group (e.g. groups whose only invariant subspaces are isotropic).
    #[error("no classification case applies to this subgroup")]
    ClassificationFailed,

    /// External input (a generator file or certificate) could not be
    /// parsed into the expected shape.
    #[error("parse error: {0}")]
    Parse(String),

    /// A named certificate check re-ran and did not reproduce the
    /// certified data.
    #[error("check failed: {0}")]
    CheckFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
