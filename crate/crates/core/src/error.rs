use thiserror::Error;

/// Errors raised by the core library.
///
/// Precondition failures carry the clause that was violated, written the way
/// the construction states it (e.g. `"gcd(t, n) = 2"`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} out of range 1..=16")]
    DegreeOutOfRange(u32),
    #[error("polynomial {poly:#x} does not have degree {n}")]
    PolynomialDegree { n: u32, poly: u32 },
    #[error("polynomial {0:#x} is reducible over GF(2)")]
    ReduciblePolynomial(u32),
    #[error("value {value:#x} is not an element of GF(2^{n})")]
    ElementOutOfRange { n: u32, value: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroNotInvertible,
    #[error("negative power of zero")]
    NegativePowerOfZero,
    #[error("{r} does not divide the extension degree {n}")]
    NotADivisor { r: u32, n: u32 },
    #[error("lookup table has {found} entries, expected {expected}")]
    LutLength { expected: usize, found: usize },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("the Sbox is not a permutation")]
    NotAPermutation,
    #[error("difference must be nonzero")]
    ZeroDifference,
    #[error("exponent {0} is not of the form q^i + q^j")]
    MalformedExponent(u64),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("witness list was truncated; classification needs every witness")]
    TruncatedWitnesses,
}

pub type Result<T> = core::result::Result<T, Error>;
