use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the library; CLI-level parse diagnostics live in
/// [`crate::report`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot factorize zero")]
    FactorizeZero,

    #[error("{what} must be positive")]
    ZeroInput { what: &'static str },

    #[error("{value} is not prime")]
    NotPrime { value: BigUint },

    #[error("degree must be at least 2, got {degree}")]
    DegreeTooSmall { degree: u32 },

    #[error("moduli are not pairwise coprime (shared factor {gcd})")]
    NonCoprimeModuli { gcd: BigUint },

    #[error("triple is not additive: {a} + {b} != {c}")]
    SumMismatch { a: BigUint, b: BigUint, c: BigUint },

    #[error("summands share the common factor {gcd}")]
    CommonFactor { gcd: BigUint },

    #[error("degenerate triple: the two summands are equal")]
    EqualSummands,

    #[error("prime {p} does not divide any part of the triple")]
    PrimeOutsideTriple { p: BigUint },

    #[error("residue value {value} is not reduced modulo {modulus}")]
    UnreducedResidue { value: BigUint, modulus: BigUint },

    #[error("modulus must be at least 2, got {modulus}")]
    ModulusTooSmall { modulus: BigUint },

    #[error("modulus {modulus} is not a prime power")]
    NotPrimePower { modulus: BigUint },

    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: BigUint, modulus: BigUint },

    #[error("root extraction needs gcd(d, p) = 1, got d = {d}, p = {p}")]
    RamifiedRoot { d: u32, p: BigUint },

    #[error("root search modulo {p} is not supported (large prime, gcd(d, p-1) > 1)")]
    RootSearchTooLarge { p: BigUint },

    #[error("denominator is divisible by p = {p}")]
    DenominatorNotUnit { p: u64 },

    #[error("basis is singular")]
    SingularBasis,

    #[error("{k} is a perfect {s}th power, its {s}th root is rational")]
    PerfectPower { k: u64, s: u32 },

    #[error("sieve limit {limit} exceeds the supported cap {cap}")]
    SieveLimitTooLarge { limit: u64, cap: u64 },

    #[error("oracle limit {limit} exceeds {cap} (quadratic cost)")]
    OracleLimitTooLarge { limit: u64, cap: u64 },

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),

    #[error("witness does not belong to this triple")]
    WitnessMismatch,

    #[error("invalid selection criteria: {0}")]
    InvalidCriteria(String),

    #[error("failed to build worker pool: {0}")]
    ThreadPool(String),
}
