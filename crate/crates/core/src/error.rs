use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p must be an odd prime below 2^31 (got {0})")]
    InvalidPrime(u64),
    #[error("exponent must be at least 1")]
    InvalidExponent,
    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(String, String),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(String, String),
    #[error("seed {seed} at index {index} is a multiple root of V modulo p")]
    SingularSeed { index: usize, seed: u64 },
    #[error("V(S) is not divisible by p^{level} at index {index}")]
    IntegralityViolation { index: usize, level: u32 },
    #[error("no square root of {0} lifts the given base residue")]
    NonResidue(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("factor product does not equal x^{n} - 1 modulo {modulus}")]
    VerificationFailed { n: u64, modulus: String },
    #[error("factors have total degree {got}, expected {expected}")]
    IncompleteFactorization { got: usize, expected: usize },
    #[error("cofactor is not coprime to the factor modulo p")]
    NonCoprimeCofactor,
    #[error("operation requires e = 2 (got e = {0})")]
    UnsupportedExponent(u32),
    #[error("generator covers every factor; the code is trivial")]
    EmptyCode,
    #[error("exhaustive search needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed factorization document: {0}")]
    MalformedDocument(String),
}
