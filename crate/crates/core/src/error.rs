use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("p-adic valuation of zero is undefined")]
    ZeroValuation,

    #[error("{value} is not {p}-integral")]
    NotPIntegral { p: u64, value: String },

    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: String, m: String },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("exponent must be positive")]
    ZeroExponent,

    #[error("cannot combine residues modulo {left} and {right}")]
    ModulusMismatch { left: String, right: String },

    #[error("index {index} out of range for p = {p} (maximum {max})")]
    IndexRange { index: u64, p: u64, max: u64 },

    #[error("unknown id `{0}`")]
    UnknownId(String),

    #[error("{id} is not applicable at p = {p}, r = {r}")]
    Inapplicable { id: String, p: u64, r: u32 },

    #[error("n = {n} is outside the declared range of {id} (starts at {start})")]
    OutOfRange { id: String, n: u64, start: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}
