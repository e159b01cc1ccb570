use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {p}^{k} does not fit below 2^63")]
    ModulusTooLarge { p: u64, k: u32 },
    #[error("{value} is not invertible modulo {p}^{k}")]
    NotInvertible { value: u64, p: u64, k: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
