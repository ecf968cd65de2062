use thiserror::Error;

use crate::lee::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("set has {set} elements but the group has order {group}")]
    Size { set: usize, group: u64 },

    #[error("element {0:?} is not valid in the group")]
    InvalidElement(Vec<u64>),

    #[error("homomorphism is not a bijection on the tile: {first} and {second} share an image")]
    Collision { first: Word, second: Word },

    #[error("{0} is not a tile translation vector (not in the kernel)")]
    NotInKernel(Word),

    #[error("period {period} does not divide modulus {q}")]
    Periodicity { period: u64, q: u64 },

    #[error("malformed homomorphism: {0}")]
    Structure(String),

    #[error("window too small: {0}")]
    Window(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("construction invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
