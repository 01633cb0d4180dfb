use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("n must be at least 1")]
    ZeroRank,
    #[error("bimodules over different algebras (n = {0} and n = {1})")]
    MismatchedN(usize, usize),
    #[error("invalid label `{0}`: {1}")]
    InvalidLabel(String, String),
    #[error("{0} is not a morphism between the given bimodules")]
    NotAMorphism(String),
    #[error("{0} does not lie in the apex of this birepresentation")]
    OutsideApex(String),
    #[error("index {0} is out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("cell birepresentation has unexpected Cartan data: {0}")]
    CartanMismatch(String),
    #[error("collection of arrows is not stable: {0}")]
    Unstable(String),
    #[error("valley count must be at least 1 for a cell birepresentation")]
    ZeroValleys,
}

pub type Result<T> = std::result::Result<T, Error>;
