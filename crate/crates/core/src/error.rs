use thiserror::Error;

use crate::dset::ElementId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element {id} out of range for a set of {n} elements")]
    OutOfRange { id: ElementId, n: usize },
    #[error("quadruple {0:?} does not consist of four distinct elements")]
    NotDistinct([ElementId; 4]),
    #[error("duplicate positive quadruple {0:?}")]
    DuplicateQuad([ElementId; 4]),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("not representable by a tree: {0}")]
    NotRepresentable(String),
    #[error("size {n} exceeds the limit {limit}; raise the limit explicitly to proceed")]
    TooLarge { n: usize, limit: usize },
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::OutOfRange { .. } => "out_of_range",
            Error::NotDistinct(_) => "not_distinct",
            Error::DuplicateQuad(_) => "duplicate_quad",
            Error::InvalidTree(_) => "invalid_tree",
            Error::NotAPartition(_) => "not_a_partition",
            Error::Precondition(_) => "precondition",
            Error::Inconsistent(_) => "inconsistent",
            Error::NotRepresentable(_) => "not_representable",
            Error::TooLarge { .. } => "too_large",
            Error::UnknownFixture(_) => "unknown_fixture",
            Error::Infeasible(_) => "infeasible",
            Error::Malformed(_) => "malformed",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
