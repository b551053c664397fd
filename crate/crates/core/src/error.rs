use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("relation has no element above every other element")]
    NoMaximum,
    #[error("relation mentions unknown element `{0}`")]
    DanglingElement(String),
    #[error("element `{0}` is listed twice")]
    DuplicateElement(String),
    #[error("element index {0} is not in the poset")]
    UnknownElement(usize),
    #[error("point {0} is not in the carrier")]
    UnknownPoint(usize),
    #[error("algebra element is not an atom set of this algebra")]
    ForeignElement,
    #[error("subset is not an antichain: {0} and {1} are compatible")]
    NotAntichain(usize, usize),
    #[error("subset is not predense: {0} is incompatible with every member")]
    NotPredense(usize),
    #[error("subset is not dense open")]
    NotDenseOpen,
    #[error("poset is not a forcing tree: {0} and {1} are compatible but incomparable")]
    NotForcingTree(usize, usize),
    #[error("maximal members do not form a maximal antichain (witness {witness:?})")]
    RefinementInvalid { witness: Vec<usize> },
    #[error("tree is not closed under initial segments: {0}")]
    MalformedTree(String),
    #[error("second factor has no element besides its maximum")]
    EmptyFactor,
    #[error("not a subgroup of the structure's group")]
    NotASubgroup,
    #[error("permutation is invalid: {0}")]
    InvalidPermutation(String),
    #[error("permutation is not an order automorphism of the poset")]
    NotAnAutomorphism,
    #[error("threshold must be at least 1")]
    InvalidThreshold,
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("{what} exceeds the size cap ({actual} > {limit})")]
    SizeCapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
