use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("subfield order {q} is not a power of {p}")]
    NotPrimePower { p: u32, q: u32 },
    #[error("extension degree must be at least 2, got {0}")]
    DegreeTooSmall(u32),
    #[error("field of order {p}^{degree} exceeds 2^32 elements")]
    FieldTooLarge { p: u32, degree: u32 },
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("modulus is reducible: root {0}")]
    ReducibleRoot(u32),
    #[error("modulus is reducible: factor with coefficients {0:?}")]
    ReducibleFactor(Vec<u32>),
    #[error("element index {index} out of range for a field of order {order}")]
    ElementOutOfRange { index: u64, order: u64 },
    #[error("elements are not linearly independent over the subfield")]
    NotABasis,
    #[error("subspace dimension {m} out of range (0 < m < {ell})")]
    DimensionOutOfRange { m: usize, ell: usize },
    #[error("element {0} does not lie in the image of the subspace polynomial")]
    NotInImage(u32),
    #[error("member set is not a subspace: {0}")]
    NotASubspace(String),
    #[error("duplicate evaluation point {0}")]
    DuplicatePoint(u32),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("expected {expected} symbols, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error(
        "parity polynomial of degree {degree} is not a dual codeword (needs degree < {bound})"
    )]
    ParityDegree { degree: usize, bound: usize },
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("target {0} is not an evaluation point of the code")]
    UnknownTarget(u32),
    #[error("no response from node {0}")]
    MissingResponse(u32),
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("masking polynomial vanishes at the target; recovery is impossible")]
    MaskVanishes,
    #[error("malformed coalition view: {0}")]
    MalformedView(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by caller input rather than by a broken invariant.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::Io(_))
    }
}
