use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("q = {0} is not a supported prime (expected a prime below 256)")]
    NonPrimeCharacteristic(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {q}^{ell} does not fit the element encoding")]
    FieldTooLarge { q: u8, ell: usize },
    #[error("no built-in modulus for q = {q}, ell = {ell}; supply one explicitly")]
    NoDefaultModulus { q: u8, ell: usize },
    #[error("modulus {0:?} is not a monic polynomial of the requested degree")]
    MalformedModulus(Vec<u8>),
    #[error("modulus {0:?} is reducible")]
    ReducibleModulus(Vec<u8>),
    #[error("coefficient {digit} is not an element of GF({q})")]
    DigitOutOfRange { digit: u32, q: u8 },
    #[error("element {value} is outside a field of order {order}")]
    ElementOutOfRange { value: u64, order: u64 },
    #[error("basis must contain {expected} elements, got {got}")]
    BasisLength { expected: usize, got: usize },
    #[error("elements are linearly dependent over the base field")]
    DependentElements,
    #[error("rows are linearly dependent over the base field")]
    DependentRows,
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid code parameters: {0}")]
    CodeParameters(String),
    #[error("message polynomial has degree {degree}, code dimension is {k}")]
    DegreeTooHigh { degree: usize, k: usize },
    #[error("operation requires a full-length code")]
    NotFullLength,
    #[error("node index {index} out of range for length {n}")]
    NodeOutOfRange { index: usize, n: usize },
    #[error("node {0} is the failed node of the scheme")]
    FailedNode(usize),
    #[error("invalid repair scheme: {0}")]
    InvalidScheme(crate::repair::Violation),
    #[error("zero q-polynomial")]
    ZeroPolynomial,
    #[error("invalid construction parameters: {0}")]
    ConstructionParameters(String),
    #[error("search space of {estimate} subspaces exceeds the cap of {cap}")]
    SearchTooLarge { estimate: u128, cap: u128 },
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}
