use thiserror::Error;

/// Every failure the library can report.
///
/// Variants carry the offending index or parameter so callers can print a
/// useful diagnostic without re-deriving it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge {edge} is a self-loop on vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {edge} duplicates an earlier edge ({u}, {v})")]
    DuplicateEdge { edge: usize, u: usize, v: usize },
    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("house values are not sorted: index {index} is smaller than its predecessor")]
    UnsortedValues { index: usize },
    #[error("assignment is not a bijection: house index {house} at vertex {vertex}")]
    NotABijection { vertex: usize, house: usize },
    #[error("instance too large: n = {n} exceeds the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("graph is not a tree")]
    NotATree,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("{len} houses do not fill a complete binary tree (need 2^(d+1) - 1)")]
    NotCompleteTreeSize { len: usize },
    #[error("parameter {value} is out of range: {reason}")]
    OutOfRange { value: usize, reason: &'static str },
    #[error("depth {depth} is too shallow: need at least {min} vertices")]
    TooShallow { depth: u32, min: usize },
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("expansion could not be certified after {attempts} attempts")]
    ExpansionNotCertified { attempts: usize },
    #[error("graph is not regular: vertex {vertex} has degree {degree}, expected {expected}")]
    NotRegular { vertex: usize, degree: usize, expected: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("invalid partition witness: {0}")]
    InvalidWitness(String),
    #[error("operation not supported for gadget family {0}")]
    UnsupportedFamily(String),
    #[error("epsilon {epsilon} is below the threshold {threshold}")]
    EpsilonTooSmall { epsilon: f64, threshold: f64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
