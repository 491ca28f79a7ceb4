use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group literal {token:?}: {reason}")]
    GroupLiteral { token: String, reason: String },

    #[error("invalid cyclic order {0}: orders must be >= 1")]
    ZeroOrder(u64),

    #[error("element or map belongs to {found}, expected {expected}")]
    GroupMismatch { expected: String, found: String },

    #[error("expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("entry ({row}, {col}) = {value} must be divisible by {divisor}")]
    Constraint { row: usize, col: usize, value: i128, divisor: u64 },

    #[error("entries ({row}, {col}) and ({col}, {row}) are not negatives of each other mod {modulus}")]
    NotSkew { row: usize, col: usize, modulus: u64 },

    #[error("diagonal entry ({0}, {0}) must be zero")]
    NonzeroDiagonal(usize),

    #[error("index {index} out of range for rank {rank}")]
    Index { index: usize, rank: usize },

    #[error("{sigma} is not a unit modulo {modulus}")]
    NotUnit { sigma: i64, modulus: u64 },

    #[error("cannot interchange generators {i} and {j}: orders {di} and {dj} differ")]
    UnequalOrders { i: usize, j: usize, di: u64, dj: u64 },

    #[error("shear {i} -> {j} needs sigma divisible by {divisor}, got {sigma}")]
    ShearDivisibility { i: usize, j: usize, sigma: i64, divisor: u64 },

    #[error("shear needs distinct indices, got {0} twice")]
    ShearDiagonal(usize),

    #[error("operation needs {size} steps, above the exhaustive bound {bound}")]
    BoundExceeded { size: u128, bound: u64 },

    #[error("form is degenerate: {witness:?} lies in the kernel of the flat map")]
    Degenerate { witness: Vec<u64> },

    #[error("not an automorphism")]
    NotAutomorphism,

    #[error("invalid cocycle: {0}")]
    Cocycle(String),

    #[error("center order {center} does not match form modulus {modulus}")]
    CenterMismatch { center: u64, modulus: u64 },

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
