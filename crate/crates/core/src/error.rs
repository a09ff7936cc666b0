//! Error type shared across the crate.
//!
//! Every fallible operation returns one of these variants; the CLI maps them
//! onto exit codes (validation/parse problems, numerical failures, singular
//! inputs). Variants carry enough context to name the offending factor or
//! block in a diagnostic.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A block starts before the previous block in the same factor has ended.
    #[error("factor {factor}: block {block} overlaps the previous block at site {site}")]
    BlockOverlap { factor: usize, block: usize, site: usize },

    /// The blocks of a factor leave a site uncovered.
    #[error("factor {factor}: sites from {site} are not covered by any block")]
    BlockGap { factor: usize, site: usize },

    /// A dimension disagrees with what the surrounding structure requires,
    /// e.g. a factor whose dim differs from the factorization's, or a block
    /// whose entry count is not size².
    #[error("size mismatch in {what}: expected {expected}, found {found}")]
    SizeMismatch { what: &'static str, expected: usize, found: usize },

    /// A block larger than 2×2.
    #[error("factor {factor}: block {block} has size {size}, only 1 and 2 are supported")]
    OversizeBlock { factor: usize, block: usize, size: usize },

    /// NaN or infinity in a matrix or block entry.
    #[error("non-finite entry in factor {factor}, block {block}")]
    NonFiniteEntry { factor: usize, block: usize },

    /// An operation that requires a square matrix got a rectangular one.
    #[error("matrix is {rows}×{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },

    /// Two containers that must have equal length do not.
    #[error("length mismatch in {what}: expected {expected}, found {found}")]
    LengthMismatch { what: &'static str, expected: usize, found: usize },

    /// Input exceeds a hard size cap (oracles and test-only expansions).
    #[error("{what} supports size at most {max}, got {got}")]
    TooLarge { what: &'static str, max: usize, got: usize },

    /// A matrix with nonzero entries beyond the first off-diagonals.
    #[error("matrix has a nonzero entry at ({row}, {col}); not tridiagonal")]
    NotTridiagonal { row: usize, col: usize },

    /// A gate builder got a block of the wrong size.
    #[error("gate construction expected a {expected}×{expected} block, got {got}×{got}")]
    WrongBlockSize { expected: usize, got: usize },

    /// The requested output degree cap would silently discard gate weight.
    #[error("output degree cap {d_out} discards weight: need at least min(2·{d_in}, {ceiling})")]
    DegreeCapTooSmall { d_in: usize, d_out: usize, ceiling: usize },

    /// A binomial argument outside the exactly-representable range.
    #[error("binomial({n}, {k}) outside supported range (n ≤ {max})")]
    OutOfRange { n: usize, k: usize, max: usize },

    /// A gate's physical dimension is incompatible with the site tensor.
    #[error("dimension mismatch at site {site}: gate expects phys ≤ {expected}, tensor has {found}")]
    DimMismatch { site: usize, expected: usize, found: usize },

    /// The SVD iteration failed to converge.
    #[error("SVD failed to converge on a {rows}×{cols} matrix")]
    ConvergenceFailure { rows: usize, cols: usize },

    /// A matrix too close to singular to decompose (condition estimate attached).
    #[error("matrix is numerically singular (condition estimate {condition:.3e})")]
    Singular { condition: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
