//! Block-diagonal factors and factorizations — the algorithm's input format.
//!
//! A factorization is an ordered list of factors F_1 … F_L, each block
//! diagonal with contiguous 1×1 / 2×2 blocks tiling the index range [0, N).
//! The represented matrix is the product F_1·F_2·⋯·F_L.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// One diagonal block: `start` is the 0-based site of its top-left corner,
/// `entries` is row-major (one value for a 1×1 block, four for a 2×2).
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub start: usize,
    pub size: usize,
    pub entries: Vec<Complex64>,
}

impl Block {
    pub fn single(start: usize, a: Complex64) -> Block {
        Block { start, size: 1, entries: vec![a] }
    }

    /// 2×2 block (a b; c d) given row-major.
    pub fn pair(start: usize, entries: [Complex64; 4]) -> Block {
        Block { start, size: 2, entries: entries.to_vec() }
    }
}

/// One block-diagonal factor: blocks in ascending site order, tiling [0, dim).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDiagonalFactor {
    pub dim: usize,
    pub blocks: Vec<Block>,
}

impl BlockDiagonalFactor {
    /// Identity factor: dim 1×1 unit blocks.
    pub fn identity(dim: usize) -> Self {
        let one = Complex64::new(1.0, 0.0);
        BlockDiagonalFactor { dim, blocks: (0..dim).map(|s| Block::single(s, one)).collect() }
    }

    /// Expand to a dense dim×dim matrix.
    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = Array2::zeros((self.dim, self.dim));
        for b in &self.blocks {
            match b.size {
                1 => m[[b.start, b.start]] = b.entries[0],
                2 => {
                    m[[b.start, b.start]] = b.entries[0];
                    m[[b.start, b.start + 1]] = b.entries[1];
                    m[[b.start + 1, b.start]] = b.entries[2];
                    m[[b.start + 1, b.start + 1]] = b.entries[3];
                }
                _ => unreachable!("validated factors only hold blocks of size 1 or 2"),
            }
        }
        m
    }
}

/// An ordered product of block-diagonal factors over a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFactorization {
    pub dim: usize,
    pub factors: Vec<BlockDiagonalFactor>,
}

impl BlockFactorization {
    /// Number of factors L.
    pub fn depth(&self) -> usize {
        self.factors.len()
    }
}

/// Check every structural invariant: positive dim, L ≥ 1, matching dims,
/// block sizes in {1, 2}, entry counts, finite entries, and blocks tiling
/// [0, dim) contiguously without overlap.
pub fn validate_factorization(f: &BlockFactorization) -> Result<()> {
    if f.dim == 0 {
        return Err(Error::SizeMismatch { what: "matrix dimension", expected: 1, found: 0 });
    }
    if f.factors.is_empty() {
        return Err(Error::LengthMismatch { what: "factor list (L ≥ 1)", expected: 1, found: 0 });
    }
    for (fi, factor) in f.factors.iter().enumerate() {
        if factor.dim != f.dim {
            return Err(Error::SizeMismatch {
                what: "factor dimension",
                expected: f.dim,
                found: factor.dim,
            });
        }
        let mut cursor = 0usize;
        for (bi, b) in factor.blocks.iter().enumerate() {
            if b.size == 0 {
                return Err(Error::SizeMismatch { what: "block size", expected: 1, found: 0 });
            }
            if b.size > 2 {
                return Err(Error::OversizeBlock { factor: fi, block: bi, size: b.size });
            }
            if b.entries.len() != b.size * b.size {
                return Err(Error::SizeMismatch {
                    what: "block entries",
                    expected: b.size * b.size,
                    found: b.entries.len(),
                });
            }
            if b.entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFiniteEntry { factor: fi, block: bi });
            }
            if b.start < cursor {
                return Err(Error::BlockOverlap { factor: fi, block: bi, site: b.start });
            }
            if b.start > cursor {
                return Err(Error::BlockGap { factor: fi, site: cursor });
            }
            cursor += b.size;
        }
        if cursor < f.dim {
            return Err(Error::BlockGap { factor: fi, site: cursor });
        }
        if cursor > f.dim {
            return Err(Error::SizeMismatch {
                what: "blocks extend past dim",
                expected: f.dim,
                found: cursor,
            });
        }
    }
    Ok(())
}

/// Dense product F_1·F_2·⋯·F_L, multiplied left to right.
pub fn reconstruct(f: &BlockFactorization) -> Result<DenseMatrix> {
    validate_factorization(f)?;
    let mut acc = f.factors[0].to_dense();
    for factor in &f.factors[1..] {
        acc = acc.dot(&factor.to_dense());
    }
    Ok(acc)
}
