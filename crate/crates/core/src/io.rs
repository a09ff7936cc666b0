//! JSON serialization for factorizations and dense matrices.
//!
//! Factorization files: `{"dim": N, "factors": [[{"start": s, "size": k,
//! "entries": [[re, im], …]}, …], …]}` with block entries row-major.
//! Dense matrix files: `{"rows": r, "cols": c, "entries": [[re, im], …]}`
//! row-major. Complex numbers are two-element arrays so files stay readable
//! and diffable.

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::factor::{Block, BlockDiagonalFactor, BlockFactorization};
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BlockJson {
    start: usize,
    size: usize,
    entries: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FactorizationJson {
    dim: usize,
    factors: Vec<Vec<BlockJson>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DenseMatrixJson {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

/// Serialize a factorization to the JSON file format (pretty-printed, so
/// seeded fixtures diff cleanly).
pub fn factorization_to_json(f: &BlockFactorization) -> String {
    let doc = FactorizationJson {
        dim: f.dim,
        factors: f
            .factors
            .iter()
            .map(|factor| {
                factor
                    .blocks
                    .iter()
                    .map(|b| BlockJson {
                        start: b.start,
                        size: b.size,
                        entries: b.entries.iter().map(|z| [z.re, z.im]).collect(),
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("factorization serializes")
}

/// Parse a factorization file. Syntax errors surface as `serde_json` errors;
/// structural problems (overlaps, gaps, bad sizes) surface as validation
/// errors from the factor module.
pub fn factorization_from_json(text: &str) -> std::result::Result<BlockFactorization, String> {
    let doc: FactorizationJson =
        serde_json::from_str(text).map_err(|e| format!("JSON syntax: {e}"))?;
    let factors = doc
        .factors
        .into_iter()
        .map(|blocks| BlockDiagonalFactor {
            dim: doc.dim,
            blocks: blocks
                .into_iter()
                .map(|b| Block {
                    start: b.start,
                    size: b.size,
                    entries: b.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
                })
                .collect(),
        })
        .collect();
    let f = BlockFactorization { dim: doc.dim, factors };
    crate::factor::validate_factorization(&f).map_err(|e| e.to_string())?;
    Ok(f)
}

/// Serialize a dense matrix to the JSON file format.
pub fn dense_to_json(m: &DenseMatrix) -> String {
    let (rows, cols) = m.dim();
    let doc = DenseMatrixJson {
        rows,
        cols,
        entries: m.iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("matrix serializes")
}

/// Parse a dense matrix file.
pub fn dense_from_json(text: &str) -> std::result::Result<DenseMatrix, String> {
    let doc: DenseMatrixJson =
        serde_json::from_str(text).map_err(|e| format!("JSON syntax: {e}"))?;
    if doc.entries.len() != doc.rows * doc.cols {
        return Err(Error::LengthMismatch {
            what: "dense matrix entries",
            expected: doc.rows * doc.cols,
            found: doc.entries.len(),
        }
        .to_string());
    }
    let data: Vec<Complex64> =
        doc.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
    Array2::from_shape_vec((doc.rows, doc.cols), data)
        .map_err(|e| e.to_string())
}

/// Read + parse helper used by the CLI and tests.
pub fn read_factorization(path: &std::path::Path) -> std::result::Result<BlockFactorization, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    factorization_from_json(&text)
}

/// Read + parse helper used by the CLI and tests.
pub fn read_dense(path: &std::path::Path) -> std::result::Result<DenseMatrix, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    dense_from_json(&text)
}
