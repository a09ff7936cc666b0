//! Python bindings: a `Factorization` class plus the permanent engine, the
//! brute-force oracles, the dense factorizer, and the bandwidth-reduction
//! permutation, all speaking plain Python types (nested lists of complex).

use ndarray::Array2;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use blockperm::{
    compute_permanent as engine_compute, decompose_dense_block, generate_random_factorization,
    permanent_naive as oracle_naive, permanent_ryser as oracle_ryser, rcm_permutation as rcm,
    reconstruct, validate_factorization, BlockFactorization, DenseMatrix,
};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Nested lists (row major) → dense matrix; rows must be equally long.
fn matrix_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<DenseMatrix> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(value_error("matrix needs at least one row"));
    }
    let ncols = rows[0].len();
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(value_error("matrix rows have unequal lengths"));
    }
    if ncols == 0 {
        return Err(value_error("matrix needs at least one column"));
    }
    let flat: Vec<Complex64> = rows.into_iter().flatten().collect();
    Array2::from_shape_vec((nrows, ncols), flat).map_err(value_error)
}

fn matrix_to_rows(m: &DenseMatrix) -> Vec<Vec<Complex64>> {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

/// A product of block-diagonal factors (blocks of size 1 or 2 on adjacent
/// indices) representing an n×n complex matrix.
#[pyclass(module = "blockperm_py")]
struct Factorization {
    inner: BlockFactorization,
}

#[pymethods]
impl Factorization {
    /// Parse the JSON document format (dim + per-factor block lists).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = blockperm::io::factorization_from_json(text).map_err(value_error)?;
        Ok(Factorization { inner })
    }

    /// Serialize back to the JSON document format.
    fn to_json(&self) -> String {
        blockperm::io::factorization_to_json(&self.inner)
    }

    /// Draw a random factorization: entries uniform on [-1, 1) in both parts,
    /// 2×2 blocks placed greedily with probability `density`.
    #[staticmethod]
    #[pyo3(signature = (n, depth, seed=0, density=0.5))]
    fn generate(n: usize, depth: usize, seed: u64, density: f64) -> PyResult<Self> {
        if n == 0 || depth == 0 {
            return Err(value_error("n and depth must be at least 1"));
        }
        if !(0.0..=1.0).contains(&density) {
            return Err(value_error("density must lie in [0, 1]"));
        }
        Ok(Factorization { inner: generate_random_factorization(n, depth, seed, density) })
    }

    /// Factor a dense square matrix (n ≤ 8, nonsingular) into block-diagonal
    /// factors whose product reconstructs it.
    #[staticmethod]
    fn from_dense(matrix: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let m = matrix_from_rows(matrix)?;
        let inner = decompose_dense_block(&m).map_err(value_error)?;
        Ok(Factorization { inner })
    }

    /// Matrix dimension n.
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim
    }

    /// Number of factors.
    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    /// Blocks as [[(start, [entries…]), …] per factor]; entries row-major.
    fn blocks(&self) -> Vec<Vec<(usize, Vec<Complex64>)>> {
        self.inner
            .factors
            .iter()
            .map(|f| f.blocks.iter().map(|b| (b.start, b.entries.clone())).collect())
            .collect()
    }

    /// Raise ValueError unless the blocks tile every factor exactly.
    fn validate(&self) -> PyResult<()> {
        validate_factorization(&self.inner).map_err(value_error)
    }

    /// Multiply the factors out to a dense matrix (nested lists, row major).
    fn reconstruct(&self) -> PyResult<Vec<Vec<Complex64>>> {
        let m = reconstruct(&self.inner).map_err(value_error)?;
        Ok(matrix_to_rows(&m))
    }

    fn __repr__(&self) -> String {
        format!("Factorization(dim={}, depth={})", self.inner.dim, self.inner.depth())
    }
}

/// Permanent of the factorized matrix by layered circuit contraction.
///
/// Returns `(value, stats)`: `value` as a Python complex (inf on decimal
/// overflow — see `stats["mantissa"]`/`stats["exponent10"]` for the scaled
/// form) and a dict of run statistics.
#[pyfunction]
#[pyo3(signature = (factorization, tolerance=1e-12))]
fn compute_permanent<'py>(
    py: Python<'py>,
    factorization: &Factorization,
    tolerance: f64,
) -> PyResult<(Complex64, Bound<'py, PyDict>)> {
    let (value, stats) = engine_compute(&factorization.inner, tolerance).map_err(value_error)?;
    let dict = PyDict::new(py);
    dict.set_item("mantissa", value.mantissa)?;
    dict.set_item("exponent10", value.exponent10)?;
    dict.set_item("max_bond", stats.max_bond)?;
    dict.set_item("per_layer_bonds", stats.per_layer_bonds)?;
    dict.set_item("per_layer_phys", stats.per_layer_phys)?;
    dict.set_item("wall_time", stats.wall_time)?;
    dict.set_item("svd_count", stats.svd_count)?;
    dict.set_item("truncated_rank_total", stats.truncated_rank_total)?;
    Ok((value.value(), dict))
}

/// Permanent by Ryser's inclusion–exclusion formula (n ≤ 24).
#[pyfunction]
fn permanent_ryser(matrix: Vec<Vec<Complex64>>) -> PyResult<Complex64> {
    oracle_ryser(&matrix_from_rows(matrix)?).map_err(value_error)
}

/// Permanent by direct sum over all permutations (n ≤ 10).
#[pyfunction]
fn permanent_naive(matrix: Vec<Vec<Complex64>>) -> PyResult<Complex64> {
    oracle_naive(&matrix_from_rows(matrix)?).map_err(value_error)
}

/// Bandwidth-reducing permutation (reverse Cuthill–McKee) of a square matrix,
/// treating entries with magnitude above `zero_threshold` as edges.
#[pyfunction]
#[pyo3(signature = (matrix, zero_threshold=0.0))]
fn rcm_permutation(matrix: Vec<Vec<Complex64>>, zero_threshold: f64) -> PyResult<Vec<usize>> {
    rcm(&matrix_from_rows(matrix)?, zero_threshold).map_err(value_error)
}

#[pymodule]
fn blockperm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Factorization>()?;
    m.add_function(wrap_pyfunction!(compute_permanent, m)?)?;
    m.add_function(wrap_pyfunction!(permanent_ryser, m)?)?;
    m.add_function(wrap_pyfunction!(permanent_naive, m)?)?;
    m.add_function(wrap_pyfunction!(rcm_permutation, m)?)?;
    Ok(())
}
