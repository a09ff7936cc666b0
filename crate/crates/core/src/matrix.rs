//! Dense complex matrices: bandwidth measurement, permutation/diagonal
//! simplification, and small shared helpers.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Row-major dense complex matrix. All matrix plumbing in this crate speaks
/// `ndarray`, so the domain name is an alias rather than a wrapper.
pub type DenseMatrix = Array2<Complex64>;

/// Identity matrix of size n.
pub fn identity(n: usize) -> DenseMatrix {
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
    })
}

/// Smallest w such that every entry with |i−j| > w is exactly zero.
///
/// Exact zero is the right notion for *input* matrices, whose zeros are
/// structural. For matrices assembled from floating-point products use
/// [`bandwidth_thresholded`], which ignores roundoff dust.
pub fn bandwidth(a: &DenseMatrix) -> Result<usize> {
    bandwidth_thresholded(a, 0.0)
}

/// Bandwidth where an entry counts as nonzero when |entry| > threshold·max|entry|.
/// threshold 0 reduces to the exact-zero rule.
pub fn bandwidth_thresholded(a: &DenseMatrix, threshold: f64) -> Result<usize> {
    let (rows, cols) = a.dim();
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    let max_mag = a.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let cut = threshold * max_mag;
    let mut w = 0;
    for ((i, j), z) in a.indexed_iter() {
        let dist = i.abs_diff(j);
        if dist > w && z.norm() > cut {
            w = dist;
        }
    }
    Ok(w)
}

/// Permutation matrix P with `P[i, p[i]]` = 1, so that `(P·A)[i, j] = A[p[i], j]`.
pub fn permutation_matrix(p: &[usize]) -> DenseMatrix {
    let n = p.len();
    let mut m = Array2::zeros((n, n));
    for (i, &pi) in p.iter().enumerate() {
        m[[i, pi]] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn check_permutation(p: &[usize], n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::LengthMismatch { what: "permutation", expected: n, found: p.len() });
    }
    let mut seen = vec![false; n];
    for &pi in p {
        if pi >= n || seen[pi] {
            return Err(Error::LengthMismatch {
                what: "permutation (not a bijection)",
                expected: n,
                found: p.len(),
            });
        }
        seen[pi] = true;
    }
    Ok(())
}

/// Strip a permutation and a diagonal off a product P·A·D.
///
/// The permanent is multiplicative against permutation and diagonal factors:
/// per(P·A·D) = per(P)·per(A)·per(D) with per(P) = 1 and per(D) = ∏d_i. This
/// returns the row-permuted matrix `B[i, j] = A[p[i], j]` together with the
/// prefactor ∏d_i, so that per(P·A·D) = prefactor · per(B). The permuted
/// matrix is kept (rather than A itself) because the permutation is usually
/// doing useful work — e.g. bandwidth reduction — that the caller wants in
/// the reduced problem.
pub fn apply_simplification_rules(
    p: &[usize],
    a: &DenseMatrix,
    d: &[Complex64],
) -> Result<(DenseMatrix, Complex64)> {
    let (rows, cols) = a.dim();
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    check_permutation(p, rows)?;
    if d.len() != rows {
        return Err(Error::LengthMismatch { what: "diagonal", expected: rows, found: d.len() });
    }
    let permuted = Array2::from_shape_fn((rows, cols), |(i, j)| a[[p[i], j]]);
    let prefactor = d.iter().product();
    Ok((permuted, prefactor))
}
