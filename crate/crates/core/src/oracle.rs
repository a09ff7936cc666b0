//! Brute-force permanents, used as ground truth everywhere else.
//!
//! Three independent routes with different structure: full permutation
//! enumeration (exponential-factorial, N ≤ 10), Ryser's inclusion–exclusion
//! with Gray-code subset iteration (O(N·2^N), N ≤ 24), and the three-term
//! recurrence for tridiagonal matrices (O(N)). The size caps are hard errors:
//! these are test equipment, and a silently multi-hour oracle run is worse
//! than a loud failure.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

const NAIVE_MAX: usize = 10;
const RYSER_MAX: usize = 24;

fn require_square(a: &DenseMatrix) -> Result<usize> {
    let (rows, cols) = a.dim();
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    if rows == 0 {
        return Err(Error::SizeMismatch { what: "matrix dimension", expected: 1, found: 0 });
    }
    Ok(rows)
}

/// per(A) = ∑_{π∈S_N} ∏_i A[i, π(i)] by explicit enumeration.
pub fn permanent_naive(a: &DenseMatrix) -> Result<Complex64> {
    let n = require_square(a)?;
    if n > NAIVE_MAX {
        return Err(Error::TooLarge { what: "permanent_naive", max: NAIVE_MAX, got: n });
    }

    // Depth-first over rows, carrying the prefix product; `used` marks taken columns.
    fn go(a: &DenseMatrix, n: usize, row: usize, used: u32, prefix: Complex64) -> Complex64 {
        if row == n {
            return prefix;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for col in 0..n {
            if used & (1 << col) == 0 {
                acc += go(a, n, row + 1, used | (1 << col), prefix * a[[row, col]]);
            }
        }
        acc
    }
    Ok(go(a, n, 0, 0, Complex64::new(1.0, 0.0)))
}

/// Ryser's formula, `per(A) = (−1)^N ∑_{∅≠S⊆[N]} (−1)^{|S|} ∏_i ∑_{j∈S} A[i, j]`,
/// walking subsets in Gray-code order so each step updates the row sums by a
/// single column.
pub fn permanent_ryser(a: &DenseMatrix) -> Result<Complex64> {
    let n = require_square(a)?;
    if n > RYSER_MAX {
        return Err(Error::TooLarge { what: "permanent_ryser", max: RYSER_MAX, got: n });
    }

    let mut row_sums = vec![Complex64::new(0.0, 0.0); n];
    let mut total = Complex64::new(0.0, 0.0);
    for k in 1u64..(1u64 << n) {
        // gray(k) and gray(k−1) differ exactly in bit trailing_zeros(k).
        let gray = k ^ (k >> 1);
        let j = k.trailing_zeros() as usize;
        if gray & (1 << j) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a[[i, j]];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= a[[i, j]];
            }
        }
        let prod: Complex64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if n % 2 == 1 {
        total = -total;
    }
    Ok(total)
}

/// Permanent of a tridiagonal matrix by the recurrence
/// `p_k = A[k,k]·p_{k−1} + A[k,k−1]·A[k−1,k]·p_{k−2}`, p_0 = 1.
pub fn permanent_tridiagonal(a: &DenseMatrix) -> Result<Complex64> {
    let n = require_square(a)?;
    for ((i, j), z) in a.indexed_iter() {
        if i.abs_diff(j) > 1 && *z != Complex64::new(0.0, 0.0) {
            return Err(Error::NotTridiagonal { row: i, col: j });
        }
    }
    let mut p_prev2 = Complex64::new(1.0, 0.0); // p_{k−2}
    let mut p_prev = a[[0, 0]]; // p_1
    if n == 1 {
        return Ok(p_prev);
    }
    for k in 2..=n {
        let i = k - 1;
        let p = a[[i, i]] * p_prev + a[[i, i - 1]] * a[[i - 1, i]] * p_prev2;
        p_prev2 = p_prev;
        p_prev = p;
    }
    Ok(p_prev)
}
