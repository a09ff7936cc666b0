//! Producing block factorizations: a random instance generator, a
//! bandwidth-reducing reordering, and an elementary decomposition of small
//! dense matrices into adjacent 2×2 factors.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor::{validate_factorization, Block, BlockDiagonalFactor, BlockFactorization};
use crate::matrix::DenseMatrix;
use crate::mps::svd;

/// Dense matrix with re and im of every entry drawn uniformly from [−1, 1),
/// deterministically from the seed.
pub fn random_dense(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<Complex64> = (0..rows * cols)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    Array2::from_shape_vec((rows, cols), data).expect("shape matches data length")
}

/// Random factorization: each factor tiles [0, n) greedily left to right,
/// placing a 2×2 block with probability `block_density` wherever one fits and
/// a 1×1 block otherwise. Entries have re, im uniform in [−1, 1). Identical
/// seeds give identical output.
pub fn generate_random_factorization(
    n: usize,
    l: usize,
    seed: u64,
    block_density: f64,
) -> BlockFactorization {
    assert!(n >= 1 && l >= 1, "generator needs n ≥ 1 and l ≥ 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    };
    let factors = (0..l)
        .map(|_| {
            let mut blocks = Vec::new();
            let mut cursor = 0;
            while cursor < n {
                if cursor + 1 < n && rng.random_range(0.0..1.0) < block_density {
                    let entries =
                        [draw(&mut rng), draw(&mut rng), draw(&mut rng), draw(&mut rng)];
                    blocks.push(Block::pair(cursor, entries));
                    cursor += 2;
                } else {
                    blocks.push(Block::single(cursor, draw(&mut rng)));
                    cursor += 1;
                }
            }
            BlockDiagonalFactor { dim: n, blocks }
        })
        .collect();
    let f = BlockFactorization { dim: n, factors };
    debug_assert!(validate_factorization(&f).is_ok());
    f
}

/// Reverse Cuthill–McKee ordering on the symmetrized nonzero pattern of `a`
/// (an entry counts as nonzero when its magnitude exceeds `zero_threshold`).
/// Renumbering a matrix symmetrically by the result tends to gather its
/// nonzeros into a narrow band; the permanent is unchanged by any such
/// simultaneous row/column renumbering.
pub fn rcm_permutation(a: &DenseMatrix, zero_threshold: f64) -> Result<Vec<usize>> {
    let (n, cols) = a.dim();
    if n != cols {
        return Err(Error::NonSquare { rows: n, cols });
    }

    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i != j
                && (a[[i, j]].norm() > zero_threshold || a[[j, i]].norm() > zero_threshold)
            {
                neighbours[i].push(j);
            }
        }
    }
    let degree: Vec<usize> = neighbours.iter().map(Vec::len).collect();
    // Visit neighbours in increasing degree (ties by index) — the classic
    // Cuthill–McKee tie-break, and what makes the output deterministic.
    for list in &mut neighbours {
        list.sort_by_key(|&v| (degree[v], v));
    }

    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    // Start each component from its minimum-degree vertex.
    while let Some(start) =
        (0..n).filter(|&v| !visited[v]).min_by_key(|&v| (degree[v], v))
    {
        visited[start] = true;
        order.push(start);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head];
            for &w in &neighbours[v] {
                if !visited[w] {
                    visited[w] = true;
                    order.push(w);
                }
            }
            head += 1;
        }
    }
    order.reverse();
    Ok(order)
}

const DECOMPOSE_MAX_N: usize = 8;
const SINGULARITY_RTOL: f64 = 1e-12;

/// Decompose a small invertible matrix into a product of factors that are
/// each the identity except for one adjacent 2×2 block (plus one diagonal
/// layer of 1×1 blocks), so the result feeds straight into the contraction
/// engine. `reconstruct` of the output equals the input up to roundoff.
///
/// The construction peels one border index at a time: unitary adjacent-row
/// rotations clear the leading column bottom-up, adjacent-column rotations
/// clear the leading row right-to-left down to the superdiagonal, and one
/// column shear (whose pivot the row sweep has made nonzero) removes the
/// superdiagonal entry. What remains is diagonal except for a trailing 2×2
/// core. Row operations are unitary, so their inverses are their adjoints;
/// column shears invert by negating the shear coefficient — both exact.
pub fn decompose_dense_block(m: &DenseMatrix) -> Result<BlockFactorization> {
    let (n, cols) = m.dim();
    if n != cols {
        return Err(Error::NonSquare { rows: n, cols });
    }
    if n == 0 {
        return Err(Error::SizeMismatch { what: "matrix dimension", expected: 1, found: 0 });
    }
    if n > DECOMPOSE_MAX_N {
        return Err(Error::TooLarge { what: "decomposition dimension", max: DECOMPOSE_MAX_N, got: n });
    }

    let dec = svd(m)?;
    let sigma_max = dec.singular[0];
    let sigma_min = *dec.singular.last().unwrap();
    if sigma_min <= SINGULARITY_RTOL * sigma_max {
        let condition = if sigma_min > 0.0 { sigma_max / sigma_min } else { f64::INFINITY };
        return Err(Error::Singular { condition });
    }

    if n == 1 {
        let factor = BlockDiagonalFactor { dim: 1, blocks: vec![Block::single(0, m[[0, 0]])] };
        return Ok(BlockFactorization { dim: 1, factors: vec![factor] });
    }
    if n == 2 {
        let entries = [m[[0, 0]], m[[0, 1]], m[[1, 0]], m[[1, 1]]];
        let factor =
            BlockDiagonalFactor { dim: 2, blocks: vec![Block::pair(0, entries)] };
        return Ok(BlockFactorization { dim: 2, factors: vec![factor] });
    }

    let mut w = m.clone();
    // Inverses of the left row operations, in the order they must appear in
    // the output product (application order, adjoints).
    let mut left_inverses: Vec<BlockDiagonalFactor> = Vec::new();
    // Right column operations in application order; inverted and reversed at
    // the end.
    let mut right_inverses_rev: Vec<BlockDiagonalFactor> = Vec::new();

    for k in 0..n - 2 {
        // Clear column k below the diagonal, bottom-up, with adjacent-row
        // rotations; all the column's mass accumulates in w[k, k].
        for i in (k + 1..n).rev() {
            let a = w[[i - 1, k]];
            let b = w[[i, k]];
            if b.norm() == 0.0 {
                continue;
            }
            let rho = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let u = [a.conj() / rho, b.conj() / rho, -b / rho, a / rho];
            for j in 0..n {
                let x = w[[i - 1, j]];
                let y = w[[i, j]];
                w[[i - 1, j]] = u[0] * x + u[1] * y;
                w[[i, j]] = u[2] * x + u[3] * y;
            }
            // (U^†) block: the inverse of the rotation just applied.
            let adj = [u[0].conj(), u[2].conj(), u[1].conj(), u[3].conj()];
            left_inverses.push(elementary_factor(n, i - 1, adj));
        }

        // Clear row k right-to-left down to the superdiagonal with
        // adjacent-column rotations.
        for j in (k + 2..n).rev() {
            let a = w[[k, j - 1]];
            let b = w[[k, j]];
            if b.norm() == 0.0 {
                continue;
            }
            let rho = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let v = [a.conj() / rho, -b / rho, b.conj() / rho, a / rho];
            apply_column_op(&mut w, j - 1, v);
            let adj = [v[0].conj(), v[2].conj(), v[1].conj(), v[3].conj()];
            right_inverses_rev.push(elementary_factor(n, j - 1, adj));
        }

        // One shear kills the superdiagonal entry; w[k, k] carries the whole
        // original column norm, so the pivot is safely nonzero.
        let t = w[[k, k + 1]];
        if t.norm() > 0.0 {
            let alpha = -t / w[[k, k]];
            let shear = [
                Complex64::new(1.0, 0.0),
                alpha,
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ];
            apply_column_op(&mut w, k, shear);
            let inverse = [
                Complex64::new(1.0, 0.0),
                -alpha,
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ];
            right_inverses_rev.push(elementary_factor(n, k, inverse));
        }
    }

    // What remains: diagonal on 0..n−2, one 2×2 core on the last two indices.
    let mut factors = left_inverses;
    let diag_blocks = (0..n)
        .map(|k| {
            if k < n - 2 {
                Block::single(k, w[[k, k]])
            } else {
                Block::single(k, Complex64::new(1.0, 0.0))
            }
        })
        .collect();
    factors.push(BlockDiagonalFactor { dim: n, blocks: diag_blocks });
    let core = [
        w[[n - 2, n - 2]],
        w[[n - 2, n - 1]],
        w[[n - 1, n - 2]],
        w[[n - 1, n - 1]],
    ];
    factors.push(elementary_factor(n, n - 2, core));
    factors.extend(right_inverses_rev.into_iter().rev());

    let result = BlockFactorization { dim: n, factors };
    validate_factorization(&result)?;
    Ok(result)
}

/// Identity factor except for the 2×2 block [a, b; c, d] at sites (pos, pos+1).
fn elementary_factor(n: usize, pos: usize, entries: [Complex64; 4]) -> BlockDiagonalFactor {
    let one = Complex64::new(1.0, 0.0);
    let mut blocks: Vec<Block> = (0..pos).map(|k| Block::single(k, one)).collect();
    blocks.push(Block::pair(pos, entries));
    blocks.extend((pos + 2..n).map(|k| Block::single(k, one)));
    BlockDiagonalFactor { dim: n, blocks }
}

/// Right-multiply by the matrix that is identity except for the 2×2 block
/// `v` = [v0, v1; v2, v3] on columns (j, j+1).
fn apply_column_op(w: &mut DenseMatrix, j: usize, v: [Complex64; 4]) {
    for r in 0..w.nrows() {
        let x = w[[r, j]];
        let y = w[[r, j + 1]];
        w[[r, j]] = v[0] * x + v[2] * y;
        w[[r, j + 1]] = v[1] * x + v[3] * y;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::reconstruct;
    use crate::matrix::{bandwidth_thresholded, check_permutation};
    use crate::oracle::permanent_ryser;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn frobenius(m: &DenseMatrix) -> f64 {
        m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn random_dense_is_deterministic_and_in_range() {
        let a = random_dense(5, 7, 123);
        let b = random_dense(5, 7, 123);
        assert_eq!(a, b);
        assert_ne!(a, random_dense(5, 7, 124));
        for z in a.iter() {
            assert!(z.re >= -1.0 && z.re < 1.0 && z.im >= -1.0 && z.im < 1.0);
        }
    }

    #[test]
    fn generator_is_deterministic_per_seed() {
        let a = generate_random_factorization(9, 3, 77, 0.5);
        let b = generate_random_factorization(9, 3, 77, 0.5);
        assert_eq!(a.dim, b.dim);
        for (fa, fb) in a.factors.iter().zip(&b.factors) {
            assert_eq!(fa.blocks.len(), fb.blocks.len());
            for (ba, bb) in fa.blocks.iter().zip(&fb.blocks) {
                assert_eq!(ba.start, bb.start);
                assert_eq!(ba.size, bb.size);
                assert_eq!(ba.entries, bb.entries);
            }
        }
    }

    #[test]
    fn generator_density_extremes() {
        let diag = generate_random_factorization(8, 3, 5, 0.0);
        for factor in &diag.factors {
            assert!(factor.blocks.iter().all(|b| b.size == 1));
        }
        let paired = generate_random_factorization(8, 3, 5, 1.0);
        for factor in &paired.factors {
            assert!(factor.blocks.iter().all(|b| b.size == 2));
        }
        // Odd dimension forces one trailing 1×1 even at density 1.
        let odd = generate_random_factorization(7, 2, 5, 1.0);
        for factor in &odd.factors {
            let (pairs, singles): (Vec<_>, Vec<_>) =
                factor.blocks.iter().partition(|b| b.size == 2);
            assert_eq!(pairs.len(), 3);
            assert_eq!(singles.len(), 1);
            assert_eq!(singles[0].start, 6);
        }
    }

    #[test]
    fn generator_output_validates() {
        for seed in 0..20 {
            let f = generate_random_factorization(1 + (seed as usize % 13), 1 + (seed as usize % 4), seed, 0.5);
            assert!(validate_factorization(&f).is_ok());
        }
    }

    #[test]
    fn rcm_keeps_tridiagonal_banded() {
        let n = 8;
        let mut a: DenseMatrix = Array2::zeros((n, n));
        for i in 0..n {
            a[[i, i]] = c(2.0, 0.0);
            if i + 1 < n {
                a[[i, i + 1]] = c(1.0, 0.0);
                a[[i + 1, i]] = c(1.0, 0.0);
            }
        }
        let original = bandwidth_thresholded(&a, 0.0).unwrap();
        let p = rcm_permutation(&a, 0.0).unwrap();
        check_permutation(&p, n).unwrap();
        let permuted = Array2::from_shape_fn((n, n), |(i, j)| a[[p[i], p[j]]]);
        assert!(bandwidth_thresholded(&permuted, 0.0).unwrap() <= original);
    }

    #[test]
    fn rcm_recovers_a_scrambled_band() {
        // Scatter a tridiagonal pattern with a fixed scrambling, then check
        // the ordering brings it back to bandwidth 1.
        let n = 9;
        let scramble = [4usize, 0, 7, 2, 8, 1, 6, 3, 5];
        check_permutation(&scramble, n).unwrap();
        let mut a: DenseMatrix = Array2::zeros((n, n));
        for i in 0..n {
            a[[scramble[i], scramble[i]]] = c(1.0, 1.0);
            if i + 1 < n {
                a[[scramble[i], scramble[i + 1]]] = c(1.0, 0.0);
                a[[scramble[i + 1], scramble[i]]] = c(-1.0, 0.5);
            }
        }
        assert!(bandwidth_thresholded(&a, 0.0).unwrap() > 1);
        let p = rcm_permutation(&a, 0.0).unwrap();
        let permuted = Array2::from_shape_fn((n, n), |(i, j)| a[[p[i], p[j]]]);
        assert_eq!(bandwidth_thresholded(&permuted, 0.0).unwrap(), 1);
    }

    #[test]
    fn symmetric_renumbering_preserves_the_permanent() {
        for seed in [21u64, 22, 23] {
            let mut a = random_dense(7, 7, seed);
            // Sparsify so the ordering has something to chew on.
            for (idx, z) in a.indexed_iter_mut() {
                if (idx.0 * 31 + idx.1 * 17 + seed as usize).is_multiple_of(3) {
                    *z = c(0.0, 0.0);
                }
            }
            let p = rcm_permutation(&a, 0.0).unwrap();
            check_permutation(&p, 7).unwrap();
            let permuted = Array2::from_shape_fn((7, 7), |(i, j)| a[[p[i], p[j]]]);
            let before = permanent_ryser(&a).unwrap();
            let after = permanent_ryser(&permuted).unwrap();
            assert!(
                (before - after).norm() <= 1e-10 * before.norm().max(1.0),
                "seed {seed}: {before} vs {after}"
            );
        }
    }

    #[test]
    fn rcm_rejects_non_square() {
        let a = random_dense(3, 4, 1);
        assert!(matches!(rcm_permutation(&a, 0.0), Err(Error::NonSquare { rows: 3, cols: 4 })));
    }

    #[test]
    fn decompose_scalar_and_two_by_two_are_single_factors() {
        let m1 = array![[c(3.5, -1.0)]];
        let f = decompose_dense_block(&m1).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].blocks[0].entries, vec![c(3.5, -1.0)]);

        let m2 = array![[c(1.0, 0.0), c(2.0, 1.0)], [c(0.5, -0.5), c(4.0, 0.0)]];
        let f = decompose_dense_block(&m2).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert_eq!(f.factors[0].blocks.len(), 1);
        assert_eq!(f.factors[0].blocks[0].size, 2);
        let back = reconstruct(&f).unwrap();
        assert_eq!(back, m2);
    }

    #[test]
    fn decompose_round_trips_seeded_matrices() {
        for n in 3..=6 {
            for seed in [100u64, 200, 300] {
                let m = random_dense(n, n, seed + n as u64);
                let f = decompose_dense_block(&m).unwrap();
                assert!(f.factors.len() <= n * (n - 1));
                let back = reconstruct(&f).unwrap();
                let err = frobenius(&(&back - &m));
                assert!(
                    err <= 1e-9 * frobenius(&m),
                    "n={n} seed={seed}: residual {err}"
                );
            }
        }
    }

    #[test]
    fn decompose_factors_have_at_most_one_pair_block() {
        let m = random_dense(5, 5, 17);
        let f = decompose_dense_block(&m).unwrap();
        for factor in &f.factors {
            let pairs = factor.blocks.iter().filter(|b| b.size == 2).count();
            assert!(pairs <= 1);
            // Every other block is a 1×1 (identity or diagonal entry).
            for b in &factor.blocks {
                assert!(b.size == 1 || b.size == 2);
            }
        }
    }

    #[test]
    fn decompose_feeds_the_engine() {
        for seed in [41u64, 42] {
            let m = random_dense(5, 5, seed);
            let f = decompose_dense_block(&m).unwrap();
            let (value, _) = crate::engine::compute_permanent(&f, 1e-12).unwrap();
            let want = permanent_ryser(&m).unwrap();
            let got = value.value();
            assert!(
                (got - want).norm() <= 1e-8 * want.norm().max(1.0),
                "seed {seed}: engine {got} vs ryser {want}"
            );
        }
    }

    #[test]
    fn decompose_rejects_singular_and_oversize_input() {
        let singular = array![
            [c(1.0, 0.0), c(1.0, 0.0)],
            [c(1.0, 0.0), c(1.0, 0.0)],
        ];
        match decompose_dense_block(&singular) {
            Err(Error::Singular { condition }) => assert!(condition > 1e12),
            other => panic!("expected singular rejection, got {other:?}"),
        }

        let wide = random_dense(2, 3, 1);
        assert!(matches!(decompose_dense_block(&wide), Err(Error::NonSquare { .. })));

        let big = random_dense(9, 9, 1);
        assert!(matches!(
            decompose_dense_block(&big),
            Err(Error::TooLarge { max: 8, got: 9, .. })
        ));
    }

    #[test]
    fn decompose_handles_structured_inputs() {
        // Upper triangular, permutation-like, and near-diagonal matrices all
        // exercise the zero-skipping paths.
        let upper = array![
            [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)],
            [c(0.0, 0.0), c(4.0, 0.0), c(5.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(6.0, 0.0)],
        ];
        let anti = array![
            [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            [c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ];
        let diag = array![
            [c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(0.0, 0.0), c(5.0, 1.0)],
        ];
        for m in [upper, anti, diag] {
            let f = decompose_dense_block(&m).unwrap();
            let back = reconstruct(&f).unwrap();
            let err = frobenius(&(&back - &m));
            assert!(err <= 1e-9 * frobenius(&m).max(1.0), "residual {err} for {m:?}");
        }
    }
}
