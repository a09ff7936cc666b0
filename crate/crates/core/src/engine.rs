//! The contraction pipeline: factors → gate layers → MPS sweep → readout.
//!
//! A factorization A = F_1 F_2 ⋯ F_L acts on polynomials through the
//! substitution homomorphism Φ_M : X_i ↦ Σ_j M_{ij} X_j, and composition
//! reverses the product order: Φ_A = Φ_{F_L} ∘ ⋯ ∘ Φ_{F_1}. The permanent of A
//! is the coefficient of X_1⋯X_N in Φ_A(X_1⋯X_N), so the engine starts from
//! the state encoding X_1⋯X_N, applies one gate layer per factor — F_1's layer
//! first — and reads out that coefficient.
//!
//! Local degrees at most double per layer and never need to exceed N, giving
//! the per-layer output caps of [`degree_schedule`]; gates are built
//! rectangular from the previous cap to the next, so site dimensions grow in
//! lockstep with what the polynomial can actually contain.

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{validate_factorization, BlockFactorization};
use crate::gates::{build_single_site_gate, build_two_site_gate};
use crate::mps::{
    apply_single_site_gate, apply_two_site_gate, init_all_ones_state, normalize_and_accumulate,
    readout_all_ones,
};
use crate::scalar::ScaledComplex;

/// Instrumentation from one contraction run.
#[derive(Debug, Clone, Serialize)]
pub struct RunStats {
    /// Largest bond dimension observed anywhere in the sweep.
    pub max_bond: usize,
    /// Largest bond dimension after each layer.
    pub per_layer_bonds: Vec<usize>,
    /// Uniform site degree (phys_dim − 1) measured after each layer.
    pub per_layer_phys: Vec<usize>,
    /// Wall-clock seconds for the whole contraction.
    pub wall_time: f64,
    /// Number of two-site updates (one SVD each).
    pub svd_count: usize,
    /// Total singular values discarded across all updates.
    pub truncated_rank_total: usize,
}

/// Output degree cap per layer: doubling from 2, saturating at n.
pub fn degree_schedule(n: usize, l: usize) -> Vec<usize> {
    assert!(n >= 1 && l >= 1, "schedule needs n ≥ 1 and l ≥ 1");
    (0..l)
        .map(|i| if i + 1 >= usize::BITS as usize { n } else { (1usize << (i + 1)).min(n) })
        .collect()
}

/// Contract the factorization against |1̂⟩ and return the permanent of the
/// reconstructed matrix together with run statistics.
///
/// Layers run in factor order (F_1 first); within a layer, blocks are applied
/// in ascending site order (they act on disjoint sites, so any order gives the
/// same state). Site tensors are max-renormalized after every layer, with the
/// factored-out magnitudes accumulated in the state's scale.
pub fn compute_permanent(
    f: &BlockFactorization,
    tolerance: f64,
) -> Result<(ScaledComplex, RunStats)> {
    validate_factorization(f)?;
    let n = f.dim;
    let l = f.factors.len();
    let caps = degree_schedule(n, l);

    let start = Instant::now();
    let mut state = init_all_ones_state(n);
    let mut per_layer_bonds = Vec::with_capacity(l);
    let mut per_layer_phys = Vec::with_capacity(l);
    let mut svd_count = 0usize;
    let mut truncated_rank_total = 0usize;

    for (i, factor) in f.factors.iter().enumerate() {
        let d_out = caps[i];
        let d_in = if i == 0 { 1 } else { caps[i - 1] };
        for block in &factor.blocks {
            match block.size {
                1 => {
                    let g = build_single_site_gate(block, block.start, d_out)?;
                    apply_single_site_gate(&mut state, &g)?;
                }
                2 => {
                    let g = build_two_site_gate(block, block.start, d_in, d_out, n)?;
                    let report = apply_two_site_gate(&mut state, &g, tolerance)?;
                    svd_count += 1;
                    truncated_rank_total += report.discarded;
                }
                other => {
                    return Err(Error::OversizeBlock { factor: i, block: block.start, size: other })
                }
            }
        }
        for k in 0..n {
            normalize_and_accumulate(&mut state, k);
        }
        per_layer_bonds.push(state.max_bond());
        let phys = state.phys_dims();
        debug_assert!(phys.iter().all(|&p| p == phys[0]), "sites grow in lockstep");
        per_layer_phys.push(phys.iter().copied().max().unwrap_or(1) - 1);
    }

    let value = readout_all_ones(&state);
    let stats = RunStats {
        max_bond: per_layer_bonds.iter().copied().max().unwrap_or(1),
        per_layer_bonds,
        per_layer_phys,
        wall_time: start.elapsed().as_secs_f64(),
        svd_count,
        truncated_rank_total,
    };
    Ok((value, stats))
}

const DENSE_REFERENCE_MAX_N: usize = 8;

/// Mid-level oracle: propagate the monomial X_1⋯X_N through each Φ_{F_i} as an
/// explicit sparse polynomial and read the coefficient of X_1⋯X_N at the end.
///
/// Substitutions are expanded by repeated multiplication with the linear
/// polynomials a·X_k + b·X_{k+1}, sharing no machinery with the gate builder,
/// so agreement between this, the MPS engine, and the permanent oracles pins
/// all three routes independently.
pub fn compute_permanent_dense_reference(f: &BlockFactorization) -> Result<Complex64> {
    validate_factorization(f)?;
    let n = f.dim;
    if n > DENSE_REFERENCE_MAX_N {
        return Err(Error::TooLarge { what: "dense reference dimension", max: DENSE_REFERENCE_MAX_N, got: n });
    }

    type Poly = BTreeMap<Vec<u8>, Complex64>;
    let mut poly: Poly = BTreeMap::new();
    poly.insert(vec![1u8; n], Complex64::new(1.0, 0.0));

    for factor in &f.factors {
        for block in &factor.blocks {
            let mut next: Poly = BTreeMap::new();
            match block.size {
                1 => {
                    // X_k ↦ α X_k multiplies each monomial by α^{m_k}.
                    let alpha = block.entries[0];
                    for (mono, coef) in &poly {
                        let scaled = *coef * alpha.powu(mono[block.start] as u32);
                        if scaled != Complex64::new(0.0, 0.0) {
                            *next.entry(mono.clone()).or_insert(Complex64::new(0.0, 0.0)) +=
                                scaled;
                        }
                    }
                }
                2 => {
                    let k = block.start;
                    let [a, b, c, d] =
                        [block.entries[0], block.entries[1], block.entries[2], block.entries[3]];
                    for (mono, coef) in &poly {
                        // (aX_k + bX_{k+1})^{m_k} (cX_k + dX_{k+1})^{m_{k+1}},
                        // built one linear factor at a time over exponent
                        // pairs (local degree in X_k, local degree in X_{k+1}).
                        let mut local: BTreeMap<(u8, u8), Complex64> = BTreeMap::new();
                        local.insert((0, 0), Complex64::new(1.0, 0.0));
                        for _ in 0..mono[k] {
                            local = multiply_linear(&local, a, b);
                        }
                        for _ in 0..mono[k + 1] {
                            local = multiply_linear(&local, c, d);
                        }
                        for ((dk, dk1), w) in local {
                            let total = *coef * w;
                            if total == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            let mut out = mono.clone();
                            out[k] = dk;
                            out[k + 1] = dk1;
                            *next.entry(out).or_insert(Complex64::new(0.0, 0.0)) += total;
                        }
                    }
                }
                other => {
                    return Err(Error::OversizeBlock { factor: 0, block: block.start, size: other })
                }
            }
            poly = next;
        }
    }

    Ok(poly.get(&vec![1u8; n]).copied().unwrap_or(Complex64::new(0.0, 0.0)))
}

/// Multiply a bivariate polynomial by u·X_k + v·X_{k+1} in exponent-pair form.
fn multiply_linear(
    p: &BTreeMap<(u8, u8), Complex64>,
    u: Complex64,
    v: Complex64,
) -> BTreeMap<(u8, u8), Complex64> {
    let mut out = BTreeMap::new();
    for (&(dk, dk1), &w) in p {
        if u != Complex64::new(0.0, 0.0) {
            *out.entry((dk + 1, dk1)).or_insert(Complex64::new(0.0, 0.0)) += w * u;
        }
        if v != Complex64::new(0.0, 0.0) {
            *out.entry((dk, dk1 + 1)).or_insert(Complex64::new(0.0, 0.0)) += w * v;
        }
    }
    out
}
