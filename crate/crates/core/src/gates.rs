//! Circuit gates compiled from 1×1 and 2×2 blocks.
//!
//! A factor block (a b; c d) acting on variables X_k, X_{k+1} induces the
//! substitution X_k ↦ aX_k + bX_{k+1}, X_{k+1} ↦ cX_k + dX_{k+1} on
//! polynomials. On the monomial basis |n_k, n_{k+1}⟩ this expands, via the
//! binomial theorem, into a two-site gate whose coefficient for input
//! (m, p) → output (r+p−s, m−r+s) is C(m,r)·C(p,s)·a^r·b^{m−r}·c^{p−s}·d^s.
//! Total degree n_k + n_{k+1} is conserved, which makes the gates block
//! diagonal across degree sectors — kept here as a testable invariant, not a
//! storage format; coefficients are stored dense with structural zeros.
//!
//! Gates are rectangular in physical dimension: input degree cap d_in, output
//! degree cap d_out. Growing the output cap is how the circuit enlarges local
//! degree between layers, so no separate padding pass exists anywhere.

use ndarray::{Array4, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::factor::Block;

/// Largest n for which C(n, k) is exactly representable in an f64
/// (C(56, 28) < 2^53 < C(57, 28)).
const BINOMIAL_MAX_N: usize = 56;

/// Pascal-triangle rows 0..=n_max as exact doubles.
fn pascal_rows(n_max: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut row = vec![1.0; n + 1];
        for k in 1..n {
            row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// Exact binomial coefficient C(n, k), additive Pascal recursion (no
/// factorial ratios, so intermediates never overflow or round).
pub fn binomial(n: usize, k: usize) -> Result<f64> {
    if n > BINOMIAL_MAX_N || k > n {
        return Err(Error::OutOfRange { n, k, max: BINOMIAL_MAX_N });
    }
    Ok(pascal_rows(n)[n][k])
}

/// Diagonal gate of a 1×1 block (a): multiplies the |n⟩ component by a^n.
#[derive(Debug, Clone)]
pub struct SingleSiteGate {
    pub site: usize,
    pub d_in: usize,
    pub d_out: usize,
    /// `diag[n] = a^n` for n = 0..=d_in (so `diag[0]` = 1 exactly, 0^0 included).
    pub diag: Vec<Complex64>,
}

/// Two-site gate of a 2×2 block, coefficients indexed
/// [n'_k, n'_{k+1}, n_k, n_{k+1}] over (0..=d_out)² × (0..=d_in)².
#[derive(Debug, Clone)]
pub struct TwoSiteGate {
    /// Left site k; the gate acts on sites (k, k+1).
    pub site: usize,
    pub d_in: usize,
    pub d_out: usize,
    pub coeffs: Array4<Complex64>,
}

impl TwoSiteGate {
    /// The gate restricted to inputs of total degree t, as a matrix whose
    /// rows enumerate outputs and columns inputs, both ordered by descending
    /// first-site degree: (t, 0), (t−1, 1), …, (0, t), clipped to the caps.
    /// With this ordering the degree-1 sector is exactly the transpose of the
    /// originating block. Used by tests to check the sector laws.
    pub fn sector(&self, t: usize) -> ndarray::Array2<Complex64> {
        let basis = |cap: usize| -> Vec<(usize, usize)> {
            (0..=t.min(cap)).rev().filter(|&n| t - n <= cap).map(|n| (n, t - n)).collect()
        };
        let ins = basis(self.d_in);
        let outs = basis(self.d_out);
        ndarray::Array2::from_shape_fn((outs.len(), ins.len()), |(o, i)| {
            let (no, mo) = outs[o];
            let (ni, mi) = ins[i];
            self.coeffs[[no, mo, ni, mi]]
        })
    }

    /// Flattened (d_out+1)² × (d_in+1)² matrix view, outputs × inputs.
    pub fn as_matrix(&self) -> ArrayView2<'_, Complex64> {
        let (o1, o2, i1, i2) = self.coeffs.dim();
        self.coeffs.view().into_shape_with_order((o1 * o2, i1 * i2)).unwrap()
    }
}

/// Gate of a 1×1 block: `diag[n] = a^n`, n = 0..=d_in.
pub fn build_single_site_gate(b: &Block, site: usize, d_in: usize) -> Result<SingleSiteGate> {
    if b.size != 1 {
        return Err(Error::WrongBlockSize { expected: 1, got: b.size });
    }
    let a = b.entries[0];
    let mut diag = Vec::with_capacity(d_in + 1);
    let mut power = Complex64::new(1.0, 0.0);
    diag.push(power);
    for _ in 1..=d_in {
        power *= a;
        diag.push(power);
    }
    Ok(SingleSiteGate { site, d_in, d_out: d_in, diag })
}

/// Gate of a 2×2 block (a b; c d) with input cap d_in and output cap d_out.
///
/// `ceiling` is the global degree ceiling N: output degrees above N cannot
/// occur on states of total degree N, so d_out = N is always enough even when
/// 2·d_in exceeds it. Requesting d_out below min(2·d_in, ceiling) would
/// silently discard weight and is rejected.
pub fn build_two_site_gate(
    b: &Block,
    site: usize,
    d_in: usize,
    d_out: usize,
    ceiling: usize,
) -> Result<TwoSiteGate> {
    if b.size != 2 {
        return Err(Error::WrongBlockSize { expected: 2, got: b.size });
    }
    if d_out < (2 * d_in).min(ceiling) {
        return Err(Error::DegreeCapTooSmall { d_in, d_out, ceiling });
    }
    let (ba, bb, bc, bd) = (b.entries[0], b.entries[1], b.entries[2], b.entries[3]);

    // Power tables x^0..=x^{d_in}; 0^0 = 1 by the empty-product convention.
    let powers = |x: Complex64| -> Vec<Complex64> {
        let mut v = Vec::with_capacity(d_in + 1);
        let mut acc = Complex64::new(1.0, 0.0);
        v.push(acc);
        for _ in 1..=d_in {
            acc *= x;
            v.push(acc);
        }
        v
    };
    let (pa, pb, pc, pd) = (powers(ba), powers(bb), powers(bc), powers(bd));
    let pascal = pascal_rows(d_in);

    let mut coeffs = Array4::zeros((d_out + 1, d_out + 1, d_in + 1, d_in + 1));
    for m in 0..=d_in {
        for p in 0..=d_in {
            for r in 0..=m {
                for s in 0..=p {
                    let out_k = r + p - s;
                    let out_k1 = m - r + s;
                    if out_k > d_out || out_k1 > d_out {
                        // Only reachable when m + p exceeds the ceiling; such
                        // inputs carry no weight on degree-N states.
                        continue;
                    }
                    let w = pascal[m][r] * pascal[p][s];
                    coeffs[[out_k, out_k1, m, p]] += w * pa[r] * pb[m - r] * pc[p - s] * pd[s];
                }
            }
        }
    }
    Ok(TwoSiteGate { site, d_in, d_out, coeffs })
}
