//! Matrix product states and the SVD-based two-site update.
//!
//! A state over N sites is a chain of rank-3 tensors `B^[k]` with axes
//! (physical, left bond, right bond) and boundary bond dimension 1. The
//! coefficient of |n_1 … n_N⟩ is the matrix product
//! `B^[1]_{n_1} · B^[2]_{n_2} ⋯ B^[N]_{n_N}`, times the accumulated scalar
//! `log_scale` factored out by normalization.
//!
//! Two-site gates are applied by contracting the site pair into one tensor,
//! acting with the gate on the joint physical index, regrouping into a
//! ((d_out+1)·D_left) × ((d_out+1)·D_right) matrix, and splitting back with an
//! SVD. Singular values at or below tolerance·σ_max are discarded; the gates
//! here are exact circuit compilations, so everything truncated is numerical
//! noise rank.

use ndarray::{s, Array1, Array2, Array3, ArrayD, Axis, IxDyn};
use ndarray_linalg::{JobSvd, SVDDC};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::{SingleSiteGate, TwoSiteGate};
use crate::matrix::DenseMatrix;
use crate::scalar::ScaledComplex;

/// One site tensor, axes (phys, left, right).
#[derive(Debug, Clone)]
pub struct SiteTensor {
    pub data: Array3<Complex64>,
}

impl SiteTensor {
    pub fn phys_dim(&self) -> usize {
        self.data.dim().0
    }
    pub fn left_dim(&self) -> usize {
        self.data.dim().1
    }
    pub fn right_dim(&self) -> usize {
        self.data.dim().2
    }
}

/// The evolving circuit state.
#[derive(Debug, Clone)]
pub struct MatrixProductState {
    pub sites: Vec<SiteTensor>,
    /// Scalar factored out by [`normalize_and_accumulate`]; the represented
    /// vector is log_scale × (tensor contraction).
    pub log_scale: ScaledComplex,
}

impl MatrixProductState {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Largest interior bond dimension (1 for a single-site state).
    pub fn max_bond(&self) -> usize {
        self.sites.iter().take(self.sites.len().saturating_sub(1)).map(|t| t.right_dim()).max().unwrap_or(1)
    }

    /// Physical dimensions per site.
    pub fn phys_dims(&self) -> Vec<usize> {
        self.sites.iter().map(|t| t.phys_dim()).collect()
    }
}

/// Economy SVD: u (m×k) and v (n×k) with orthonormal columns, singular values
/// non-increasing, k = min(m, n), and u·diag(singular)·v^† reconstructing the
/// input.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: Array2<Complex64>,
    pub singular: Vec<f64>,
    pub v: Array2<Complex64>,
    pub rank: usize,
}

/// Complex SVD via LAPACK's divide-and-conquer routine (deterministic for a
/// fixed input; fails loudly on non-convergence instead of returning junk).
pub fn svd(m: &DenseMatrix) -> Result<SvdResult> {
    let (rows, cols) = m.dim();
    if rows == 0 || cols == 0 {
        return Err(Error::SizeMismatch { what: "svd input", expected: 1, found: 0 });
    }
    let (u, s, vt) = m
        .svddc(JobSvd::Some)
        .map_err(|_| Error::ConvergenceFailure { rows, cols })?;
    let u = u.expect("JobSvd::Some always produces U");
    let vt = vt.expect("JobSvd::Some always produces V^T");
    // Materialize in row-major layout: downstream reshapes assume it.
    let v = vt
        .t()
        .as_standard_layout()
        .into_owned()
        .mapv_into(|z| z.conj());
    let singular: Vec<f64> = s.to_vec();
    let rank = singular.len();
    Ok(SvdResult { u, singular, v, rank })
}

/// The state |1̂⟩ = |11…1⟩: every site has phys_dim 2, bond dims 1, and the
/// n=1 component set.
pub fn init_all_ones_state(n: usize) -> MatrixProductState {
    assert!(n >= 1, "state needs at least one site");
    let sites = (0..n)
        .map(|_| {
            let mut data = Array3::zeros((2, 1, 1));
            data[[1, 0, 0]] = Complex64::new(1.0, 0.0);
            SiteTensor { data }
        })
        .collect();
    MatrixProductState { sites, log_scale: ScaledComplex::one() }
}

/// Scale each physical component n by `diag[n]`. A gate with d_in+1 larger than
/// the site's current physical dimension enlarges the site (missing degrees
/// hold zero coefficient, so embedding is exact); a smaller gate is an error.
pub fn apply_single_site_gate(state: &mut MatrixProductState, g: &SingleSiteGate) -> Result<()> {
    let site = &mut state.sites[g.site];
    let (phys, l, r) = site.data.dim();
    if phys > g.d_in + 1 {
        return Err(Error::DimMismatch { site: g.site, expected: g.d_in + 1, found: phys });
    }
    let mut data = Array3::zeros((g.d_in + 1, l, r));
    for n in 0..phys {
        let scaled = site.data.index_axis(Axis(0), n).mapv(|z| z * g.diag[n]);
        data.index_axis_mut(Axis(0), n).assign(&scaled);
    }
    site.data = data;
    Ok(())
}

/// What a two-site update did to the shared bond.
#[derive(Debug, Clone, Copy)]
pub struct TruncationReport {
    pub retained: usize,
    pub discarded: usize,
}

/// Contract sites (k, k+1), apply the gate over the joint physical index,
/// regroup, SVD, and split, keeping singular values > tolerance·σ_max.
pub fn apply_two_site_gate(
    state: &mut MatrixProductState,
    g: &TwoSiteGate,
    tolerance: f64,
) -> Result<TruncationReport> {
    let k = g.site;
    assert!(k + 1 < state.sites.len(), "two-site gate needs a right neighbour");
    let (p1, dl, dm) = state.sites[k].data.dim();
    let (p2, dm2, dr) = state.sites[k + 1].data.dim();
    debug_assert_eq!(dm, dm2, "adjacent tensors share their bond");
    let din = g.d_in + 1;
    if p1 > din {
        return Err(Error::DimMismatch { site: k, expected: din, found: p1 });
    }
    if p2 > din {
        return Err(Error::DimMismatch { site: k + 1, expected: din, found: p2 });
    }
    let dout = g.d_out + 1;

    // M[(n α), (m β)] = Σ_γ B1[n, α, γ] · B2[m, γ, β]
    let b1 = state.sites[k]
        .data
        .view()
        .into_shape_with_order((p1 * dl, dm))
        .expect("site tensor is contiguous");
    let b2 = state.sites[k + 1]
        .data
        .view()
        .permuted_axes([1, 0, 2])
        .as_standard_layout()
        .into_owned()
        .into_shape_with_order((dm, p2 * dr))
        .expect("shape preserves element count");
    let m = b1.dot(&b2);

    // Regroup physical indices together: [(n m), (α β)].
    let m_phys = m
        .into_shape_with_order((p1, dl, p2, dr))
        .expect("shape preserves element count")
        .permuted_axes([0, 2, 1, 3])
        .as_standard_layout()
        .into_owned()
        .into_shape_with_order((p1 * p2, dl * dr))
        .expect("shape preserves element count");

    // Gate as a ((d_out+1)², p1·p2) matrix over the populated input degrees.
    let gate = g
        .coeffs
        .slice(s![.., .., 0..p1, 0..p2])
        .as_standard_layout()
        .into_owned()
        .into_shape_with_order((dout * dout, p1 * p2))
        .expect("shape preserves element count");
    let updated = gate.dot(&m_phys);

    // Back to [(n' α), (m' β)] and split by SVD.
    let x = updated
        .into_shape_with_order((dout, dout, dl, dr))
        .expect("shape preserves element count")
        .permuted_axes([0, 2, 1, 3])
        .as_standard_layout()
        .into_owned()
        .into_shape_with_order((dout * dl, dout * dr))
        .expect("shape preserves element count");

    let decomposition = svd(&x)?;
    let sigma_max = decomposition.singular.first().copied().unwrap_or(0.0);
    let kept = decomposition
        .singular
        .iter()
        .filter(|&&sv| sv > tolerance * sigma_max)
        .count()
        .max(1);
    let discarded = decomposition.singular.len() - kept;

    // B'1[(n' α), γ] = U[(n' α), γ]·σ_γ
    let mut u_kept = decomposition.u.slice(s![.., 0..kept]).to_owned();
    for (gamma, mut col) in u_kept.axis_iter_mut(Axis(1)).enumerate() {
        let sv = decomposition.singular[gamma];
        col.map_inplace(|z| *z *= sv);
    }
    state.sites[k] = SiteTensor {
        data: u_kept
            .into_shape_with_order((dout, dl, kept))
            .expect("shape preserves element count"),
    };

    // B'2[m', γ, β] = conj(V[(m' β), γ]) = V^†[γ, (m' β)]
    let v = &decomposition.v;
    state.sites[k + 1] = SiteTensor {
        data: Array3::from_shape_fn((dout, kept, dr), |(m, gamma, beta)| {
            v[[m * dr + beta, gamma]].conj()
        }),
    };

    Ok(TruncationReport { retained: kept, discarded })
}

/// The coefficient of |1̂⟩: `log_scale × B^[1]_1 · B^[2]_1 ⋯ B^[N]_1`, with the
/// running row vector max-renormalized into the scaled accumulator so huge
/// permanents cannot overflow.
pub fn readout_all_ones(state: &MatrixProductState) -> ScaledComplex {
    assert!(state.sites.iter().all(|t| t.phys_dim() >= 2), "readout needs the degree-1 component");
    let mut acc = state.log_scale;
    let first = &state.sites[0];
    let mut row: Array1<Complex64> =
        first.data.index_axis(Axis(0), 1).row(0).to_owned();
    for site in &state.sites[1..] {
        let slice = site.data.index_axis(Axis(0), 1);
        row = row.dot(&slice);
        let mag = row.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        if mag == 0.0 {
            return ScaledComplex::zero();
        }
        row.map_inplace(|z| *z /= mag);
        acc = acc.mul_f64(mag);
    }
    debug_assert_eq!(row.len(), 1);
    acc.mul_complex(row[0])
}

/// Divide the site tensor by its max-magnitude entry and absorb that factor
/// into log_scale; the represented state is unchanged.
pub fn normalize_and_accumulate(state: &mut MatrixProductState, site: usize) {
    let t = &mut state.sites[site];
    let mag = t.data.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if mag > 0.0 {
        t.data.map_inplace(|z| *z /= mag);
        state.log_scale = state.log_scale.mul_f64(mag);
    }
}

const DENSE_MAX_ELEMENTS: usize = 10_000_000;

/// Expand into the full coefficient tensor over (n_1 … n_N). Testing tool;
/// capped at 10^7 elements.
pub fn dense_coefficients(state: &MatrixProductState) -> Result<ArrayD<Complex64>> {
    let dims = state.phys_dims();
    let total: usize = dims.iter().try_fold(1usize, |acc, &d| {
        acc.checked_mul(d).filter(|&t| t <= DENSE_MAX_ELEMENTS)
    }).ok_or(Error::TooLarge {
        what: "dense_coefficients",
        max: DENSE_MAX_ELEMENTS,
        got: usize::MAX,
    })?;

    // Fold site by site: rows enumerate the physical indices consumed so far
    // (earlier sites slower, matching row-major order), columns the open bond.
    let mut acc = Array2::from_elem((1, 1), Complex64::new(1.0, 0.0));
    for site in &state.sites {
        let (p, _l, r) = site.data.dim();
        let rows = acc.nrows();
        let mut next = Array2::zeros((rows * p, r));
        for n in 0..p {
            let y = acc.dot(&site.data.index_axis(Axis(0), n));
            next.slice_mut(s![n..; p, ..]).assign(&y);
        }
        acc = next;
    }
    debug_assert_eq!(acc.dim(), (total, 1));
    let scale = state.log_scale.value();
    let flat = acc.index_axis(Axis(1), 0).mapv(|z| z * scale);
    Ok(flat.into_shape_with_order(IxDyn(&dims)).expect("shape preserves element count"))
}

/// Build an MPS from a dense coefficient tensor by successive splitting: at
/// each cut, reshape to (bond·phys) × rest, SVD, keep the nonzero singular
/// values (relative threshold 1e-13 absorbs roundoff), and carry Σ·V^†
/// rightward. Bond dimensions are the Schmidt ranks across each cut.
pub fn from_dense_coefficients(coeffs: &ArrayD<Complex64>) -> Result<MatrixProductState> {
    let dims: Vec<usize> = coeffs.shape().to_vec();
    assert!(!dims.is_empty(), "coefficient tensor needs at least one axis");
    let total: usize = dims.iter().product();
    let mut rest = total;
    let mut remainder = coeffs
        .as_standard_layout()
        .into_owned()
        .into_shape_with_order((1, total))
        .expect("shape preserves element count");
    let mut bond = 1usize;
    let mut sites = Vec::with_capacity(dims.len());

    for &p in &dims[..dims.len() - 1] {
        rest /= p;
        let m = remainder
            .into_shape_with_order((bond * p, rest))
            .expect("shape preserves element count");
        let dec = svd(&m)?;
        let sigma_max = dec.singular.first().copied().unwrap_or(0.0);
        let kept = dec.singular.iter().filter(|&&sv| sv > 1e-13 * sigma_max).count().max(1);

        let u = dec.u.slice(s![.., 0..kept]).to_owned();
        sites.push(SiteTensor {
            data: u
                .into_shape_with_order((bond, p, kept))
                .expect("shape preserves element count")
                .permuted_axes([1, 0, 2])
                .as_standard_layout()
                .into_owned(),
        });

        // Σ·V^† becomes the remainder for the next cut.
        remainder = Array2::from_shape_fn((kept, rest), |(gamma, j)| {
            dec.singular[gamma] * dec.v[[j, gamma]].conj()
        });
        bond = kept;
    }

    let p_last = dims[dims.len() - 1];
    sites.push(SiteTensor {
        data: remainder
            .into_shape_with_order((bond, p_last, 1))
            .expect("shape preserves element count")
            .permuted_axes([1, 0, 2])
            .as_standard_layout()
            .into_owned(),
    });

    Ok(MatrixProductState { sites, log_scale: ScaledComplex::one() })
}
