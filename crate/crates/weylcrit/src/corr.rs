//! Correlation tensors: the coefficients t_{u_1…u_n} of a state expanded in
//! tensor products of generalized Pauli operators,
//!
//!   t_{u_1…u_n} = tr(ρ · A_{u_1}† ⊗ … ⊗ A_{u_n}†),
//!   ρ = (1/d_1…d_n) Σ t_{u_1…u_n} · A_{u_1} ⊗ … ⊗ A_{u_n},
//!
//! plus the subset vectors T^{(S)} and the closed-form bounds that their
//! squared norms obey for product states (one subsystem: d−1; two:
//! d_1d_2(1−1/d_1²−1/d_2²)+1; k ≥ 2 the general multi bound, which reduces
//! to the pair bound at k = 2).
//!
//! Each A_u has exactly one nonzero entry per row (row m maps to column
//! (m+j) mod d with phase ω^{i·m}), so a coefficient is a single pass over ρ's
//! relevant diagonal rather than a full matrix product.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::indexing::{product, ravel, strides, unravel};
use crate::par::map_indexed;
use crate::state::{check_subset, DensityMatrix};
use crate::weyl::weyl_basis;

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    dims: Vec<usize>,
    /// per-axis coefficient counts d_s²
    shape: Vec<usize>,
    /// strides over `shape`, last axis fastest
    stride: Vec<usize>,
    coeffs: Vec<Complex64>,
}

/// Extract the full coefficient array of a state.
pub fn corr_tensor(state: &DensityMatrix) -> CorrelationTensor {
    let dims = state.dims().to_vec();
    let n = dims.len();
    let shape: Vec<usize> = dims.iter().map(|d| d * d).collect();
    let stride = strides(&shape);
    let dim_strides = strides(&dims);
    let bases: Vec<_> = dims.iter().map(|&d| weyl_basis(d).expect("dims checked")).collect();
    let total_coeffs = product(&shape);
    let total_dim = state.total_dim();
    let mat = state.matrix();

    let coeffs = map_indexed(total_coeffs, |flat| {
        let mut u = vec![0usize; n];
        unravel(flat, &shape, &mut u);
        // u_s = d_s·i_s + j_s
        let ij: Vec<(usize, usize)> = u.iter().zip(&dims).map(|(&u, &d)| (u / d, u % d)).collect();
        let mut m = vec![0usize; n];
        let mut acc = Complex64::default();
        for row in 0..total_dim {
            unravel(row, &dims, &mut m);
            let mut col = 0usize;
            let mut phase = Complex64::new(1.0, 0.0);
            for s in 0..n {
                let (i, j) = ij[s];
                col += ((m[s] + j) % dims[s]) * dim_strides[s];
                // conj(ω^{i·m}) = ω^{−i·m}, kept exact via the cached table
                phase *= bases[s].phase(-((i * m[s]) as i64));
            }
            acc += mat[(row, col)] * phase;
        }
        acc
    });

    CorrelationTensor { dims, shape, stride, coeffs }
}

impl CorrelationTensor {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    /// Per-axis index ranges: axis s runs over 0..d_s².
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient at the multi-index (u_1, …, u_n). Panics on a malformed
    /// index, like slice indexing.
    pub fn coeff(&self, idx: &[usize]) -> Complex64 {
        assert_eq!(idx.len(), self.dims.len(), "index rank mismatch");
        for (s, (&u, &m)) in idx.iter().zip(&self.shape).enumerate() {
            assert!(u < m, "index {u} out of range for axis {s} (0..{m})");
        }
        self.coeffs[ravel(idx, &self.stride)]
    }

    /// Coefficient at a flat row-major position in 0..len(), the last axis
    /// varying fastest.
    pub fn coeff_flat(&self, flat: usize) -> Complex64 {
        self.coeffs[flat]
    }

    /// The vector T^{(S)}: coefficients with indices in [1, d²−1] on the
    /// labeled subsystems and 0 elsewhere, the last label varying fastest.
    pub fn subset_vector(&self, labels: &[usize]) -> Result<SubsetVector> {
        check_subset(labels, self.n_parties())?;
        let sizes: Vec<usize> = labels.iter().map(|&l| self.shape[l - 1] - 1).collect();
        let total = product(&sizes);
        let mut entries = DVector::zeros(total);
        let mut digits = vec![0usize; labels.len()];
        let mut full = vec![0usize; self.n_parties()];
        for flat in 0..total {
            unravel(flat, &sizes, &mut digits);
            for (pos, &l) in labels.iter().enumerate() {
                full[l - 1] = digits[pos] + 1;
            }
            entries[flat] = self.coeffs[ravel(&full, &self.stride)];
        }
        Ok(SubsetVector { labels: labels.to_vec(), entries })
    }

    /// Rebuild the state as (1/D) Σ_u t_u · ⊗_s A_{u_s}.
    pub fn reconstruct(&self) -> DensityMatrix {
        let n = self.n_parties();
        let total_dim = product(&self.dims);
        let dim_strides = strides(&self.dims);
        let bases: Vec<_> =
            self.dims.iter().map(|&d| weyl_basis(d).expect("dims checked")).collect();
        let scale = Complex64::new(1.0 / total_dim as f64, 0.0);

        let rows = map_indexed(total_dim, |row| {
            let mut m = vec![0usize; n];
            unravel(row, &self.dims, &mut m);
            let mut out = vec![Complex64::default(); total_dim];
            let mut u = vec![0usize; n];
            for (flat, &t) in self.coeffs.iter().enumerate() {
                unravel(flat, &self.shape, &mut u);
                let mut col = 0usize;
                let mut phase = Complex64::new(1.0, 0.0);
                for s in 0..n {
                    let (i, j) = (u[s] / self.dims[s], u[s] % self.dims[s]);
                    col += ((m[s] + j) % self.dims[s]) * dim_strides[s];
                    phase *= bases[s].phase((i * m[s]) as i64);
                }
                out[col] += t * phase;
            }
            out
        });
        let mat = DMatrix::from_fn(total_dim, total_dim, |r, c| rows[r][c] * scale);
        DensityMatrix::new(self.dims.clone(), mat).expect("reconstructed shape matches dims")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetVector {
    labels: Vec<usize>,
    entries: DVector<Complex64>,
}

impl SubsetVector {
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn entries(&self) -> &DVector<Complex64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Bound on ‖T^{(l)}‖² for a single d-dimensional subsystem: d − 1.
pub fn bound_single(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    Ok((d - 1) as f64)
}

/// Bound on ‖T^{(l_1 l_2)}‖² for a pair: d_1d_2(1 − 1/d_1² − 1/d_2²) + 1.
pub fn bound_pair(d1: usize, d2: usize) -> Result<f64> {
    for d in [d1, d2] {
        if d < 2 {
            return Err(Error::BadDimension(d));
        }
    }
    let (a, b) = (d1 as f64, d2 as f64);
    Ok(a * b * (1.0 - 1.0 / (a * a) - 1.0 / (b * b)) + 1.0)
}

/// Bound on ‖T^{(l_1…l_k)}‖² for k ≥ 2 subsystems:
/// (d_1…d_k·(k−1−Σ 1/d_s²) + 1)/(k−1). Reduces to [`bound_pair`] at k = 2.
pub fn bound_multi(dims: &[usize]) -> Result<f64> {
    if dims.len() < 2 {
        return Err(Error::TooFewParties { needed: 2, got: dims.len() });
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::BadDimension(d));
    }
    let k = dims.len() as f64;
    let prod: f64 = dims.iter().map(|&d| d as f64).product();
    let inv_sq: f64 = dims.iter().map(|&d| 1.0 / (d * d) as f64).sum();
    Ok((prod * (k - 1.0 - inv_sq) + 1.0) / (k - 1.0))
}
