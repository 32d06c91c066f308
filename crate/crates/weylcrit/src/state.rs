//! Dense n-partite density matrices.
//!
//! A state on subsystems of dimensions (d_1, …, d_n) is a D×D complex matrix,
//! D = d_1·…·d_n, with the basis ket |a_1 … a_n⟩ at row index
//! a_1·(d_2·…·d_n) + … + a_n — the last subsystem varies fastest. Labels are
//! 1-based throughout, matching the usual physics notation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::indexing::{product, ravel, strides, unravel};

/// Largest tolerated |ρ − ρ†| entry.
pub const HERMITICITY_TOL: f64 = 1e-9;
/// Largest tolerated |tr ρ − 1|.
pub const TRACE_TOL: f64 = 1e-9;
/// Smallest tolerated eigenvalue (slightly negative to absorb round-off).
pub const EIGENVALUE_FLOOR: f64 = -1e-9;
/// Mixture weights must sum to 1 within this.
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wrap a matrix without checking physicality; shape and dims are checked.
    /// Use [`DensityMatrix::validate`] to test Hermiticity/trace/positivity.
    pub fn new(dims: Vec<usize>, mat: DMatrix<Complex64>) -> Result<Self> {
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::BadDimension(d));
        }
        let expected = product(&dims);
        if dims.is_empty() || mat.nrows() != expected || mat.ncols() != expected {
            return Err(Error::ShapeMismatch {
                rows: mat.nrows(),
                cols: mat.ncols(),
                expected,
                dims,
            });
        }
        Ok(Self { dims, mat })
    }

    /// Rank-1 projector |ψ⟩⟨ψ| from amplitudes in the computational basis.
    /// The amplitudes are normalized; a zero vector is rejected.
    pub fn from_pure(dims: Vec<usize>, amplitudes: &[Complex64]) -> Result<Self> {
        let expected = product(&dims);
        if dims.is_empty() || amplitudes.len() != expected {
            return Err(Error::ShapeMismatch {
                rows: amplitudes.len(),
                cols: 1,
                expected,
                dims,
            });
        }
        let mut ket = DVector::from_column_slice(amplitudes);
        let norm = ket.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("pure state has zero amplitude vector".into()));
        }
        ket /= Complex64::new(norm, 0.0);
        let mat = &ket * ket.adjoint();
        Self::new(dims, mat)
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let d = product(&dims);
        let mat = DMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0);
        Self::new(dims, mat)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// Hermiticity / trace / positivity report under the module tolerances.
    pub fn validate(&self) -> ValidationReport {
        let hermiticity_defect = (&self.mat - self.mat.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let trace_defect = (self.mat.trace() - Complex64::new(1.0, 0.0)).norm();
        // eigenvalues of the Hermitian part; for a near-Hermitian matrix this
        // is the spectrum up to the defect above
        let herm = (&self.mat + self.mat.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = nalgebra::SymmetricEigen::new(herm);
        let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        ValidationReport {
            hermiticity_defect,
            trace_defect,
            min_eigenvalue,
        }
    }

    /// Kronecker product; dims concatenate.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let dims = [self.dims.as_slice(), other.dims.as_slice()].concat();
        let mat = self.mat.kronecker(&other.mat);
        DensityMatrix { dims, mat }
    }

    /// Convex mixture Σ p_s ρ_s. Weights must lie in (0, 1], sum to 1 within
    /// [`WEIGHT_TOL`], and all components must share dims.
    pub fn mix(components: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
        let (_, first) = components
            .first()
            .ok_or(Error::UnnormalizedWeights { sum: 0.0 })?;
        let sum: f64 = components.iter().map(|(p, _)| p).sum();
        if (sum - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::UnnormalizedWeights { sum });
        }
        let mut mat = DMatrix::zeros(first.total_dim(), first.total_dim());
        for (p, state) in components {
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(Error::BadWeight(*p));
            }
            if state.dims != first.dims {
                return Err(Error::MixedDims(first.dims.clone(), state.dims.clone()));
            }
            mat += &state.mat * Complex64::new(*p, 0.0);
        }
        Ok(DensityMatrix { dims: first.dims.clone(), mat })
    }

    /// Reduced state on the kept subsystems (sorted 1-based labels).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        check_subset(keep, self.n_parties())?;
        let traced: Vec<usize> = (1..=self.n_parties()).filter(|l| !keep.contains(l)).collect();
        let keep_dims: Vec<usize> = keep.iter().map(|&l| self.dims[l - 1]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&l| self.dims[l - 1]).collect();
        let full_strides = strides(&self.dims);
        let keep_total = product(&keep_dims);
        let traced_total = product(&traced_dims);

        let mut out = DMatrix::zeros(keep_total, keep_total);
        let mut row_idx = vec![0; keep.len()];
        let mut col_idx = vec![0; keep.len()];
        let mut tr_idx = vec![0; traced.len()];
        let mut full_row = vec![0; self.n_parties()];
        let mut full_col = vec![0; self.n_parties()];
        for r in 0..keep_total {
            unravel(r, &keep_dims, &mut row_idx);
            for c in 0..keep_total {
                unravel(c, &keep_dims, &mut col_idx);
                let mut acc = Complex64::default();
                for t in 0..traced_total {
                    unravel(t, &traced_dims, &mut tr_idx);
                    for (pos, &l) in keep.iter().enumerate() {
                        full_row[l - 1] = row_idx[pos];
                        full_col[l - 1] = col_idx[pos];
                    }
                    for (pos, &l) in traced.iter().enumerate() {
                        full_row[l - 1] = tr_idx[pos];
                        full_col[l - 1] = tr_idx[pos];
                    }
                    acc += self.mat[(ravel(&full_row, &full_strides), ravel(&full_col, &full_strides))];
                }
                out[(r, c)] = acc;
            }
        }
        DensityMatrix::new(keep_dims, out)
    }

    /// tr(ρ²).
    pub fn purity(&self) -> f64 {
        let d = self.total_dim();
        let mut acc = Complex64::default();
        for r in 0..d {
            for c in 0..d {
                acc += self.mat[(r, c)] * self.mat[(c, r)];
            }
        }
        acc.re
    }

    /// Reorder subsystems: the new subsystem at position q is the old
    /// subsystem perm[q−1] (1-based labels; perm must be a permutation of 1..=n).
    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<DensityMatrix> {
        let n = self.n_parties();
        let mut seen = vec![false; n];
        for &l in perm {
            if l == 0 || l > n || seen[l - 1] {
                return Err(Error::BadPermutation(perm.to_vec(), n));
            }
            seen[l - 1] = true;
        }
        if perm.len() != n {
            return Err(Error::BadPermutation(perm.to_vec(), n));
        }
        let new_dims: Vec<usize> = perm.iter().map(|&l| self.dims[l - 1]).collect();
        let old_strides = strides(&self.dims);
        let total = self.total_dim();

        let to_old = |flat: usize, idx: &mut [usize], old: &mut [usize]| {
            unravel(flat, &new_dims, idx);
            for (q, &l) in perm.iter().enumerate() {
                old[l - 1] = idx[q];
            }
        };
        let mut out = DMatrix::zeros(total, total);
        let mut idx = vec![0; n];
        let mut old_row = vec![0; n];
        let mut old_col = vec![0; n];
        for r in 0..total {
            to_old(r, &mut idx, &mut old_row);
            let or = ravel(&old_row, &old_strides);
            for c in 0..total {
                to_old(c, &mut idx, &mut old_col);
                out[(r, c)] = self.mat[(or, ravel(&old_col, &old_strides))];
            }
        }
        DensityMatrix::new(new_dims, out)
    }
}

/// Requires labels nonempty, strictly increasing, within 1..=n.
pub(crate) fn check_subset(labels: &[usize], n: usize) -> Result<()> {
    let ok = !labels.is_empty()
        && labels.windows(2).all(|w| w[0] < w[1])
        && labels.iter().all(|&l| (1..=n).contains(&l));
    if ok {
        Ok(())
    } else {
        Err(Error::BadSubset { labels: labels.to_vec(), n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.hermiticity_defect <= HERMITICITY_TOL
            && self.trace_defect <= TRACE_TOL
            && self.min_eigenvalue >= EIGENVALUE_FLOOR
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "hermiticity defect {:.3e}, trace defect {:.3e}, min eigenvalue {:.3e}",
            self.hermiticity_defect, self.trace_defect, self.min_eigenvalue
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::from_pure(vec![2, 2], &[c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]).unwrap()
    }

    #[test]
    fn maximally_mixed_validates() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]).unwrap();
        let report = rho.validate();
        assert!(report.is_valid(), "{report}");
        assert!((rho.purity() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn bad_trace_is_reported() {
        let mat = DMatrix::identity(2, 2) * c(0.45, 0.0);
        let rho = DensityMatrix::new(vec![2], mat).unwrap();
        let report = rho.validate();
        assert!(!report.is_valid());
        assert!((report.trace_defect - 0.1).abs() < 1e-12);
    }

    #[test]
    fn negative_eigenvalue_is_reported() {
        let mat = DMatrix::from_row_slice(2, 2, &[c(1.2, 0.), c(0., 0.), c(0., 0.), c(-0.2, 0.)]);
        let rho = DensityMatrix::new(vec![2], mat).unwrap();
        let report = rho.validate();
        assert!(!report.is_valid());
        assert!((report.min_eigenvalue + 0.2).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let mat = DMatrix::<Complex64>::identity(3, 3);
        assert!(matches!(
            DensityMatrix::new(vec![2, 2], mat),
            Err(Error::ShapeMismatch { expected: 4, .. })
        ));
        assert!(DensityMatrix::new(vec![1, 4], DMatrix::identity(4, 4)).is_err());
    }

    #[test]
    fn tensor_and_partial_trace_invert() {
        let a = DensityMatrix::from_pure(vec![2], &[c(0.6, 0.), c(0., 0.8)]).unwrap();
        let b = DensityMatrix::maximally_mixed(vec![3]).unwrap();
        let ab = a.tensor(&b);
        assert_eq!(ab.dims(), &[2, 3]);
        let back = ab.partial_trace(&[1]).unwrap();
        let diff = (back.matrix() - a.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
        assert!((ab.purity() - a.purity() * b.purity()).abs() < 1e-12);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let reduced = bell().partial_trace(&[1]).unwrap();
        let want = DMatrix::identity(2, 2) * c(0.5, 0.0);
        let diff = (reduced.matrix() - want).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
        // both marginals of a pure state have equal purity
        let p1 = bell().partial_trace(&[1]).unwrap().purity();
        let p2 = bell().partial_trace(&[2]).unwrap().purity();
        assert!((p1 - p2).abs() < 1e-10);
    }

    #[test]
    fn mix_enforces_weights_and_dims() {
        let a = DensityMatrix::maximally_mixed(vec![2]).unwrap();
        let b = DensityMatrix::from_pure(vec![2], &[c(1., 0.), c(0., 0.)]).unwrap();
        let m = DensityMatrix::mix(&[(0.5, a.clone()), (0.5, b.clone())]).unwrap();
        assert!((m.matrix()[(0, 0)].re - 0.75).abs() < 1e-12);
        assert!(DensityMatrix::mix(&[(0.6, a.clone()), (0.5, b.clone())]).is_err());
        let c3 = DensityMatrix::maximally_mixed(vec![3]).unwrap();
        assert!(matches!(
            DensityMatrix::mix(&[(0.5, a.clone()), (0.5, c3)]),
            Err(Error::MixedDims(..))
        ));
        let single = DensityMatrix::mix(&[(1.0, b.clone())]).unwrap();
        assert_eq!(single.matrix(), b.matrix());
        let idem = DensityMatrix::mix(&[(0.5, a.clone()), (0.5, a.clone())]).unwrap();
        let diff = (idem.matrix() - a.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn permute_subsystems_round_trips() {
        let a = DensityMatrix::from_pure(vec![2], &[c(1., 0.), c(0., 0.)]).unwrap();
        let b = DensityMatrix::from_pure(vec![3], &[c(0., 0.), c(1., 0.), c(0., 0.)]).unwrap();
        let ab = a.tensor(&b);
        let ba = ab.permute_subsystems(&[2, 1]).unwrap();
        assert_eq!(ba.dims(), &[3, 2]);
        let want = b.tensor(&a);
        let diff = (ba.matrix() - want.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
        let back = ba.permute_subsystems(&[2, 1]).unwrap();
        let diff = (back.matrix() - ab.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
        assert!(ab.permute_subsystems(&[1, 1]).is_err());
        assert!(ab.permute_subsystems(&[1]).is_err());
    }

    #[test]
    fn trace_is_preserved_by_partial_trace() {
        let rho = bell();
        for keep in [&[1][..], &[2][..], &[1, 2][..]] {
            let red = rho.partial_trace(keep).unwrap();
            assert!((red.matrix().trace().re - 1.0).abs() < 1e-12);
        }
        assert!(rho.partial_trace(&[]).is_err());
        assert!(rho.partial_trace(&[3]).is_err());
        assert!(rho.partial_trace(&[2, 1]).is_err());
    }
}
