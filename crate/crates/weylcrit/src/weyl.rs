//! Generalized Pauli (Weyl) operators for a d-dimensional subsystem.
//!
//! The basis is A_{d·i+j} = Σ_m ω^{i·m} E_{m, (m+j) mod d} with ω = exp(2πi/d),
//! indexed by u = d·i + j for 0 ≤ i, j ≤ d−1. A_0 is the identity and for d = 2
//! the set is {I, X, Z, XZ}. The operators obey closed-form product and dagger
//! rules, so most of this module is index arithmetic; dense matrices exist for
//! construction, validation, and reconstruction.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// ω^k for ω = exp(2πi/d); the exponent may be any integer and is reduced mod d.
pub fn omega_pow(d: usize, k: i64) -> Complex64 {
    let k = k.rem_euclid(d as i64);
    let angle = std::f64::consts::TAU * k as f64 / d as f64;
    Complex64::new(angle.cos(), angle.sin())
}

fn check_index(d: usize, u: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    let max = d * d - 1;
    if u > max {
        return Err(Error::BadOperatorIndex { dim: d, index: u, max });
    }
    Ok(())
}

/// One basis operator A_u of a d-dimensional subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliOp {
    pub dim: usize,
    pub index: usize,
    pub matrix: DMatrix<Complex64>,
}

impl PauliOp {
    /// The pair (i, j) with index = d·i + j.
    pub fn decomposition(&self) -> (usize, usize) {
        (self.index / self.dim, self.index % self.dim)
    }
}

pub fn pauli_op(d: usize, u: usize) -> Result<PauliOp> {
    check_index(d, u)?;
    let (i, j) = (u / d, u % d);
    let mut matrix = DMatrix::zeros(d, d);
    for m in 0..d {
        matrix[(m, (m + j) % d)] = omega_pow(d, (i * m) as i64);
    }
    Ok(PauliOp { dim: d, index: u, matrix })
}

/// Product rule: A_u · A_v = ω^{phase} · A_w, returned as (phase, w).
///
/// With u = d·i + j and v = d·k + l this is (j·k mod d, d·((i+k) mod d) + (j+l) mod d).
pub fn pauli_mul_index(d: usize, u: usize, v: usize) -> Result<(usize, usize)> {
    check_index(d, u)?;
    check_index(d, v)?;
    let (i, j) = (u / d, u % d);
    let (k, l) = (v / d, v % d);
    Ok(((j * k) % d, d * ((i + k) % d) + (j + l) % d))
}

/// Dagger rule: A_u† = ω^{phase} · A_w, returned as (phase, w).
///
/// With u = d·i + j this is (i·j mod d, d·((d−i) mod d) + (d−j) mod d).
pub fn pauli_dagger_index(d: usize, u: usize) -> Result<(usize, usize)> {
    check_index(d, u)?;
    let (i, j) = (u / d, u % d);
    Ok(((i * j) % d, d * ((d - i) % d) + ((d - j) % d)))
}

/// All d² operators of one subsystem plus a phase table, built once per d and
/// shared immutably after that.
#[derive(Debug)]
pub struct WeylBasis {
    dim: usize,
    ops: Vec<PauliOp>,
    // ω^k for k in 0..d, so repeated phase lookups stay bit-identical
    phases: Vec<Complex64>,
}

impl WeylBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn op(&self, u: usize) -> &PauliOp {
        &self.ops[u]
    }

    pub fn ops(&self) -> &[PauliOp] {
        &self.ops
    }

    /// ω^k from the cached table; k may be negative.
    pub fn phase(&self, k: i64) -> Complex64 {
        self.phases[k.rem_euclid(self.dim as i64) as usize]
    }
}

/// Cached basis for dimension d.
pub fn weyl_basis(d: usize) -> Result<Arc<WeylBasis>> {
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<WeylBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().expect("weyl basis cache poisoned");
    let basis = cache.entry(d).or_insert_with(|| {
        let ops = (0..d * d).map(|u| pauli_op(d, u).unwrap()).collect();
        let phases = (0..d).map(|k| omega_pow(d, k as i64)).collect();
        Arc::new(WeylBasis { dim: d, ops, phases })
    });
    Ok(Arc::clone(basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn max_entry_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn qubit_operators_are_the_pauli_family() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let i2 = DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
        let x = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let z = DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let xz = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]);
        for (u, want) in [(0, i2), (1, x), (2, z), (3, xz)] {
            let got = pauli_op(2, u).unwrap();
            assert!(max_entry_diff(&got.matrix, &want) < 1e-15, "A_{u} wrong");
        }
    }

    #[test]
    fn index_rules_match_dense_matrices_for_small_d() {
        for d in 2..=5 {
            let basis = weyl_basis(d).unwrap();
            for u in 0..d * d {
                let (ph, w) = pauli_dagger_index(d, u).unwrap();
                let dense = basis.op(u).matrix.adjoint();
                let via_rule = basis.op(w).matrix.clone() * omega_pow(d, ph as i64);
                assert!(max_entry_diff(&dense, &via_rule) < 1e-12, "dagger d={d} u={u}");
                for v in 0..d * d {
                    let (ph, w) = pauli_mul_index(d, u, v).unwrap();
                    let dense = &basis.op(u).matrix * &basis.op(v).matrix;
                    let via_rule = basis.op(w).matrix.clone() * omega_pow(d, ph as i64);
                    assert!(max_entry_diff(&dense, &via_rule) < 1e-12, "mul d={d} u={u} v={v}");
                }
            }
        }
    }

    #[test]
    fn gram_matrix_is_d_times_identity() {
        for d in 2..=5 {
            let basis = weyl_basis(d).unwrap();
            for u in 0..d * d {
                for v in 0..d * d {
                    let gram = (&basis.op(u).matrix * basis.op(v).matrix.adjoint()).trace();
                    let want = if u == v { d as f64 } else { 0.0 };
                    assert_abs_diff_eq!(gram.re, want, epsilon = 1e-12);
                    assert_abs_diff_eq!(gram.im, 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn worked_index_examples() {
        // X·Z = -A_3 for qubits
        assert_eq!(pauli_mul_index(2, 1, 2).unwrap(), (1, 3));
        assert_eq!(pauli_mul_index(2, 0, 3).unwrap(), (0, 3));
        assert_eq!(pauli_mul_index(3, 3, 1).unwrap(), (0, 4));
        assert_eq!(pauli_dagger_index(2, 3).unwrap(), (1, 3));
        assert_eq!(pauli_dagger_index(2, 0).unwrap(), (0, 0));
        assert_eq!(pauli_dagger_index(5, 0).unwrap(), (0, 0));
        assert_eq!(pauli_dagger_index(3, 5).unwrap(), (2, 7));
    }

    #[test]
    fn rejects_bad_dims_and_indices() {
        assert!(matches!(pauli_op(1, 0), Err(Error::BadDimension(1))));
        assert!(matches!(
            pauli_op(2, 4),
            Err(Error::BadOperatorIndex { dim: 2, index: 4, max: 3 })
        ));
        assert!(pauli_mul_index(3, 9, 0).is_err());
        assert!(pauli_dagger_index(2, 17).is_err());
    }

    #[test]
    fn phase_table_matches_direct_evaluation() {
        let basis = weyl_basis(7).unwrap();
        for k in -20..20i64 {
            let got = basis.phase(k);
            let want = omega_pow(7, k);
            assert!((got - want).norm() < 1e-15);
        }
    }
}
