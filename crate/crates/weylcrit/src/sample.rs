//! Seeded random states for the property suites and the CLI sampling utility.
//!
//! Pure states draw Gaussian amplitudes (Haar-distributed after
//! normalization), mixed states are normalized Ginibre products G·G†, and
//! biseparable states are convex mixtures of products across one fixed cut.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};
use rand_distr::{Distribution, StandardNormal};

use crate::criteria::Bipartition;
use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// Deterministic RNG for reproducible sampling; one fixed algorithm so a seed
/// means the same states everywhere.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Haar-random pure state on the given dims.
pub fn random_pure(dims: &[usize], rng: &mut impl Rng) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    let amps: Vec<Complex64> = (0..total).map(|_| gaussian_complex(rng)).collect();
    DensityMatrix::from_pure(dims.to_vec(), &amps)
}

/// Full-rank random mixed state: G·G† normalized to unit trace.
pub fn random_mixed(dims: &[usize], rng: &mut impl Rng) -> Result<DensityMatrix> {
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::BadDimension(d));
    }
    let total: usize = dims.iter().product();
    let g = DMatrix::from_fn(total, total, |_, _| gaussian_complex(rng));
    let mut rho = &g * g.adjoint();
    let trace = rho.trace().re;
    rho /= Complex64::new(trace, 0.0);
    DensityMatrix::new(dims.to_vec(), rho)
}

/// Mixture Σ p_s ρ_L^s ⊗ ρ_R^s across the given cut, scattered back into the
/// natural subsystem order.
pub fn random_biseparable(
    dims: &[usize],
    bp: &Bipartition,
    components: usize,
    rng: &mut impl Rng,
) -> Result<DensityMatrix> {
    if bp.n() != dims.len() {
        return Err(Error::PartitionMismatch { n: bp.n(), dims: dims.to_vec() });
    }
    if components == 0 {
        return Err(Error::InvalidState("biseparable mixture needs at least one component".into()));
    }
    let left_dims: Vec<usize> = bp.left().iter().map(|&l| dims[l - 1]).collect();
    let right_dims: Vec<usize> = bp.right().iter().map(|&l| dims[l - 1]).collect();
    // the product is built as [L..., R...]; perm[q] says where natural label
    // q+1 currently sits
    let seq: Vec<usize> = bp.left().iter().chain(bp.right()).copied().collect();
    let perm: Vec<usize> = (1..=dims.len())
        .map(|q| seq.iter().position(|&l| l == q).expect("bipartition covers all labels") + 1)
        .collect();

    let mut weights: Vec<f64> = (0..components).map(|_| {
        let u: f64 = rng.gen::<f64>();
        -(1.0 - u).ln()
    }).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }

    let mut parts = Vec::with_capacity(components);
    for &w in &weights {
        let left = random_mixed(&left_dims, rng)?;
        let right = random_mixed(&right_dims, rng)?;
        parts.push((w, left.tensor(&right).permute_subsystems(&perm)?));
    }
    DensityMatrix::mix(&parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::corr_tensor;
    use crate::criteria::{bound_m, n_matrix};

    #[test]
    fn sampled_states_validate() {
        let mut rng = seeded_rng(7);
        let pure = random_pure(&[2, 3], &mut rng).unwrap();
        assert!(pure.validate().is_valid());
        assert!((pure.purity() - 1.0).abs() < 1e-10);
        let mixed = random_mixed(&[2, 2], &mut rng).unwrap();
        assert!(mixed.validate().is_valid());
        assert!(mixed.purity() < 1.0);
        let bp = Bipartition::new(&[2], 3).unwrap();
        let bisep = random_biseparable(&[2, 2, 2], &bp, 4, &mut rng).unwrap();
        assert!(bisep.validate().is_valid());
        assert_eq!(bisep.dims(), &[2, 2, 2]);
    }

    #[test]
    fn same_seed_same_state() {
        let a = random_pure(&[2, 2], &mut seeded_rng(11)).unwrap();
        let b = random_pure(&[2, 2], &mut seeded_rng(11)).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn biseparable_states_respect_their_cut_bound() {
        let mut rng = seeded_rng(23);
        let bp = Bipartition::new(&[2], 3).unwrap();
        for _ in 0..25 {
            let rho = random_biseparable(&[2, 2, 2], &bp, 3, &mut rng).unwrap();
            let t = corr_tensor(&rho);
            let norm = n_matrix(&t, &bp, 1.0, 1.0).unwrap().trace_norm();
            let bound = bound_m(&[2, 2, 2], &bp, 1.0, 1.0).unwrap();
            assert!(norm <= bound + 1e-8, "norm {norm} exceeds bound {bound}");
        }
    }

    #[test]
    fn sampler_input_validation() {
        let mut rng = seeded_rng(1);
        let bp = Bipartition::new(&[1], 3).unwrap();
        assert!(random_biseparable(&[2, 2], &bp, 2, &mut rng).is_err());
        assert!(random_biseparable(&[2, 2, 2], &bp, 0, &mut rng).is_err());
        assert!(random_mixed(&[1, 2], &mut rng).is_err());
    }
}
