//! Named reference states, white-noise families, and the transcribed
//! comparison baselines g1/g2/g3.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// Three-qubit W state |W⟩ = (|001⟩ + |010⟩ + |100⟩)/√3 as a projector.
pub fn w3() -> DensityMatrix {
    let mut amps = vec![Complex64::default(); 8];
    let a = Complex64::new(1.0 / 3.0f64.sqrt(), 0.0);
    amps[0b001] = a;
    amps[0b010] = a;
    amps[0b100] = a;
    DensityMatrix::from_pure(vec![2, 2, 2], &amps).expect("w3 amplitudes are well-formed")
}

/// The qutrit-qutrit-qubit projector onto
/// |φ⟩ = [(|10⟩+|21⟩)|0⟩ + (|00⟩+|11⟩+|22⟩)|1⟩]/√5.
pub fn example2_phi() -> DensityMatrix {
    let mut amps = vec![Complex64::default(); 18];
    let a = Complex64::new(1.0 / 5.0f64.sqrt(), 0.0);
    // |abc⟩ sits at a·6 + b·2 + c
    for (q1, q2, q3) in [(1, 0, 0), (2, 1, 0), (0, 0, 1), (1, 1, 1), (2, 2, 1)] {
        amps[q1 * 6 + q2 * 2 + q3] = a;
    }
    DensityMatrix::from_pure(vec![3, 3, 2], &amps).expect("phi amplitudes are well-formed")
}

/// n-partite GHZ state (|0…0⟩ + |1…1⟩ + … + |(d−1)…(d−1)⟩)/√d as a projector.
pub fn ghz(n: usize, d: usize) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::TooFewParties { needed: 2, got: n });
    }
    if d < 2 {
        return Err(Error::BadDimension(d));
    }
    let total = d.pow(n as u32);
    let step = (total - 1) / (d - 1); // flat index of |k…k⟩ is k·step
    let mut amps = vec![Complex64::default(); total];
    let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for k in 0..d {
        amps[k * step] = a;
    }
    DensityMatrix::from_pure(vec![d; n], &amps)
}

/// ρ(x) = x·base + (1−x)/D · I.
pub fn white_noise(base: &DensityMatrix, x: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::BadNoiseParameter(x));
    }
    let d = base.total_dim();
    let mut mat = base.matrix() * Complex64::new(x, 0.0);
    let iso = Complex64::new((1.0 - x) / d as f64, 0.0);
    for k in 0..d {
        mat[(k, k)] += iso;
    }
    DensityMatrix::new(base.dims().to_vec(), mat)
}

/// The three comparison curves quoted alongside the examples; they carry no
/// verdict semantics here and exist only for plots/tables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Baselines {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

/// g1(x) = (√66·x − 6)/12, g2(x) = 3.26·x − (6+√3)/3, g3(x) = 9x² − 4.
pub fn baselines(x: f64) -> Baselines {
    Baselines {
        g1: (66.0f64.sqrt() * x - 6.0) / 12.0,
        g2: 3.26 * x - (6.0 + 3.0f64.sqrt()) / 3.0,
        g3: 9.0 * x * x - 4.0,
    }
}

/// A one-parameter white-noise family ρ(x) = x·σ + (1−x)/D·I around a named
/// or user-supplied base state σ.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    W3Noise,
    Example2Noise,
    Ghz4Noise,
    Custom { name: String, base: DensityMatrix },
}

impl Family {
    /// Look up one of the named families.
    pub fn named(name: &str) -> Result<Family> {
        match name {
            "w3_noise" => Ok(Family::W3Noise),
            "example2_noise" => Ok(Family::Example2Noise),
            "ghz4_noise" => Ok(Family::Ghz4Noise),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }

    pub fn custom(name: impl Into<String>, base: DensityMatrix) -> Family {
        Family::Custom { name: name.into(), base }
    }

    pub fn name(&self) -> &str {
        match self {
            Family::W3Noise => "w3_noise",
            Family::Example2Noise => "example2_noise",
            Family::Ghz4Noise => "ghz4_noise",
            Family::Custom { name, .. } => name,
        }
    }

    /// The x = 1 endpoint.
    pub fn base(&self) -> DensityMatrix {
        match self {
            Family::W3Noise => w3(),
            Family::Example2Noise => example2_phi(),
            Family::Ghz4Noise => ghz(4, 2).expect("ghz(4,2) is well-formed"),
            Family::Custom { base, .. } => base.clone(),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        match self {
            Family::W3Noise => vec![2, 2, 2],
            Family::Example2Noise => vec![3, 3, 2],
            Family::Ghz4Noise => vec![2, 2, 2, 2],
            Family::Custom { base, .. } => base.dims().to_vec(),
        }
    }

    pub fn state_at(&self, x: f64) -> Result<DensityMatrix> {
        white_noise(&self.base(), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::corr_tensor;
    use crate::criteria::check_permutation_invariant;
    use approx::assert_abs_diff_eq;

    #[test]
    fn w3_reduces_to_the_expected_qubit() {
        let rho = w3();
        assert!(rho.validate().is_valid());
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        let red = rho.partial_trace(&[1]).unwrap();
        assert_abs_diff_eq!(red.matrix()[(0, 0)].re, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(red.matrix()[(1, 1)].re, 1.0 / 3.0, epsilon = 1e-12);
        assert!(check_permutation_invariant(&rho).is_ok());
        // single-subsystem coefficient vector is (0, 1/3, 0)
        let t = corr_tensor(&rho);
        let v = t.subset_vector(&[1]).unwrap();
        assert!((v.entries()[0]).norm() < 1e-12);
        assert_abs_diff_eq!(v.entries()[1].re, 1.0 / 3.0, epsilon = 1e-12);
        assert!((v.entries()[2]).norm() < 1e-12);
    }

    #[test]
    fn example2_phi_is_a_valid_projector() {
        let rho = example2_phi();
        assert_eq!(rho.dims(), &[3, 3, 2]);
        assert!(rho.validate().is_valid());
        assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-12);
        // not symmetric under swapping the two qutrits
        assert!(matches!(
            check_permutation_invariant(&rho),
            Err(Error::NotPermutationInvariant { a: 1, b: 2, .. })
        ));
    }

    #[test]
    fn ghz_states() {
        let bell = ghz(2, 2).unwrap();
        let red = bell.partial_trace(&[2]).unwrap();
        assert_abs_diff_eq!(red.matrix()[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(red.matrix()[(1, 1)].re, 0.5, epsilon = 1e-12);
        let four = ghz(4, 2).unwrap();
        assert_eq!(four.dims(), &[2, 2, 2, 2]);
        assert!(four.validate().is_valid());
        assert!(check_permutation_invariant(&four).is_ok());
        let qutrit = ghz(2, 3).unwrap();
        assert_abs_diff_eq!(qutrit.purity(), 1.0, epsilon = 1e-12);
        assert!(ghz(1, 2).is_err());
        assert!(ghz(3, 1).is_err());
    }

    #[test]
    fn white_noise_endpoints_and_spectrum() {
        let base = w3();
        let x0 = white_noise(&base, 0.0).unwrap();
        let mm = DensityMatrix::maximally_mixed(vec![2, 2, 2]).unwrap();
        assert!((x0.matrix() - mm.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-15);
        let x1 = white_noise(&base, 1.0).unwrap();
        assert!((x1.matrix() - base.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-15);
        // spectrum at x = 1/2: (1−x)/8 seven-fold and (1−x)/8 + x
        let half = white_noise(&base, 0.5).unwrap();
        let eig = nalgebra::SymmetricEigen::new(half.matrix().clone());
        let mut ev: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for e in &ev[..7] {
            assert_abs_diff_eq!(*e, 0.0625, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(ev[7], 0.5625, epsilon = 1e-12);
        assert_abs_diff_eq!(half.purity(), 11.0 / 32.0, epsilon = 1e-12);
        assert!(matches!(white_noise(&base, 1.5), Err(Error::BadNoiseParameter(_))));
        assert!(white_noise(&base, -0.1).is_err());
    }

    #[test]
    fn white_noise_scales_every_nonscalar_coefficient() {
        let base = example2_phi();
        let t1 = corr_tensor(&base);
        let tx = corr_tensor(&white_noise(&base, 0.4).unwrap());
        let mut idx = vec![0usize; 3];
        for flat in 0..t1.len() {
            crate::indexing::unravel(flat, t1.shape(), &mut idx);
            let want = if idx.iter().all(|&u| u == 0) {
                t1.coeff(&idx)
            } else {
                t1.coeff(&idx) * 0.4
            };
            assert!((tx.coeff(&idx) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn baseline_roots_match_the_quoted_intervals() {
        let r1 = 6.0 / 66.0f64.sqrt();
        assert!(baselines(r1).g1.abs() < 1e-12);
        assert!((r1 - 0.7385).abs() < 1e-3);
        let r2 = (6.0 + 3.0f64.sqrt()) / (3.0 * 3.26);
        assert!(baselines(r2).g2.abs() < 1e-12);
        assert!((r2 - 0.791).abs() < 1e-3);
        assert!(baselines(2.0 / 3.0).g3.abs() < 1e-12);
        assert!(baselines(0.0).g1 < 0.0 && baselines(0.0).g2 < 0.0 && baselines(0.0).g3 < 0.0);
    }

    #[test]
    fn family_lookup() {
        assert_eq!(Family::named("w3_noise").unwrap(), Family::W3Noise);
        assert_eq!(Family::named("example2_noise").unwrap().dims(), vec![3, 3, 2]);
        assert_eq!(Family::named("ghz4_noise").unwrap().name(), "ghz4_noise");
        assert!(matches!(Family::named("bogus"), Err(Error::UnknownFamily(_))));
        let custom = Family::custom("mine", w3());
        assert_eq!(custom.name(), "mine");
        assert_eq!(custom.dims(), vec![2, 2, 2]);
        let st = custom.state_at(0.25).unwrap();
        assert!(st.validate().is_valid());
    }
}
