//! Bipartition criteria: flatten a correlation tensor into rectangular
//! S-matrices, form N = α·[S^{L|r₁} | 0] + β·S^{L|R}, and compare trace norms
//! against the bounds every biseparable state obeys.
//!
//! For a bipartition L|R (L ascending, R the ascending complement, r₁ = min R)
//! the bound is
//!
//!   ‖N‖_tr ≤ factor(L) · (|α|·√(d_{r₁}−1) + |β|·factor(R)),
//!
//! where factor(side) is √(d−1) for a single subsystem and the square root of
//! the multi-subset bound otherwise. The GME score T(ρ) averages ‖N‖_tr over
//! every left subset of size 1..⌊n/2⌋; exceeding the max of the bounds (K)
//! certifies genuine multipartite entanglement for any state, exceeding the
//! mean (J) certifies it for permutation-invariant states.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::corr::{bound_multi, bound_single, corr_tensor, CorrelationTensor};
use crate::error::{Error, Result};
use crate::indexing::{product, unravel};
use crate::par::map_indexed;
use crate::state::{check_subset, DensityMatrix};

/// Two states are treated as permutation invariant when no allowed swap moves
/// any entry by more than this.
pub const PERMUTATION_TOL: f64 = 1e-9;

/// Singular values below max·this are treated as exact zeros.
const SV_CUTOFF: f64 = 1e-12;

/// An ordered split L|R of the subsystem labels 1..=n with |L| ≤ ⌊n/2⌋.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
    n: usize,
}

impl Bipartition {
    pub fn new(left: &[usize], n: usize) -> Result<Self> {
        check_subset(left, n)?;
        if left.len() > n / 2 {
            return Err(Error::BadBipartition { left: left.to_vec(), n });
        }
        let right: Vec<usize> = (1..=n).filter(|l| !left.contains(l)).collect();
        Ok(Self { left: left.to_vec(), right, n })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// "1,3|2,4"
    pub fn label(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        format!("{}|{}", join(&self.left), join(&self.right))
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// Step to the next size-k combination of 1..=n in lexicographic order;
/// false once exhausted.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for pos in (0..k).rev() {
        if subset[pos] < n - (k - 1 - pos) {
            subset[pos] += 1;
            for q in pos + 1..k {
                subset[q] = subset[q - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All bipartitions with left sizes 1..=⌊n/2⌋, sizes ascending and subsets in
/// lexicographic order within a size; complementary halves both appear when n
/// is even.
pub fn enumerate_bipartitions(n: usize) -> Result<Vec<Bipartition>> {
    if n < 3 {
        return Err(Error::TooFewParties { needed: 3, got: n });
    }
    let mut out = Vec::new();
    for size in 1..=n / 2 {
        let mut subset: Vec<usize> = (1..=size).collect();
        loop {
            out.push(Bipartition::new(&subset, n).expect("enumerated subsets are valid"));
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    Ok(out)
}

/// The rectangular flattening S^{L|R}: entry ((u_L), (u_R)) is the coefficient
/// with those indices set and every other subsystem's index 0; rows follow L's
/// multi-index and columns R's, the last label varying fastest on both sides.
pub fn s_matrix(
    t: &CorrelationTensor,
    left: &[usize],
    right: &[usize],
) -> Result<DMatrix<Complex64>> {
    let n = t.n_parties();
    check_subset(left, n)?;
    check_subset(right, n)?;
    if left.iter().any(|l| right.contains(l)) {
        return Err(Error::OverlappingSubsets { left: left.to_vec(), right: right.to_vec() });
    }
    let row_sizes: Vec<usize> = left.iter().map(|&l| t.shape()[l - 1] - 1).collect();
    let col_sizes: Vec<usize> = right.iter().map(|&l| t.shape()[l - 1] - 1).collect();
    let rows = product(&row_sizes);
    let cols = product(&col_sizes);
    let mut out = DMatrix::zeros(rows, cols);
    let mut digits = vec![0usize; left.len().max(right.len())];
    let mut full = vec![0usize; n];
    for r in 0..rows {
        unravel(r, &row_sizes, &mut digits[..left.len()]);
        for (pos, &l) in left.iter().enumerate() {
            full[l - 1] = digits[pos] + 1;
        }
        for c in 0..cols {
            unravel(c, &col_sizes, &mut digits[..right.len()]);
            for (pos, &l) in right.iter().enumerate() {
                full[l - 1] = digits[pos] + 1;
            }
            out[(r, c)] = t.coeff(&full);
        }
        for &l in right {
            full[l - 1] = 0;
        }
    }
    Ok(out)
}

/// N^{L|R} = α·[S^{L|r₁} | 0] + β·S^{L|R}; the α block sits in the first
/// d_{r₁}²−1 columns.
#[derive(Debug, Clone, PartialEq)]
pub struct NMatrix {
    pub bipartition: Bipartition,
    pub alpha: f64,
    pub beta: f64,
    pub matrix: DMatrix<Complex64>,
}

impl NMatrix {
    pub fn trace_norm(&self) -> f64 {
        trace_norm(&self.matrix)
    }
}

pub fn n_matrix(
    t: &CorrelationTensor,
    bp: &Bipartition,
    alpha: f64,
    beta: f64,
) -> Result<NMatrix> {
    if bp.n() != t.n_parties() {
        return Err(Error::PartitionMismatch { n: bp.n(), dims: t.dims().to_vec() });
    }
    let r1 = bp.right()[0];
    let mut matrix = s_matrix(t, bp.left(), bp.right())? * Complex64::new(beta, 0.0);
    let s0 = s_matrix(t, bp.left(), &[r1])?;
    let a = Complex64::new(alpha, 0.0);
    for r in 0..s0.nrows() {
        for c in 0..s0.ncols() {
            matrix[(r, c)] += a * s0[(r, c)];
        }
    }
    Ok(NMatrix { bipartition: bp.clone(), alpha, beta, matrix })
}

/// Sum of singular values (Ky Fan / nuclear norm).
pub fn trace_norm(m: &DMatrix<Complex64>) -> f64 {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0.0;
    }
    sv.iter().filter(|&&s| s > SV_CUTOFF * max).sum()
}

fn side_factor(side: &[usize], dims: &[usize]) -> f64 {
    let side_dims: Vec<usize> = side.iter().map(|&l| dims[l - 1]).collect();
    if side_dims.len() == 1 {
        bound_single(side_dims[0]).expect("state dims are ≥ 2").sqrt()
    } else {
        bound_multi(&side_dims).expect("state dims are ≥ 2").sqrt()
    }
}

/// Trace-norm bound obeyed by every state biseparable across bp.
pub fn bound_m(dims: &[usize], bp: &Bipartition, alpha: f64, beta: f64) -> Result<f64> {
    if bp.n() != dims.len() {
        return Err(Error::PartitionMismatch { n: bp.n(), dims: dims.to_vec() });
    }
    let r1 = bp.right()[0];
    let alpha_part = alpha.abs() * bound_single(dims[r1 - 1])?.sqrt();
    Ok(side_factor(bp.left(), dims) * (alpha_part + beta.abs() * side_factor(bp.right(), dims)))
}

/// T(ρ): the mean of ‖N^{L|R}‖_tr over all left subsets of size 1..⌊n/2⌋.
pub fn score_t(t: &CorrelationTensor, alpha: f64, beta: f64) -> Result<f64> {
    let bps = enumerate_bipartitions(t.n_parties())?;
    let norms = map_indexed(bps.len(), |i| {
        n_matrix(t, &bps[i], alpha, beta).expect("enumerated bipartition fits tensor").trace_norm()
    });
    Ok(norms.iter().sum::<f64>() / bps.len() as f64)
}

/// K: the largest of the per-bipartition bounds. T(ρ) > K certifies GME.
pub fn threshold_k(dims: &[usize], alpha: f64, beta: f64) -> Result<f64> {
    let bps = enumerate_bipartitions(dims.len())?;
    let mut max = f64::NEG_INFINITY;
    for bp in &bps {
        max = max.max(bound_m(dims, bp, alpha, beta)?);
    }
    Ok(max)
}

/// J: the mean of the per-bipartition bounds, with the same weighting as
/// [`score_t`]. T(ρ) > J certifies GME for permutation-invariant states.
pub fn threshold_j(dims: &[usize], alpha: f64, beta: f64) -> Result<f64> {
    let bps = enumerate_bipartitions(dims.len())?;
    let mut sum = 0.0;
    for bp in &bps {
        sum += bound_m(dims, bp, alpha, beta)?;
    }
    Ok(sum / bps.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionMode {
    General,
    PermutationInvariant,
}

impl std::fmt::Display for DetectionMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DetectionMode::General => "general",
            DetectionMode::PermutationInvariant => "perm-invariant",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    GmeCertified,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::GmeCertified => "GME-certified",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartitionRecord {
    pub bipartition: Bipartition,
    pub trace_norm: f64,
    pub bound: f64,
    /// true certifies entanglement across this bipartition
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub alpha: f64,
    pub beta: f64,
    pub mode: DetectionMode,
    pub records: Vec<BipartitionRecord>,
    pub score: f64,
    pub threshold: f64,
    pub verdict: Verdict,
}

/// Verify ρ = ρ^p for every swap of equal-dimension subsystems (swaps generate
/// all admissible permutations); errors name the first failing swap.
pub fn check_permutation_invariant(state: &DensityMatrix) -> Result<()> {
    let n = state.n_parties();
    let dims = state.dims();
    for a in 1..=n {
        for b in a + 1..=n {
            if dims[a - 1] != dims[b - 1] {
                continue;
            }
            let perm: Vec<usize> =
                (1..=n).map(|q| if q == a { b } else if q == b { a } else { q }).collect();
            let swapped = state.permute_subsystems(&perm)?;
            let deviation = (swapped.matrix() - state.matrix())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max);
            if deviation > PERMUTATION_TOL {
                return Err(Error::NotPermutationInvariant { a, b, deviation });
            }
        }
    }
    Ok(())
}

/// Run the full criterion: per-bipartition norms and bounds, the averaged
/// score T(ρ), and the GME verdict against K (general) or J (perm-invariant).
pub fn detect(
    state: &DensityMatrix,
    alpha: f64,
    beta: f64,
    mode: DetectionMode,
) -> Result<CriterionReport> {
    let bps = enumerate_bipartitions(state.n_parties())?;
    if mode == DetectionMode::PermutationInvariant {
        check_permutation_invariant(state)?;
    }
    let t = corr_tensor(state);
    let dims = state.dims().to_vec();
    let records = map_indexed(bps.len(), |i| {
        let bp = &bps[i];
        let norm = n_matrix(&t, bp, alpha, beta)
            .expect("enumerated bipartition fits tensor")
            .trace_norm();
        let bound = bound_m(&dims, bp, alpha, beta).expect("enumerated bipartition fits dims");
        BipartitionRecord { bipartition: bp.clone(), trace_norm: norm, bound, violated: norm > bound }
    });
    let score = records.iter().map(|r| r.trace_norm).sum::<f64>() / records.len() as f64;
    let threshold = match mode {
        DetectionMode::General => records.iter().map(|r| r.bound).fold(f64::NEG_INFINITY, f64::max),
        DetectionMode::PermutationInvariant => {
            records.iter().map(|r| r.bound).sum::<f64>() / records.len() as f64
        }
    };
    let verdict = if score > threshold { Verdict::GmeCertified } else { Verdict::Inconclusive };
    Ok(CriterionReport { alpha, beta, mode, records, score, threshold, verdict })
}
