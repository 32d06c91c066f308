use thiserror::Error;

/// Everything that can go wrong when building states, tensors, or criteria.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("subsystem dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("operator index {index} out of range for dimension {dim} (valid: 0..={max})")]
    BadOperatorIndex { dim: usize, index: usize, max: usize },
    #[error("matrix is {rows}x{cols} but dims {dims:?} require {expected}x{expected}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        expected: usize,
        dims: Vec<usize>,
    },
    #[error("subset {labels:?} must be nonempty, strictly increasing, within 1..={n}")]
    BadSubset { labels: Vec<usize>, n: usize },
    #[error("subsets {left:?} and {right:?} overlap")]
    OverlappingSubsets { left: Vec<usize>, right: Vec<usize> },
    #[error("left side {left:?} of a bipartition may keep at most half of the {n} subsystems")]
    BadBipartition { left: Vec<usize>, n: usize },
    #[error("bipartition is over {n} subsystems but the state has dims {dims:?}")]
    PartitionMismatch { n: usize, dims: Vec<usize> },
    #[error("mixture weights sum to {sum}, expected 1 (tolerance 1e-12)")]
    UnnormalizedWeights { sum: f64 },
    #[error("mixture weight {0} is outside (0, 1]")]
    BadWeight(f64),
    #[error("mixture components have mismatched dims: {0:?} vs {1:?}")]
    MixedDims(Vec<usize>, Vec<usize>),
    #[error("noise parameter x = {0} is outside [0, 1]")]
    BadNoiseParameter(f64),
    #[error("scan tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("curve grid needs at least 2 points, got {0}")]
    BadGrid(usize),
    #[error("operation needs at least {needed} subsystems, got {got}")]
    TooFewParties { needed: usize, got: usize },
    #[error(
        "state is not permutation invariant: swapping subsystems {a} and {b} \
         changes entries by up to {deviation:.3e}"
    )]
    NotPermutationInvariant { a: usize, b: usize, deviation: f64 },
    #[error("permutation {0:?} is not a rearrangement of 1..={1}")]
    BadPermutation(Vec<usize>, usize),
    #[error("state failed validation: {0}")]
    InvalidState(String),
    #[error("unknown family name {0:?}")]
    UnknownFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;
