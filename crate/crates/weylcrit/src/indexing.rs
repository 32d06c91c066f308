//! Multi-index helpers. Everything here uses the same convention as the
//! tensor-product ordering of states: the LAST axis varies fastest.

/// Product of all entries; the flattened length of a multi-index space.
pub(crate) fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Row-major strides (last axis has stride 1).
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut out = vec![1; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        out[s] = out[s + 1] * dims[s + 1];
    }
    out
}

pub(crate) fn ravel(idx: &[usize], strides: &[usize]) -> usize {
    idx.iter().zip(strides).map(|(i, s)| i * s).sum()
}

pub(crate) fn unravel(mut flat: usize, dims: &[usize], out: &mut [usize]) {
    for s in (0..dims.len()).rev() {
        out[s] = flat % dims[s];
        flat /= dims[s];
    }
}
