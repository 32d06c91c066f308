//! Threshold scans along one-parameter noise families.
//!
//! Each family here is white noise around a base state, so every score is
//! exactly linear in x and crosses its bound at most once; bisection on
//! score(x) − bound finds that crossing. Custom bases still get a defensive
//! grid pass first: if the gap changes sign more than once, all crossings are
//! reported and the threshold is the last upward one.

use crate::corr::corr_tensor;
use crate::criteria::{
    bound_m, check_permutation_invariant, n_matrix, score_t, threshold_j, threshold_k, Bipartition,
};
use crate::error::{Error, Result};
use crate::par::map_indexed;
use crate::zoo::{baselines, Family};

/// Grid resolution used for the sample list attached to every scan.
pub const SCAN_GRID: usize = 101;

/// What a scan compares against its bound.
#[derive(Debug, Clone, PartialEq)]
pub enum ScanCriterion {
    /// ‖N^{L|R}‖_tr against the biseparability bound for that cut.
    Bipartition(Bipartition),
    /// T(ρ) against K (valid for any state).
    GmeGeneral,
    /// T(ρ) against J (requires a permutation-invariant base).
    GmePermInvariant,
}

impl std::fmt::Display for ScanCriterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScanCriterion::Bipartition(bp) => write!(f, "bipartition {}", bp.label()),
            ScanCriterion::GmeGeneral => f.write_str("gme"),
            ScanCriterion::GmePermInvariant => f.write_str("gme-perm-invariant"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSample {
    pub x: f64,
    pub score: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub family: String,
    pub alpha: f64,
    pub beta: f64,
    pub criterion: ScanCriterion,
    /// Smallest x past which the criterion fires for good; none if it never
    /// fires at x = 1.
    pub threshold_x: Option<f64>,
    /// Every sign change of score − bound found on the grid (refined).
    pub sign_changes: Vec<f64>,
    pub samples: Vec<ScanSample>,
}

/// The x-independent bound a criterion compares against.
fn criterion_bound(family: &Family, alpha: f64, beta: f64, criterion: &ScanCriterion) -> Result<f64> {
    let dims = family.dims();
    match criterion {
        ScanCriterion::Bipartition(bp) => bound_m(&dims, bp, alpha, beta),
        ScanCriterion::GmeGeneral => threshold_k(&dims, alpha, beta),
        ScanCriterion::GmePermInvariant => threshold_j(&dims, alpha, beta),
    }
}

fn criterion_score(
    family: &Family,
    alpha: f64,
    beta: f64,
    criterion: &ScanCriterion,
    x: f64,
) -> Result<f64> {
    let state = family.state_at(x)?;
    let t = corr_tensor(&state);
    match criterion {
        ScanCriterion::Bipartition(bp) => Ok(n_matrix(&t, bp, alpha, beta)?.trace_norm()),
        ScanCriterion::GmeGeneral | ScanCriterion::GmePermInvariant => score_t(&t, alpha, beta),
    }
}

/// Evaluate one (x, score, bound) triple.
pub fn sample_point(
    family: &Family,
    alpha: f64,
    beta: f64,
    criterion: &ScanCriterion,
    x: f64,
) -> Result<ScanSample> {
    Ok(ScanSample {
        x,
        score: criterion_score(family, alpha, beta, criterion, x)?,
        bound: criterion_bound(family, alpha, beta, criterion)?,
    })
}

/// Locate the detection threshold of a criterion along a family.
pub fn scan(
    family: &Family,
    alpha: f64,
    beta: f64,
    criterion: &ScanCriterion,
    tol: f64,
) -> Result<ScanResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::BadTolerance(tol));
    }
    if matches!(criterion, ScanCriterion::GmePermInvariant) {
        check_permutation_invariant(&family.base())?;
    }
    let bound = criterion_bound(family, alpha, beta, criterion)?;
    // fail fast on malformed bipartitions etc. before the grid spins up
    criterion_score(family, alpha, beta, criterion, 0.0)?;

    let scores = map_indexed(SCAN_GRID, |i| {
        let x = i as f64 / (SCAN_GRID - 1) as f64;
        criterion_score(family, alpha, beta, criterion, x)
            .expect("grid point evaluation cannot fail after the x=0 probe")
    });
    let samples: Vec<ScanSample> = scores
        .iter()
        .enumerate()
        .map(|(i, &score)| ScanSample { x: i as f64 / (SCAN_GRID - 1) as f64, score, bound })
        .collect();

    let gap = |x: f64| -> f64 {
        criterion_score(family, alpha, beta, criterion, x)
            .expect("bisection point evaluation cannot fail after the x=0 probe")
            - bound
    };
    let mut sign_changes = Vec::new();
    for w in samples.windows(2) {
        let (f0, f1) = (w[0].score - bound, w[1].score - bound);
        if (f0 <= 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 <= 0.0) {
            sign_changes.push(bisect(&gap, w[0].x, w[1].x, tol));
        }
    }
    let fires_at_one = samples.last().is_some_and(|s| s.score > s.bound);
    let threshold_x = if fires_at_one { sign_changes.last().copied() } else { None };

    Ok(ScanResult {
        family: family.name().to_string(),
        alpha,
        beta,
        criterion: criterion.clone(),
        threshold_x,
        sign_changes,
        samples,
    })
}

/// Bisect a sign change of f inside [lo, hi] down to interval width tol.
fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let rising = f(hi) > f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let positive = f(mid) > 0.0;
        if positive == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Plot-ready table of x, the criterion gap f(x) = score − bound, and the
/// baselines that accompany this family (g1, g2 for `w3_noise`; g3 for
/// `ghz4_noise`).
#[derive(Debug, Clone, PartialEq)]
pub struct CurveTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn emit_curve(
    family: &Family,
    alpha: f64,
    beta: f64,
    criterion: &ScanCriterion,
    grid: usize,
) -> Result<CurveTable> {
    if grid < 2 {
        return Err(Error::BadGrid(grid));
    }
    if matches!(criterion, ScanCriterion::GmePermInvariant) {
        check_permutation_invariant(&family.base())?;
    }
    let bound = criterion_bound(family, alpha, beta, criterion)?;
    criterion_score(family, alpha, beta, criterion, 0.0)?;

    let mut headers = vec!["x".to_string(), "f".to_string()];
    let extra: &[&str] = match family.name() {
        "w3_noise" => &["g1", "g2"],
        "ghz4_noise" => &["g3"],
        _ => &[],
    };
    headers.extend(extra.iter().map(|s| s.to_string()));

    let rows = map_indexed(grid, |i| {
        let x = i as f64 / (grid - 1) as f64;
        let f = criterion_score(family, alpha, beta, criterion, x)
            .expect("grid point evaluation cannot fail after the x=0 probe")
            - bound;
        let b = baselines(x);
        let mut row = vec![x, f];
        for name in extra {
            row.push(match *name {
                "g1" => b.g1,
                "g2" => b.g2,
                _ => b.g3,
            });
        }
        row
    });
    Ok(CurveTable { headers, rows })
}
