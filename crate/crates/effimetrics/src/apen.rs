//! Approximate entropy of a return window.
//!
//! ApEn(m, r) = Φ^m(r) − Φ^{m+1}(r), where Φ^m averages the log frequency
//! of template matches under the Chebyshev metric with tolerance `r`.
//! Low values mean the window repeats its own patterns (regularity); high
//! values mean randomness. The tolerance is resolved per window as a
//! fraction of its sample standard deviation, which makes the measure
//! invariant under positive rescaling of the data.
//!
//! Self-matches are counted (`j = i` included), keeping every `C_i` strictly
//! positive. Per dimension `m`, templates number `N − m + 1` and the same
//! count is the denominator of `C_i`.
//!
//! Counting is done by a first-component sort-and-sweep accelerator;
//! [`compute_apen_reference`] keeps the plain O(N²·m) double loop as the
//! reference kernel. Both produce identical integer counts, so their results
//! are bit-equal.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats;

#[derive(Debug, Error)]
pub enum ApEnError {
    #[error("vectors of lengths {0} and {1} cannot be compared")]
    LengthMismatch(usize, usize),
    #[error("embedding dimension must be at least 1")]
    BadDimension,
    #[error("tolerance fraction {0} must lie in (0, 1)")]
    BadTolerance(f64),
    #[error("tolerance must be positive")]
    NonPositiveTolerance,
    #[error("template index {index} out of range for {templates} templates")]
    IndexOutOfRange { index: usize, templates: usize },
    #[error("window of {got} observations is too short; need at least {min}")]
    WindowTooShort { min: usize, got: usize },
    #[error("window has zero variance; tolerance degenerates")]
    ZeroVariance,
}

/// Embedding dimension and tolerance fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct ApEnConfig {
    m: usize,
    r_fraction: f64,
}

impl ApEnConfig {
    pub fn new(m: usize, r_fraction: f64) -> Result<Self, ApEnError> {
        if m < 1 {
            return Err(ApEnError::BadDimension);
        }
        if !(r_fraction > 0.0 && r_fraction < 1.0) {
            return Err(ApEnError::BadTolerance(r_fraction));
        }
        Ok(Self { m, r_fraction })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r_fraction(&self) -> f64 {
        self.r_fraction
    }
}

impl Default for ApEnConfig {
    /// `m = 2`, tolerance 20% of the window standard deviation.
    fn default() -> Self {
        Self::new(2, 0.20).expect("static config is valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApEnResult {
    pub value: f64,
    pub phi_m: f64,
    pub phi_m_plus_1: f64,
    pub n_used: usize,
}

/// Maximum absolute componentwise difference.
pub fn chebyshev_distance(u: &[f64], v: &[f64]) -> Result<f64, ApEnError> {
    if u.len() != v.len() {
        return Err(ApEnError::LengthMismatch(u.len(), v.len()));
    }
    if u.is_empty() {
        return Err(ApEnError::LengthMismatch(0, 0));
    }
    Ok(u.iter()
        .zip(v)
        .fold(0.0f64, |acc, (&a, &b)| acc.max((a - b).abs())))
}

fn template_count(window_len: usize, m: usize) -> usize {
    window_len + 1 - m
}

/// `C_i^m(r)`: the fraction of templates within Chebyshev distance `r` of
/// template `i` (0-based; the template at `i` is `window[i..i+m]`),
/// self-match included.
pub fn correlation_fraction(
    window: &[f64],
    i: usize,
    m: usize,
    r: f64,
) -> Result<f64, ApEnError> {
    if m < 1 {
        return Err(ApEnError::BadDimension);
    }
    if window.len() < m {
        return Err(ApEnError::WindowTooShort {
            min: m,
            got: window.len(),
        });
    }
    if r.is_nan() || r <= 0.0 {
        return Err(ApEnError::NonPositiveTolerance);
    }
    let templates = template_count(window.len(), m);
    if i >= templates {
        return Err(ApEnError::IndexOutOfRange {
            index: i,
            templates,
        });
    }
    let u = &window[i..i + m];
    let mut matches = 0usize;
    for j in 0..templates {
        if within_tolerance(u, &window[j..j + m], r) {
            matches += 1;
        }
    }
    Ok(matches as f64 / templates as f64)
}

#[inline]
fn within_tolerance(u: &[f64], v: &[f64], r: f64) -> bool {
    u.iter().zip(v).all(|(&a, &b)| (a - b).abs() <= r)
}

/// Match counts per template, plain double loop.
fn match_counts_naive(window: &[f64], m: usize, r: f64) -> Vec<u32> {
    let templates = template_count(window.len(), m);
    let mut counts = vec![0u32; templates];
    for i in 0..templates {
        for j in 0..templates {
            if within_tolerance(&window[i..i + m], &window[j..j + m], r) {
                counts[i] += 1;
            }
        }
    }
    counts
}

/// Match counts per template via a sort on the first component: candidates
/// for template `i` form a contiguous band in that order, and only the band
/// is checked exactly. The band is widened by a rounding margin so that the
/// exact Chebyshev test (run on every component, first included) decides
/// each pair — counts are identical to the naive kernel.
fn match_counts_sweep(window: &[f64], m: usize, r: f64) -> Vec<u32> {
    let templates = template_count(window.len(), m);
    let mut order: Vec<u32> = (0..templates as u32).collect();
    order.sort_unstable_by(|&a, &b| window[a as usize].total_cmp(&window[b as usize]));

    let max_abs = window.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let margin = 1e-9 * r + 8.0 * f64::EPSILON * max_abs;

    let mut counts = vec![0u32; templates];
    let mut lo = 0usize;
    for (pos, &oi) in order.iter().enumerate() {
        let i = oi as usize;
        let first = window[i];
        while window[order[lo] as usize] < first - r - margin {
            lo += 1;
        }
        let mut hi = pos;
        while hi + 1 < templates && window[order[hi + 1] as usize] <= first + r + margin {
            hi += 1;
        }
        let u = &window[i..i + m];
        let mut c = 0u32;
        for &oj in &order[lo..=hi] {
            let j = oj as usize;
            if within_tolerance(u, &window[j..j + m], r) {
                c += 1;
            }
        }
        counts[i] = c;
    }
    counts
}

fn phi_from_counts(counts: &[u32]) -> f64 {
    let denom = counts.len() as f64;
    // fixed-order summation keeps results bit-stable
    let sum: f64 = counts.iter().map(|&c| (c as f64 / denom).ln()).sum();
    sum / denom
}

/// `Φ^m(r)`: mean over all templates of `ln C_i^m(r)`. Always finite and
/// non-positive because self-matching bounds `C_i` in `[1/(N−m+1), 1]`.
pub fn phi(window: &[f64], m: usize, r: f64) -> Result<f64, ApEnError> {
    validate_phi_args(window, m, r)?;
    Ok(phi_from_counts(&match_counts_sweep(window, m, r)))
}

fn validate_phi_args(window: &[f64], m: usize, r: f64) -> Result<(), ApEnError> {
    if m < 1 {
        return Err(ApEnError::BadDimension);
    }
    if window.len() < m {
        return Err(ApEnError::WindowTooShort {
            min: m,
            got: window.len(),
        });
    }
    if r.is_nan() || r <= 0.0 {
        return Err(ApEnError::NonPositiveTolerance);
    }
    Ok(())
}

fn apen_with(
    window: &[f64],
    config: &ApEnConfig,
    counts: fn(&[f64], usize, f64) -> Vec<u32>,
) -> Result<ApEnResult, ApEnError> {
    let m = config.m;
    if window.len() < m + 2 {
        return Err(ApEnError::WindowTooShort {
            min: m + 2,
            got: window.len(),
        });
    }
    let std = stats::sample_std(window);
    if std.is_nan() || std <= 0.0 {
        return Err(ApEnError::ZeroVariance);
    }
    let r = config.r_fraction * std;
    let phi_m = phi_from_counts(&counts(window, m, r));
    let phi_m_plus_1 = phi_from_counts(&counts(window, m + 1, r));
    Ok(ApEnResult {
        value: phi_m - phi_m_plus_1,
        phi_m,
        phi_m_plus_1,
        n_used: window.len(),
    })
}

/// Approximate entropy with the tolerance resolved as
/// `r_fraction × sample standard deviation` of the window itself.
pub fn compute_apen(window: &[f64], config: &ApEnConfig) -> Result<ApEnResult, ApEnError> {
    apen_with(window, config, match_counts_sweep)
}

/// Reference path: same contract as [`compute_apen`] through the
/// non-optimized O(N²·m) counting kernel.
pub fn compute_apen_reference(
    window: &[f64],
    config: &ApEnConfig,
) -> Result<ApEnResult, ApEnError> {
    apen_with(window, config, match_counts_naive)
}
