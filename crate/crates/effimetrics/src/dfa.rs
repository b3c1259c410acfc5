//! Hurst exponent estimation by detrended fluctuation analysis.
//!
//! The estimator accumulates the mean-subtracted window into a profile,
//! removes an ordinary-least-squares polynomial trend inside non-overlapping
//! boxes of each scale `n`, and reads the Hurst exponent off the log-log
//! regression of the root-mean-square residual `F(n)` against `n`.
//!
//! `H = 0.5` is memoryless; `H > 0.5` persistent long memory; `H < 0.5`
//! anti-persistent.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats;

#[derive(Debug, Error)]
pub enum DfaError {
    #[error("window of {got} observations is too short; need at least {min}")]
    WindowTooShort { min: usize, got: usize },
    #[error("scales must be positive, strictly ascending, and at least detrend_degree + 2")]
    BadScales,
    #[error("detrend degree {0} out of supported range 0..=5")]
    BadDegree(usize),
    #[error("scale {scale} does not fit a profile of length {len}")]
    ScaleTooLarge { scale: usize, len: usize },
    #[error("fit range {0:?} must select at least two scales and stay in bounds")]
    BadFitRange(Range<usize>),
    #[error("internal error: {0}")]
    Internal(&'static str),
}

/// Box sizes, detrending order, and the log-log fit range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfaConfig {
    scales: Vec<usize>,
    detrend_degree: usize,
    fit_range: Option<Range<usize>>,
}

impl DfaConfig {
    pub fn new(scales: Vec<usize>) -> Result<Self, DfaError> {
        Self::with_degree(scales, 1)
    }

    pub fn with_degree(scales: Vec<usize>, detrend_degree: usize) -> Result<Self, DfaError> {
        if detrend_degree > 5 {
            return Err(DfaError::BadDegree(detrend_degree));
        }
        if scales.len() < 2 {
            return Err(DfaError::BadScales);
        }
        for pair in scales.windows(2) {
            if pair[1] <= pair[0] {
                return Err(DfaError::BadScales);
            }
        }
        if scales[0] < detrend_degree + 2 {
            return Err(DfaError::BadScales);
        }
        Ok(Self {
            scales,
            detrend_degree,
            fit_range: None,
        })
    }

    /// Restricts the log-log regression to `scales[range]`.
    pub fn with_fit_range(mut self, range: Range<usize>) -> Result<Self, DfaError> {
        if range.end > self.scales.len() || range.len() < 2 {
            return Err(DfaError::BadFitRange(range));
        }
        self.fit_range = Some(range);
        Ok(self)
    }

    /// Doubling scales `min, 2·min, 4·min, …` up to `max` inclusive.
    pub fn dyadic(min: usize, max: usize) -> Result<Self, DfaError> {
        let mut scales = Vec::new();
        let mut s = min;
        while s <= max {
            scales.push(s);
            s *= 2;
        }
        Self::new(scales)
    }

    pub fn scales(&self) -> &[usize] {
        &self.scales
    }

    pub fn detrend_degree(&self) -> usize {
        self.detrend_degree
    }

    pub fn max_scale(&self) -> usize {
        *self.scales.last().expect("config holds at least two scales")
    }

    fn fit_indices(&self) -> Range<usize> {
        self.fit_range.clone().unwrap_or(0..self.scales.len())
    }
}

impl Default for DfaConfig {
    /// Dyadic scales 16..256 with linear detrending, sized for five-year
    /// (1260-day) windows.
    fn default() -> Self {
        Self::dyadic(16, 256).expect("static config is valid")
    }
}

/// Log-log fit of the fluctuation function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfaResult {
    pub hurst: f64,
    pub log_intercept: f64,
    pub r_squared: f64,
    /// `(n, F(n))` for every configured scale.
    pub per_scale: Vec<(usize, f64)>,
}

/// Either a fitted estimate or a degenerate marker for windows whose
/// fluctuation vanishes (perfectly deterministic input).
#[derive(Debug, Clone, PartialEq)]
pub enum DfaOutcome {
    Estimate(DfaResult),
    Degenerate { scale: usize },
}

impl DfaOutcome {
    pub fn estimate(&self) -> Option<&DfaResult> {
        match self {
            DfaOutcome::Estimate(r) => Some(r),
            DfaOutcome::Degenerate { .. } => None,
        }
    }

    pub fn into_estimate(self) -> Option<DfaResult> {
        match self {
            DfaOutcome::Estimate(r) => Some(r),
            DfaOutcome::Degenerate { .. } => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, DfaOutcome::Degenerate { .. })
    }
}

/// Cumulative sum of the mean-subtracted window:
/// `y(i) = Σ_{k ≤ i} (x(k) − x̄)`.
pub fn profile(window: &[f64]) -> Result<Vec<f64>, DfaError> {
    if window.len() < 2 {
        return Err(DfaError::WindowTooShort {
            min: 2,
            got: window.len(),
        });
    }
    let mean = stats::mean(window);
    let mut acc = 0.0;
    Ok(window
        .iter()
        .map(|&x| {
            acc += x - mean;
            acc
        })
        .collect())
}

/// Root-mean-square residual after removing an OLS polynomial of order
/// `detrend_degree` inside each of the `floor(N/n)` non-overlapping boxes
/// taken from the start of the profile. The tail remainder is discarded.
pub fn fluctuation_at_scale(
    profile: &[f64],
    scale: usize,
    detrend_degree: usize,
) -> Result<f64, DfaError> {
    if detrend_degree > 5 {
        return Err(DfaError::BadDegree(detrend_degree));
    }
    if scale < detrend_degree + 2 {
        return Err(DfaError::BadScales);
    }
    if scale > profile.len() {
        return Err(DfaError::ScaleTooLarge {
            scale,
            len: profile.len(),
        });
    }
    let boxes = profile.len() / scale;
    let mut residual_ssq = 0.0;
    for b in 0..boxes {
        let seg = &profile[b * scale..(b + 1) * scale];
        residual_ssq += detrended_ssq(seg, detrend_degree)?;
    }
    let covered = (boxes * scale) as f64;
    Ok((residual_ssq / covered).sqrt())
}

/// Sum of squared residuals of an OLS polynomial fit over local abscissa
/// `0..len`, solved through the normal equations on centered coordinates.
fn detrended_ssq(seg: &[f64], degree: usize) -> Result<f64, DfaError> {
    let n = seg.len();
    let center = (n as f64 - 1.0) / 2.0;
    let dim = degree + 1;

    // normal equations A c = b with A[p][q] = Σ x^(p+q), b[p] = Σ y x^p
    let mut pow_sums = vec![0.0; 2 * degree + 1];
    let mut b = vec![0.0; dim];
    for (i, &y) in seg.iter().enumerate() {
        let x = i as f64 - center;
        let mut xp = 1.0;
        for (p, s) in pow_sums.iter_mut().enumerate() {
            *s += xp;
            if p < dim {
                b[p] += y * xp;
            }
            xp *= x;
        }
    }
    let mut a = vec![vec![0.0; dim]; dim];
    for (p, row) in a.iter_mut().enumerate() {
        for (q, cell) in row.iter_mut().enumerate() {
            *cell = pow_sums[p + q];
        }
    }
    let coeffs = solve_linear(&mut a, &mut b)?;

    let mut ssq = 0.0;
    for (i, &y) in seg.iter().enumerate() {
        let x = i as f64 - center;
        let mut fit = 0.0;
        for &c in coeffs.iter().rev() {
            fit = fit * x + c;
        }
        let r = y - fit;
        ssq += r * r;
    }
    Ok(ssq)
}

/// Gaussian elimination with partial pivoting; `a` and `b` are consumed.
fn solve_linear(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<Vec<f64>, DfaError> {
    let dim = b.len();
    for col in 0..dim {
        let pivot_row = (col..dim)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .expect("non-empty column");
        if a[pivot_row][col] == 0.0 {
            return Err(DfaError::Internal("singular detrend system"));
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot = a[col].clone();
        for row in col + 1..dim {
            let f = a[row][col] / pivot[col];
            for (cell, &p) in a[row][col..].iter_mut().zip(&pivot[col..]) {
                *cell -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; dim];
    for col in (0..dim).rev() {
        let mut acc = b[col];
        for k in col + 1..dim {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}

/// Estimates the Hurst exponent of a return window.
///
/// Requires the window to be at least four times the largest configured
/// scale. A window whose fluctuation vanishes at any scale yields
/// [`DfaOutcome::Degenerate`] instead of a fit.
pub fn estimate_hurst(window: &[f64], config: &DfaConfig) -> Result<DfaOutcome, DfaError> {
    let min_len = 4 * config.max_scale();
    if window.len() < min_len {
        return Err(DfaError::WindowTooShort {
            min: min_len,
            got: window.len(),
        });
    }
    let prof = profile(window)?;

    let max_abs = window.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    // rounding-noise floor for the mean-subtracted cumulative sum
    let degenerate_tol = 8.0 * f64::EPSILON * window.len() as f64 * max_abs;

    let mut per_scale = Vec::with_capacity(config.scales.len());
    for &scale in &config.scales {
        let f = fluctuation_at_scale(&prof, scale, config.detrend_degree)?;
        if f <= degenerate_tol {
            return Ok(DfaOutcome::Degenerate { scale });
        }
        per_scale.push((scale, f));
    }

    let fit = config.fit_indices();
    let ln_n: Vec<f64> = per_scale[fit.clone()]
        .iter()
        .map(|&(n, _)| (n as f64).ln())
        .collect();
    let ln_f: Vec<f64> = per_scale[fit].iter().map(|&(_, f)| f.ln()).collect();
    let (hurst, log_intercept, r_squared) = stats::linear_fit(&ln_n, &ln_f);
    Ok(DfaOutcome::Estimate(DfaResult {
        hurst,
        log_intercept,
        r_squared,
        per_scale,
    }))
}
