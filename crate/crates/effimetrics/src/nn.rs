//! Next-day direction forecasting by nearest-neighbor matching of
//! delay-embedded return patterns.
//!
//! A pattern library holds the delay vectors
//! `V_n = [x_n, x_{n−τ}, …, x_{n−(m−1)τ}]` of an estimation window. The
//! most recent pattern is matched against the library by squared Euclidean
//! distance, the K candidates are re-checked at dimension `m+1`, and the
//! next-day direction is the majority sign of the surviving candidates'
//! successor returns. Walking the window forward one day at a time over an
//! out-of-sample range and comparing each forecast with the realized sign
//! gives the hit-rate.
//!
//! Conventions, applied symmetrically to forecasts and realized outcomes:
//! zero returns classify as DOWN, and an exact vote tie resolves to the
//! nearest surviving neighbor's successor direction.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::timeseries::{ReturnSeries, SubPeriod};

#[derive(Debug, Error)]
pub enum NnError {
    #[error("embedding parameters must satisfy m ≥ 1, tau ≥ 1, k ≥ 1")]
    BadConfig,
    #[error("window of {got} observations is too short; need at least {min}")]
    WindowTooShort { min: usize, got: usize },
    #[error("target vector has dimension {got}, library expects {want}")]
    DimensionMismatch { want: usize, got: usize },
    #[error("no candidate patterns with a successor")]
    EmptyLibrary,
    #[error("no refined neighbors to vote")]
    EmptyRefined,
    #[error("sub-period ranges exceed the series ({len} observations)")]
    RangeOutOfBounds { len: usize },
}

/// Embedding dimension, time delay, and neighbor count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingConfig {
    m: usize,
    tau: usize,
    k: usize,
}

impl EmbeddingConfig {
    pub fn new(m: usize, tau: usize, k: usize) -> Result<Self, NnError> {
        if m < 1 || tau < 1 || k < 1 {
            return Err(NnError::BadConfig);
        }
        Ok(Self { m, tau, k })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k.max(1);
        self
    }
}

impl Default for EmbeddingConfig {
    /// `m = 2`, `τ = 1`, `K = 20`.
    fn default() -> Self {
        Self::new(2, 1, 20).expect("static config is valid")
    }
}

/// Delay vectors of one estimation window, addressed by the position `n`
/// of their newest component. Only positions whose successor `x_{n+1}`
/// lies inside the window are candidate matches; the final position is the
/// forecast target and never matches itself.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternLibrary {
    m: usize,
    tau: usize,
    window: Vec<f64>,
}

impl PatternLibrary {
    fn min_window(m: usize, tau: usize) -> usize {
        m * tau + 1
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.window.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.window
    }

    /// Positions with both a defined vector and a defined successor.
    pub fn candidate_indices(&self) -> std::ops::Range<usize> {
        (self.m - 1) * self.tau..self.window.len() - 1
    }

    /// Delay vector `[x_n, x_{n−τ}, …, x_{n−(m−1)τ}]`.
    pub fn vector_m(&self, n: usize) -> Vec<f64> {
        self.vector(n, self.m)
    }

    /// Same position embedded at dimension `m + 1` (one more lagged value).
    /// Defined only for positions with `n ≥ m·τ`; see [`Self::extendable`].
    pub fn vector_m1(&self, n: usize) -> Vec<f64> {
        self.vector(n, self.m + 1)
    }

    /// Whether position `n` has enough history for a dimension-`m+1` vector.
    pub fn extendable(&self, n: usize) -> bool {
        n >= self.m * self.tau
    }

    fn vector(&self, n: usize, dim: usize) -> Vec<f64> {
        (0..dim).map(|j| self.window[n - j * self.tau]).collect()
    }

    pub fn successor(&self, n: usize) -> Option<f64> {
        self.window.get(n + 1).copied()
    }

    /// The newest position's vector at dimension `m + 1`; its first `m`
    /// components form the matching target.
    pub fn target_vector_m1(&self) -> Vec<f64> {
        self.vector_m1(self.window.len() - 1)
    }

    /// Slides the window one day forward: drops the oldest return, appends
    /// the newest. Contents stay bit-identical to a fresh reconstruction of
    /// the shifted window.
    pub fn advance(&mut self, next: f64) {
        self.window.rotate_left(1);
        *self.window.last_mut().expect("library is never empty") = next;
    }

    fn distance_m(&self, target: &[f64], n: usize) -> f64 {
        let mut d = 0.0;
        for (j, &t) in target.iter().enumerate() {
            let diff = t - self.window[n - j * self.tau];
            d += diff * diff;
        }
        d
    }
}

/// Builds the pattern library of a window. Requires
/// `window.len() ≥ m·τ + 1` so that at least one candidate and the
/// dimension-`m+1` target exist.
pub fn reconstruct(window: &[f64], config: &EmbeddingConfig) -> Result<PatternLibrary, NnError> {
    let min = PatternLibrary::min_window(config.m, config.tau);
    if window.len() < min {
        return Err(NnError::WindowTooShort {
            min,
            got: window.len(),
        });
    }
    Ok(PatternLibrary {
        m: config.m,
        tau: config.tau,
        window: window.to_vec(),
    })
}

/// Candidate neighbors ranked ascending by squared Euclidean distance,
/// ties broken toward the smaller (older) index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborMatches {
    pub indices: Vec<usize>,
    /// Set when `k` exceeded the candidate count and all candidates were
    /// returned instead.
    pub short_supply: bool,
}

/// The `k` candidate indices minimizing squared Euclidean distance to
/// `target` (dimension `m`).
pub fn find_neighbors(
    target: &[f64],
    library: &PatternLibrary,
    k: usize,
) -> Result<NeighborMatches, NnError> {
    if target.len() != library.m {
        return Err(NnError::DimensionMismatch {
            want: library.m,
            got: target.len(),
        });
    }
    let candidates = library.candidate_indices();
    if candidates.is_empty() {
        return Err(NnError::EmptyLibrary);
    }
    let mut ranked: Vec<(f64, usize)> = candidates
        .map(|n| (library.distance_m(target, n), n))
        .collect();
    ranked.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let short_supply = k > ranked.len();
    let take = k.min(ranked.len());
    Ok(NeighborMatches {
        indices: ranked[..take].iter().map(|&(_, n)| n).collect(),
        short_supply,
    })
}

/// Candidates surviving the dimension-`m+1` confirmation, in their original
/// distance rank order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedMatches {
    pub indices: Vec<usize>,
    /// Set when the filter emptied and the single best candidate at
    /// dimension `m+1` was kept instead.
    pub fallback: bool,
}

fn distance_sq(u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum()
}

/// Confirms candidates at dimension `m+1`: keeps those whose
/// `(m+1)`-dimensional distance to the extended target stays within the
/// worst `m`-dimensional distance among the candidates. Candidates too
/// close to the window start to extend fail the confirmation. Guarantees at
/// least one survivor by falling back to the single best `m+1`-distance
/// candidate (or, when none extends, the nearest-ranked candidate).
pub fn refine_matches(
    candidates: &[usize],
    target_m1: &[f64],
    library: &PatternLibrary,
) -> Result<RefinedMatches, NnError> {
    if target_m1.len() != library.m + 1 {
        return Err(NnError::DimensionMismatch {
            want: library.m + 1,
            got: target_m1.len(),
        });
    }
    if candidates.is_empty() {
        return Err(NnError::EmptyRefined);
    }
    let target_m = &target_m1[..library.m];
    let threshold = candidates
        .iter()
        .map(|&n| library.distance_m(target_m, n))
        .fold(0.0f64, f64::max);
    let extended: Vec<(usize, f64)> = candidates
        .iter()
        .filter(|&&n| library.extendable(n))
        .map(|&n| (n, distance_sq(target_m1, &library.vector_m1(n))))
        .collect();
    let kept: Vec<usize> = extended
        .iter()
        .filter(|&&(_, d)| d <= threshold)
        .map(|&(n, _)| n)
        .collect();
    if !kept.is_empty() {
        return Ok(RefinedMatches {
            indices: kept,
            fallback: false,
        });
    }
    let best = extended
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|&(n, _)| n)
        .unwrap_or(candidates[0]);
    Ok(RefinedMatches {
        indices: vec![best],
        fallback: true,
    })
}

/// Predicted price-change direction. Zero returns classify as `Down`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn of_return(r: f64) -> Self {
        if r > 0.0 {
            Direction::Up
        } else {
            Direction::Down
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Up => write!(f, "UP"),
            Direction::Down => write!(f, "DOWN"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionForecast {
    pub direction: Direction,
    pub up_votes: usize,
    pub down_votes: usize,
    pub neighbor_indices: Vec<usize>,
}

/// Majority vote over the successor returns of the refined neighbors. An
/// exact tie resolves to the first (nearest-ranked) neighbor's successor
/// direction.
pub fn forecast_direction(
    refined: &[usize],
    library: &PatternLibrary,
) -> Result<DirectionForecast, NnError> {
    if refined.is_empty() {
        return Err(NnError::EmptyRefined);
    }
    let mut up_votes = 0;
    let mut down_votes = 0;
    for &n in refined {
        let succ = library.successor(n).ok_or(NnError::EmptyLibrary)?;
        match Direction::of_return(succ) {
            Direction::Up => up_votes += 1,
            Direction::Down => down_votes += 1,
        }
    }
    let direction = match up_votes.cmp(&down_votes) {
        std::cmp::Ordering::Greater => Direction::Up,
        std::cmp::Ordering::Less => Direction::Down,
        std::cmp::Ordering::Equal => {
            let nearest = refined[0];
            let succ = library.successor(nearest).ok_or(NnError::EmptyLibrary)?;
            Direction::of_return(succ)
        }
    };
    Ok(DirectionForecast {
        direction,
        up_votes,
        down_votes,
        neighbor_indices: refined.to_vec(),
    })
}

/// One out-of-sample day of a walk-forward run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DayForecast {
    /// Index of the predicted day in the full return series.
    pub day: usize,
    pub predicted: Direction,
    pub actual: Direction,
    pub hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitRateResult {
    pub hits: usize,
    pub total: usize,
    pub hit_rate: f64,
}

/// Forecasts every day of the sub-period's prediction range one day ahead,
/// sliding the estimation window forward after each day.
pub fn walk_forward_forecasts(
    series: &ReturnSeries,
    sub: &SubPeriod,
    config: &EmbeddingConfig,
) -> Result<Vec<DayForecast>, NnError> {
    let values = series.values();
    if sub.prediction.end > values.len() || sub.estimation.end != sub.prediction.start {
        return Err(NnError::RangeOutOfBounds { len: values.len() });
    }
    let mut library = reconstruct(&values[sub.estimation.clone()], config)?;
    let mut out = Vec::with_capacity(sub.prediction.len());
    for day in sub.prediction.clone() {
        let target_m1 = library.target_vector_m1();
        let neighbors = find_neighbors(&target_m1[..config.m], &library, config.k)?;
        let refined = refine_matches(&neighbors.indices, &target_m1, &library)?;
        let forecast = forecast_direction(&refined.indices, &library)?;
        let actual = Direction::of_return(values[day]);
        out.push(DayForecast {
            day,
            predicted: forecast.direction,
            actual,
            hit: forecast.direction == actual,
        });
        library.advance(values[day]);
    }
    Ok(out)
}

/// Fraction of prediction-range days whose forecast direction matched the
/// realized sign.
pub fn walk_forward_hit_rate(
    series: &ReturnSeries,
    sub: &SubPeriod,
    config: &EmbeddingConfig,
) -> Result<HitRateResult, NnError> {
    let days = walk_forward_forecasts(series, sub, config)?;
    let hits = days.iter().filter(|d| d.hit).count();
    let total = days.len();
    Ok(HitRateResult {
        hits,
        total,
        hit_rate: hits as f64 / total as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timeseries::{weekday_dates, SubPeriod};
    use chrono::NaiveDate;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn series(values: Vec<f64>) -> ReturnSeries {
        let start = NaiveDate::from_ymd_opt(1992, 1, 6).unwrap();
        let dates = weekday_dates(start, values.len());
        ReturnSeries::from_parts("test", dates, values).unwrap()
    }

    fn gaussian(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.sample(StandardNormal)).collect()
    }

    #[test]
    fn reconstruct_expands_delay_vectors() {
        let cfg = EmbeddingConfig::new(2, 1, 3).unwrap();
        let lib = reconstruct(&[1.0, 2.0, 3.0, 4.0], &cfg).unwrap();
        assert_eq!(lib.candidate_indices(), 1..3);
        assert_eq!(lib.vector_m(1), vec![2.0, 1.0]);
        assert_eq!(lib.vector_m(2), vec![3.0, 2.0]);
        assert_eq!(lib.successor(1), Some(3.0));
        assert_eq!(lib.successor(2), Some(4.0));
        // final position has no successor and is excluded from matching
        assert_eq!(lib.vector_m(3), vec![4.0, 3.0]);
        assert_eq!(lib.successor(3), None);
    }

    #[test]
    fn degenerate_embedding_uses_scalars() {
        let cfg = EmbeddingConfig::new(1, 1, 2).unwrap();
        let lib = reconstruct(&[5.0, 6.0, 7.0], &cfg).unwrap();
        assert_eq!(lib.candidate_indices(), 0..2);
        assert_eq!(lib.vector_m(0), vec![5.0]);
    }

    #[test]
    fn delay_two_looks_back_two_steps() {
        let (a, b, c, d, e) = (0.1, 0.2, 0.3, 0.4, 0.5);
        let cfg = EmbeddingConfig::new(2, 2, 2).unwrap();
        let lib = reconstruct(&[a, b, c, d, e], &cfg).unwrap();
        assert_eq!(lib.vector_m(2), vec![c, a]);
    }

    #[test]
    fn reconstruct_rejects_short_window() {
        let cfg = EmbeddingConfig::new(2, 1, 3).unwrap();
        assert!(matches!(
            reconstruct(&[1.0, 2.0], &cfg),
            Err(NnError::WindowTooShort { min: 3, got: 2 })
        ));
    }

    #[test]
    fn exact_match_ranks_first_with_zero_distance() {
        let cfg = EmbeddingConfig::new(2, 1, 2).unwrap();
        let lib = reconstruct(&[0.5, -0.2, 0.8, 0.1, -0.4], &cfg).unwrap();
        let target = lib.vector_m(2); // [0.8, -0.2]
        let found = find_neighbors(&target, &lib, 2).unwrap();
        assert_eq!(found.indices[0], 2);
        assert!(!found.short_supply);
    }

    #[test]
    fn neighbors_sorted_by_distance() {
        // m=1 scalars: candidates 0..4 with values 0, 2, -1, 3
        let cfg = EmbeddingConfig::new(1, 1, 2).unwrap();
        let lib = reconstruct(&[0.0, 2.0, -1.0, 3.0, 9.0], &cfg).unwrap();
        let found = find_neighbors(&[0.0], &lib, 2).unwrap();
        // distances: 0, 4, 1, 9 → indices 0 then 2
        assert_eq!(found.indices, vec![0, 2]);
    }

    #[test]
    fn oversized_k_returns_all_flagged() {
        let cfg = EmbeddingConfig::new(2, 1, 50).unwrap();
        let lib = reconstruct(&[0.5, -0.2, 0.8, 0.1, -0.4], &cfg).unwrap();
        let found = find_neighbors(&[0.0, 0.0], &lib, 50).unwrap();
        assert_eq!(found.indices.len(), 3);
        assert!(found.short_supply);
    }

    #[test]
    fn neighbors_match_exhaustive_scan() {
        let cfg = EmbeddingConfig::new(2, 1, 10).unwrap();
        for seed in 0..10 {
            let w = gaussian(300, seed);
            let lib = reconstruct(&w, &cfg).unwrap();
            let target = lib.target_vector_m1();
            let found = find_neighbors(&target[..2], &lib, 10).unwrap();

            // oracle: full scan, full sort
            let mut all: Vec<(f64, usize)> = lib
                .candidate_indices()
                .map(|n| (distance_sq(&target[..2], &lib.vector_m(n)), n))
                .collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let expect: Vec<usize> = all[..10].iter().map(|&(_, n)| n).collect();
            assert_eq!(found.indices, expect, "seed {seed}");
        }
    }

    #[test]
    fn refine_keeps_all_when_identical_at_m1() {
        // period-2 series: same-phase candidates match the target exactly
        // at dimension m+1, so the confirmation keeps every one of them
        let w: Vec<f64> = (0..22).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let cfg = EmbeddingConfig::new(2, 1, 4).unwrap();
        let lib = reconstruct(&w, &cfg).unwrap();
        let target = lib.target_vector_m1();
        let candidates = vec![5, 7, 9, 11];
        let refined = refine_matches(&candidates, &target, &lib).unwrap();
        assert_eq!(refined.indices, candidates);
        assert!(!refined.fallback);
    }

    #[test]
    fn refine_drops_candidates_without_m1_history() {
        // the window-start candidate cannot extend and fails confirmation
        let w: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let cfg = EmbeddingConfig::new(2, 1, 4).unwrap();
        let lib = reconstruct(&w, &cfg).unwrap();
        let target = lib.target_vector_m1();
        let found = find_neighbors(&target[..2], &lib, 4).unwrap();
        assert_eq!(found.indices, vec![1, 3, 5, 7]);
        assert!(!lib.extendable(1));
        let refined = refine_matches(&found.indices, &target, &lib).unwrap();
        assert_eq!(refined.indices, vec![3, 5, 7]);
        assert!(!refined.fallback);
    }

    #[test]
    fn refine_filters_to_single_survivor() {
        // candidates equal at dimension m, separated at m+1
        let w = vec![5.0, 0.0, 1.0, 0.0, 1.0, 90.0, 0.0, 1.0, 0.0, 1.0];
        let cfg = EmbeddingConfig::new(2, 1, 2).unwrap();
        let lib = reconstruct(&w, &cfg).unwrap();
        // target [x9, x8, x7] = [1, 0, 1] at m+1
        let target = lib.target_vector_m1();
        assert_eq!(target, vec![1.0, 0.0, 1.0]);
        // candidates 4 (vector [1,0], lag2 = 1) and 8 (vector [1,0], lag2 = 1)
        // both distance 0 at m; candidate 6 has vector [0,90]
        let found = find_neighbors(&target[..2], &lib, 2).unwrap();
        assert_eq!(found.indices, vec![2, 4]);
        // index 2 extends to [1,0,5], index 4 to [1,0,1]: threshold 0 keeps 4
        let refined = refine_matches(&found.indices, &target, &lib).unwrap();
        assert_eq!(refined.indices, vec![4]);
        assert!(!refined.fallback);
    }

    #[test]
    fn refine_falls_back_to_best_extended_candidate() {
        let cfg = EmbeddingConfig::new(2, 1, 2).unwrap();
        let w = vec![9.0, 0.0, 1.0, 4.0, 0.0, 1.0, 2.0, 0.3, 1.1];
        let lib = reconstruct(&w, &cfg).unwrap();
        let target = lib.target_vector_m1();
        let found = find_neighbors(&target[..2], &lib, 2).unwrap();
        let refined = refine_matches(&found.indices, &target, &lib).unwrap();
        if refined.fallback {
            assert_eq!(refined.indices.len(), 1);
        }
        // brute-force recomputation of the rule
        let threshold = found
            .indices
            .iter()
            .map(|&n| distance_sq(&target[..2], &lib.vector_m(n)))
            .fold(0.0f64, f64::max);
        let kept: Vec<usize> = found
            .indices
            .iter()
            .copied()
            .filter(|&n| lib.extendable(n) && distance_sq(&target, &lib.vector_m1(n)) <= threshold)
            .collect();
        if kept.is_empty() {
            assert!(refined.fallback);
        } else {
            assert_eq!(refined.indices, kept);
        }
    }

    #[test]
    fn refinement_matches_brute_force_on_random_instances() {
        let cfg = EmbeddingConfig::new(2, 1, 10).unwrap();
        for seed in 100..110 {
            let w = gaussian(300, seed);
            let lib = reconstruct(&w, &cfg).unwrap();
            let target = lib.target_vector_m1();
            let found = find_neighbors(&target[..2], &lib, 10).unwrap();
            let refined = refine_matches(&found.indices, &target, &lib).unwrap();

            let threshold = found
                .indices
                .iter()
                .map(|&n| distance_sq(&target[..2], &lib.vector_m(n)))
                .fold(0.0f64, f64::max);
            let kept: Vec<usize> = found
                .indices
                .iter()
                .copied()
                .filter(|&n| {
                    lib.extendable(n) && distance_sq(&target, &lib.vector_m1(n)) <= threshold
                })
                .collect();
            if kept.is_empty() {
                assert!(refined.fallback, "seed {seed}");
                assert_eq!(refined.indices.len(), 1, "seed {seed}");
            } else {
                assert_eq!(refined.indices, kept, "seed {seed}");
            }
        }
    }

    #[test]
    fn majority_vote_wins() {
        let cfg = EmbeddingConfig::new(1, 1, 3).unwrap();
        let lib = reconstruct(&[0.0, 0.01, 0.0, 0.02, 0.0, -0.01, 0.0], &cfg).unwrap();
        // successors of candidates 0, 2, 4 are +0.01, +0.02, -0.01
        let forecast = forecast_direction(&[0, 2, 4], &lib).unwrap();
        assert_eq!(forecast.direction, Direction::Up);
        assert_eq!((forecast.up_votes, forecast.down_votes), (2, 1));
    }

    #[test]
    fn singleton_vote() {
        let cfg = EmbeddingConfig::new(1, 1, 1).unwrap();
        let lib = reconstruct(&[0.5, -0.01, 0.3], &cfg).unwrap();
        let forecast = forecast_direction(&[0], &lib).unwrap();
        assert_eq!(forecast.direction, Direction::Down);
    }

    #[test]
    fn tie_resolves_to_nearest_neighbor_successor() {
        let cfg = EmbeddingConfig::new(1, 1, 2).unwrap();
        let lib = reconstruct(&[0.0, 0.01, 0.0, -0.02, 0.0], &cfg).unwrap();
        // successors of 0 and 2: +0.01 and -0.02; nearest listed first
        let forecast = forecast_direction(&[0, 2], &lib).unwrap();
        assert_eq!(forecast.direction, Direction::Up);
        let forecast = forecast_direction(&[2, 0], &lib).unwrap();
        assert_eq!(forecast.direction, Direction::Down);
    }

    #[test]
    fn zero_return_counts_as_down() {
        assert_eq!(Direction::of_return(0.0), Direction::Down);
        assert_eq!(Direction::of_return(-0.0), Direction::Down);
        assert_eq!(Direction::of_return(1e-300), Direction::Up);
    }

    #[test]
    fn all_positive_returns_hit_every_day() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let values: Vec<f64> = (0..160).map(|_| rng.random_range(0.001..0.01)).collect();
        let s = series(values);
        let sub = SubPeriod {
            index: 1,
            estimation: 0..120,
            prediction: 120..160,
        };
        let res = walk_forward_hit_rate(&s, &sub, &EmbeddingConfig::default()).unwrap();
        assert_eq!(res.hits, 40);
        assert_eq!(res.total, 40);
        assert_eq!(res.hit_rate, 1.0);
    }

    #[test]
    fn period_four_pattern_is_fully_predictable() {
        let pattern = [0.013, -0.021, 0.034, -0.008];
        let values: Vec<f64> = (0..400).map(|i| pattern[i % 4]).collect();
        let s = series(values);
        let sub = SubPeriod {
            index: 1,
            estimation: 0..300,
            prediction: 300..400,
        };
        let cfg = EmbeddingConfig::new(2, 1, 3).unwrap();
        let res = walk_forward_hit_rate(&s, &sub, &cfg).unwrap();
        assert_eq!(res.hit_rate, 1.0);
    }

    #[test]
    fn iid_returns_hit_near_half() {
        let cfg = EmbeddingConfig::default();
        let mut rates = Vec::new();
        for seed in 0..20 {
            let values = gaussian(504 + 126, seed);
            let s = series(values);
            let sub = SubPeriod {
                index: 1,
                estimation: 0..504,
                prediction: 504..630,
            };
            rates.push(walk_forward_hit_rate(&s, &sub, &cfg).unwrap().hit_rate);
        }
        let mean = crate::stats::mean(&rates);
        assert!((mean - 0.5).abs() < 0.05, "mean hit rate {mean}");
    }

    #[test]
    fn shifting_all_returns_positive_forecasts_up_always() {
        let cfg = EmbeddingConfig::default();
        let base = gaussian(700, 17);
        let max_abs = base.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        let shifted: Vec<f64> = base.iter().map(|&x| x + 2.0 * max_abs).collect();
        let s = series(shifted);
        let sub = SubPeriod {
            index: 1,
            estimation: 0..504,
            prediction: 504..700,
        };
        for day in walk_forward_forecasts(&s, &sub, &cfg).unwrap() {
            assert_eq!(day.predicted, Direction::Up);
            assert!(day.hit);
        }
    }

    #[test]
    fn incremental_advance_equals_full_rebuild() {
        let cfg = EmbeddingConfig::default();
        let values = gaussian(800, 23);
        let s = series(values.clone());
        let sub = SubPeriod {
            index: 1,
            estimation: 0..504,
            prediction: 504..800,
        };
        let incremental = walk_forward_forecasts(&s, &sub, &cfg).unwrap();

        // rebuild the library from scratch for every prediction day
        let est_len = sub.estimation.len();
        for (step, rec) in incremental.iter().enumerate() {
            let day = sub.prediction.start + step;
            let fresh = reconstruct(&values[day - est_len..day], &cfg).unwrap();
            let target = fresh.target_vector_m1();
            let neighbors = find_neighbors(&target[..cfg.m()], &fresh, cfg.k()).unwrap();
            let refined = refine_matches(&neighbors.indices, &target, &fresh).unwrap();
            let forecast = forecast_direction(&refined.indices, &fresh).unwrap();
            assert_eq!(rec.predicted, forecast.direction, "day {day}");
        }
    }

    #[test]
    fn target_day_never_among_candidates() {
        let cfg = EmbeddingConfig::default();
        let w = gaussian(300, 31);
        let lib = reconstruct(&w, &cfg).unwrap();
        let last = lib.len() - 1;
        assert!(!lib.candidate_indices().contains(&last));
        let target = lib.target_vector_m1();
        let found = find_neighbors(&target[..2], &lib, lib.len()).unwrap();
        assert!(!found.indices.contains(&last));
    }

    #[test]
    fn hit_rate_monotone_in_generator_persistence() {
        use crate::synthetic::{gen_fgn, FgnSpec};
        let cfg = EmbeddingConfig::default();
        let seeds = 50;
        let mut means = Vec::new();
        let mut stds = Vec::new();
        for (i, &h) in [0.5, 0.6, 0.7].iter().enumerate() {
            let mut rates = Vec::new();
            for seed in 0..seeds {
                let spec = FgnSpec::new(h, 756, 7_000 + (i as u64) * 1_000 + seed).unwrap();
                let s = gen_fgn(&spec).unwrap();
                let sub = SubPeriod {
                    index: 1,
                    estimation: 0..504,
                    prediction: 504..756,
                };
                rates.push(walk_forward_hit_rate(&s, &sub, &cfg).unwrap().hit_rate);
            }
            means.push(crate::stats::mean(&rates));
            stds.push(crate::stats::sample_std(&rates) / (seeds as f64).sqrt());
        }
        // no significant decrease between adjacent levels (one-sided, 5%)
        for i in 0..2 {
            let se = (stds[i].powi(2) + stds[i + 1].powi(2)).sqrt();
            assert!(
                means[i + 1] - means[i] > -1.645 * se,
                "mean hit-rate decreased: {means:?}"
            );
        }
        // significant overall increase from 0.5 to 0.7
        let se = (stds[0].powi(2) + stds[2].powi(2)).sqrt();
        assert!(
            means[2] - means[0] > 1.645 * se,
            "no significant increase: {means:?} (se {se})"
        );
    }
}
