//! Rolling per-market estimation and cross-market correlation.
//!
//! For each market the pipeline lays the window calendar over the return
//! series and measures, per sub-period `t`: the DFA Hurst exponent `H_t`
//! and approximate entropy `A_t` on the estimation range, and the
//! walk-forward hit-rate `NN_t` on the prediction range. Per-market
//! averages run over the sub-periods `t = 1…T−1` that carry a prediction
//! year; the endpoint comparison additionally measures the final
//! estimation-only window `t = T`. Sub-periods with degenerate estimation
//! windows are dropped from all three averages jointly and recorded.
//!
//! Markets are independent and run in parallel with a deterministic merge.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apen::{compute_apen, ApEnConfig, ApEnError};
use crate::dfa::{estimate_hurst, DfaConfig, DfaError, DfaOutcome};
use crate::nn::{walk_forward_hit_rate, EmbeddingConfig, NnError};
use crate::timeseries::{
    build_window_plan, final_estimation_window, log_returns, PlanError, PriceSeries,
    ReturnSeries, WindowPlan,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Dfa(#[from] DfaError),
    #[error(transparent)]
    ApEn(#[from] ApEnError),
    #[error(transparent)]
    Nn(#[from] NnError),
    #[error("estimation window of {estimation} days cannot hold 4× the largest DFA scale {max_scale}")]
    ScaleExceedsWindow { estimation: usize, max_scale: usize },
    #[error("market {market_id}: every sub-period degenerated; nothing to average")]
    AllWindowsDegenerate { market_id: String },
    #[error("correlation needs at least {min} values, got {got}")]
    NotEnoughData { min: usize, got: usize },
    #[error("correlation undefined for constant input")]
    ConstantInput,
}

/// Measurements of one sub-period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubPeriodMeasures {
    pub t: usize,
    pub hurst: f64,
    pub apen: f64,
    pub hit_rate: f64,
}

/// `H` and `A` at the first (`t = 1`) and final estimation-only (`t = T`)
/// windows, for past-vs-present comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointMeasures {
    pub first_hurst: f64,
    pub first_apen: f64,
    pub last_hurst: f64,
    pub last_apen: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketSummary {
    pub market_id: String,
    pub per_subperiod: Vec<SubPeriodMeasures>,
    /// Sub-period indices dropped because their estimation window
    /// degenerated.
    pub excluded: Vec<usize>,
    pub mean_hurst: f64,
    pub mean_apen: f64,
    pub mean_hit_rate: f64,
    /// Absent when either endpoint window degenerated or the final
    /// estimation-only window does not fit the data.
    pub first_last: Option<EndpointMeasures>,
}

/// Pearson coefficients over per-market means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub rho_h_a: f64,
    pub rho_nn_h: f64,
    pub rho_nn_a: f64,
    pub n_markets: usize,
}

/// Runs the full rolling measurement for one market's prices.
pub fn run_market(
    prices: &PriceSeries,
    plan: &WindowPlan,
    dfa: &DfaConfig,
    apen: &ApEnConfig,
    nn: &EmbeddingConfig,
) -> Result<MarketSummary, PipelineError> {
    run_market_returns(&log_returns(prices), plan, dfa, apen, nn)
}

/// Same as [`run_market`] starting from returns.
pub fn run_market_returns(
    series: &ReturnSeries,
    plan: &WindowPlan,
    dfa: &DfaConfig,
    apen: &ApEnConfig,
    nn: &EmbeddingConfig,
) -> Result<MarketSummary, PipelineError> {
    if plan.estimation_len() < 4 * dfa.max_scale() {
        return Err(PipelineError::ScaleExceedsWindow {
            estimation: plan.estimation_len(),
            max_scale: dfa.max_scale(),
        });
    }
    let values = series.values();
    let subs = build_window_plan(values.len(), plan)?;

    let mut per_subperiod = Vec::with_capacity(subs.len());
    let mut excluded = Vec::new();
    let mut first: Option<(f64, f64)> = None;
    for sub in &subs {
        let window = &values[sub.estimation.clone()];
        let hurst = match estimate_hurst(window, dfa)? {
            DfaOutcome::Estimate(r) => r.hurst,
            DfaOutcome::Degenerate { .. } => {
                excluded.push(sub.index);
                continue;
            }
        };
        let apen_value = match compute_apen(window, apen) {
            Ok(r) => r.value,
            Err(ApEnError::ZeroVariance) => {
                excluded.push(sub.index);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let hit = walk_forward_hit_rate(series, sub, nn)?;
        if sub.index == 1 {
            first = Some((hurst, apen_value));
        }
        per_subperiod.push(SubPeriodMeasures {
            t: sub.index,
            hurst,
            apen: apen_value,
            hit_rate: hit.hit_rate,
        });
    }
    if per_subperiod.is_empty() {
        return Err(PipelineError::AllWindowsDegenerate {
            market_id: series.market_id().to_string(),
        });
    }

    let n = per_subperiod.len() as f64;
    let mean_hurst = per_subperiod.iter().map(|m| m.hurst).sum::<f64>() / n;
    let mean_apen = per_subperiod.iter().map(|m| m.apen).sum::<f64>() / n;
    let mean_hit_rate = per_subperiod.iter().map(|m| m.hit_rate).sum::<f64>() / n;

    // endpoint comparison includes the final estimation-only window t = T
    let first_last = match (first, final_estimation_window(values.len(), plan)?) {
        (Some((first_hurst, first_apen)), Some((_, range))) => {
            let window = &values[range];
            let last_h = estimate_hurst(window, dfa)?.into_estimate().map(|r| r.hurst);
            let last_a = compute_apen(window, apen).ok().map(|r| r.value);
            match (last_h, last_a) {
                (Some(last_hurst), Some(last_apen)) => Some(EndpointMeasures {
                    first_hurst,
                    first_apen,
                    last_hurst,
                    last_apen,
                }),
                _ => None,
            }
        }
        _ => None,
    };

    Ok(MarketSummary {
        market_id: series.market_id().to_string(),
        per_subperiod,
        excluded,
        mean_hurst,
        mean_apen,
        mean_hit_rate,
        first_last,
    })
}

/// Runs every market in parallel; results come back in input order.
pub fn run_panel_returns(
    markets: &[ReturnSeries],
    plan: &WindowPlan,
    dfa: &DfaConfig,
    apen: &ApEnConfig,
    nn: &EmbeddingConfig,
) -> Result<Vec<MarketSummary>, PipelineError> {
    markets
        .par_iter()
        .map(|series| run_market_returns(series, plan, dfa, apen, nn))
        .collect()
}

/// Standard Pearson product-moment coefficient. Inputs must have equal
/// length at least 3 and must not be constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64, PipelineError> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(PipelineError::NotEnoughData {
            min: 3,
            got: xs.len().min(ys.len()),
        });
    }
    let x_mean = crate::stats::mean(xs);
    let y_mean = crate::stats::mean(ys);
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - x_mean) * (x - x_mean);
        syy += (y - y_mean) * (y - y_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(PipelineError::ConstantInput);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Correlates the per-market mean Hurst exponent, mean ApEn, and mean
/// hit-rate across a panel. Markets are ordered by id internally, so the
/// report does not depend on input order.
pub fn cross_market_correlations(
    summaries: &[MarketSummary],
) -> Result<CorrelationReport, PipelineError> {
    if summaries.len() < 3 {
        return Err(PipelineError::NotEnoughData {
            min: 3,
            got: summaries.len(),
        });
    }
    let mut ordered: Vec<&MarketSummary> = summaries.iter().collect();
    ordered.sort_by(|a, b| a.market_id.cmp(&b.market_id));
    let hs: Vec<f64> = ordered.iter().map(|s| s.mean_hurst).collect();
    let as_: Vec<f64> = ordered.iter().map(|s| s.mean_apen).collect();
    let nns: Vec<f64> = ordered.iter().map(|s| s.mean_hit_rate).collect();
    Ok(CorrelationReport {
        rho_h_a: pearson(&hs, &as_)?,
        rho_nn_h: pearson(&nns, &hs)?,
        rho_nn_a: pearson(&nns, &as_)?,
        n_markets: summaries.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic::{gen_fgn, moment_match, FgnSpec};
    use crate::timeseries::weekday_dates;
    use chrono::NaiveDate;

    fn plan_small() -> WindowPlan {
        WindowPlan::new(504, 126, 126).unwrap()
    }

    fn dfa_small() -> DfaConfig {
        DfaConfig::dyadic(16, 126).unwrap()
    }

    #[test]
    fn pearson_identity_and_negation() {
        let xs = [1.0, 2.0, 3.0, 5.0];
        assert!((pearson(&xs, &xs).unwrap() - 1.0).abs() < 1e-12);
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &neg).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn pearson_hand_value() {
        let r = pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap();
        assert!((r - 0.9819).abs() < 1e-4);
    }

    #[test]
    fn pearson_rejects_constant_and_short_input() {
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(PipelineError::ConstantInput)
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0, 2.0]),
            Err(PipelineError::NotEnoughData { .. })
        ));
    }

    #[test]
    fn single_subperiod_market_means_equal_values() {
        let spec = FgnSpec::with_scale(0.6, 630, 5, 0.01).unwrap();
        let series = gen_fgn(&spec).unwrap();
        let summary = run_market_returns(
            &series,
            &plan_small(),
            &dfa_small(),
            &ApEnConfig::default(),
            &EmbeddingConfig::default(),
        )
        .unwrap();
        assert_eq!(summary.per_subperiod.len(), 1);
        let row = &summary.per_subperiod[0];
        assert_eq!(summary.mean_hurst, row.hurst);
        assert_eq!(summary.mean_apen, row.apen);
        assert_eq!(summary.mean_hit_rate, row.hit_rate);
    }

    #[test]
    fn persistent_market_recovers_h_and_beats_coin_flips() {
        let mut mean_hs = Vec::new();
        let mut mean_nns = Vec::new();
        for seed in 0..10 {
            let spec = FgnSpec::with_scale(0.7, 3780, 100 + seed, 0.01).unwrap();
            let series = gen_fgn(&spec).unwrap();
            let summary = run_market_returns(
                &series,
                &WindowPlan::default(),
                &DfaConfig::default(),
                &ApEnConfig::default(),
                &EmbeddingConfig::default(),
            )
            .unwrap();
            assert_eq!(summary.per_subperiod.len(), 10);
            mean_hs.push(summary.mean_hurst);
            mean_nns.push(summary.mean_hit_rate);
        }
        let h = crate::stats::mean(&mean_hs);
        let nn = crate::stats::mean(&mean_nns);
        assert!((h - 0.7).abs() < 0.03, "mean H {h}");
        assert!(nn > 0.5, "mean hit-rate {nn}");
    }

    #[test]
    fn surrogate_market_is_memoryless_and_unpredictable() {
        let mut mean_hs = Vec::new();
        let mut mean_nns = Vec::new();
        for seed in 0..5 {
            let spec = FgnSpec::with_scale(0.7, 3780, 200 + seed, 0.01).unwrap();
            let source = gen_fgn(&spec).unwrap();
            let surrogate = moment_match(&source, 300 + seed).unwrap();
            let summary = run_market_returns(
                &surrogate,
                &WindowPlan::default(),
                &DfaConfig::default(),
                &ApEnConfig::default(),
                &EmbeddingConfig::default(),
            )
            .unwrap();
            mean_hs.push(summary.mean_hurst);
            mean_nns.push(summary.mean_hit_rate);
        }
        let h = crate::stats::mean(&mean_hs);
        let nn = crate::stats::mean(&mean_nns);
        assert!((h - 0.5).abs() < 0.03, "mean H {h}");
        assert!((nn - 0.5).abs() < 0.02, "mean hit-rate {nn}");
    }

    #[test]
    fn averages_recompute_from_rows() {
        let spec = FgnSpec::with_scale(0.55, 1260, 9, 0.01).unwrap();
        let series = gen_fgn(&spec).unwrap();
        let summary = run_market_returns(
            &series,
            &plan_small(),
            &dfa_small(),
            &ApEnConfig::default(),
            &EmbeddingConfig::default(),
        )
        .unwrap();
        let n = summary.per_subperiod.len() as f64;
        let h: f64 = summary.per_subperiod.iter().map(|r| r.hurst).sum::<f64>() / n;
        let a: f64 = summary.per_subperiod.iter().map(|r| r.apen).sum::<f64>() / n;
        let nn: f64 = summary.per_subperiod.iter().map(|r| r.hit_rate).sum::<f64>() / n;
        assert!((h - summary.mean_hurst).abs() < 1e-12);
        assert!((a - summary.mean_apen).abs() < 1e-12);
        assert!((nn - summary.mean_hit_rate).abs() < 1e-12);
    }

    #[test]
    fn first_last_matches_endpoint_windows() {
        let spec = FgnSpec::with_scale(0.6, 1260, 13, 0.01).unwrap();
        let series = gen_fgn(&spec).unwrap();
        let plan = plan_small();
        let dfa = dfa_small();
        let apen = ApEnConfig::default();
        let summary = run_market_returns(
            &series,
            &plan,
            &dfa,
            &apen,
            &EmbeddingConfig::default(),
        )
        .unwrap();
        let fl = summary.first_last.as_ref().unwrap();
        let first_row = &summary.per_subperiod[0];
        assert_eq!(fl.first_hurst, first_row.hurst);
        assert_eq!(fl.first_apen, first_row.apen);

        let (_, range) = final_estimation_window(series.len(), &plan).unwrap().unwrap();
        let window = &series.values()[range];
        let h = estimate_hurst(window, &dfa)
            .unwrap()
            .into_estimate()
            .unwrap()
            .hurst;
        let a = compute_apen(window, &apen).unwrap().value;
        assert_eq!(fl.last_hurst, h);
        assert_eq!(fl.last_apen, a);
    }

    #[test]
    fn estimation_window_must_hold_four_max_scales() {
        let spec = FgnSpec::with_scale(0.6, 1260, 2, 0.01).unwrap();
        let series = gen_fgn(&spec).unwrap();
        let err = run_market_returns(
            &series,
            &plan_small(), // 504-day estimation window
            &DfaConfig::default(), // max scale 256 needs 1024
            &ApEnConfig::default(),
            &EmbeddingConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            PipelineError::ScaleExceedsWindow {
                estimation: 504,
                max_scale: 256
            }
        ));
    }

    #[test]
    fn degenerate_subperiod_is_excluded_and_recorded() {
        // first estimation window is constant, later windows see real noise
        let spec = FgnSpec::with_scale(0.6, 1260, 8, 0.01).unwrap();
        let noise = gen_fgn(&spec).unwrap();
        let mut values = noise.values().to_vec();
        for v in values.iter_mut().take(504) {
            *v = 0.001;
        }
        let series =
            ReturnSeries::from_parts("mixed", noise.dates().to_vec(), values).unwrap();
        let summary = run_market_returns(
            &series,
            &plan_small(),
            &dfa_small(),
            &ApEnConfig::default(),
            &EmbeddingConfig::default(),
        )
        .unwrap();
        assert_eq!(summary.excluded, vec![1]);
        assert!(summary.per_subperiod.iter().all(|r| r.t != 1));
        assert!(!summary.per_subperiod.is_empty());
    }

    #[test]
    fn constant_market_degenerates_everywhere() {
        let dates = weekday_dates(NaiveDate::from_ymd_opt(1992, 1, 6).unwrap(), 700);
        let series = ReturnSeries::from_parts("flat", dates, vec![0.001; 700]).unwrap();
        let err = run_market_returns(
            &series,
            &plan_small(),
            &dfa_small(),
            &ApEnConfig::default(),
            &EmbeddingConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, PipelineError::AllWindowsDegenerate { .. }));
    }

    #[test]
    fn report_is_order_independent() {
        let mut summaries = Vec::new();
        for seed in 0..5 {
            let spec =
                FgnSpec::with_scale(0.45 + 0.05 * seed as f64, 1260, 400 + seed as u64, 0.01)
                    .unwrap();
            let series = gen_fgn(&spec).unwrap();
            summaries.push(
                run_market_returns(
                    &series,
                    &plan_small(),
                    &dfa_small(),
                    &ApEnConfig::default(),
                    &EmbeddingConfig::default(),
                )
                .unwrap(),
            );
        }
        let base = cross_market_correlations(&summaries).unwrap();
        summaries.reverse();
        let flipped = cross_market_correlations(&summaries).unwrap();
        assert_eq!(base, flipped);
        summaries.swap(0, 2);
        assert_eq!(base, cross_market_correlations(&summaries).unwrap());
    }

    #[test]
    fn minimal_panel_of_three_reports() {
        let mut summaries = Vec::new();
        for seed in 0..3 {
            let spec =
                FgnSpec::with_scale(0.5 + 0.1 * seed as f64, 630, 500 + seed as u64, 0.01).unwrap();
            let series = gen_fgn(&spec).unwrap();
            summaries.push(
                run_market_returns(
                    &series,
                    &plan_small(),
                    &dfa_small(),
                    &ApEnConfig::default(),
                    &EmbeddingConfig::default(),
                )
                .unwrap(),
            );
        }
        let report = cross_market_correlations(&summaries).unwrap();
        assert_eq!(report.n_markets, 3);
        assert!(report.rho_h_a.abs() <= 1.0);
    }

    #[test]
    fn panel_preserves_market_order() {
        let mut markets = Vec::new();
        for seed in 0..4 {
            let spec = FgnSpec::with_scale(0.6, 630, 600 + seed, 0.01).unwrap();
            markets.push(gen_fgn(&spec).unwrap());
        }
        let summaries = run_panel_returns(
            &markets,
            &plan_small(),
            &dfa_small(),
            &ApEnConfig::default(),
            &EmbeddingConfig::default(),
        )
        .unwrap();
        for (m, s) in markets.iter().zip(&summaries) {
            assert_eq!(m.market_id(), s.market_id);
        }
    }
}
