//! Weak-form market-efficiency measurement and direction forecasting for
//! daily price series.
//!
//! The crate quantifies how efficient a market is from its past price
//! changes and how predictable its next-day direction is:
//!
//! - [`dfa`] estimates the Hurst exponent of a return window by detrended
//!   fluctuation analysis (long-memory / persistence).
//! - [`apen`] computes approximate entropy of a return window (randomness).
//! - [`nn`] predicts next-day price-change direction by nearest-neighbor
//!   matching of delay-embedded return patterns, scored as an
//!   out-of-sample hit-rate.
//! - [`pipeline`] runs all three over a rolling window calendar per market
//!   and correlates the per-market averages across a panel.
//! - [`synthetic`] generates ground-truth series (exact fractional Gaussian
//!   noise with known Hurst exponent, moment-matched Gaussian surrogates)
//!   for calibration and control experiments.
//! - [`report`] is the CSV/JSON front door used by the `effimetrics` binary.
//!
//! Start with the runnable examples:
//!
//! ```bash
//! cargo run --release --example hurst_estimation
//! cargo run --release --example apen_regularity
//! cargo run --release --example nn_forecasting
//! cargo run --release --example synthetic_series
//! cargo run --release --example market_pipeline
//! cargo run --release --example csv_workflow
//! ```

pub mod apen;
pub mod dfa;
pub mod nn;
pub mod pipeline;
pub mod report;
pub mod synthetic;
pub mod timeseries;

mod stats;

pub use apen::{compute_apen, ApEnConfig, ApEnResult};
pub use dfa::{estimate_hurst, DfaConfig, DfaOutcome, DfaResult};
pub use nn::{walk_forward_hit_rate, Direction, EmbeddingConfig, HitRateResult};
pub use pipeline::{
    cross_market_correlations, run_market, CorrelationReport, MarketSummary,
};
pub use synthetic::{gen_fgn, gen_surrogate, moment_match, FgnSpec, SurrogateSpec};
pub use timeseries::{
    build_window_plan, log_returns, PriceSeries, ReturnSeries, SubPeriod, WindowPlan,
};
