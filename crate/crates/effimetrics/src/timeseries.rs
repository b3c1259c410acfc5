//! Price and return series plus the rolling-window calendar shared by every
//! estimator.
//!
//! All types are immutable after construction and all operations are pure,
//! so values can be shared freely across worker threads.

use std::ops::Range;

use chrono::{Datelike, Days, NaiveDate, Weekday};
use thiserror::Error;

/// Trading days per calendar year used when plans are given in years.
pub const TRADING_DAYS_PER_YEAR: usize = 252;

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("price series needs at least 2 observations, got {0}")]
    TooShort(usize),
    #[error("non-positive price {price} on {date}")]
    NonPositivePrice { date: NaiveDate, price: f64 },
    #[error("dates not strictly increasing at {date}")]
    NonMonotoneDate { date: NaiveDate },
    #[error("{dates} dates but {values} values")]
    LengthMismatch { dates: usize, values: usize },
    #[error("non-finite value at {date}")]
    NonFinite { date: NaiveDate },
    #[error("return series must not be empty")]
    Empty,
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("window lengths must be positive")]
    ZeroLength,
    #[error("prediction_len {prediction} exceeds shift_len {shift}; use allow_overlap to permit this")]
    PredictionExceedsShift { prediction: usize, shift: usize },
    #[error("series of {got} observations is too short; need at least {required}")]
    SeriesTooShort { required: usize, got: usize },
}

/// Dated daily closing prices for one market.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    market_id: String,
    dates: Vec<NaiveDate>,
    prices: Vec<f64>,
}

impl PriceSeries {
    /// Builds a validated series: strictly increasing dates, positive finite
    /// prices, at least two observations.
    pub fn new(
        market_id: impl Into<String>,
        dates: Vec<NaiveDate>,
        prices: Vec<f64>,
    ) -> Result<Self, SeriesError> {
        if dates.len() != prices.len() {
            return Err(SeriesError::LengthMismatch {
                dates: dates.len(),
                values: prices.len(),
            });
        }
        if prices.len() < 2 {
            return Err(SeriesError::TooShort(prices.len()));
        }
        for (&date, &price) in dates.iter().zip(&prices) {
            if !price.is_finite() {
                return Err(SeriesError::NonFinite { date });
            }
            if price <= 0.0 {
                return Err(SeriesError::NonPositivePrice { date, price });
            }
        }
        for pair in dates.windows(2) {
            if pair[1] <= pair[0] {
                return Err(SeriesError::NonMonotoneDate { date: pair[1] });
            }
        }
        Ok(Self {
            market_id: market_id.into(),
            dates,
            prices,
        })
    }

    pub fn market_id(&self) -> &str {
        &self.market_id
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }
}

/// Daily log returns of one market: value at `t` is `ln P(t) - ln P(t-1)`,
/// dated by the later observation.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    market_id: String,
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl ReturnSeries {
    /// Assembles a return series directly (synthetic generators, tests).
    pub fn from_parts(
        market_id: impl Into<String>,
        dates: Vec<NaiveDate>,
        values: Vec<f64>,
    ) -> Result<Self, SeriesError> {
        if dates.len() != values.len() {
            return Err(SeriesError::LengthMismatch {
                dates: dates.len(),
                values: values.len(),
            });
        }
        if values.is_empty() {
            return Err(SeriesError::Empty);
        }
        for (&date, &value) in dates.iter().zip(&values) {
            if !value.is_finite() {
                return Err(SeriesError::NonFinite { date });
            }
        }
        for pair in dates.windows(2) {
            if pair[1] <= pair[0] {
                return Err(SeriesError::NonMonotoneDate { date: pair[1] });
            }
        }
        Ok(Self {
            market_id: market_id.into(),
            dates,
            values,
        })
    }

    pub fn market_id(&self) -> &str {
        &self.market_id
    }

    pub fn with_market_id(mut self, market_id: impl Into<String>) -> Self {
        self.market_id = market_id.into();
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Log returns of a price series. Output length is one less than the input;
/// positivity of prices is guaranteed by [`PriceSeries`] construction.
pub fn log_returns(prices: &PriceSeries) -> ReturnSeries {
    let p = prices.prices();
    let values: Vec<f64> = p.windows(2).map(|w| w[1].ln() - w[0].ln()).collect();
    let dates = prices.dates()[1..].to_vec();
    ReturnSeries {
        market_id: prices.market_id().to_string(),
        dates,
        values,
    }
}

/// Rebuilds a price path from returns: `P(0) = initial_price`,
/// `P(t) = P(t-1) * exp(r_t)`. The initial price is dated one weekday before
/// the first return.
pub fn price_series_from_returns(
    returns: &ReturnSeries,
    initial_price: f64,
) -> Result<PriceSeries, SeriesError> {
    let first = returns.dates()[0];
    let mut dates = Vec::with_capacity(returns.len() + 1);
    dates.push(previous_weekday(first));
    dates.extend_from_slice(returns.dates());
    let mut prices = Vec::with_capacity(returns.len() + 1);
    let mut p = initial_price;
    prices.push(p);
    for &r in returns.values() {
        p *= r.exp();
        prices.push(p);
    }
    PriceSeries::new(returns.market_id(), dates, prices)
}

/// Consecutive weekday dates starting at `start` (itself shifted to the next
/// weekday if it falls on a weekend). Used by the synthetic generators.
pub fn weekday_dates(start: NaiveDate, n: usize) -> Vec<NaiveDate> {
    let mut out = Vec::with_capacity(n);
    let mut d = start;
    while is_weekend(d) {
        d = d + Days::new(1);
    }
    for _ in 0..n {
        out.push(d);
        d = d + Days::new(1);
        while is_weekend(d) {
            d = d + Days::new(1);
        }
    }
    out
}

fn is_weekend(d: NaiveDate) -> bool {
    matches!(d.weekday(), Weekday::Sat | Weekday::Sun)
}

fn previous_weekday(d: NaiveDate) -> NaiveDate {
    let mut p = d - Days::new(1);
    while is_weekend(p) {
        p = p - Days::new(1);
    }
    p
}

/// Rolling calendar: estimation window width, shift between consecutive
/// sub-periods, and out-of-sample prediction width, all in trading days.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowPlan {
    estimation_len: usize,
    shift_len: usize,
    prediction_len: usize,
    allow_overlap: bool,
}

impl WindowPlan {
    pub fn new(
        estimation_len: usize,
        shift_len: usize,
        prediction_len: usize,
    ) -> Result<Self, PlanError> {
        if estimation_len == 0 || shift_len == 0 || prediction_len == 0 {
            return Err(PlanError::ZeroLength);
        }
        if prediction_len > shift_len {
            return Err(PlanError::PredictionExceedsShift {
                prediction: prediction_len,
                shift: shift_len,
            });
        }
        Ok(Self {
            estimation_len,
            shift_len,
            prediction_len,
            allow_overlap: false,
        })
    }

    /// Permits `prediction_len > shift_len`, i.e. prediction ranges that
    /// overlap the next sub-period's estimation span.
    pub fn new_overlapping(
        estimation_len: usize,
        shift_len: usize,
        prediction_len: usize,
    ) -> Result<Self, PlanError> {
        if estimation_len == 0 || shift_len == 0 || prediction_len == 0 {
            return Err(PlanError::ZeroLength);
        }
        Ok(Self {
            estimation_len,
            shift_len,
            prediction_len,
            allow_overlap: true,
        })
    }

    /// Plan expressed in 252-trading-day years.
    pub fn from_years(
        estimation_years: usize,
        shift_years: usize,
        prediction_years: usize,
    ) -> Result<Self, PlanError> {
        Self::new(
            estimation_years * TRADING_DAYS_PER_YEAR,
            shift_years * TRADING_DAYS_PER_YEAR,
            prediction_years * TRADING_DAYS_PER_YEAR,
        )
    }

    pub fn estimation_len(&self) -> usize {
        self.estimation_len
    }

    pub fn shift_len(&self) -> usize {
        self.shift_len
    }

    pub fn prediction_len(&self) -> usize {
        self.prediction_len
    }

    fn min_obs(&self) -> usize {
        self.estimation_len + self.prediction_len
    }
}

impl Default for WindowPlan {
    /// Five-year estimation window shifted one year with a one-year
    /// prediction period.
    fn default() -> Self {
        Self::from_years(5, 1, 1).expect("static plan is valid")
    }
}

/// One estimation/prediction window pair. `index` is the 1-based sub-period
/// number `t`; ranges are half-open index intervals into a return series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubPeriod {
    pub index: usize,
    pub estimation: Range<usize>,
    pub prediction: Range<usize>,
}

/// Lays sub-periods over a series of `n_obs` returns: estimation windows of
/// `estimation_len` anchored at the series start, advanced by `shift_len`,
/// each followed immediately by a `prediction_len` out-of-sample range.
/// Trailing observations that cannot support a full prediction range are
/// dropped.
pub fn build_window_plan(n_obs: usize, plan: &WindowPlan) -> Result<Vec<SubPeriod>, PlanError> {
    if n_obs < plan.min_obs() {
        return Err(PlanError::SeriesTooShort {
            required: plan.min_obs(),
            got: n_obs,
        });
    }
    let count = (n_obs - plan.min_obs()) / plan.shift_len + 1;
    let mut out = Vec::with_capacity(count);
    for t in 1..=count {
        let start = (t - 1) * plan.shift_len;
        let est_end = start + plan.estimation_len;
        out.push(SubPeriod {
            index: t,
            estimation: start..est_end,
            prediction: est_end..est_end + plan.prediction_len,
        });
    }
    Ok(out)
}

/// The estimation-only window one shift past the last sub-period (the
/// `t = T` endpoint used for past-vs-present comparisons). Returns its
/// 1-based index and estimation range, or `None` when the data cannot hold
/// a further full estimation window.
pub fn final_estimation_window(
    n_obs: usize,
    plan: &WindowPlan,
) -> Result<Option<(usize, Range<usize>)>, PlanError> {
    let subs = build_window_plan(n_obs, plan)?;
    let t = subs.len() + 1;
    let start = (t - 1) * plan.shift_len;
    if start + plan.estimation_len <= n_obs {
        Ok(Some((t, start..start + plan.estimation_len)))
    } else {
        Ok(None)
    }
}
