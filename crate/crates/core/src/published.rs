//! Figures reported alongside the published purifier cost table, used as
//! reference points by the reproduction checks, and the tolerances each
//! check is held to.

/// Median PCY over the catalog, continuous use at the California rate.
pub const MEDIAN_PCY_USD: f64 = 1607.52;
/// Spread of PCY across the state rate table.
pub const US_RANGE_USD: f64 = 1002.12;
/// Average share of purchase price in annual cost of ownership.
pub const INITIAL_SHARE: f64 = 0.138;
/// Coefficients of variation of purchase price, annual filter spend and PCY.
pub const CV_INITIAL: f64 = 1.00;
pub const CV_MAINTENANCE: f64 = 0.74;
pub const CV_PCY: f64 = 1.06;
/// Price-vs-coverage trendline.
pub const TREND_SLOPE: f64 = 0.998;
pub const TREND_INTERCEPT: f64 = 13.4;
pub const TREND_R_SQUARED: f64 = 0.431;
/// AQI-gated schedule results for California counties.
pub const COUNTY_POOLED_MEDIAN_USD: f64 = 506.09;
pub const KINGS_MEAN_USD: f64 = 694.01;
pub const LOS_ANGELES_MEAN_USD: f64 = 347.01;
pub const LOS_ANGELES_MEDIAN_USD: f64 = 253.04;
/// Units below the medical-cost threshold in polluted counties, out of
/// [`THRESHOLD_CLAIM_TOTAL`].
pub const THRESHOLD_CLAIM_BELOW: usize = 47;
pub const THRESHOLD_CLAIM_TOTAL: usize = 52;
/// Unit counts quoted for the catalog: in the table title, in the printed
/// rows, and in the body text.
pub const UNIT_COUNTS_QUOTED: [usize; 3] = [52, 53, 54];
/// Units named as the best performers, by "Brand Model".
pub const BEST_PERFORMERS: [&str; 5] = [
    "Medify MA-112",
    "Blueair Pure 311 Auto",
    "Blueair Pure 211+ Auto",
    "Coway Airmega 250",
    "Coway Airmega AP-1216L",
];

pub mod tolerance {
    /// Per-row PCY, dollars.
    pub const ROW_USD: f64 = 0.01;
    pub const MEDIAN_USD: f64 = 25.0;
    /// Initial-cost share, as a fraction (0.5 percentage points).
    pub const INITIAL_SHARE: f64 = 0.005;
    pub const CV: f64 = 0.05;
    pub const TREND_SLOPE: f64 = 0.05;
    pub const TREND_INTERCEPT: f64 = 5.0;
    pub const TREND_R_SQUARED: f64 = 0.02;
    pub const US_RANGE_USD: f64 = 10.0;
    pub const IMPLIED_DAYS: f64 = 5.0;
}
