//! Re-running the catalog under different rates and operating schedules.

use std::collections::BTreeMap;

use serde::Serialize;

use super::ranking::{evaluate_units, UnitError};
use super::stats::{summarize, SummaryStats};
use crate::catalog::{AqiCalendar, Catalog, RateTable};
use crate::cost_engine::{operating_days, CostContext, DAYS_PER_YEAR};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionStats {
    pub rate_usd_per_kwh: f64,
    pub stats: SummaryStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateSweep {
    pub per_region: BTreeMap<String, RegionStats>,
    /// Highest minus lowest per-region median PCY.
    pub median_range: f64,
    pub highest_rate_region: String,
    pub lowest_rate_region: String,
    /// Per unit: PCY at the highest rate minus PCY at the lowest rate.
    pub per_unit_range: SummaryStats,
    pub errors: Vec<UnitError>,
}

/// Recomputes PCY for every unit at every rate in `rates`, keeping the
/// operating days and parameters of `template`.
pub fn state_sweep(catalog: &Catalog, rates: &RateTable, template: &CostContext) -> Result<StateSweep> {
    if rates.is_empty() {
        return Err(Error::domain("rate table is empty"));
    }
    if catalog.is_empty() {
        return Err(Error::domain("catalog is empty"));
    }

    let mut per_region = BTreeMap::new();
    let mut totals_by_region: BTreeMap<&str, BTreeMap<String, f64>> = BTreeMap::new();
    let mut errors = Vec::new();
    for (region, rate) in rates.entries() {
        let ctx = template.with_rate(*rate)?;
        let evaluated = evaluate_units(catalog.units(), &ctx);
        errors.extend(evaluated.errors.into_iter().map(|e| UnitError {
            id: e.id,
            message: format!("{region}: {}", e.message),
        }));
        let totals: BTreeMap<String, f64> = evaluated
            .ranked
            .into_iter()
            .map(|r| (r.id, r.result.total_usd_per_year))
            .collect();
        if totals.is_empty() {
            continue;
        }
        let values: Vec<f64> = totals.values().copied().collect();
        per_region.insert(
            region.clone(),
            RegionStats {
                rate_usd_per_kwh: *rate,
                stats: summarize(&values)?,
            },
        );
        totals_by_region.insert(region.as_str(), totals);
    }
    if per_region.is_empty() {
        return Err(Error::domain("no unit could be evaluated at any rate"));
    }

    let medians = per_region.values().map(|r| r.stats.median);
    let median_range = medians.clone().fold(f64::NEG_INFINITY, f64::max)
        - medians.fold(f64::INFINITY, f64::min);

    // Ties on rate resolve to the first region code in sorted order.
    let by_rate = |pick_high: bool| {
        per_region
            .iter()
            .reduce(|best, cur| {
                let better = if pick_high {
                    cur.1.rate_usd_per_kwh > best.1.rate_usd_per_kwh
                } else {
                    cur.1.rate_usd_per_kwh < best.1.rate_usd_per_kwh
                };
                if better {
                    cur
                } else {
                    best
                }
            })
            .map(|(code, _)| code.clone())
            .expect("non-empty")
    };
    let high = by_rate(true);
    let low = by_rate(false);
    let spreads: Vec<f64> = totals_by_region[high.as_str()]
        .iter()
        .filter_map(|(id, hi)| totals_by_region[low.as_str()].get(id).map(|lo| hi - lo))
        .collect();

    errors.sort_by(|a, b| (&a.id, &a.message).cmp(&(&b.id, &b.message)));
    Ok(StateSweep {
        per_region,
        median_range,
        highest_rate_region: high,
        lowest_rate_region: low,
        per_unit_range: summarize(&spreads)?,
        errors,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountyStats {
    pub region: String,
    pub operating_days: u32,
    pub stats: SummaryStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountyScenario {
    pub counties: Vec<CountyStats>,
    /// Median over every (county, unit) pair.
    pub pooled_median: f64,
    pub errors: Vec<UnitError>,
}

/// Runs the catalog on AQI-gated schedules, one per calendar. Operating days
/// are the days above the template's orange-day threshold.
pub fn county_scenario(
    catalog: &Catalog,
    calendars: &[AqiCalendar],
    template: &CostContext,
) -> Result<CountyScenario> {
    if calendars.is_empty() {
        return Err(Error::domain("no AQI calendars supplied"));
    }
    if catalog.is_empty() {
        return Err(Error::domain("catalog is empty"));
    }
    let threshold = template.params.aqi_orange_threshold;
    let mut counties = Vec::new();
    let mut pooled = Vec::new();
    let mut errors = Vec::new();
    for cal in calendars {
        cal.validate()?;
        let days = operating_days(cal, threshold).min(DAYS_PER_YEAR as u32);
        let ctx = template.with_days(f64::from(days))?;
        let evaluated = evaluate_units(catalog.units(), &ctx);
        let totals = evaluated.totals();
        errors.extend(evaluated.errors.into_iter().map(|e| UnitError {
            id: e.id,
            message: format!("{}: {}", cal.region, e.message),
        }));
        if totals.is_empty() {
            continue;
        }
        pooled.extend_from_slice(&totals);
        counties.push(CountyStats {
            region: cal.region.clone(),
            operating_days: days,
            stats: summarize(&totals)?,
        });
    }
    if pooled.is_empty() {
        return Err(Error::domain("no unit could be evaluated for any county"));
    }
    Ok(CountyScenario {
        counties,
        pooled_median: summarize(&pooled)?.median,
        errors,
    })
}

/// Operating days implied by the ratio of a gated-schedule statistic to the
/// same statistic under continuous use. Only meaningful when PCY is
/// proportional to operating days (purchase price excluded).
pub fn implied_operating_days(gated_value: f64, continuous_value: f64) -> Result<f64> {
    if continuous_value.is_nan() || continuous_value <= 0.0 {
        return Err(Error::domain("continuous value must be > 0"));
    }
    Ok(DAYS_PER_YEAR * gated_value / continuous_value)
}
