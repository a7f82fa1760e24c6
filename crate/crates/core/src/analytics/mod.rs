//! Statistics, rankings and scenario sweeps over a catalog.

mod ranking;
mod scenarios;
mod stats;

use serde::Serialize;

pub use ranking::{
    evaluate_units, rank_by_pcy, sort_ranking, threshold_report, RankedUnit, Ranking,
    ThresholdReport, UnitError,
};
pub use scenarios::{
    county_scenario, implied_operating_days, state_sweep, CountyScenario, CountyStats,
    RegionStats, StateSweep,
};
pub use stats::{ols_fit, summarize, LinearFit, SummaryStats};

use crate::catalog::{Catalog, CostModelParams};
use crate::cost_engine::{optimal_coverage, pcy, pcy_breakdown, CostContext};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FitOrientation {
    /// x = optimal coverage, y = purchase price.
    CoverageExplainsPrice,
    /// x = purchase price, y = optimal coverage.
    PriceExplainsCoverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrientedFit {
    pub orientation: FitOrientation,
    #[serde(flatten)]
    pub fit: LinearFit,
}

/// Regresses purchase price against optimal coverage in both directions.
pub fn coverage_price_fits(catalog: &Catalog, params: &CostModelParams) -> Result<[OrientedFit; 2]> {
    let coverage = catalog
        .units()
        .iter()
        .map(|u| optimal_coverage(u.cadr_cfm, params))
        .collect::<Result<Vec<_>>>()?;
    let price: Vec<f64> = catalog.units().iter().map(|u| u.initial_cost_usd).collect();
    Ok([
        OrientedFit {
            orientation: FitOrientation::CoverageExplainsPrice,
            fit: ols_fit(&coverage, &price)?,
        },
        OrientedFit {
            orientation: FitOrientation::PriceExplainsCoverage,
            fit: ols_fit(&price, &coverage)?,
        },
    ])
}

/// Share of purchase price in each unit's annual cost of ownership.
pub fn initial_cost_shares(catalog: &Catalog, ctx: &CostContext) -> Result<Vec<f64>> {
    catalog
        .units()
        .iter()
        .map(|u| {
            let r = pcy(u, ctx)?;
            Ok(pcy_breakdown(&r, u, ctx)?.initial)
        })
        .collect()
}

/// Total purchase spend over total annual-cost spend across the catalog,
/// i.e. the ratio of means rather than the mean of per-unit ratios.
pub fn aggregate_initial_share(catalog: &Catalog, ctx: &CostContext) -> Result<f64> {
    let lifetime = f64::from(ctx.params.lifetime_years);
    let (mut initial, mut total) = (0.0, 0.0);
    for u in catalog.units() {
        let r = pcy(u, ctx)?;
        let i = u.initial_cost_usd / lifetime;
        initial += i;
        total += i + r.maintenance_usd_per_year + r.electricity_usd_per_year;
    }
    Ok(initial / total)
}
