//! Purification Cost per Year (PCY).
//!
//! ```text
//! PCY = (C_initial / lifetime + C_maintenance/yr + C_elec/yr) × (reference_area / A_optimal)
//! C_maintenance/yr = T_operate × C_filter / T_replacement
//! C_elec/yr        = T_operate × (W / 1000) × C_local × 24
//! A_optimal        = CADR × 3/2
//! ```
//!
//! `A_optimal` takes the CADR figure (in CFM) and treats the product as square
//! feet, following the AHAM room-sizing rule of thumb. No unit conversion is
//! applied.

use serde::Serialize;

use crate::catalog::{
    check_rate, AqiCalendar, AqiData, CostModelParams, FilterPlan, InitialCostMode, PurifierSpec,
};
use crate::error::{Error, Result};

pub const DAYS_PER_YEAR: f64 = 365.0;

/// Scenario inputs for one PCY evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostContext {
    pub rate_usd_per_kwh: f64,
    pub t_operate_days: f64,
    pub params: CostModelParams,
}

impl CostContext {
    pub fn new(rate_usd_per_kwh: f64, t_operate_days: f64, params: CostModelParams) -> Result<Self> {
        let ctx = CostContext {
            rate_usd_per_kwh,
            t_operate_days,
            params,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Year-round operation.
    pub fn continuous(rate_usd_per_kwh: f64, params: CostModelParams) -> Result<Self> {
        Self::new(rate_usd_per_kwh, DAYS_PER_YEAR, params)
    }

    pub fn validate(&self) -> Result<()> {
        check_rate(self.rate_usd_per_kwh)?;
        if !(0.0..=DAYS_PER_YEAR).contains(&self.t_operate_days) {
            return Err(Error::domain(format!(
                "t_operate_days must be in 0..=365, got {}",
                self.t_operate_days
            )));
        }
        self.params.validate()
    }

    pub fn with_days(mut self, t_operate_days: f64) -> Result<Self> {
        self.t_operate_days = t_operate_days;
        self.validate()?;
        Ok(self)
    }

    pub fn with_rate(mut self, rate_usd_per_kwh: f64) -> Result<Self> {
        self.rate_usd_per_kwh = rate_usd_per_kwh;
        self.validate()?;
        Ok(self)
    }

    pub fn mode(&self) -> InitialCostMode {
        self.params.initial_cost_mode
    }
}

/// PCY and its components, all in dollars per year before normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PcyResult {
    pub total_usd_per_year: f64,
    /// `C_initial / lifetime`, or 0 in [`InitialCostMode::Table5Compat`].
    pub initial_component_usd: f64,
    pub maintenance_usd_per_year: f64,
    pub electricity_usd_per_year: f64,
    pub optimal_coverage_sqft: f64,
    /// `reference_area / A_optimal`: how many units a reference home needs.
    pub normalization_multiplier: f64,
}

/// Fractions of the three-component annual cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostShares {
    pub initial: f64,
    pub maintenance: f64,
    pub electricity: f64,
}

pub fn optimal_coverage(cadr_cfm: f64, params: &CostModelParams) -> Result<f64> {
    if !(cadr_cfm > 0.0 && cadr_cfm.is_finite()) {
        return Err(Error::domain(format!("CADR must be > 0, got {cadr_cfm}")));
    }
    Ok(cadr_cfm * params.coverage_factor)
}

/// Smallest CADR AHAM recommends for a room: ⅔ of its floor area.
pub fn min_cadr_for_room(room_area_sqft: f64, params: &CostModelParams) -> Result<f64> {
    if !(room_area_sqft > 0.0 && room_area_sqft.is_finite()) {
        return Err(Error::domain(format!(
            "room area must be > 0, got {room_area_sqft}"
        )));
    }
    Ok(room_area_sqft / params.coverage_factor)
}

pub fn electricity_cost_per_year(ctx: &CostContext, watts: f64) -> Result<f64> {
    if !(watts > 0.0 && watts.is_finite()) {
        return Err(Error::domain(format!("rated watts must be > 0, got {watts}")));
    }
    Ok(ctx.t_operate_days * (watts / 1000.0) * ctx.rate_usd_per_kwh * ctx.params.hours_per_day)
}

/// Annualized plans are prorated linearly by operating days.
pub fn maintenance_cost_per_year(ctx: &CostContext, plan: &FilterPlan) -> Result<f64> {
    plan.validate()?;
    Ok(match *plan {
        FilterPlan::Periodic {
            filter_price_usd,
            replacement_interval_days,
        } => ctx.t_operate_days * filter_price_usd / replacement_interval_days,
        FilterPlan::Annualized { usd_per_365_days } => {
            usd_per_365_days * (ctx.t_operate_days / DAYS_PER_YEAR)
        }
    })
}

pub fn pcy(spec: &PurifierSpec, ctx: &CostContext) -> Result<PcyResult> {
    spec.validate()?;
    ctx.validate()?;
    let params = &ctx.params;

    let coverage = optimal_coverage(spec.cadr_cfm, params)?;
    let multiplier = params.reference_area_sqft / coverage;
    let initial = match params.initial_cost_mode {
        InitialCostMode::SpecFormula => spec.initial_cost_usd / f64::from(params.lifetime_years),
        InitialCostMode::Table5Compat => 0.0,
    };
    let maintenance = maintenance_cost_per_year(ctx, &spec.filter_plan)?;
    let electricity = electricity_cost_per_year(ctx, spec.rated_watts)?;

    Ok(PcyResult {
        total_usd_per_year: (initial + maintenance + electricity) * multiplier,
        initial_component_usd: initial,
        maintenance_usd_per_year: maintenance,
        electricity_usd_per_year: electricity,
        optimal_coverage_sqft: coverage,
        normalization_multiplier: multiplier,
    })
}

/// Component shares of annual cost. The initial share always uses
/// `C_initial / lifetime`, whatever mode produced `result`, so the shares
/// describe the full cost of ownership.
pub fn pcy_breakdown(result: &PcyResult, spec: &PurifierSpec, ctx: &CostContext) -> Result<CostShares> {
    let initial = spec.initial_cost_usd / f64::from(ctx.params.lifetime_years);
    let maintenance = result.maintenance_usd_per_year;
    let electricity = result.electricity_usd_per_year;
    let sum = initial + maintenance + electricity;
    if sum.is_nan() || sum <= 0.0 {
        return Err(Error::domain(format!(
            "{}: all cost components are zero, shares are undefined",
            spec.id
        )));
    }
    Ok(CostShares {
        initial: initial / sum,
        maintenance: maintenance / sum,
        electricity: electricity / sum,
    })
}

/// Days the purifier runs under an AQI-gated schedule: days with AQI strictly
/// above `threshold`. Exceedance-count calendars return their stored count.
pub fn operating_days(cal: &AqiCalendar, threshold: u32) -> u32 {
    match &cal.data {
        AqiData::DailySeries { values } => values.iter().filter(|d| d.aqi > threshold).count() as u32,
        AqiData::ExceedanceCount {
            days_over_threshold,
        } => u32::from(*days_over_threshold),
    }
}
