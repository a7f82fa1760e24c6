//! Request and response bodies.

use pcy_core::analytics::OrientedFit;
use pcy_core::catalog::{
    AqiCalendar, CostModelParams, FilterPlan, InitialCostMode, PurifierSpec, RateTable,
};
use pcy_core::cost_engine::{operating_days, CostContext, CostShares, PcyResult, DAYS_PER_YEAR};
use pcy_core::money::format_usd;
use serde::{Deserialize, Serialize};

use crate::error::{ApiError, FieldError};

/// Scenario parameters shared by `/api/rank` and `/api/pcy`.
///
/// Exactly one of `region`/`rate_usd_per_kwh` and exactly one of
/// `days`/`calendar` must be present.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WhatIfRequest {
    #[serde(default)]
    pub region: Option<String>,
    #[serde(default, alias = "rate")]
    pub rate_usd_per_kwh: Option<f64>,
    #[serde(default, alias = "t_operate_days")]
    pub days: Option<f64>,
    #[serde(default)]
    pub calendar: Option<CalendarRef>,
    #[serde(default)]
    pub home_area_sqft: Option<f64>,
    #[serde(default)]
    pub mode: Option<InitialCostMode>,
    /// Restricts `/api/rank` to these units (id, "Brand Model" or position).
    #[serde(default)]
    pub unit_ids: Option<Vec<String>>,
    /// For `/api/pcy`: the unit to price, as a catalog key.
    #[serde(default)]
    pub unit_id: Option<String>,
    /// A unit that is not in the catalog. `/api/pcy` prices it; `/api/rank`
    /// ranks it alongside the catalog.
    #[serde(default)]
    pub spec: Option<PurifierSpec>,
}

/// A calendar is either the region name of a loaded calendar or inline data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CalendarRef {
    Named(String),
    Inline(AqiCalendar),
}

/// What a request resolved to, echoed back in every response.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assumptions {
    pub mode: InitialCostMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
    pub rate_usd_per_kwh: f64,
    pub t_operate_days: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calendar_region: Option<String>,
    pub home_area_sqft: f64,
    pub lifetime_years: u32,
    pub hours_per_day: f64,
    pub coverage_factor: f64,
    pub aqi_orange_threshold: u32,
    pub medical_cost_threshold_usd: String,
}

pub struct Resolved {
    pub ctx: CostContext,
    pub assumptions: Assumptions,
}

fn finite_positive(v: f64) -> bool {
    v.is_finite() && v > 0.0
}

impl WhatIfRequest {
    /// Checks the field invariants and resolves region and calendar names.
    pub fn resolve(&self, rates: &RateTable, calendars: &[AqiCalendar]) -> Result<Resolved, ApiError> {
        let mut fields = Vec::new();
        let params = CostModelParams::default();

        match (&self.region, self.rate_usd_per_kwh) {
            (Some(_), Some(_)) => fields.push(FieldError::new("region", "give either region or rate_usd_per_kwh, not both")),
            (None, None) => fields.push(FieldError::new("region", "one of region or rate_usd_per_kwh is required")),
            (None, Some(rate)) if !(finite_positive(rate) && rate < pcy_core::catalog::MAX_RATE_USD_PER_KWH) => {
                fields.push(FieldError::new("rate_usd_per_kwh", format!("must be in (0, 10) $/kWh, got {rate}")))
            }
            _ => {}
        }
        match (self.days, &self.calendar) {
            (Some(_), Some(_)) => fields.push(FieldError::new("days", "give either days or calendar, not both")),
            (None, None) => fields.push(FieldError::new("days", "one of days or calendar is required")),
            (Some(d), None) if !(d.is_finite() && (0.0..=DAYS_PER_YEAR).contains(&d)) => {
                fields.push(FieldError::new("days", format!("must be in [0, 365], got {d}")))
            }
            (None, Some(CalendarRef::Inline(cal))) => {
                if let Err(e) = cal.validate() {
                    fields.push(FieldError::new("calendar", e.to_string()));
                }
            }
            _ => {}
        }
        let home = self.home_area_sqft.unwrap_or(params.reference_area_sqft);
        if !finite_positive(home) {
            fields.push(FieldError::new("home_area_sqft", format!("must be > 0, got {home}")));
        }
        if let Some(spec) = &self.spec {
            if let Err(e) = spec.validate() {
                fields.push(FieldError::new("spec", e.to_string()));
            }
        }
        if !fields.is_empty() {
            return Err(ApiError::Invalid(fields));
        }

        let (region, rate) = match (&self.region, self.rate_usd_per_kwh) {
            (Some(name), _) => {
                let code = rates
                    .resolve(name)
                    .map_err(|_| ApiError::not_found("region", name.clone()))?
                    .to_string();
                let rate = rates.rate(&code).expect("resolved region has a rate");
                (Some(code), rate)
            }
            (None, rate) => (None, rate.expect("checked above")),
        };

        let params = params
            .with_mode(self.mode.unwrap_or_default())
            .with_reference_area(home);
        let (days, calendar_region) = match (&self.days, &self.calendar) {
            (Some(d), _) => (*d, None),
            (None, Some(CalendarRef::Named(name))) => {
                let cal = calendars
                    .iter()
                    .find(|c| c.region.eq_ignore_ascii_case(name.trim()))
                    .ok_or_else(|| ApiError::not_found("calendar", name.clone()))?;
                (capped_days(cal, &params), Some(cal.region.clone()))
            }
            (None, Some(CalendarRef::Inline(cal))) => (capped_days(cal, &params), Some(cal.region.clone())),
            (None, None) => unreachable!("checked above"),
        };

        let ctx = CostContext::new(rate, days, params).map_err(|e| ApiError::field("parameters", e.to_string()))?;
        Ok(Resolved {
            assumptions: Assumptions {
                mode: params.initial_cost_mode,
                region,
                rate_usd_per_kwh: rate,
                t_operate_days: days,
                calendar_region,
                home_area_sqft: home,
                lifetime_years: params.lifetime_years,
                hours_per_day: params.hours_per_day,
                coverage_factor: params.coverage_factor,
                aqi_orange_threshold: params.aqi_orange_threshold,
                medical_cost_threshold_usd: format_usd(params.medical_cost_threshold_usd),
            },
            ctx,
        })
    }
}

fn capped_days(cal: &AqiCalendar, params: &CostModelParams) -> f64 {
    f64::from(operating_days(cal, params.aqi_orange_threshold).min(DAYS_PER_YEAR as u32))
}

/// A [`PcyResult`] with money as two-decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcyView {
    pub total_usd_per_year: String,
    pub initial_component_usd: String,
    pub maintenance_usd_per_year: String,
    pub electricity_usd_per_year: String,
    pub optimal_coverage_sqft: f64,
    pub normalization_multiplier: f64,
}

impl From<&PcyResult> for PcyView {
    fn from(r: &PcyResult) -> Self {
        PcyView {
            total_usd_per_year: format_usd(r.total_usd_per_year),
            initial_component_usd: format_usd(r.initial_component_usd),
            maintenance_usd_per_year: format_usd(r.maintenance_usd_per_year),
            electricity_usd_per_year: format_usd(r.electricity_usd_per_year),
            optimal_coverage_sqft: r.optimal_coverage_sqft,
            normalization_multiplier: r.normalization_multiplier,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PricedUnit {
    pub id: String,
    pub brand: String,
    pub model: String,
    pub pcy: PcyView,
    /// `None` when every component is zero.
    pub shares: Option<CostShares>,
    pub below_medical_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitFailure {
    pub id: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankResponse {
    pub assumptions: Assumptions,
    pub results: Vec<PricedUnit>,
    pub errors: Vec<UnitFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PcyResponse {
    pub assumptions: Assumptions,
    pub result: PricedUnit,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub brand: String,
    pub model: String,
    pub name: String,
    pub initial_cost_usd: String,
    pub cadr_cfm: f64,
    pub rated_watts: f64,
    pub optimal_coverage_sqft: f64,
    pub annual_filter_cost_usd: String,
    pub filter_plan: FilterPlan,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_year: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogResponse {
    pub units: Vec<CatalogEntry>,
    /// Purchase price against optimal coverage, both regression directions.
    pub coverage_price_fits: Option<[OrientedFit; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateEntry {
    pub region: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub usd_per_kwh: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatesResponse {
    pub rates: Vec<RateEntry>,
}
