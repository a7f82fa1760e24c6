//! Domain types for purifiers, electricity rates, AQI calendars and the
//! model parameters. Everything here is immutable once constructed.

mod reference;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use reference::{
    classify_particle, lookup_hepa_efficiency, lookup_merv, HepaClass, MervRecord, Pollutant,
    ReferenceTables, HEPA_CLASSES, MERV_RATINGS, POLLUTANTS,
};

/// How replacement filters are paid for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FilterPlan {
    /// A filter costing `filter_price_usd` replaced every `replacement_interval_days`
    /// days of operation.
    Periodic {
        filter_price_usd: f64,
        replacement_interval_days: f64,
    },
    /// A flat filter spend per 365 days of operation.
    Annualized { usd_per_365_days: f64 },
}

impl FilterPlan {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FilterPlan::Periodic {
                filter_price_usd,
                replacement_interval_days,
            } => {
                if !(filter_price_usd >= 0.0 && filter_price_usd.is_finite()) {
                    return Err(Error::domain(format!(
                        "filter_price_usd must be >= 0, got {filter_price_usd}"
                    )));
                }
                if !(replacement_interval_days > 0.0 && replacement_interval_days.is_finite()) {
                    return Err(Error::domain(format!(
                        "replacement_interval_days must be > 0, got {replacement_interval_days}"
                    )));
                }
            }
            FilterPlan::Annualized { usd_per_365_days } => {
                if !(usd_per_365_days >= 0.0 && usd_per_365_days.is_finite()) {
                    return Err(Error::domain(format!(
                        "usd_per_365_days must be >= 0, got {usd_per_365_days}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One air purifier model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurifierSpec {
    pub id: String,
    pub brand: String,
    pub model: String,
    pub initial_cost_usd: f64,
    pub cadr_cfm: f64,
    pub rated_watts: f64,
    pub filter_plan: FilterPlan,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_year: Option<i32>,
}

impl PurifierSpec {
    /// "Brand Model", the name a unit is listed under.
    pub fn display_name(&self) -> String {
        format!("{} {}", self.brand, self.model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.trim().is_empty() {
            return Err(Error::domain("id must not be empty"));
        }
        if !(self.initial_cost_usd >= 0.0 && self.initial_cost_usd.is_finite()) {
            return Err(Error::domain(format!(
                "initial_cost_usd must be >= 0, got {}",
                self.initial_cost_usd
            )));
        }
        if !(self.cadr_cfm > 0.0 && self.cadr_cfm.is_finite()) {
            return Err(Error::domain(format!(
                "cadr_cfm must be > 0, got {}",
                self.cadr_cfm
            )));
        }
        if !(self.rated_watts > 0.0 && self.rated_watts.is_finite()) {
            return Err(Error::domain(format!(
                "rated_watts must be > 0, got {}",
                self.rated_watts
            )));
        }
        self.filter_plan.validate()
    }
}

/// A validated set of purifiers with unique ids.
///
/// `expected_pcy` holds the audit column of the shipped dataset. The cost
/// engine never reads it; only the reproduction checks do.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Catalog {
    units: Vec<PurifierSpec>,
    expected_pcy: BTreeMap<String, f64>,
}

impl Catalog {
    pub fn new(units: Vec<PurifierSpec>) -> Result<Self> {
        Self::with_audit(units, BTreeMap::new())
    }

    pub fn with_audit(units: Vec<PurifierSpec>, expected_pcy: BTreeMap<String, f64>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for unit in &units {
            unit.validate()
                .map_err(|e| Error::domain(format!("unit {}: {e}", unit.id)))?;
            if !seen.insert(unit.id.as_str()) {
                return Err(Error::domain(format!("duplicate unit id {}", unit.id)));
            }
        }
        if let Some(id) = expected_pcy.keys().find(|id| !seen.contains(id.as_str())) {
            return Err(Error::domain(format!("audit value for unknown unit {id}")));
        }
        Ok(Catalog {
            units,
            expected_pcy,
        })
    }

    pub fn units(&self) -> &[PurifierSpec] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Printed PCY for a unit, when the source file carried one.
    pub fn expected_pcy(&self, id: &str) -> Option<f64> {
        self.expected_pcy.get(id).copied()
    }

    pub fn expected_pcy_map(&self) -> &BTreeMap<String, f64> {
        &self.expected_pcy
    }

    /// Resolves a unit by id, by exact "Brand Model" name, or by 1-based
    /// position in file order.
    pub fn find(&self, key: &str) -> Result<&PurifierSpec> {
        let key = key.trim();
        if let Some(unit) = self.units.iter().find(|u| u.id == key) {
            return Ok(unit);
        }
        if let Some(unit) = self.units.iter().find(|u| u.display_name() == key) {
            return Ok(unit);
        }
        if let Ok(pos) = key.parse::<usize>() {
            if (1..=self.units.len()).contains(&pos) {
                return Ok(&self.units[pos - 1]);
            }
        }
        Err(Error::not_found("unit", key))
    }
}

/// Electricity price by region, in dollars per kWh.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RateTable {
    entries: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    names: BTreeMap<String, String>,
}

/// Upper sanity bound on a rate in $/kWh.
pub const MAX_RATE_USD_PER_KWH: f64 = 10.0;

pub(crate) fn check_rate(rate: f64) -> Result<()> {
    if rate > 0.0 && rate < MAX_RATE_USD_PER_KWH {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "rate must be in (0, {MAX_RATE_USD_PER_KWH}) $/kWh, got {rate}"
        )))
    }
}

impl RateTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a region. Fails on an out-of-bounds rate or a duplicate code.
    pub fn insert(&mut self, region: &str, name: Option<&str>, usd_per_kwh: f64) -> Result<()> {
        check_rate(usd_per_kwh)?;
        let region = region.trim();
        if region.is_empty() {
            return Err(Error::domain("region must not be empty"));
        }
        if self.entries.contains_key(region) {
            return Err(Error::domain(format!("duplicate region {region}")));
        }
        self.entries.insert(region.to_string(), usd_per_kwh);
        if let Some(name) = name.map(str::trim).filter(|n| !n.is_empty()) {
            self.names.insert(region.to_string(), name.to_string());
        }
        Ok(())
    }

    pub fn entries(&self) -> &BTreeMap<String, f64> {
        &self.entries
    }

    pub fn name(&self, region: &str) -> Option<&str> {
        self.names.get(region).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Region code for a code or display name, case-insensitive.
    pub fn resolve(&self, region: &str) -> Result<&str> {
        let wanted = region.trim();
        self.entries
            .keys()
            .find(|code| code.eq_ignore_ascii_case(wanted))
            .or_else(|| {
                self.names
                    .iter()
                    .find(|(_, name)| name.eq_ignore_ascii_case(wanted))
                    .map(|(code, _)| code)
            })
            .map(String::as_str)
            .ok_or_else(|| Error::not_found("region", wanted))
    }

    /// Rate for a region. Unknown regions are an error; there is no fallback.
    pub fn rate(&self, region: &str) -> Result<f64> {
        let code = self.resolve(region)?;
        Ok(self.entries[code])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DailyAqi {
    pub date: NaiveDate,
    pub aqi: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AqiData {
    DailySeries { values: Vec<DailyAqi> },
    ExceedanceCount { days_over_threshold: u16 },
}

/// Air quality for one region over a year.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AqiCalendar {
    pub region: String,
    #[serde(flatten)]
    pub data: AqiData,
}

impl AqiCalendar {
    pub fn daily(region: impl Into<String>, values: Vec<DailyAqi>) -> Result<Self> {
        let cal = AqiCalendar {
            region: region.into(),
            data: AqiData::DailySeries { values },
        };
        cal.validate()?;
        Ok(cal)
    }

    pub fn exceedance(region: impl Into<String>, days_over_threshold: u16) -> Result<Self> {
        let cal = AqiCalendar {
            region: region.into(),
            data: AqiData::ExceedanceCount {
                days_over_threshold,
            },
        };
        cal.validate()?;
        Ok(cal)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.data {
            AqiData::DailySeries { values } => {
                let mut dates = BTreeSet::new();
                for v in values {
                    if !dates.insert(v.date) {
                        return Err(Error::domain(format!(
                            "{}: duplicate date {}",
                            self.region, v.date
                        )));
                    }
                }
            }
            AqiData::ExceedanceCount {
                days_over_threshold,
            } => {
                if *days_over_threshold > 366 {
                    return Err(Error::domain(format!(
                        "{}: days_over_threshold must be <= 366, got {days_over_threshold}",
                        self.region
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Whether the purchase price enters PCY.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InitialCostMode {
    /// Purchase price spread over the unit lifetime is part of PCY.
    #[default]
    #[serde(rename = "spec")]
    SpecFormula,
    /// Purchase price is left out of PCY. This is how the published catalog
    /// values were computed.
    #[serde(rename = "table5")]
    Table5Compat,
}

impl InitialCostMode {
    pub fn as_str(self) -> &'static str {
        match self {
            InitialCostMode::SpecFormula => "spec",
            InitialCostMode::Table5Compat => "table5",
        }
    }
}

impl fmt::Display for InitialCostMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InitialCostMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spec" | "spec-formula" | "specformula" | "formula" => Ok(InitialCostMode::SpecFormula),
            "table5" | "table5-compat" | "table5compat" | "compat" => {
                Ok(InitialCostMode::Table5Compat)
            }
            other => Err(Error::domain(format!(
                "unknown mode {other:?}, expected \"spec\" or \"table5\""
            ))),
        }
    }
}

/// Fixed parameters of the cost model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModelParams {
    pub lifetime_years: u32,
    pub reference_area_sqft: f64,
    pub hours_per_day: f64,
    /// Coverage area per unit of CADR. AHAM sizes rooms at CADR ≥ ⅔ of the
    /// floor area, so the coverage of a unit is its CADR × 3/2.
    pub coverage_factor: f64,
    pub aqi_orange_threshold: u32,
    pub medical_cost_threshold_usd: f64,
    pub initial_cost_mode: InitialCostMode,
}

impl Default for CostModelParams {
    fn default() -> Self {
        CostModelParams {
            lifetime_years: 10,
            reference_area_sqft: 2500.0,
            hours_per_day: 24.0,
            coverage_factor: 1.5,
            aqi_orange_threshold: 100,
            medical_cost_threshold_usd: 1990.0,
            initial_cost_mode: InitialCostMode::SpecFormula,
        }
    }
}

impl CostModelParams {
    pub fn with_mode(mut self, mode: InitialCostMode) -> Self {
        self.initial_cost_mode = mode;
        self
    }

    pub fn with_reference_area(mut self, sqft: f64) -> Self {
        self.reference_area_sqft = sqft;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("reference_area_sqft", self.reference_area_sqft),
            ("hours_per_day", self.hours_per_day),
            ("coverage_factor", self.coverage_factor),
            ("medical_cost_threshold_usd", self.medical_cost_threshold_usd),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.lifetime_years == 0 {
            return Err(Error::domain("lifetime_years must be > 0"));
        }
        if self.hours_per_day > 24.0 {
            return Err(Error::domain(format!(
                "hours_per_day must be <= 24, got {}",
                self.hours_per_day
            )));
        }
        Ok(())
    }
}
