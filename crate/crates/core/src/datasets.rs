//! Datasets shipped under `data/`, embedded at compile time.

use crate::catalog::{AqiCalendar, Catalog, RateTable};
use crate::error::{Error, Result};
use crate::ingest::{parse_aqi, parse_catalog, parse_rates, ParseReport};

pub const TABLE5_CATALOG_CSV: &str = include_str!("../../../data/table5_catalog.csv");
pub const TABLE5_PRINTED_CSV: &str = include_str!("../../../data/table5_printed.csv");
pub const RATES_CSV: &str = include_str!("../../../data/rates.csv");
pub const AQI_IMPLIED_CSV: &str = include_str!("../../../data/aqi_implied_counties.csv");

pub const CATALOG_FILE: &str = "table5_catalog.csv";
pub const RATES_FILE: &str = "rates.csv";
pub const AQI_FILE: &str = "aqi_implied_counties.csv";

/// Region whose rate the shipped catalog's printed PCY values assume.
pub const REFERENCE_REGION: &str = "CA";

fn clean<T>(name: &str, parsed: (T, ParseReport)) -> Result<T> {
    let (value, report) = parsed;
    match report.rejected.first() {
        None => Ok(value),
        Some(r) => Err(Error::Parse(format!(
            "shipped {name} has {} rejected row(s); first at line {} ({}): {}",
            report.rejected.len(),
            r.row_number,
            r.column,
            r.message
        ))),
    }
}

pub fn shipped_catalog() -> Result<Catalog> {
    clean(CATALOG_FILE, parse_catalog(TABLE5_CATALOG_CSV)?)
}

pub fn shipped_rates() -> Result<RateTable> {
    clean(RATES_FILE, parse_rates(RATES_CSV)?)
}

pub fn shipped_calendars() -> Result<Vec<AqiCalendar>> {
    clean(AQI_FILE, parse_aqi(AQI_IMPLIED_CSV)?)
}
