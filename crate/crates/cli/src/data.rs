use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use pcy_core::catalog::{AqiCalendar, Catalog, RateTable};
use pcy_core::datasets::{self, AQI_FILE, CATALOG_FILE, RATES_FILE};
use pcy_core::ingest::{parse_aqi, parse_catalog, parse_rates, ParseReport};

/// Everything a command can read, plus the warnings produced while loading.
pub struct Data {
    pub catalog: Catalog,
    pub rates: RateTable,
    pub calendars: Vec<AqiCalendar>,
    pub warnings: Vec<String>,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

fn note(warnings: &mut Vec<String>, path: &str, report: &ParseReport) {
    for r in &report.rejected {
        warnings.push(format!("{path}:{}: rejected ({}): {}", r.row_number, r.column, r.message));
    }
}

pub fn load_rates(path: &Path, warnings: &mut Vec<String>) -> Result<RateTable> {
    let (rates, report) = parse_rates(read(path)?).with_context(|| path.display().to_string())?;
    note(warnings, &path.display().to_string(), &report);
    Ok(rates)
}

pub fn load_calendars(path: &Path, warnings: &mut Vec<String>) -> Result<Vec<AqiCalendar>> {
    let (cals, report) = parse_aqi(read(path)?).with_context(|| path.display().to_string())?;
    note(warnings, &path.display().to_string(), &report);
    Ok(cals)
}

impl Data {
    /// Loads from `dir`, or from the embedded datasets when `dir` is `None`.
    /// The AQI file is optional in a data directory.
    pub fn load(dir: Option<&PathBuf>) -> Result<Data> {
        let Some(dir) = dir else {
            return Ok(Data {
                catalog: datasets::shipped_catalog()?,
                rates: datasets::shipped_rates()?,
                calendars: datasets::shipped_calendars()?,
                warnings: Vec::new(),
            });
        };
        if !dir.is_dir() {
            bail!("data directory {} does not exist", dir.display());
        }
        let mut warnings = Vec::new();
        let path = dir.join(CATALOG_FILE);
        let (catalog, report) = parse_catalog(read(&path)?).with_context(|| path.display().to_string())?;
        note(&mut warnings, &path.display().to_string(), &report);
        let rates = load_rates(&dir.join(RATES_FILE), &mut warnings)?;
        let aqi = dir.join(AQI_FILE);
        let calendars = if aqi.exists() { load_calendars(&aqi, &mut warnings)? } else { Vec::new() };
        Ok(Data {
            catalog,
            rates,
            calendars,
            warnings,
        })
    }
}
