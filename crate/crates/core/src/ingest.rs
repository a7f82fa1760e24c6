//! CSV loaders for catalogs, rate tables and AQI calendars.
//!
//! Files are UTF-8, comma separated, with a mandatory header row. A missing
//! or incomplete header is fatal. Any problem with a data row rejects that row
//! and is recorded in the [`ParseReport`]; the rest of the file still loads.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::NaiveDate;
use serde::Serialize;

use crate::catalog::{AqiCalendar, AqiData, Catalog, DailyAqi, FilterPlan, PurifierSpec, RateTable};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RejectedRow {
    /// 1-based line number in the file (the header is line 1).
    pub row_number: u64,
    pub column: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseReport {
    pub accepted: usize,
    pub rejected: Vec<RejectedRow>,
}

impl ParseReport {
    pub fn is_clean(&self) -> bool {
        self.rejected.is_empty()
    }

    fn finish(mut self) -> Self {
        self.rejected.sort_by_key(|r| r.row_number);
        self
    }

    fn reject(&mut self, row_number: u64, column: &str, message: impl Into<String>) {
        self.rejected.push(RejectedRow {
            row_number,
            column: column.to_string(),
            message: message.into(),
        });
    }
}

pub const CATALOG_COLUMNS: [&str; 11] = [
    "id",
    "brand",
    "model",
    "initial_cost_usd",
    "cadr_cfm",
    "rated_watts",
    "filter_price_usd",
    "filter_interval_days",
    "annual_filter_cost_usd",
    "model_year",
    "expected_pcy_usd",
];

const CATALOG_REQUIRED: [&str; 6] = [
    "id",
    "brand",
    "model",
    "initial_cost_usd",
    "cadr_cfm",
    "rated_watts",
];

struct Header {
    index: HashMap<String, usize>,
    width: usize,
}

struct Row {
    line: u64,
    fields: Vec<String>,
}

/// A cell-level failure: (column, message).
type CellError = (String, String);

impl Header {
    fn get<'a>(&self, row: &'a Row, column: &str) -> Option<&'a str> {
        self.index
            .get(column)
            .and_then(|i| row.fields.get(*i))
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
    }

    fn required<'a>(&self, row: &'a Row, column: &str) -> Result<&'a str, CellError> {
        self.get(row, column)
            .ok_or_else(|| (column.to_string(), "missing value".to_string()))
    }
}

/// Splits input into a header and rows. Rows that are not valid UTF-8 or are
/// malformed CSV are rejected into `report` rather than returned.
fn read_table(input: &[u8], required: &[&str], report: &mut ParseReport) -> Result<(Header, Vec<Row>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);

    let raw = reader
        .byte_headers()
        .map_err(|e| Error::Parse(format!("unreadable header: {e}")))?
        .clone();
    let mut index = HashMap::new();
    for (i, name) in raw.iter().enumerate() {
        let name = std::str::from_utf8(name)
            .map_err(|_| Error::Parse("header is not valid UTF-8".into()))?
            .trim()
            .trim_start_matches('\u{feff}')
            .to_string();
        index.entry(name).or_insert(i);
    }
    let missing: Vec<&str> = required
        .iter()
        .copied()
        .filter(|c| !index.contains_key(*c))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Parse(format!(
            "header row missing required column(s): {}",
            missing.join(", ")
        )));
    }
    let header = Header {
        index,
        width: raw.len(),
    };

    let mut rows = Vec::new();
    let mut record = csv::ByteRecord::new();
    loop {
        match reader.read_byte_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(0, |p| p.line());
                if record.iter().all(|f| f.iter().all(u8::is_ascii_whitespace)) {
                    continue;
                }
                if record.len() != header.width {
                    report.reject(
                        line,
                        "*",
                        format!("expected {} fields, found {}", header.width, record.len()),
                    );
                    continue;
                }
                let fields: std::result::Result<Vec<String>, _> = record
                    .iter()
                    .map(|f| std::str::from_utf8(f).map(str::to_string))
                    .collect();
                match fields {
                    Ok(fields) => rows.push(Row { line, fields }),
                    Err(_) => report.reject(line, "*", "row is not valid UTF-8"),
                }
            }
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                report.reject(line, "*", format!("malformed CSV: {e}"));
                // A hard I/O-level error cannot be resumed.
                if !matches!(e.kind(), csv::ErrorKind::Utf8 { .. } | csv::ErrorKind::UnequalLengths { .. }) {
                    break;
                }
            }
        }
    }
    Ok((header, rows))
}

fn number(column: &str, text: &str) -> Result<f64, CellError> {
    let value: f64 = text
        .parse()
        .map_err(|_| (column.to_string(), format!("not a number: {text:?}")))?;
    if !value.is_finite() {
        return Err((column.to_string(), format!("not a finite number: {text:?}")));
    }
    Ok(value)
}

fn non_negative(column: &str, text: &str) -> Result<f64, CellError> {
    let v = number(column, text)?;
    if v < 0.0 {
        return Err((column.to_string(), format!("must be >= 0, got {v}")));
    }
    Ok(v)
}

fn positive(column: &str, text: &str) -> Result<f64, CellError> {
    let v = number(column, text)?;
    if v <= 0.0 {
        return Err((column.to_string(), format!("must be > 0, got {v}")));
    }
    Ok(v)
}

fn catalog_row(header: &Header, row: &Row) -> Result<(PurifierSpec, Option<f64>), CellError> {
    let id = header.required(row, "id")?.to_string();
    let brand = header.required(row, "brand")?.to_string();
    let model = header.required(row, "model")?.to_string();
    let initial_cost_usd = non_negative("initial_cost_usd", header.required(row, "initial_cost_usd")?)?;
    let cadr_cfm = positive("cadr_cfm", header.required(row, "cadr_cfm")?)?;
    let rated_watts = positive("rated_watts", header.required(row, "rated_watts")?)?;

    let price = header.get(row, "filter_price_usd");
    let interval = header.get(row, "filter_interval_days");
    let annual = header.get(row, "annual_filter_cost_usd");
    let filter_plan = match (price, interval, annual) {
        (Some(_), _, Some(_)) | (None, Some(_), Some(_)) => {
            return Err((
                "annual_filter_cost_usd".into(),
                "ambiguous filter plan: both periodic and annualized columns are set".into(),
            ))
        }
        (Some(p), Some(i), None) => FilterPlan::Periodic {
            filter_price_usd: non_negative("filter_price_usd", p)?,
            replacement_interval_days: positive("filter_interval_days", i)?,
        },
        (Some(_), None, None) => {
            return Err(("filter_interval_days".into(), "missing value".into()))
        }
        (None, Some(_), None) => return Err(("filter_price_usd".into(), "missing value".into())),
        (None, None, Some(a)) => FilterPlan::Annualized {
            usd_per_365_days: non_negative("annual_filter_cost_usd", a)?,
        },
        (None, None, None) => {
            return Err((
                "filter_price_usd".into(),
                "no filter plan: set filter_price_usd and filter_interval_days, or annual_filter_cost_usd".into(),
            ))
        }
    };

    let model_year = header
        .get(row, "model_year")
        .map(|y| {
            y.parse::<i32>()
                .map_err(|_| ("model_year".to_string(), format!("not an integer: {y:?}")))
        })
        .transpose()?;
    let expected = header
        .get(row, "expected_pcy_usd")
        .map(|v| non_negative("expected_pcy_usd", v))
        .transpose()?;

    Ok((
        PurifierSpec {
            id,
            brand,
            model,
            initial_cost_usd,
            cadr_cfm,
            rated_watts,
            filter_plan,
            model_year,
        },
        expected,
    ))
}

/// Parses a purifier catalog. Rows with a duplicate id are rejected after the
/// first occurrence.
pub fn parse_catalog(input: impl AsRef<[u8]>) -> Result<(Catalog, ParseReport)> {
    let mut report = ParseReport::default();
    let (header, rows) = read_table(input.as_ref(), &CATALOG_REQUIRED, &mut report)?;

    let mut units = Vec::new();
    let mut expected = BTreeMap::new();
    let mut ids = BTreeSet::new();
    for row in &rows {
        match catalog_row(&header, row) {
            Ok((spec, audit)) => {
                if !ids.insert(spec.id.clone()) {
                    report.reject(row.line, "id", format!("duplicate id {:?}", spec.id));
                    continue;
                }
                if let Some(v) = audit {
                    expected.insert(spec.id.clone(), v);
                }
                units.push(spec);
            }
            Err((column, message)) => report.reject(row.line, &column, message),
        }
    }
    report.accepted = units.len();
    let catalog = Catalog::with_audit(units, expected)?;
    Ok((catalog, report.finish()))
}

/// Writes a catalog in the format [`parse_catalog`] reads. Numbers use the
/// shortest representation that parses back to the same `f64`.
pub fn serialize_catalog(catalog: &Catalog) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    // Writing to a Vec cannot fail.
    writer.write_record(CATALOG_COLUMNS).expect("in-memory write");
    for unit in catalog.units() {
        let (price, interval, annual) = match unit.filter_plan {
            FilterPlan::Periodic {
                filter_price_usd,
                replacement_interval_days,
            } => (
                filter_price_usd.to_string(),
                replacement_interval_days.to_string(),
                String::new(),
            ),
            FilterPlan::Annualized { usd_per_365_days } => {
                (String::new(), String::new(), usd_per_365_days.to_string())
            }
        };
        writer
            .write_record([
                unit.id.clone(),
                unit.brand.clone(),
                unit.model.clone(),
                unit.initial_cost_usd.to_string(),
                unit.cadr_cfm.to_string(),
                unit.rated_watts.to_string(),
                price,
                interval,
                annual,
                unit.model_year.map(|y| y.to_string()).unwrap_or_default(),
                catalog
                    .expected_pcy(&unit.id)
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
            ])
            .expect("in-memory write");
    }
    let bytes = writer.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("csv writer emits UTF-8 for UTF-8 input")
}

/// Parses `region,usd_per_kwh` with an optional `name` column. A region that
/// repeats is rejected on its later rows.
pub fn parse_rates(input: impl AsRef<[u8]>) -> Result<(RateTable, ParseReport)> {
    let mut report = ParseReport::default();
    let (header, rows) = read_table(input.as_ref(), &["region", "usd_per_kwh"], &mut report)?;
    let mut table = RateTable::new();
    for row in &rows {
        let parsed = header.required(row, "region").and_then(|region| {
            let rate = positive("usd_per_kwh", header.required(row, "usd_per_kwh")?)?;
            Ok((region, rate))
        });
        match parsed {
            Ok((region, rate)) => {
                if let Err(e) = table.insert(region, header.get(row, "name"), rate) {
                    let column = if e.to_string().contains("duplicate") {
                        "region"
                    } else {
                        "usd_per_kwh"
                    };
                    report.reject(row.line, column, e.to_string());
                } else {
                    report.accepted += 1;
                }
            }
            Err((column, message)) => report.reject(row.line, &column, message),
        }
    }
    Ok((table, report.finish()))
}

/// Parses AQI calendars in either of two layouts:
///
/// * long form `region,date,aqi` (one row per day, dates as `YYYY-MM-DD`),
///   producing one daily series per region;
/// * wide form `region,days_over_100`, producing one exceedance count per row.
///
/// Calendars come back in order of first appearance.
pub fn parse_aqi(input: impl AsRef<[u8]>) -> Result<(Vec<AqiCalendar>, ParseReport)> {
    let input = input.as_ref();
    let mut report = ParseReport::default();
    let probe = read_table(input, &["region"], &mut ParseReport::default())?.0;
    let long_form = ["date", "aqi"].iter().all(|c| probe.index.contains_key(*c));
    let wide_form = probe.index.contains_key("days_over_100");

    if long_form {
        let (header, rows) = read_table(input, &["region", "date", "aqi"], &mut report)?;
        let mut order: Vec<String> = Vec::new();
        let mut series: HashMap<String, (Vec<DailyAqi>, BTreeSet<NaiveDate>)> = HashMap::new();
        for row in &rows {
            let parsed = (|| {
                let region = header.required(row, "region")?;
                let date_text = header.required(row, "date")?;
                let date = NaiveDate::parse_from_str(date_text, "%Y-%m-%d")
                    .map_err(|_| ("date".to_string(), format!("not a YYYY-MM-DD date: {date_text:?}")))?;
                let aqi_text = header.required(row, "aqi")?;
                let aqi = aqi_text
                    .parse::<u32>()
                    .map_err(|_| ("aqi".to_string(), format!("not a non-negative integer: {aqi_text:?}")))?;
                Ok::<_, CellError>((region.to_string(), DailyAqi { date, aqi }))
            })();
            match parsed {
                Ok((region, day)) => {
                    let entry = series.entry(region.clone()).or_insert_with(|| {
                        order.push(region.clone());
                        Default::default()
                    });
                    if !entry.1.insert(day.date) {
                        report.reject(
                            row.line,
                            "date",
                            format!("duplicate date {} for region {region:?}", day.date),
                        );
                        continue;
                    }
                    entry.0.push(day);
                    report.accepted += 1;
                }
                Err((column, message)) => report.reject(row.line, &column, message),
            }
        }
        let calendars = order
            .into_iter()
            .map(|region| {
                let (values, _) = series.remove(&region).unwrap_or_default();
                AqiCalendar {
                    region,
                    data: AqiData::DailySeries { values },
                }
            })
            .collect();
        Ok((calendars, report.finish()))
    } else if wide_form {
        let (header, rows) = read_table(input, &["region", "days_over_100"], &mut report)?;
        let mut calendars: Vec<AqiCalendar> = Vec::new();
        for row in &rows {
            let parsed = (|| {
                let region = header.required(row, "region")?;
                let text = header.required(row, "days_over_100")?;
                let days = text
                    .parse::<u16>()
                    .ok()
                    .filter(|d| *d <= 366)
                    .ok_or_else(|| ("days_over_100".to_string(), format!("must be an integer in 0..=366, got {text:?}")))?;
                Ok::<_, CellError>((region.to_string(), days))
            })();
            match parsed {
                Ok((region, days)) => {
                    if calendars.iter().any(|c| c.region == region) {
                        report.reject(row.line, "region", format!("duplicate region {region:?}"));
                        continue;
                    }
                    calendars.push(AqiCalendar {
                        region,
                        data: AqiData::ExceedanceCount {
                            days_over_threshold: days,
                        },
                    });
                    report.accepted += 1;
                }
                Err((column, message)) => report.reject(row.line, &column, message),
            }
        }
        Ok((calendars, report.finish()))
    } else {
        Err(Error::Parse(
            "AQI header must be `region,date,aqi` or `region,days_over_100`".into(),
        ))
    }
}
