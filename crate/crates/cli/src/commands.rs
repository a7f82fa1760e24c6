use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use pcy_core::analytics::{evaluate_units, rank_by_pcy, sort_ranking, state_sweep, threshold_report};
use pcy_core::catalog::{AqiCalendar, CostModelParams, InitialCostMode, PurifierSpec};
use pcy_core::cost_engine::{operating_days, pcy, pcy_breakdown, CostContext, DAYS_PER_YEAR};
use pcy_core::datasets::REFERENCE_REGION;
use pcy_core::money::{format_fixed, format_usd};
use pcy_core::reproduce::reproduce;
use serde_json::{json, Value};

use crate::data::{load_calendars, load_rates, Data};
use crate::render::{Align, Table};

/// Rate, schedule, mode and home size shared by the pricing commands.
#[derive(Debug, Clone, Args)]
pub struct Scenario {
    /// Region code or name from the rate table [default: CA]
    #[arg(long, conflicts_with = "rate")]
    pub region: Option<String>,
    /// Electricity price in $/kWh, instead of a region
    #[arg(long)]
    pub rate: Option<f64>,
    /// Operating days per year [default: 365]
    #[arg(long, conflicts_with = "calendar")]
    pub days: Option<f64>,
    /// AQI calendar: a region in the loaded AQI data, or a CSV file.
    /// Operating days are the days above AQI 100.
    #[arg(long)]
    pub calendar: Option<String>,
    /// spec (purchase price amortized into PCY) or table5 (left out)
    #[arg(long, default_value = "spec")]
    pub mode: InitialCostMode,
    /// Floor area the PCY is normalized to
    #[arg(long = "home-sqft", default_value_t = 2500.0)]
    pub home_sqft: f64,
}

/// A command's rendered result. `partial` maps to exit code 2.
pub struct Outcome {
    pub table: Table,
    pub partial: bool,
}

fn params(mode: InitialCostMode, home_sqft: f64) -> Result<CostModelParams> {
    let p = CostModelParams::default().with_mode(mode).with_reference_area(home_sqft);
    p.validate().context("--home-sqft")?;
    Ok(p)
}

fn pick_calendar(spec: &str, data: &Data) -> Result<AqiCalendar> {
    let path = Path::new(spec);
    if path.is_file() {
        let mut warnings = Vec::new();
        let mut cals = load_calendars(path, &mut warnings)?;
        for w in warnings {
            eprintln!("warning: {w}");
        }
        return match cals.len() {
            1 => Ok(cals.remove(0)),
            n => bail!(
                "{spec} holds {n} calendars ({}); load it with --data-dir and pick one by name",
                cals.iter().map(|c| c.region.as_str()).collect::<Vec<_>>().join(", ")
            ),
        };
    }
    data.calendars
        .iter()
        .find(|c| c.region.eq_ignore_ascii_case(spec.trim()))
        .cloned()
        .ok_or_else(|| anyhow!("unknown calendar {spec:?}: not a file and not a loaded AQI region"))
}

/// Resolved scenario plus a one-line description of it.
pub struct Resolved {
    pub ctx: CostContext,
    pub label: String,
}

impl Scenario {
    pub fn resolve(&self, data: &Data) -> Result<Resolved> {
        let params = params(self.mode, self.home_sqft)?;
        let (rate, rate_label) = match (&self.region, self.rate) {
            (_, Some(rate)) => (rate, format!("{rate} $/kWh")),
            (region, None) => {
                let region = region.as_deref().unwrap_or(REFERENCE_REGION);
                let code = data.rates.resolve(region)?;
                (data.rates.rate(code)?, format!("{code} at {} $/kWh", data.rates.rate(code)?))
            }
        };
        let (days, days_label) = match (&self.calendar, self.days) {
            (Some(spec), _) => {
                let cal = pick_calendar(spec, data)?;
                cal.validate()?;
                let days = operating_days(&cal, params.aqi_orange_threshold).min(DAYS_PER_YEAR as u32);
                (f64::from(days), format!("{days} days ({} calendar)", cal.region))
            }
            (None, days) => {
                let d = days.unwrap_or(DAYS_PER_YEAR);
                (d, format!("{d} days"))
            }
        };
        let ctx = CostContext::new(rate, days, params)?;
        Ok(Resolved {
            label: format!(
                "mode {}, {rate_label}, {days_label}, home {} sq ft",
                params.initial_cost_mode, params.reference_area_sqft
            ),
            ctx,
        })
    }
}

/// Looks up each key; unknown keys are reported on stderr.
fn select<'a>(data: &'a Data, keys: &[String]) -> (Vec<&'a PurifierSpec>, bool) {
    if keys.is_empty() {
        return (data.catalog.units().iter().collect(), false);
    }
    let mut found = Vec::new();
    let mut missing = false;
    for key in keys {
        match data.catalog.find(key) {
            Ok(unit) => found.push(unit),
            Err(_) => {
                eprintln!("error: unknown unit {key:?}");
                missing = true;
            }
        }
    }
    (found, missing)
}

fn multiplier(v: f64) -> String {
    format_fixed(v, 4)
}

fn share(v: f64) -> String {
    format!("{}%", format_fixed(v * 100.0, 2))
}

pub fn cmd_pcy(data: &Data, units: &[String], scenario: &Scenario) -> Result<Outcome> {
    let Resolved { ctx, label } = scenario.resolve(data)?;
    let (selected, mut partial) = select(data, units);
    let mut table = Table::new(&[
        ("unit", Align::Left),
        ("id", Align::Left),
        ("pcy_usd", Align::Right),
        ("initial_usd", Align::Right),
        ("maintenance_usd", Align::Right),
        ("electricity_usd", Align::Right),
        ("multiplier", Align::Right),
    ]);
    for unit in selected {
        match pcy(unit, &ctx) {
            Ok(r) => table.push(vec![
                unit.display_name(),
                unit.id.clone(),
                format_usd(r.total_usd_per_year),
                format_usd(r.initial_component_usd),
                format_usd(r.maintenance_usd_per_year),
                format_usd(r.electricity_usd_per_year),
                multiplier(r.normalization_multiplier),
            ]),
            Err(e) => {
                eprintln!("error: {}: {e}", unit.id);
                partial = true;
            }
        }
    }
    table.notes.push(label);
    Ok(Outcome { table, partial })
}

pub fn cmd_rank(data: &Data, scenario: &Scenario, top: Option<usize>) -> Result<Outcome> {
    let Resolved { ctx, label } = scenario.resolve(data)?;
    let ranking = rank_by_pcy(&data.catalog, &ctx)?;
    let threshold = ctx.params.medical_cost_threshold_usd;
    let report = threshold_report(
        ranking.ranked.iter().map(|r| (r.id.as_str(), r.result.total_usd_per_year)),
        threshold,
    );
    let mut table = Table::new(&[
        ("rank", Align::Right),
        ("unit", Align::Left),
        ("id", Align::Left),
        ("pcy_usd", Align::Right),
        ("below_threshold", Align::Left),
    ]);
    for (i, r) in ranking.ranked.iter().take(top.unwrap_or(usize::MAX)).enumerate() {
        table.push(vec![
            (i + 1).to_string(),
            format!("{} {}", r.brand, r.model),
            r.id.clone(),
            format_usd(r.result.total_usd_per_year),
            if r.result.total_usd_per_year < threshold { "yes" } else { "no" }.into(),
        ]);
    }
    for e in &ranking.errors {
        eprintln!("error: {}: {}", e.id, e.message);
    }
    table.notes.push(label);
    table.notes.push(format!(
        "{} of {} units below ${}",
        report.n_below,
        report.n_below + report.n_above,
        format_usd(threshold)
    ));
    Ok(Outcome {
        table,
        partial: !ranking.errors.is_empty(),
    })
}

pub fn cmd_breakdown(data: &Data, units: &[String], scenario: &Scenario) -> Result<Outcome> {
    let Resolved { ctx, label } = scenario.resolve(data)?;
    let (selected, mut partial) = select(data, units);
    let mut table = Table::new(&[
        ("unit", Align::Left),
        ("id", Align::Left),
        ("initial_share", Align::Right),
        ("maintenance_share", Align::Right),
        ("electricity_share", Align::Right),
    ]);
    for unit in selected {
        let shares = pcy(unit, &ctx).and_then(|r| pcy_breakdown(&r, unit, &ctx));
        match shares {
            Ok(s) => table.push(vec![
                unit.display_name(),
                unit.id.clone(),
                share(s.initial),
                share(s.maintenance),
                share(s.electricity),
            ]),
            Err(e) => {
                eprintln!("error: {}: {e}", unit.id);
                partial = true;
            }
        }
    }
    table.notes.push(label);
    table.notes.push("shares include the purchase price spread over the unit lifetime in both modes".into());
    Ok(Outcome { table, partial })
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Rate table to sweep [default: the loaded rate table]
    #[arg(long)]
    pub rates: Option<PathBuf>,
    /// Operating days per year
    #[arg(long, default_value_t = DAYS_PER_YEAR)]
    pub days: f64,
    #[arg(long, default_value = "spec")]
    pub mode: InitialCostMode,
    #[arg(long = "home-sqft", default_value_t = 2500.0)]
    pub home_sqft: f64,
}

fn rows_json(table: &Table) -> Value {
    Value::Array(
        table
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    table
                        .columns
                        .iter()
                        .zip(row)
                        .map(|((n, _), c)| (n.to_string(), Value::String(c.clone())))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn cmd_sweep(data: &Data, args: &SweepArgs) -> Result<Outcome> {
    let mut warnings = Vec::new();
    let rates = match &args.rates {
        Some(path) => load_rates(path, &mut warnings)?,
        None => data.rates.clone(),
    };
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let template = CostContext::new(1.0, args.days, params(args.mode, args.home_sqft)?)?;
    let sweep = state_sweep(&data.catalog, &rates, &template)?;
    let mut table = Table::new(&[
        ("region", Align::Left),
        ("name", Align::Left),
        ("usd_per_kwh", Align::Right),
        ("median_usd", Align::Right),
        ("mean_usd", Align::Right),
        ("min_usd", Align::Right),
        ("max_usd", Align::Right),
    ]);
    for (code, r) in &sweep.per_region {
        table.push(vec![
            code.clone(),
            rates.name(code).unwrap_or("").to_string(),
            r.rate_usd_per_kwh.to_string(),
            format_usd(r.stats.median),
            format_usd(r.stats.mean),
            format_usd(r.stats.min),
            format_usd(r.stats.max),
        ]);
    }
    let pair = format!("{} vs {}", sweep.highest_rate_region, sweep.lowest_rate_region);
    table.notes.push(format!("mode {}, {} days, home {} sq ft", args.mode, args.days, args.home_sqft));
    table.notes.push(format!("median range: ${}", format_usd(sweep.median_range)));
    table.notes.push(format!(
        "per-unit range ({pair}): mean ${}, median ${}, min ${}, max ${}",
        format_usd(sweep.per_unit_range.mean),
        format_usd(sweep.per_unit_range.median),
        format_usd(sweep.per_unit_range.min),
        format_usd(sweep.per_unit_range.max)
    ));
    table.json = Some(json!({
        "regions": rows_json(&table),
        "median_range_usd": format_usd(sweep.median_range),
        "per_unit_range": {
            "highest_rate_region": sweep.highest_rate_region,
            "lowest_rate_region": sweep.lowest_rate_region,
            "mean_usd": format_usd(sweep.per_unit_range.mean),
            "median_usd": format_usd(sweep.per_unit_range.median),
        },
    }));
    for e in &sweep.errors {
        eprintln!("error: {}: {}", e.id, e.message);
    }
    Ok(Outcome {
        table,
        partial: !sweep.errors.is_empty() || !warnings.is_empty(),
    })
}

/// Ranks under `scenario` and compares each unit with continuous use at the
/// reference rate in a 2500 sq ft home, in the same mode.
pub fn cmd_whatif(data: &Data, units: &[String], scenario: &Scenario, top: Option<usize>) -> Result<Outcome> {
    let Resolved { ctx, label } = scenario.resolve(data)?;
    let baseline = CostContext::continuous(
        data.rates.rate(REFERENCE_REGION)?,
        CostModelParams::default().with_mode(scenario.mode),
    )?;
    let (selected, mut partial) = select(data, units);
    let mut ranking = evaluate_units(selected.iter().copied(), &ctx);
    sort_ranking(&mut ranking);

    let mut table = Table::new(&[
        ("rank", Align::Right),
        ("unit", Align::Left),
        ("pcy_usd", Align::Right),
        ("baseline_usd", Align::Right),
        ("change_usd", Align::Right),
        ("multiplier", Align::Right),
        ("below_threshold", Align::Left),
    ]);
    let threshold = ctx.params.medical_cost_threshold_usd;
    for (i, r) in ranking.ranked.iter().take(top.unwrap_or(usize::MAX)).enumerate() {
        let unit = selected.iter().find(|u| u.id == r.id).expect("ranked from selection");
        let base = pcy(unit, &baseline)?.total_usd_per_year;
        let total = r.result.total_usd_per_year;
        table.push(vec![
            (i + 1).to_string(),
            unit.display_name(),
            format_usd(total),
            format_usd(base),
            format_usd(total - base),
            multiplier(r.result.normalization_multiplier),
            if total < threshold { "yes" } else { "no" }.into(),
        ]);
    }
    for e in &ranking.errors {
        eprintln!("error: {}: {}", e.id, e.message);
        partial = true;
    }
    table.notes.push(label);
    table.notes.push(format!(
        "baseline: mode {}, {REFERENCE_REGION}, 365 days, home 2500 sq ft",
        scenario.mode
    ));
    Ok(Outcome { table, partial })
}

pub fn cmd_reproduce(data: &Data, calendar: Option<&Path>) -> Result<Outcome> {
    let mut calendars = data.calendars.clone();
    let mut warnings = Vec::new();
    if let Some(path) = calendar {
        calendars.extend(load_calendars(path, &mut warnings)?);
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let report = reproduce(&data.catalog, &data.rates, &calendars)?;
    let mut table = Table::new(&[
        ("verdict", Align::Left),
        ("check", Align::Left),
        ("computed", Align::Left),
        ("published", Align::Left),
        ("detail", Align::Left),
    ]);
    for c in &report.checks {
        table.push(vec![
            c.verdict.to_string(),
            c.key.clone(),
            c.computed.clone(),
            c.published.clone().unwrap_or_default(),
            c.detail.clone(),
        ]);
    }
    table.json = Some(serde_json::to_value(&report)?);
    table.human = Some(report.to_string());
    Ok(Outcome {
        table,
        partial: !warnings.is_empty(),
    })
}
