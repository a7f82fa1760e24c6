use serde::Serialize;

use crate::catalog::{Catalog, PurifierSpec};
use crate::cost_engine::{pcy, CostContext, PcyResult};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedUnit {
    pub id: String,
    pub brand: String,
    pub model: String,
    pub result: PcyResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitError {
    pub id: String,
    pub message: String,
}

/// Units ordered by PCY, plus any unit the engine could not evaluate.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Ranking {
    pub ranked: Vec<RankedUnit>,
    pub errors: Vec<UnitError>,
}

impl Ranking {
    pub fn totals(&self) -> Vec<f64> {
        self.ranked.iter().map(|r| r.result.total_usd_per_year).collect()
    }
}

/// Evaluates every unit under `ctx`. Per-unit failures are collected, never
/// fatal.
pub fn evaluate_units<'a>(
    units: impl IntoIterator<Item = &'a PurifierSpec>,
    ctx: &CostContext,
) -> Ranking {
    let mut ranking = Ranking::default();
    for spec in units {
        match pcy(spec, ctx) {
            Ok(result) => ranking.ranked.push(RankedUnit {
                id: spec.id.clone(),
                brand: spec.brand.clone(),
                model: spec.model.clone(),
                result,
            }),
            Err(e) => ranking.errors.push(UnitError {
                id: spec.id.clone(),
                message: e.to_string(),
            }),
        }
    }
    ranking
}

/// Ascending by total PCY; ties go to (brand, model), then id.
pub fn sort_ranking(ranking: &mut Ranking) {
    ranking.ranked.sort_by(|a, b| {
        a.result
            .total_usd_per_year
            .total_cmp(&b.result.total_usd_per_year)
            .then_with(|| a.brand.cmp(&b.brand))
            .then_with(|| a.model.cmp(&b.model))
            .then_with(|| a.id.cmp(&b.id))
    });
    ranking.errors.sort_by(|a, b| a.id.cmp(&b.id));
}

pub fn rank_by_pcy(catalog: &Catalog, ctx: &CostContext) -> Result<Ranking, Error> {
    if catalog.is_empty() {
        return Err(Error::domain("cannot rank an empty catalog"));
    }
    let mut ranking = evaluate_units(catalog.units(), ctx);
    sort_ranking(&mut ranking);
    Ok(ranking)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub threshold_usd: f64,
    pub n_below: usize,
    pub n_above: usize,
    /// Ids with PCY at or above the threshold, in input order.
    pub items_above: Vec<String>,
}

/// "Below" is strict: a PCY equal to the threshold counts as above.
pub fn threshold_report<'a>(
    pcys: impl IntoIterator<Item = (&'a str, f64)>,
    threshold_usd: f64,
) -> ThresholdReport {
    let mut report = ThresholdReport {
        threshold_usd,
        n_below: 0,
        n_above: 0,
        items_above: Vec::new(),
    };
    for (id, total) in pcys {
        if total < threshold_usd {
            report.n_below += 1;
        } else {
            report.n_above += 1;
            report.items_above.push(id.to_string());
        }
    }
    report
}
