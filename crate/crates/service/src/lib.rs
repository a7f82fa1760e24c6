//! Stateless HTTP API over the purification cost model.
//!
//! | method | path                      | body            |
//! |--------|---------------------------|-----------------|
//! | GET    | `/api/catalog`            |                 |
//! | GET    | `/api/rates`              |                 |
//! | GET    | `/api/reference/{table}`  | `hepa`, `merv` or `particles` |
//! | POST   | `/api/rank`               | [`WhatIfRequest`] |
//! | POST   | `/api/pcy`                | [`WhatIfRequest`] with `spec` or `unit_id` |

pub mod api;
mod error;

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::routing::{get, post};
use axum::{Json, Router};
use pcy_core::analytics::{coverage_price_fits, evaluate_units, sort_ranking, RankedUnit};
use pcy_core::catalog::{
    AqiCalendar, Catalog, PurifierSpec, RateTable, HEPA_CLASSES, MERV_RATINGS, POLLUTANTS,
};
use pcy_core::cost_engine::{maintenance_cost_per_year, pcy, pcy_breakdown, CostContext};
use pcy_core::money::format_usd;
use serde_json::Value;

pub use api::{CalendarRef, WhatIfRequest};
pub use error::{ApiError, FieldError};

use api::*;

/// Immutable data shared by every request.
#[derive(Debug, Clone)]
pub struct AppState {
    catalog: Arc<Catalog>,
    rates: Arc<RateTable>,
    calendars: Arc<Vec<AqiCalendar>>,
}

impl AppState {
    pub fn new(catalog: Catalog, rates: RateTable, calendars: Vec<AqiCalendar>) -> Self {
        AppState {
            catalog: Arc::new(catalog),
            rates: Arc::new(rates),
            calendars: Arc::new(calendars),
        }
    }

    /// State built from the datasets compiled into `pcy-core`.
    pub fn shipped() -> pcy_core::Result<Self> {
        use pcy_core::datasets::*;
        Ok(Self::new(shipped_catalog()?, shipped_rates()?, shipped_calendars()?))
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/catalog", get(catalog))
        .route("/api/rates", get(rates))
        .route("/api/reference/{table}", get(reference))
        .route("/api/rank", post(rank))
        .route("/api/pcy", post(price_one))
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}

fn parse_request(body: &[u8]) -> Result<WhatIfRequest, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::field("body", e.to_string()))
}

fn priced(unit: &RankedUnit, spec: &PurifierSpec, ctx: &CostContext) -> PricedUnit {
    PricedUnit {
        id: unit.id.clone(),
        brand: unit.brand.clone(),
        model: unit.model.clone(),
        pcy: PcyView::from(&unit.result),
        shares: pcy_breakdown(&unit.result, spec, ctx).ok(),
        below_medical_threshold: unit.result.total_usd_per_year < ctx.params.medical_cost_threshold_usd,
    }
}

async fn catalog(State(state): State<AppState>) -> Json<CatalogResponse> {
    let params = pcy_core::catalog::CostModelParams::default();
    let yearly = CostContext::continuous(1.0, params).expect("default parameters are valid");
    let units = state
        .catalog
        .units()
        .iter()
        .map(|u| CatalogEntry {
            id: u.id.clone(),
            brand: u.brand.clone(),
            model: u.model.clone(),
            name: u.display_name(),
            initial_cost_usd: format_usd(u.initial_cost_usd),
            cadr_cfm: u.cadr_cfm,
            rated_watts: u.rated_watts,
            optimal_coverage_sqft: u.cadr_cfm * params.coverage_factor,
            annual_filter_cost_usd: format_usd(maintenance_cost_per_year(&yearly, &u.filter_plan).unwrap_or(f64::NAN)),
            filter_plan: u.filter_plan,
            model_year: u.model_year,
        })
        .collect();
    Json(CatalogResponse {
        units,
        coverage_price_fits: coverage_price_fits(&state.catalog, &params).ok(),
    })
}

async fn rates(State(state): State<AppState>) -> Json<RatesResponse> {
    Json(RatesResponse {
        rates: state
            .rates
            .entries()
            .iter()
            .map(|(code, rate)| RateEntry {
                region: code.clone(),
                name: state.rates.name(code).map(str::to_string),
                usd_per_kwh: *rate,
            })
            .collect(),
    })
}

async fn reference(Path(table): Path<String>) -> Result<Json<Value>, ApiError> {
    let value = match table.as_str() {
        "hepa" => serde_json::to_value(HEPA_CLASSES),
        "merv" => serde_json::to_value(MERV_RATINGS),
        "particles" => serde_json::to_value(POLLUTANTS),
        _ => return Err(ApiError::not_found("reference table", table)),
    };
    Ok(Json(value.expect("reference tables serialize")))
}

async fn rank(State(state): State<AppState>, body: Bytes) -> Result<Json<RankResponse>, ApiError> {
    let req = parse_request(&body)?;
    let Resolved { ctx, assumptions } = req.resolve(&state.rates, &state.calendars)?;

    let mut units: Vec<&PurifierSpec> = match &req.unit_ids {
        None => state.catalog.units().iter().collect(),
        Some(keys) => {
            let (found, missing): (Vec<_>, Vec<_>) = keys.iter().map(|k| (k, state.catalog.find(k))).partition(|(_, r)| r.is_ok());
            if !missing.is_empty() {
                return Err(ApiError::NotFound {
                    kind: "unit",
                    keys: missing.into_iter().map(|(k, _)| k.clone()).collect(),
                });
            }
            let mut units: Vec<&PurifierSpec> = Vec::new();
            for unit in found.into_iter().map(|(_, r)| r.expect("partitioned")) {
                if !units.iter().any(|u| u.id == unit.id) {
                    units.push(unit);
                }
            }
            units
        }
    };
    if let Some(spec) = &req.spec {
        if state.catalog.units().iter().any(|u| u.id == spec.id) {
            return Err(ApiError::field("spec.id", format!("{} is already a catalog id", spec.id)));
        }
        units.push(spec);
    }

    let mut ranking = evaluate_units(units.iter().copied(), &ctx);
    sort_ranking(&mut ranking);
    let spec_of = |id: &str| *units.iter().find(|u| u.id == id).expect("ranked unit came from this list");
    Ok(Json(RankResponse {
        assumptions,
        results: ranking.ranked.iter().map(|r| priced(r, spec_of(&r.id), &ctx)).collect(),
        errors: ranking
            .errors
            .into_iter()
            .map(|e| UnitFailure {
                id: e.id,
                message: e.message,
            })
            .collect(),
    }))
}

async fn price_one(State(state): State<AppState>, body: Bytes) -> Result<Json<PcyResponse>, ApiError> {
    let req = parse_request(&body)?;
    let Resolved { ctx, assumptions } = req.resolve(&state.rates, &state.calendars)?;
    let spec = match (&req.spec, &req.unit_id) {
        (Some(_), Some(_)) => return Err(ApiError::field("spec", "give either spec or unit_id, not both")),
        (None, None) => return Err(ApiError::field("spec", "one of spec or unit_id is required")),
        (Some(spec), None) => spec,
        (None, Some(key)) => state.catalog.find(key).map_err(|_| ApiError::not_found("unit", key.clone()))?,
    };
    let result = pcy(spec, &ctx).map_err(|e| ApiError::field("spec", e.to_string()))?;
    let unit = RankedUnit {
        id: spec.id.clone(),
        brand: spec.brand.clone(),
        model: spec.model.clone(),
        result,
    };
    Ok(Json(PcyResponse {
        assumptions,
        result: priced(&unit, spec, &ctx),
    }))
}
