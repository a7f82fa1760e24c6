//! The shipped catalog against the verbatim transcription of the printed table.

mod common;

use common::{printed_compat_pcy, printed_rows};
use pcy_core::catalog::{CostModelParams, FilterPlan, InitialCostMode};
use pcy_core::cost_engine::{pcy, CostContext};
use pcy_core::datasets::{shipped_catalog, TABLE5_CATALOG_CSV};
use pcy_core::money::format_usd;

const CA_RATE: f64 = 0.251;
const HALF_CENT: f64 = 0.005;

fn ctx(mode: InitialCostMode) -> CostContext {
    CostContext::continuous(CA_RATE, CostModelParams::default().with_mode(mode)).unwrap()
}

#[test]
fn transcription_has_every_printed_row() {
    let rows = printed_rows();
    assert_eq!(rows.len(), 53);
    assert_eq!(rows[0].product, "Coway Airmega 250");
    assert_eq!(rows[52].product, "Blueair Pro XL");
}

#[test]
fn catalog_matches_printed_transcription() {
    let catalog = shipped_catalog().unwrap();
    let rows = printed_rows();
    assert_eq!(catalog.len(), rows.len());
    for (unit, row) in catalog.units().iter().zip(&rows) {
        assert_eq!(unit.display_name(), row.product);
        assert_eq!(unit.initial_cost_usd, row.initial_cost_usd, "{}", row.product);
        assert_eq!(unit.cadr_cfm * 1.5, row.a_optimal_sqft, "{}", row.product);
        assert_eq!(catalog.expected_pcy(&unit.id), Some(row.pcy_usd));

        let lifetime_elec = unit.rated_watts * 87_600.0 / 1000.0 * CA_RATE;
        assert!(
            (lifetime_elec - row.lifetime_elec_usd).abs() <= HALF_CENT + 1e-6,
            "{}: implied lifetime electricity {lifetime_elec} does not round to {}",
            row.product,
            row.lifetime_elec_usd
        );
        let FilterPlan::Annualized { usd_per_365_days } = unit.filter_plan else {
            panic!("{}: shipped plans are annualized", row.product);
        };
        assert!(
            (usd_per_365_days * 10.0 - row.lifetime_filter_usd).abs() <= HALF_CENT + 1e-6,
            "{}",
            row.product
        );
    }
}

#[test]
fn printed_columns_reproduce_pcy_within_rounding() {
    // Each lifetime cell carries up to half a cent of rounding, so the
    // recomputed PCY can drift by (2 × 0.005 / 10) × 2500 / A_optimal.
    let mut beyond_one_cent = Vec::new();
    for row in printed_rows() {
        let recomputed = printed_compat_pcy(&row);
        let bound = 2.0 * HALF_CENT / 10.0 * 2500.0 / row.a_optimal_sqft + HALF_CENT;
        let diff = (recomputed - row.pcy_usd).abs();
        assert!(diff <= bound, "{}: {recomputed} vs {} (bound {bound})", row.product, row.pcy_usd);
        if diff > 0.01 {
            beyond_one_cent.push(row.product.clone());
        }
    }
    assert_eq!(
        beyond_one_cent,
        ["IQAir Atem Desk", "IQAir Atem Car", "Medify MA-CAR", "PureZone Breeze", "PureZone Halo"]
    );
}

#[test]
fn reconciled_rows_are_marked_in_provenance() {
    let provenance = include_str!("../../../data/table5_provenance.csv");
    let reconciled: Vec<&str> = provenance
        .lines()
        .skip(1)
        .filter(|l| l.ends_with(",reconciled"))
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(
        reconciled,
        ["iqair-atem-desk", "iqair-atem-car", "medify-ma-car", "purezone-breeze", "purezone-halo"]
    );
    let nudged = provenance.lines().filter(|l| l.ends_with(",nudged")).count();
    assert_eq!(nudged, 17);
    assert_eq!(provenance.lines().count(), 54);
    assert_eq!(TABLE5_CATALOG_CSV.lines().count(), 54);
}

#[test]
fn engine_reproduces_every_printed_pcy() {
    let catalog = shipped_catalog().unwrap();
    let compat = ctx(InitialCostMode::Table5Compat);
    for row in printed_rows() {
        let unit = catalog.find(&row.product).unwrap();
        let r = pcy(unit, &compat).unwrap();
        assert!(
            (r.total_usd_per_year - row.pcy_usd).abs() <= 0.01,
            "{}: {} vs {}",
            row.product,
            r.total_usd_per_year,
            row.pcy_usd
        );
    }
}

#[test]
fn every_row_displays_as_printed() {
    let catalog = shipped_catalog().unwrap();
    let compat = ctx(InitialCostMode::Table5Compat);
    let printed = include_str!("../../../data/table5_printed.csv");
    for (row, line) in printed_rows().iter().zip(printed.lines().skip(1)) {
        let total = pcy(catalog.find(&row.product).unwrap(), &compat).unwrap().total_usd_per_year;
        assert_eq!(format_usd(total), line.rsplit(',').next().unwrap(), "{}", row.product);
    }
}

#[test]
fn spec_formula_adds_amortized_purchase_price() {
    let catalog = shipped_catalog().unwrap();
    let compat = ctx(InitialCostMode::Table5Compat);
    let spec = ctx(InitialCostMode::SpecFormula);
    for row in printed_rows() {
        let unit = catalog.find(&row.product).unwrap();
        let delta = pcy(unit, &spec).unwrap().total_usd_per_year - pcy(unit, &compat).unwrap().total_usd_per_year;
        let expected = row.initial_cost_usd / 10.0 * 2500.0 / row.a_optimal_sqft;
        assert!((delta - expected).abs() < 1e-9, "{}", row.product);
    }
}

#[test]
fn named_examples() {
    let catalog = shipped_catalog().unwrap();
    let compat = ctx(InitialCostMode::Table5Compat);
    let spec = ctx(InitialCostMode::SpecFormula);
    let total = |name: &str, c: &CostContext| pcy(catalog.find(name).unwrap(), c).unwrap().total_usd_per_year;
    assert!((total("Coway Airmega 250", &compat) - 1155.77).abs() <= 0.01);
    assert!((total("Coway Airmega 250", &spec) - 1351.25).abs() <= 0.01);
    assert!((total("Medify MA-112", &compat) - 661.00).abs() <= 0.01);
    assert!((total("Blueair Pure 311 Auto", &compat) - 789.52).abs() <= 0.01);
    assert!((total("PureZone Mini", &compat) - 12152.34).abs() <= 0.01);
}
