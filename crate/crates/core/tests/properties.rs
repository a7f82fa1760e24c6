mod common;

use common::naive_median;
use pcy_core::analytics::{ols_fit, rank_by_pcy, summarize, threshold_report};
use pcy_core::catalog::{Catalog, CostModelParams, FilterPlan, InitialCostMode, PurifierSpec};
use pcy_core::cost_engine::{electricity_cost_per_year, pcy, pcy_breakdown, CostContext};
use pcy_core::datasets::TABLE5_CATALOG_CSV;
use pcy_core::ingest::{parse_aqi, parse_catalog, parse_rates, serialize_catalog};
use proptest::prelude::*;

fn rel_eq(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

fn filter_plan() -> impl Strategy<Value = FilterPlan> {
    prop_oneof![
        (0.0f64..500.0, 1.0f64..730.0).prop_map(|(p, d)| FilterPlan::Periodic {
            filter_price_usd: p,
            replacement_interval_days: d,
        }),
        (0.0f64..1000.0).prop_map(|a| FilterPlan::Annualized { usd_per_365_days: a }),
    ]
}

prop_compose! {
    fn purifier(id: usize)(
        initial in 0.0f64..3000.0,
        cadr in 1.0f64..1500.0,
        watts in 0.5f64..500.0,
        plan in filter_plan(),
        brand in "[A-Z][a-z]{2,8}",
        model in "[A-Z0-9]{1,6}",
    ) -> PurifierSpec {
        PurifierSpec {
            id: format!("u{id}"),
            brand,
            model,
            initial_cost_usd: initial,
            cadr_cfm: cadr,
            rated_watts: watts,
            filter_plan: plan,
            model_year: None,
        }
    }
}

fn catalog(max: usize) -> impl Strategy<Value = Catalog> {
    (1..=max).prop_flat_map(|n| {
        (0..n).map(purifier).collect::<Vec<_>>().prop_map(|units| Catalog::new(units).unwrap())
    })
}

fn mode() -> impl Strategy<Value = InitialCostMode> {
    prop_oneof![Just(InitialCostMode::SpecFormula), Just(InitialCostMode::Table5Compat)]
}

fn context(mode: InitialCostMode, rate: f64, days: f64) -> CostContext {
    CostContext::new(rate, days, CostModelParams::default().with_mode(mode)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn compat_pcy_proportional_to_days(spec in purifier(0), rate in 0.05f64..0.5, days in 1.0f64..365.0, k in 0.01f64..1.0) {
        let base = pcy(&spec, &context(InitialCostMode::Table5Compat, rate, days)).unwrap();
        let scaled = pcy(&spec, &context(InitialCostMode::Table5Compat, rate, days * k)).unwrap();
        prop_assert!(rel_eq(scaled.total_usd_per_year, k * base.total_usd_per_year, 1e-9));
    }

    #[test]
    fn spec_pcy_affine_in_days(spec in purifier(0), rate in 0.05f64..0.5, days in 0.0f64..365.0) {
        let at = |d: f64| pcy(&spec, &context(InitialCostMode::SpecFormula, rate, d)).unwrap();
        let zero = at(0.0);
        let intercept = spec.initial_cost_usd / 10.0 * zero.normalization_multiplier;
        prop_assert!(rel_eq(zero.total_usd_per_year, intercept, 1e-12) || intercept == 0.0);
        let full = at(365.0);
        let interpolated = intercept + (full.total_usd_per_year - intercept) * days / 365.0;
        prop_assert!((at(days).total_usd_per_year - interpolated).abs() <= 1e-9 * full.total_usd_per_year.max(1.0));
    }

    #[test]
    fn doubling_cadr_halves_pcy(spec in purifier(0), m in mode(), rate in 0.05f64..0.5, days in 0.0f64..365.0) {
        let ctx = context(m, rate, days);
        let mut doubled = spec.clone();
        doubled.cadr_cfm *= 2.0;
        let a = pcy(&spec, &ctx).unwrap().total_usd_per_year;
        let b = pcy(&doubled, &ctx).unwrap().total_usd_per_year;
        prop_assert!(rel_eq(b, a / 2.0, 1e-12) || (a == 0.0 && b == 0.0));
    }

    #[test]
    fn electricity_proportional_to_each_input(watts in 0.5f64..500.0, rate in 0.05f64..0.4, days in 1.0f64..180.0) {
        let e = |w: f64, r: f64, d: f64| electricity_cost_per_year(&context(InitialCostMode::SpecFormula, r, d), w).unwrap();
        let base = e(watts, rate, days);
        prop_assert!(rel_eq(e(2.0 * watts, rate, days), 2.0 * base, 1e-12));
        prop_assert!(rel_eq(e(watts, 2.0 * rate, days), 2.0 * base, 1e-12));
        prop_assert!(rel_eq(e(watts, rate, 2.0 * days), 2.0 * base, 1e-12));
    }

    #[test]
    fn breakdown_shares_sum_to_one(spec in purifier(0), m in mode(), rate in 0.05f64..0.5, days in 0.0f64..365.0) {
        let ctx = context(m, rate, days);
        let r = pcy(&spec, &ctx).unwrap();
        match pcy_breakdown(&r, &spec, &ctx) {
            Ok(s) => {
                prop_assert!((s.initial + s.maintenance + s.electricity - 1.0).abs() <= 1e-9);
                for share in [s.initial, s.maintenance, s.electricity] {
                    prop_assert!((0.0..=1.0).contains(&share));
                }
            }
            Err(_) => prop_assert!(spec.initial_cost_usd == 0.0 && r.maintenance_usd_per_year == 0.0 && r.electricity_usd_per_year == 0.0),
        }
    }

    #[test]
    fn pcy_total_is_components_times_multiplier(spec in purifier(0), m in mode(), rate in 0.05f64..0.5, days in 0.0f64..365.0) {
        let r = pcy(&spec, &context(m, rate, days)).unwrap();
        let recomposed = (r.initial_component_usd + r.maintenance_usd_per_year + r.electricity_usd_per_year) * r.normalization_multiplier;
        prop_assert_eq!(r.total_usd_per_year, recomposed);
    }

    #[test]
    fn summarize_matches_naive(values in prop::collection::vec(-1e4f64..1e4, 1..60)) {
        let s = summarize(&values).unwrap();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        prop_assert_eq!(s.n, values.len());
        prop_assert!((s.mean - mean).abs() <= 1e-9 * mean.abs().max(1.0));
        prop_assert_eq!(s.median, naive_median(&values));
        prop_assert!((s.stddev - var.sqrt()).abs() <= 1e-9 * var.sqrt().max(1.0));
        prop_assert!(s.cv.is_none_or(|cv| cv >= 0.0));
        if values.len() % 2 == 1 {
            prop_assert!(values.contains(&s.median));
        }
    }

    #[test]
    fn ols_matches_normal_equations(points in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 2..40)) {
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
        // Closed form via raw sums.
        let n = xs.len() as f64;
        let (sx, sy) = (xs.iter().sum::<f64>(), ys.iter().sum::<f64>());
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let denom = n * sxx - sx * sx;
        prop_assume!(denom.abs() > 1e-6 * n * sxx.max(1.0));
        let slope = (n * sxy - sx * sy) / denom;
        let intercept = (sy - slope * sx) / n;
        let fit = ols_fit(&xs, &ys).unwrap();
        prop_assert!((fit.slope - slope).abs() <= 1e-6 * slope.abs().max(1.0));
        prop_assert!((fit.intercept - intercept).abs() <= 1e-6 * intercept.abs().max(1.0) * 10.0);
        prop_assert!((0.0..=1.0).contains(&fit.r_squared));
    }

    #[test]
    fn ols_recovers_exact_lines(a in -50.0f64..50.0, b in -500.0f64..500.0, xs in prop::collection::vec(-100.0f64..100.0, 3..30)) {
        prop_assume!(xs.iter().any(|x| (x - xs[0]).abs() > 1e-3));
        let ys: Vec<f64> = xs.iter().map(|x| a * x + b).collect();
        let fit = ols_fit(&xs, &ys).unwrap();
        prop_assert!((fit.slope - a).abs() <= 1e-9 * a.abs().max(1.0));
        prop_assert!((fit.intercept - b).abs() <= 1e-9 * b.abs().max(1.0));
        prop_assert!((fit.r_squared - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn threshold_counts_partition(values in prop::collection::vec(0.0f64..5000.0, 0..80), threshold in 0.0f64..5000.0) {
        let ids: Vec<String> = (0..values.len()).map(|i| i.to_string()).collect();
        let r = threshold_report(ids.iter().map(String::as_str).zip(values.iter().copied()), threshold);
        prop_assert_eq!(r.n_below + r.n_above, values.len());
        prop_assert_eq!(r.n_below, values.iter().filter(|v| **v < threshold).count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ranking_is_sorted_permutation(cat in catalog(25), m in mode(), rate in 0.05f64..0.5, days in 0.0f64..365.0) {
        let r = rank_by_pcy(&cat, &context(m, rate, days)).unwrap();
        prop_assert!(r.errors.is_empty());
        let mut ids: Vec<&str> = r.ranked.iter().map(|u| u.id.as_str()).collect();
        for w in r.ranked.windows(2) {
            prop_assert!(w[0].result.total_usd_per_year <= w[1].result.total_usd_per_year);
        }
        ids.sort();
        let mut expected: Vec<&str> = cat.units().iter().map(|u| u.id.as_str()).collect();
        expected.sort();
        prop_assert_eq!(ids, expected);
    }

    #[test]
    fn scaling_days_preserves_compat_ranking(cat in catalog(25), rate in 0.05f64..0.5, days in 1.0f64..365.0, k in 0.05f64..1.0) {
        let a = rank_by_pcy(&cat, &context(InitialCostMode::Table5Compat, rate, days)).unwrap();
        let b = rank_by_pcy(&cat, &context(InitialCostMode::Table5Compat, rate, days * k)).unwrap();
        for (x, y) in a.ranked.iter().zip(&b.ranked) {
            prop_assert!(rel_eq(y.result.total_usd_per_year, k * x.result.total_usd_per_year, 1e-9));
        }
        // The order under the scaled schedule is also nondecreasing under the
        // original one, up to floating ties.
        let original: std::collections::HashMap<&str, f64> =
            a.ranked.iter().map(|u| (u.id.as_str(), u.result.total_usd_per_year)).collect();
        for w in b.ranked.windows(2) {
            let (x, y) = (original[w[0].id.as_str()], original[w[1].id.as_str()]);
            prop_assert!(x <= y || rel_eq(x, y, 1e-9));
        }
    }

    #[test]
    fn catalog_round_trips(cat in catalog(20)) {
        let text = serialize_catalog(&cat);
        let (back, report) = parse_catalog(&text).unwrap();
        prop_assert!(report.is_clean(), "{:?}", report);
        prop_assert_eq!(back, cat);
    }

    #[test]
    fn parsers_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
        let _ = parse_catalog(&bytes);
        let _ = parse_rates(&bytes);
        let _ = parse_aqi(&bytes);
    }

    #[test]
    fn parsers_never_panic_with_valid_headers(body in "[-a-z0-9.,\"\n ]{0,300}") {
        let _ = parse_catalog(format!("{}\n{body}", pcy_core::ingest::CATALOG_COLUMNS.join(",")));
        let _ = parse_rates(format!("region,usd_per_kwh\n{body}"));
        let _ = parse_aqi(format!("region,date,aqi\n{body}"));
        let _ = parse_aqi(format!("region,days_over_100\n{body}"));
    }
}

#[test]
fn shipped_catalog_round_trips_and_loads_idempotently() {
    let (first, _) = parse_catalog(TABLE5_CATALOG_CSV).unwrap();
    let (second, _) = parse_catalog(TABLE5_CATALOG_CSV).unwrap();
    assert_eq!(first, second);
    let (back, report) = parse_catalog(serialize_catalog(&first)).unwrap();
    assert!(report.is_clean());
    assert_eq!(back, first);
}
