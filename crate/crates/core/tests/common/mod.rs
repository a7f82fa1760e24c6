#![allow(dead_code)]

use pcy_core::datasets::TABLE5_PRINTED_CSV;

/// One row of the published table, exactly as printed.
#[derive(Debug, Clone)]
pub struct PrintedRow {
    pub product: String,
    pub initial_cost_usd: f64,
    pub lifetime_filter_usd: f64,
    pub lifetime_elec_usd: f64,
    pub a_optimal_sqft: f64,
    pub pcy_usd: f64,
}

pub fn printed_rows() -> Vec<PrintedRow> {
    let mut reader = csv::Reader::from_reader(TABLE5_PRINTED_CSV.as_bytes());
    reader
        .records()
        .map(|r| {
            let r = r.expect("transcription is well-formed");
            let num = |i: usize| r[i].parse::<f64>().expect("numeric cell");
            PrintedRow {
                product: r[0].to_string(),
                initial_cost_usd: num(1),
                lifetime_filter_usd: num(2),
                lifetime_elec_usd: num(3),
                a_optimal_sqft: num(4),
                pcy_usd: num(5),
            }
        })
        .collect()
}

/// PCY straight from the printed lifetime columns, omitting purchase price.
pub fn printed_compat_pcy(row: &PrintedRow) -> f64 {
    (row.lifetime_filter_usd + row.lifetime_elec_usd) / 10.0 * 2500.0 / row.a_optimal_sqft
}

/// Naive sorted-copy median.
pub fn naive_median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}
