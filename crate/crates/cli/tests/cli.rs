use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn pcy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcy"))
        .args(args)
        .env_remove("PCY_DATA_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(o: &Output) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn prices_a_named_unit() {
    let o = pcy(&["pcy", "--region", "CA", "--days", "365", "--mode", "table5", "Coway Airmega 250"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&pcy(&["pcy", "--region", "CA", "--days", "365", "--mode", "table5", "Coway Airmega 250", "--format", "csv"]));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][2], "1155.77");
    assert!(stdout(&o).contains("1155.77"));
}

#[test]
fn zero_days_costs_nothing_in_table5_mode() {
    let o = pcy(&["pcy", "--days", "0", "--mode", "table5", "coway-airmega-250", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(&o)[0][2], "0.00");
}

#[test]
fn unknown_unit_is_partial() {
    let o = pcy(&["pcy", "--mode", "table5", "Coway Airmega 250", "No Such Unit", "99", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("\"No Such Unit\"") && err.contains("\"99\""), "{err}");
    assert_eq!(csv_rows(&o).len(), 1);
}

#[test]
fn fatal_errors_exit_one() {
    assert_eq!(pcy(&["pcy", "--region", "Atlantis", "1"]).status.code(), Some(1));
    assert_eq!(pcy(&["pcy", "--region", "CA", "--rate", "0.2", "1"]).status.code(), Some(1));
    assert_eq!(pcy(&["pcy", "--days", "400", "1"]).status.code(), Some(1));
    assert_eq!(pcy(&["rank", "--format", "xml"]).status.code(), Some(1));
    assert_eq!(pcy(&["rank", "--data-dir", "/nonexistent"]).status.code(), Some(1));
    assert_eq!(pcy(&["--help"]).status.code(), Some(0));
}

#[test]
fn rank_puts_medify_first() {
    let o = pcy(&["rank", "--region", "CA", "--top", "5", "--mode", "table5", "--format", "csv"]);
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][1], "Medify MA-112");
    assert_eq!(rows[0][3], "661.00");
    let human = stdout(&pcy(&["rank", "--mode", "table5"]));
    assert!(human.contains("36 of 53 units below $1990.00"), "{human}");
}

#[test]
fn breakdown_shares() {
    let rows = csv_rows(&pcy(&["breakdown", "Coway Airmega 250", "--format", "csv"]));
    assert_eq!(rows[0][2], "14.47%");
    let all = csv_rows(&pcy(&["breakdown", "--format", "csv"]));
    assert_eq!(all.len(), 53);
    for row in all {
        let sum: f64 = row[2..].iter().map(|s| s.trim_end_matches('%').parse::<f64>().unwrap()).sum();
        assert!((sum - 100.0).abs() <= 0.015, "{row:?}");
    }
}

#[test]
fn sweep_medians_match_rescaled_printed_columns() {
    let rates = data_dir().join("rates.csv");
    let o = pcy(&["sweep", "--rates", rates.to_str().unwrap(), "--mode", "table5", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let printed = fs::read_to_string(data_dir().join("table5_printed.csv")).unwrap();
    let columns: Vec<(f64, f64, f64)> = printed
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').skip(1).map(|c| c.parse().unwrap()).collect();
            (f[1], f[2], f[3])
        })
        .collect();
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 12);
    for row in rows {
        let rate: f64 = row[2].parse().unwrap();
        let mut v: Vec<f64> = columns
            .iter()
            .map(|(filter, elec, area)| (filter / 10.0 + elec / 10.0 * rate / 0.251) * 2500.0 / area)
            .collect();
        v.sort_by(f64::total_cmp);
        let median = v[v.len() / 2];
        let got: f64 = row[3].parse().unwrap();
        assert!((got - median).abs() <= 0.02, "{}: {got} vs {median}", row[0]);
    }
}

#[test]
fn whatif_renormalizes_to_home_size() {
    let o = pcy(&["whatif", "--home-sqft", "1200", "--region", "TX", "--days", "90", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let catalog = fs::read_to_string(data_dir().join("table5_catalog.csv")).unwrap();
    let rows = csv_rows(&o);
    assert_eq!(rows.len(), 53);
    for row in rows {
        let line = catalog.lines().find(|l| {
            let f: Vec<&str> = l.split(',').collect();
            format!("{} {}", f[1], f[2]) == row[1]
        });
        let cadr: f64 = line.unwrap().split(',').nth(4).unwrap().parse().unwrap();
        assert_eq!(row[5], format!("{:.4}", 1200.0 / (cadr * 1.5)));
    }
}

#[test]
fn calendar_sets_operating_days() {
    let by_name = stdout(&pcy(&["pcy", "--calendar", "Los Angeles (implied)", "--mode", "table5", "1"]));
    assert!(by_name.contains("57 days"), "{by_name}");
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("cal.csv");
    fs::write(&file, "region,date,aqi\nX,2021-01-01,150\nX,2021-01-02,101\nX,2021-01-03,100\n").unwrap();
    let o = pcy(&["pcy", "--calendar", file.to_str().unwrap(), "1"]);
    assert!(stdout(&o).contains("2 days (X calendar)"), "{}", stdout(&o));
}

#[test]
fn reproduce_shipped_data() {
    let o = pcy(&["reproduce"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().filter(|l| l.split_once(" ").is_some_and(|(_, rest)| rest.starts_with("row "))).collect();
    assert_eq!(rows.len(), 53);
    assert!(rows.iter().all(|l| l.starts_with("REPRODUCED")));
    assert!(out.contains("spec-formula 1351.25 (+195.48)"), "{out}");
    assert!(out.contains("median PCY (table5 mode): computed 1673.22 vs published 1607.52"));
}

#[test]
fn perturbed_row_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["rates.csv", "aqi_implied_counties.csv"] {
        fs::copy(data_dir().join(f), dir.path().join(f)).unwrap();
    }
    let catalog = fs::read_to_string(data_dir().join("table5_catalog.csv")).unwrap();
    let perturbed: Vec<String> = catalog
        .lines()
        .map(|l| {
            if l.starts_with("winix-am90,") {
                let (head, pcy) = l.rsplit_once(',').unwrap();
                format!("{head},{:.2}", pcy.parse::<f64>().unwrap() + 1.0)
            } else {
                l.to_string()
            }
        })
        .collect();
    fs::write(dir.path().join("table5_catalog.csv"), perturbed.join("\n") + "\n").unwrap();

    let o = Command::new(env!("CARGO_BIN_EXE_pcy"))
        .args(["reproduce", "--format", "csv"])
        .env("PCY_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = csv_rows(&o);
    let bad: Vec<&Vec<String>> = rows.iter().filter(|r| r[1].starts_with("row ") && r[0] == "DISCREPANCY").collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0][1], "row Winix AM90");
}

#[test]
fn rejected_rows_make_the_run_partial() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(data_dir().join("rates.csv"), dir.path().join("rates.csv")).unwrap();
    let catalog = fs::read_to_string(data_dir().join("table5_catalog.csv")).unwrap();
    fs::write(dir.path().join("table5_catalog.csv"), catalog + "broken,Brand,Model,-5,100,10,,,1,,\n").unwrap();
    let o = pcy(&["rank", "--data-dir", dir.path().to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":55: rejected"), "{}", stderr(&o));
    assert_eq!(csv_rows(&o).len(), 53);
}

#[test]
fn machine_output_is_byte_stable() {
    for args in [
        &["rank", "--format", "json"][..],
        &["rank", "--format", "csv", "--mode", "table5"],
        &["sweep", "--format", "json"],
        &["reproduce", "--format", "json"],
        &["whatif", "--format", "csv", "--rate", "0.2", "--days", "30"],
        &["breakdown", "--format", "json"],
    ] {
        let a = pcy(args);
        let b = pcy(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        if args.contains(&"json") {
            serde_json::from_slice::<serde_json::Value>(&a.stdout).unwrap();
        }
    }
}

#[test]
fn serve_answers_http() {
    use std::io::{BufRead, BufReader, Read, Write};
    use std::net::TcpStream;
    use std::process::Stdio;

    let mut child = Command::new(env!("CARGO_BIN_EXE_pcy"))
        .args(["serve", "--port", "0"])
        .env_remove("PCY_DATA_DIR")
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut line = String::new();
    BufReader::new(child.stderr.take().unwrap()).read_line(&mut line).unwrap();
    let addr = line.trim().rsplit("http://").next().unwrap().to_string();

    let body = r#"{"region":"CA","days":365,"mode":"table5","unit_ids":["1"]}"#;
    let mut stream = TcpStream::connect(&addr).unwrap();
    write!(
        stream,
        "POST /api/rank HTTP/1.1\r\nHost: {addr}\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    )
    .unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();

    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    assert!(response.contains(r#""total_usd_per_year":"1155.77""#), "{response}");
}
