//! `pcy`: purification cost per year from the command line.
//!
//! Exit codes: 0 success, 1 fatal error, 2 partial result (unknown unit ids,
//! rejected data rows, units the engine could not price).

mod commands;
mod data;
mod render;

use std::io::{self, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::{Outcome, Scenario, SweepArgs};
use data::Data;
use render::OutputFormat;

#[derive(Debug, Parser)]
#[command(name = "pcy", version, about = "Air purifier cost of ownership, normalized to a whole home")]
struct Cli {
    /// Directory holding table5_catalog.csv, rates.csv and optionally
    /// aqi_implied_counties.csv [default: built-in data]
    #[arg(long, global = true, env = "PCY_DATA_DIR")]
    data_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Price the given units (id, "Brand Model" or 1-based position)
    #[command(alias = "cost")]
    Pcy {
        #[arg(required = true)]
        units: Vec<String>,
        #[command(flatten)]
        scenario: Scenario,
    },
    /// Rank the whole catalog by PCY, cheapest first
    Rank {
        #[command(flatten)]
        scenario: Scenario,
        #[arg(long)]
        top: Option<usize>,
    },
    /// Split each unit's annual cost into purchase, filter and electricity
    Breakdown {
        /// Units to show [default: all]
        units: Vec<String>,
        #[command(flatten)]
        scenario: Scenario,
    },
    /// Re-run the catalog at every rate in a rate table
    Sweep(SweepArgs),
    /// Rank under a scenario and compare with continuous use at the reference rate
    Whatif {
        /// Units to include [default: all]
        units: Vec<String>,
        #[command(flatten)]
        scenario: Scenario,
        #[arg(long)]
        top: Option<usize>,
    },
    /// Check the loaded data against the published figures
    Reproduce {
        /// Extra AQI calendar file to count threshold crossings for
        #[arg(long)]
        calendar: Option<PathBuf>,
    },
    /// Serve the HTTP API
    Serve {
        #[arg(long, env = "PCY_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

fn run(cli: Cli) -> Result<bool> {
    let data = Data::load(cli.data_dir.as_ref())?;
    for w in &data.warnings {
        eprintln!("warning: {w}");
    }
    let outcome: Outcome = match &cli.command {
        Command::Pcy { units, scenario } => commands::cmd_pcy(&data, units, scenario)?,
        Command::Rank { scenario, top } => commands::cmd_rank(&data, scenario, *top)?,
        Command::Breakdown { units, scenario } => commands::cmd_breakdown(&data, units, scenario)?,
        Command::Sweep(args) => commands::cmd_sweep(&data, args)?,
        Command::Whatif { units, scenario, top } => commands::cmd_whatif(&data, units, scenario, *top)?,
        Command::Reproduce { calendar } => commands::cmd_reproduce(&data, calendar.as_deref())?,
        Command::Serve { port, host } => {
            let state = pcy_service::AppState::new(data.catalog, data.rates, data.calendars);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(pcy_service::serve(SocketAddr::new(*host, *port), state))?;
            return Ok(true);
        }
    };
    let mut out = io::stdout().lock();
    outcome.table.write(cli.format, &mut out)?;
    out.flush()?;
    Ok(!outcome.partial && data.warnings.is_empty())
}

fn main() -> ExitCode {
    // Usage errors are fatal (1); clap's own code 2 means "partial" here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
