mod cli;
mod commands;
mod config;
mod error;
mod manifest;
mod output;
mod suites;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use cli::{Cli, Command, Format};
use config::{load_config, Settings};
use error::CliError;
use manifest::RunManifest;

fn run(cli: Cli) -> Result<i32, CliError> {
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => Default::default(),
    };
    let mut settings = Settings::new(file);
    let seed: u64 = settings.with_default("seed", cli.seed, 0)?;
    let format = match cli.format {
        Some(f) => f,
        None => match settings.raw("format") {
            Some("csv") => Format::Csv,
            Some("json") | None => Format::Json,
            Some(other) => return Err(CliError::Usage(format!("config value for 'format' is invalid: {other}"))),
        },
    };
    settings.resolved.remove("seed");

    let (name, outcome) = match &cli.command {
        Command::Constant(a) => ("constant", commands::constant(a, &mut settings)?),
        Command::Optimize(a) => ("optimize", commands::optimize(a, &mut settings)?),
        Command::Rayleigh(a) => ("rayleigh", commands::rayleigh(a, &mut settings)?),
        Command::Verify(a) => ("verify", commands::verify(a, &mut settings, seed)?),
        Command::Ckn(a) => ("ckn", commands::ckn(a, &mut settings)?),
        Command::Report(a) => ("report", commands::report(a, &mut settings, seed, cli.quiet)?),
    };
    let manifest = RunManifest::new(name, settings.resolved, seed, cli.timestamp.clone());

    let text = match format {
        Format::Json => {
            let doc = json!({ "manifest": manifest, "passed": outcome.passed, "result": outcome.result });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serialisable output"))
        }
        Format::Csv => {
            let mut text = format!("# command={}\n# seed={}\n# tool_version={}\n# timestamp={}\n", manifest.command, manifest.seed, manifest.tool_version, manifest.timestamp);
            for (k, v) in &manifest.params {
                text.push_str(&format!("# param.{k}={v}\n"));
            }
            match outcome.tables.len() {
                0 => text.push_str(&output::key_value_csv(&json!({ "passed": outcome.passed, "result": outcome.result }))),
                1 => text.push_str(&output::table_csv(&outcome.tables[0])),
                _ => {
                    for t in &outcome.tables {
                        text.push_str(&format!("# table={}\n", t.name));
                        text.push_str(&output::table_csv(t));
                    }
                }
            }
            text
        }
    };
    // A closed downstream pipe is not an error of the run.
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
        _ => {}
    }
    Ok(outcome.exit_code.unwrap_or(if outcome.passed { 0 } else { 1 }))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let quiet = cli.quiet;
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            if !quiet || e.exit_code() == 2 {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
