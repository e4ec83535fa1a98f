mod args;
mod commands;
mod render;

use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, ReportFormat};
use commands::{CliError, Output};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn envelope(cli: &Cli, name: &str) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("tool_version".into(), json!(TOOL_VERSION));
    m.insert("command".into(), json!(name));
    m.insert("seed".into(), json!(cli.seed));
    m.insert("config_echo".into(), serde_json::to_value(cli).unwrap_or(Value::Null));
    m
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors and 0 for --help/--version
    let cli = Cli::parse();
    let name = commands::name(&cli.command);
    match commands::dispatch(&cli) {
        Ok(Output { report, text }) => {
            let mut m = envelope(&cli, name);
            m.insert("report".into(), report);
            match cli.report {
                ReportFormat::Json => println!("{}", Value::Object(m)),
                ReportFormat::Text => match text {
                    Some(t) => println!("{t}"),
                    None => print!("{}", render::text(&Value::Object(m))),
                },
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let mut m = envelope(&cli, name);
            m.insert("error".into(), json!(e.kind()));
            m.insert("message".into(), json!(e.to_string()));
            match cli.report {
                ReportFormat::Json => println!("{}", Value::Object(m)),
                ReportFormat::Text => eprintln!("error[{}]: {e}", e.kind()),
            }
            ExitCode::from(1)
        }
    }
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Io { .. } => "Io",
        }
    }
}
