use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use clap::{Arg, ArgAction, ArgMatches};
use serde_json::json;

use sophase_cli::config::{normalize_key, parse_config_file, Command};
use sophase_cli::{validate, Failure, RunConfig};

const SWITCHES: [&str; 2] = ["along-orbit", "check-reduction"];

fn cli() -> clap::Command {
    let mut keys: Vec<&str> = Command::ALL.iter().flat_map(|c| c.keys()).collect();
    keys.extend(["output", "format"]);
    keys.sort_unstable();
    keys.dedup();
    let commands: Vec<&str> = Command::ALL.iter().map(|c| c.name()).collect();
    let mut app = clap::Command::new("sophase")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Phase-space and Bohmian datasets for the quantum singular oscillator")
        .after_help(format!("Commands: {}", commands.join(", ")))
        .arg(Arg::new("command").help("Command to run (may also come from the config file)"))
        .arg(
            Arg::new("config")
                .long("config")
                .help("Flat key = value file; flags override it"),
        )
        .arg(
            Arg::new("threads")
                .long("threads")
                .help("Worker threads (default: all cores)"),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .help("Seed for ensemble sampling"),
        )
        .arg(
            Arg::new("validate")
                .long("validate")
                .action(ArgAction::SetTrue)
                .help("Only check the configuration and print diagnostics"),
        );
    for key in keys {
        let mut arg = Arg::new(key).long(key);
        // values may be negative numbers; switches must not swallow the next flag
        if SWITCHES.contains(&key) {
            arg = arg.num_args(0..=1).default_missing_value("true");
        } else {
            arg = arg.allow_hyphen_values(true);
        }
        app = app.arg(arg);
    }
    app
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", f.to_json());
    ExitCode::from(f.exit_code() as u8)
}

fn invalid(field: &str, message: String) -> ExitCode {
    fail(&Failure::Invalid(vec![sophase_cli::Diagnostic::new(
        field, message, "cli",
    )]))
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ")
                .to_string();
            return invalid("arguments", first);
        }
    };
    let mut params = BTreeMap::new();
    if let Some(path) = matches.get_one::<String>("config") {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return invalid("config", format!("{path}: {e}")),
        };
        match parse_config_file(&text) {
            Ok(p) => params = p,
            Err(d) => return fail(&Failure::Invalid(vec![d])),
        }
    }
    overlay(&matches, &mut params);

    let Some(name) = params.remove("command") else {
        return invalid("command", "no command given".into());
    };
    let Some(command) = Command::parse(&name) else {
        return invalid("command", format!("unknown command {name:?}"));
    };
    let seed = match params.remove("seed").map(|s| s.parse::<u64>()) {
        None => 0,
        Some(Ok(s)) => s,
        Some(Err(_)) => return invalid("seed", "expected a nonnegative integer".into()),
    };
    if let Some(t) = params.remove("threads") {
        match t.parse::<usize>() {
            Ok(n) if n > 0 => {
                // only fails if a pool already exists, which cannot happen here
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => return invalid("threads", "expected a positive integer".into()),
        }
    }
    let config = RunConfig {
        command,
        params,
        seed,
    };

    if matches.get_flag("validate") {
        let diags = validate(&config);
        println!(
            "{}",
            json!({ "command": command.name(), "diagnostics": diags })
        );
        return if diags.is_empty() {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        };
    }
    match sophase_cli::run(&config) {
        Ok(report) => {
            println!("{}", report.summary);
            ExitCode::SUCCESS
        }
        Err(f) => fail(&f),
    }
}

/// Flags (and the positional command) on top of file values.
fn overlay(matches: &ArgMatches, params: &mut BTreeMap<String, String>) {
    for id in matches.ids() {
        let id = id.as_str();
        if matches!(id, "config" | "validate") {
            continue;
        }
        if let Ok(Some(v)) = matches.try_get_one::<String>(id) {
            params.insert(normalize_key(id), v.clone());
        }
    }
}
