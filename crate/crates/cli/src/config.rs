//! Flat `key=value` config files merged under the command-line flags.

use std::ffi::OsString;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgMatches, CommandFactory};

use crate::args::Cli;

/// Why a config file could not be applied.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("config line {line}: expected key=value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("config key {key:?} is not an option of `{command}`")]
    UnknownKey { key: String, command: String },
}

/// Parses `key=value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse(text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            });
        };
        let key = k.trim().replace('_', "-");
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            });
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

/// Finds the value of `--config` in raw arguments.
fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Appends `--key value` for every config entry the command line leaves
/// unset. Unknown keys for the selected command are errors.
pub fn merge(argv: Vec<OsString>) -> Result<Vec<OsString>, ConfigError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path)).map_err(|source| ConfigError::Read {
        path: path.to_string_lossy().into_owned(),
        source,
    })?;
    let entries = parse(&text)?;
    // Lenient pass: only used to learn which flags were given explicitly.
    let Ok(m) = Cli::command()
        .ignore_errors(true)
        .try_get_matches_from(&argv)
    else {
        return Ok(argv);
    };
    let Some((name, sub)) = m.subcommand() else {
        return Ok(argv);
    };
    let cmd = Cli::command();
    let sub_cmd = cmd
        .find_subcommand(name)
        .expect("matched subcommand exists");
    let mut out = argv;
    for (key, value) in entries {
        let (arg, owner) = match sub_cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(key.as_str()))
        {
            Some(a) => (a, sub),
            None => match cmd
                .get_arguments()
                .find(|a| a.get_long() == Some(key.as_str()))
            {
                Some(a) => (a, &m),
                None => {
                    return Err(ConfigError::UnknownKey {
                        key,
                        command: name.to_string(),
                    })
                }
            },
        };
        if key == "config" || from_command_line(owner, arg.get_id().as_str()) {
            continue;
        }
        if arg.get_action().takes_values() {
            out.push(format!("--{key}").into());
            out.push(value.into());
        } else if value == "true" {
            out.push(format!("--{key}").into());
        }
    }
    Ok(out)
}

fn from_command_line(m: &ArgMatches, id: &str) -> bool {
    matches!(m.value_source(id), Some(ValueSource::CommandLine))
}

/// Every resolved option of the selected subcommand, in declaration order,
/// except those naming output locations or the config file itself.
pub fn resolved(m: &ArgMatches) -> Vec<(String, String)> {
    let Some((name, sub)) = m.subcommand() else {
        return Vec::new();
    };
    let cmd = Cli::command();
    let sub_cmd = cmd
        .find_subcommand(name)
        .expect("matched subcommand exists");
    let mut out = vec![("command".to_string(), name.to_string())];
    for arg in sub_cmd.get_arguments().chain(cmd.get_arguments()) {
        let id = arg.get_id().as_str();
        if matches!(id, "config" | "out" | "out_dir" | "help" | "version") {
            continue;
        }
        if let Ok(Some(vals)) = sub.try_get_raw(id) {
            let v: Vec<String> = vals.map(|v| v.to_string_lossy().into_owned()).collect();
            out.push((arg.get_long().unwrap_or(id).to_string(), v.join(",")));
        }
    }
    out
}
