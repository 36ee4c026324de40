//! The `dslab` command line: parameter schemas, config files and the runner.
//!
//! Exit status is 0 on success, 2 when an assertable invariant fails, and 1
//! on usage, config, I/O or computation errors. Nothing is written to the
//! output on an error.

use std::ffi::OsString;

use clap::parser::ValueSource;
use clap::ArgMatches;
use serde_json::{json, Value};

pub mod commands;
pub mod config;
pub mod output;
pub mod psi;
pub mod schema;

pub use config::ExperimentConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("{0}")]
    Compute(String),
}

pub const WORKERS_ENV: &str = "DSLAB_WORKERS";

fn is_tagged(m: &serde_json::Map<String, Value>) -> bool {
    (m.len() == 1 && m.contains_key("exact")) || (m.len() == 2 && m.contains_key("float") && m.contains_key("precision"))
}

/// Bare integers (indices, counts, seeds) become exact tags, so every number
/// in the stream reads the same way.
pub fn tag_numbers(v: &mut Value) {
    match v {
        Value::Number(n) => {
            *v = match n.as_u64().map(|u| u.to_string()).or_else(|| n.as_i64().map(|i| i.to_string())) {
                Some(i) => json!({ "exact": format!("{i}/1") }),
                None => dslab_core::report::float(n.as_f64().unwrap_or(f64::NAN)),
            }
        }
        Value::Array(items) => items.iter_mut().for_each(tag_numbers),
        Value::Object(m) if !is_tagged(m) => m.values_mut().for_each(tag_numbers),
        _ => {}
    }
}

#[derive(Debug)]
pub struct RunOutput {
    /// Handler records followed by the summary record.
    pub records: Vec<Value>,
    pub violated: bool,
}

fn check_keys(cfg: &ExperimentConfig) -> Result<&'static schema::Schema, CliError> {
    if cfg.command.is_empty() {
        return Err(CliError::Usage("no subcommand given (see --help)".into()));
    }
    let s = schema::find(&cfg.command).ok_or_else(|| CliError::Usage(format!("unknown subcommand `{}`", cfg.command)))?;
    for k in cfg.params.keys() {
        if !s.params.iter().any(|p| p.name == k) {
            return Err(CliError::Config(format!("`{}` takes no parameter `{k}`", s.name)));
        }
    }
    Ok(s)
}

fn workers(cfg: &ExperimentConfig) -> Result<usize, CliError> {
    if let Some(w) = cfg.workers {
        return Ok(w);
    }
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(w) if w > 0 => Ok(w),
            _ => Err(CliError::Config(format!("{WORKERS_ENV}: expected a positive integer, got `{v}`"))),
        },
        Err(_) => Ok(0),
    }
}

/// Runs a fully merged config. Worker count changes speed only; records are
/// produced in a fixed order.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    check_keys(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers(cfg)?)
        .build()
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let outcome = pool.install(|| commands::dispatch(cfg))?;
    let violated = !outcome.violations.is_empty();
    let mut summary = json!({
        "record": "summary",
        "command": cfg.command,
        "status": if violated { "violation" } else { "ok" },
        "seed": cfg.seed,
        "records": outcome.records.len(),
        "violations": outcome.violations,
    });
    for (k, v) in outcome.summary {
        summary[k] = v;
    }
    let mut records = outcome.records;
    records.push(summary);
    records.iter_mut().for_each(tag_numbers);
    Ok(RunOutput { records, violated })
}

pub fn render(cfg: &ExperimentConfig, out: &RunOutput) -> Result<String, CliError> {
    if cfg.csv {
        output::csv(&out.records)
    } else {
        Ok(output::jsonl(&out.records))
    }
}

fn given(m: &ArgMatches, id: &str) -> bool {
    m.value_source(id) == Some(ValueSource::CommandLine)
}

fn from_cli(m: &ArgMatches, id: &str) -> Option<String> {
    given(m, id).then(|| m.get_one::<String>(id).cloned()).flatten()
}

/// Config file first, then every flag given explicitly on the command line.
pub fn merge(top: &ArgMatches) -> Result<ExperimentConfig, CliError> {
    let sub = top.subcommand();
    let global = |id: &str| sub.and_then(|(_, m)| from_cli(m, id)).or_else(|| from_cli(top, id));
    let mut cfg = match global("config") {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
            ExperimentConfig::parse(&text)?
        }
        None => ExperimentConfig::default(),
    };
    for key in ["output", "workers", "seed"] {
        if let Some(v) = global(key) {
            cfg.set(key, &v)?;
        }
    }
    if given(top, "csv") || sub.is_some_and(|(_, m)| given(m, "csv")) {
        cfg.csv = true;
    }
    if let Some((name, m)) = sub {
        cfg.command = name.to_string();
        let s = schema::find(name).expect("subcommands come from the schema table");
        for p in s.params {
            if p.flag {
                if given(m, p.name) {
                    cfg.set(p.name, "true")?;
                }
            } else if let Some(v) = from_cli(m, p.name) {
                cfg.set(p.name, &v)?;
            }
        }
    }
    Ok(cfg)
}

fn execute(top: &ArgMatches) -> Result<bool, CliError> {
    let cfg = merge(top)?;
    let out = run(&cfg)?;
    let text = render(&cfg, &out)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            use std::io::Write;
            std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(out.violated)
}

/// Entry point of the binary; returns the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let top = match schema::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&top) {
        Ok(false) => 0,
        Ok(true) => 2,
        Err(e) => {
            eprintln!("dslab: error: {e}");
            1
        }
    }
}
