//! Experiment configs and their flat `key = value` file format.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use dslab_core::rational::{self, Rational};

use crate::CliError;

/// Keys handled by the runner rather than by a subcommand.
pub const RESERVED: [&str; 5] = ["command", "output", "workers", "seed", "csv"];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: u64,
    pub csv: bool,
}

impl ExperimentConfig {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Parses the file format: one `key = value` per line, `#` starts a
    /// comment, blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key", i + 1)));
            }
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |what: &str| CliError::Config(format!("`{key}`: {what} `{value}`"));
        match key {
            "command" => self.command = value.to_string(),
            "output" => self.output = Some(PathBuf::from(value)),
            "workers" => {
                let w: usize = value.parse().map_err(|_| bad("expected a positive integer, got"))?;
                if w == 0 {
                    return Err(bad("worker count must be positive, got"));
                }
                self.workers = Some(w);
            }
            "seed" => self.seed = value.parse().map_err(|_| bad("expected an unsigned integer, got"))?,
            "csv" => self.csv = parse_bool(value).ok_or_else(|| bad("expected true or false, got"))?,
            _ => {
                self.params.insert(key.to_string(), value.to_string());
            }
        }
        Ok(())
    }

    /// Inverse of [`ExperimentConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("command = {}\n", self.command);
        if let Some(o) = &self.output {
            out.push_str(&format!("output = {}\n", o.display()));
        }
        if let Some(w) = self.workers {
            out.push_str(&format!("workers = {w}\n"));
        }
        out.push_str(&format!("seed = {}\ncsv = {}\n", self.seed, self.csv));
        for (k, v) in &self.params {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn required(&self, key: &str) -> Result<&str, CliError> {
        self.raw(key)
            .ok_or_else(|| CliError::Usage(format!("`{}` needs --{key}", self.command)))
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.raw(key) {
            Some(v) => parse_value(key, v),
            None => Ok(default),
        }
    }

    pub fn need<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        parse_value(key, self.required(key)?)
    }

    pub fn rational(&self, key: &str, default: Option<&str>) -> Result<Rational, CliError> {
        let v = match (self.raw(key), default) {
            (Some(v), _) | (None, Some(v)) => v,
            (None, None) => self.required(key)?,
        };
        rational::parse(v).map_err(|e| CliError::Usage(format!("--{key}: {e}")))
    }

    /// A float given either in decimal or as `p/q`.
    pub fn real(&self, key: &str, default: Option<f64>) -> Result<f64, CliError> {
        match (self.raw(key), default) {
            (Some(v), _) => parse_real(key, v),
            (None, Some(d)) => Ok(d),
            (None, None) => parse_real(key, self.required(key)?),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.raw(key) {
            None => Ok(false),
            Some(v) => parse_bool(v).ok_or_else(|| CliError::Usage(format!("--{key}: expected true or false, got `{v}`"))),
        }
    }

    /// Comma-separated list.
    pub fn list<T: FromStr>(&self, key: &str, default: &str) -> Result<Vec<T>, CliError> {
        self.raw(key)
            .unwrap_or(default)
            .split(',')
            .map(|s| parse_value(key, s.trim()))
            .collect()
    }
}

fn parse_value<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Usage(format!("--{key}: cannot parse `{v}`")))
}

fn parse_real(key: &str, v: &str) -> Result<f64, CliError> {
    v.parse::<f64>()
        .ok()
        .or_else(|| rational::parse(v).ok().map(|r| rational::to_f64(&r)))
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::Usage(format!("--{key}: cannot parse `{v}`")))
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "1" | "yes" => Some(true),
        "false" | "0" | "no" => Some(false),
        _ => None,
    }
}
