//! Flat `key = value` configuration text.
//!
//! * one entry per line, `#` starts a comment
//! * keys carry their unit as a suffix (`omega_trap_2pi_khz`, `g_over_wc`)
//! * an optional `format_version = 1` line pins the format
//! * unknown and duplicate keys are rejected; every error carries its line

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
const VERSION_KEY: &str = "format_version";

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    line: usize,
    value: String,
}

/// Parsed configuration restricted to a known key set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
}

impl Config {
    pub fn parse(text: &str, allowed: &[&str]) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Config {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() || value.is_empty() {
                return Err(Error::Config { line, message: "empty key or value".into() });
            }
            if key == VERSION_KEY {
                let v: u32 = value.parse().map_err(|_| Error::Config {
                    line,
                    message: format!("bad format version `{value}`"),
                })?;
                if v != FORMAT_VERSION {
                    return Err(Error::Config { line, message: format!("unsupported format version {v}") });
                }
                continue;
            }
            if !allowed.contains(&key) {
                return Err(Error::Config { line, message: format!("unknown key `{key}`") });
            }
            if let Some(prev) = entries.get(key) {
                let prev: &Entry = prev;
                return Err(Error::Config {
                    line,
                    message: format!("duplicate key `{key}` (first set on line {})", prev.line),
                });
            }
            entries.insert(key.to_string(), Entry { line, value: value.to_string() });
        }
        Ok(Config { entries })
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |e| e.line)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    fn parse_with<T>(&self, key: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Option<T>> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => f(&e.value).map(Some).ok_or_else(|| Error::Config {
                line: e.line,
                message: format!("`{key}` expects {what}, got `{}`", e.value),
            }),
        }
    }

    pub fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.parse_with(key, "a finite number", |s| s.parse::<f64>().ok().filter(|x| x.is_finite()))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    pub fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.parse_with(key, "a nonnegative integer", |s| s.parse::<usize>().ok())
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.usize(key)?.unwrap_or(default))
    }

    /// Comma-separated list of numbers.
    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.parse_with(key, "a comma-separated list of numbers", |s| {
            s.split(',')
                .map(|t| t.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect()
        })
    }

    pub fn usize_list(&self, key: &str) -> Result<Option<Vec<usize>>> {
        self.parse_with(key, "a comma-separated list of integers", |s| {
            s.split(',').map(|t| t.trim().parse::<usize>().ok()).collect()
        })
    }

    pub fn string(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    /// Error pinned to the line where `key` was set.
    pub fn error(&self, key: &str, message: impl Into<String>) -> Error {
        Error::Config { line: self.line_of(key), message: message.into() }
    }
}

/// Render `(key, value)` pairs in the config format, with a version line.
pub fn render(pairs: &[(&str, String)]) -> String {
    let mut out = format!("{VERSION_KEY} = {FORMAT_VERSION}\n");
    for (k, v) in pairs {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const KEYS: &[&str] = &["omega_q_over_wc", "n_spins", "g_values_over_wc"];

    #[test]
    fn parses_values_and_comments() {
        let text = "# header\nformat_version = 1\nomega_q_over_wc = 0.015  # trailing\n\nn_spins=50\ng_values_over_wc = 0.1, 0.2,0.3\n";
        let c = Config::parse(text, KEYS).unwrap();
        assert_eq!(c.f64("omega_q_over_wc").unwrap(), Some(0.015));
        assert_eq!(c.usize("n_spins").unwrap(), Some(50));
        assert_eq!(c.f64_list("g_values_over_wc").unwrap(), Some(vec![0.1, 0.2, 0.3]));
        assert_eq!(c.line_of("n_spins"), 5);
    }

    #[test]
    fn unknown_key_reports_line() {
        let err = Config::parse("n_spins = 3\nomega_q = 0.1\n", KEYS).unwrap_err();
        assert_eq!(err, Error::Config { line: 2, message: "unknown key `omega_q`".into() });
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(Config::parse("n_spins\n", KEYS), Err(Error::Config { line: 1, .. })));
        assert!(matches!(
            Config::parse("n_spins = 1\nn_spins = 2\n", KEYS),
            Err(Error::Config { line: 2, .. })
        ));
        assert!(matches!(Config::parse("format_version = 7\n", KEYS), Err(Error::Config { line: 1, .. })));
        let c = Config::parse("\n\nn_spins = -4\n", KEYS).unwrap();
        assert!(matches!(c.usize("n_spins"), Err(Error::Config { line: 3, .. })));
        let c = Config::parse("omega_q_over_wc = nan\n", KEYS).unwrap();
        assert!(c.f64("omega_q_over_wc").is_err());
    }

    #[test]
    fn render_round_trip() {
        let text = render(&[("n_spins", "8".into()), ("omega_q_over_wc", "0.015".into())]);
        let c = Config::parse(&text, KEYS).unwrap();
        assert_eq!(c.usize("n_spins").unwrap(), Some(8));
    }
}
