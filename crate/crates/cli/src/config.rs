use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::CliError;

/// Keys accepted in a config file; the same names as the long flags.
const KNOWN_KEYS: &[&str] = &[
    "format", "seed", "n", "k", "p", "alpha", "beta", "mu", "gamma1", "gamma2", "gamma3", "eps-list",
    "sigma-list", "which", "count", "ckn", "csv-dir",
];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", i + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Resolves settings as flag, then config file, then default, and records
/// every resolved value for the manifest.
#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    pub resolved: BTreeMap<String, String>,
}

impl Settings {
    pub fn new(file: BTreeMap<String, String>) -> Self {
        Self { file, resolved: BTreeMap::new() }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.file.get(key).map(String::as_str)
    }

    fn lookup<T>(&mut self, key: &str, flag: Option<T>, default: Option<T>) -> Result<Option<T>, CliError>
    where
        T: FromStr + ToString,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.get(key) {
                Some(text) => Some(
                    text.parse::<T>()
                        .map_err(|_| CliError::Usage(format!("config value for '{key}' is invalid: {text}")))?,
                ),
                None => default,
            },
        };
        if let Some(v) = &value {
            self.resolved.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    pub fn optional<T: FromStr + ToString>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>, CliError> {
        self.lookup(key, flag, None)
    }

    pub fn with_default<T: FromStr + ToString>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T, CliError> {
        Ok(self.lookup(key, flag, Some(default))?.expect("default present"))
    }

    pub fn required<T: FromStr + ToString>(&mut self, key: &str, flag: Option<T>) -> Result<T, CliError> {
        self.lookup(key, flag, None)?.ok_or_else(|| CliError::Usage(format!("missing required --{key}")))
    }

    /// A boolean switch; the file may set it with `true`/`false`.
    pub fn switch(&mut self, key: &str, flag: bool) -> Result<bool, CliError> {
        let value = if flag { true } else { self.lookup::<bool>(key, None, Some(false))?.unwrap_or(false) };
        self.resolved.insert(key.to_string(), value.to_string());
        Ok(value)
    }
}

/// Parses a comma-separated list of reals, e.g. `1e-2,1e-3`.
pub fn parse_list(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--{key}: '{t}' is not a finite number")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let cfg = parse_config("# comment\nn = 3\nalpha=-0.5 # trailing\n\neps_list = 1e-2,1e-3\n").unwrap();
        assert_eq!(cfg["n"], "3");
        assert_eq!(cfg["alpha"], "-0.5");
        assert_eq!(cfg["eps-list"], "1e-2,1e-3");
        assert!(parse_config("bogus = 1").is_err());
        assert!(parse_config("n 3").is_err());
    }

    #[test]
    fn flags_override_file() {
        let mut s = Settings::new(parse_config("n = 4\np = 3").unwrap());
        assert_eq!(s.required::<usize>("n", Some(5)).unwrap(), 5);
        assert_eq!(s.with_default::<f64>("p", None, 2.0).unwrap(), 3.0);
        assert_eq!(s.with_default::<f64>("alpha", None, 0.0).unwrap(), 0.0);
        assert!(s.required::<f64>("beta", None).is_err());
        assert_eq!(s.resolved["n"], "5");
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("eps-list", "1e-2, 1e-3").unwrap(), vec![1e-2, 1e-3]);
        assert!(parse_list("eps-list", "1e-2,x").is_err());
        assert!(parse_list("eps-list", "").unwrap().is_empty());
    }
}
