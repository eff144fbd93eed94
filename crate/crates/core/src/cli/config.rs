use std::collections::BTreeMap;
use std::path::Path;

use super::Failure;

/// Flat `key=value` config text. Blank lines and lines starting with `#` are
/// skipped; a repeated key collects its values into a list.
#[derive(Debug, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, Vec<String>>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let mut entries: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Failure::usage(format!("config line {}: expected key=value", lineno + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(Failure::usage(format!("config line {}: empty key", lineno + 1)));
            }
            if value.is_empty() {
                return Err(Failure::usage(format!("config line {}: empty value for `{key}`", lineno + 1)));
            }
            entries.entry(key.to_string()).or_default().push(value.to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Removes and returns every value given for `key`.
    pub fn take_list(&mut self, key: &str) -> Vec<String> {
        self.entries.remove(key).unwrap_or_default()
    }

    /// Removes and returns the single value given for `key`.
    pub fn take_scalar(&mut self, key: &str) -> Result<Option<String>, Failure> {
        match self.take_list(key).as_slice() {
            [] => Ok(None),
            [v] => Ok(Some(v.clone())),
            _ => Err(Failure::usage(format!("config key `{key}` may appear only once"))),
        }
    }

    pub fn take_parsed<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>, Failure> {
        self.take_scalar(key)?.map(|v| parse_value(key, &v)).transpose()
    }

    pub fn take_parsed_list<T: std::str::FromStr>(&mut self, key: &str) -> Result<Vec<T>, Failure> {
        self.take_list(key).iter().map(|v| parse_value(key, v)).collect()
    }

    /// Fails on any key nobody asked for.
    pub fn finish(self) -> Result<(), Failure> {
        match self.entries.keys().next() {
            None => Ok(()),
            Some(k) => Err(Failure::usage(format!("unknown config key `{k}`"))),
        }
    }
}

pub fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Failure> {
    value
        .parse()
        .map_err(|_| Failure::usage(format!("cannot parse `{value}` for `{key}`")))
}

/// Parses `n,k,k'`.
pub fn parse_instance(s: &str) -> Result<(usize, usize, usize), Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [n, k, kp] = parts.as_slice() else {
        return Err(Failure::usage(format!("instance `{s}` must be n,k,k'")));
    };
    Ok((
        parse_value("instance", n)?,
        parse_value("instance", k)?,
        parse_value("instance", kp)?,
    ))
}
