//! Plain-text `key = value` configuration files.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("config line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

/// Parses `key = value` lines. `#` starts a comment; blank lines are skipped.
/// Keys use lowercase letters, digits, `-` and `_`, and may appear once.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| ConfigError { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected key = value, got {content:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(err("missing key".into()));
        }
        if !key
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-' || c == '_')
        {
            return Err(err(format!("invalid key {key:?}")));
        }
        if value.is_empty() {
            return Err(err(format!("missing value for {key}")));
        }
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(err(format!("duplicate key {key}")));
        }
    }
    Ok(out)
}
