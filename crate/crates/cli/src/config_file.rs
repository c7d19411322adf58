//! Flat key-value config files with section headers.
//!
//! ```text
//! # comment
//! [experiment]
//! dist = exponential:1
//! trials = 20000
//! seed = 42
//! ```
//!
//! Keys live in the `[experiment]` section (or before any header); keys in
//! other sections keep a `section.` prefix and are rejected later as
//! unrecognized. Command-line flags override file values.

use std::collections::BTreeMap;

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut map = BTreeMap::new();
    let mut section: Option<String> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| format!("line {}: unterminated section header", lineno + 1))?;
            section = Some(name.trim().to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value, got {line:?}", lineno + 1))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(format!("line {}: empty key", lineno + 1));
        }
        let full_key = match section.as_deref() {
            None | Some("experiment") => key.to_string(),
            Some(other) => format!("{other}.{key}"),
        };
        if map
            .insert(full_key.clone(), value.trim().to_string())
            .is_some()
        {
            return Err(format!("line {}: duplicate key {full_key:?}", lineno + 1));
        }
    }
    Ok(map)
}
