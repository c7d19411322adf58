//! Report document rendering.
//!
//! Two formats, both deterministic byte-for-byte:
//! - CSV: `# key = value` comment lines echoing the effective config (sorted
//!   by key), then a header line, then one row per record;
//! - JSON: pretty-printed with the config embedded.
//!
//! Reports never contain timestamps, durations, or worker counts, so reruns
//! with the same seed reproduce them exactly.

use std::collections::BTreeMap;

use serde::Serialize;

/// Effective configuration echoed into every report, sorted by key.
pub type ConfigEcho = BTreeMap<String, String>;

/// Builds a config echo from key/value pairs.
pub(crate) fn echo(pairs: &[(&str, String)]) -> ConfigEcho {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

/// Assembles a CSV document: config comments, header, rows.
pub(crate) fn csv_document<I>(config: &ConfigEcho, header: &str, rows: I) -> String
where
    I: IntoIterator<Item = String>,
{
    let mut out = String::new();
    for (k, v) in config {
        out.push_str("# ");
        out.push_str(k);
        out.push_str(" = ");
        out.push_str(v);
        out.push('\n');
    }
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

/// Pretty JSON with a trailing newline.
pub(crate) fn json_document<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Shortest round-trip decimal for a float cell.
pub(crate) fn cell(x: f64) -> String {
    x.to_string()
}

/// Optional float cell; empty when absent.
pub(crate) fn opt_cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}
