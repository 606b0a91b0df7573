//! `key = value` run configuration. Keys mirror the long flag names.

use std::collections::BTreeMap;

pub const KEYS: &[&str] = &[
    "work",
    "corpus",
    "language",
    "raw-annotations",
    "annotations",
    "seed",
    "split",
    "yes-ratio",
    "group-by-code",
    "max-pairs-per-comment",
    "noise-keywords",
    "template-registry",
    "inflect-on-insert",
];

/// Parse config text. Blank lines and `#` comments are ignored; unknown keys
/// and repeated keys are errors.
pub fn parse(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(format!("config line {}: unknown key {key:?}", i + 1));
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(format!("config line {}: {key:?} set twice", i + 1));
        }
    }
    Ok(out)
}

pub fn parse_bool(key: &str, value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "on" | "yes" | "1" => Ok(true),
        "false" | "off" | "no" | "0" => Ok(false),
        _ => Err(format!("{key}: expected a boolean, got {value:?}")),
    }
}
