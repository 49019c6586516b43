//! Flat `key = value` search configuration files.

use rp2hunt_core::builder::SearchConfig;

use crate::error::CliError;

/// Builds a config from file text. The strict base is used when `strict` is set
/// or a `preset = strict` line appears anywhere; every other key overrides one field.
pub fn parse_config(text: &str, origin: &str, strict: bool) -> Result<SearchConfig, CliError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
            origin: origin.to_string(),
            line: i + 1,
            message: format!("expected `key = value`, found `{line}`"),
        })?;
        entries.push((i + 1, key.trim().to_string(), value.trim().to_string()));
    }
    let strict = strict || entries.iter().any(|(_, k, v)| k == "preset" && v == "strict");
    let mut config = if strict { SearchConfig::strict() } else { SearchConfig::default() };
    for (line, key, value) in entries {
        set_field(&mut config, &key, &value).map_err(|message| CliError::Config {
            origin: origin.to_string(),
            line,
            message,
        })?;
    }
    Ok(config)
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("invalid value `{value}` for `{key}`"))
}

/// Sets one field by name.
fn set_field(config: &mut SearchConfig, key: &str, value: &str) -> Result<(), String> {
    match key {
        "preset" => match value {
            "default" | "strict" => {}
            other => return Err(format!("unknown preset `{other}`")),
        },
        "p" => config.p = num(key, value)?,
        "epsilon" => config.epsilon = num(key, value)?,
        "epsilon_prime" => config.epsilon_prime = num(key, value)?,
        "k" => config.k = num(key, value)?,
        "r" => config.r = num(key, value)?,
        "d" => config.d = num(key, value)?,
        "c" => config.c = num(key, value)?,
        "retry_budget" => config.retry_budget = num(key, value)?,
        "mc_samples" => config.mc_samples = num(key, value)?,
        "exact_limit" => config.exact_limit = num(key, value)?,
        "seed" => config.seed = num(key, value)?,
        "strict" => config.strict = num(key, value)?,
        "filter_budget" => config.filter_budget = num(key, value)?,
        other => return Err(format!("unknown key `{other}`")),
    }
    Ok(())
}
