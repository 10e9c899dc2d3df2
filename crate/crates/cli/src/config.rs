//! `run <config.toml>`: a table of options turned into a command line.
//!
//! ```toml
//! command = "check polya-neumann"
//! domain = "box.json"
//! lambda = "1:1:100"
//! out = "report.json"
//! ```
//!
//! Every other key becomes `--key value` (underscores turn into dashes,
//! arrays are comma-joined, `true` becomes a bare flag). Relative paths in
//! `domain`, `tiling`, `out`, `plot`, `csv` and `dump_field` resolve against
//! the config file's directory.

use std::path::Path;

use anyhow::{bail, Context, Result};

const PATH_KEYS: [&str; 6] = ["domain", "tiling", "out", "plot", "csv", "dump_field"];

pub fn config_to_args(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    let table: toml::Table = text
        .parse()
        .with_context(|| format!("cannot parse config {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut args = vec!["polya-lab".to_string()];
    let command = table
        .get("command")
        .and_then(|v| v.as_str())
        .context("config needs a string `command`, e.g. command = \"prove\"")?;
    if command.split_whitespace().next() == Some("run") {
        bail!("a config file cannot invoke `run`");
    }
    args.extend(command.split_whitespace().map(str::to_string));
    for (key, value) in &table {
        if key == "command" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        let rendered = match value {
            toml::Value::Boolean(true) => {
                args.push(flag);
                continue;
            }
            toml::Value::Boolean(false) => continue,
            toml::Value::String(s) => s.clone(),
            toml::Value::Integer(i) => i.to_string(),
            toml::Value::Float(f) => f.to_string(),
            toml::Value::Array(items) => items
                .iter()
                .map(|v| match v {
                    toml::Value::String(s) => Ok(s.clone()),
                    toml::Value::Integer(i) => Ok(i.to_string()),
                    toml::Value::Float(f) => Ok(f.to_string()),
                    other => bail!("unsupported list item {other} for `{key}`"),
                })
                .collect::<Result<Vec<_>>>()?
                .join(","),
            other => bail!("unsupported value {other} for `{key}`"),
        };
        let rendered = if PATH_KEYS.contains(&key.as_str()) && Path::new(&rendered).is_relative() && !(key == "tiling" && !rendered.ends_with(".json")) {
            base.join(&rendered).to_string_lossy().into_owned()
        } else {
            rendered
        };
        args.push(flag);
        args.push(rendered);
    }
    Ok(args)
}
