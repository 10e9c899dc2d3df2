//! Report envelopes and atomic file output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use polya_core::spectra::{Method, Spectrum};
use serde::Serialize;

/// Where a number came from.
pub fn provenance(method: Method, max_error: f64) -> String {
    match method {
        Method::Exact => "exact".into(),
        Method::Fem { level } => format!("fem(level={level}, error={max_error:e})"),
        Method::Extrapolated { finest_level } => format!("extrapolated(finest_level={finest_level}, error={max_error:e})"),
    }
}

pub fn spectrum_provenance(s: &Spectrum) -> String {
    provenance(s.method, s.errors().iter().copied().fold(0.0, f64::max))
}

#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub command: &'a str,
    pub pass: bool,
    /// Provenance of each reported quantity.
    pub provenance: BTreeMap<&'a str, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub report: &'a T,
}

/// Files collected during a command and written together at the end.
#[derive(Default)]
pub struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Outputs {
    pub fn add(&mut self, path: &Path, bytes: Vec<u8>) {
        self.files.push((path.to_path_buf(), bytes));
    }

    pub fn add_json<T: Serialize>(&mut self, path: &Path, value: &T) -> Result<()> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.add(path, s.into_bytes());
        Ok(())
    }

    pub fn write_all(self) -> Result<()> {
        for (path, bytes) in self.files {
            write_atomic(&path, &bytes)?;
        }
        Ok(())
    }
}

/// Write to a temporary sibling, then rename over the target.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .with_context(|| format!("output path {} has no file name", path.display()))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| -> Result<()> {
        let mut f = std::fs::File::create(&tmp).with_context(|| format!("cannot create {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result
}
