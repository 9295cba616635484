//! Output directory handling: files are written under one directory, and a
//! `FAILED` marker flags a run whose outputs are incomplete.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;

pub const FAILED_MARKER: &str = "FAILED";

pub struct Outputs {
    dir: PathBuf,
}

impl Outputs {
    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write_text(&self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.path(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }

    pub fn write_json(&self, name: &str, value: &Value) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_text(name, &text)
    }

    /// Comma-separated table; values use shortest round-trip formatting.
    pub fn write_csv<R, V>(&self, name: &str, header: &[&str], rows: R) -> Result<PathBuf>
    where
        R: IntoIterator<Item = Vec<V>>,
        V: Display,
    {
        let mut text = header.join(",");
        text.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
        self.write_text(name, &text)
    }
}

/// Run `body` against `dir`. A stale marker is removed first; on error the
/// marker is written with the message and the error is returned.
pub fn with_outputs<T>(dir: &Path, body: impl FnOnce(&Outputs) -> Result<T>) -> Result<T> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let marker = dir.join(FAILED_MARKER);
    if marker.exists() {
        fs::remove_file(&marker)?;
    }
    let out = Outputs { dir: dir.to_path_buf() };
    body(&out).inspect_err(|e| {
        let _ = fs::write(&marker, format!("{e:#}\n"));
    })
}
