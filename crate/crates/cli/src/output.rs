use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::config::CliResult;

pub enum Cell {
    F(f64),
    I(i64),
    S(String),
    B(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => format!("{x:.16e}"),
            Cell::I(i) => i.to_string(),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
        }
    }
}

pub enum Artifact {
    Csv {
        header: Vec<&'static str>,
        rows: Vec<Vec<Cell>>,
    },
    Json(Value),
}

impl Artifact {
    pub fn json<T: Serialize>(v: &T) -> CliResult<Self> {
        Ok(Artifact::Json(serde_json::to_value(v)?))
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        match self {
            Artifact::Csv { header, rows } => {
                let mut w = csv::Writer::from_path(path)?;
                w.write_record(header)?;
                for r in rows {
                    w.write_record(r.iter().map(Cell::render))?;
                }
                w.flush()?;
            }
            Artifact::Json(v) => {
                let mut s = serde_json::to_string_pretty(v)?;
                s.push('\n');
                fs::write(path, s)?;
            }
        }
        Ok(())
    }
}

/// `dir/name.csv` → `dir/name.manifest.json`.
pub fn manifest_path(artifact: &Path) -> PathBuf {
    let stem = artifact
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "run".into());
    artifact.with_file_name(format!("{stem}.manifest.json"))
}

#[derive(Serialize)]
pub struct Manifest<'a> {
    pub toolkit: &'static str,
    pub version: &'static str,
    pub subcommand: &'a str,
    pub config: Value,
    pub artifact: Option<String>,
    pub status: &'static str,
    pub wall_seconds: f64,
    pub summary: &'a Value,
}

impl Manifest<'_> {
    pub fn write(&self, path: &Path) -> CliResult<()> {
        Artifact::json(self)?.write(path)
    }
}
