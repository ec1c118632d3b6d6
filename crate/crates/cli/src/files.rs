//! Front and table files in CSV or JSON form.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{read, write, CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn ext(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontRow {
    pub makespan_s: f64,
    #[serde(rename = "energy_kJ")]
    pub energy_kj: f64,
    pub solution_file: String,
}

/// A table with a fixed header and stringified cells.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    /// Array of objects; cells that parse as numbers are written as numbers.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| {
                self.header
                    .iter()
                    .zip(r)
                    .map(|(h, c)| {
                        let v = match c.parse::<f64>() {
                            Ok(x) if x.is_finite() => serde_json::json!(x),
                            _ => serde_json::Value::String(c.clone()),
                        };
                        (h.clone(), v)
                    })
                    .collect()
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("table serializes") + "\n"
    }

    /// Writes `<stem>.<ext>` under `dir` and returns the path.
    pub fn save(&self, dir: &Path, stem: &str, format: Format) -> CliResult<PathBuf> {
        let path = dir.join(format!("{stem}.{}", format.ext()));
        let text = match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        };
        write(&path, text)?;
        Ok(path)
    }
}

pub fn front_table(rows: &[FrontRow]) -> Table {
    let mut t = Table::new(&["makespan_s", "energy_kJ", "solution_file"]);
    for r in rows {
        t.push(vec![r.makespan_s.to_string(), r.energy_kj.to_string(), r.solution_file.clone()]);
    }
    t
}

pub fn parse_front_csv(text: &str) -> Result<Vec<FrontRow>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == "makespan_s,energy_kJ,solution_file" => {}
        Some(h) => return Err(format!("unexpected front header {h:?}")),
        None => return Err("empty front file".into()),
    }
    let mut out = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.splitn(3, ',').collect();
        if f.len() != 3 {
            return Err(format!("line {}: expected 3 fields", n + 2));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("line {}: {e}", n + 2));
        out.push(FrontRow { makespan_s: num(f[0])?, energy_kj: num(f[1])?, solution_file: f[2].trim().to_string() });
    }
    Ok(out)
}

/// Loads `front.csv` or `front.json` from a run directory.
pub fn load_front(run_dir: &Path) -> CliResult<Vec<FrontRow>> {
    let csv = run_dir.join("front.csv");
    if csv.exists() {
        return parse_front_csv(&read(&csv)?).map_err(|e| CliError::io(&csv, e));
    }
    let json = run_dir.join("front.json");
    let text = read(&json)?;
    serde_json::from_str(&text).map_err(|e| CliError::io(&json, e))
}
