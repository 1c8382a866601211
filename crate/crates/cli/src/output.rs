//! Tables written as CSV or line-delimited JSON, plus companion plot scripts.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits; round-trips every f64.
pub fn format_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&'static str]) -> Self {
        Self {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Num(v) => format_num(*v),
                Cell::Text(s) => s.clone(),
            }))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        for row in &self.rows {
            let fields: Vec<String> = self
                .headers
                .iter()
                .zip(row)
                .map(|(h, c)| format!("{}:{}", json_string(h), json_value(c)))
                .collect();
            writeln!(out, "{{{}}}", fields.join(","))?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn json_string(s: &str) -> String {
    serde_json::Value::from(s).to_string()
}

/// Non-finite numbers become `null`.
pub fn json_value(c: &Cell) -> String {
    match c {
        Cell::Int(i) => i.to_string(),
        Cell::Num(v) if v.is_finite() => format_num(*v),
        Cell::Num(_) => "null".into(),
        Cell::Text(s) => json_string(s),
    }
}

pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// What a plotting script draws: `y` against `x`, one curve per `group` value.
#[derive(Debug, Clone, Copy)]
pub struct PlotSpec {
    pub x: &'static str,
    pub y: &'static [&'static str],
    pub group: Option<&'static str>,
    pub title: &'static str,
}

/// Matplotlib script reading `data` and drawing `spec`.
pub fn plot_script(data: &Path, format: Format, spec: &PlotSpec) -> String {
    let reader = match format {
        Format::Csv => format!("pd.read_csv({:?})", data.display().to_string()),
        Format::Json => format!("pd.read_json({:?}, lines=True)", data.display().to_string()),
    };
    let ys = spec.y.iter().map(|y| format!("{y:?}")).collect::<Vec<_>>().join(", ");
    let group = match spec.group {
        Some(g) => format!("{g:?}"),
        None => "None".into(),
    };
    format!(
        r#"import sys

import matplotlib.pyplot as plt
import pandas as pd

data = {reader}
x, ys, group = {x:?}, [{ys}], {group}
fig, ax = plt.subplots()
groups = data.groupby(group) if group else [(None, data)]
for key, frame in groups:
    for y in ys:
        label = y if key is None else f"{{y}} ({{group}} = {{key:g}})"
        ax.plot(frame[x], frame[y], label=label)
ax.set_xlabel(x)
ax.set_title({title:?})
ax.legend(fontsize="small")
fig.savefig(sys.argv[1] if len(sys.argv) > 1 else {png:?})
"#,
        x = spec.x,
        title = spec.title,
        png = data.with_extension("png").display().to_string(),
    )
}
