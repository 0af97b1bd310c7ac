use std::fs;
use std::path::Path;

use super::IoError;
use crate::dynamics::NormRow;
use crate::noise::OUPath;

pub const SERIES_HEADER: [&str; 5] = ["t", "norm_H", "norm_H1", "norm_H2", "z"];

/// Writes a CSV table. Floats use Rust's shortest round-trip formatting, so
/// equal data always gives equal bytes.
pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<(), IoError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let wrap = |source| IoError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(wrap)?;
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.write_record(row).map_err(wrap)?;
    }
    w.flush().map_err(|e| IoError::file(path, e))
}

pub(crate) fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Norm series with header `t,norm_H,norm_H1,norm_H2,z`; `z` is empty for
/// runs without an OU path.
pub fn write_series_csv(series: &[NormRow], path: &Path) -> Result<(), IoError> {
    write_csv(
        path,
        &SERIES_HEADER,
        series.iter().map(|r| {
            vec![
                r.t.to_string(),
                r.norm_h.to_string(),
                r.norm_h1.to_string(),
                r.norm_h2.to_string(),
                opt(r.z),
            ]
        }),
    )
}

/// Noise path with header `t,dW,z`; the last node has no increment.
pub fn write_path_csv(ou: &OUPath, path: &Path) -> Result<(), IoError> {
    let z = ou.values();
    write_csv(
        path,
        &["t", "dW", "z"],
        (0..z.len()).map(|i| {
            let dw = (i < ou.steps()).then(|| ou.increment(i));
            vec![ou.time(i).to_string(), opt(dw), z[i].to_string()]
        }),
    )
}

/// Line plot of some columns of an emitted CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotSpec {
    /// CSV file name, relative to the script's directory.
    pub csv: String,
    pub x: String,
    pub ys: Vec<String>,
    pub title: String,
    pub log_y: bool,
    /// Output image name, relative to the script's directory.
    pub image: String,
}

/// Writes a self-contained matplotlib script that reads only `spec.csv` and
/// saves a fixed-size image next to itself.
pub fn emit_plot_script(spec: &PlotSpec, path: &Path) -> Result<(), IoError> {
    let ys = spec
        .ys
        .iter()
        .map(|y| format!("{y:?}"))
        .collect::<Vec<_>>()
        .join(", ");
    let script = format!(
        r#"#!/usr/bin/env python3
"""{title}"""
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))

with open(os.path.join(HERE, {csv:?}), newline="") as fh:
    rows = list(csv.DictReader(fh))


def column(name):
    return [float(r[name]) if r[name] != "" else float("nan") for r in rows]


fig, ax = plt.subplots(figsize=(6.4, 4.8), dpi=100)
x = column({x:?})
for name in [{ys}]:
    ax.plot(x, column(name), marker=".", linestyle="-", label=name)
ax.set_xlabel({x:?})
ax.set_title({title:?})
if {log}:
    ax.set_yscale("log")
ax.legend()
fig.savefig(os.path.join(HERE, {image:?}))
"#,
        title = spec.title,
        csv = spec.csv,
        x = spec.x,
        log = if spec.log_y { "True" } else { "False" },
        image = spec.image,
    );
    fs::write(path, script).map_err(|e| IoError::file(path, e))
}
