//! Gnuplot scripts over CSV tables. The script reads the table at plot time;
//! no data is copied into it.

use std::path::{Path, PathBuf};
use std::process::Command;

use crate::table::read_header;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub x: String,
    pub y: Vec<String>,
    pub title: Option<String>,
    pub logscale_y: bool,
}

fn quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

fn column(header: &[String], name: &str, table: &Path) -> Result<usize, CliError> {
    header
        .iter()
        .position(|h| h == name)
        .map(|i| i + 1)
        .ok_or_else(|| {
            CliError::Usage(format!("{}: no column {name:?} (have {})", table.display(), header.join(", ")))
        })
}

/// Builds the script for `table`; `svg` is the file gnuplot will write.
pub fn script(table: &Path, spec: &PlotSpec, svg: &Path) -> Result<String, CliError> {
    if !table.is_file() {
        return Err(CliError::Usage(format!("{}: no such table", table.display())));
    }
    let header = read_header(table)?;
    let xi = column(&header, &spec.x, table)?;
    if spec.y.is_empty() {
        return Err(CliError::Usage("plot needs at least one --y column".into()));
    }
    let ys = spec
        .y
        .iter()
        .map(|y| column(&header, y, table).map(|i| (i, y)))
        .collect::<Result<Vec<_>, _>>()?;

    let data = quote(&table.display().to_string());
    let mut s = String::new();
    s.push_str("set terminal svg size 800,500 dynamic\n");
    s.push_str(&format!("set output {}\n", quote(&svg.display().to_string())));
    s.push_str("set datafile separator ','\n");
    s.push_str(&format!("set xlabel {}\n", quote(&spec.x)));
    if let [(_, y)] = ys.as_slice() {
        s.push_str(&format!("set ylabel {}\n", quote(y)));
    }
    if let Some(t) = &spec.title {
        s.push_str(&format!("set title {}\n", quote(t)));
    }
    if spec.logscale_y {
        s.push_str("set logscale y\n");
    }
    s.push_str("set grid\n");
    let curves: Vec<String> = ys
        .iter()
        .map(|(i, y)| format!("{data} every ::1 using {xi}:{i} with lines title {}", quote(y)))
        .collect();
    s.push_str(&format!("plot {}\n", curves.join(", \\\n     ")));
    Ok(s)
}

/// Paths written by [`write_plot`].
#[derive(Debug, Clone)]
pub struct PlotOutputs {
    pub script: PathBuf,
    pub svg: Option<PathBuf>,
}

/// Writes `plot.gp` into `out`; with `render`, runs gnuplot to produce
/// `plot.svg`.
pub fn write_plot(table: &Path, spec: &PlotSpec, out: &Path, render: bool) -> Result<PlotOutputs, CliError> {
    let table = table.canonicalize().unwrap_or_else(|_| table.to_path_buf());
    let out = out.canonicalize().unwrap_or_else(|_| out.to_path_buf());
    let svg = out.join("plot.svg");
    let text = script(&table, spec, &svg)?;
    let path = out.join("plot.gp");
    std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
    if !render {
        return Ok(PlotOutputs { script: path, svg: None });
    }
    let status = Command::new("gnuplot").arg(&path).status().map_err(|e| CliError::io("gnuplot", e))?;
    if !status.success() {
        return Err(CliError::io(
            "gnuplot",
            std::io::Error::other(format!("gnuplot exited with {status}")),
        ));
    }
    Ok(PlotOutputs { script: path, svg: Some(svg) })
}
