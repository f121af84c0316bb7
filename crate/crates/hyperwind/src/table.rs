//! CSV output: comma separated, header row, LF line endings, 17 significant
//! digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::CliError;

/// Round-trippable float formatting.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<String>,
    body: String,
    rows: usize,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self { header: header.iter().map(|s| s.as_ref().to_owned()).collect(), body: String::new(), rows: 0 }
    }

    pub fn columns(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Appends a row of already formatted cells.
    pub fn push_cells<S: AsRef<str>>(&mut self, cells: &[S]) {
        debug_assert_eq!(cells.len(), self.header.len());
        for (i, c) in cells.iter().enumerate() {
            if i > 0 {
                self.body.push(',');
            }
            self.body.push_str(&quote(c.as_ref()));
        }
        self.body.push('\n');
        self.rows += 1;
    }

    pub fn push(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
        self.push_cells(&cells);
    }

    pub fn render(&self) -> String {
        let mut out = String::with_capacity(self.body.len() + 64);
        let header: Vec<String> = self.header.iter().map(|h| quote(h)).collect();
        let _ = writeln!(out, "{}", header.join(","));
        out.push_str(&self.body);
        out
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        fs::write(path, self.render()).map_err(|e| CliError::io(path, e))
    }
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_owned()
    }
}

/// Header row of a CSV file.
pub fn read_header(path: &Path) -> Result<Vec<String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let first = text.lines().next().unwrap_or("");
    Ok(first.split(',').map(|s| s.trim().trim_matches('"').to_owned()).filter(|s| !s.is_empty()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, -1.0 / 3.0, 8.718_552_4, 1e-300, 6.02e23] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn quoting_and_line_endings() {
        let mut t = Table::new(&["a", "b"]);
        t.push_cells(&["x,y", "plain"]);
        t.push(&[1.0, 2.0]);
        let s = t.render();
        assert!(!s.contains('\r'));
        assert_eq!(s.lines().nth(1).unwrap(), "\"x,y\",plain");
        assert_eq!(t.rows(), 2);
    }
}
