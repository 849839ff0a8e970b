//! Small formatting helpers shared by the CSV/JSON emitters.

use std::fmt::Write;

/// Shortest-stable scientific form with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Accumulates an LF-terminated CSV table.
#[derive(Debug, Clone)]
pub struct CsvTable {
    buf: String,
    columns: usize,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        Self { buf, columns: header.len() }
    }

    /// Appends a row of pre-formatted cells.
    pub fn push_cells(&mut self, cells: &[String]) {
        debug_assert_eq!(cells.len(), self.columns);
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    /// Appends a numeric row.
    pub fn push(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns);
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.buf.push(',');
            }
            let _ = write!(self.buf, "{v:.16e}");
        }
        self.buf.push('\n');
    }

    pub fn rows(&self) -> usize {
        self.buf.lines().count() - 1
    }

    pub fn as_str(&self) -> &str {
        &self.buf
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

/// `n` equispaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}
