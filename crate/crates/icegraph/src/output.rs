//! Tabular output as CSV or aligned text.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Num(f64),
    Text(String),
    Empty,
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i128)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Six decimals, or the shortest round-trip form with `full`.
pub fn fmt_num(x: f64, full: bool) -> String {
    if full {
        format!("{x}")
    } else {
        format!("{x:.6}")
    }
}

impl Cell {
    pub fn render(&self, full: bool) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) => fmt_num(*x, full),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    pub fn to_csv(&self, full: bool) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.render(full)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self, full: bool) -> String {
        let rendered: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.render(full)).collect())
            .collect();
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| {
                rendered
                    .iter()
                    .map(|r| r[i].len())
                    .chain([self.header[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let line = |cells: Vec<&str>, out: &mut String| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            let _ = writeln!(out, "{}", padded.join("  ").trim_end());
        };
        line(self.header.clone(), &mut out);
        for r in &rendered {
            line(r.iter().map(String::as_str).collect(), &mut out);
        }
        out
    }

    pub fn render(&self, csv: bool, full: bool) -> String {
        if csv {
            self.to_csv(full)
        } else {
            self.to_text(full)
        }
    }
}

/// Key/value listing used for single-result commands.
pub fn key_values(pairs: &[(&str, Cell)], csv: bool, full: bool) -> String {
    if csv {
        let keys: Vec<&str> = pairs.iter().map(|p| p.0).collect();
        let values: Vec<String> = pairs.iter().map(|p| p.1.render(full)).collect();
        format!("{}\n{}\n", keys.join(","), values.join(","))
    } else {
        let width = pairs.iter().map(|p| p.0.len()).max().unwrap_or(0);
        pairs
            .iter()
            .map(|(k, v)| format!("{}\n", format!("{k:<width$}  {}", v.render(full)).trim_end()))
            .collect()
    }
}
