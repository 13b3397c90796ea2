//! Small column-oriented dataset with deterministic CSV and JSON encoders.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    /// File stem, e.g. `fig1_a`.
    pub name: String,
    pub description: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

/// 17 significant digits in scientific notation: round-trips every f64.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

impl Table {
    pub fn new(name: impl Into<String>, description: impl Into<String>, columns: &[(&str, &str)]) -> Self {
        Table {
            name: name.into(),
            description: description.into(),
            columns: columns
                .iter()
                .map(|(n, u)| Column {
                    name: n.to_string(),
                    unit: u.to_string(),
                })
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c.name == name)?;
        self.rows
            .iter()
            .map(|r| match &r[idx] {
                Cell::Num(x) => Some(*x),
                Cell::Text(_) => None,
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Num(x) => out.push_str(&format_float(*x)),
                    Cell::Text(s) => {
                        let _ = write!(out, "{s}");
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    /// JSON object with the columns and an array of row objects.
    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| {
                self.columns
                    .iter()
                    .zip(r)
                    .map(|(c, cell)| {
                        let v = match cell {
                            Cell::Num(x) => serde_json::Number::from_f64(*x)
                                .map(serde_json::Value::Number)
                                .unwrap_or(serde_json::Value::Null),
                            Cell::Text(s) => serde_json::Value::String(s.clone()),
                        };
                        (c.name.clone(), v)
                    })
                    .collect()
            })
            .collect();
        let doc = serde_json::json!({
            "name": self.name,
            "description": self.description,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new("demo", "", &[("x", "1"), ("label", "")]);
        t.push(vec![0.1.into(), "a".into()]);
        t.push(vec![(-2.5e-300).into(), "b".into()]);
        assert_eq!(
            t.to_csv(),
            "x,label\n1.0000000000000001e-1,a\n-2.5000000000000000e-300,b\n"
        );
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02e23, -1e-308, std::f64::consts::PI] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_rows() {
        let mut t = Table::new("demo", "d", &[("x", "1")]);
        t.push(vec![2.0.into()]);
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["rows"][0]["x"], 2.0);
        assert_eq!(t.column("x").unwrap(), vec![2.0]);
    }
}
