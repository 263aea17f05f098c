//! Tabular output: CSV and JSON rendering with round-trippable floats, plus
//! atomic file writes (temp file + rename, so failures never leave partial
//! datasets behind).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use crate::CliError;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    F(f64),
    I(i64),
    S(String),
    B(bool),
    Empty,
}

/// Column-ordered dataset shared by the CSV and JSON renderers.
#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for cell in row {
                if !first {
                    out.push(',');
                }
                first = false;
                match cell {
                    Value::F(x) => {
                        let _ = write!(out, "{}", fmt_f64(*x));
                    }
                    Value::I(x) => {
                        let _ = write!(out, "{x}");
                    }
                    Value::S(s) => out.push_str(s),
                    Value::B(b) => {
                        let _ = write!(out, "{b}");
                    }
                    Value::Empty => {}
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    let v = match cell {
                        Value::F(x) => serde_json::json!(x),
                        Value::I(x) => serde_json::json!(x),
                        Value::S(s) => serde_json::json!(s),
                        Value::B(b) => serde_json::json!(b),
                        Value::Empty => serde_json::Value::Null,
                    };
                    obj.insert(col.clone(), v);
                }
                serde_json::Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
        s.push('\n');
        s
    }
}

/// 17 significant digits: round-trippable f64 with a `.` decimal separator.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes via a temp file in the destination directory followed by a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io_err = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_render_round_trippable() {
        for x in [0.2304, 1.0 / 3.0, 6.12e-17, 0.0, -3.5e8] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            assert!(!s.contains(','));
        }
    }

    #[test]
    fn csv_and_json_mirror_columns() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![Value::F(1.5), Value::S("G1".into()), Value::Empty]);
        let csv = t.to_csv();
        assert!(csv.starts_with("a,b,c\n"));
        assert!(csv.contains("1.5000000000000000e0,G1,\n"));
        let json: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(json[0]["a"], serde_json::json!(1.5));
        assert_eq!(json[0]["b"], serde_json::json!("G1"));
        assert!(json[0]["c"].is_null());
    }
}
