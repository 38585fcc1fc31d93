//! Tabular results as CSV or column-oriented JSON.
//!
//! Floats are written with 17 significant digits in CSV, which round-trips
//! binary64 exactly; JSON numbers use the shortest round-trip form, so both
//! encodings decode to identical values.

use std::io::Write;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    Number(Vec<f64>),
    Integer(Vec<u64>),
    Text(Vec<String>),
}

impl ColumnData {
    fn len(&self) -> usize {
        match self {
            ColumnData::Number(v) => v.len(),
            ColumnData::Integer(v) => v.len(),
            ColumnData::Text(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub data: ColumnData,
}

/// A table with named columns and ordered `key: value` metadata.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveFile {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<Column>,
}

/// 17 significant digits; non-finite values as `NaN`, `inf`, `-inf`.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

impl CurveFile {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta_f64(self, key: &str, value: f64) -> Self {
        self.meta(key, format_f64(value))
    }

    pub fn numbers(mut self, name: &str, values: Vec<f64>) -> Self {
        self.push(name, ColumnData::Number(values));
        self
    }

    pub fn integers(mut self, name: &str, values: Vec<u64>) -> Self {
        self.push(name, ColumnData::Integer(values));
        self
    }

    pub fn text(mut self, name: &str, values: Vec<String>) -> Self {
        self.push(name, ColumnData::Text(values));
        self
    }

    fn push(&mut self, name: &str, data: ColumnData) {
        if let Some(first) = self.columns.first() {
            assert_eq!(first.data.len(), data.len(), "column {name} has a different length");
        }
        self.columns.push(Column {
            name: name.to_string(),
            data,
        });
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.data.len())
    }

    fn cell(&self, col: usize, row: usize) -> String {
        match &self.columns[col].data {
            ColumnData::Number(v) => format_f64(v[row]),
            ColumnData::Integer(v) => v[row].to_string(),
            ColumnData::Text(v) => v[row].clone(),
        }
    }

    /// `# key: value` lines, a header row, then RFC 4180 records.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (k, v) in &self.metadata {
            write!(out, "# {k}: {v}\r\n")?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(out);
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in 0..self.rows() {
            w.write_record((0..self.columns.len()).map(|c| self.cell(c, row)))?;
        }
        w.flush()
    }

    /// One object: `metadata`, `columns` (names in order), then one array
    /// per column.
    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }

    pub fn to_json_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_json(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8 output")
    }
}

struct OrderedPairs<'a>(&'a [(String, String)]);

impl Serialize for OrderedPairs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for CurveFile {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.columns.len() + 2))?;
        map.serialize_entry("metadata", &OrderedPairs(&self.metadata))?;
        let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        map.serialize_entry("columns", &names)?;
        for c in &self.columns {
            match &c.data {
                ColumnData::Number(v) => map.serialize_entry(&c.name, v)?,
                ColumnData::Integer(v) => map.serialize_entry(&c.name, v)?,
                ColumnData::Text(v) => map.serialize_entry(&c.name, v)?,
            }
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CurveFile {
        CurveFile::new()
            .meta("p", 0.01)
            .numbers("R", vec![0.0, 0.1, 1.0 / 3.0])
            .text("tag", vec!["a".into(), "b,c".into(), "d\"e".into()])
    }

    #[test]
    fn csv_layout_and_quoting() {
        let s = sample().to_csv_string();
        let lines: Vec<&str> = s.split("\r\n").collect();
        assert_eq!(s.lines().next(), Some("# p: 0.01"));
        assert_eq!(lines[1], "R,tag");
        assert_eq!(lines[3], "1.0000000000000001e-1,\"b,c\"");
        assert_eq!(lines[4], "3.3333333333333331e-1,\"d\"\"e\"");
    }

    #[test]
    fn csv_round_trips_exactly() {
        let xs = vec![0.1, 1e-300, 0.30524212523, f64::MIN_POSITIVE, 12345.678];
        for x in &xs {
            assert_eq!(format_f64(*x).parse::<f64>().unwrap(), *x);
        }
    }

    #[test]
    fn json_is_column_oriented() {
        let v: serde_json::Value = serde_json::from_str(&sample().to_json_string()).unwrap();
        assert_eq!(v["metadata"]["p"], "0.01");
        assert_eq!(v["columns"], serde_json::json!(["R", "tag"]));
        assert_eq!(v["R"][2].as_f64().unwrap(), 1.0 / 3.0);
        assert_eq!(v["tag"][1], "b,c");
    }

    #[test]
    #[should_panic]
    fn ragged_columns_rejected() {
        let _ = CurveFile::new().numbers("a", vec![1.0]).numbers("b", vec![]);
    }
}
