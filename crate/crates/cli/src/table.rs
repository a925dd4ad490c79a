//! Tabular output in CSV or JSON, each carrying a metadata header.

use std::io::Write;

use serde_json::{Map, Value};

use crate::spec::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            // 17 significant digits round-trip every f64
            Cell::Float(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Float(v) if v.is_nan() => "nan".into(),
            Cell::Float(v) if *v > 0.0 => "inf".into(),
            Cell::Float(_) => "-inf".into(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(metadata: Vec<(String, String)>, columns: Vec<String>) -> Self {
        Self {
            metadata,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    pub fn write_to<W: Write>(&self, format: OutputFormat, mut w: W) -> std::io::Result<()> {
        w.write_all(self.render(format).as_bytes())?;
        w.flush()
    }

    fn to_csv(&self) -> String {
        let meta: Vec<String> = self.metadata.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let mut out = format!("# {}\n", meta.join(" "));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn to_json(&self) -> String {
        let metadata: Map<String, Value> = self
            .metadata
            .iter()
            .map(|(k, v)| (k.clone(), Value::from(v.as_str())))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .cloned()
                    .zip(row.iter().map(Cell::to_json))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(metadata));
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("plain values serialise");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(
            vec![("tool".into(), "mhsec".into()), ("seed".into(), "7".into())],
            vec!["scheme".into(), "n".into(), "u".into()],
        );
        t.push(vec!["oft".into(), 5usize.into(), 0.1.into()]);
        t.push(vec!["noft".into(), 2usize.into(), f64::NAN.into()]);
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().render(OutputFormat::Csv);
        let lines: Vec<&str> = csv.split('\n').collect();
        assert_eq!(lines[0], "# tool=mhsec seed=7");
        assert_eq!(lines[1], "scheme,n,u");
        assert_eq!(lines[2], "oft,5,1.0000000000000001e-1");
        assert_eq!(lines[3], "noft,2,nan");
        assert_eq!(lines[4], "");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn csv_floats_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, f64::MIN_POSITIVE, f64::MAX] {
            let s = Cell::Float(v).to_csv();
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn json_mirrors_rows_in_column_order() {
        let json = sample().render(OutputFormat::Json);
        let v: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["metadata"]["seed"], "7");
        assert_eq!(v["rows"][0]["n"], 5);
        assert_eq!(v["rows"][0]["u"], 0.1);
        assert!(v["rows"][1]["u"].is_null());
        let keys: Vec<&String> = v["rows"][0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["scheme", "n", "u"]);
    }

    #[test]
    #[should_panic]
    fn ragged_rows_are_rejected() {
        let mut t = sample();
        t.push(vec![1.0.into()]);
    }
}
