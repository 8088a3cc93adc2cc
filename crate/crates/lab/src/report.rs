//! CSV tables and JSON lines with reproducible float rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use serde_json::ser::Formatter;
use serde_json::Value;

/// Renders a float with 17 significant digits; non-finite values as words.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x:.16e}")
    }
}

/// JSON formatter that writes every float with 17 significant digits.
struct Digits17;

impl Formatter for Digits17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// JSON number, or a string for non-finite values which JSON cannot hold.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(fmt_f64(x)))
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

/// Ordered-key object: serializes with sorted keys.
pub type Object = BTreeMap<String, Value>;

/// One JSON object per line.
pub fn json_line(obj: &Object) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
    serde::Serialize::serialize(obj, &mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// A CSV table with a commented header block.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::S(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::S(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::S(if x { "true" } else { "false" }.into())
    }
}

fn render(cell: Cell) -> String {
    match cell {
        Cell::F(x) => fmt_f64(x),
        Cell::I(i) => i.to_string(),
        Cell::S(s) => {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s
            }
        }
    }
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            header: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.header.push(line.into());
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row.into_iter().map(render).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for h in &self.header {
            let _ = writeln!(out, "# {h}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits_and_keys_are_sorted() {
        let mut o = Object::new();
        o.insert("zeta".into(), num(0.1));
        o.insert("alpha".into(), num(f64::INFINITY));
        o.insert("mid".into(), Value::from(3));
        assert_eq!(
            json_line(&o),
            r#"{"alpha":"inf","mid":3,"zeta":1.0000000000000001e-1}"#
        );
    }

    #[test]
    fn csv_quotes_and_header() {
        let mut t = Table::new(&["a", "b"]);
        t.note("threshold: x < 1");
        t.push(vec![Cell::from(1.5), Cell::from("p,q")]);
        assert_eq!(t.to_csv(), "# threshold: x < 1\na,b\n1.5000000000000000e0,\"p,q\"\n");
    }
}
