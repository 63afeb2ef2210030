//! The `rfsq-csv v1` tabular format.
//!
//! A file starts with the line `# rfsq-csv v1`, followed by one header row
//! of column names and then the data rows. Floats are written with 17
//! significant digits so that every `f64` survives a round trip exactly.

use std::io::{self, Read, Write};

use serde_json::Value;

pub const MAGIC: &str = "# rfsq-csv v1";

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn write_table<W: Write>(out: W, columns: &[String], rows: &[Vec<f64>]) -> io::Result<()> {
    let mut w = begin(out, columns)?;
    for row in rows {
        w.write_record(row.iter().map(|&x| format_float(x)))?;
    }
    w.flush()
}

/// Writes text fields as-is; used for single-record outputs mixing numbers and flags.
pub fn write_record<W: Write>(out: W, columns: &[String], values: &[String]) -> io::Result<()> {
    let mut w = begin(out, columns)?;
    w.write_record(values)?;
    w.flush()
}

fn begin<W: Write>(mut out: W, columns: &[String]) -> io::Result<csv::Writer<W>> {
    writeln!(out, "{MAGIC}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns)?;
    Ok(w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

pub fn read_table<R: Read>(mut input: R) -> Result<Table, String> {
    let mut text = String::new();
    input.read_to_string(&mut text).map_err(|e| e.to_string())?;
    let body = text
        .strip_prefix(MAGIC)
        .ok_or_else(|| format!("missing `{MAGIC}` header line"))?;
    let mut r =
        csv::ReaderBuilder::new().from_reader(body.trim_start_matches(['\r', '\n']).as_bytes());
    let columns: Vec<String> = r
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| e.to_string())?;
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| format!("bad number `{f}`: {e}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

/// Flattens a JSON object into `(dotted.key, text)` pairs in field order.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    flatten_into(value, String::new(), &mut out);
    out
}

fn flatten_into(value: &Value, prefix: String, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten_into(v, key(k), out);
            }
        }
        Value::Number(n) => {
            let text = match n.as_f64() {
                Some(x) if n.is_f64() => format_float(x),
                _ => n.to_string(),
            };
            out.push((prefix, text));
        }
        Value::Null => out.push((prefix, String::new())),
        Value::Bool(b) => out.push((prefix, b.to_string())),
        Value::String(s) => out.push((prefix, s.clone())),
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten_into(v, key(&i.to_string()), out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let columns = vec!["a".to_string(), "b".to_string()];
        let rows = vec![
            vec![0.1 + 0.2, -1.0 / 3.0],
            vec![f64::MIN_POSITIVE, 1e300],
            vec![f64::NAN, -0.0],
        ];
        let mut buf = Vec::new();
        write_table(&mut buf, &columns, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# rfsq-csv v1\na,b\n"));
        let back = read_table(buf.as_slice()).unwrap();
        assert_eq!(back.columns, columns);
        for (x, y) in rows.iter().flatten().zip(back.rows.iter().flatten()) {
            assert!(x.to_bits() == y.to_bits() || (x.is_nan() && y.is_nan()));
        }
    }

    #[test]
    fn missing_magic_is_rejected() {
        assert!(read_table("a,b\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn flatten_nests_with_dots() {
        let v = serde_json::json!({"x": 0.5, "inner": {"y": 2, "flag": true}});
        let flat = flatten(&v);
        assert!(flat.contains(&("x".into(), format_float(0.5))));
        assert!(flat.contains(&("inner.y".into(), "2".into())));
        assert!(flat.contains(&("inner.flag".into(), "true".into())));
    }
}
