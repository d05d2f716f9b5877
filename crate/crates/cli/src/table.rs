//! Result tables and their CSV / JSON-lines encodings.

use std::fmt;
use std::io::{BufRead, Write};

use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(i) => Some(i as f64),
            Cell::Num(x) => Some(x),
            Cell::Text(_) => None,
        }
    }

    fn parse(field: &str) -> Cell {
        if let Ok(i) = field.parse::<i64>() {
            Cell::Int(i)
        } else if let Ok(x) = field.parse::<f64>() {
            Cell::Num(x)
        } else {
            Cell::Text(field.to_string())
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            // NaN and infinities have no JSON form
            Cell::Num(x) => serde_json::Number::from_f64(*x).map(Value::Number).unwrap_or(Value::Null),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }

    fn from_json(v: &Value) -> Cell {
        match v {
            Value::Number(n) => match n.as_i64() {
                Some(i) if !n.is_f64() => Cell::Int(i),
                _ => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
            },
            Value::Null => Cell::Num(f64::NAN),
            Value::String(s) => Cell::Text(s.clone()),
            other => Cell::Text(other.to_string()),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(i) => write!(f, "{i}"),
            // 17 significant digits round-trip every f64
            Cell::Num(x) => write!(f, "{x:.16e}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// The numeric values of column `name`.
    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column(name)?;
        self.rows.iter().map(|r| r[k].as_f64()).collect()
    }

    pub fn write<W: Write>(&self, writer: W, format: Format) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(writer),
            Format::Jsonl => self.write_jsonl(writer),
        }
    }

    fn write_csv<W: Write>(&self, writer: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(&self.columns).map_err(CliError::io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string())).map_err(CliError::io)?;
        }
        w.flush().map_err(CliError::io)
    }

    fn write_jsonl<W: Write>(&self, mut writer: W) -> Result<(), CliError> {
        for row in &self.rows {
            let obj: serde_json::Map<String, Value> = self
                .columns
                .iter()
                .cloned()
                .zip(row.iter().map(Cell::to_json))
                .collect();
            serde_json::to_writer(&mut writer, &obj).map_err(CliError::io)?;
            writer.write_all(b"\n").map_err(CliError::io)?;
        }
        writer.flush().map_err(CliError::io)
    }

    pub fn read<R: BufRead>(reader: R, format: Format) -> Result<Table, CliError> {
        match format {
            Format::Csv => {
                let mut r = csv::Reader::from_reader(reader);
                let columns = r.headers().map_err(CliError::io)?.iter().map(String::from).collect();
                let mut table = Table::new(columns);
                for record in r.records() {
                    let record = record.map_err(CliError::io)?;
                    table.rows.push(record.iter().map(Cell::parse).collect());
                }
                Ok(table)
            }
            Format::Jsonl => {
                let mut table = Table::default();
                for (k, line) in reader.lines().enumerate() {
                    let line = line.map_err(CliError::io)?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    let obj: serde_json::Map<String, Value> = serde_json::from_str(&line)
                        .map_err(|e| CliError::Config(format!("line {}: {e}", k + 1)))?;
                    if table.columns.is_empty() {
                        table.columns = obj.keys().cloned().collect();
                    }
                    table.rows.push(obj.values().map(Cell::from_json).collect());
                }
                Ok(table)
            }
        }
    }
}
