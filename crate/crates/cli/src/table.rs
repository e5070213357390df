//! CSV tables with `# key=value` metadata lines ahead of the header.
//!
//! Numbers are written with 17 significant digits, which round-trips every
//! finite `f64`. Failed cells are empty; non-finite values are never written.

use std::io::{self, Write};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Text(String),
    Empty,
}

impl Field {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Field::Num(v) => Some(*v),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Field::Num(v) if v.is_finite() => format!("{v:.16e}"),
            Field::Num(_) | Field::Empty => String::new(),
            Field::Text(s) => s.clone(),
        }
    }

    fn parse(s: &str) -> Field {
        if s.is_empty() {
            Field::Empty
        } else {
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Field::Num(v),
                _ => Field::Text(s.to_string()),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("metadata line {line}: {message}")]
    Metadata { line: usize, message: String },
    #[error("missing header row")]
    MissingHeader,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] io::Error),
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column, `None` for empty or text cells.
    pub fn numbers(&self, name: &str) -> Vec<Option<f64>> {
        match self.column(name) {
            Some(i) => self.rows.iter().map(|r| r[i].as_num()).collect(),
            None => Vec::new(),
        }
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<(), TableError> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}={v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Field::render))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("tables hold UTF-8 text")
    }
}

/// Parses a table written by [`Table::write`].
pub fn read_table(text: &str) -> Result<Table, TableError> {
    let mut metadata = Vec::new();
    let mut offset = 0;
    for (i, line) in text.split_inclusive('\n').enumerate() {
        let Some(rest) = line.strip_prefix('#') else {
            break;
        };
        offset += line.len();
        let (k, v) = rest.trim().split_once('=').ok_or_else(|| TableError::Metadata {
            line: i + 1,
            message: "expected # key=value".into(),
        })?;
        metadata.push((k.trim().to_string(), v.trim().to_string()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text[offset..].as_bytes());
    let mut records = reader.records();
    let header = records.next().ok_or(TableError::MissingHeader)??;
    let columns: Vec<String> = header.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in records {
        rows.push(record?.iter().map(Field::parse).collect());
    }
    Ok(Table {
        metadata,
        columns,
        rows,
    })
}
