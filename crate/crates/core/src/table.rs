//! Tabular ingestion: a strict RFC-4180 reader plus schema-driven cell
//! validation.
//!
//! The reader is deliberately strict — curatorial exports must fail loudly,
//! with byte offsets, rather than silently shifting cells. Off-the-shelf CSV
//! readers recover from unbalanced quotes, which is exactly what we do not
//! want here.

use chrono::NaiveDate;
use thiserror::Error;

use crate::authority::{validate_authority_ref, Authority, AuthorityRef};
use crate::report::Report;
use crate::vocab::VocabRegistry;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CsvError {
    #[error("unbalanced quote: quoted field starting at byte {start} is never closed")]
    UnbalancedQuote { start: usize },
    #[error("stray quote inside unquoted field at byte {offset}")]
    StrayQuote { offset: usize },
    #[error("unexpected character {found:?} after closing quote at byte {offset}")]
    AfterQuote { offset: usize, found: char },
    #[error("row {row} has {found} cells, header has {expected}")]
    UnevenRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("input has no header row")]
    Empty,
    #[error("column name {0:?} appears more than once in the header")]
    DuplicateColumn(String),
    #[error("header contains an empty column name")]
    EmptyColumnName,
}

/// A parsed table: header plus rows of exactly header-width cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn cell<'a>(&'a self, row: &'a [String], column: &str) -> Option<&'a str> {
        self.column_index(column).map(|i| row[i].as_str())
    }
}

/// Split a list-valued cell on `|`, trimming segments and dropping empties.
pub fn split_list(cell: &str) -> Vec<String> {
    cell.split('|')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect()
}

/// Strict RFC-4180 record reader over UTF-8 text.
fn read_records(input: &str) -> Result<Vec<Vec<String>>, CsvError> {
    let bytes = input.as_bytes();
    let mut records = Vec::new();
    let mut record: Vec<String> = Vec::new();
    let mut field = String::new();
    let mut pos = 0usize;

    // A record ends at LF/CRLF outside quotes; a bare start-of-line at EOF
    // does not open an empty trailing record.
    let mut field_started = false;
    let mut record_started = false;

    while pos < bytes.len() {
        let b = bytes[pos];
        match b {
            b'"' if field.is_empty() && !field_started => {
                let start = pos;
                pos += 1;
                record_started = true;
                loop {
                    if pos >= bytes.len() {
                        return Err(CsvError::UnbalancedQuote { start });
                    }
                    if bytes[pos] == b'"' {
                        if bytes.get(pos + 1) == Some(&b'"') {
                            field.push('"');
                            pos += 2;
                        } else {
                            pos += 1;
                            break;
                        }
                    } else {
                        let c = input[pos..].chars().next().unwrap();
                        field.push(c);
                        pos += c.len_utf8();
                    }
                }
                match bytes.get(pos) {
                    None | Some(b',') | Some(b'\n') | Some(b'\r') => {}
                    Some(_) => {
                        let found = input[pos..].chars().next().unwrap();
                        return Err(CsvError::AfterQuote { offset: pos, found });
                    }
                }
                field_started = true;
            }
            b'"' => return Err(CsvError::StrayQuote { offset: pos }),
            b',' => {
                record.push(std::mem::take(&mut field));
                field_started = false;
                record_started = true;
                pos += 1;
            }
            b'\r' | b'\n' => {
                if b == b'\r' && bytes.get(pos + 1) == Some(&b'\n') {
                    pos += 2;
                } else {
                    pos += 1;
                }
                if record_started || field_started || !field.is_empty() {
                    record.push(std::mem::take(&mut field));
                    records.push(std::mem::take(&mut record));
                }
                field_started = false;
                record_started = false;
            }
            _ => {
                let c = input[pos..].chars().next().unwrap();
                field.push(c);
                pos += c.len_utf8();
                record_started = true;
            }
        }
    }
    if record_started || field_started || !field.is_empty() {
        record.push(field);
        records.push(record);
    }
    Ok(records)
}

/// Per-column expectations for a table schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    FreeText,
    /// Cell must resolve in the named vocabulary.
    Vocab(String),
    /// Cell must be a syntactically valid identifier of this authority.
    AuthorityId(Authority),
    /// ISO-8601 calendar date.
    Date,
    IntegerRange(i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSpec {
    pub name: String,
    pub constraint: Constraint,
    /// When true the cell must be non-empty on every row.
    pub required_cell: bool,
    /// List-valued cells use `|` as an internal separator.
    pub list: bool,
}

impl ColumnSpec {
    pub fn new(name: &str, constraint: Constraint, required_cell: bool) -> Self {
        ColumnSpec {
            name: name.to_string(),
            constraint,
            required_cell,
            list: false,
        }
    }

    fn list(mut self) -> Self {
        self.list = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSchema {
    pub name: String,
    pub columns: Vec<ColumnSpec>,
}

impl TableSchema {
    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|c| c.name.as_str())
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.columns.iter().any(|c| c.name == name)
    }
}

/// Schema of the bibliographic spreadsheet export.
pub fn bibliographic_schema() -> TableSchema {
    TableSchema {
        name: "bibliographic".to_string(),
        columns: vec![
            ColumnSpec::new("id", Constraint::FreeText, true),
            ColumnSpec::new("title", Constraint::FreeText, true),
            ColumnSpec::new("type", Constraint::Vocab("object_types".to_string()), true),
            ColumnSpec::new("room", Constraint::IntegerRange(1, 6), true),
            ColumnSpec::new("creators", Constraint::FreeText, false).list(),
            ColumnSpec::new("creator_viaf", Constraint::AuthorityId(Authority::Viaf), false),
            ColumnSpec::new("creator_ulan", Constraint::AuthorityId(Authority::Ulan), false),
            ColumnSpec::new("holder", Constraint::FreeText, false),
            ColumnSpec::new("holder_wd", Constraint::AuthorityId(Authority::Wikidata), false),
            ColumnSpec::new("place_gn", Constraint::AuthorityId(Authority::GeoNames), false),
            ColumnSpec::new("licence", Constraint::FreeText, false),
            ColumnSpec::new("notes", Constraint::FreeText, false),
        ],
    }
}

/// Schema of the digitisation spreadsheet export: one row per object/stage.
pub fn digitisation_schema() -> TableSchema {
    TableSchema {
        name: "digitisation".to_string(),
        columns: vec![
            ColumnSpec::new("object_id", Constraint::FreeText, true),
            ColumnSpec::new("stage", Constraint::Vocab("stage_classes".to_string()), true),
            ColumnSpec::new("institution", Constraint::FreeText, true),
            ColumnSpec::new("people", Constraint::FreeText, true).list(),
            ColumnSpec::new("technique", Constraint::Vocab("techniques".to_string()), false),
            ColumnSpec::new("tools", Constraint::FreeText, false).list(),
            ColumnSpec::new("date_start", Constraint::Date, true),
            ColumnSpec::new("date_end", Constraint::Date, true),
            ColumnSpec::new("digitized_object", Constraint::FreeText, false),
            ColumnSpec::new("output_level", Constraint::IntegerRange(0, 2), false),
        ],
    }
}

pub fn builtin_schema(name: &str) -> Option<TableSchema> {
    match name {
        "bibliographic" => Some(bibliographic_schema()),
        "digitisation" => Some(digitisation_schema()),
        _ => None,
    }
}

fn check_cell(
    report: &mut Report,
    registry: &VocabRegistry,
    spec: &ColumnSpec,
    row_number: usize,
    cell: &str,
) {
    let location = format!("row {row_number}, column \"{}\"", spec.name);
    if cell.trim().is_empty() {
        if spec.required_cell {
            report.note_at(location, "required cell is empty");
        }
        return;
    }
    match &spec.constraint {
        Constraint::FreeText => {}
        Constraint::Vocab(vocab) => {
            if let Err(e) = registry.lookup(vocab, cell) {
                report.note_at(location, e.to_string());
            }
        }
        Constraint::AuthorityId(kind) => {
            let sub = validate_authority_ref(&AuthorityRef::new(*kind, cell.trim()));
            for v in sub.violations() {
                report.note_at(&location, &v.message);
            }
        }
        Constraint::Date => {
            if cell.trim().parse::<NaiveDate>().is_err() {
                report.note_at(location, format!("{cell:?} is not an ISO-8601 date"));
            }
        }
        Constraint::IntegerRange(lo, hi) => match cell.trim().parse::<i64>() {
            Ok(n) if (*lo..=*hi).contains(&n) => {}
            Ok(n) => report.note_at(location, format!("{n} out of range {lo}-{hi}")),
            Err(_) => report.note_at(location, format!("{cell:?} is not an integer")),
        },
    }
}

/// Parse CSV text and validate it against a schema. Structural problems
/// (malformed CSV, uneven rows, bad header) are hard errors; cell-level
/// findings land in the report with row/column coordinates. Row numbers are
/// 1-based over data rows.
pub fn parse_table(
    input: &str,
    schema: &TableSchema,
    registry: &VocabRegistry,
) -> Result<(Table, Report), CsvError> {
    let mut records = read_records(input)?;
    if records.is_empty() {
        return Err(CsvError::Empty);
    }
    let header = records.remove(0);
    for (i, name) in header.iter().enumerate() {
        if name.trim().is_empty() {
            return Err(CsvError::EmptyColumnName);
        }
        if header[..i].contains(name) {
            return Err(CsvError::DuplicateColumn(name.clone()));
        }
    }
    for (i, row) in records.iter().enumerate() {
        if row.len() != header.len() {
            return Err(CsvError::UnevenRow {
                row: i + 1,
                expected: header.len(),
                found: row.len(),
            });
        }
    }
    let table = Table {
        header,
        rows: records,
    };

    let mut report = Report::new();
    for spec in &schema.columns {
        if table.column_index(&spec.name).is_none() {
            report.note(format!(
                "missing required column \"{}\" (schema {})",
                spec.name, schema.name
            ));
        }
    }
    for (i, row) in table.rows.iter().enumerate() {
        for spec in &schema.columns {
            if let Some(cell) = table.cell(row, &spec.name) {
                check_cell(&mut report, registry, spec, i + 1, cell);
            }
        }
    }
    Ok((table, report))
}
