//! Builders from validated tables into domain records; used by the ingest
//! pipeline for record-level validation on top of per-cell checks.

use std::collections::BTreeMap;

use crate::authority::{Authority, AuthorityRef};
use crate::catalog::{AgentRef, CatalogRecord, Creator};
use crate::process::{
    record_stage, validate_process, DateInterval, ProcessRecord, StageRecord, WorkflowStage,
};
use crate::report::Report;
use crate::table::{split_list, Table};
use crate::vocab::Licence;

fn cell<'a>(table: &'a Table, row: &'a [String], name: &str) -> &'a str {
    table.cell(row, name).unwrap_or("").trim()
}

fn opt_cell(table: &Table, row: &[String], name: &str) -> Option<String> {
    let value = cell(table, row, name);
    (!value.is_empty()).then(|| value.to_string())
}

/// Build catalogue records from a bibliographic table. Structural cell
/// problems are assumed to be already flagged by table validation; this
/// builder adds record- and dataset-level findings.
pub fn catalog_records_from_table(table: &Table) -> (Vec<CatalogRecord>, Report) {
    let mut report = Report::new();
    let mut records = Vec::new();

    for row in &table.rows {
        let mut creators: Vec<Creator> = split_list(cell(table, row, "creators"))
            .into_iter()
            .map(|entry| match entry.split_once(':') {
                Some((role, name)) => Creator {
                    role: role.trim().to_string(),
                    agent: AgentRef::Literal(name.trim().to_string()),
                },
                None => Creator {
                    role: "creator".to_string(),
                    agent: AgentRef::Literal(entry),
                },
            })
            .collect();
        if let Some(viaf) = opt_cell(table, row, "creator_viaf") {
            creators.push(Creator {
                role: "creator".to_string(),
                agent: AgentRef::Authority(AuthorityRef::new(Authority::Viaf, viaf)),
            });
        }
        if let Some(ulan) = opt_cell(table, row, "creator_ulan") {
            creators.push(Creator {
                role: "artist".to_string(),
                agent: AgentRef::Authority(AuthorityRef::new(Authority::Ulan, ulan)),
            });
        }
        let holder = match opt_cell(table, row, "holder_wd") {
            Some(wd) => AgentRef::Authority(AuthorityRef::new(Authority::Wikidata, wd)),
            None => AgentRef::Literal(cell(table, row, "holder").to_string()),
        };
        records.push(CatalogRecord {
            id: cell(table, row, "id").to_string(),
            title: cell(table, row, "title").to_string(),
            object_type: cell(table, row, "type").to_string(),
            room: cell(table, row, "room").parse().unwrap_or(0),
            creators,
            holder,
            place: opt_cell(table, row, "place_gn")
                .map(|gn| AuthorityRef::new(Authority::GeoNames, gn)),
            notes: opt_cell(table, row, "notes"),
            licence: Licence::parse(cell(table, row, "licence")),
        });
    }

    let mut seen = std::collections::BTreeSet::new();
    for record in &records {
        if !record.id.is_empty() && !seen.insert(record.id.clone()) {
            report.note_at(&record.id, "duplicate id in dataset");
        }
    }
    (records, report)
}

/// Build per-object process records from a digitisation table (one row per
/// object/stage) and validate each chain.
pub fn process_records_from_table(table: &Table) -> (Vec<ProcessRecord>, Report) {
    let mut report = Report::new();
    let mut by_object: BTreeMap<String, ProcessRecord> = BTreeMap::new();

    for (i, row) in table.rows.iter().enumerate() {
        let row_no = i + 1;
        let object_id = cell(table, row, "object_id").to_string();
        if object_id.is_empty() {
            continue; // already flagged by the table report
        }
        let stage: WorkflowStage = match cell(table, row, "stage").parse() {
            Ok(stage) => stage,
            Err(_) => continue, // already flagged by the table report
        };
        let dates = match (
            cell(table, row, "date_start").parse(),
            cell(table, row, "date_end").parse(),
        ) {
            (Ok(start), Ok(end)) => DateInterval::new(start, end),
            _ => continue, // already flagged by the table report
        };
        let record = StageRecord {
            stage,
            institution: cell(table, row, "institution").to_string(),
            people: split_list(cell(table, row, "people")),
            technique: opt_cell(table, row, "technique"),
            tools: split_list(cell(table, row, "tools")),
            dates,
        };
        let proc = by_object
            .entry(object_id.clone())
            .or_insert_with(|| ProcessRecord::new(object_id.clone()));
        match record_stage(proc, record) {
            Ok(next) => *proc = next,
            Err(e) => report.note_at(format!("row {row_no} ({object_id})"), e.to_string()),
        }
    }

    let records: Vec<ProcessRecord> = by_object.into_values().collect();
    for proc in &records {
        let sub = validate_process(proc);
        for v in sub.violations() {
            report.note_at(&proc.object_id, v.to_string());
        }
    }
    (records, report)
}
