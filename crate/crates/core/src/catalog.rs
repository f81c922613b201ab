//! Bibliographic catalogue records for exhibited objects.

use serde::{Deserialize, Serialize};

use crate::authority::{validate_authority_ref, Authority, AuthorityRef};
use crate::report::Report;
use crate::vocab::{Licence, ObjectTypeVocab};

/// A person or institution, pinned to an authority file when possible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AgentRef {
    Authority(AuthorityRef),
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Creator {
    pub role: String,
    pub agent: AgentRef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub id: String,
    pub title: String,
    pub object_type: String,
    pub room: u8,
    pub creators: Vec<Creator>,
    pub holder: AgentRef,
    pub place: Option<AuthorityRef>,
    pub notes: Option<String>,
    pub licence: Licence,
}

fn check_agent(report: &mut Report, location: &str, agent: &AgentRef) {
    if let AgentRef::Authority(aref) = agent {
        let sub = validate_authority_ref(aref);
        for v in sub.violations() {
            report.note_at(location, format!("{}: {}", aref.authority, v.message));
        }
    }
}

/// Validate one record against the record invariants and the object-type
/// vocabulary. Returns a report; an empty report means the record is sound.
pub fn validate_record(record: &CatalogRecord, vocab: &ObjectTypeVocab) -> Report {
    let mut report = Report::new();
    let at = if record.id.is_empty() { "<record>" } else { &record.id };

    if record.id.trim().is_empty() {
        report.note_at(at, "id must be non-empty");
    }
    if vocab.lookup(&record.object_type).is_none() {
        report.note_at(at, format!("unknown object type {:?}", record.object_type));
    }
    if !(1..=6).contains(&record.room) {
        report.note_at(at, format!("room {} out of range 1-6", record.room));
    }
    for creator in &record.creators {
        check_agent(&mut report, at, &creator.agent);
    }
    check_agent(&mut report, at, &record.holder);
    if let Some(place) = &record.place {
        if place.authority != Authority::GeoNames {
            report.note_at(at, "place must be a GeoNames reference");
        }
        let sub = validate_authority_ref(place);
        for v in sub.violations() {
            report.note_at(at, format!("GeoNames: {}", v.message));
        }
    }
    report
}

/// Dataset-level check on top of per-record validation: ids must be unique.
pub fn validate_dataset(records: &[CatalogRecord], vocab: &ObjectTypeVocab) -> Report {
    let mut report = Report::new();
    let mut seen = std::collections::BTreeSet::new();
    for record in records {
        report.merge(validate_record(record, vocab));
        if !seen.insert(record.id.as_str()) {
            report.note_at(&record.id, "duplicate id in dataset");
        }
    }
    report
}
