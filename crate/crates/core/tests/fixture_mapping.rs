//! The shipped fixture CSVs against the shipped CRM profiles.
//!
//! The per-room inventory expected here is transcribed independently of the
//! fixture generator, so a slip in either shows up as a count mismatch.

use std::collections::BTreeMap;
use std::fs;

use teca_core::iri::canonical_ntriples;
use teca_core::mapping::{apply_mapping, crm_profiles};
use teca_core::process::summarize_workflow;
use teca_core::table::{bibliographic_schema, digitisation_schema, parse_table};
use teca_core::vocab::{default_base, VocabRegistry};

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    fs::read_to_string(path).expect("fixture file present")
}

fn registry() -> VocabRegistry {
    VocabRegistry::builtin(&default_base())
}

/// (room, type label) -> object count, summed over the inventory rows.
fn expected_inventory() -> BTreeMap<(u8, &'static str), usize> {
    let rooms: [(u8, &[(&str, usize)]); 6] = [
        (1, &[("Video", 2), ("Specimen", 8), ("Printed volume", 6), ("Nautical chart", 3),
              ("Print", 1), ("Diorama", 1), ("Herbarium", 1), ("Manuscript volume", 1),
              ("Painting", 1), ("Rooms/Painted ceilings", 1), ("Panels with graphics", 5)]),
        (2, &[("Herbarium", 6), ("Printed volume", 4), ("Manuscript table", 4), ("Specimen", 4),
              ("Model", 3), ("Manuscript volume", 2), ("Map", 2), ("Painting", 1), ("Vase", 1),
              ("Rooms/Painted ceilings", 1), ("Video", 1), ("Panels with graphics", 10)]),
        (3, &[("Woodcut", 7), ("Printed volume", 5), ("Video", 2), ("Manuscript table", 1),
              ("Rooms/Painted ceilings", 1), ("Panels with graphics", 4)]),
        (4, &[("Video", 2), ("Knife handle", 2), ("Printed volume", 2), ("Mask", 1),
              ("Pendant", 1), ("Rooms/Painted ceilings", 1), ("Panels with graphics", 4)]),
        (5, &[("Specimen", 79), ("Artifact", 23), ("Cast", 9), ("Gemstone", 9),
              ("Manuscript volume", 8), ("Printed volume", 5), ("Medal", 2), ("Statue", 2),
              ("Video", 2), ("Manuscript table", 1), ("Necklace", 1), ("Rattle", 1),
              ("Lamp", 1), ("Axe", 1), ("Print", 1), ("Rooms/Painted ceilings", 1)]),
        (6, &[("Model", 18), ("Specimen", 13), ("Printed volume", 5), ("Cast", 2), ("Print", 1),
              ("Illuminated manuscript", 1), ("Manuscript table", 1), ("Painting", 1),
              ("Microscope", 1), ("Compass", 1), ("Bottle", 1), ("Electrostatic machine", 1),
              ("Discharge arc", 1), ("Technical instrument", 1), ("Rooms/Painted ceilings", 1),
              ("Panels with graphics", 4)]),
    ];
    let mut expected = BTreeMap::new();
    for (room, pairs) in rooms {
        for (label, count) in pairs {
            expected.insert((room, *label), *count);
        }
    }
    expected
}

#[test]
fn bibliographic_fixture_matches_the_room_inventory() {
    let (table, report) =
        parse_table(&fixture("bibliographic.csv"), &bibliographic_schema(), &registry()).unwrap();
    assert!(report.ok(), "{report}");
    assert_eq!(table.rows.len(), 301);

    let mut counts: BTreeMap<(u8, String), usize> = BTreeMap::new();
    for row in &table.rows {
        let room: u8 = table.cell(row, "room").unwrap().parse().unwrap();
        let label = table.cell(row, "type").unwrap().to_string();
        *counts.entry((room, label)).or_default() += 1;
    }
    let expected = expected_inventory();
    assert_eq!(counts.len(), expected.len());
    for ((room, label), count) in &expected {
        assert_eq!(
            counts.get(&(*room, label.to_string())),
            Some(count),
            "room {room}, type {label}"
        );
    }
    let per_room: Vec<usize> = (1..=6)
        .map(|r| counts.iter().filter(|((room, _), _)| *room == r).map(|(_, c)| c).sum())
        .collect();
    assert_eq!(per_room, vec![30, 39, 20, 13, 146, 53]);
}

#[test]
fn bibliographic_profile_emits_inventory_type_triples() {
    let registry = registry();
    let (table, _) =
        parse_table(&fixture("bibliographic.csv"), &bibliographic_schema(), &registry).unwrap();
    let (profile, _) = crm_profiles();
    let (triples, report) =
        apply_mapping(&table, &profile, &bibliographic_schema(), &registry).unwrap();
    assert!(report.ok(), "{report}");

    let p2 = "http://www.cidoc-crm.org/cidoc-crm/P2_has_type";
    let mut by_term: BTreeMap<String, usize> = BTreeMap::new();
    for t in &triples {
        if t.predicate.as_str() == p2 {
            let term = t.object.as_iri().expect("type objects are term IRIs");
            let label = registry
                .object_types()
                .label_for(term)
                .expect("every emitted term is in the vocabulary");
            *by_term.entry(label.to_string()).or_default() += 1;
        }
    }
    assert_eq!(by_term.values().sum::<usize>(), 301, "one type triple per object");

    let mut expected_by_type: BTreeMap<String, usize> = BTreeMap::new();
    for ((_, label), count) in expected_inventory() {
        *expected_by_type.entry(label.to_string()).or_default() += count;
    }
    assert_eq!(by_term, expected_by_type);
    assert_eq!(by_term["Specimen"], 104);
    assert_eq!(by_term["Printed volume"], 27);
    assert_eq!(by_term["Herbarium"], 7);
    assert_eq!(by_term["Model"], 21);
    assert_eq!(by_term["Woodcut"], 7);
    assert_eq!(by_term["Cast"], 11);
    assert_eq!(by_term["Medal"], 2);
}

#[test]
fn shipped_profiles_reach_predicate_closure_on_the_fixtures() {
    let registry = registry();
    let (bib_profile, dig_profile) = crm_profiles();

    let (bib_table, _) =
        parse_table(&fixture("bibliographic.csv"), &bibliographic_schema(), &registry).unwrap();
    let (bib_triples, report) =
        apply_mapping(&bib_table, &bib_profile, &bibliographic_schema(), &registry).unwrap();
    assert!(report.ok(), "{report}");
    let emitted: std::collections::BTreeSet<_> =
        bib_triples.iter().map(|t| t.predicate.clone()).collect();
    assert_eq!(emitted, bib_profile.declared_predicates());

    let (dig_table, report) =
        parse_table(&fixture("digitisation.csv"), &digitisation_schema(), &registry).unwrap();
    assert!(report.ok(), "{report}");
    let (dig_triples, report) =
        apply_mapping(&dig_table, &dig_profile, &digitisation_schema(), &registry).unwrap();
    assert!(report.ok(), "{report}");
    let emitted: std::collections::BTreeSet<_> =
        dig_triples.iter().map(|t| t.predicate.clone()).collect();
    assert_eq!(emitted, dig_profile.declared_predicates());

    // Determinism: two applications serialize to identical bytes.
    let (again, _) =
        apply_mapping(&dig_table, &dig_profile, &digitisation_schema(), &registry).unwrap();
    assert_eq!(canonical_ntriples(&dig_triples), canonical_ntriples(&again));
}

#[test]
fn digitisation_fixture_builds_valid_process_records() {
    let registry = registry();
    let (table, report) =
        parse_table(&fixture("digitisation.csv"), &digitisation_schema(), &registry).unwrap();
    assert!(report.ok(), "{report}");
    let (records, report) = teca_core::ingest::process_records_from_table(&table);
    assert!(report.ok(), "{report}");
    assert_eq!(records.len(), 5);

    let complete = records
        .iter()
        .find(|r| r.object_id == "r5-specimen-01")
        .unwrap();
    assert_eq!(complete.stages.len(), 7);

    let summary = summarize_workflow(&records);
    assert_eq!(summary.technique_counts["photogrammetry"], 2);
    assert_eq!(summary.technique_counts["SLS"], 1);
    assert_eq!(summary.technique_counts["CG modelling"], 1);
    assert_eq!(summary.technique_counts["reuse of existing model"], 1);
    assert_eq!(
        summary.date_span,
        Some(("2023-03-27".parse().unwrap(), "2023-06-26".parse().unwrap()))
    );
}

#[test]
fn digitisation_profile_yields_an_event_node_per_row() {
    let registry = registry();
    let (table, _) =
        parse_table(&fixture("digitisation.csv"), &digitisation_schema(), &registry).unwrap();
    let (_, dig_profile) = crm_profiles();
    let (triples, _) =
        apply_mapping(&table, &dig_profile, &digitisation_schema(), &registry).unwrap();

    let rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    let event_nodes: std::collections::BTreeSet<_> = triples
        .iter()
        .filter(|t| {
            t.predicate.as_str() == rdf_type
                && t.object
                    .as_iri()
                    .is_some_and(|o| o.as_str().contains("CRMdig"))
        })
        .map(|t| t.subject.clone())
        .collect();
    assert_eq!(event_nodes.len(), 22, "one CRMdig event per fixture row");

    // The complete chain contributes seven event nodes of its own.
    let basilisk_events = event_nodes
        .iter()
        .filter(|s| s.as_str().contains("/process/r5-specimen-01/"))
        .count();
    assert_eq!(basilisk_events, 7);
}
