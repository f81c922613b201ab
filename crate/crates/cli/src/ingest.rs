//! The ingest pipeline: parse CSV exports, validate, crosswalk to triples
//! and commit one snapshot per changed entity.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};

use teca_core::ingest::{catalog_records_from_table, process_records_from_table};
use teca_core::iri::{Iri, Quad, Triple};
use teca_core::mapping::{self, apply_mapping_grouped, MappingDoc};
use teca_core::report::Report;
use teca_core::store::{CommitMeta, Store, StoreError, Timestamp};
use teca_core::table::{bibliographic_schema, digitisation_schema, parse_table, TableSchema};
use teca_core::vocab::VocabRegistry;

pub struct IngestConfig {
    pub bibliographic_csv: PathBuf,
    pub digitisation_csv: Option<PathBuf>,
    pub bib_profile: Option<PathBuf>,
    pub dig_profile: Option<PathBuf>,
    pub base_override: Option<Iri>,
    pub agent: String,
    pub source: Option<Iri>,
    pub at: Timestamp,
}

#[derive(Debug, Default)]
pub struct IngestOutcome {
    pub created: usize,
    pub updated: usize,
    pub unchanged: usize,
    pub warnings: Report,
}

impl IngestOutcome {
    pub fn summary(&self) -> String {
        format!(
            "created {} entities, updated {}, unchanged {} ({} warnings)",
            self.created,
            self.updated,
            self.unchanged,
            self.warnings.violations().len()
        )
    }
}

fn load_profile(path: Option<&Path>, builtin: &'static str) -> Result<MappingDoc> {
    let text = match path {
        Some(path) => {
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        }
        None => builtin.to_string(),
    };
    mapping::parse_mapping(&text).map_err(|e| anyhow!("mapping profile: {e}"))
}

fn commit_table(
    store: &mut Store,
    schema: &TableSchema,
    registry: &VocabRegistry,
    table: &teca_core::table::Table,
    profile: &MappingDoc,
    cfg: &IngestConfig,
    outcome: &mut IngestOutcome,
) -> Result<()> {
    let (emissions, report) = apply_mapping_grouped(table, profile, schema, registry)
        .map_err(|e| anyhow!("binding {} profile: {e}", schema.name))?;
    outcome.warnings.merge(report);

    // Rows may share an entity (flagged elsewhere as duplicate ids); their
    // triples are unioned so the commit below stays deterministic.
    let mut per_entity: BTreeMap<Iri, (usize, BTreeSet<Triple>)> = BTreeMap::new();
    for emission in emissions {
        let entry = per_entity
            .entry(emission.entity.clone())
            .or_insert_with(|| (emission.row, BTreeSet::new()));
        entry.1.extend(emission.triples);
    }

    for (entity, (row, triples)) in per_entity {
        let meta = |description: String| CommitMeta {
            agent: teca_core::iri::Term::Literal(teca_core::iri::Literal::simple(
                cfg.agent.clone(),
            )),
            source: cfg.source.clone(),
            description,
            at: cfg.at,
        };
        if !store.contains(&entity) {
            store
                .create_entity(
                    &entity,
                    &triples,
                    meta(format!("created from {} row {row}", schema.name)),
                )
                .with_context(|| format!("creating {entity}"))?;
            outcome.created += 1;
            continue;
        }
        let head: BTreeSet<Triple> = store
            .head_graph(&entity)
            .expect("entity checked above")
            .iter()
            .map(Quad::triple)
            .collect();
        let insert: BTreeSet<Triple> = triples.difference(&head).cloned().collect();
        let delete: BTreeSet<Triple> = head.difference(&triples).cloned().collect();
        if insert.is_empty() && delete.is_empty() {
            outcome.unchanged += 1;
            continue;
        }
        match store.update_entity(
            &entity,
            &insert,
            &delete,
            meta(format!("updated from {} row {row}", schema.name)),
        ) {
            Ok(_) => outcome.updated += 1,
            Err(e @ StoreError::StaleTimestamp { .. }) => {
                return Err(anyhow!("updating {entity}: {e} (pass a later --at)"))
            }
            Err(e) => return Err(anyhow!("updating {entity}: {e}")),
        }
    }
    Ok(())
}

/// Run a full ingest. Hard errors (unreadable files, malformed CSV, profile
/// bind failures, store rejections) abort; validation findings accumulate
/// as warnings and never change the exit status.
pub fn run_ingest(store: &mut Store, base: &Iri, cfg: &IngestConfig) -> Result<IngestOutcome> {
    let registry = VocabRegistry::builtin(base);
    let mut outcome = IngestOutcome::default();

    let bib_text = fs::read_to_string(&cfg.bibliographic_csv)
        .with_context(|| format!("reading {}", cfg.bibliographic_csv.display()))?;
    let bib_schema = bibliographic_schema();
    let (bib_table, report) = parse_table(&bib_text, &bib_schema, &registry)
        .map_err(|e| anyhow!("{}: {e}", cfg.bibliographic_csv.display()))?;
    outcome.warnings.merge(report);

    let (_, report) = catalog_records_from_table(&bib_table);
    outcome.warnings.merge(report);

    let mut bib_profile = load_profile(cfg.bib_profile.as_deref(), mapping::bibliographic_profile_text())?;
    if let Some(base_override) = &cfg.base_override {
        bib_profile = bib_profile.with_base(base_override.clone());
    }
    commit_table(
        store,
        &bib_schema,
        &registry,
        &bib_table,
        &bib_profile,
        cfg,
        &mut outcome,
    )?;

    if let Some(dig_csv) = &cfg.digitisation_csv {
        let dig_text = fs::read_to_string(dig_csv)
            .with_context(|| format!("reading {}", dig_csv.display()))?;
        let dig_schema = digitisation_schema();
        let (dig_table, report) = parse_table(&dig_text, &dig_schema, &registry)
            .map_err(|e| anyhow!("{}: {e}", dig_csv.display()))?;
        outcome.warnings.merge(report);

        let (_, report) = process_records_from_table(&dig_table);
        outcome.warnings.merge(report);

        let mut dig_profile =
            load_profile(cfg.dig_profile.as_deref(), mapping::digitisation_profile_text())?;
        if let Some(base_override) = &cfg.base_override {
            dig_profile = dig_profile.with_base(base_override.clone());
        }
        commit_table(
            store,
            &dig_schema,
            &registry,
            &dig_table,
            &dig_profile,
            cfg,
            &mut outcome,
        )?;
    }

    Ok(outcome)
}
