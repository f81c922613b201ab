//! Append-only, per-entity snapshot store with invertible deltas.
//!
//! Every entity owns a named data graph (`<entity>/graph`) and a chain of
//! snapshots (`<entity>/prov/se/1`, `se/2`, ...). A snapshot records who
//! changed what and when, a link to the previous snapshot, and the exact
//! delta (inserted and deleted quads) that produced its state. Deltas are
//! invertible by swapping their sides, so any historical state can be
//! recovered by walking back from the materialized head. History is never
//! rewritten: even a restore is a new forward commit.

mod prov;
mod query;

pub use prov::{parse_prov, parse_update_query, ProvBlock, ProvError};
pub use query::{
    eval_bgp, BgpQuery, Bindings, CrossDeltaHit, CrossVersionHit, PatternTerm, QueryParseError,
    TriplePattern,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, SecondsFormat, TimeZone, Utc};
use thiserror::Error;

use crate::iri::{Iri, Quad, Term, Triple};

/// UTC instant at second resolution. Supplied by callers, never sampled
/// from the wall clock inside the engine, so runs are reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(DateTime<Utc>);

impl Timestamp {
    pub fn from_unix(secs: i64) -> Self {
        Timestamp(Utc.timestamp_opt(secs, 0).single().expect("valid unix time"))
    }

    pub fn as_unix(&self) -> i64 {
        self.0.timestamp()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid timestamp {0:?} (expected RFC 3339, e.g. 2023-06-26T00:00:00Z)")]
pub struct TimestampError(pub String);

impl FromStr for Timestamp {
    type Err = TimestampError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parsed = DateTime::parse_from_rfc3339(s.trim())
            .map_err(|_| TimestampError(s.to_string()))?;
        Ok(Timestamp::from_unix(parsed.timestamp()))
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.to_rfc3339_opts(SecondsFormat::Secs, true))
    }
}

/// Which side of a delta a query should look at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DeltaSide {
    Insertions,
    Deletions,
}

impl fmt::Display for DeltaSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaSide::Insertions => "insertions",
            DeltaSide::Deletions => "deletions",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown delta side {0:?} (expected insertions or deletions)")]
pub struct UnknownSide(pub String);

impl FromStr for DeltaSide {
    type Err = UnknownSide;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "insertions" => Ok(DeltaSide::Insertions),
            "deletions" => Ok(DeltaSide::Deletions),
            other => Err(UnknownSide(other.to_string())),
        }
    }
}

/// Exact change set: quads added and quads removed. The two sides are
/// disjoint by construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Delta {
    insertions: BTreeSet<Quad>,
    deletions: BTreeSet<Quad>,
}

impl Delta {
    pub fn new(insertions: BTreeSet<Quad>, deletions: BTreeSet<Quad>) -> Result<Self, StoreError> {
        let overlap: Vec<Quad> = insertions.intersection(&deletions).cloned().collect();
        if !overlap.is_empty() {
            return Err(StoreError::OverlappingDelta { quads: overlap });
        }
        Ok(Delta {
            insertions,
            deletions,
        })
    }

    pub fn insertions(&self) -> &BTreeSet<Quad> {
        &self.insertions
    }

    pub fn deletions(&self) -> &BTreeSet<Quad> {
        &self.deletions
    }

    pub fn is_empty(&self) -> bool {
        self.insertions.is_empty() && self.deletions.is_empty()
    }

    /// The reverse operation: swap insertions and deletions.
    pub fn invert(&self) -> Delta {
        Delta {
            insertions: self.deletions.clone(),
            deletions: self.insertions.clone(),
        }
    }

    /// Apply to a graph, checking exactness: every deletion must be present
    /// and no insertion may already be present.
    pub fn apply_to(&self, graph: &BTreeSet<Quad>) -> Result<BTreeSet<Quad>, StoreError> {
        let missing: Vec<Quad> = self.deletions.difference(graph).cloned().collect();
        let colliding: Vec<Quad> = self.insertions.intersection(graph).cloned().collect();
        if !missing.is_empty() || !colliding.is_empty() {
            return Err(StoreError::InapplicableDelta { missing, colliding });
        }
        let mut next: BTreeSet<Quad> = graph.difference(&self.deletions).cloned().collect();
        next.extend(self.insertions.iter().cloned());
        Ok(next)
    }
}

/// The reverse operation of a delta (free-function form of [`Delta::invert`]).
pub fn invert_delta(delta: &Delta) -> Delta {
    delta.invert()
}

/// One immutable provenance state of an entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub id: Iri,
    pub entity: Iri,
    pub valid_from: Timestamp,
    pub valid_to: Option<Timestamp>,
    pub agent: Term,
    pub primary_source: Option<Iri>,
    pub description: String,
    pub prev: Option<Iri>,
    pub delta: Delta,
}

impl Snapshot {
    pub fn ordinal(&self) -> usize {
        snapshot_ordinal(&self.entity, &self.id).expect("snapshot ids are minted by the store")
    }
}

/// Commit metadata shared by create/update/restore.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitMeta {
    pub agent: Term,
    pub source: Option<Iri>,
    pub description: String,
    pub at: Timestamp,
}

impl CommitMeta {
    pub fn new(agent: impl Into<String>, description: impl Into<String>, at: Timestamp) -> Self {
        CommitMeta {
            agent: Term::Literal(crate::iri::Literal::simple(agent)),
            source: None,
            description: description.into(),
            at,
        }
    }
}

pub fn entity_graph(entity: &Iri) -> Iri {
    Iri::new(format!("{}/graph", entity.as_str())).expect("entity IRI stays valid with suffix")
}

pub fn prov_graph(entity: &Iri) -> Iri {
    Iri::new(format!("{}/prov/", entity.as_str())).expect("entity IRI stays valid with suffix")
}

pub fn snapshot_iri(entity: &Iri, ordinal: usize) -> Iri {
    Iri::new(format!("{}/prov/se/{ordinal}", entity.as_str()))
        .expect("entity IRI stays valid with suffix")
}

pub fn snapshot_ordinal(entity: &Iri, id: &Iri) -> Option<usize> {
    id.as_str()
        .strip_prefix(entity.as_str())?
        .strip_prefix("/prov/se/")?
        .parse()
        .ok()
}

fn format_quads(quads: &[Quad]) -> String {
    quads
        .iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("entity exists: {0}")]
    EntityExists(Iri),
    #[error("unknown entity {0}")]
    UnknownEntity(Iri),
    #[error("an entity must assert something: creation with no triples")]
    EmptyCreation,
    #[error("no-op update: delta has no insertions and no deletions")]
    NoOpUpdate,
    #[error("stale timestamp {at} (head snapshot of {entity} is valid from {head})")]
    StaleTimestamp {
        entity: Iri,
        at: Timestamp,
        head: Timestamp,
    },
    #[error("delta sides overlap on: {}", format_quads(.quads))]
    OverlappingDelta { quads: Vec<Quad> },
    #[error("inapplicable delta: missing deletions [{}], colliding insertions [{}]",
            format_quads(.missing), format_quads(.colliding))]
    InapplicableDelta {
        missing: Vec<Quad>,
        colliding: Vec<Quad>,
    },
    #[error("unknown snapshot se/{ordinal} for {entity}")]
    UnknownSnapshot { entity: Iri, ordinal: usize },
    #[error("entity {entity} did not exist at {at}")]
    NotYetCreated { entity: Iri, at: Timestamp },
    #[error("already at se/{0}: restoring to the head would be a no-op update")]
    RestoreToHead(usize),
    #[error("restore to se/{0} would not change the head graph")]
    RestoreNoChange(usize),
}

#[derive(Debug, Clone, Default)]
struct EntityChain {
    snapshots: Vec<Snapshot>,
    head: BTreeSet<Quad>,
}

/// The store: entity chains plus materialized heads.
#[derive(Debug, Clone, Default)]
pub struct Store {
    entities: BTreeMap<Iri, EntityChain>,
}

impl Store {
    pub fn new() -> Self {
        Store::default()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn entities(&self) -> impl Iterator<Item = &Iri> {
        self.entities.keys()
    }

    pub fn contains(&self, entity: &Iri) -> bool {
        self.entities.contains_key(entity)
    }

    fn chain_of(&self, entity: &Iri) -> Result<&EntityChain, StoreError> {
        self.entities
            .get(entity)
            .ok_or_else(|| StoreError::UnknownEntity(entity.clone()))
    }

    pub fn snapshots(&self, entity: &Iri) -> Result<&[Snapshot], StoreError> {
        Ok(&self.chain_of(entity)?.snapshots)
    }

    pub fn snapshot(&self, entity: &Iri, ordinal: usize) -> Result<&Snapshot, StoreError> {
        self.chain_of(entity)?
            .snapshots
            .get(ordinal.wrapping_sub(1))
            .ok_or_else(|| StoreError::UnknownSnapshot {
                entity: entity.clone(),
                ordinal,
            })
    }

    pub fn head_ordinal(&self, entity: &Iri) -> Result<usize, StoreError> {
        Ok(self.chain_of(entity)?.snapshots.len())
    }

    /// The materialized current graph of an entity.
    pub fn head_graph(&self, entity: &Iri) -> Result<&BTreeSet<Quad>, StoreError> {
        Ok(&self.chain_of(entity)?.head)
    }

    fn lift(entity: &Iri, triples: &BTreeSet<Triple>) -> BTreeSet<Quad> {
        let graph = entity_graph(entity);
        triples
            .iter()
            .map(|t| Quad::new(t.clone(), graph.clone()))
            .collect()
    }

    /// Commit the creation snapshot (`se/1`) of a new entity.
    pub fn create_entity(
        &mut self,
        entity: &Iri,
        triples: &BTreeSet<Triple>,
        meta: CommitMeta,
    ) -> Result<&Snapshot, StoreError> {
        if self.entities.contains_key(entity) {
            return Err(StoreError::EntityExists(entity.clone()));
        }
        if triples.is_empty() {
            return Err(StoreError::EmptyCreation);
        }
        let quads = Self::lift(entity, triples);
        let snapshot = Snapshot {
            id: snapshot_iri(entity, 1),
            entity: entity.clone(),
            valid_from: meta.at,
            valid_to: None,
            agent: meta.agent,
            primary_source: meta.source,
            description: meta.description,
            prev: None,
            delta: Delta {
                insertions: quads.clone(),
                deletions: BTreeSet::new(),
            },
        };
        let chain = self.entities.entry(entity.clone()).or_default();
        chain.snapshots.push(snapshot);
        chain.head = quads;
        Ok(chain.snapshots.last().unwrap())
    }

    fn commit_delta(
        &mut self,
        entity: &Iri,
        delta: Delta,
        meta: CommitMeta,
    ) -> Result<&Snapshot, StoreError> {
        let chain = self
            .entities
            .get_mut(entity)
            .ok_or_else(|| StoreError::UnknownEntity(entity.clone()))?;
        if delta.is_empty() {
            return Err(StoreError::NoOpUpdate);
        }
        let head = chain.snapshots.last().expect("chains are never empty");
        if meta.at <= head.valid_from {
            return Err(StoreError::StaleTimestamp {
                entity: entity.clone(),
                at: meta.at,
                head: head.valid_from,
            });
        }
        let next_head = delta.apply_to(&chain.head)?;
        let ordinal = chain.snapshots.len() + 1;
        let prev_id = head.id.clone();
        chain.snapshots.last_mut().unwrap().valid_to = Some(meta.at);
        chain.snapshots.push(Snapshot {
            id: snapshot_iri(entity, ordinal),
            entity: entity.clone(),
            valid_from: meta.at,
            valid_to: None,
            agent: meta.agent,
            primary_source: meta.source,
            description: meta.description,
            prev: Some(prev_id),
            delta,
        });
        chain.head = next_head;
        Ok(chain.snapshots.last().unwrap())
    }

    /// Commit an update snapshot from triple-level insertions/deletions.
    pub fn update_entity(
        &mut self,
        entity: &Iri,
        insert: &BTreeSet<Triple>,
        delete: &BTreeSet<Triple>,
        meta: CommitMeta,
    ) -> Result<&Snapshot, StoreError> {
        self.chain_of(entity)?;
        let delta = Delta::new(Self::lift(entity, insert), Self::lift(entity, delete))?;
        self.commit_delta(entity, delta, meta)
    }

    /// State of snapshot `ordinal`, computed by reverse-applying deltas from
    /// the materialized head down to the target.
    pub fn materialize(&self, entity: &Iri, ordinal: usize) -> Result<BTreeSet<Quad>, StoreError> {
        let chain = self.chain_of(entity)?;
        let head_ordinal = chain.snapshots.len();
        if ordinal == 0 || ordinal > head_ordinal {
            return Err(StoreError::UnknownSnapshot {
                entity: entity.clone(),
                ordinal,
            });
        }
        let mut graph = chain.head.clone();
        for k in ((ordinal + 1)..=head_ordinal).rev() {
            let delta = &chain.snapshots[k - 1].delta;
            graph = delta.invert().apply_to(&graph)?;
        }
        Ok(graph)
    }

    /// State of the snapshot whose validity interval contains `at`.
    pub fn materialize_at(&self, entity: &Iri, at: Timestamp) -> Result<BTreeSet<Quad>, StoreError> {
        let chain = self.chain_of(entity)?;
        let mut target = None;
        for (i, snapshot) in chain.snapshots.iter().enumerate() {
            if snapshot.valid_from <= at {
                target = Some(i + 1);
            }
        }
        match target {
            Some(ordinal) => self.materialize(entity, ordinal),
            None => Err(StoreError::NotYetCreated {
                entity: entity.clone(),
                at,
            }),
        }
    }

    /// Net change between two snapshots of one entity:
    /// insertions = state(j) without state(i), deletions the reverse.
    pub fn delta_between(&self, entity: &Iri, i: usize, j: usize) -> Result<Delta, StoreError> {
        let head = self.head_ordinal(entity)?;
        for ordinal in [i, j] {
            if ordinal == 0 || ordinal > head {
                return Err(StoreError::UnknownSnapshot {
                    entity: entity.clone(),
                    ordinal,
                });
            }
        }
        let state_i = self.materialize(entity, i)?;
        let state_j = self.materialize(entity, j)?;
        Ok(Delta {
            insertions: state_j.difference(&state_i).cloned().collect(),
            deletions: state_i.difference(&state_j).cloned().collect(),
        })
    }

    /// Append-only revert: commit a new head whose graph equals state(k).
    pub fn restore(
        &mut self,
        entity: &Iri,
        ordinal: usize,
        meta: CommitMeta,
    ) -> Result<&Snapshot, StoreError> {
        let head = self.head_ordinal(entity)?;
        if ordinal == 0 || ordinal > head {
            return Err(StoreError::UnknownSnapshot {
                entity: entity.clone(),
                ordinal,
            });
        }
        if ordinal == head {
            return Err(StoreError::RestoreToHead(ordinal));
        }
        let delta = self.delta_between(entity, head, ordinal)?;
        if delta.is_empty() {
            return Err(StoreError::RestoreNoChange(ordinal));
        }
        self.commit_delta(entity, delta, meta)
    }

    /// Every instant at which some entity changed, sorted: the dataset
    /// version axis used by cross-version queries.
    pub fn dataset_versions(&self) -> Vec<Timestamp> {
        let mut versions: BTreeSet<Timestamp> = BTreeSet::new();
        for chain in self.entities.values() {
            for snapshot in &chain.snapshots {
                versions.insert(snapshot.valid_from);
            }
        }
        versions.into_iter().collect()
    }

    /// Union of all entity states at `at`; entities not yet created
    /// contribute nothing.
    pub fn dataset_at(&self, at: Timestamp) -> BTreeSet<Quad> {
        let mut quads = BTreeSet::new();
        for entity in self.entities.keys() {
            if let Ok(state) = self.materialize_at(entity, at) {
                quads.extend(state);
            }
        }
        quads
    }

    /// Union of all materialized heads (the latest dataset version).
    pub fn dataset_head(&self) -> BTreeSet<Quad> {
        let mut quads = BTreeSet::new();
        for chain in self.entities.values() {
            quads.extend(chain.head.iter().cloned());
        }
        quads
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iri::Literal;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn entity() -> Iri {
        iri("https://example.org/aldrovandi/obj/basilisk")
    }

    fn triple(p: &str, o: &str) -> Triple {
        Triple::new(
            entity(),
            iri(&format!("https://example.org/aldrovandi/prop/{p}")),
            Literal::simple(o),
        )
    }

    fn meta(at: i64) -> CommitMeta {
        CommitMeta::new("curator", "test commit", Timestamp::from_unix(at))
    }

    fn creation_triples() -> BTreeSet<Triple> {
        [triple("title", "Basilisco"), triple("type", "Specimen"), triple("room", "5")]
            .into_iter()
            .collect()
    }

    #[test]
    fn creation_commits_se1_with_head() {
        let mut store = Store::new();
        let snapshot = store
            .create_entity(&entity(), &creation_triples(), meta(100))
            .unwrap();
        assert_eq!(snapshot.ordinal(), 1);
        assert!(snapshot.prev.is_none());
        assert!(snapshot.delta.deletions().is_empty());
        assert_eq!(store.head_graph(&entity()).unwrap().len(), 3);
        assert_eq!(
            store.materialize_at(&entity(), Timestamp::from_unix(100)).unwrap().len(),
            3
        );
    }

    #[test]
    fn creating_twice_is_rejected() {
        let mut store = Store::new();
        store.create_entity(&entity(), &creation_triples(), meta(100)).unwrap();
        let err = store
            .create_entity(&entity(), &creation_triples(), meta(200))
            .unwrap_err();
        assert!(matches!(err, StoreError::EntityExists(_)));
    }

    #[test]
    fn empty_creation_is_rejected() {
        let mut store = Store::new();
        let err = store
            .create_entity(&entity(), &BTreeSet::new(), meta(100))
            .unwrap_err();
        assert_eq!(err, StoreError::EmptyCreation);
    }

    #[test]
    fn update_swaps_exactly_the_touched_triples() {
        let mut store = Store::new();
        store.create_entity(&entity(), &creation_triples(), meta(100)).unwrap();
        let insert = [triple("title", "Basilisco (corrected)")].into_iter().collect();
        let delete = [triple("title", "Basilisco")].into_iter().collect();
        let snapshot = store
            .update_entity(&entity(), &insert, &delete, meta(200))
            .unwrap();
        assert_eq!(snapshot.ordinal(), 2);
        assert_eq!(snapshot.prev, Some(snapshot_iri(&entity(), 1)));
        let head = store.head_graph(&entity()).unwrap();
        assert_eq!(head.len(), 3);
        assert!(head.iter().any(|q| q.object
            == Term::Literal(Literal::simple("Basilisco (corrected)"))));
        // The previous snapshot is now closed at the update instant.
        let first = store.snapshot(&entity(), 1).unwrap();
        assert_eq!(first.valid_to, Some(Timestamp::from_unix(200)));
    }

    #[test]
    fn deleting_an_absent_quad_is_rejected_listing_it() {
        let mut store = Store::new();
        store.create_entity(&entity(), &creation_triples(), meta(100)).unwrap();
        let delete: BTreeSet<Triple> = [triple("title", "nope")].into_iter().collect();
        let err = store
            .update_entity(&entity(), &BTreeSet::new(), &delete, meta(200))
            .unwrap_err();
        match err {
            StoreError::InapplicableDelta { missing, colliding } => {
                assert_eq!(missing.len(), 1);
                assert!(colliding.is_empty());
                assert!(missing[0].to_string().contains("nope"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn inserting_a_present_quad_is_rejected() {
        let mut store = Store::new();
        store.create_entity(&entity(), &creation_triples(), meta(100)).unwrap();
        let insert = [triple("title", "Basilisco")].into_iter().collect();
        let err = store
            .update_entity(&entity(), &insert, &BTreeSet::new(), meta(200))
            .unwrap_err();
        assert!(matches!(err, StoreError::InapplicableDelta { .. }));
    }

    #[test]
    fn noop_update_is_rejected() {
        let mut store = Store::new();
        store.create_entity(&entity(), &creation_triples(), meta(100)).unwrap();
        let err = store
            .update_entity(&entity(), &BTreeSet::new(), &BTreeSet::new(), meta(200))
            .unwrap_err();
        assert_eq!(err, StoreError::NoOpUpdate);
    }

    #[test]
    fn stale_timestamp_is_rejected() {
        let mut store = Store::new();
        store.create_entity(&entity(), &creation_triples(), meta(100)).unwrap();
        let insert = [triple("note", "x")].into_iter().collect();
        let err = store
            .update_entity(&entity(), &insert, &BTreeSet::new(), meta(100))
            .unwrap_err();
        assert!(matches!(err, StoreError::StaleTimestamp { .. }));
    }

    #[test]
    fn invert_is_an_involution() {
        let delta = Delta::new(
            Store::lift(&entity(), &[triple("a", "1")].into_iter().collect()),
            Store::lift(&entity(), &[triple("b", "2")].into_iter().collect()),
        )
        .unwrap();
        assert_eq!(delta.invert().invert(), delta);
        assert_eq!(delta.invert().insertions(), delta.deletions());
    }

    #[test]
    fn materialize_head_is_identity_and_se1_is_creation() {
        let mut store = Store::new();
        store.create_entity(&entity(), &creation_triples(), meta(100)).unwrap();
        for k in 0..3 {
            let insert = [triple("note", &format!("v{k}"))].into_iter().collect();
            store
                .update_entity(&entity(), &insert, &BTreeSet::new(), meta(200 + k))
                .unwrap();
        }
        let head = store.head_ordinal(&entity()).unwrap();
        assert_eq!(
            &store.materialize(&entity(), head).unwrap(),
            store.head_graph(&entity()).unwrap()
        );
        assert_eq!(
            store.materialize(&entity(), 1).unwrap(),
            Store::lift(&entity(), &creation_triples())
        );
    }

    #[test]
    fn materialize_between_snapshots_picks_the_open_interval() {
        let mut store = Store::new();
        store.create_entity(&entity(), &creation_triples(), meta(100)).unwrap();
        let insert = [triple("note", "x")].into_iter().collect();
        store.update_entity(&entity(), &insert, &BTreeSet::new(), meta(300)).unwrap();
        let at = Timestamp::from_unix(200);
        assert_eq!(
            store.materialize_at(&entity(), at).unwrap(),
            store.materialize(&entity(), 1).unwrap()
        );
        let before = Timestamp::from_unix(50);
        assert!(matches!(
            store.materialize_at(&entity(), before),
            Err(StoreError::NotYetCreated { .. })
        ));
    }

    #[test]
    fn delta_between_is_the_net_difference() {
        let mut store = Store::new();
        store.create_entity(&entity(), &creation_triples(), meta(100)).unwrap();
        let ins1 = [triple("note", "x")].into_iter().collect();
        store.update_entity(&entity(), &ins1, &BTreeSet::new(), meta(200)).unwrap();
        let del = [triple("note", "x")].into_iter().collect();
        store.update_entity(&entity(), &BTreeSet::new(), &del, meta(300)).unwrap();

        assert!(store.delta_between(&entity(), 2, 2).unwrap().is_empty());
        // Insert then delete nets out to nothing between 1 and 3.
        assert!(store.delta_between(&entity(), 1, 3).unwrap().is_empty());
        let d12 = store.delta_between(&entity(), 1, 2).unwrap();
        assert_eq!(d12.insertions().len(), 1);
        assert!(d12.deletions().is_empty());
        assert!(matches!(
            store.delta_between(&entity(), 1, 4),
            Err(StoreError::UnknownSnapshot { ordinal: 4, .. })
        ));
    }

    #[test]
    fn restore_is_an_append_only_revert() {
        let mut store = Store::new();
        store.create_entity(&entity(), &creation_triples(), meta(100)).unwrap();
        let insert: BTreeSet<Triple> = [triple("note", "x")].into_iter().collect();
        store.update_entity(&entity(), &insert, &BTreeSet::new(), meta(200)).unwrap();
        let pre_restore_head = store.head_ordinal(&entity()).unwrap();
        let pre_restore_state = store.materialize(&entity(), pre_restore_head).unwrap();

        let snapshot = store.restore(&entity(), 1, meta(300)).unwrap();
        assert_eq!(snapshot.ordinal(), 3);
        assert_eq!(
            store.head_graph(&entity()).unwrap(),
            &store.materialize(&entity(), 1).unwrap()
        );
        // History is intact: the pre-restore head still materializes.
        assert_eq!(
            store.materialize(&entity(), pre_restore_head).unwrap(),
            pre_restore_state
        );
        assert_eq!(
            store.restore(&entity(), 3, meta(400)).unwrap_err(),
            StoreError::RestoreToHead(3)
        );
    }

    #[test]
    fn timestamps_parse_and_print_canonically() {
        let ts: Timestamp = "2023-06-26T00:00:00Z".parse().unwrap();
        assert_eq!(ts.to_string(), "2023-06-26T00:00:00Z");
        let offset: Timestamp = "2023-06-26T02:30:00+02:30".parse().unwrap();
        assert_eq!(offset.to_string(), "2023-06-26T00:00:00Z");
        assert!("not a time".parse::<Timestamp>().is_err());
    }
}
