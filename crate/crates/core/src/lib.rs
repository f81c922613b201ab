//! teca-core: a versioned knowledge-graph engine for exhibition catalogues.
//!
//! The crate covers the full data path of a museum digital-twin backend:
//! strict CSV ingestion with schema validation, a declarative row-to-triple
//! mapping dialect with shipped CRM/CRMdig profiles, an append-only
//! per-entity snapshot store with invertible deltas and six temporal
//! retrieval functionalities, and a registry for multi-level 3D assets and
//! published scenes.

pub mod asset;
pub mod authority;
pub mod catalog;
pub mod ingest;
pub mod iri;
pub mod mapping;
pub mod process;
pub mod report;
pub mod store;
pub mod table;
pub mod vocab;

pub use iri::{Iri, Literal, Quad, Term, Triple};
pub use report::{Report, Violation};
