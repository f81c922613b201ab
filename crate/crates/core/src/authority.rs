//! External authority identifiers (VIAF, ULAN, Wikidata, GeoNames) and
//! their deterministic expansion to IRIs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::iri::Iri;
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Authority {
    Viaf,
    Ulan,
    Wikidata,
    GeoNames,
}

impl Authority {
    pub const ALL: [Authority; 4] = [
        Authority::Viaf,
        Authority::Ulan,
        Authority::Wikidata,
        Authority::GeoNames,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Authority::Viaf => "VIAF",
            Authority::Ulan => "ULAN",
            Authority::Wikidata => "Wikidata",
            Authority::GeoNames => "GeoNames",
        }
    }
}

impl fmt::Display for Authority {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown authority kind {0:?} (expected VIAF, ULAN, Wikidata or GeoNames)")]
pub struct UnknownAuthority(pub String);

impl FromStr for Authority {
    type Err = UnknownAuthority;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "viaf" => Ok(Authority::Viaf),
            "ulan" => Ok(Authority::Ulan),
            "wikidata" => Ok(Authority::Wikidata),
            "geonames" => Ok(Authority::GeoNames),
            _ => Err(UnknownAuthority(s.to_string())),
        }
    }
}

/// A reference into one authority file, e.g. `(Wikidata, "Q131262")`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AuthorityRef {
    pub authority: Authority,
    pub identifier: String,
}

impl AuthorityRef {
    pub fn new(authority: Authority, identifier: impl Into<String>) -> Self {
        AuthorityRef {
            authority,
            identifier: identifier.into(),
        }
    }
}

impl fmt::Display for AuthorityRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.authority, self.identifier)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid {} identifier {:?}: {report}", .reference.authority, .reference.identifier)]
pub struct InvalidAuthorityRef {
    pub reference: AuthorityRef,
    pub report: Report,
}

fn all_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Syntactic validation of an authority identifier. Returns a report, not
/// an error: callers decide whether a violation is fatal.
pub fn validate_authority_ref(reference: &AuthorityRef) -> Report {
    let mut report = Report::new();
    let id = reference.identifier.as_str();
    if id.is_empty() {
        report.note("empty identifier");
        return report;
    }
    match reference.authority {
        Authority::Viaf => {
            if !all_digits(id) || id.len() > 22 {
                report.note("VIAF id must be 1-22 decimal digits");
            }
        }
        Authority::GeoNames => {
            if !all_digits(id) || id.len() > 22 {
                report.note("GeoNames id must be 1-22 decimal digits");
            }
        }
        Authority::Ulan => {
            if !all_digits(id) || id.len() > 12 {
                report.note("ULAN id must be 1-12 decimal digits");
            }
        }
        Authority::Wikidata => {
            let ok = id.strip_prefix('Q').is_some_and(all_digits);
            if !ok {
                report.note("Wikidata id must match Q+digits");
            }
        }
    }
    report
}

/// Expand a valid authority reference to its canonical IRI. The base per
/// authority is fixed, so expansion is deterministic and injective within
/// each authority.
pub fn expand_authority(reference: &AuthorityRef) -> Result<Iri, InvalidAuthorityRef> {
    let report = validate_authority_ref(reference);
    if !report.ok() {
        return Err(InvalidAuthorityRef {
            reference: reference.clone(),
            report,
        });
    }
    let id = &reference.identifier;
    let iri = match reference.authority {
        Authority::Viaf => format!("https://viaf.org/viaf/{id}"),
        Authority::Wikidata => format!("http://www.wikidata.org/entity/{id}"),
        Authority::GeoNames => format!("https://sws.geonames.org/{id}/"),
        Authority::Ulan => format!("http://vocab.getty.edu/ulan/{id}"),
    };
    Ok(Iri::new(iri).expect("expansion templates always build valid IRIs"))
}
