//! Conjunctive basic-graph-pattern queries over store states, versions and
//! deltas.
//!
//! The pattern language is deliberately small: triple patterns built from
//! `?variables`, `<IRIs>` and quoted literals, each terminated by `.`.
//! Evaluation is standard BGP matching — all patterns satisfied under one
//! consistent variable assignment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::iri::{Iri, Literal, Term, TermScanner, Triple};

use super::{DeltaSide, Store, StoreError, Timestamp};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at offset {offset}: {message}")]
pub struct QueryParseError {
    /// Character offset into the pattern text.
    pub offset: usize,
    pub message: String,
}

/// One position of a triple pattern: a constant or a variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum PatternTerm {
    Var(String),
    Iri(Iri),
    Literal(Literal),
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(name) => write!(f, "?{name}"),
            PatternTerm::Iri(iri) => iri.fmt(f),
            PatternTerm::Literal(lit) => lit.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BgpQuery {
    pub patterns: Vec<TriplePattern>,
}

/// A consistent variable assignment satisfying every pattern.
pub type Bindings = BTreeMap<String, Term>;

fn char_offset(text: &str, byte_pos: usize) -> usize {
    text[..byte_pos.min(text.len())].chars().count()
}

fn parse_variable(scanner: &mut TermScanner<'_>, text: &str) -> Result<String, QueryParseError> {
    // caller saw '?'
    let start = scanner.pos();
    let rest = scanner.rest();
    let mut len = 0;
    for c in rest.chars().skip(1) {
        if c.is_ascii_alphanumeric() || c == '_' {
            len += c.len_utf8();
        } else {
            break;
        }
    }
    if len == 0 {
        return Err(QueryParseError {
            offset: char_offset(text, start),
            message: "expected variable name after '?'".to_string(),
        });
    }
    let name = rest[1..1 + len].to_string();
    scanner.advance(1 + len);
    Ok(name)
}

fn parse_pattern_term(
    scanner: &mut TermScanner<'_>,
    text: &str,
    position: &str,
) -> Result<PatternTerm, QueryParseError> {
    scanner.skip_ws();
    let offset = char_offset(text, scanner.pos());
    match scanner.peek() {
        Some('?') => Ok(PatternTerm::Var(parse_variable(scanner, text)?)),
        Some('<') => scanner
            .parse_iri()
            .map(PatternTerm::Iri)
            .map_err(|e| QueryParseError {
                offset,
                message: e.to_string(),
            }),
        Some('"') => {
            if position != "object" {
                return Err(QueryParseError {
                    offset,
                    message: format!("literal not allowed in {position} position"),
                });
            }
            scanner
                .parse_literal()
                .map(PatternTerm::Literal)
                .map_err(|e| QueryParseError {
                    offset,
                    message: e.to_string(),
                })
        }
        Some(c) => Err(QueryParseError {
            offset,
            message: format!("expected ?variable, <IRI> or literal in {position} position, found '{c}'"),
        }),
        None => Err(QueryParseError {
            offset,
            message: format!("expected {position} term, found end of input"),
        }),
    }
}

impl BgpQuery {
    /// Parse the textual pattern form: whitespace-separated triple patterns,
    /// each `.`-terminated.
    pub fn parse(text: &str) -> Result<BgpQuery, QueryParseError> {
        let mut scanner = TermScanner::new(text);
        let mut patterns = Vec::new();
        loop {
            if scanner.at_end() {
                break;
            }
            let subject = parse_pattern_term(&mut scanner, text, "subject")?;
            let predicate = parse_pattern_term(&mut scanner, text, "predicate")?;
            let object = parse_pattern_term(&mut scanner, text, "object")?;
            scanner.expect('.').map_err(|e| match e {
                crate::iri::TermError::Parse { offset, message } => QueryParseError {
                    offset: char_offset(text, offset),
                    message,
                },
                other => QueryParseError {
                    offset: char_offset(text, scanner.pos()),
                    message: other.to_string(),
                },
            })?;
            patterns.push(TriplePattern {
                subject,
                predicate,
                object,
            });
        }
        if patterns.is_empty() {
            return Err(QueryParseError {
                offset: 0,
                message: "query needs at least one triple pattern".to_string(),
            });
        }
        Ok(BgpQuery { patterns })
    }

    /// Variable names in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut vars = Vec::new();
        for pattern in &self.patterns {
            for term in [&pattern.subject, &pattern.predicate, &pattern.object] {
                if let PatternTerm::Var(name) = term {
                    if !vars.contains(name) {
                        vars.push(name.clone());
                    }
                }
            }
        }
        vars
    }
}

impl fmt::Display for BgpQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.patterns.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{} {} {} .", p.subject, p.predicate, p.object)?;
        }
        Ok(())
    }
}

fn unify(term: &PatternTerm, value: &Term, bindings: &mut Bindings) -> bool {
    match term {
        PatternTerm::Var(name) => match bindings.get(name) {
            Some(bound) => bound == value,
            None => {
                bindings.insert(name.clone(), value.clone());
                true
            }
        },
        PatternTerm::Iri(iri) => matches!(value, Term::Iri(v) if v == iri),
        PatternTerm::Literal(lit) => matches!(value, Term::Literal(v) if v == lit),
    }
}

fn match_triple(pattern: &TriplePattern, triple: &Triple, bindings: &Bindings) -> Option<Bindings> {
    let mut next = bindings.clone();
    if !unify(&pattern.subject, &Term::Iri(triple.subject.clone()), &mut next) {
        return None;
    }
    if !unify(&pattern.predicate, &Term::Iri(triple.predicate.clone()), &mut next) {
        return None;
    }
    if !unify(&pattern.object, &triple.object, &mut next) {
        return None;
    }
    Some(next)
}

/// Evaluate a BGP against a triple set: fold patterns left to right,
/// extending partial assignments. Constant-predicate patterns scan a
/// per-predicate index instead of the whole set.
pub fn eval_bgp(query: &BgpQuery, triples: &BTreeSet<Triple>) -> BTreeSet<Bindings> {
    let mut by_predicate: BTreeMap<&Iri, Vec<&Triple>> = BTreeMap::new();
    for triple in triples {
        by_predicate.entry(&triple.predicate).or_default().push(triple);
    }
    let all: Vec<&Triple> = triples.iter().collect();

    let mut solutions: Vec<Bindings> = vec![Bindings::new()];
    for pattern in &query.patterns {
        let candidates: &[&Triple] = match &pattern.predicate {
            PatternTerm::Iri(p) => by_predicate.get(p).map(Vec::as_slice).unwrap_or(&[]),
            _ => &all,
        };
        let mut next = Vec::new();
        for bindings in &solutions {
            for triple in candidates {
                if let Some(extended) = match_triple(pattern, triple, bindings) {
                    next.push(extended);
                }
            }
        }
        solutions = next;
        if solutions.is_empty() {
            break;
        }
    }
    solutions.into_iter().collect()
}

fn project_triples(quads: &BTreeSet<crate::iri::Quad>) -> BTreeSet<Triple> {
    quads.iter().map(|q| q.triple()).collect()
}

/// One hit of a cross-version query: a binding and the maximal contiguous
/// run of dataset versions (1-based, end-exclusive) in which it holds.
/// An open end means the binding still holds in the latest version.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CrossVersionHit {
    pub from_version: usize,
    pub to_version: Option<usize>,
    pub bindings: Bindings,
}

/// One hit of a cross-delta query: where (snapshot, side) a pattern matched.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CrossDeltaHit {
    pub snapshot: Iri,
    pub side: DeltaSide,
    pub bindings: Bindings,
}

impl Store {
    /// Functionality: single-version query at a time instant.
    pub fn query_at(&self, query: &BgpQuery, at: Timestamp) -> BTreeSet<Bindings> {
        eval_bgp(query, &project_triples(&self.dataset_at(at)))
    }

    /// Single-version query against the latest dataset state.
    pub fn query_head(&self, query: &BgpQuery) -> BTreeSet<Bindings> {
        eval_bgp(query, &project_triples(&self.dataset_head()))
    }

    /// Functionality: cross-version query. Evaluates the pattern in every
    /// dataset version and reports each binding with the maximal contiguous
    /// interval of versions in which it holds.
    pub fn query_cross_version(&self, query: &BgpQuery) -> Vec<CrossVersionHit> {
        let versions = self.dataset_versions();
        let mut holds: BTreeMap<Bindings, Vec<usize>> = BTreeMap::new();
        for (i, at) in versions.iter().enumerate() {
            for bindings in self.query_at(query, *at) {
                holds.entry(bindings).or_default().push(i + 1);
            }
        }
        let last = versions.len();
        let mut hits = Vec::new();
        for (bindings, mut present) in holds {
            present.sort_unstable();
            let mut run_start = present[0];
            let mut prev = present[0];
            for &v in &present[1..] {
                if v != prev + 1 {
                    hits.push(CrossVersionHit {
                        from_version: run_start,
                        to_version: Some(prev + 1),
                        bindings: bindings.clone(),
                    });
                    run_start = v;
                }
                prev = v;
            }
            hits.push(CrossVersionHit {
                from_version: run_start,
                to_version: if prev == last { None } else { Some(prev + 1) },
                bindings,
            });
        }
        hits.sort();
        hits
    }

    /// Functionality: single-delta query against one side of one snapshot.
    pub fn query_delta(
        &self,
        query: &BgpQuery,
        entity: &Iri,
        ordinal: usize,
        side: DeltaSide,
    ) -> Result<BTreeSet<Bindings>, StoreError> {
        let snapshot = self.snapshot(entity, ordinal)?;
        let quads = match side {
            DeltaSide::Insertions => snapshot.delta.insertions(),
            DeltaSide::Deletions => snapshot.delta.deletions(),
        };
        Ok(eval_bgp(query, &project_triples(quads)))
    }

    /// Functionality: cross-delta query — where did this pattern change?
    /// Union of single-delta queries over every snapshot and side; only
    /// non-empty results are reported.
    pub fn query_cross_delta(&self, query: &BgpQuery) -> Vec<CrossDeltaHit> {
        let mut hits = Vec::new();
        for (entity, chain) in &self.entities {
            for snapshot in &chain.snapshots {
                for side in [DeltaSide::Insertions, DeltaSide::Deletions] {
                    let bindings_set = self
                        .query_delta(query, entity, snapshot.ordinal(), side)
                        .expect("snapshot enumerated from the chain");
                    for bindings in bindings_set {
                        hits.push(CrossDeltaHit {
                            snapshot: snapshot.id.clone(),
                            side,
                            bindings,
                        });
                    }
                }
            }
        }
        hits.sort();
        hits
    }
}
