//! Row-oriented declarative mapping from tables to triples.
//!
//! The mapping language is line-oriented: prefix and base declarations,
//! then one or more `map` blocks, each with a subject template and a list
//! of predicate/object rules. Object specs come in four shapes:
//!
//! ```text
//! po <predicate> literal:<col>[ lang=<tag>| dt=<CURIE>]
//! po <predicate> iri:<template>
//! po <predicate> vocab:<col> <vocabname>
//! po <predicate> authority:<col> <kind>
//! ```
//!
//! Application is row-by-row and rule-by-rule: an empty object cell means
//! the rule is skipped for that row, a vocabulary miss or invalid authority
//! id is a row-level finding (the row's other rules still fire).

use std::collections::BTreeSet;

use indexmap::IndexMap;
use thiserror::Error;

use crate::authority::{expand_authority, Authority, AuthorityRef};
use crate::iri::{percent_encode, Iri, Literal, Triple};
use crate::report::Report;
use crate::table::{Table, TableSchema};
use crate::vocab::{VocabRegistry, DEFAULT_BASE};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MappingError {
    #[error("unknown prefix {prefix} at line {line}")]
    UnknownPrefix { prefix: String, line: usize },
    #[error("duplicate prefix declaration {prefix} at line {line}")]
    DuplicatePrefix { prefix: String, line: usize },
    #[error("duplicate base declaration at line {line}")]
    DuplicateBase { line: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unbound placeholder column {column:?} in map {map:?} (not in schema {schema:?})")]
    UnboundColumn {
        column: String,
        map: String,
        schema: String,
    },
    #[error("unknown vocabulary {vocab:?} in map {map:?}")]
    UnknownVocabulary { vocab: String, map: String },
}

fn syntax(line: usize, message: impl Into<String>) -> MappingError {
    MappingError::Syntax {
        line,
        message: message.into(),
    }
}

/// An IRI template with `{column}` placeholders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    raw: String,
    parts: Vec<TemplatePart>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TemplatePart {
    Text(String),
    Placeholder(String),
}

impl Template {
    fn parse(raw: &str, line: usize) -> Result<Self, MappingError> {
        let mut parts = Vec::new();
        let mut text = String::new();
        let mut chars = raw.chars();
        while let Some(c) = chars.next() {
            match c {
                '{' => {
                    if !text.is_empty() {
                        parts.push(TemplatePart::Text(std::mem::take(&mut text)));
                    }
                    let mut name = String::new();
                    loop {
                        match chars.next() {
                            Some('}') => break,
                            Some(c) => name.push(c),
                            None => {
                                return Err(syntax(line, format!("unclosed placeholder in template {raw:?}")))
                            }
                        }
                    }
                    if name.is_empty() {
                        return Err(syntax(line, format!("empty placeholder in template {raw:?}")));
                    }
                    parts.push(TemplatePart::Placeholder(name));
                }
                '}' => return Err(syntax(line, format!("stray '}}' in template {raw:?}"))),
                c => text.push(c),
            }
        }
        if !text.is_empty() {
            parts.push(TemplatePart::Text(text));
        }
        Ok(Template {
            raw: raw.to_string(),
            parts,
        })
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    fn columns(&self) -> impl Iterator<Item = &str> {
        self.parts.iter().filter_map(|p| match p {
            TemplatePart::Placeholder(name) => Some(name.as_str()),
            TemplatePart::Text(_) => None,
        })
    }

    /// Instantiate against a row. Returns `Ok(None)` when a referenced cell
    /// is empty (skip), the minted IRI otherwise.
    fn instantiate(
        &self,
        base: &Iri,
        table: &Table,
        row: &[String],
    ) -> Result<Option<Iri>, String> {
        let mut out = String::new();
        for part in &self.parts {
            match part {
                TemplatePart::Text(text) => out.push_str(text),
                TemplatePart::Placeholder(column) => {
                    let cell = table
                        .cell(row, column)
                        .ok_or_else(|| format!("column {column:?} missing from table"))?;
                    let cell = cell.trim();
                    if cell.is_empty() {
                        return Ok(None);
                    }
                    out.push_str(&percent_encode(cell));
                }
            }
        }
        let iri = if out.contains(':') && Iri::new(out.clone()).is_ok() {
            Iri::new(out).unwrap()
        } else {
            base.join(&out)
                .map_err(|e| format!("template {:?} yields invalid IRI: {e}", self.raw))?
        };
        Ok(Some(iri))
    }
}

/// Object side of a rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectSpec {
    Literal {
        column: String,
        lang: Option<String>,
        datatype: Option<Iri>,
    },
    IriTemplate(Template),
    Vocab {
        column: String,
        vocab: String,
    },
    Authority {
        column: String,
        kind: Authority,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingRule {
    pub predicate: Iri,
    pub object: ObjectSpec,
}

/// One `map` block: a subject template and its rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapBlock {
    pub name: String,
    pub subject: Template,
    pub rules: Vec<MappingRule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingDoc {
    pub prefixes: IndexMap<String, Iri>,
    pub base: Iri,
    pub maps: Vec<MapBlock>,
}

impl MappingDoc {
    pub fn rule_count(&self) -> usize {
        self.maps.iter().map(|m| m.rules.len()).sum()
    }

    /// Every predicate IRI declared by any rule.
    pub fn declared_predicates(&self) -> BTreeSet<Iri> {
        self.maps
            .iter()
            .flat_map(|m| m.rules.iter().map(|r| r.predicate.clone()))
            .collect()
    }

    /// Replace the document base (per-run override).
    pub fn with_base(mut self, base: Iri) -> Self {
        self.base = base;
        self
    }

    /// Check that every placeholder and object column resolves in the
    /// schema and every vocabulary name is known.
    pub fn bind(&self, schema: &TableSchema, registry: &VocabRegistry) -> Result<(), MappingError> {
        for map in &self.maps {
            let mut columns: Vec<&str> = map.subject.columns().collect();
            for rule in &map.rules {
                match &rule.object {
                    ObjectSpec::Literal { column, .. } => columns.push(column),
                    ObjectSpec::Vocab { column, vocab } => {
                        if !registry.is_known_vocab(vocab) {
                            return Err(MappingError::UnknownVocabulary {
                                vocab: vocab.clone(),
                                map: map.name.clone(),
                            });
                        }
                        columns.push(column);
                    }
                    ObjectSpec::Authority { column, .. } => columns.push(column),
                    ObjectSpec::IriTemplate(template) => columns.extend(template.columns()),
                }
            }
            for column in columns {
                if !schema.has_column(column) {
                    return Err(MappingError::UnboundColumn {
                        column: column.to_string(),
                        map: map.name.clone(),
                        schema: schema.name.clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

fn expand_curie_or_iri(
    token: &str,
    prefixes: &IndexMap<String, Iri>,
    line: usize,
) -> Result<Iri, MappingError> {
    if let Some(body) = token.strip_prefix('<') {
        let body = body
            .strip_suffix('>')
            .ok_or_else(|| syntax(line, format!("unterminated IRI {token:?}")))?;
        return Iri::new(body).map_err(|e| syntax(line, e.to_string()));
    }
    let (prefix, local) = token
        .split_once(':')
        .ok_or_else(|| syntax(line, format!("{token:?} is neither a CURIE nor a <IRI>")))?;
    let base = prefixes
        .get(prefix)
        .ok_or_else(|| MappingError::UnknownPrefix {
            prefix: prefix.to_string(),
            line,
        })?;
    Iri::new(format!("{}{local}", base.as_str())).map_err(|e| syntax(line, e.to_string()))
}

fn parse_object_spec(
    spec: &str,
    prefixes: &IndexMap<String, Iri>,
    line: usize,
) -> Result<ObjectSpec, MappingError> {
    if let Some(rest) = spec.strip_prefix("literal:") {
        let mut parts = rest.split_whitespace();
        let column = parts
            .next()
            .ok_or_else(|| syntax(line, "literal: needs a column name"))?
            .to_string();
        let mut lang = None;
        let mut datatype = None;
        for extra in parts {
            if let Some(tag) = extra.strip_prefix("lang=") {
                lang = Some(tag.to_string());
            } else if let Some(curie) = extra.strip_prefix("dt=") {
                datatype = Some(expand_curie_or_iri(curie, prefixes, line)?);
            } else {
                return Err(syntax(line, format!("unexpected token {extra:?} after literal spec")));
            }
        }
        if lang.is_some() && datatype.is_some() {
            return Err(syntax(line, "literal spec cannot carry both lang= and dt="));
        }
        return Ok(ObjectSpec::Literal {
            column,
            lang,
            datatype,
        });
    }
    if let Some(rest) = spec.strip_prefix("iri:") {
        if rest.split_whitespace().count() != 1 {
            return Err(syntax(line, "iri: template must be a single token"));
        }
        return Ok(ObjectSpec::IriTemplate(Template::parse(rest.trim(), line)?));
    }
    if let Some(rest) = spec.strip_prefix("vocab:") {
        let mut parts = rest.split_whitespace();
        let column = parts
            .next()
            .ok_or_else(|| syntax(line, "vocab: needs a column name"))?
            .to_string();
        let vocab = parts
            .next()
            .ok_or_else(|| syntax(line, "vocab: needs a vocabulary name"))?
            .to_string();
        if parts.next().is_some() {
            return Err(syntax(line, "trailing tokens after vocab spec"));
        }
        return Ok(ObjectSpec::Vocab { column, vocab });
    }
    if let Some(rest) = spec.strip_prefix("authority:") {
        let mut parts = rest.split_whitespace();
        let column = parts
            .next()
            .ok_or_else(|| syntax(line, "authority: needs a column name"))?
            .to_string();
        let kind: Authority = parts
            .next()
            .ok_or_else(|| syntax(line, "authority: needs a kind"))?
            .parse()
            .map_err(|e: crate::authority::UnknownAuthority| syntax(line, e.to_string()))?;
        if parts.next().is_some() {
            return Err(syntax(line, "trailing tokens after authority spec"));
        }
        return Ok(ObjectSpec::Authority { column, kind });
    }
    Err(syntax(
        line,
        format!("unknown object spec {spec:?} (expected literal:/iri:/vocab:/authority:)"),
    ))
}

/// Parse a mapping document. Deterministic; all CURIEs are resolved against
/// the declared prefixes, with line numbers on every error.
pub fn parse_mapping(text: &str) -> Result<MappingDoc, MappingError> {
    let mut prefixes: IndexMap<String, Iri> = IndexMap::new();
    let mut base: Option<Iri> = None;
    let mut maps: Vec<MapBlock> = Vec::new();
    let mut current: Option<(String, Option<Template>, Vec<MappingRule>)> = None;

    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("@prefix") {
            let rest = rest.trim();
            let (name, iri_part) = rest
                .split_once(':')
                .ok_or_else(|| syntax(line_no, "expected `@prefix <name>: <IRI>`"))?;
            let name = name.trim().to_string();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(syntax(line_no, format!("bad prefix name {name:?}")));
            }
            let iri_token = iri_part.trim();
            let body = iri_token
                .strip_prefix('<')
                .and_then(|s| s.strip_suffix('>'))
                .ok_or_else(|| syntax(line_no, "prefix IRI must be wrapped in <>"))?;
            let iri = Iri::new(body).map_err(|e| syntax(line_no, e.to_string()))?;
            if prefixes.insert(name.clone(), iri).is_some() {
                return Err(MappingError::DuplicatePrefix {
                    prefix: name,
                    line: line_no,
                });
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("@base") {
            let token = rest.trim();
            let body = token
                .strip_prefix('<')
                .and_then(|s| s.strip_suffix('>'))
                .ok_or_else(|| syntax(line_no, "base IRI must be wrapped in <>"))?;
            if base.is_some() {
                return Err(MappingError::DuplicateBase { line: line_no });
            }
            base = Some(Iri::new(body).map_err(|e| syntax(line_no, e.to_string()))?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("map ") {
            if let Some((name, subject, rules)) = current.take() {
                let subject =
                    subject.ok_or_else(|| syntax(line_no, format!("map {name:?} has no subject")))?;
                maps.push(MapBlock {
                    name,
                    subject,
                    rules,
                });
            }
            current = Some((rest.trim().to_string(), None, Vec::new()));
            continue;
        }
        if let Some(rest) = line.strip_prefix("subject ") {
            match &mut current {
                Some((_, subject @ None, _)) => {
                    *subject = Some(Template::parse(rest.trim(), line_no)?);
                }
                Some((name, Some(_), _)) => {
                    return Err(syntax(line_no, format!("map {name:?} already has a subject")))
                }
                None => return Err(syntax(line_no, "subject before any `map`")),
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("po ") {
            let rest = rest.trim();
            let (predicate_token, spec) = rest
                .split_once(char::is_whitespace)
                .ok_or_else(|| syntax(line_no, "expected `po <predicate> <objectspec>`"))?;
            let predicate = expand_curie_or_iri(predicate_token, &prefixes, line_no)?;
            let object = parse_object_spec(spec.trim(), &prefixes, line_no)?;
            match &mut current {
                Some((_, Some(_), rules)) => rules.push(MappingRule { predicate, object }),
                Some((name, None, _)) => {
                    return Err(syntax(line_no, format!("rule before subject in map {name:?}")))
                }
                None => return Err(syntax(line_no, "rule before any `map`")),
            }
            continue;
        }
        return Err(syntax(line_no, format!("unrecognised line {line:?}")));
    }

    if let Some((name, subject, rules)) = current.take() {
        let subject = subject
            .ok_or_else(|| syntax(text.lines().count(), format!("map {name:?} has no subject")))?;
        maps.push(MapBlock {
            name,
            subject,
            rules,
        });
    }

    Ok(MappingDoc {
        prefixes,
        base: base.unwrap_or_else(|| Iri::new(DEFAULT_BASE).unwrap()),
        maps,
    })
}

/// Triples emitted for a single row, grouped under the entity minted by the
/// document's first map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowEmission {
    /// 1-based data row number.
    pub row: usize,
    /// Subject of the first map for this row; the unit of storage.
    pub entity: Iri,
    pub triples: BTreeSet<Triple>,
}

fn object_cells(table: &Table, row: &[String], column: &str, split: bool) -> Vec<String> {
    let cell = table.cell(row, column).unwrap_or("").trim().to_string();
    if cell.is_empty() {
        return Vec::new();
    }
    if split {
        crate::table::split_list(&cell)
    } else {
        vec![cell]
    }
}

fn apply_rule(
    rule: &MappingRule,
    subject: &Iri,
    doc: &MappingDoc,
    table: &Table,
    row: &[String],
    row_no: usize,
    schema: &TableSchema,
    registry: &VocabRegistry,
    out: &mut BTreeSet<Triple>,
    report: &mut Report,
) {
    let is_list = |column: &str| {
        schema
            .columns
            .iter()
            .any(|c| c.name == column && c.list)
    };
    match &rule.object {
        ObjectSpec::Literal {
            column,
            lang,
            datatype,
        } => {
            for value in object_cells(table, row, column, is_list(column)) {
                let literal = match (lang, datatype) {
                    (Some(tag), _) => match Literal::lang_tagged(value, tag) {
                        Ok(l) => l,
                        Err(e) => {
                            report.note_at(format!("row {row_no}, column \"{column}\""), e.to_string());
                            continue;
                        }
                    },
                    (None, Some(dt)) => Literal::typed(value, dt.clone()),
                    (None, None) => Literal::simple(value),
                };
                out.insert(Triple::new(subject.clone(), rule.predicate.clone(), literal));
            }
        }
        ObjectSpec::IriTemplate(template) => {
            match template.instantiate(&doc.base, table, row) {
                Ok(Some(iri)) => {
                    out.insert(Triple::new(subject.clone(), rule.predicate.clone(), iri));
                }
                Ok(None) => {}
                Err(message) => report.note_at(format!("row {row_no}"), message),
            }
        }
        ObjectSpec::Vocab { column, vocab } => {
            for value in object_cells(table, row, column, is_list(column)) {
                match registry.lookup(vocab, &value) {
                    Ok(iri) => {
                        out.insert(Triple::new(subject.clone(), rule.predicate.clone(), iri));
                    }
                    Err(e) => {
                        report.note_at(format!("row {row_no}, column \"{column}\""), e.to_string())
                    }
                }
            }
        }
        ObjectSpec::Authority { column, kind } => {
            for value in object_cells(table, row, column, is_list(column)) {
                match expand_authority(&AuthorityRef::new(*kind, value)) {
                    Ok(iri) => {
                        out.insert(Triple::new(subject.clone(), rule.predicate.clone(), iri));
                    }
                    Err(e) => {
                        report.note_at(format!("row {row_no}, column \"{column}\""), e.to_string())
                    }
                }
            }
        }
    }
}

/// Apply a mapping document row by row, grouping each row's triples under
/// its entity (the first map's subject). Rows whose subject cannot be
/// minted are reported and skipped.
pub fn apply_mapping_grouped(
    table: &Table,
    doc: &MappingDoc,
    schema: &TableSchema,
    registry: &VocabRegistry,
) -> Result<(Vec<RowEmission>, Report), MappingError> {
    doc.bind(schema, registry)?;
    let mut report = Report::new();
    let mut emissions = Vec::new();

    for (i, row) in table.rows.iter().enumerate() {
        let row_no = i + 1;
        let mut triples = BTreeSet::new();
        let mut entity: Option<Iri> = None;

        for map in &doc.maps {
            let subject = match map.subject.instantiate(&doc.base, table, row) {
                Ok(Some(iri)) => iri,
                Ok(None) => {
                    report.note_at(
                        format!("row {row_no}"),
                        format!("empty cell in subject template of map {:?}", map.name),
                    );
                    continue;
                }
                Err(message) => {
                    report.note_at(format!("row {row_no}"), message);
                    continue;
                }
            };
            if entity.is_none() {
                entity = Some(subject.clone());
            }
            for rule in &map.rules {
                apply_rule(
                    rule, &subject, doc, table, row, row_no, schema, registry, &mut triples,
                    &mut report,
                );
            }
        }

        if let Some(entity) = entity {
            emissions.push(RowEmission {
                row: row_no,
                entity,
                triples,
            });
        }
    }
    Ok((emissions, report))
}

/// Apply a mapping document and union all rows into one triple set.
pub fn apply_mapping(
    table: &Table,
    doc: &MappingDoc,
    schema: &TableSchema,
    registry: &VocabRegistry,
) -> Result<(BTreeSet<Triple>, Report), MappingError> {
    let (emissions, report) = apply_mapping_grouped(table, doc, schema, registry)?;
    let mut triples = BTreeSet::new();
    for emission in emissions {
        triples.extend(emission.triples);
    }
    Ok((triples, report))
}

const BIBLIOGRAPHIC_PROFILE: &str = include_str!("profiles/bibliographic.map");
const DIGITISATION_PROFILE: &str = include_str!("profiles/digitisation.map");

pub fn bibliographic_profile_text() -> &'static str {
    BIBLIOGRAPHIC_PROFILE
}

pub fn digitisation_profile_text() -> &'static str {
    DIGITISATION_PROFILE
}

/// The two shipped CRM-profile mapping documents: bibliographic catalogue
/// objects, and digitisation events with CRMdig classes.
pub fn crm_profiles() -> (MappingDoc, MappingDoc) {
    let bibliographic =
        parse_mapping(BIBLIOGRAPHIC_PROFILE).expect("shipped bibliographic profile parses");
    let digitisation =
        parse_mapping(DIGITISATION_PROFILE).expect("shipped digitisation profile parses");
    (bibliographic, digitisation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iri::canonical_ntriples;
    use crate::table::{bibliographic_schema, digitisation_schema, parse_table};
    use crate::vocab::default_base;

    fn registry() -> VocabRegistry {
        VocabRegistry::builtin(&default_base())
    }

    const BIB_HEADER: &str =
        "id,title,type,room,creators,creator_viaf,creator_ulan,holder,holder_wd,place_gn,licence,notes";

    fn bib_table(rows: &str) -> Table {
        let csv = format!("{BIB_HEADER}\n{rows}");
        let (table, report) = parse_table(&csv, &bibliographic_schema(), &registry()).unwrap();
        assert!(report.ok(), "{report}");
        table
    }

    #[test]
    fn prefix_expansion() {
        let doc = parse_mapping(
            "@prefix crm: <http://www.cidoc-crm.org/cidoc-crm/>\nmap m\nsubject obj/{id}\npo crm:P1_is_identified_by literal:title\n",
        )
        .unwrap();
        assert_eq!(
            doc.maps[0].rules[0].predicate.as_str(),
            "http://www.cidoc-crm.org/cidoc-crm/P1_is_identified_by"
        );
    }

    #[test]
    fn unknown_prefix_is_an_error_with_line_number() {
        let err = parse_mapping("map m\nsubject obj/{id}\npo foo:bar literal:title\n").unwrap_err();
        assert_eq!(
            err,
            MappingError::UnknownPrefix {
                prefix: "foo".to_string(),
                line: 3
            }
        );
    }

    #[test]
    fn duplicate_prefix_is_an_error() {
        let err = parse_mapping(
            "@prefix a: <http://x.example/>\n@prefix a: <http://y.example/>\n",
        )
        .unwrap_err();
        assert_eq!(
            err,
            MappingError::DuplicatePrefix {
                prefix: "a".to_string(),
                line: 2
            }
        );
    }

    #[test]
    fn unbound_placeholder_fails_at_bind_time() {
        let doc = parse_mapping("map m\nsubject obj/{nope}\npo <http://x.example/p> literal:title\n")
            .unwrap();
        let err = doc.bind(&bibliographic_schema(), &registry()).unwrap_err();
        assert!(matches!(err, MappingError::UnboundColumn { column, .. } if column == "nope"));
    }

    #[test]
    fn shipped_bibliographic_profile_has_one_map_and_enough_rules() {
        let (bib, dig) = crm_profiles();
        assert_eq!(bib.maps.len(), 1);
        assert!(bib.rule_count() >= 6, "got {}", bib.rule_count());
        assert!(dig.maps.len() >= 2);
        bib.bind(&bibliographic_schema(), &registry()).unwrap();
        dig.bind(&digitisation_schema(), &registry()).unwrap();
    }

    #[test]
    fn shipped_profiles_only_use_crm_crmdig_rdf_or_base_predicates() {
        let (bib, dig) = crm_profiles();
        for doc in [bib, dig] {
            for predicate in doc.declared_predicates() {
                let p = predicate.as_str();
                assert!(
                    p.starts_with(crate::vocab::CRM)
                        || p.starts_with(crate::vocab::CRMDIG)
                        || p.starts_with(crate::vocab::RDF)
                        || p.starts_with(doc.base.as_str()),
                    "predicate {p} outside the allowed namespaces"
                );
            }
        }
    }

    #[test]
    fn single_literal_rule_emits_one_triple() {
        let table = bib_table("r5-specimen-001,Basilisco,Specimen,5,,,,,,,,");
        let doc = parse_mapping(
            "@prefix crm: <http://www.cidoc-crm.org/cidoc-crm/>\n@base <https://example.org/aldrovandi/>\nmap m\nsubject obj/{id}\npo crm:P102_has_title literal:title\n",
        )
        .unwrap();
        let (triples, report) =
            apply_mapping(&table, &doc, &bibliographic_schema(), &registry()).unwrap();
        assert!(report.ok());
        assert_eq!(triples.len(), 1);
        let triple = triples.iter().next().unwrap();
        assert_eq!(
            triple.to_string(),
            "<https://example.org/aldrovandi/obj/r5-specimen-001> <http://www.cidoc-crm.org/cidoc-crm/P102_has_title> \"Basilisco\" ."
        );
    }

    #[test]
    fn empty_cell_skips_the_rule_without_error() {
        let table = bib_table("x1,Basilisco,Specimen,5,,,,,,,,");
        let doc = parse_mapping(
            "map m\nsubject obj/{id}\npo <http://x.example/place> authority:place_gn GeoNames\n",
        )
        .unwrap();
        let (triples, report) =
            apply_mapping(&table, &doc, &bibliographic_schema(), &registry()).unwrap();
        assert!(report.ok());
        assert!(triples.is_empty());
    }

    #[test]
    fn vocab_miss_reports_but_other_rules_still_fire() {
        let csv = format!("{BIB_HEADER}\nx1,Basilisco,Sculpture,5,,,,,,,,");
        let (table, _) = parse_table(&csv, &bibliographic_schema(), &registry()).unwrap();
        let doc = parse_mapping(
            "map m\nsubject obj/{id}\npo <http://x.example/type> vocab:type object_types\npo <http://x.example/title> literal:title\n",
        )
        .unwrap();
        let (triples, report) =
            apply_mapping(&table, &doc, &bibliographic_schema(), &registry()).unwrap();
        assert_eq!(triples.len(), 1, "title rule still applies");
        assert!(report.contains("Sculpture"));
    }

    #[test]
    fn subject_values_are_percent_encoded_and_round_trip() {
        let table = bib_table("\"id with space\",T,Specimen,5,,,,,,,,");
        let doc = parse_mapping("map m\nsubject obj/{id}\npo <http://x.example/t> literal:title\n")
            .unwrap();
        let (triples, _) =
            apply_mapping(&table, &doc, &bibliographic_schema(), &registry()).unwrap();
        let subject = &triples.iter().next().unwrap().subject;
        assert_eq!(
            subject.as_str(),
            "https://example.org/aldrovandi/obj/id%20with%20space"
        );
        assert!(Iri::new(subject.as_str()).is_ok());
    }

    #[test]
    fn list_valued_cells_emit_one_triple_per_segment() {
        let csv = "object_id,stage,institution,people,technique,tools,date_start,date_end,digitized_object,output_level\n\
                   o1,acquisition,DBC,A. Rossi|B. Bianchi,SLS,Artec Eva,2023-03-27,2023-03-27,o1,0\n";
        let (table, report) = parse_table(csv, &digitisation_schema(), &registry()).unwrap();
        assert!(report.ok(), "{report}");
        let doc = parse_mapping(
            "@prefix crm: <http://www.cidoc-crm.org/cidoc-crm/>\nmap m\nsubject process/{object_id}/{stage}\npo crm:P14_carried_out_by literal:people\n",
        )
        .unwrap();
        let (triples, _) =
            apply_mapping(&table, &doc, &digitisation_schema(), &registry()).unwrap();
        assert_eq!(triples.len(), 2);
    }

    #[test]
    fn application_is_deterministic_and_monotone() {
        let rows = "a,T1,Specimen,5,,,,,,,CC0,\nb,T2,Herbarium,2,,,,,,,CC-BY,";
        let table2 = bib_table(rows);
        let table1 = bib_table("a,T1,Specimen,5,,,,,,,CC0,");
        let (bib, _) = crm_profiles();
        let schema = bibliographic_schema();
        let (t2a, _) = apply_mapping(&table2, &bib, &schema, &registry()).unwrap();
        let (t2b, _) = apply_mapping(&table2, &bib, &schema, &registry()).unwrap();
        assert_eq!(canonical_ntriples(&t2a), canonical_ntriples(&t2b));
        let (t1, _) = apply_mapping(&table1, &bib, &schema, &registry()).unwrap();
        assert!(t1.is_subset(&t2a), "adding a row never removes triples");
    }

    #[test]
    fn grouped_emission_uses_first_map_subject_as_entity() {
        let csv = "object_id,stage,institution,people,technique,tools,date_start,date_end,digitized_object,output_level\n\
                   o1,acquisition,DBC,A. Rossi,SLS,,2023-03-27,2023-03-27,o1,0\n";
        let (table, _) = parse_table(csv, &digitisation_schema(), &registry()).unwrap();
        let (_, dig) = crm_profiles();
        let (emissions, report) =
            apply_mapping_grouped(&table, &dig, &digitisation_schema(), &registry()).unwrap();
        assert!(report.ok(), "{report}");
        assert_eq!(emissions.len(), 1);
        assert_eq!(
            emissions[0].entity.as_str(),
            "https://example.org/aldrovandi/process/o1/acquisition"
        );
        // The timespan map's triples ride along in the same emission.
        assert!(emissions[0]
            .triples
            .iter()
            .any(|t| t.subject.as_str().ends_with("/timespan")));
    }

    #[test]
    fn curie_expansion_is_reversible_for_shipped_profiles() {
        let (bib, dig) = crm_profiles();
        for doc in [bib, dig] {
            for predicate in doc.declared_predicates() {
                let p = predicate.as_str();
                let reversible = doc
                    .prefixes
                    .values()
                    .any(|ns| p.strip_prefix(ns.as_str()).is_some())
                    || p.starts_with(doc.base.as_str());
                assert!(reversible, "{p} not reversible against declared prefixes");
            }
        }
    }
}
