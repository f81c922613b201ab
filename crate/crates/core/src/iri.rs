//! RDF terms and their canonical N-Triples / N-Quads text forms.
//!
//! Everything downstream (mapping output, store dumps, provenance exports,
//! query results) is serialized through this module so that byte-for-byte
//! determinism holds in one place: terms print in N-Triples syntax and
//! statement sets print as lexicographically sorted, LF-terminated lines.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("invalid IRI {0:?}: {1}")]
    InvalidIri(String, &'static str),
    #[error("literal cannot carry both a language tag and a datatype")]
    LiteralLangAndDatatype,
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

fn parse_err(offset: usize, message: impl Into<String>) -> TermError {
    TermError::Parse {
        offset,
        message: message.into(),
    }
}

/// An absolute IRI. Guaranteed non-empty, with a scheme, and free of
/// whitespace and the characters that would break `<...>` serialization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        let scheme_end = match value.find(':') {
            Some(0) | None => return Err(TermError::InvalidIri(value, "missing scheme")),
            Some(i) => i,
        };
        let mut chars = value[..scheme_end].chars();
        let first = chars.next().unwrap();
        if !first.is_ascii_alphabetic()
            || !chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        {
            return Err(TermError::InvalidIri(value, "malformed scheme"));
        }
        if value
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"'))
        {
            return Err(TermError::InvalidIri(value, "forbidden character"));
        }
        Ok(Iri(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Join a relative path onto a base that ends with `/`.
    pub fn join(&self, relative: &str) -> Result<Self, TermError> {
        let mut s = self.0.clone();
        if !s.ends_with('/') {
            s.push('/');
        }
        Iri::new(format!("{s}{}", relative.trim_start_matches('/')))
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl TryFrom<String> for Iri {
    type Error = TermError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Iri::new(value)
    }
}

impl From<Iri> for String {
    fn from(iri: Iri) -> String {
        iri.0
    }
}

/// An RDF literal: lexical form plus at most one of datatype / language tag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    lexical: String,
    datatype: Option<Iri>,
    lang: Option<String>,
}

impl Literal {
    pub fn simple(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: None,
            lang: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Some(datatype),
            lang: None,
        }
    }

    pub fn lang_tagged(lexical: impl Into<String>, lang: impl Into<String>) -> Result<Self, TermError> {
        let lang = lang.into();
        if lang.is_empty()
            || !lang
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-')
        {
            return Err(TermError::InvalidLanguageTag(lang));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: None,
            lang: Some(lang),
        })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    pub fn lang(&self) -> Option<&str> {
        self.lang.as_deref()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", nt_escape(&self.lexical))?;
        if let Some(lang) = &self.lang {
            write!(f, "@{lang}")?;
        } else if let Some(dt) = &self.datatype {
            write!(f, "^^{dt}")?;
        }
        Ok(())
    }
}

/// Subject/object position of a statement.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Iri(Iri),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal(_) => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            Term::Iri(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => iri.fmt(f),
            Term::Literal(lit) => lit.fmt(f),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Self {
        Term::Literal(lit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Iri, predicate: Iri, object: impl Into<Term>) -> Self {
        Triple {
            subject,
            predicate,
            object: object.into(),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Quad {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
    pub graph: Iri,
}

impl Quad {
    pub fn new(triple: Triple, graph: Iri) -> Self {
        Quad {
            subject: triple.subject,
            predicate: triple.predicate,
            object: triple.object,
            graph,
        }
    }

    pub fn triple(&self) -> Triple {
        Triple {
            subject: self.subject.clone(),
            predicate: self.predicate.clone(),
            object: self.object.clone(),
        }
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} .",
            self.subject, self.predicate, self.object, self.graph
        )
    }
}

/// Escape a string for inclusion between double quotes in N-Triples.
pub fn nt_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// Percent-encode everything outside the unreserved set
/// (`A-Z a-z 0-9 - . _ ~`); used for values substituted into IRI templates.
pub fn percent_encode(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for byte in value.bytes() {
        match byte {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'.' | b'_' | b'~' => {
                out.push(byte as char)
            }
            _ => out.push_str(&format!("%{byte:02X}")),
        }
    }
    out
}

/// Sorted, LF-terminated N-Triples document for a set of triples.
pub fn canonical_ntriples<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> String {
    let mut lines: Vec<String> = triples.into_iter().map(|t| t.to_string()).collect();
    lines.sort();
    lines.dedup();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

/// Sorted, LF-terminated N-Quads document for a set of quads.
pub fn canonical_nquads<'a>(quads: impl IntoIterator<Item = &'a Quad>) -> String {
    let mut lines: Vec<String> = quads.into_iter().map(|q| q.to_string()).collect();
    lines.sort();
    lines.dedup();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

/// Cursor-based scanner for the N-Triples-compatible term syntax used by
/// dumps, provenance blocks and the query pattern language. Offsets are
/// byte positions into the input.
pub struct TermScanner<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> TermScanner<'a> {
    pub fn new(input: &'a str) -> Self {
        TermScanner { input, pos: 0 }
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.input.len()
    }

    pub fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub fn peek(&self) -> Option<char> {
        self.input[self.pos..].chars().next()
    }

    /// Advance the cursor by `bytes` (must land on a char boundary).
    pub fn advance(&mut self, bytes: usize) {
        self.pos = (self.pos + bytes).min(self.input.len());
        debug_assert!(self.input.is_char_boundary(self.pos));
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub fn expect(&mut self, c: char) -> Result<(), TermError> {
        self.skip_ws();
        match self.peek() {
            Some(found) if found == c => {
                self.bump();
                Ok(())
            }
            Some(found) => Err(parse_err(self.pos, format!("expected '{c}', found '{found}'"))),
            None => Err(parse_err(self.pos, format!("expected '{c}', found end of input"))),
        }
    }

    /// `<iri>`
    pub fn parse_iri(&mut self) -> Result<Iri, TermError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() != Some('<') {
            return Err(parse_err(start, "expected '<'"));
        }
        self.bump();
        let body_start = self.pos;
        loop {
            match self.peek() {
                Some('>') => {
                    let iri = &self.input[body_start..self.pos];
                    self.bump();
                    return Iri::new(iri).map_err(|e| parse_err(start, e.to_string()));
                }
                Some(c) => {
                    self.pos += c.len_utf8();
                }
                None => return Err(parse_err(start, "unterminated IRI")),
            }
        }
    }

    /// `"..."` with optional `@lang` or `^^<datatype>`.
    pub fn parse_literal(&mut self) -> Result<Literal, TermError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() != Some('"') {
            return Err(parse_err(start, "expected '\"'"));
        }
        self.bump();
        let mut lexical = String::new();
        loop {
            match self.bump() {
                Some('"') => break,
                Some('\\') => match self.bump() {
                    Some('"') => lexical.push('"'),
                    Some('\\') => lexical.push('\\'),
                    Some('n') => lexical.push('\n'),
                    Some('r') => lexical.push('\r'),
                    Some('t') => lexical.push('\t'),
                    Some('u') => lexical.push(self.unicode_escape(4)?),
                    Some('U') => lexical.push(self.unicode_escape(8)?),
                    other => {
                        return Err(parse_err(
                            self.pos,
                            format!("unsupported escape {other:?}"),
                        ))
                    }
                },
                Some(c) => lexical.push(c),
                None => return Err(parse_err(start, "unterminated literal")),
            }
        }
        if self.peek() == Some('@') {
            self.bump();
            let tag_start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                self.bump();
            }
            let tag = &self.input[tag_start..self.pos];
            return Literal::lang_tagged(lexical, tag).map_err(|e| parse_err(tag_start, e.to_string()));
        }
        if self.rest().starts_with("^^") {
            self.pos += 2;
            let dt = self.parse_iri()?;
            return Ok(Literal::typed(lexical, dt));
        }
        Ok(Literal::simple(lexical))
    }

    fn unicode_escape(&mut self, digits: usize) -> Result<char, TermError> {
        let start = self.pos;
        let hex = self
            .input
            .get(self.pos..self.pos + digits)
            .ok_or_else(|| parse_err(start, "truncated unicode escape"))?;
        let code = u32::from_str_radix(hex, 16)
            .map_err(|_| parse_err(start, "bad unicode escape"))?;
        self.pos += digits;
        char::from_u32(code).ok_or_else(|| parse_err(start, "invalid code point"))
    }

    /// An IRI or a literal.
    pub fn parse_term(&mut self) -> Result<Term, TermError> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.parse_iri()?)),
            Some('"') => Ok(Term::Literal(self.parse_literal()?)),
            Some(c) => Err(parse_err(self.pos, format!("expected term, found '{c}'"))),
            None => Err(parse_err(self.pos, "expected term, found end of input")),
        }
    }
}

/// Parse one N-Triples statement (`<s> <p> o .`).
pub fn parse_ntriples_line(line: &str) -> Result<Triple, TermError> {
    let mut sc = TermScanner::new(line);
    let subject = sc.parse_iri()?;
    let predicate = sc.parse_iri()?;
    let object = sc.parse_term()?;
    sc.expect('.')?;
    if !sc.at_end() {
        return Err(parse_err(sc.pos(), "trailing content after '.'"));
    }
    Ok(Triple {
        subject,
        predicate,
        object,
    })
}

/// Parse one N-Quads statement (`<s> <p> o <g> .`).
pub fn parse_nquads_line(line: &str) -> Result<Quad, TermError> {
    let mut sc = TermScanner::new(line);
    let subject = sc.parse_iri()?;
    let predicate = sc.parse_iri()?;
    let object = sc.parse_term()?;
    let graph = sc.parse_iri()?;
    sc.expect('.')?;
    if !sc.at_end() {
        return Err(parse_err(sc.pos(), "trailing content after '.'"));
    }
    Ok(Quad {
        subject,
        predicate,
        object,
        graph,
    })
}

/// Parse a full sorted N-Quads document (blank and `#` comment lines allowed).
pub fn parse_nquads(text: &str) -> Result<BTreeSet<Quad>, TermError> {
    let mut quads = BTreeSet::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        quads.insert(parse_nquads_line(trimmed)?);
    }
    Ok(quads)
}
