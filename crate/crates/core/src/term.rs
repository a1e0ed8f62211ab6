//! Terms, triples, and the line-oriented triple text format.
//!
//! Every identifier in the knowledge base is a [`Resource`] written as
//! `prefix:LocalName`. Attribute values are typed [`Literal`]s. Patterns and
//! rule atoms additionally use [`Variable`]s, which never appear inside a
//! stored [`Triple`].
//!
//! The text format is one triple per line, `subject predicate object .`,
//! with literals quoted and tagged as `"value"^^datatype`. Lines are UTF-8,
//! LF-terminated, and exports sort them lexicographically so identical
//! knowledge bases serialize to identical bytes.

use std::fmt;

use crate::error::{Error, Result};

/// A namespaced identifier, `prefix:LocalName`. Exactly one `:` separates the
/// two parts and both are non-empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Resource(String);

impl Resource {
    pub fn new(value: impl Into<String>) -> Result<Self> {
        let value = value.into();
        if value.is_empty() {
            return Err(Error::MalformedTerm("empty resource".into()));
        }
        if value.starts_with('?') || value.starts_with('"') {
            return Err(Error::MalformedTerm(format!(
                "resource may not start with a variable or quote marker: {value}"
            )));
        }
        if value.chars().any(char::is_whitespace) {
            return Err(Error::MalformedTerm(format!("resource contains whitespace: {value}")));
        }
        let mut parts = value.split(':');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(prefix), Some(local), None) if !prefix.is_empty() && !local.is_empty() => {
                Ok(Resource(value))
            }
            _ => Err(Error::MalformedTerm(format!(
                "resource must be prefix:LocalName with exactly one colon: {value}"
            ))),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Namespace prefix, without the colon.
    pub fn prefix(&self) -> &str {
        self.0.split_once(':').map(|(p, _)| p).unwrap_or("")
    }

    /// Local name after the colon.
    pub fn local(&self) -> &str {
        self.0.split_once(':').map(|(_, l)| l).unwrap_or("")
    }
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Datatype tag carried by every literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Datatype {
    String,
    Integer,
    Timestamp,
}

impl Datatype {
    pub fn name(self) -> &'static str {
        match self {
            Datatype::String => "string",
            Datatype::Integer => "integer",
            Datatype::Timestamp => "timestamp",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "string" => Ok(Datatype::String),
            "integer" => Ok(Datatype::Integer),
            "timestamp" => Ok(Datatype::Timestamp),
            other => Err(Error::MalformedTerm(format!("unknown datatype: {other}"))),
        }
    }
}

/// A typed literal value. Integer and timestamp literals must hold a valid
/// base-10 `i64` rendering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    value: String,
    datatype: Datatype,
}

impl Literal {
    pub fn new(value: impl Into<String>, datatype: Datatype) -> Result<Self> {
        let value = value.into();
        if datatype != Datatype::String && value.parse::<i64>().is_err() {
            return Err(Error::MalformedTerm(format!(
                "{} literal is not a valid integer: {value}",
                datatype.name()
            )));
        }
        Ok(Literal { value, datatype })
    }

    pub fn string(value: impl Into<String>) -> Self {
        Literal { value: value.into(), datatype: Datatype::String }
    }

    pub fn integer(value: i64) -> Self {
        Literal { value: value.to_string(), datatype: Datatype::Integer }
    }

    pub fn timestamp(value: i64) -> Self {
        Literal { value: value.to_string(), datatype: Datatype::Timestamp }
    }

    pub fn value(&self) -> &str {
        &self.value
    }

    pub fn datatype(&self) -> Datatype {
        self.datatype
    }

    /// Numeric view of integer and timestamp literals.
    pub fn as_i64(&self) -> Option<i64> {
        match self.datatype {
            Datatype::String => None,
            _ => self.value.parse().ok(),
        }
    }

    fn escaped(&self) -> String {
        let mut out = String::with_capacity(self.value.len());
        for c in self.value.chars() {
            match c {
                '\\' => out.push_str("\\\\"),
                '"' => out.push_str("\\\""),
                '\n' => out.push_str("\\n"),
                '\r' => out.push_str("\\r"),
                '\t' => out.push_str("\\t"),
                other => out.push(other),
            }
        }
        out
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"^^{}", self.escaped(), self.datatype.name())
    }
}

/// A rule or query variable. The stored name keeps the leading `?`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let valid = name.len() > 1
            && name.starts_with('?')
            && name[1..].chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::MalformedTerm(format!(
                "variable must be ?name with alphanumeric name: {name}"
            )));
        }
        Ok(Variable(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Any position of a pattern or atom: a resource, a literal, or a variable.
/// Stored triples restrict subjects and predicates to resources and objects
/// to resources or literals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Resource(Resource),
    Literal(Literal),
    Variable(Variable),
}

impl Term {
    /// Parses one whitespace-free token: `?x` is a variable, `"..."^^dt` a
    /// literal, anything else a resource.
    pub fn parse(token: &str) -> Result<Self> {
        if token.starts_with('?') {
            return Ok(Term::Variable(Variable::new(token)?));
        }
        if token.starts_with('"') {
            return parse_literal_token(token).map(Term::Literal);
        }
        Resource::new(token).map(Term::Resource)
    }

    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn as_resource(&self) -> Option<&Resource> {
        match self {
            Term::Resource(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_variable(&self) -> Option<&Variable> {
        match self {
            Term::Variable(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Resource(r) => r.fmt(f),
            Term::Literal(l) => l.fmt(f),
            Term::Variable(v) => v.fmt(f),
        }
    }
}

impl From<Resource> for Term {
    fn from(r: Resource) -> Self {
        Term::Resource(r)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl From<Variable> for Term {
    fn from(v: Variable) -> Self {
        Term::Variable(v)
    }
}

fn parse_literal_token(token: &str) -> Result<Literal> {
    let body = token
        .strip_prefix('"')
        .ok_or_else(|| Error::MalformedTerm(format!("literal must start with a quote: {token}")))?;
    let mut value = String::new();
    let mut chars = body.chars();
    let mut closed = false;
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some('\\') => value.push('\\'),
                Some('"') => value.push('"'),
                Some('n') => value.push('\n'),
                Some('r') => value.push('\r'),
                Some('t') => value.push('\t'),
                other => {
                    return Err(Error::MalformedTerm(format!(
                        "bad escape \\{} in literal {token}",
                        other.map(String::from).unwrap_or_default()
                    )))
                }
            },
            '"' => {
                closed = true;
                break;
            }
            other => value.push(other),
        }
    }
    if !closed {
        return Err(Error::MalformedTerm(format!("unterminated literal: {token}")));
    }
    let rest: String = chars.collect();
    let datatype = match rest.strip_prefix("^^") {
        Some(name) => Datatype::from_name(name)?,
        None if rest.is_empty() => Datatype::String,
        None => {
            return Err(Error::MalformedTerm(format!("trailing characters after literal: {token}")))
        }
    };
    Literal::new(value, datatype)
}

/// A ground statement. The constructor rejects variables in any position and
/// literals outside the object position by type construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Resource,
    pub predicate: Resource,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: Resource, predicate: Resource, object: Term) -> Result<Self> {
        if object.is_variable() {
            return Err(Error::MalformedTerm(format!(
                "triple object may not be a variable: {object}"
            )));
        }
        Ok(Triple { subject, predicate, object })
    }

    /// Convenience constructor for the common all-resource case.
    pub fn resources(subject: Resource, predicate: Resource, object: Resource) -> Self {
        Triple { subject, predicate, object: Term::Resource(object) }
    }

    /// Convenience constructor for data-property triples.
    pub fn literal(subject: Resource, predicate: Resource, object: Literal) -> Self {
        Triple { subject, predicate, object: Term::Literal(object) }
    }

    /// Serializes to the canonical line form, without a trailing newline.
    pub fn to_line(&self) -> String {
        format!("{} {} {} .", self.subject, self.predicate, self.object)
    }

    /// Parses one line of the triple text format.
    pub fn parse_line(line: &str) -> Result<Self> {
        let bad = |msg: &str| Error::MalformedTerm(format!("{msg}: {line}"));
        let rest = line.strip_suffix(" .").ok_or_else(|| bad("line must end with \" .\""))?;
        let (subject, rest) =
            rest.split_once(' ').ok_or_else(|| bad("missing predicate and object"))?;
        let (predicate, object) = rest.split_once(' ').ok_or_else(|| bad("missing object"))?;
        let subject = Resource::new(subject)?;
        let predicate = Resource::new(predicate)?;
        let object = Term::parse(object)?;
        Triple::new(subject, predicate, object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_line())
    }
}

/// A triple pattern for matching. Any position may hold a variable, but at
/// most two of the three may actually do so.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pattern {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Pattern {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        Pattern { subject, predicate, object }
    }

    /// Number of positions (not distinct names) occupied by variables.
    pub fn variable_positions(&self) -> usize {
        [&self.subject, &self.predicate, &self.object]
            .iter()
            .filter(|t| t.is_variable())
            .count()
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}
