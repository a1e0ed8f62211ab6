//! Error type shared by every module in the crate.
//!
//! Variants are grouped by the stage that raises them: term and triple
//! construction, knowledge-base assertion, parsing of the external formats,
//! rule validation, evaluation, and prediction. The CLI maps these onto its
//! exit codes, so variant identity is part of the public contract.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A resource is empty, lacks a namespace prefix, or a triple position
    /// holds a term kind that is not allowed there.
    #[error("malformed term: {0}")]
    MalformedTerm(String),

    /// A triple uses a predicate that is neither core vocabulary nor a
    /// declared property.
    #[error("undeclared predicate: {0}")]
    UndeclaredPredicate(String),

    /// Asserting the edge would close a subclass cycle. The knowledge base is
    /// unchanged when this is raised.
    #[error("subclass cycle detected: {}", path.join(" -> "))]
    CycleDetected { path: Vec<String> },

    /// A class lookup referenced a resource that is not registered as a class.
    #[error("unknown class: {0}")]
    UnknownClass(String),

    /// Retraction is only permitted for event-derived triples.
    #[error("triple is not retractable: {0}")]
    NotRetractable(String),

    /// Any of the textual inputs failed to parse. `line` is 1-based and 0
    /// when no line is meaningful for the input.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A catalog file contains the same id twice within one kind.
    #[error("duplicate catalog id: {0}")]
    DuplicateId(String),

    /// Ontology emission and rule generation refuse graphs whose consistency
    /// report carries errors.
    #[error("inconsistent concept graph: {0}")]
    InconsistentGraph(String),

    /// An event stream contains the same event id twice.
    #[error("duplicate event id: {0}")]
    DuplicateEventId(String),

    /// A rule head uses a variable that no relational body atom binds.
    #[error("unsafe rule {rule}: head variable {variable} not bound by the body")]
    UnsafeRule { rule: String, variable: String },

    /// A triple pattern spends more than two of its three positions on
    /// variables.
    #[error("pattern {pattern} uses {count} variable positions, at most 2 allowed")]
    TooManyVariables { pattern: String, count: usize },

    /// The SELECT clause names a variable that no pattern mentions.
    #[error("selected variable {0} does not occur in any pattern")]
    UnboundSelect(String),

    /// A builtin atom was evaluated before both arguments were bound.
    #[error("builtin argument {0} is unbound")]
    UnboundBuiltinArgument(String),

    /// Temporal comparison needs an occurredAt value on both events.
    #[error("event {0} has no timestamp")]
    MissingTimestamp(String),

    /// Forward chaining hit a safety limit. The knowledge base is left at the
    /// last completed iteration.
    #[error("inference limit exceeded: {limit} = {value}")]
    LimitExceeded { limit: &'static str, value: usize },

    /// Prediction requires at least one attack-pattern class in the KB.
    #[error("knowledge base holds no attack-pattern classes")]
    EmptyOntology,

    /// Step progress was requested for an attack without a registered step
    /// registry.
    #[error("no step registry for attack: {0}")]
    UnknownAttack(String),
}

impl Error {
    /// Shorthand used by the parsers.
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
