//! Conjunctive triple-pattern queries and the canonical attack queries.
//!
//! Grammar: `SELECT ?v1 [?v2 ...] WHERE { <pattern> . <pattern> ... }` with
//! a pattern being three whitespace-separated terms. Bare identifiers
//! resolve to the `core:` namespace, so `?s type Vulnerable` reads as
//! `?s core:type core:Vulnerable`. Pattern separators must be surrounded by
//! whitespace because `.` is legal inside local names.
//!
//! Each pattern may spend at most two positions on variables. Conjunctions
//! of several patterns are allowed and evaluated as joins. Evaluation is
//! meant to run over the post-fixpoint knowledge base so derived facts are
//! visible; results are deduplicated and sorted for determinism.
//!
//! The four `q_*` builders cover the operator questions the prediction
//! report serves: is one node targeted by one attack, which nodes fall
//! under an attack type, and which systems carry a given weakness or
//! vulnerability.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kb::{Bindings, KnowledgeBase};
use crate::term::{Pattern, Resource, Term, Variable};
use crate::vocab;

/// A validated query: selected variables plus the pattern conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub select: Vec<Variable>,
    pub patterns: Vec<Pattern>,
}

impl Query {
    /// Validates the per-pattern variable budget and that every selected
    /// variable occurs in some pattern.
    pub fn new(select: Vec<Variable>, patterns: Vec<Pattern>) -> Result<Self> {
        if select.is_empty() {
            return Err(Error::parse(0, "query must select at least one variable"));
        }
        if patterns.is_empty() {
            return Err(Error::parse(0, "query must contain at least one pattern"));
        }
        let mut seen: BTreeSet<Variable> = BTreeSet::new();
        for pattern in &patterns {
            let count = pattern.variable_positions();
            if count > 2 {
                return Err(Error::TooManyVariables { pattern: pattern.to_string(), count });
            }
            for term in [&pattern.subject, &pattern.predicate, &pattern.object] {
                if let Term::Variable(v) = term {
                    seen.insert(v.clone());
                }
            }
        }
        for v in &select {
            if !seen.contains(v) {
                return Err(Error::UnboundSelect(v.as_str().to_string()));
            }
        }
        Ok(Query { select, patterns })
    }
}

/// Parses the `SELECT ... WHERE { ... }` text form.
pub fn parse_query(input: &str) -> Result<Query> {
    let tokens = tokenize(input)?;
    let mut it = tokens.into_iter().peekable();
    match it.next().as_deref() {
        Some("SELECT") => {}
        _ => return Err(Error::parse(1, "query must start with SELECT")),
    }
    let mut select = Vec::new();
    while let Some(tok) = it.peek() {
        if tok == "WHERE" {
            break;
        }
        let tok = it.next().unwrap();
        if !tok.starts_with('?') {
            return Err(Error::parse(1, format!("expected a ?variable in SELECT, got {tok}")));
        }
        select.push(Variable::new(tok).map_err(|e| Error::parse(1, e.to_string()))?);
    }
    if it.next().as_deref() != Some("WHERE") {
        return Err(Error::parse(1, "expected WHERE after the SELECT list"));
    }
    if it.next().as_deref() != Some("{") {
        return Err(Error::parse(1, "expected { after WHERE"));
    }

    let mut patterns = Vec::new();
    let mut current: Vec<Term> = Vec::new();
    let mut closed = false;
    for tok in it.by_ref() {
        match tok.as_str() {
            "." | "}" => {
                if !current.is_empty() {
                    if current.len() != 3 {
                        return Err(Error::parse(
                            1,
                            format!("pattern needs exactly 3 terms, got {}", current.len()),
                        ));
                    }
                    let mut terms = current.drain(..);
                    patterns.push(Pattern::new(
                        terms.next().unwrap(),
                        terms.next().unwrap(),
                        terms.next().unwrap(),
                    ));
                }
                if tok == "}" {
                    closed = true;
                    break;
                }
            }
            _ => current.push(parse_term(&tok)?),
        }
    }
    if !closed {
        return Err(Error::parse(1, "unterminated WHERE block"));
    }
    if it.next().is_some() {
        return Err(Error::parse(1, "trailing tokens after }"));
    }
    Query::new(select, patterns)
}

/// Query terms allow bare names, which resolve to `core:`.
fn parse_term(token: &str) -> Result<Term> {
    if token.starts_with('?') || token.starts_with('"') || token.contains(':') {
        Term::parse(token).map_err(|e| Error::parse(1, e.to_string()))
    } else {
        Ok(Term::Resource(vocab::resolve(token).map_err(|e| Error::parse(1, e.to_string()))?))
    }
}

/// Whitespace tokenizer that keeps quoted literals (and their datatype
/// suffix) intact and treats standalone `{` and `}` as tokens.
fn tokenize(input: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut chars = input.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' => {
                current.push('"');
                let mut escaped = false;
                for c in chars.by_ref() {
                    current.push(c);
                    if escaped {
                        escaped = false;
                    } else if c == '\\' {
                        escaped = true;
                    } else if c == '"' {
                        break;
                    }
                }
                if !current.ends_with('"') || current.len() == 1 {
                    return Err(Error::parse(1, format!("unterminated literal: {current}")));
                }
            }
            '{' | '}' => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c => current.push(c),
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    Ok(tokens)
}

/// Evaluates the query. Rows hold the selected variables' values in SELECT
/// order, deduplicated and sorted lexicographically.
pub fn evaluate(kb: &KnowledgeBase, query: &Query) -> Result<Vec<Vec<Term>>> {
    let mut rows: Vec<Bindings> = vec![Bindings::new()];
    for pattern in &query.patterns {
        let mut next = Vec::new();
        for row in &rows {
            let bound = apply(pattern, row);
            for found in kb.match_pattern(&bound)? {
                let mut merged = row.clone();
                merged.extend(found);
                next.push(merged);
            }
        }
        rows = next;
        if rows.is_empty() {
            return Ok(Vec::new());
        }
    }
    let mut out: BTreeSet<Vec<Term>> = BTreeSet::new();
    for row in rows {
        let projected: Option<Vec<Term>> =
            query.select.iter().map(|v| row.get(v).cloned()).collect();
        if let Some(p) = projected {
            out.insert(p);
        }
    }
    Ok(out.into_iter().collect())
}

fn apply(pattern: &Pattern, bindings: &Bindings) -> Pattern {
    let sub = |t: &Term| match t {
        Term::Variable(v) => bindings.get(v).cloned().unwrap_or_else(|| t.clone()),
        other => other.clone(),
    };
    Pattern::new(sub(&pattern.subject), sub(&pattern.predicate), sub(&pattern.object))
}

fn var(name: &str) -> Variable {
    Variable::new(name).expect("static variable name")
}

/// Marker individuals of `attack` that target `node`: did this attack hit
/// this node? Step individuals hang off the marker via `core:partOf`.
pub fn q_specific_attack(node: &Resource, attack: &Resource) -> Query {
    let m = var("?m");
    Query::new(
        vec![m.clone()],
        vec![
            Pattern::new(
                Term::Variable(m.clone()),
                Term::Resource(vocab::res(vocab::TYPE)),
                Term::Resource(attack.clone()),
            ),
            Pattern::new(
                Term::Variable(m),
                Term::Resource(vocab::res(vocab::TARGETS)),
                Term::Resource(node.clone()),
            ),
        ],
    )
    .expect("builder query is valid by construction")
}

/// All `(marker, node)` pairs for one attack class across the network.
pub fn q_attacks_of_type(attack: &Resource) -> Query {
    let (m, n) = (var("?m"), var("?n"));
    Query::new(
        vec![m.clone(), n.clone()],
        vec![
            Pattern::new(
                Term::Variable(m.clone()),
                Term::Resource(vocab::res(vocab::TYPE)),
                Term::Resource(attack.clone()),
            ),
            Pattern::new(
                Term::Variable(m),
                Term::Resource(vocab::res(vocab::TARGETS)),
                Term::Variable(n),
            ),
        ],
    )
    .expect("builder query is valid by construction")
}

/// Attacks related to the weakness, paired with nodes currently bearing it.
pub fn q_by_weakness(weakness: &Resource) -> Query {
    let (a, n) = (var("?a"), var("?n"));
    Query::new(
        vec![a.clone(), n.clone()],
        vec![
            Pattern::new(
                Term::Variable(a),
                Term::Resource(vocab::res(vocab::RELATED_TO)),
                Term::Resource(weakness.clone()),
            ),
            Pattern::new(
                Term::Variable(n),
                Term::Resource(vocab::res(vocab::HAS_WEAKNESS)),
                Term::Resource(weakness.clone()),
            ),
        ],
    )
    .expect("builder query is valid by construction")
}

/// Attacks whose weakness chain reaches the vulnerability, paired with nodes
/// bearing that vulnerability. Catalog links run attack -> weakness ->
/// vulnerability, so the attack is reached through the chain.
pub fn q_by_vulnerability(vulnerability: &Resource) -> Query {
    let (a, w, n) = (var("?a"), var("?w"), var("?n"));
    Query::new(
        vec![a.clone(), n.clone()],
        vec![
            Pattern::new(
                Term::Variable(a),
                Term::Resource(vocab::res(vocab::RELATED_TO)),
                Term::Variable(w.clone()),
            ),
            Pattern::new(
                Term::Variable(w),
                Term::Resource(vocab::res(vocab::RELATED_TO)),
                Term::Resource(vulnerability.clone()),
            ),
            Pattern::new(
                Term::Variable(n),
                Term::Resource(vocab::res(vocab::HAS_VULNERABILITY)),
                Term::Resource(vulnerability.clone()),
            ),
        ],
    )
    .expect("builder query is valid by construction")
}
