//! Horn rules: atoms, rules with an optional disjunction group, rule sets,
//! and the schema axioms every rule set carries.
//!
//! A rule body is a conjunction of atoms plus at most one `ANY { ... }`
//! group. [`expand_disjunction`] lowers a rule with a group into one pure
//! Horn rule per disjunct; the engine only ever evaluates Horn rules. Range
//! restriction (every head variable bound by the body) is enforced at
//! construction so unsafe rules never reach evaluation.

mod engine;
mod parser;

pub use engine::{evaluate_body, forward_chain, instantiate_axioms, ChainLimits, DerivationReport};
pub use parser::parse_rules;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::term::{Pattern, Resource, Term, Triple, Variable};
use crate::vocab;

/// The single supported builtin, strict temporal order between two events.
pub const BUILTIN_BEFORE: &str = "before";

/// One body or head element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Atom {
    /// `Class(term)`, shorthand for the triple `{term, core:type, class}`.
    Class { class: Resource, term: Term },
    /// `property(subject, object)`.
    Property { property: Resource, subject: Term, object: Term },
    /// `before(?e1, ?e2)`; never binds variables, only filters.
    Builtin { name: String, args: [Term; 2] },
}

impl Atom {
    pub fn is_builtin(&self) -> bool {
        matches!(self, Atom::Builtin { .. })
    }

    /// Variables the atom can bind. Builtins only consume bindings, so they
    /// report none.
    pub fn binding_variables(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        match self {
            Atom::Class { term, .. } => {
                if let Term::Variable(v) = term {
                    out.insert(v.clone());
                }
            }
            Atom::Property { subject, object, .. } => {
                for t in [subject, object] {
                    if let Term::Variable(v) = t {
                        out.insert(v.clone());
                    }
                }
            }
            Atom::Builtin { .. } => {}
        }
        out
    }

    /// All variables mentioned, including builtin arguments.
    pub fn variables(&self) -> BTreeSet<Variable> {
        match self {
            Atom::Builtin { args, .. } => args
                .iter()
                .filter_map(|t| t.as_variable().cloned())
                .collect(),
            other => other.binding_variables(),
        }
    }

    /// The triple pattern for a relational atom, with `bindings` applied.
    /// Builtins have no pattern.
    pub fn to_pattern(&self, bindings: &crate::kb::Bindings) -> Option<Pattern> {
        let sub = |t: &Term| substitute(t, bindings);
        match self {
            Atom::Class { class, term } => Some(Pattern::new(
                sub(term),
                Term::Resource(vocab::res(vocab::TYPE)),
                Term::Resource(class.clone()),
            )),
            Atom::Property { property, subject, object } => Some(Pattern::new(
                sub(subject),
                Term::Resource(property.clone()),
                sub(object),
            )),
            Atom::Builtin { .. } => None,
        }
    }

    /// Grounds a head atom into a triple. Every variable must be bound.
    pub fn instantiate(&self, bindings: &crate::kb::Bindings) -> Result<Triple> {
        let ground = |t: &Term| -> Result<Term> {
            let t = substitute(t, bindings);
            match t {
                Term::Variable(v) => Err(Error::MalformedTerm(format!(
                    "head variable {v} is unbound"
                ))),
                other => Ok(other),
            }
        };
        match self {
            Atom::Class { class, term } => {
                let subject = match ground(term)? {
                    Term::Resource(r) => r,
                    other => {
                        return Err(Error::MalformedTerm(format!(
                            "class atom subject must be a resource, got {other}"
                        )))
                    }
                };
                Ok(Triple::resources(subject, vocab::res(vocab::TYPE), class.clone()))
            }
            Atom::Property { property, subject, object } => {
                let subject = match ground(subject)? {
                    Term::Resource(r) => r,
                    other => {
                        return Err(Error::MalformedTerm(format!(
                            "triple subject must be a resource, got {other}"
                        )))
                    }
                };
                Triple::new(subject, property.clone(), ground(object)?)
            }
            Atom::Builtin { name, .. } => Err(Error::MalformedTerm(format!(
                "builtin {name} cannot appear in a rule head"
            ))),
        }
    }
}

fn substitute(term: &Term, bindings: &crate::kb::Bindings) -> Term {
    match term {
        Term::Variable(v) => bindings.get(v).cloned().unwrap_or_else(|| term.clone()),
        other => other.clone(),
    }
}

fn display_name(r: &Resource) -> String {
    if r.prefix() == vocab::PREFIX_CORE {
        r.local().to_string()
    } else {
        r.as_str().to_string()
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Class { class, term } => write!(f, "{}({term})", display_name(class)),
            Atom::Property { property, subject, object } => {
                write!(f, "{}({subject}, {object})", display_name(property))
            }
            Atom::Builtin { name, args } => write!(f, "{name}({}, {})", args[0], args[1]),
        }
    }
}

/// A named rule. `body_or` holds the optional disjunction group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub body_and: Vec<Atom>,
    pub body_or: Option<Vec<Atom>>,
    pub head: Vec<Atom>,
}

impl Rule {
    /// Builds and validates a rule: non-empty name and head, no builtin
    /// head atoms, non-empty disjunction group when present, and range
    /// restriction counting body_and plus each single disjunct.
    pub fn new(
        name: impl Into<String>,
        body_and: Vec<Atom>,
        body_or: Option<Vec<Atom>>,
        head: Vec<Atom>,
    ) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::parse(0, "rule name must not be empty"));
        }
        if head.is_empty() {
            return Err(Error::parse(0, format!("rule {name} has an empty head")));
        }
        if let Some(atom) = head.iter().find(|a| a.is_builtin()) {
            return Err(Error::parse(0, format!("rule {name} has builtin head atom {atom}")));
        }
        if matches!(&body_or, Some(group) if group.is_empty()) {
            return Err(Error::parse(0, format!("rule {name} has an empty disjunction group")));
        }
        if let Some(atom) = body_or.iter().flatten().find(|a| a.is_builtin()) {
            return Err(Error::parse(
                0,
                format!("rule {name} has builtin atom {atom} inside a disjunction group"),
            ));
        }

        let base: BTreeSet<Variable> =
            body_and.iter().flat_map(Atom::binding_variables).collect();
        let head_vars: BTreeSet<Variable> = head.iter().flat_map(Atom::variables).collect();
        let groups: Vec<BTreeSet<Variable>> = match &body_or {
            None => vec![base.clone()],
            Some(group) => group
                .iter()
                .map(|d| {
                    let mut vars = base.clone();
                    vars.extend(d.binding_variables());
                    vars
                })
                .collect(),
        };
        for vars in &groups {
            for v in &head_vars {
                if !vars.contains(v) {
                    return Err(Error::UnsafeRule {
                        rule: name,
                        variable: v.as_str().to_string(),
                    });
                }
            }
        }
        Ok(Rule { name, body_and, body_or, head })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule \"{}\": ", self.name)?;
        let mut first = true;
        for atom in &self.body_and {
            if !first {
                write!(f, " AND ")?;
            }
            write!(f, "{atom}")?;
            first = false;
        }
        if let Some(group) = &self.body_or {
            if !first {
                write!(f, " AND ")?;
            }
            write!(f, "ANY {{ ")?;
            for (i, atom) in group.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{atom}")?;
            }
            write!(f, " }}")?;
            first = false;
        }
        let _ = first;
        write!(f, " => ")?;
        for (i, atom) in self.head.iter().enumerate() {
            if i > 0 {
                write!(f, " AND ")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

/// Lowers a rule to pure Horn form: each disjunct joins `body_and` in its
/// own rule, named `<name>#<index>` with 1-based indexes.
pub fn expand_disjunction(rule: &Rule) -> Vec<Rule> {
    match &rule.body_or {
        None => vec![rule.clone()],
        Some(group) => group
            .iter()
            .enumerate()
            .map(|(i, disjunct)| {
                let mut body = rule.body_and.clone();
                body.push(disjunct.clone());
                Rule {
                    name: format!("{}#{}", rule.name, i + 1),
                    body_and: body,
                    body_or: None,
                    head: rule.head.clone(),
                }
            })
            .collect(),
    }
}

/// Strips the `#<index>` disjunct suffix added by [`expand_disjunction`].
pub fn base_rule_name(expanded: &str) -> &str {
    expanded.rsplit_once('#').map(|(base, _)| base).unwrap_or(expanded)
}

/// The five schema axiom families. [`instantiate_axioms`] turns them into
/// plain Horn rules against the current declarations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AxiomKind {
    /// type(?x, ?c) ∧ subClassOf(?c, ?d) → type(?x, ?d)
    SubclassTyping,
    /// p(?x, ?y) → q(?x, ?y) for each declared subPropertyOf pair
    SubPropertyOf,
    /// p(?x, ?y) → q(?y, ?x) for inverse pairs and symmetric properties
    InverseSymmetry,
    /// p(?x, ?y) ∧ p(?y, ?z) → p(?x, ?z) for transitive properties
    TransitiveClosure,
    /// equivalentTo symmetry plus substitution into type, hasWeakness,
    /// hasVulnerability, and relatedTo triples
    EquivalentSubstitution,
}

impl AxiomKind {
    pub fn all() -> Vec<AxiomKind> {
        vec![
            AxiomKind::SubclassTyping,
            AxiomKind::SubPropertyOf,
            AxiomKind::InverseSymmetry,
            AxiomKind::TransitiveClosure,
            AxiomKind::EquivalentSubstitution,
        ]
    }
}

/// A validated collection of rules plus the axiom families to apply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub axioms: Vec<AxiomKind>,
}

impl RuleSet {
    /// Builds a rule set with the full axiom complement. Rule names must be
    /// unique.
    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for rule in &rules {
            if !seen.insert(rule.name.clone()) {
                return Err(Error::parse(0, format!("duplicate rule name: {}", rule.name)));
            }
        }
        Ok(RuleSet { rules, axioms: AxiomKind::all() })
    }

    /// A rule set that skips the schema axioms. Used by tests that need to
    /// observe user rules in isolation.
    pub fn without_axioms(rules: Vec<Rule>) -> Result<Self> {
        let mut rs = RuleSet::new(rules)?;
        rs.axioms.clear();
        Ok(rs)
    }

    /// Serializes every rule in the text DSL, one block per rule.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, rule) in self.rules.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&rule.to_string());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(n: &str) -> Term {
        Term::Variable(Variable::new(n).unwrap())
    }

    fn class_atom(class: &str, term: Term) -> Atom {
        Atom::Class { class: vocab::resolve(class).unwrap(), term }
    }

    fn prop_atom(p: &str, s: Term, o: Term) -> Atom {
        Atom::Property { property: vocab::resolve(p).unwrap(), subject: s, object: o }
    }

    fn res_term(r: &str) -> Term {
        Term::Resource(Resource::new(r).unwrap())
    }

    #[test]
    fn range_restriction_rejects_free_head_variables() {
        let err = Rule::new(
            "bad",
            vec![class_atom("System", var("?s"))],
            None,
            vec![class_atom("Vulnerable", var("?z"))],
        );
        assert_eq!(
            err,
            Err(Error::UnsafeRule { rule: "bad".into(), variable: "?z".into() })
        );
    }

    #[test]
    fn range_restriction_needs_every_disjunct_to_bind_head_vars() {
        // ?w only appears in the first disjunct, so the second one leaves it
        // unbound and the rule is unsafe.
        let err = Rule::new(
            "bad-or",
            vec![class_atom("System", var("?s"))],
            Some(vec![
                prop_atom("hasWeakness", var("?s"), var("?w")),
                prop_atom("hasVulnerability", var("?s"), var("?v")),
            ]),
            vec![prop_atom("relatedTo", var("?s"), var("?w"))],
        );
        assert_eq!(
            err,
            Err(Error::UnsafeRule { rule: "bad-or".into(), variable: "?w".into() })
        );
    }

    #[test]
    fn builtins_never_satisfy_range_restriction() {
        let err = Rule::new(
            "builtin-bound",
            vec![Atom::Builtin {
                name: BUILTIN_BEFORE.into(),
                args: [var("?a"), var("?b")],
            }],
            None,
            vec![class_atom("Event", var("?a"))],
        );
        assert!(matches!(err, Err(Error::UnsafeRule { .. })));
    }

    #[test]
    fn expansion_produces_one_horn_rule_per_disjunct() {
        let rule = Rule::new(
            "predict",
            vec![class_atom("System", var("?s"))],
            Some(vec![
                prop_atom("hasWeakness", var("?s"), res_term("cwe:CWE-345")),
                prop_atom("hasWeakness", var("?s"), res_term("cwe:CWE-346")),
                prop_atom("hasWeakness", var("?s"), res_term("cwe:CWE-352")),
            ]),
            vec![class_atom("UnderPotentialAttackSystem", var("?s"))],
        )
        .unwrap();
        let horn = expand_disjunction(&rule);
        assert_eq!(horn.len(), 3);
        assert_eq!(horn[0].name, "predict#1");
        assert_eq!(horn[2].name, "predict#3");
        assert!(horn.iter().all(|r| r.body_or.is_none()));
        assert!(horn.iter().all(|r| r.body_and.len() == 2 && r.head == rule.head));
        assert_eq!(base_rule_name(&horn[1].name), "predict");

        let plain = Rule::new(
            "detect",
            vec![class_atom("System", var("?s"))],
            None,
            vec![class_atom("Vulnerable", var("?s"))],
        )
        .unwrap();
        assert_eq!(expand_disjunction(&plain), vec![plain.clone()]);
    }

    #[test]
    fn single_disjunct_expansion_matches_inlining() {
        let rule = Rule::new(
            "one",
            vec![class_atom("System", var("?s"))],
            Some(vec![prop_atom("hasWeakness", var("?s"), res_term("cwe:CWE-345"))]),
            vec![class_atom("Vulnerable", var("?s"))],
        )
        .unwrap();
        let horn = expand_disjunction(&rule);
        assert_eq!(horn.len(), 1);
        assert_eq!(horn[0].body_and.len(), 2);
        assert_eq!(horn[0].body_and[1], rule.body_or.as_ref().unwrap()[0]);
    }

    #[test]
    fn duplicate_rule_names_are_rejected() {
        let mk = |name: &str| {
            Rule::new(
                name,
                vec![class_atom("System", var("?s"))],
                None,
                vec![class_atom("Vulnerable", var("?s"))],
            )
            .unwrap()
        };
        assert!(RuleSet::new(vec![mk("a"), mk("a")]).is_err());
        let rs = RuleSet::new(vec![mk("a"), mk("b")]).unwrap();
        assert_eq!(rs.axioms, AxiomKind::all());
    }

    #[test]
    fn head_instantiation_grounds_class_and_property_atoms() {
        let mut bindings = crate::kb::Bindings::new();
        bindings.insert(Variable::new("?s").unwrap(), res_term("node:s1"));
        let head = class_atom("Vulnerable", var("?s"));
        assert_eq!(
            head.instantiate(&bindings).unwrap().to_line(),
            "node:s1 core:type core:Vulnerable ."
        );
        let link = prop_atom("targets", res_term("capec:CAPEC-111-incident"), var("?s"));
        assert_eq!(
            link.instantiate(&bindings).unwrap().to_line(),
            "capec:CAPEC-111-incident core:targets node:s1 ."
        );
    }
}
