//! Semi-naive forward chaining to fixpoint.
//!
//! Iteration 1 evaluates every rule against the full store. Every later
//! iteration requires each derivation to consume at least one triple from
//! the previous iteration's delta, which is what keeps re-evaluation cost
//! proportional to change. Deltas are applied at iteration end, so all rules
//! in one iteration see the same snapshot and the final store is independent
//! of rule order.
//!
//! Axiom families expand to plain Horn rules against the declarations
//! present when chaining starts. Subclass typing is a single generic rule
//! that joins `subClassOf` triples as data, so hierarchy edges derived
//! mid-run still propagate types.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::kb::{Bindings, KnowledgeBase, PropertyKind};
use crate::term::{Resource, Term, Triple, Variable};
use crate::vocab;

use super::{expand_disjunction, substitute, Atom, AxiomKind, Rule, RuleSet};

/// Safety limits for [`forward_chain`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainLimits {
    pub max_iterations: usize,
    pub max_derived: usize,
}

impl Default for ChainLimits {
    fn default() -> Self {
        ChainLimits { max_iterations: 10_000, max_derived: 1_000_000 }
    }
}

/// What a chaining run produced.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DerivationReport {
    /// Triples added to the store.
    pub new_triples: usize,
    /// Evaluation passes executed, including the final empty one.
    pub iterations: usize,
    /// New-triple count per (expanded) rule name.
    pub fired: BTreeMap<String, usize>,
    /// Deriving rule names per derived triple.
    pub provenance: BTreeMap<Triple, BTreeSet<String>>,
}

impl DerivationReport {
    /// Rules that derived the triple, if it was derived in this run.
    pub fn derived_by(&self, triple: &Triple) -> Option<&BTreeSet<String>> {
        self.provenance.get(triple)
    }
}

/// Runs the rule set plus its axioms to fixpoint over the knowledge base.
pub fn forward_chain(
    kb: &mut KnowledgeBase,
    rs: &RuleSet,
    limits: ChainLimits,
) -> Result<DerivationReport> {
    let mut horn: Vec<Rule> = rs.rules.iter().flat_map(expand_disjunction).collect();
    horn.extend(instantiate_axioms(kb, &rs.axioms));

    let mut report = DerivationReport::default();
    let mut delta: Vec<Triple> = kb.triples().cloned().collect();
    loop {
        if delta.is_empty() {
            return Ok(report);
        }
        if report.iterations == limits.max_iterations {
            return Err(Error::LimitExceeded {
                limit: "max_iterations",
                value: limits.max_iterations,
            });
        }
        report.iterations += 1;
        let first_pass = report.iterations == 1;

        let mut pending: BTreeSet<Triple> = BTreeSet::new();
        for rule in &horn {
            let bindings = if first_pass {
                evaluate_body(kb, &rule.body_and, &Bindings::new())?
            } else {
                delta_bindings(kb, rule, &delta)?
            };
            for binding in &bindings {
                for atom in &rule.head {
                    let triple = atom.instantiate(binding)?;
                    if kb.contains(&triple) {
                        continue;
                    }
                    report
                        .provenance
                        .entry(triple.clone())
                        .or_default()
                        .insert(rule.name.clone());
                    if pending.insert(triple) {
                        *report.fired.entry(rule.name.clone()).or_insert(0) += 1;
                    }
                }
            }
        }

        if pending.is_empty() {
            return Ok(report);
        }
        if report.new_triples + pending.len() > limits.max_derived {
            return Err(Error::LimitExceeded {
                limit: "max_derived",
                value: limits.max_derived,
            });
        }
        for triple in &pending {
            kb.assert_triple(triple.clone())?;
        }
        report.new_triples += pending.len();
        delta = pending.into_iter().collect();
    }
}

/// Bindings for one rule where at least one relational atom matches a triple
/// from the delta.
fn delta_bindings(kb: &KnowledgeBase, rule: &Rule, delta: &[Triple]) -> Result<Vec<Bindings>> {
    let mut out: BTreeSet<Bindings> = BTreeSet::new();
    for (i, atom) in rule.body_and.iter().enumerate() {
        if atom.is_builtin() {
            continue;
        }
        let rest: Vec<Atom> = rule
            .body_and
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, a)| a.clone())
            .collect();
        for triple in delta {
            if let Some(seed) = unify_atom(atom, triple) {
                out.extend(evaluate_body(kb, &rest, &seed)?);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Evaluates a conjunction of atoms, extending the seed bindings. Relational
/// atoms join left to right; builtins are deferred until all relational
/// atoms have bound their arguments.
pub fn evaluate_body(
    kb: &KnowledgeBase,
    atoms: &[Atom],
    seed: &Bindings,
) -> Result<Vec<Bindings>> {
    let mut rows = vec![seed.clone()];
    let mut builtins = Vec::new();
    for atom in atoms {
        if atom.is_builtin() {
            builtins.push(atom);
            continue;
        }
        let mut next = Vec::new();
        for row in &rows {
            let pattern = atom.to_pattern(row).expect("relational atom has a pattern");
            for found in kb.match_pattern(&pattern)? {
                let mut merged = row.clone();
                merged.extend(found);
                next.push(merged);
            }
        }
        rows = next;
        if rows.is_empty() {
            return Ok(rows);
        }
    }
    for atom in builtins {
        let Atom::Builtin { args, .. } = atom else { unreachable!() };
        let mut kept = Vec::new();
        for row in rows {
            if eval_before(kb, args, &row)? {
                kept.push(row);
            }
        }
        rows = kept;
        if rows.is_empty() {
            return Ok(rows);
        }
    }
    let dedup: BTreeSet<Bindings> = rows.into_iter().collect();
    Ok(dedup.into_iter().collect())
}

/// `before(a, b)` holds when both arguments resolve to timestamps and the
/// first is strictly smaller. Arguments without a timestamp fail the filter;
/// arguments left unbound are an error.
fn eval_before(kb: &KnowledgeBase, args: &[Term; 2], row: &Bindings) -> Result<bool> {
    let mut values = [None, None];
    for (slot, arg) in values.iter_mut().zip(args) {
        *slot = match substitute(arg, row) {
            Term::Variable(v) => {
                return Err(Error::UnboundBuiltinArgument(v.as_str().to_string()))
            }
            Term::Resource(r) => kb.timestamp_of(&r),
            Term::Literal(l) => l.as_i64(),
        };
    }
    Ok(matches!(values, [Some(a), Some(b)] if a < b))
}

fn unify_atom(atom: &Atom, triple: &Triple) -> Option<Bindings> {
    let pattern = atom.to_pattern(&Bindings::new())?;
    let mut bindings = Bindings::new();
    let pairs = [
        (pattern.subject, Term::Resource(triple.subject.clone())),
        (pattern.predicate, Term::Resource(triple.predicate.clone())),
        (pattern.object, triple.object.clone()),
    ];
    for (slot, value) in pairs {
        match slot {
            Term::Variable(v) => match bindings.get(&v) {
                Some(bound) if *bound != value => return None,
                Some(_) => {}
                None => {
                    bindings.insert(v, value);
                }
            },
            ground => {
                if ground != value {
                    return None;
                }
            }
        }
    }
    Some(bindings)
}

/// Expands the axiom families into Horn rules for the declarations currently
/// in the knowledge base.
pub fn instantiate_axioms(kb: &KnowledgeBase, kinds: &[AxiomKind]) -> Vec<Rule> {
    let v = |n: &str| Term::Variable(Variable::new(n).expect("static variable name"));
    let prop = |p: &str, s: Term, o: Term| Atom::Property {
        property: vocab::res(p),
        subject: s,
        object: o,
    };
    let named = |p: &Resource, s: Term, o: Term| Atom::Property {
        property: p.clone(),
        subject: s,
        object: o,
    };
    let rule = |name: String, body: Vec<Atom>, head: Vec<Atom>| {
        Rule::new(name, body, None, head).expect("axiom rules are safe by construction")
    };

    let mut out = Vec::new();
    for kind in kinds {
        match kind {
            AxiomKind::SubclassTyping => {
                out.push(rule(
                    "axiom:subclass-typing".into(),
                    vec![
                        prop(vocab::TYPE, v("?x"), v("?c")),
                        prop(vocab::SUB_CLASS_OF, v("?c"), v("?d")),
                    ],
                    vec![prop(vocab::TYPE, v("?x"), v("?d"))],
                ));
            }
            AxiomKind::SubPropertyOf => {
                for (child, parents) in kb.property_parents() {
                    for parent in parents {
                        out.push(rule(
                            format!("axiom:subproperty:{child}:{parent}"),
                            vec![named(child, v("?x"), v("?y"))],
                            vec![named(parent, v("?x"), v("?y"))],
                        ));
                    }
                }
            }
            AxiomKind::InverseSymmetry => {
                for (property, decl) in kb.properties() {
                    if let Some(inverse) = &decl.inverse {
                        out.push(rule(
                            format!("axiom:inverse:{property}"),
                            vec![named(property, v("?x"), v("?y"))],
                            vec![named(inverse, v("?y"), v("?x"))],
                        ));
                    }
                    if decl.symmetric && decl.kind == PropertyKind::Object {
                        out.push(rule(
                            format!("axiom:symmetric:{property}"),
                            vec![named(property, v("?x"), v("?y"))],
                            vec![named(property, v("?y"), v("?x"))],
                        ));
                    }
                }
            }
            AxiomKind::TransitiveClosure => {
                for (property, decl) in kb.properties() {
                    if decl.transitive {
                        out.push(rule(
                            format!("axiom:transitive:{property}"),
                            vec![
                                named(property, v("?x"), v("?y")),
                                named(property, v("?y"), v("?z")),
                            ],
                            vec![named(property, v("?x"), v("?z"))],
                        ));
                    }
                }
            }
            AxiomKind::EquivalentSubstitution => {
                out.push(rule(
                    "axiom:equivalent-symmetry".into(),
                    vec![prop(vocab::EQUIVALENT_TO, v("?x"), v("?y"))],
                    vec![prop(vocab::EQUIVALENT_TO, v("?y"), v("?x"))],
                ));
                out.push(rule(
                    "axiom:equivalent-type".into(),
                    vec![
                        prop(vocab::EQUIVALENT_TO, v("?x"), v("?y")),
                        prop(vocab::TYPE, v("?x"), v("?c")),
                    ],
                    vec![prop(vocab::TYPE, v("?y"), v("?c"))],
                ));
                for p in [vocab::HAS_WEAKNESS, vocab::HAS_VULNERABILITY, vocab::RELATED_TO] {
                    out.push(rule(
                        format!("axiom:equivalent-subject:{p}"),
                        vec![
                            prop(vocab::EQUIVALENT_TO, v("?x"), v("?y")),
                            prop(p, v("?x"), v("?o")),
                        ],
                        vec![prop(p, v("?y"), v("?o"))],
                    ));
                    out.push(rule(
                        format!("axiom:equivalent-object:{p}"),
                        vec![
                            prop(vocab::EQUIVALENT_TO, v("?x"), v("?y")),
                            prop(p, v("?s"), v("?x")),
                        ],
                        vec![prop(p, v("?s"), v("?y"))],
                    ));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::parse_rules;

    fn r(s: &str) -> Resource {
        Resource::new(s).unwrap()
    }

    fn seeded() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        kb.load_core_ontology().unwrap();
        kb
    }

    fn observed_kb(weaknesses: &[&str]) -> KnowledgeBase {
        let mut kb = seeded();
        kb.assert_triple(Triple::resources(r("node:s1"), r(vocab::TYPE), r(vocab::SYSTEM)))
            .unwrap();
        for w in weaknesses {
            kb.assert_triple(Triple::resources(r("node:s1"), r(vocab::HAS_WEAKNESS), r(w)))
                .unwrap();
        }
        kb
    }

    const DETECT: &str = "rule \"detect\": System(?s) AND hasWeakness(?s, cwe:CWE-345) AND \
                          hasWeakness(?s, cwe:CWE-346) AND hasWeakness(?s, cwe:CWE-352) => \
                          Vulnerable(?s)";
    const PREDICT: &str = "rule \"predict\": System(?s) AND ANY { \
                           hasWeakness(?s, cwe:CWE-345), hasWeakness(?s, cwe:CWE-346), \
                           hasWeakness(?s, cwe:CWE-352) } => UnderPotentialAttackSystem(?s)";

    #[test]
    fn axioms_alone_derive_nothing_from_schema() {
        let mut kb = seeded();
        let report =
            forward_chain(&mut kb, &parse_rules("").unwrap(), ChainLimits::default()).unwrap();
        assert_eq!(report.new_triples, 0);
        let mut empty = KnowledgeBase::new();
        let report =
            forward_chain(&mut empty, &parse_rules("").unwrap(), ChainLimits::default()).unwrap();
        assert_eq!((report.new_triples, report.iterations), (0, 0));
    }

    #[test]
    fn full_weakness_set_marks_the_node_vulnerable() {
        let mut kb = observed_kb(&["cwe:CWE-345", "cwe:CWE-346", "cwe:CWE-352"]);
        let rs = parse_rules(DETECT).unwrap();
        let report = forward_chain(&mut kb, &rs, ChainLimits::default()).unwrap();
        let vulnerable = Triple::resources(r("node:s1"), r(vocab::TYPE), r(vocab::VULNERABLE));
        assert!(kb.contains(&vulnerable));
        assert_eq!(report.fired.get("detect"), Some(&1));
        assert_eq!(
            report.derived_by(&vulnerable),
            Some(&BTreeSet::from(["detect".to_string()]))
        );
    }

    #[test]
    fn partial_weakness_set_only_triggers_the_prediction_rule() {
        let mut kb = observed_kb(&["cwe:CWE-345", "cwe:CWE-346"]);
        let rs = parse_rules(&format!("{DETECT}\n\n{PREDICT}")).unwrap();
        let report = forward_chain(&mut kb, &rs, ChainLimits::default()).unwrap();
        assert_eq!(report.fired.get("detect"), None);
        let upas =
            Triple::resources(r("node:s1"), r(vocab::TYPE), r(vocab::UNDER_POTENTIAL_ATTACK));
        assert!(kb.contains(&upas));
        let deriving = report.derived_by(&upas).unwrap();
        assert!(deriving.iter().all(|n| super::super::base_rule_name(n) == "predict"));
        // The class hierarchy then propagates the prediction mark upward.
        assert!(kb.contains(&Triple::resources(r("node:s1"), r(vocab::TYPE), r(vocab::VULNERABLE))));
    }

    #[test]
    fn fixpoint_is_idempotent() {
        let mut kb = observed_kb(&["cwe:CWE-345", "cwe:CWE-346", "cwe:CWE-352"]);
        let rs = parse_rules(&format!("{DETECT}\n\n{PREDICT}")).unwrap();
        let first = forward_chain(&mut kb, &rs, ChainLimits::default()).unwrap();
        assert!(first.new_triples > 0);
        let before = kb.export_text();
        let second = forward_chain(&mut kb, &rs, ChainLimits::default()).unwrap();
        assert_eq!(second.new_triples, 0);
        assert_eq!(kb.export_text(), before);
    }

    #[test]
    fn rule_order_does_not_change_the_fixpoint() {
        let build = |swap: bool| {
            let mut kb = observed_kb(&["cwe:CWE-345", "cwe:CWE-346", "cwe:CWE-352"]);
            let mut rs = parse_rules(&format!("{DETECT}\n\n{PREDICT}")).unwrap();
            if swap {
                rs.rules.reverse();
            }
            forward_chain(&mut kb, &rs, ChainLimits::default()).unwrap();
            kb.export_text()
        };
        assert_eq!(build(false), build(true));
    }

    #[test]
    fn derived_limit_keeps_the_last_consistent_state() {
        let mut kb = observed_kb(&["cwe:CWE-345", "cwe:CWE-346", "cwe:CWE-352"]);
        let before = kb.export_text();
        let rs = parse_rules(DETECT).unwrap();
        let err = forward_chain(
            &mut kb,
            &rs,
            ChainLimits { max_iterations: 10, max_derived: 0 },
        );
        assert_eq!(err, Err(Error::LimitExceeded { limit: "max_derived", value: 0 }));
        assert_eq!(kb.export_text(), before);
    }

    #[test]
    fn iteration_limit_names_the_limit() {
        let mut kb = seeded();
        for (a, b) in [("ev:a", "ev:b"), ("ev:b", "ev:c"), ("ev:c", "ev:d")] {
            kb.assert_triple(Triple::resources(r(a), r(vocab::PART_OF), r(b))).unwrap();
        }
        let err = forward_chain(
            &mut kb,
            &parse_rules("").unwrap(),
            ChainLimits { max_iterations: 1, max_derived: 1_000 },
        );
        assert_eq!(err, Err(Error::LimitExceeded { limit: "max_iterations", value: 1 }));
        // Iteration 1 completed, so its transitive hop must be present.
        assert!(kb.contains(&Triple::resources(r("ev:a"), r(vocab::PART_OF), r("ev:c"))));

        let mut fresh = seeded();
        for (a, b) in [("ev:a", "ev:b"), ("ev:b", "ev:c"), ("ev:c", "ev:d")] {
            fresh.assert_triple(Triple::resources(r(a), r(vocab::PART_OF), r(b))).unwrap();
        }
        let report =
            forward_chain(&mut fresh, &parse_rules("").unwrap(), ChainLimits::default()).unwrap();
        assert_eq!(report.new_triples, 3);
        assert!(fresh.contains(&Triple::resources(r("ev:a"), r(vocab::PART_OF), r("ev:d"))));
    }

    #[test]
    fn schema_axioms_cover_inverse_subproperty_and_equivalence() {
        let mut kb = seeded();
        kb.assert_triple(Triple::resources(r("capec:A"), r(vocab::RELATED_TO), r("cwe:W")))
            .unwrap();
        kb.assert_triple(Triple::resources(r("node:s1"), r(vocab::HAS_WEAKNESS), r("cwe:W")))
            .unwrap();
        kb.assert_triple(Triple::resources(r("cwe:W"), r(vocab::EQUIVALENT_TO), r("cwe:W2")))
            .unwrap();
        forward_chain(&mut kb, &parse_rules("").unwrap(), ChainLimits::default()).unwrap();

        // relatedTo has a declared inverse.
        assert!(kb.contains(&Triple::resources(r("cwe:W"), r(vocab::RELATED_BY), r("capec:A"))));
        // hasWeakness is a subproperty of hasSecurityIssue.
        assert!(kb.contains(&Triple::resources(
            r("node:s1"),
            r(vocab::HAS_SECURITY_ISSUE),
            r("cwe:W")
        )));
        // equivalentTo is symmetric and substitutes into links.
        assert!(kb.contains(&Triple::resources(r("cwe:W2"), r(vocab::EQUIVALENT_TO), r("cwe:W"))));
        assert!(kb.contains(&Triple::resources(r("node:s1"), r(vocab::HAS_WEAKNESS), r("cwe:W2"))));
        assert!(kb.contains(&Triple::resources(r("capec:A"), r(vocab::RELATED_TO), r("cwe:W2"))));
    }

    #[test]
    fn symmetric_property_flag_mirrors_links() {
        let mut kb = seeded();
        kb.assert_triple(Triple::resources(
            r("core:peersWith"),
            r(vocab::TYPE),
            r(vocab::SYMMETRIC_PROPERTY),
        ))
        .unwrap();
        kb.assert_triple(Triple::resources(r("node:a"), r("core:peersWith"), r("node:b")))
            .unwrap();
        forward_chain(&mut kb, &parse_rules("").unwrap(), ChainLimits::default()).unwrap();
        assert!(kb.contains(&Triple::resources(r("node:b"), r("core:peersWith"), r("node:a"))));
    }

    #[test]
    fn evaluate_body_reduces_to_match_for_one_atom() {
        let kb = observed_kb(&["cwe:CWE-345", "cwe:CWE-346"]);
        let rs = parse_rules(
            "rule \"x\": hasWeakness(?s, ?w) => relatedTo(?s, ?w)",
        )
        .unwrap();
        let atom = &rs.rules[0].body_and[0];
        let via_body = evaluate_body(&kb, std::slice::from_ref(atom), &Bindings::new()).unwrap();
        let via_match = kb
            .match_pattern(&atom.to_pattern(&Bindings::new()).unwrap())
            .unwrap();
        assert_eq!(via_body, via_match);
        assert_eq!(via_body.len(), 2);

        // The empty conjunction returns the seed itself.
        let seed: Bindings =
            [(Variable::new("?s").unwrap(), Term::Resource(r("node:s1")))].into();
        assert_eq!(evaluate_body(&kb, &[], &seed).unwrap(), vec![seed]);
    }

    #[test]
    fn unbound_builtin_arguments_are_an_error() {
        let mut kb = seeded();
        kb.assert_triple(Triple::resources(r("ev:e1"), r(vocab::TYPE), r(vocab::EVENT)))
            .unwrap();
        let rs = parse_rules(
            "rule \"x\": Event(?a) AND before(?a, ?b) AND Event(?b) => relatedTo(?a, ?b)",
        )
        .unwrap();
        // ?b is bound by a later relational atom, so deferral saves this rule.
        assert!(forward_chain(&mut kb, &rs, ChainLimits::default()).is_ok());

        let atoms = &parse_rules("rule \"y\": Event(?a) AND before(?a, ?b) => Event(?a)")
            .unwrap()
            .rules[0]
            .body_and
            .clone();
        let err = evaluate_body(&kb, atoms, &Bindings::new());
        assert_eq!(err, Err(Error::UnboundBuiltinArgument("?b".into())));
    }

    #[test]
    fn before_builtin_filters_by_strict_timestamp_order() {
        let mut kb = seeded();
        for (e, ts) in [("ev:e1", 100), ("ev:e2", 200), ("ev:e3", 200)] {
            kb.assert_triple(Triple::resources(r(e), r(vocab::TYPE), r(vocab::EVENT))).unwrap();
            kb.assert_triple(Triple::literal(
                r(e),
                r(vocab::OCCURRED_AT),
                crate::term::Literal::timestamp(ts),
            ))
            .unwrap();
        }
        let rs = parse_rules(
            "rule \"order\": Event(?a) AND Event(?b) AND before(?a, ?b) => relatedTo(?a, ?b)",
        )
        .unwrap();
        forward_chain(&mut kb, &rs, ChainLimits::default()).unwrap();
        assert!(kb.contains(&Triple::resources(r("ev:e1"), r(vocab::RELATED_TO), r("ev:e2"))));
        assert!(kb.contains(&Triple::resources(r("ev:e1"), r(vocab::RELATED_TO), r("ev:e3"))));
        // Equal timestamps do not satisfy strict order.
        assert!(!kb.contains(&Triple::resources(r("ev:e2"), r(vocab::RELATED_TO), r("ev:e3"))));
        assert!(!kb.contains(&Triple::resources(r("ev:e2"), r(vocab::RELATED_TO), r("ev:e1"))));
    }
}
