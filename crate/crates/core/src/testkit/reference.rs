//! Naive re-implementations of the three production evaluators.
//!
//! `naive_fixpoint` re-runs every rule against the full fact set until
//! nothing changes. `nested_loop_query` joins patterns by scanning all
//! facts per partial row. `brute_force_metrics` rebuilds every
//! registry-derived notion (classes, individuals, property declarations)
//! from the raw triples before recounting each metric. Property kinds are
//! recovered from declaration triples, so a property declared with
//! conflicting kinds diverges from the store's first-declaration-wins rule;
//! the generators never produce one.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::metrics::{KbMetrics, MetricsReport, OntologyMetrics, Rational};
use crate::query::Query;
use crate::rules::{Atom, AxiomKind, Rule, RuleSet};
use crate::term::{Pattern, Resource, Term, Triple, Variable};
use crate::vocab;

type Row = BTreeMap<Variable, Term>;
type Facts = BTreeSet<Triple>;

/// Runs the rule set plus its axiom families to fixpoint by full
/// re-evaluation and returns the final triple set. Axiom instances that
/// depend on declarations (subproperty, inverse, symmetric, transitive)
/// are read from the starting store, the same contract the production
/// engine applies.
pub fn naive_fixpoint(kb: &KnowledgeBase, rs: &RuleSet) -> Result<Facts> {
    let mut facts: Facts = kb.triples().cloned().collect();
    let axioms = AxiomTables::scan(&facts, &rs.axioms);
    loop {
        let mut fresh = Facts::new();
        for rule in &rs.rules {
            derive_rule(&facts, rule, &mut fresh)?;
        }
        axioms.derive(&facts, &mut fresh)?;
        fresh.retain(|t| !facts.contains(t));
        if fresh.is_empty() {
            return Ok(facts);
        }
        facts.extend(fresh);
    }
}

/// Derives every head instance of one rule. A disjunction group is handled
/// as one conjunctive body per disjunct, mirroring rule expansion without
/// reusing it.
fn derive_rule(facts: &Facts, rule: &Rule, out: &mut Facts) -> Result<()> {
    let bodies: Vec<Vec<Atom>> = match &rule.body_or {
        None => vec![rule.body_and.clone()],
        Some(group) => group
            .iter()
            .map(|disjunct| {
                let mut body = rule.body_and.clone();
                body.push(disjunct.clone());
                body
            })
            .collect(),
    };
    for body in &bodies {
        for row in join_atoms(facts, body)? {
            for atom in &rule.head {
                out.insert(atom.instantiate(&row)?);
            }
        }
    }
    Ok(())
}

/// Joins a conjunction left to right by scanning every fact per partial
/// row. Builtins run last, once the relational atoms have bound their
/// arguments.
fn join_atoms(facts: &Facts, atoms: &[Atom]) -> Result<Vec<Row>> {
    let mut rows = vec![Row::new()];
    let mut builtins = Vec::new();
    for atom in atoms {
        if atom.is_builtin() {
            builtins.push(atom);
            continue;
        }
        let mut next = Vec::new();
        for row in &rows {
            for fact in facts {
                if let Some(merged) = match_atom(atom, fact, row) {
                    next.push(merged);
                }
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
            if before_holds(facts, args, &row)? {
                kept.push(row);
            }
        }
        rows = kept;
    }
    Ok(rows)
}

/// Extends `row` so the atom matches the fact, or fails.
fn match_atom(atom: &Atom, fact: &Triple, row: &Row) -> Option<Row> {
    let (subject, predicate, object) = match atom {
        Atom::Class { class, term } => (
            term.clone(),
            Term::Resource(vocab::res(vocab::TYPE)),
            Term::Resource(class.clone()),
        ),
        Atom::Property { property, subject, object } => {
            (subject.clone(), Term::Resource(property.clone()), object.clone())
        }
        Atom::Builtin { .. } => return None,
    };
    let mut merged = row.clone();
    bind(&mut merged, &subject, &Term::Resource(fact.subject.clone()))?;
    bind(&mut merged, &predicate, &Term::Resource(fact.predicate.clone()))?;
    bind(&mut merged, &object, &fact.object)?;
    Some(merged)
}

fn bind(row: &mut Row, slot: &Term, value: &Term) -> Option<()> {
    match slot {
        Term::Variable(v) => match row.get(v) {
            Some(bound) if bound == value => Some(()),
            Some(_) => None,
            None => {
                row.insert(v.clone(), value.clone());
                Some(())
            }
        },
        ground => (ground == value).then_some(()),
    }
}

/// `before(a, b)`: both arguments resolve to timestamps and the first is
/// strictly smaller. Resources resolve through their smallest `occurredAt`
/// value; unbound variables are an error.
fn before_holds(facts: &Facts, args: &[Term; 2], row: &Row) -> Result<bool> {
    let mut stamps = [None, None];
    for (slot, arg) in stamps.iter_mut().zip(args) {
        let value = match arg {
            Term::Variable(v) => row
                .get(v)
                .cloned()
                .ok_or_else(|| Error::UnboundBuiltinArgument(v.as_str().to_string()))?,
            ground => ground.clone(),
        };
        *slot = match value {
            Term::Variable(v) => {
                return Err(Error::UnboundBuiltinArgument(v.as_str().to_string()))
            }
            Term::Resource(r) => timestamp(facts, &r),
            Term::Literal(l) => l.as_i64(),
        };
    }
    Ok(matches!(stamps, [Some(a), Some(b)] if a < b))
}

fn timestamp(facts: &Facts, event: &Resource) -> Option<i64> {
    facts
        .iter()
        .filter(|t| t.subject == *event && t.predicate.as_str() == vocab::OCCURRED_AT)
        .filter_map(|t| match &t.object {
            Term::Literal(l) => l.as_i64(),
            _ => None,
        })
        .min()
}

/// The axiom families as literal loops. Declaration-dependent instances are
/// scanned once from the starting facts; the generic families (subclass
/// typing, equivalence substitution) join the current facts every pass.
struct AxiomTables {
    subclass_typing: bool,
    equivalence: bool,
    subproperty: Vec<(Resource, Resource)>,
    inverse: Vec<(Resource, Resource)>,
    symmetric: Vec<Resource>,
    transitive: Vec<Resource>,
}

impl AxiomTables {
    fn scan(facts: &Facts, kinds: &[AxiomKind]) -> AxiomTables {
        let mut tables = AxiomTables {
            subclass_typing: false,
            equivalence: false,
            subproperty: Vec::new(),
            inverse: Vec::new(),
            symmetric: Vec::new(),
            transitive: Vec::new(),
        };
        for kind in kinds {
            match kind {
                AxiomKind::SubclassTyping => tables.subclass_typing = true,
                AxiomKind::EquivalentSubstitution => tables.equivalence = true,
                AxiomKind::SubPropertyOf => {
                    for fact in facts {
                        if fact.predicate.as_str() != vocab::SUB_PROPERTY_OF {
                            continue;
                        }
                        if let Term::Resource(parent) = &fact.object {
                            tables.subproperty.push((fact.subject.clone(), parent.clone()));
                        }
                    }
                }
                AxiomKind::InverseSymmetry => {
                    for fact in facts {
                        if fact.predicate.as_str() == vocab::INVERSE_OF {
                            if let Term::Resource(other) = &fact.object {
                                tables.inverse.push((fact.subject.clone(), other.clone()));
                                tables.inverse.push((other.clone(), fact.subject.clone()));
                            }
                        }
                        if fact.predicate.as_str() == vocab::TYPE
                            && fact.object == Term::Resource(vocab::res(vocab::SYMMETRIC_PROPERTY))
                        {
                            tables.symmetric.push(fact.subject.clone());
                        }
                    }
                }
                AxiomKind::TransitiveClosure => {
                    for fact in facts {
                        if fact.predicate.as_str() == vocab::TYPE
                            && fact.object == Term::Resource(vocab::res(vocab::TRANSITIVE_PROPERTY))
                        {
                            tables.transitive.push(fact.subject.clone());
                        }
                    }
                }
            }
        }
        tables
    }

    fn derive(&self, facts: &Facts, out: &mut Facts) -> Result<()> {
        let type_pred = vocab::res(vocab::TYPE);
        if self.subclass_typing {
            let mut parents: BTreeMap<&Resource, Vec<&Resource>> = BTreeMap::new();
            for fact in facts {
                if fact.predicate.as_str() == vocab::SUB_CLASS_OF {
                    if let Term::Resource(parent) = &fact.object {
                        parents.entry(&fact.subject).or_default().push(parent);
                    }
                }
            }
            for fact in facts {
                if fact.predicate != type_pred {
                    continue;
                }
                let Term::Resource(class) = &fact.object else { continue };
                for parent in parents.get(class).into_iter().flatten() {
                    out.insert(Triple::new(
                        fact.subject.clone(),
                        type_pred.clone(),
                        Term::Resource((*parent).clone()),
                    )?);
                }
            }
        }
        for (child, parent) in &self.subproperty {
            for fact in facts {
                if fact.predicate == *child {
                    out.insert(Triple::new(
                        fact.subject.clone(),
                        parent.clone(),
                        fact.object.clone(),
                    )?);
                }
            }
        }
        for (from, to) in &self.inverse {
            for fact in facts {
                if fact.predicate != *from {
                    continue;
                }
                if let Term::Resource(object) = &fact.object {
                    out.insert(Triple::new(
                        object.clone(),
                        to.clone(),
                        Term::Resource(fact.subject.clone()),
                    )?);
                }
            }
        }
        for property in &self.symmetric {
            for fact in facts {
                if fact.predicate != *property {
                    continue;
                }
                if let Term::Resource(object) = &fact.object {
                    out.insert(Triple::new(
                        object.clone(),
                        property.clone(),
                        Term::Resource(fact.subject.clone()),
                    )?);
                }
            }
        }
        for property in &self.transitive {
            let hops: Vec<(&Resource, &Resource)> = facts
                .iter()
                .filter(|t| t.predicate == *property)
                .filter_map(|t| match &t.object {
                    Term::Resource(o) => Some((&t.subject, o)),
                    _ => None,
                })
                .collect();
            for (x, y) in &hops {
                for (y2, z) in &hops {
                    if y == y2 {
                        out.insert(Triple::new(
                            (*x).clone(),
                            property.clone(),
                            Term::Resource((*z).clone()),
                        )?);
                    }
                }
            }
        }
        if self.equivalence {
            let eq = vocab::res(vocab::EQUIVALENT_TO);
            let pairs: Vec<(&Resource, &Resource)> = facts
                .iter()
                .filter(|t| t.predicate == eq)
                .filter_map(|t| match &t.object {
                    Term::Resource(o) => Some((&t.subject, o)),
                    _ => None,
                })
                .collect();
            for (x, y) in &pairs {
                out.insert(Triple::new(
                    (*y).clone(),
                    eq.clone(),
                    Term::Resource((*x).clone()),
                )?);
                for fact in facts {
                    if fact.subject == **x && fact.predicate == type_pred {
                        out.insert(Triple::new(
                            (*y).clone(),
                            type_pred.clone(),
                            fact.object.clone(),
                        )?);
                    }
                }
                for p in [vocab::HAS_WEAKNESS, vocab::HAS_VULNERABILITY, vocab::RELATED_TO] {
                    let p = vocab::res(p);
                    for fact in facts {
                        if fact.predicate != p {
                            continue;
                        }
                        if fact.subject == **x {
                            out.insert(Triple::new(
                                (*y).clone(),
                                p.clone(),
                                fact.object.clone(),
                            )?);
                        }
                        if fact.object == Term::Resource((*x).clone()) {
                            out.insert(Triple::new(
                                fact.subject.clone(),
                                p.clone(),
                                Term::Resource((*y).clone()),
                            )?);
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Evaluates a query by scanning every triple per pattern per partial row,
/// then projecting the selected variables into a sorted, deduplicated set.
pub fn nested_loop_query(kb: &KnowledgeBase, query: &Query) -> BTreeSet<Vec<Term>> {
    let facts: Vec<&Triple> = kb.triples().collect();
    let mut rows = vec![Row::new()];
    for pattern in &query.patterns {
        let mut next = Vec::new();
        for row in &rows {
            for fact in &facts {
                if let Some(merged) = match_pattern_row(pattern, fact, row) {
                    next.push(merged);
                }
            }
        }
        rows = next;
        if rows.is_empty() {
            break;
        }
    }
    rows.into_iter()
        .map(|row| {
            query
                .select
                .iter()
                .map(|v| row.get(v).cloned().expect("selected variable is bound"))
                .collect()
        })
        .collect()
}

fn match_pattern_row(pattern: &Pattern, fact: &Triple, row: &Row) -> Option<Row> {
    let mut merged = row.clone();
    bind(&mut merged, &pattern.subject, &Term::Resource(fact.subject.clone()))?;
    bind(&mut merged, &pattern.predicate, &Term::Resource(fact.predicate.clone()))?;
    bind(&mut merged, &pattern.object, &fact.object)?;
    Some(merged)
}

/// Recomputes both metric families from a raw scan of the triples,
/// rebuilding classes, individuals, memberships, and property declarations
/// without the store registries.
pub fn brute_force_metrics(kb: &KnowledgeBase) -> Result<MetricsReport> {
    let facts: Vec<&Triple> = kb.triples().collect();

    let mut classes: BTreeSet<Resource> = BTreeSet::new();
    let mut individuals: BTreeSet<Resource> = BTreeSet::new();
    let mut members: BTreeMap<Resource, BTreeSet<Resource>> = BTreeMap::new();
    let mut object_props: BTreeSet<Resource> = BTreeSet::new();
    let mut data_props: BTreeSet<Resource> = BTreeSet::new();
    let mut functional: BTreeSet<Resource> = BTreeSet::new();
    let mut subclass: BTreeSet<(Resource, Resource)> = BTreeSet::new();

    for fact in &facts {
        match fact.predicate.as_str() {
            vocab::TYPE => {
                let Term::Resource(object) = &fact.object else { continue };
                match object.as_str() {
                    vocab::CLASS => {
                        classes.insert(fact.subject.clone());
                    }
                    vocab::OBJECT_PROPERTY
                    | vocab::TRANSITIVE_PROPERTY
                    | vocab::SYMMETRIC_PROPERTY => {
                        object_props.insert(fact.subject.clone());
                    }
                    vocab::FUNCTIONAL_PROPERTY => {
                        object_props.insert(fact.subject.clone());
                        functional.insert(fact.subject.clone());
                    }
                    vocab::DATA_PROPERTY => {
                        data_props.insert(fact.subject.clone());
                    }
                    _ => {
                        classes.insert(object.clone());
                        individuals.insert(fact.subject.clone());
                        members.entry(object.clone()).or_default().insert(fact.subject.clone());
                    }
                }
            }
            vocab::SUB_CLASS_OF => {
                if let Term::Resource(parent) = &fact.object {
                    classes.insert(fact.subject.clone());
                    classes.insert(parent.clone());
                    subclass.insert((fact.subject.clone(), parent.clone()));
                }
            }
            vocab::SUB_PROPERTY_OF | vocab::INVERSE_OF => {
                if let Term::Resource(other) = &fact.object {
                    object_props.insert(fact.subject.clone());
                    object_props.insert(other.clone());
                }
            }
            _ => {}
        }
    }
    data_props.retain(|p| !object_props.contains(p));

    if classes.is_empty() {
        return Err(Error::EmptyOntology);
    }
    let c = classes.len() as i64;
    let p = (object_props.len() + data_props.len()) as i64;
    let h = subclass.len() as i64;

    let mut parents: BTreeMap<&Resource, BTreeSet<&Resource>> = BTreeMap::new();
    let mut children: BTreeMap<&Resource, BTreeSet<&Resource>> = BTreeMap::new();
    for (child, parent) in &subclass {
        parents.entry(child).or_default().insert(parent);
        children.entry(parent).or_default().insert(child);
    }

    fn up_depth<'a>(
        class: &'a Resource,
        parents: &BTreeMap<&'a Resource, BTreeSet<&'a Resource>>,
        memo: &mut BTreeMap<&'a Resource, usize>,
    ) -> usize {
        if let Some(&d) = memo.get(class) {
            return d;
        }
        let d = parents
            .get(class)
            .into_iter()
            .flatten()
            .map(|p| 1 + up_depth(p, parents, memo))
            .max()
            .unwrap_or(0);
        memo.insert(class, d);
        d
    }
    let mut memo = BTreeMap::new();
    let isa_depth =
        classes.iter().map(|c| up_depth(c, &parents, &mut memo)).max().unwrap_or(0);

    let isa_counts: BTreeMap<Resource, usize> = classes
        .iter()
        .map(|class| (class.clone(), children.get(class).map_or(0, BTreeSet::len)))
        .collect();
    let mut partof_counts: BTreeMap<Resource, usize> = BTreeMap::new();
    for fact in &facts {
        if fact.predicate.as_str() != vocab::PART_OF {
            continue;
        }
        if let Term::Resource(object) = &fact.object {
            if classes.contains(object) {
                *partof_counts.entry(object.clone()).or_default() += 1;
            }
        }
    }

    let ontology = OntologyMetrics {
        object_properties_richness: Rational::new(p, p + h),
        inheritance_richness: Rational::new(h, c),
        data_properties_richness: Rational::new(
            (functional.len() + data_props.len()) as i64,
            c,
        ),
        class_count: classes.len(),
        medium_po: Rational::new(p, c),
        isa_depth,
        isa_fanout_rank: rank(isa_counts),
        partof_fanout_rank: rank(partof_counts),
    };

    let empty = BTreeSet::new();
    let direct = |class: &Resource| members.get(class).unwrap_or(&empty);

    let nonempty = classes.iter().filter(|class| !direct(class).is_empty()).count() as i64;
    let class_richness = Rational::new(nonempty, c);

    let links: Vec<(&Resource, &Resource)> = facts
        .iter()
        .filter_map(|fact| {
            if vocab::STRUCTURAL_PREDICATES.contains(&fact.predicate.as_str()) {
                return None;
            }
            if !object_props.contains(&fact.predicate) {
                return None;
            }
            let Term::Resource(object) = &fact.object else { return None };
            (individuals.contains(&fact.subject) && individuals.contains(object))
                .then_some((&fact.subject, object))
        })
        .collect();

    let mut class_connectivity: BTreeMap<String, usize> = BTreeMap::new();
    for (subject, object) in &links {
        for class in &classes {
            let members = direct(class);
            if members.contains(subject) != members.contains(object) {
                *class_connectivity.entry(class.as_str().to_string()).or_default() += 1;
            }
        }
    }

    let total_individuals = individuals.len() as i64;
    let mut class_importance: BTreeMap<String, Rational> = BTreeMap::new();
    for class in &classes {
        let mut closure: BTreeSet<&Resource> = BTreeSet::new();
        let mut stack = vec![class];
        while let Some(current) = stack.pop() {
            if !closure.insert(current) {
                continue;
            }
            stack.extend(children.get(current).into_iter().flatten());
        }
        let subtree: BTreeSet<&Resource> =
            closure.iter().flat_map(|c| direct(c).iter()).collect();
        if !subtree.is_empty() {
            class_importance.insert(
                class.as_str().to_string(),
                Rational::new(subtree.len() as i64, total_individuals),
            );
        }
    }

    let individual_graph_components = bfs_components(&individuals, &links);

    let mut used: BTreeMap<&Resource, BTreeSet<&Resource>> = BTreeMap::new();
    for fact in &facts {
        if vocab::STRUCTURAL_PREDICATES.contains(&fact.predicate.as_str()) {
            continue;
        }
        if object_props.contains(&fact.predicate) && individuals.contains(&fact.subject) {
            used.entry(&fact.subject).or_default().insert(&fact.predicate);
        }
    }
    let mut kb_object_properties_richness: BTreeMap<String, Rational> = BTreeMap::new();
    for class in &classes {
        let members = direct(class);
        if members.is_empty() {
            continue;
        }
        let used_total: i64 =
            members.iter().map(|i| used.get(i).map_or(0, |props| props.len() as i64)).sum();
        kb_object_properties_richness.insert(
            class.as_str().to_string(),
            Rational::new(used_total, members.len() as i64 * object_props.len() as i64),
        );
    }

    Ok(MetricsReport {
        ontology,
        kb: KbMetrics {
            class_richness,
            class_connectivity,
            class_importance,
            individual_graph_components,
            kb_object_properties_richness,
        },
    })
}

fn rank(counts: BTreeMap<Resource, usize>) -> Vec<(String, usize)> {
    let mut out: Vec<(String, usize)> = counts
        .into_iter()
        .filter(|(_, count)| *count > 0)
        .map(|(class, count)| (class.as_str().to_string(), count))
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

fn bfs_components(individuals: &BTreeSet<Resource>, links: &[(&Resource, &Resource)]) -> usize {
    let mut adjacency: BTreeMap<&Resource, Vec<&Resource>> = BTreeMap::new();
    for (a, b) in links {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }
    let mut visited: BTreeSet<&Resource> = BTreeSet::new();
    let mut components = 0;
    for start in individuals {
        if visited.contains(start) {
            continue;
        }
        components += 1;
        let mut queue = vec![start];
        while let Some(current) = queue.pop() {
            if !visited.insert(current) {
                continue;
            }
            queue.extend(adjacency.get(current).into_iter().flatten());
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::compute_metrics;
    use crate::query::parse_query;
    use crate::rules::{forward_chain, parse_rules, ChainLimits};

    fn seeded(lines: &[&str]) -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        kb.load_core_ontology().unwrap();
        for line in lines {
            let triple = Triple::parse_line(line).unwrap();
            kb.assert_triple(triple).unwrap();
        }
        kb
    }

    #[test]
    fn naive_fixpoint_matches_a_hand_derivation() {
        let kb = seeded(&[
            "node:s1 core:type core:System .",
            "node:s1 core:hasWeakness cwe:CWE-345 .",
        ]);
        let rs = parse_rules(
            "rule \"mark\": System(?s) AND hasWeakness(?s, cwe:CWE-345) => Vulnerable(?s)",
        )
        .unwrap();
        let facts = naive_fixpoint(&kb, &rs).unwrap();
        let direct = Triple::parse_line("node:s1 core:type core:Vulnerable .").unwrap();
        let inherited = Triple::parse_line("node:s1 core:type core:NetworkNode .").unwrap();
        let security = Triple::parse_line("node:s1 core:hasSecurityIssue cwe:CWE-345 .").unwrap();
        assert!(facts.contains(&direct));
        assert!(facts.contains(&inherited));
        assert!(facts.contains(&security));
    }

    #[test]
    fn naive_fixpoint_agrees_with_the_engine_on_a_fixture() {
        let kb = seeded(&[
            "node:s1 core:type core:System .",
            "node:s2 core:type core:System .",
            "node:s1 core:hasWeakness cwe:CWE-345 .",
            "node:s2 core:hasWeakness cwe:CWE-346 .",
            "cwe:CWE-346 core:subClassOf cwe:CWE-345 .",
            "node:s1 core:relatedTo node:s2 .",
        ]);
        let rs = parse_rules(
            "rule \"spot\": System(?s) AND ANY { hasWeakness(?s, cwe:CWE-345), \
             hasWeakness(?s, cwe:CWE-346) } => UnderPotentialAttackSystem(?s)",
        )
        .unwrap();
        let expected = naive_fixpoint(&kb, &rs).unwrap();
        let mut chained = kb.clone();
        forward_chain(&mut chained, &rs, ChainLimits::default()).unwrap();
        let actual: Facts = chained.triples().cloned().collect();
        assert_eq!(expected, actual);
    }

    #[test]
    fn nested_loop_query_matches_a_hand_count() {
        let kb = seeded(&[
            "node:s1 core:type core:System .",
            "node:s1 core:hasWeakness cwe:CWE-345 .",
            "node:s1 core:hasWeakness cwe:CWE-346 .",
        ]);
        let query = parse_query("SELECT ?w WHERE { node:s1 hasWeakness ?w }").unwrap();
        let rows = nested_loop_query(&kb, &query);
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn brute_force_metrics_match_the_production_path() {
        let kb = seeded(&[
            "x:A core:type core:Class .",
            "x:B core:subClassOf x:A .",
            "x:link core:type core:ObjectProperty .",
            "x:i1 core:type x:A .",
            "x:i2 core:type x:B .",
            "x:i1 x:link x:i2 .",
        ]);
        let expected = compute_metrics(&kb).unwrap();
        let actual = brute_force_metrics(&kb).unwrap();
        assert_eq!(expected, actual);
    }
}
