//! The triple store and its schema bookkeeping.
//!
//! A [`KnowledgeBase`] is a set of ground triples plus derived registries for
//! classes, the subclass hierarchy, property declarations, and individuals.
//! All state is carried by triples: asserting a declaration triple updates
//! the registries, and re-importing an export reproduces the full state.
//!
//! Three full indexes (subject, predicate, object) back pattern matching.
//! Collections are ordered, so iteration, matching, and the text export are
//! deterministic for equal content.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::term::{Pattern, Resource, Term, Triple};
use crate::vocab;

/// Variable assignments produced by matching a pattern or rule body.
pub type Bindings = BTreeMap<crate::term::Variable, Term>;

/// Whether a property links resources or carries literal values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyKind {
    Object,
    Data,
}

/// Declaration record for one property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDecl {
    pub kind: PropertyKind,
    pub transitive: bool,
    pub symmetric: bool,
    pub functional: bool,
    pub inverse: Option<Resource>,
}

impl PropertyDecl {
    fn new(kind: PropertyKind) -> Self {
        PropertyDecl { kind, transitive: false, symmetric: false, functional: false, inverse: None }
    }
}

/// Seed triples embedded at compile time; see `data/core_ontology.triples`.
pub const CORE_ONTOLOGY_TEXT: &str = include_str!("data/core_ontology.triples");

#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    triples: BTreeSet<Triple>,
    by_subject: BTreeMap<Resource, BTreeSet<Triple>>,
    by_predicate: BTreeMap<Resource, BTreeSet<Triple>>,
    by_object: BTreeMap<Term, BTreeSet<Triple>>,
    classes: BTreeSet<Resource>,
    class_parents: BTreeMap<Resource, BTreeSet<Resource>>,
    class_children: BTreeMap<Resource, BTreeSet<Resource>>,
    properties: BTreeMap<Resource, PropertyDecl>,
    property_parents: BTreeMap<Resource, BTreeSet<Resource>>,
    individuals: BTreeSet<Resource>,
    retractable: BTreeSet<Triple>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        KnowledgeBase::default()
    }

    /// Loads the embedded core ontology. Returns the number of triples that
    /// were new to this knowledge base.
    pub fn load_core_ontology(&mut self) -> Result<usize> {
        self.import_text(CORE_ONTOLOGY_TEXT)
    }

    // ===== assertion and retraction =====

    /// Adds a ground triple. Returns true when the triple was new. Predicates
    /// must be structural vocabulary or declared properties; declaration
    /// triples update the class and property registries as a side effect.
    pub fn assert_triple(&mut self, triple: Triple) -> Result<bool> {
        self.insert(triple, false)
    }

    /// Like [`assert_triple`](Self::assert_triple) but tags the triple as
    /// event-derived, which makes it retractable later.
    pub fn assert_retractable(&mut self, triple: Triple) -> Result<bool> {
        self.insert(triple, true)
    }

    fn insert(&mut self, triple: Triple, retractable: bool) -> Result<bool> {
        if self.triples.contains(&triple) {
            return Ok(false);
        }
        self.validate_and_register(&triple)?;
        self.by_subject.entry(triple.subject.clone()).or_default().insert(triple.clone());
        self.by_predicate.entry(triple.predicate.clone()).or_default().insert(triple.clone());
        self.by_object.entry(triple.object.clone()).or_default().insert(triple.clone());
        if retractable {
            self.retractable.insert(triple.clone());
        }
        self.triples.insert(triple);
        Ok(true)
    }

    /// Removes an event-derived triple. Ontology triples are permanent.
    pub fn retract(&mut self, triple: &Triple) -> Result<()> {
        if !self.retractable.contains(triple) {
            return Err(Error::NotRetractable(triple.to_line()));
        }
        self.retractable.remove(triple);
        self.triples.remove(triple);
        if let Some(set) = self.by_subject.get_mut(&triple.subject) {
            set.remove(triple);
        }
        if let Some(set) = self.by_predicate.get_mut(&triple.predicate) {
            set.remove(triple);
        }
        if let Some(set) = self.by_object.get_mut(&triple.object) {
            set.remove(triple);
        }
        Ok(())
    }

    fn validate_and_register(&mut self, triple: &Triple) -> Result<()> {
        let predicate = triple.predicate.as_str();
        match predicate {
            vocab::TYPE => self.register_type(triple),
            vocab::SUB_CLASS_OF => self.register_subclass(triple),
            vocab::SUB_PROPERTY_OF => self.register_subproperty(triple),
            vocab::EQUIVALENT_TO => {
                resource_object(triple)?;
                Ok(())
            }
            vocab::INVERSE_OF => self.register_inverse(triple),
            _ => self.check_declared(triple),
        }
    }

    fn register_type(&mut self, triple: &Triple) -> Result<()> {
        let object = resource_object(triple)?;
        match object.as_str() {
            vocab::CLASS => {
                self.classes.insert(triple.subject.clone());
            }
            vocab::OBJECT_PROPERTY => self.declare(&triple.subject, PropertyKind::Object, |_| {}),
            vocab::DATA_PROPERTY => self.declare(&triple.subject, PropertyKind::Data, |_| {}),
            vocab::TRANSITIVE_PROPERTY => {
                self.declare(&triple.subject, PropertyKind::Object, |d| d.transitive = true)
            }
            vocab::SYMMETRIC_PROPERTY => {
                self.declare(&triple.subject, PropertyKind::Object, |d| d.symmetric = true)
            }
            vocab::FUNCTIONAL_PROPERTY => {
                self.declare(&triple.subject, PropertyKind::Object, |d| d.functional = true)
            }
            _ => {
                // A plain typing statement: the object becomes a class and
                // the subject an individual of it.
                self.classes.insert(object.clone());
                self.individuals.insert(triple.subject.clone());
            }
        }
        Ok(())
    }

    fn register_subclass(&mut self, triple: &Triple) -> Result<()> {
        let parent = resource_object(triple)?;
        let child = &triple.subject;
        if let Some(mut path) = self.path_through_parents(&parent, child) {
            path.insert(0, child.as_str().to_string());
            path.push(parent.as_str().to_string());
            return Err(Error::CycleDetected { path });
        }
        self.classes.insert(child.clone());
        self.classes.insert(parent.clone());
        self.class_parents.entry(child.clone()).or_default().insert(parent.clone());
        self.class_children.entry(parent).or_default().insert(child.clone());
        Ok(())
    }

    /// Finds a parent-edge path from `from` up to `to`, as the list of nodes
    /// visited after `from`. Used for cycle reporting before inserting the
    /// edge `child -> from`.
    fn path_through_parents(&self, from: &Resource, to: &Resource) -> Option<Vec<String>> {
        if from == to {
            return Some(Vec::new());
        }
        let mut stack = vec![(from.clone(), Vec::new())];
        let mut seen = BTreeSet::new();
        while let Some((current, path)) = stack.pop() {
            if !seen.insert(current.clone()) {
                continue;
            }
            for parent in self.class_parents.get(&current).into_iter().flatten() {
                let mut next = path.clone();
                next.push(parent.as_str().to_string());
                if parent == to {
                    return Some(next);
                }
                stack.push((parent.clone(), next));
            }
        }
        None
    }

    fn register_subproperty(&mut self, triple: &Triple) -> Result<()> {
        let parent = resource_object(triple)?;
        self.declare(&triple.subject, PropertyKind::Object, |_| {});
        self.declare(&parent, PropertyKind::Object, |_| {});
        self.property_parents.entry(triple.subject.clone()).or_default().insert(parent);
        Ok(())
    }

    fn register_inverse(&mut self, triple: &Triple) -> Result<()> {
        let other = resource_object(triple)?;
        let subject = triple.subject.clone();
        self.declare(&subject, PropertyKind::Object, |d| d.inverse = Some(other.clone()));
        self.declare(&other, PropertyKind::Object, |d| d.inverse = Some(subject.clone()));
        Ok(())
    }

    /// Declares a property if missing and applies `adjust` to its record.
    /// Data-property declarations never downgrade an object property and
    /// vice versa; the first declared kind wins.
    fn declare<F: FnOnce(&mut PropertyDecl)>(
        &mut self,
        property: &Resource,
        kind: PropertyKind,
        adjust: F,
    ) {
        let decl =
            self.properties.entry(property.clone()).or_insert_with(|| PropertyDecl::new(kind));
        adjust(decl);
    }

    fn check_declared(&mut self, triple: &Triple) -> Result<()> {
        let decl = self
            .properties
            .get(&triple.predicate)
            .ok_or_else(|| Error::UndeclaredPredicate(triple.predicate.as_str().to_string()))?;
        match (decl.kind, &triple.object) {
            (PropertyKind::Object, Term::Resource(_)) | (PropertyKind::Data, Term::Literal(_)) => {
                Ok(())
            }
            (PropertyKind::Object, other) => Err(Error::MalformedTerm(format!(
                "object property {} needs a resource object, got {other}",
                triple.predicate
            ))),
            (PropertyKind::Data, other) => Err(Error::MalformedTerm(format!(
                "data property {} needs a literal object, got {other}",
                triple.predicate
            ))),
        }
    }

    // ===== lookup =====

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// All triples in canonical (sorted) order.
    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// Event-derived triples currently asserted.
    pub fn retractable_triples(&self) -> impl Iterator<Item = &Triple> {
        self.retractable.iter()
    }

    pub fn is_class(&self, resource: &Resource) -> bool {
        self.classes.contains(resource)
    }

    pub fn classes(&self) -> &BTreeSet<Resource> {
        &self.classes
    }

    pub fn individuals(&self) -> &BTreeSet<Resource> {
        &self.individuals
    }

    pub fn property_decl(&self, property: &Resource) -> Option<&PropertyDecl> {
        self.properties.get(property)
    }

    pub fn properties(&self) -> &BTreeMap<Resource, PropertyDecl> {
        &self.properties
    }

    /// Direct super-properties declared via subPropertyOf.
    pub fn property_parents(&self) -> &BTreeMap<Resource, BTreeSet<Resource>> {
        &self.property_parents
    }

    pub fn direct_parents(&self, class: &Resource) -> BTreeSet<Resource> {
        self.class_parents.get(class).cloned().unwrap_or_default()
    }

    pub fn direct_children(&self, class: &Resource) -> BTreeSet<Resource> {
        self.class_children.get(class).cloned().unwrap_or_default()
    }

    /// Number of direct subclass edges in the hierarchy.
    pub fn subclass_edge_count(&self) -> usize {
        self.class_parents.values().map(BTreeSet::len).sum()
    }

    /// The class itself plus all transitive subclasses.
    pub fn subclass_closure(&self, class: &Resource) -> Result<BTreeSet<Resource>> {
        self.closure(class, &self.class_children)
    }

    /// The class itself plus all transitive superclasses.
    pub fn superclass_closure(&self, class: &Resource) -> Result<BTreeSet<Resource>> {
        self.closure(class, &self.class_parents)
    }

    fn closure(
        &self,
        class: &Resource,
        edges: &BTreeMap<Resource, BTreeSet<Resource>>,
    ) -> Result<BTreeSet<Resource>> {
        if !self.classes.contains(class) {
            return Err(Error::UnknownClass(class.as_str().to_string()));
        }
        let mut out = BTreeSet::new();
        let mut stack = vec![class.clone()];
        while let Some(current) = stack.pop() {
            if out.insert(current.clone()) {
                stack.extend(edges.get(&current).into_iter().flatten().cloned());
            }
        }
        Ok(out)
    }

    /// Resources typed by the class, optionally including instances of its
    /// subclasses.
    pub fn instances_of(&self, class: &Resource, inherited: bool) -> Result<BTreeSet<Resource>> {
        let classes = if inherited {
            self.subclass_closure(class)?
        } else {
            if !self.classes.contains(class) {
                return Err(Error::UnknownClass(class.as_str().to_string()));
            }
            BTreeSet::from([class.clone()])
        };
        let type_pred = vocab::res(vocab::TYPE);
        let mut out = BTreeSet::new();
        for c in classes {
            for t in self.by_object.get(&Term::Resource(c)).into_iter().flatten() {
                if t.predicate == type_pred {
                    out.insert(t.subject.clone());
                }
            }
        }
        Ok(out)
    }

    /// Length in edges of the longest subclass chain.
    pub fn hierarchy_depth(&self) -> usize {
        let mut memo: BTreeMap<Resource, usize> = BTreeMap::new();
        fn depth(
            class: &Resource,
            parents: &BTreeMap<Resource, BTreeSet<Resource>>,
            memo: &mut BTreeMap<Resource, usize>,
        ) -> usize {
            if let Some(&d) = memo.get(class) {
                return d;
            }
            let d = parents
                .get(class)
                .into_iter()
                .flatten()
                .map(|p| 1 + depth(p, parents, memo))
                .max()
                .unwrap_or(0);
            memo.insert(class.clone(), d);
            d
        }
        self.classes
            .iter()
            .map(|c| depth(c, &self.class_parents, &mut memo))
            .max()
            .unwrap_or(0)
    }

    /// The occurredAt value of an event individual, when present. With
    /// several values the smallest wins, which keeps callers deterministic.
    pub fn timestamp_of(&self, event: &Resource) -> Option<i64> {
        let occurred = vocab::res(vocab::OCCURRED_AT);
        self.by_subject
            .get(event)
            .into_iter()
            .flatten()
            .filter(|t| t.predicate == occurred)
            .filter_map(|t| match &t.object {
                Term::Literal(l) => l.as_i64(),
                _ => None,
            })
            .min()
    }

    // ===== pattern matching =====

    /// Matches a pattern against the store and returns one binding set per
    /// matching triple. At most two pattern positions may be variables; a
    /// variable used twice must bind to the same term.
    pub fn match_pattern(&self, pattern: &Pattern) -> Result<Vec<Bindings>> {
        let count = pattern.variable_positions();
        if count > 2 {
            return Err(Error::TooManyVariables { pattern: pattern.to_string(), count });
        }
        let mut out: BTreeSet<Bindings> = BTreeSet::new();
        for triple in self.candidates(pattern) {
            if let Some(b) = unify(pattern, triple) {
                out.insert(b);
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Picks the most selective index for a pattern: a ground subject first,
    /// then a ground object, then the predicate. A pattern with fewer than
    /// three variables always has at least one ground position.
    fn candidates(&self, pattern: &Pattern) -> impl Iterator<Item = &Triple> {
        let set: Option<&BTreeSet<Triple>> = match (
            &pattern.subject,
            &pattern.object,
            &pattern.predicate,
        ) {
            (Term::Resource(s), _, _) => self.by_subject.get(s),
            (_, o @ (Term::Resource(_) | Term::Literal(_)), _) => self.by_object.get(o),
            (_, _, Term::Resource(p)) => self.by_predicate.get(p),
            _ => None,
        };
        set.into_iter().flatten()
    }

    // ===== text import and export =====

    /// All triples as sorted line-oriented text with a trailing newline.
    /// Equal knowledge bases export byte-identical text.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        for t in &self.triples {
            out.push_str(&t.to_line());
            out.push('\n');
        }
        out
    }

    /// Asserts every line of triple text. Blank lines and `#` comment lines
    /// are skipped. Declaration triples are asserted before the rest, so a
    /// lexicographically sorted export re-imports even when a property's
    /// declaration sorts after its first use. Returns the number of new
    /// triples.
    pub fn import_text(&mut self, text: &str) -> Result<usize> {
        let mut declarations = Vec::new();
        let mut assertions = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let triple = Triple::parse_line(line)
                .map_err(|e| Error::parse(idx + 1, e.to_string()))?;
            if vocab::STRUCTURAL_PREDICATES.contains(&triple.predicate.as_str()) {
                declarations.push((idx, triple));
            } else {
                assertions.push((idx, triple));
            }
        }
        let mut added = 0;
        for (idx, triple) in declarations.into_iter().chain(assertions) {
            if self.assert_triple(triple).map_err(|e| match e {
                Error::CycleDetected { path } => Error::CycleDetected { path },
                other => Error::parse(idx + 1, other.to_string()),
            })? {
                added += 1;
            }
        }
        Ok(added)
    }
}

fn resource_object(triple: &Triple) -> Result<Resource> {
    match &triple.object {
        Term::Resource(r) => Ok(r.clone()),
        other => Err(Error::MalformedTerm(format!(
            "{} needs a resource object, got {other}",
            triple.predicate
        ))),
    }
}

fn unify(pattern: &Pattern, triple: &Triple) -> Option<Bindings> {
    let mut bindings = Bindings::new();
    let pairs = [
        (&pattern.subject, Term::Resource(triple.subject.clone())),
        (&pattern.predicate, Term::Resource(triple.predicate.clone())),
        (&pattern.object, triple.object.clone()),
    ];
    for (slot, value) in pairs {
        match slot {
            Term::Variable(v) => match bindings.get(v) {
                Some(bound) if *bound != value => return None,
                Some(_) => {}
                None => {
                    bindings.insert(v.clone(), value);
                }
            },
            ground => {
                if *ground != value {
                    return None;
                }
            }
        }
    }
    Some(bindings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Literal, Variable};

    fn r(s: &str) -> Resource {
        Resource::new(s).unwrap()
    }

    fn seeded() -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        kb.load_core_ontology().unwrap();
        kb
    }

    #[test]
    fn core_ontology_loads_every_seed_line_once() {
        let mut kb = KnowledgeBase::new();
        let added = kb.load_core_ontology().unwrap();
        let lines = CORE_ONTOLOGY_TEXT.lines().filter(|l| !l.trim().is_empty()).count();
        assert_eq!(added, lines);
        assert_eq!(kb.len(), lines);
        assert_eq!(kb.load_core_ontology().unwrap(), 0);

        let p = Pattern::new(
            Term::Resource(r(vocab::VULNERABLE)),
            Term::Resource(r(vocab::SUB_CLASS_OF)),
            Term::Variable(Variable::new("?x").unwrap()),
        );
        assert_eq!(kb.match_pattern(&p).unwrap().len(), 1);
    }

    #[test]
    fn assert_and_match_with_one_variable_per_position() {
        let mut kb = seeded();
        kb.assert_triple(Triple::resources(r("node:s1"), r(vocab::TYPE), r(vocab::SYSTEM)))
            .unwrap();
        let t = Triple::resources(r("node:s1"), r(vocab::HAS_WEAKNESS), r("cwe:CWE-345"));
        assert!(kb.assert_triple(t.clone()).unwrap());
        assert!(!kb.assert_triple(t).unwrap());

        let p = Pattern::new(
            Term::Variable(Variable::new("?x").unwrap()),
            Term::Resource(r(vocab::HAS_WEAKNESS)),
            Term::Variable(Variable::new("?y").unwrap()),
        );
        let rows = kb.match_pattern(&p).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(
            rows[0].get(&Variable::new("?x").unwrap()),
            Some(&Term::Resource(r("node:s1")))
        );
    }

    #[test]
    fn undeclared_predicate_is_rejected() {
        let mut kb = seeded();
        let err = kb.assert_triple(Triple::resources(r("node:s1"), r("core:owns"), r("node:s2")));
        assert_eq!(err, Err(Error::UndeclaredPredicate("core:owns".into())));
    }

    #[test]
    fn property_object_kinds_are_enforced() {
        let mut kb = seeded();
        let bad = kb.assert_triple(Triple::literal(
            r("node:s1"),
            r(vocab::HAS_WEAKNESS),
            Literal::string("CWE-345"),
        ));
        assert!(matches!(bad, Err(Error::MalformedTerm(_))));
        let bad = kb.assert_triple(Triple::resources(
            r("node:s1"),
            r(vocab::DESCRIPTION),
            r("node:s2"),
        ));
        assert!(matches!(bad, Err(Error::MalformedTerm(_))));
    }

    #[test]
    fn subclass_cycle_leaves_kb_unchanged() {
        let mut kb = seeded();
        kb.assert_triple(Triple::resources(r("cwe:A"), r(vocab::SUB_CLASS_OF), r("cwe:B")))
            .unwrap();
        kb.assert_triple(Triple::resources(r("cwe:B"), r(vocab::SUB_CLASS_OF), r("cwe:C")))
            .unwrap();
        let before = kb.len();
        let err = kb.assert_triple(Triple::resources(r("cwe:C"), r(vocab::SUB_CLASS_OF), r("cwe:A")));
        match err {
            Err(Error::CycleDetected { path }) => {
                assert_eq!(path.first().map(String::as_str), Some("cwe:C"));
                assert_eq!(path.last().map(String::as_str), Some("cwe:A"));
                assert!(path.contains(&"cwe:B".to_string()));
            }
            other => panic!("expected cycle error, got {other:?}"),
        }
        assert_eq!(kb.len(), before);
        assert!(kb.subclass_closure(&r("cwe:B")).unwrap().contains(&r("cwe:A")));
        assert!(!kb.superclass_closure(&r("cwe:C")).unwrap().contains(&r("cwe:A")));
    }

    #[test]
    fn self_subclass_is_a_cycle() {
        let mut kb = seeded();
        let err =
            kb.assert_triple(Triple::resources(r("cwe:A"), r(vocab::SUB_CLASS_OF), r("cwe:A")));
        assert!(matches!(err, Err(Error::CycleDetected { .. })));
    }

    #[test]
    fn instances_respect_the_inherited_flag() {
        let mut kb = seeded();
        for (node, class) in
            [("node:s1", vocab::SYSTEM), ("node:s2", vocab::VULNERABLE), ("node:s3", vocab::UNDER_ATTACK)]
        {
            kb.assert_triple(Triple::resources(r(node), r(vocab::TYPE), r(class))).unwrap();
        }
        let direct = kb.instances_of(&r(vocab::VULNERABLE), false).unwrap();
        assert_eq!(direct, BTreeSet::from([r("node:s2")]));
        let inherited = kb.instances_of(&r(vocab::VULNERABLE), true).unwrap();
        assert_eq!(inherited, BTreeSet::from([r("node:s2"), r("node:s3")]));
        assert!(kb.instances_of(&r("core:Missing"), true).is_err());
    }

    #[test]
    fn retraction_only_touches_event_triples() {
        let mut kb = seeded();
        let event = Triple::resources(r("node:s1"), r(vocab::HAS_WEAKNESS), r("cwe:CWE-345"));
        kb.assert_retractable(event.clone()).unwrap();
        let ontology = Triple::resources(r("cwe:CWE-345"), r(vocab::TYPE), r(vocab::CLASS));
        kb.assert_triple(ontology.clone()).unwrap();

        kb.retract(&event).unwrap();
        assert!(!kb.contains(&event));
        assert!(matches!(kb.retract(&ontology), Err(Error::NotRetractable(_))));
        assert!(kb.contains(&ontology));
    }

    #[test]
    fn export_import_round_trip_is_byte_identical() {
        let mut kb = seeded();
        kb.assert_triple(Triple::resources(r("node:s1"), r(vocab::TYPE), r(vocab::SYSTEM)))
            .unwrap();
        kb.assert_triple(Triple::literal(
            r("node:s1"),
            r(vocab::DESCRIPTION),
            Literal::string("edge host"),
        ))
        .unwrap();
        let text = kb.export_text();
        let mut lines: Vec<&str> = text.lines().collect();
        let mut sorted = lines.clone();
        sorted.sort_unstable();
        assert_eq!(lines, sorted);
        lines.dedup();
        assert_eq!(lines.len(), kb.len());

        let mut back = KnowledgeBase::new();
        assert_eq!(back.import_text(&text).unwrap(), kb.len());
        assert_eq!(back.export_text(), text);
        assert_eq!(back.classes(), kb.classes());
        assert_eq!(back.properties(), kb.properties());
    }

    #[test]
    fn import_reports_line_numbers() {
        let mut kb = KnowledgeBase::new();
        let err = kb.import_text("core:A core:type core:Class .\nbroken line\n");
        assert!(matches!(err, Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn three_variable_patterns_are_rejected() {
        let kb = seeded();
        let p = Pattern::new(
            Term::Variable(Variable::new("?s").unwrap()),
            Term::Variable(Variable::new("?p").unwrap()),
            Term::Variable(Variable::new("?o").unwrap()),
        );
        assert!(matches!(
            kb.match_pattern(&p),
            Err(Error::TooManyVariables { count: 3, .. })
        ));
    }

    #[test]
    fn repeated_variables_must_agree() {
        let mut kb = seeded();
        kb.assert_triple(Triple::resources(r("node:a"), r(vocab::RELATED_TO), r("node:a")))
            .unwrap();
        kb.assert_triple(Triple::resources(r("node:a"), r(vocab::RELATED_TO), r("node:b")))
            .unwrap();
        let v = Variable::new("?x").unwrap();
        let p = Pattern::new(
            Term::Variable(v.clone()),
            Term::Resource(r(vocab::RELATED_TO)),
            Term::Variable(v.clone()),
        );
        let rows = kb.match_pattern(&p).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].get(&v), Some(&Term::Resource(r("node:a"))));
    }

    #[test]
    fn every_index_path_sees_the_same_triple() {
        let mut kb = seeded();
        let mut expected = Vec::new();
        for i in 0..6 {
            let s = r(&format!("node:s{i}"));
            kb.assert_triple(Triple::resources(s.clone(), r(vocab::TYPE), r(vocab::SYSTEM)))
                .unwrap();
            let t = Triple::resources(s, r(vocab::HAS_WEAKNESS), r(&format!("cwe:CWE-{i}")));
            kb.assert_triple(t.clone()).unwrap();
            expected.push(t);
        }
        let v = |n: &str| Term::Variable(Variable::new(n).unwrap());
        for t in expected {
            let by_subject = Pattern::new(
                Term::Resource(t.subject.clone()),
                Term::Resource(t.predicate.clone()),
                v("?o"),
            );
            let by_object = Pattern::new(
                v("?s"),
                Term::Resource(t.predicate.clone()),
                t.object.clone(),
            );
            let by_predicate =
                Pattern::new(v("?s"), Term::Resource(t.predicate.clone()), v("?o"));
            assert!(kb
                .match_pattern(&by_subject)
                .unwrap()
                .iter()
                .any(|b| b.get(&Variable::new("?o").unwrap()) == Some(&t.object)));
            assert!(kb
                .match_pattern(&by_object)
                .unwrap()
                .iter()
                .any(|b| b.get(&Variable::new("?s").unwrap())
                    == Some(&Term::Resource(t.subject.clone()))));
            assert!(kb.match_pattern(&by_predicate).unwrap().iter().any(|b| {
                b.get(&Variable::new("?s").unwrap()) == Some(&Term::Resource(t.subject.clone()))
                    && b.get(&Variable::new("?o").unwrap()) == Some(&t.object)
            }));
        }
    }

    #[test]
    fn seed_hierarchy_depth_is_five() {
        let kb = seeded();
        assert_eq!(kb.hierarchy_depth(), 5);
    }

    #[test]
    fn timestamps_come_from_occurred_at() {
        let mut kb = seeded();
        kb.assert_triple(Triple::literal(
            r("ev:e1"),
            r(vocab::OCCURRED_AT),
            Literal::timestamp(1699999999),
        ))
        .unwrap();
        assert_eq!(kb.timestamp_of(&r("ev:e1")), Some(1699999999));
        assert_eq!(kb.timestamp_of(&r("ev:e2")), None);
    }
}
