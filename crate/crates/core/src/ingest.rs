//! Catalog ingestion: normalized catalog JSON in, ontology triples and
//! attack rules out.
//!
//! Attack-pattern, weakness, and vulnerability catalogs arrive as separate
//! JSON documents. Parsing produces flat [`CatalogEntry`] lists; those are
//! merged into an [`IntermediateGraph`] whose nodes are concepts and whose
//! edges carry `is-a`, `relatedTo`, `equivalentTo`, and `partOf` labels.
//! An [`EquivalenceMap`] bridges identifiers across catalogs. After a
//! consistency check the graph is emitted into the knowledge base: every
//! concept becomes a class under its catalog's base class, and every
//! attack with resolvable weakness or vulnerability links yields one
//! detection rule (conjunction, marks `Vulnerable` and records an attack
//! marker individual) plus one prediction rule (disjunction, marks
//! `UnderPotentialAttackSystem`).
//!
//! Cross-references into records the snapshot does not contain are demoted
//! to warnings so one stale link cannot block ingestion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::rules::{Atom, Rule};
use crate::term::{Literal, Resource, Term, Triple};
use crate::vocab;

/// Which catalog a record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogKind {
    AttackPattern,
    Weakness,
    Vulnerability,
}

impl CatalogKind {
    /// Namespace prefix for resources minted from this catalog.
    pub fn prefix(self) -> &'static str {
        match self {
            CatalogKind::AttackPattern => vocab::PREFIX_CAPEC,
            CatalogKind::Weakness => vocab::PREFIX_CWE,
            CatalogKind::Vulnerability => vocab::PREFIX_CVE,
        }
    }

    /// Core-ontology class the catalog's concepts subclass.
    pub fn base_class(self) -> &'static str {
        match self {
            CatalogKind::AttackPattern => vocab::ATTACK_PATTERN,
            CatalogKind::Weakness => vocab::WEAKNESS,
            CatalogKind::Vulnerability => vocab::VULNERABILITY,
        }
    }
}

impl fmt::Display for CatalogKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CatalogKind::AttackPattern => "attack_pattern",
            CatalogKind::Weakness => "weakness",
            CatalogKind::Vulnerability => "vulnerability",
        };
        f.write_str(s)
    }
}

/// The four recognized attack-consequence categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConsequenceCategory {
    UnauthorizedDisclosure,
    Deception,
    Disruption,
    Usurpation,
}

impl ConsequenceCategory {
    pub fn class(self) -> &'static str {
        match self {
            ConsequenceCategory::UnauthorizedDisclosure => vocab::UNAUTHORIZED_DISCLOSURE,
            ConsequenceCategory::Deception => vocab::DECEPTION,
            ConsequenceCategory::Disruption => vocab::DISRUPTION,
            ConsequenceCategory::Usurpation => vocab::USURPATION,
        }
    }
}

/// One normalized catalog record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub kind: CatalogKind,
    pub id: String,
    pub name: String,
    pub description: String,
    pub parent_ids: Vec<String>,
    pub related_weakness_ids: Vec<String>,
    pub related_vulnerability_ids: Vec<String>,
    pub prerequisites: Vec<String>,
    pub steps: Vec<String>,
    pub consequences: Vec<ConsequenceCategory>,
}

#[derive(Deserialize)]
struct CatalogDocument {
    kind: CatalogKind,
    records: Vec<CatalogRecord>,
}

#[derive(Deserialize, Default)]
#[serde(default)]
struct CatalogRecord {
    id: String,
    name: String,
    description: String,
    parent_ids: Vec<String>,
    related_weakness_ids: Vec<String>,
    related_vulnerability_ids: Vec<String>,
    prerequisites: Vec<String>,
    steps: Vec<String>,
    consequences: Vec<ConsequenceCategory>,
}

/// Parses one catalog document. `kind` is the caller's expectation and must
/// match the document's own `kind` field. Record order is preserved and
/// unknown record fields are ignored.
pub fn parse_catalog(input: &str, kind: CatalogKind) -> Result<Vec<CatalogEntry>> {
    let doc: CatalogDocument = serde_json::from_str(input)
        .map_err(|e| Error::parse(e.line(), format!("catalog: {e}")))?;
    if doc.kind != kind {
        return Err(Error::parse(
            1,
            format!("catalog kind is {}, expected {}", doc.kind, kind),
        ));
    }
    let mut seen = BTreeSet::new();
    let mut entries = Vec::with_capacity(doc.records.len());
    for (index, record) in doc.records.into_iter().enumerate() {
        if record.id.is_empty() {
            return Err(Error::parse(1, format!("record {} has no id", index + 1)));
        }
        if !seen.insert(record.id.clone()) {
            return Err(Error::DuplicateId(record.id));
        }
        entries.push(CatalogEntry {
            kind,
            id: record.id,
            name: record.name,
            description: record.description,
            parent_ids: record.parent_ids,
            related_weakness_ids: record.related_weakness_ids,
            related_vulnerability_ids: record.related_vulnerability_ids,
            prerequisites: record.prerequisites,
            steps: record.steps,
            consequences: record.consequences,
        });
    }
    Ok(entries)
}

/// Identifier pairs bridging catalogs. Pairs are unordered; the symmetric
/// closure is taken when the map is applied.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
pub struct EquivalenceMap {
    pub pairs: Vec<(String, String)>,
}

/// Parses the equivalence-map JSON, `{"pairs": [["A", "B"], ...]}`.
pub fn parse_equivalences(input: &str) -> Result<EquivalenceMap> {
    serde_json::from_str(input).map_err(|e| Error::parse(e.line(), format!("equivalences: {e}")))
}

impl EquivalenceMap {
    /// Canonical unordered pairs: symmetric duplicates collapse and
    /// self-pairs drop out.
    fn canonical_pairs(&self) -> BTreeSet<(String, String)> {
        self.pairs
            .iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) })
            .collect()
    }
}

/// Node role inside the intermediate graph. Attack steps are concepts of
/// their own, linked to their attack with `partOf` edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConceptKind {
    AttackPattern,
    Weakness,
    Vulnerability,
    AttackStep,
}

impl From<CatalogKind> for ConceptKind {
    fn from(kind: CatalogKind) -> Self {
        match kind {
            CatalogKind::AttackPattern => ConceptKind::AttackPattern,
            CatalogKind::Weakness => ConceptKind::Weakness,
            CatalogKind::Vulnerability => ConceptKind::Vulnerability,
        }
    }
}

impl ConceptKind {
    fn prefix(self) -> &'static str {
        match self {
            ConceptKind::AttackPattern | ConceptKind::AttackStep => vocab::PREFIX_CAPEC,
            ConceptKind::Weakness => vocab::PREFIX_CWE,
            ConceptKind::Vulnerability => vocab::PREFIX_CVE,
        }
    }

    fn base_class(self) -> &'static str {
        match self {
            ConceptKind::AttackPattern => vocab::ATTACK_PATTERN,
            ConceptKind::Weakness => vocab::WEAKNESS,
            ConceptKind::Vulnerability => vocab::VULNERABILITY,
            ConceptKind::AttackStep => vocab::ATTACK_STEP,
        }
    }
}

/// Edge label in the intermediate graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeLabel {
    IsA,
    RelatedTo,
    EquivalentTo,
    PartOf,
}

/// Payload kept per concept node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptNode {
    pub kind: ConceptKind,
    pub name: String,
    pub description: String,
    pub prerequisites: Vec<String>,
    pub consequences: Vec<ConsequenceCategory>,
}

impl ConceptNode {
    fn new(kind: ConceptKind, name: impl Into<String>, description: impl Into<String>) -> Self {
        ConceptNode {
            kind,
            name: name.into(),
            description: description.into(),
            prerequisites: Vec::new(),
            consequences: Vec::new(),
        }
    }
}

/// The bidirectional concept graph sitting between catalogs and the
/// ontology. Concept ids are unique across kinds, so the node map is keyed
/// by id alone; duplicate ids are rejected while the graph is built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IntermediateGraph {
    nodes: BTreeMap<String, ConceptNode>,
    edges: BTreeSet<(String, String, EdgeLabel)>,
    warnings: Vec<String>,
}

impl IntermediateGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&self, id: &str) -> Option<&ConceptNode> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&str, &ConceptNode)> {
        self.nodes.iter().map(|(id, node)| (id.as_str(), node))
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, EdgeLabel)> {
        self.edges.iter().map(|(from, to, label)| (from.as_str(), to.as_str(), *label))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self, label: EdgeLabel) -> usize {
        self.edges.iter().filter(|(_, _, l)| *l == label).count()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn add_node(&mut self, id: impl Into<String>, node: ConceptNode) -> Result<()> {
        let id = id.into();
        if self.nodes.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        self.nodes.insert(id, node);
        Ok(())
    }

    /// Adds one edge. Both endpoints must already be nodes.
    pub fn add_edge(
        &mut self,
        from: impl Into<String>,
        to: impl Into<String>,
        label: EdgeLabel,
    ) -> Result<()> {
        let (from, to) = (from.into(), to.into());
        for endpoint in [&from, &to] {
            if !self.nodes.contains_key(endpoint) {
                return Err(Error::UnknownClass(endpoint.clone()));
            }
        }
        self.edges.insert((from, to, label));
        Ok(())
    }

    /// Forward neighbors under one label, sorted by id.
    pub fn neighbors_out(&self, id: &str, label: EdgeLabel) -> Vec<&str> {
        self.edges
            .iter()
            .filter(|(from, _, l)| *l == label && from == id)
            .map(|(_, to, _)| to.as_str())
            .collect()
    }

    /// Reverse neighbors under one label, sorted by id.
    pub fn neighbors_in(&self, id: &str, label: EdgeLabel) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .edges
            .iter()
            .filter(|(_, to, l)| *l == label && to == id)
            .map(|(from, _, _)| from.as_str())
            .collect();
        out.sort_unstable();
        out
    }

    /// Neighbors in either direction; `equivalentTo` edges are stored once
    /// but traversable both ways through this accessor.
    pub fn neighbors(&self, id: &str, label: EdgeLabel) -> Vec<&str> {
        let mut out = self.neighbors_out(id, label);
        out.extend(self.neighbors_in(id, label));
        out.sort_unstable();
        out.dedup();
        out
    }

    fn warn(&mut self, message: String) {
        self.warnings.push(message);
    }

    /// Searches the `is-a` subgraph for a cycle and returns one as a node
    /// path whose first and last elements coincide.
    fn find_is_a_cycle(&self) -> Option<Vec<String>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Gray,
            Black,
        }
        let mut color: BTreeMap<&str, Color> =
            self.nodes.keys().map(|id| (id.as_str(), Color::White)).collect();
        let mut trail: Vec<&str> = Vec::new();

        fn visit<'a>(
            graph: &'a IntermediateGraph,
            id: &'a str,
            color: &mut BTreeMap<&'a str, Color>,
            trail: &mut Vec<&'a str>,
        ) -> Option<Vec<String>> {
            color.insert(id, Color::Gray);
            trail.push(id);
            for next in graph.neighbors_out(id, EdgeLabel::IsA) {
                match color.get(next).copied().unwrap_or(Color::White) {
                    Color::Gray => {
                        let start = trail.iter().position(|n| *n == next).unwrap_or(0);
                        let mut cycle: Vec<String> =
                            trail[start..].iter().map(|s| s.to_string()).collect();
                        cycle.push(next.to_string());
                        return Some(cycle);
                    }
                    Color::White => {
                        if let Some(cycle) = visit(graph, next, color, trail) {
                            return Some(cycle);
                        }
                    }
                    Color::Black => {}
                }
            }
            trail.pop();
            color.insert(id, Color::Black);
            None
        }

        let ids: Vec<&str> = self.nodes.keys().map(|s| s.as_str()).collect();
        for id in ids {
            if color[id] == Color::White {
                if let Some(cycle) = visit(self, id, &mut color, &mut trail) {
                    return Some(cycle);
                }
            }
        }
        None
    }
}

/// Merges parsed entries of every kind into one graph. Hierarchy links stay
/// within a kind; weakness and vulnerability links cross kinds. References
/// to absent records become warnings instead of edges.
pub fn build_graph(entries: &[CatalogEntry]) -> Result<IntermediateGraph> {
    let mut graph = IntermediateGraph::new();
    let mut by_kind: BTreeMap<CatalogKind, BTreeSet<&str>> = BTreeMap::new();
    for entry in entries {
        graph.add_node(
            entry.id.clone(),
            ConceptNode {
                kind: entry.kind.into(),
                name: entry.name.clone(),
                description: entry.description.clone(),
                prerequisites: entry.prerequisites.clone(),
                consequences: entry.consequences.clone(),
            },
        )?;
        by_kind.entry(entry.kind).or_default().insert(&entry.id);
        for (index, step) in entry.steps.iter().enumerate() {
            let step_id = format!("{}-step-{}", entry.id, index + 1);
            graph.add_node(
                step_id,
                ConceptNode::new(
                    ConceptKind::AttackStep,
                    format!("{} step {}", entry.id, index + 1),
                    step.clone(),
                ),
            )?;
        }
    }

    for entry in entries {
        for (index, _) in entry.steps.iter().enumerate() {
            let step_id = format!("{}-step-{}", entry.id, index + 1);
            graph.add_edge(step_id, entry.id.clone(), EdgeLabel::PartOf)?;
        }
        let same_kind = &by_kind[&entry.kind];
        for parent in &entry.parent_ids {
            if same_kind.contains(parent.as_str()) {
                graph.add_edge(entry.id.clone(), parent.clone(), EdgeLabel::IsA)?;
            } else {
                graph.warn(format!("{}: unresolved parent {}", entry.id, parent));
            }
        }
        let weaknesses = by_kind.get(&CatalogKind::Weakness);
        for weakness in &entry.related_weakness_ids {
            if weaknesses.is_some_and(|ids| ids.contains(weakness.as_str())) {
                graph.add_edge(entry.id.clone(), weakness.clone(), EdgeLabel::RelatedTo)?;
            } else {
                graph.warn(format!("{}: unresolved weakness {}", entry.id, weakness));
            }
        }
        let vulnerabilities = by_kind.get(&CatalogKind::Vulnerability);
        for vulnerability in &entry.related_vulnerability_ids {
            if vulnerabilities.is_some_and(|ids| ids.contains(vulnerability.as_str())) {
                graph.add_edge(entry.id.clone(), vulnerability.clone(), EdgeLabel::RelatedTo)?;
            } else {
                graph.warn(format!("{}: unresolved vulnerability {}", entry.id, vulnerability));
            }
        }
    }

    if let Some(path) = graph.find_is_a_cycle() {
        return Err(Error::CycleDetected { path });
    }
    Ok(graph)
}

/// Adds one `equivalentTo` edge per pair whose endpoints both exist; other
/// pairs are recorded as warnings and skipped.
pub fn apply_equivalences(mut graph: IntermediateGraph, map: &EquivalenceMap) -> IntermediateGraph {
    for (a, b) in map.canonical_pairs() {
        if graph.node(&a).is_some() && graph.node(&b).is_some() {
            graph
                .add_edge(a, b, EdgeLabel::EquivalentTo)
                .expect("endpoints checked before adding the edge");
        } else {
            graph.warn(format!("equivalence {a} = {b}: unresolved endpoint"));
        }
    }
    graph
}

/// Findings from [`check_consistency`]. Errors block emission; warnings do
/// not.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Scans the graph without modifying it: hierarchy cycles are errors,
/// unresolved references (carried on the graph) and empty concept names are
/// warnings. Duplicate ids cannot survive graph construction, so they
/// surface earlier as hard errors.
pub fn check_consistency(graph: &IntermediateGraph) -> ConsistencyReport {
    let mut report = ConsistencyReport::default();
    if let Some(path) = graph.find_is_a_cycle() {
        report.errors.push(format!("hierarchy cycle: {}", path.join(" -> ")));
    }
    report.warnings.extend(graph.warnings().iter().cloned());
    for (id, node) in graph.nodes() {
        if node.name.is_empty() {
            report.warnings.push(format!("{id}: empty name"));
        }
    }
    report
}

fn concept_resource(id: &str, kind: ConceptKind) -> Result<Resource> {
    Resource::new(format!("{}:{}", kind.prefix(), id))
}

/// Writes the graph into the knowledge base and returns how many triples
/// were new. The core ontology is loaded first (idempotent), but only
/// graph-derived triples count toward the result. Concepts become classes;
/// hierarchy roots attach to their catalog's base class so every concept
/// sits under it transitively.
pub fn emit_ontology(graph: &IntermediateGraph, kb: &mut KnowledgeBase) -> Result<usize> {
    let report = check_consistency(graph);
    if !report.is_consistent() {
        return Err(Error::InconsistentGraph(report.errors.join("; ")));
    }
    kb.load_core_ontology()?;

    let mut new = 0;
    let mut assert = |kb: &mut KnowledgeBase, triple: Triple| -> Result<()> {
        if kb.assert_triple(triple)? {
            new += 1;
        }
        Ok(())
    };

    for (id, node) in graph.nodes() {
        let res = concept_resource(id, node.kind)?;
        assert(kb, Triple::resources(res.clone(), vocab::res(vocab::TYPE), vocab::res(vocab::CLASS)))?;
        if graph.neighbors_out(id, EdgeLabel::IsA).is_empty() {
            assert(
                kb,
                Triple::resources(
                    res.clone(),
                    vocab::res(vocab::SUB_CLASS_OF),
                    vocab::res(node.kind.base_class()),
                ),
            )?;
        }
        if !node.name.is_empty() {
            assert(
                kb,
                Triple::literal(res.clone(), vocab::res(vocab::NAME), Literal::string(&node.name)),
            )?;
        }
        if !node.description.is_empty() {
            assert(
                kb,
                Triple::literal(
                    res.clone(),
                    vocab::res(vocab::DESCRIPTION),
                    Literal::string(&node.description),
                ),
            )?;
        }
        for prerequisite in &node.prerequisites {
            assert(
                kb,
                Triple::literal(
                    res.clone(),
                    vocab::res(vocab::PREREQUISITE),
                    Literal::string(prerequisite),
                ),
            )?;
        }
        for consequence in &node.consequences {
            assert(
                kb,
                Triple::resources(
                    res.clone(),
                    vocab::res(vocab::HAS_CONSEQUENCE),
                    vocab::res(consequence.class()),
                ),
            )?;
        }
    }

    for (from, to, label) in graph.edges() {
        let from_res = concept_resource(from, graph.node(from).expect("edge endpoint").kind)?;
        let to_res = concept_resource(to, graph.node(to).expect("edge endpoint").kind)?;
        let triple = match label {
            EdgeLabel::IsA => {
                Triple::resources(from_res, vocab::res(vocab::SUB_CLASS_OF), to_res)
            }
            EdgeLabel::RelatedTo => {
                Triple::resources(from_res, vocab::res(vocab::RELATED_TO), to_res)
            }
            EdgeLabel::PartOf => Triple::resources(from_res, vocab::res(vocab::PART_OF), to_res),
            EdgeLabel::EquivalentTo => {
                let (s, o) = if from_res <= to_res { (from_res, to_res) } else { (to_res, from_res) };
                Triple::resources(s, vocab::res(vocab::EQUIVALENT_TO), o)
            }
        };
        assert(kb, triple)?;
    }
    Ok(new)
}

/// Attack rules produced from one graph, plus warnings for attacks that
/// could not yield any.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GeneratedRules {
    pub rules: Vec<Rule>,
    pub warnings: Vec<String>,
}

/// The marker individual a detection rule asserts for an attack class.
pub fn attack_marker(attack: &Resource) -> Resource {
    Resource::new(format!("{}-incident", attack.as_str())).expect("marker id stays well-formed")
}

fn issue_rules(
    attack: &Resource,
    tag: &str,
    id: &str,
    property: &str,
    issues: &[Resource],
    out: &mut Vec<Rule>,
) -> Result<()> {
    let s = Term::parse("?s").expect("static variable");
    let system = Atom::Class { class: vocab::res(vocab::SYSTEM), term: s.clone() };
    let issue_atoms: Vec<Atom> = issues
        .iter()
        .map(|issue| Atom::Property {
            property: vocab::res(property),
            subject: s.clone(),
            object: Term::Resource(issue.clone()),
        })
        .collect();
    let marker = attack_marker(attack);

    let mut detect_body = vec![system.clone()];
    detect_body.extend(issue_atoms.iter().cloned());
    out.push(Rule::new(
        format!("detect-{tag}-{id}"),
        detect_body,
        None,
        vec![
            Atom::Class { class: vocab::res(vocab::VULNERABLE), term: s.clone() },
            Atom::Class { class: attack.clone(), term: Term::Resource(marker.clone()) },
            Atom::Property {
                property: vocab::res(vocab::TARGETS),
                subject: Term::Resource(marker),
                object: s.clone(),
            },
        ],
    )?);
    out.push(Rule::new(
        format!("predict-{tag}-{id}"),
        vec![system],
        Some(issue_atoms),
        vec![Atom::Class { class: vocab::res(vocab::UNDER_POTENTIAL_ATTACK), term: s }],
    )?);
    Ok(())
}

/// Derives detection and prediction rules for every attack pattern with at
/// least one resolvable weakness or vulnerability link.
pub fn generate_attack_rules(graph: &IntermediateGraph) -> Result<GeneratedRules> {
    let report = check_consistency(graph);
    if !report.is_consistent() {
        return Err(Error::InconsistentGraph(report.errors.join("; ")));
    }
    let mut generated = GeneratedRules::default();
    for (id, node) in graph.nodes() {
        if node.kind != ConceptKind::AttackPattern {
            continue;
        }
        let attack = concept_resource(id, node.kind)?;
        let mut weaknesses = Vec::new();
        let mut vulnerabilities = Vec::new();
        for linked in graph.neighbors_out(id, EdgeLabel::RelatedTo) {
            let target = graph.node(linked).expect("edge endpoint");
            match target.kind {
                ConceptKind::Weakness => weaknesses.push(concept_resource(linked, target.kind)?),
                ConceptKind::Vulnerability => {
                    vulnerabilities.push(concept_resource(linked, target.kind)?)
                }
                _ => {}
            }
        }
        if weaknesses.is_empty() && vulnerabilities.is_empty() {
            generated.warnings.push(format!("{id}: no resolvable links, no rules generated"));
            continue;
        }
        if !weaknesses.is_empty() {
            issue_rules(&attack, "w", id, vocab::HAS_WEAKNESS, &weaknesses, &mut generated.rules)?;
        }
        if !vulnerabilities.is_empty() {
            issue_rules(
                &attack,
                "v",
                id,
                vocab::HAS_VULNERABILITY,
                &vulnerabilities,
                &mut generated.rules,
            )?;
        }
    }
    Ok(generated)
}
